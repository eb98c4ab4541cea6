#ifndef AMBIENTFORGE_TENSOR_HPP
#define AMBIENTFORGE_TENSOR_HPP

#include "ambientforge/geometry.hpp"

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace af {

// Dense symbolic tensor with declared slot variances over n coordinate (or
// frame) directions. Components are exact rational functions.
class TensorField {
  public:
    TensorField() = default;
    TensorField(int n, std::vector<bool> upper_slots);

    int n() const { return n_; }
    int rank() const { return (int)upper_.size(); }
    const std::vector<bool>& variance() const { return upper_; }
    size_t size() const { return c_.size(); }

    RatExpr& at(std::initializer_list<int> idx) { return c_[flat(idx)]; }
    const RatExpr& at(std::initializer_list<int> idx) const { return c_[flat(idx)]; }
    RatExpr& operator[](size_t f) { return c_[f]; }
    const RatExpr& operator[](size_t f) const { return c_[f]; }

    bool is_zero() const;
    bool operator==(const TensorField& o) const;
    TensorField operator-() const;
    friend TensorField operator+(TensorField a, const TensorField& b);
    friend TensorField operator-(TensorField a, const TensorField& b);
    TensorField scaled(const RatExpr& f) const;
    TensorField scaled(const Rational& q) const;

    bool symmetric_in(int s1, int s2) const;
    bool antisymmetric_in(int s1, int s2) const;

    size_t flat(std::initializer_list<int> idx) const;

  private:
    int n_ = 0;
    std::vector<bool> upper_;
    std::vector<RatExpr> c_;
};

// Pseudo-Riemannian metric in coordinates. The determinant must not vanish
// identically (pointwise degeneracy on a subset is fine and not detected).
class Metric {
  public:
    Metric(std::vector<std::string> coords, std::vector<RatExpr> components);
    static Metric diagonal(std::vector<std::string> coords, std::vector<RatExpr> diag);
    static Metric flat(std::vector<std::string> coords, std::vector<int> signs = {});

    int n() const { return n_; }
    const std::vector<std::string>& coords() const { return coords_; }
    int coord_index(const std::string& name) const;
    const RatExpr& at(int i, int j) const { return g_[i * n_ + j]; }
    const std::vector<RatExpr>& components() const { return g_; }
    const std::vector<RatExpr>& inverse_components() const;
    const RatExpr& det() const { return det_; }

    GeomContext<RatExpr> context() const;
    TensorField as_tensor() const;

  private:
    int n_;
    std::vector<std::string> coords_;
    std::vector<RatExpr> g_;
    RatExpr det_;
    mutable std::vector<RatExpr> inv_;  // filled lazily
};

// Determinant and (adjugate-based) inverse of a dense matrix of rational
// functions; Laplace expansion with zero-skipping, fine at desk dimensions.
RatExpr matrix_det(const std::vector<RatExpr>& m, int n);
std::vector<RatExpr> matrix_inverse(const std::vector<RatExpr>& m, int n, const RatExpr& det);

// Curvature suite. Index conventions (also in README):
//   Gamma^k_ij at [k][i][j];
//   R_{ijk}^{~~~l} defined by 2 nabla_[i nabla_j] v_k = R_{ijk}^{~~~l} v_l, at [i][j][k][l];
//   R_{ijkl} = R_{ijk}^{~~~m} g_{ml}; Ric_ij = R_{ikj}^{~~~k}.
TensorField inverse_metric(const Metric& g);
TensorField christoffel(const Metric& g);
TensorField riemann_ud(const Metric& g);
TensorField riemann(const Metric& g);  // fully lowered
TensorField ricci(const Metric& g);
RatExpr scalar_curvature(const Metric& g);
TensorField schouten(const Metric& g);
TensorField cotton(const Metric& g);                      // A_ijk = D_j P_ki - D_k P_ji
TensorField weyl(const Metric& g);                        // R - Schouten (x) g (Kulkarni-Nomizu)
TensorField bach(const Metric& g);                        // D^k A_ikj - P^kl W_kijl (see bach() note)

// Covariant derivative; the new (covariant) derivative slot comes first:
// (DT)_{m i1...} = nabla_m T_{i1...}.
TensorField covariant_derivative(const Metric& g, const TensorField& t);
// g^{kl} nabla_k nabla_l T
TensorField box(const Metric& g, const TensorField& t);
// nabla^k T_{k i2...}: derivative slot contracted with the first slot.
TensorField divergence(const Metric& g, const TensorField& t);
// Lie derivative along a (1,0) vector field.
TensorField lie_derivative(const TensorField& x, const TensorField& t,
                           const std::vector<std::string>& coords);
RatExpr trace(const Metric& g, const TensorField& t);  // (0,2) tensors

// Difference tensor of the paper's two-metric calculus (note its sign:
// nabla_i X_j - nabla0_i X_j = C^k_ij X_k on one-forms):
//   C^k_ij = 1/2 g^{kl} (nabla0_l g_ij - nabla0_i g_jl - nabla0_j g_il).
TensorField connection_difference(const Metric& g, const Metric& g0);
// Ricci of the metric behind C from data of g0 alone:
//   R_ij = R0_ij + nabla0_i C^k_kj - nabla0_k C^k_ij + C^p_ij C^k_kp - C^p_jk C^k_ip.
TensorField relative_ricci(const Metric& g0, const TensorField& c);

struct NilpotencyReport {
    bool trace_free = false;
    bool square_zero = false;        // (h-sharp)^2 = 0
    bool image_totally_null = false; // h g^-1 h = 0
    bool scalar_flat = false;        // meaningful when h is a Ricci tensor
    std::string witness;             // first violated component, if any
    bool nilpotent() const { return trace_free && square_zero && image_totally_null; }
};
NilpotencyReport nilpotency_report(const Metric& g0, const TensorField& h);

}  // namespace af

#endif
