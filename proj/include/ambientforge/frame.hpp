#ifndef AMBIENTFORGE_FRAME_HPP
#define AMBIENTFORGE_FRAME_HPP

#include "ambientforge/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace af {

// Anholonomic frame adapted to a totally null distribution N of rank p:
// e_1..e_p span N, e_1..e_{n-p} span K = N-perp, and the frame metric has
// the constant block form 2 g_{a cbar} Theta^a Theta^cbar + g_{AB} Theta^A
// Theta^B. Structure functions r^k_ij give [e_i, e_j] = r^k_ij e_k.
//
// Index blocks (0-based): a in [0, p), A in [p, n-p), abar in [n-p, n).
class FrameData {
  public:
    FrameData(int n, int p, std::vector<Rational> g_null, std::vector<Rational> g_mid,
              std::vector<Expr> structure);

    int n() const { return n_; }
    int p() const { return p_; }
    int mid() const { return n_ - 2 * p_; }
    bool is_a(int i) const { return i < p_; }
    bool is_mid(int i) const { return i >= p_ && i < n_ - p_; }
    bool is_bar(int i) const { return i >= n_ - p_; }

    const Expr& r(int k, int i, int j) const { return structure_[(k * n_ + i) * n_ + j]; }
    bool constant_structure() const;

    // Frame metric as an n x n matrix (constant entries).
    const std::vector<RatExpr>& metric() const { return g_; }
    const std::vector<RatExpr>& metric_inverse() const;

    // Attach a coordinate realization e_i = sum_j E[i][j] d/dx_j; required
    // for directional derivatives of non-constant data.
    void set_realization(std::vector<std::string> coords, std::vector<RatExpr> frame_in_coords);
    bool has_realization() const { return !coords_.empty(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<RatExpr>& realization() const { return realization_; }

    // e_i(f); zero for constants, realization-backed otherwise.
    RatExpr dir_deriv(const RatExpr& f, int i) const;
    GeomContext<RatExpr> context() const;

  private:
    int n_, p_;
    std::vector<Expr> structure_;
    std::vector<RatExpr> g_;
    mutable std::vector<RatExpr> ginv_;
    std::vector<std::string> coords_;
    std::vector<RatExpr> realization_;
};

// Connection coefficients Gamma^k_ij of the frame metric,
// Gamma^k_ij = 1/2 r^k_ij + g^{kl} r^m_{l(i} g_{j)m}.
TensorField frame_connection(const FrameData& f);
// Curvature (lowered) and Ricci in the frame, same conventions as `tensor`.
TensorField frame_curvature(const FrameData& f);
TensorField frame_ricci(const FrameData& f);
RatExpr frame_scalar(const FrameData& f);
TensorField frame_schouten(const FrameData& f);

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string witness;  // offending component, when failing
};

struct WalkerFrameReport {
    std::vector<CheckItem> checks;
    bool pass() const;
};
// The bracket conditions making span(e_1..e_p) a parallel null distribution.
WalkerFrameReport walker_frame_check(const FrameData& f);

struct NrwReport {
    bool w1 = false;           // Walker bracket relations
    bool w5 = false;           // r^C_AB = 0
    bool dr1 = false, dr2 = false;
    bool ricci_null_block = false;  // R_b,cbar vanishes
    bool curvature_conclusions = false;  // R_ABCi = R_{abar b D cbar} = 0, R_Ai = 0
    std::vector<CheckItem> checks;
    bool null_ricci_walker() const;
};
// Precondition: w1 (throws a MathError naming the offending r otherwise).
NrwReport nrw_conditions(const FrameData& f);

struct WalkerCoordReport {
    bool block_form = false;       // Walker coordinate shape
    bool parallel = false;         // nabla X d_a stays in N
    bool ricci_image_in_null = false;
    bool ricci_nilpotent = false;
    std::vector<CheckItem> checks;
    bool walker() const { return block_form && parallel; }
    bool null_ricci_walker() const { return parallel && ricci_image_in_null; }
};
// Structural check of the Walker block form in the given coordinates plus a
// connection-level parallelism check (runs even if the block form fails).
WalkerCoordReport walker_check_coordinates(const Metric& g, int p);

struct NullContractionReport {
    bool contraction_vanishes = false;  // X -| R = 0 for all X in N
    bool rank_one_block = false;        // the R_{abar b d cbar} family of rank-1 lemma
    std::string witness;
};
NullContractionReport curvature_null_contraction(const Metric& g, int p);
NullContractionReport curvature_null_contraction(const FrameData& f);

// Does g0^{-1} T map everything into span of the first p directions?
bool image_in_null_block(const std::vector<RatExpr>& ginv, const TensorField& t, int p);

// Two-step nilpotent algebra k = z + m extended by h acting through
// derivations phi: structure constants of g = h |x_phi k.
struct SemidirectAlgebra {
    int p = 0;  // dim h = dim z
    int q = 0;  // dim k
    // [e_A, e_B] = r^c_AB e_c; A,B index m (size q-p), c indexes z (size p).
    std::vector<Rational> bracket_mm;  // [c][A][B], p*(q-p)*(q-p)
    // structure constants of h: [e_abar, e_bbar] = r^cbar e_cbar
    std::vector<Rational> bracket_h;  // [c][a][b], p^3
    // phi(e_abar) on z and on m (m-part splits into z- and m-components)
    std::vector<Rational> phi_z;   // [abar][d][b]     p*p*p
    std::vector<Rational> phi_mz;  // [abar][d][B]     p*p*(q-p)
    std::vector<Rational> phi_mm;  // [abar][E][B]     p*(q-p)*(q-p)
    // frame metric blocks
    std::vector<Rational> g_null;  // p*p, g(e_a, e_cbar)
    std::vector<Rational> g_mid;   // (q-p)^2
};

// Assembles and validates the algebra (antisymmetry is built in; Jacobi is
// checked on every triple and failures are reported by identity family:
// derivation condition, homomorphism conditions, nilpotency).
FrameData build_semidirect(const SemidirectAlgebra& s);

// Left-invariant realization in exponential coordinates of the second kind;
// the structure constants must generate a nilpotent algebra (polynomial
// coefficients). Returns the coordinate metric and attaches the realization
// to a copy of the frame.
std::pair<Metric, FrameData> realize_left_invariant(const FrameData& f,
                                                    const std::string& coord_prefix = "w");

}  // namespace af

#endif
