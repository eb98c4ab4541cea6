#ifndef AMBIENTFORGE_GEOMETRY_HPP
#define AMBIENTFORGE_GEOMETRY_HPP

#include "ambientforge/ratexpr.hpp"
#include "ambientforge/series.hpp"

#include <functional>
#include <vector>

namespace af {

inline RatExpr scale(const RatExpr& s, const Rational& q) { return s * RatExpr::constant(q); }
inline RhoSeries scale(const RhoSeries& s, const Rational& q) { return s.scaled(q); }
inline bool exact_zero(const RatExpr& s) { return s.is_zero(); }
inline bool exact_zero(const RhoSeries& s) { return s.is_exact_zero(); }

// One curvature engine for every setting in the library: coordinate frames
// (structure empty) and anholonomic frames (structure functions r^k_ij of the
// bracket [e_i,e_j] = r^k_ij e_k), over exact rational functions or over
// rho-series. `deriv` is the directional derivative along direction i.
template <class S>
struct GeomContext {
    int dim = 0;
    std::function<S(const S&, int)> deriv;
    std::vector<S> structure;  // empty, or dim^3 laid out [k][i][j]

    bool framed() const { return !structure.empty(); }
    const S& r(int k, int i, int j) const { return structure[(k * dim + i) * dim + j]; }
    S d(const S& s, int i) const { return exact_zero(s) ? S{} : deriv(s, i); }
};

inline int ix2(int n, int i, int j) { return i * n + j; }
inline int ix3(int n, int i, int j, int k) { return (i * n + j) * n + k; }
inline int ix4(int n, int i, int j, int k, int l) { return ((i * n + j) * n + k) * n + l; }

// Connection coefficients via the Koszul formula with bracket terms,
// Gamma^k_ij stored at [k][i][j]. `g` and `ginv` are dim x dim, row-major.
template <class S>
std::vector<S> engine_christoffel(const GeomContext<S>& ctx, const std::vector<S>& g,
                                  const std::vector<S>& ginv) {
    const int n = ctx.dim;
    std::vector<S> dg(n * n * n);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                dg[ix3(n, m, i, j)] = ctx.d(g[ix2(n, i, j)], m);
                if (j != i) dg[ix3(n, m, j, i)] = dg[ix3(n, m, i, j)];
            }
    // Gamma_{l,ij} is symmetric in (i,j) only for coordinate frames; with
    // structure functions the torsion-free condition instead reads
    // Gamma^k_ij - Gamma^k_ji = r^k_ij.
    std::vector<S> low(n * n * n);  // Gamma_{l,ij}
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = ctx.framed() ? 0 : i; j < n; ++j) {
                S v = dg[ix3(n, i, j, l)] + dg[ix3(n, j, i, l)] - dg[ix3(n, l, i, j)];
                if (ctx.framed()) {
                    for (int m = 0; m < n; ++m) {
                        if (!exact_zero(ctx.r(m, i, j))) v += ctx.r(m, i, j) * g[ix2(n, m, l)];
                        if (!exact_zero(ctx.r(m, i, l))) v -= ctx.r(m, i, l) * g[ix2(n, m, j)];
                        if (!exact_zero(ctx.r(m, j, l))) v -= ctx.r(m, j, l) * g[ix2(n, m, i)];
                    }
                }
                v = scale(v, Rational(1, 2));
                if (!ctx.framed() && j != i) low[ix3(n, l, j, i)] = v;
                low[ix3(n, l, i, j)] = std::move(v);
            }
    std::vector<S> gamma(n * n * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = ctx.framed() ? 0 : i; j < n; ++j) {
                S v{};
                for (int l = 0; l < n; ++l) {
                    if (exact_zero(ginv[ix2(n, k, l)]) || exact_zero(low[ix3(n, l, i, j)]))
                        continue;
                    v += ginv[ix2(n, k, l)] * low[ix3(n, l, i, j)];
                }
                if (!ctx.framed() && j != i) gamma[ix3(n, k, j, i)] = v;
                gamma[ix3(n, k, i, j)] = std::move(v);
            }
    return gamma;
}

// Curvature with the sign convention R_{ijk}^{~~~l} v_l = 2 nabla_[i nabla_j] v_k:
// R_{ijk}^l = -d_i Gamma^l_jk + d_j Gamma^l_ik
//             + Gamma^p_ik Gamma^l_jp - Gamma^p_jk Gamma^l_ip + r^p_ij Gamma^l_pk.
template <class S>
std::vector<S> engine_riemann_ud(const GeomContext<S>& ctx, const std::vector<S>& gamma) {
    const int n = ctx.dim;
    std::vector<S> R(n * n * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    S v = ctx.d(gamma[ix3(n, l, i, k)], j) - ctx.d(gamma[ix3(n, l, j, k)], i);
                    for (int p = 0; p < n; ++p) {
                        if (!exact_zero(gamma[ix3(n, p, i, k)]) &&
                            !exact_zero(gamma[ix3(n, l, j, p)]))
                            v += gamma[ix3(n, p, i, k)] * gamma[ix3(n, l, j, p)];
                        if (!exact_zero(gamma[ix3(n, p, j, k)]) &&
                            !exact_zero(gamma[ix3(n, l, i, p)]))
                            v -= gamma[ix3(n, p, j, k)] * gamma[ix3(n, l, i, p)];
                        if (ctx.framed() && !exact_zero(ctx.r(p, i, j)) &&
                            !exact_zero(gamma[ix3(n, l, p, k)]))
                            v += ctx.r(p, i, j) * gamma[ix3(n, l, p, k)];
                    }
                    R[ix4(n, i, j, k, l)] = v;
                    R[ix4(n, j, i, k, l)] = -std::move(v);
                }
    return R;
}

// Ricci directly from the connection: Ric_ij = R_{ikj}^{~~~k}.
template <class S>
std::vector<S> engine_ricci(const GeomContext<S>& ctx, const std::vector<S>& gamma) {
    const int n = ctx.dim;
    std::vector<S> tr(n);  // Gamma^k_kj
    for (int j = 0; j < n; ++j) {
        S v{};
        for (int k = 0; k < n; ++k) v += gamma[ix3(n, k, k, j)];
        tr[j] = std::move(v);
    }
    std::vector<S> ric(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S v = S{} - ctx.d(tr[j], i);
            for (int k = 0; k < n; ++k) {
                v += ctx.d(gamma[ix3(n, k, i, j)], k);
                if (!exact_zero(gamma[ix3(n, k, i, j)]) && !exact_zero(tr[k]))
                    v += gamma[ix3(n, k, i, j)] * tr[k];
                for (int p = 0; p < n; ++p) {
                    if (!exact_zero(gamma[ix3(n, p, k, j)]) &&
                        !exact_zero(gamma[ix3(n, k, i, p)]))
                        v -= gamma[ix3(n, p, k, j)] * gamma[ix3(n, k, i, p)];
                    if (ctx.framed() && !exact_zero(ctx.r(p, i, k)) &&
                        !exact_zero(gamma[ix3(n, k, p, j)]))
                        v += ctx.r(p, i, k) * gamma[ix3(n, k, p, j)];
                }
            }
            ric[ix2(n, i, j)] = std::move(v);
        }
    return ric;
}

}  // namespace af

#endif
