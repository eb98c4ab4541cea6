#include "ambientforge/frame.hpp"

#include <algorithm>

namespace af {

namespace {

std::string rname(int k, int i, int j) {
    return "r^" + std::to_string(k + 1) + "_{" + std::to_string(i + 1) + "," +
           std::to_string(j + 1) + "}";
}

}  // namespace

FrameData::FrameData(int n, int p, std::vector<Rational> g_null, std::vector<Rational> g_mid,
                     std::vector<Expr> structure)
    : n_(n), p_(p), structure_(std::move(structure)) {
    const int m = n - 2 * p;
    if (p <= 0 || m < 0) throw MathError("FrameData: need 0 < p <= n/2");
    if ((int)g_null.size() != p * p || (int)g_mid.size() != m * m)
        throw MathError("FrameData: metric block sizes");
    if ((int)structure_.size() != n * n * n) throw MathError("FrameData: structure size");
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                if (structure_[(k * n + i) * n + j] != -structure_[(k * n + j) * n + i])
                    throw MathError("FrameData: structure functions not antisymmetric at " +
                                    rname(k, i, j));
    g_.assign(n * n, RatExpr());
    for (int a = 0; a < p; ++a)
        for (int c = 0; c < p; ++c) {
            RatExpr v = RatExpr::constant(g_null[a * p + c]);
            g_[a * n_ + (n_ - p_ + c)] = v;
            g_[(n_ - p_ + c) * n_ + a] = v;
        }
    for (int A = 0; A < m; ++A)
        for (int B = 0; B < m; ++B) g_[(p + A) * n_ + (p + B)] = RatExpr::constant(g_mid[A * m + B]);
    for (int A = 0; A < m; ++A)
        for (int B = 0; B < A; ++B)
            if (!(g_[(p + A) * n_ + (p + B)] == g_[(p + B) * n_ + (p + A)]))
                throw MathError("FrameData: g_AB block not symmetric");
    if (matrix_det(g_, n_).is_zero()) throw MathError("FrameData: degenerate frame metric");
}

bool FrameData::constant_structure() const {
    return std::all_of(structure_.begin(), structure_.end(),
                       [](const Expr& e) { return e.is_constant(); });
}

const std::vector<RatExpr>& FrameData::metric_inverse() const {
    if (ginv_.empty()) ginv_ = matrix_inverse(g_, n_, matrix_det(g_, n_));
    return ginv_;
}

void FrameData::set_realization(std::vector<std::string> coords,
                                std::vector<RatExpr> frame_in_coords) {
    if ((int)coords.size() != n_ || (int)frame_in_coords.size() != n_ * n_)
        throw MathError("FrameData: realization shape");
    coords_ = std::move(coords);
    realization_ = std::move(frame_in_coords);
}

RatExpr FrameData::dir_deriv(const RatExpr& f, int i) const {
    if (f.is_constant()) return RatExpr();
    if (!has_realization())
        throw MathError("FrameData: directional derivative of non-constant data needs a "
                        "coordinate realization");
    RatExpr v;
    for (int j = 0; j < n_; ++j) {
        const RatExpr& e = realization_[i * n_ + j];
        if (e.is_zero()) continue;
        RatExpr df = f.diff(coords_[j]);
        if (!df.is_zero()) v += e * df;
    }
    return v;
}

GeomContext<RatExpr> FrameData::context() const {
    GeomContext<RatExpr> ctx;
    ctx.dim = n_;
    const FrameData* self = this;
    ctx.deriv = [self](const RatExpr& f, int i) { return self->dir_deriv(f, i); };
    ctx.structure.resize(n_ * n_ * n_);
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                ctx.structure[(k * n_ + i) * n_ + j] = RatExpr(r(k, i, j));
    return ctx;
}

TensorField frame_connection(const FrameData& f) {
    auto gam = engine_christoffel(f.context(), f.metric(), f.metric_inverse());
    TensorField t(f.n(), {true, false, false});
    for (size_t i = 0; i < gam.size(); ++i) t[i] = std::move(gam[i]);
    return t;
}

TensorField frame_curvature(const FrameData& f) {
    const int n = f.n();
    auto ctx = f.context();
    auto gam = engine_christoffel(ctx, f.metric(), f.metric_inverse());
    auto up = engine_riemann_ud(ctx, gam);
    TensorField t(n, {false, false, false, false});
    const auto& g = f.metric();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    RatExpr v;
                    for (int m = 0; m < n; ++m) {
                        const RatExpr& r = up[ix4(n, i, j, k, m)];
                        if (!r.is_zero() && !g[m * n + l].is_zero()) v += r * g[m * n + l];
                    }
                    t.at({i, j, k, l}) = v;
                    t.at({j, i, k, l}) = -std::move(v);
                }
    return t;
}

TensorField frame_ricci(const FrameData& f) {
    auto ctx = f.context();
    auto gam = engine_christoffel(ctx, f.metric(), f.metric_inverse());
    auto ric = engine_ricci(ctx, gam);
    TensorField t(f.n(), {false, false});
    for (size_t i = 0; i < ric.size(); ++i) t[i] = std::move(ric[i]);
    return t;
}

RatExpr frame_scalar(const FrameData& f) {
    TensorField ric = frame_ricci(f);
    const auto& inv = f.metric_inverse();
    const int n = f.n();
    RatExpr s;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!inv[i * n + j].is_zero() && !ric.at({i, j}).is_zero())
                s += inv[i * n + j] * ric.at({i, j});
    return s;
}

TensorField frame_schouten(const FrameData& f) {
    const int n = f.n();
    if (n <= 2) throw MathError("frame_schouten: requires dimension > 2");
    TensorField ric = frame_ricci(f);
    RatExpr scal = frame_scalar(f);
    TensorField p(n, {false, false});
    RatExpr a = RatExpr::constant(Rational(1, n - 2));
    RatExpr b = scal * RatExpr::constant(Rational(1, 2 * (n - 1)));
    const auto& g = f.metric();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p.at({i, j}) = a * (ric.at({i, j}) - b * g[i * n + j]);
    return p;
}

bool WalkerFrameReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckItem& c) { return c.pass; });
}

WalkerFrameReport walker_frame_check(const FrameData& f) {
    const int n = f.n(), p = f.p();
    WalkerFrameReport rep;
    auto scan = [&](const std::string& name, auto&& keep) {
        CheckItem item{name, true, ""};
        for (int k = 0; k < n && item.pass; ++k)
            for (int i = 0; i < n && item.pass; ++i)
                for (int j = 0; j < n && item.pass; ++j) {
                    if (!keep(k, i, j)) continue;
                    if (!f.r(k, i, j).is_zero()) {
                        item.pass = false;
                        item.witness = rname(k, i, j) + " = " + f.r(k, i, j).str();
                    }
                }
        rep.checks.push_back(std::move(item));
    };
    scan("[e_a, e_b] = 0",
         [&](int, int i, int j) { return f.is_a(i) && f.is_a(j); });
    scan("[e_a, e_B] = 0",
         [&](int, int i, int j) { return (f.is_a(i) && f.is_mid(j)) || (f.is_mid(i) && f.is_a(j)); });
    scan("K involutive", [&](int k, int i, int j) {
        return f.is_bar(k) && !f.is_bar(i) && !f.is_bar(j);
    });
    scan("[e_a, e_cbar] in K-perp", [&](int k, int i, int j) {
        return !f.is_a(k) && ((f.is_a(i) && f.is_bar(j)) || (f.is_bar(i) && f.is_a(j)));
    });
    scan("[e_B, e_cbar] in K", [&](int k, int i, int j) {
        return f.is_bar(k) && ((f.is_mid(i) && f.is_bar(j)) || (f.is_bar(i) && f.is_mid(j)));
    });
    scan("[e_abar, e_cbar] in K-perp", [&](int k, int i, int j) {
        return !f.is_a(k) && f.is_bar(i) && f.is_bar(j);
    });
    return rep;
}

bool NrwReport::null_ricci_walker() const {
    return w1 && w5 && dr1 && dr2 && ricci_null_block;
}

NrwReport nrw_conditions(const FrameData& f) {
    const int n = f.n(), p = f.p();
    WalkerFrameReport w = walker_frame_check(f);
    if (!w.pass()) {
        for (auto& c : w.checks)
            if (!c.pass)
                throw MathError("nrw_conditions: Walker bracket relations violated: " + c.name +
                                " fails with " + c.witness);
    }
    NrwReport rep;
    rep.w1 = true;
    rep.checks.push_back({"(w1) Walker bracket relations", true, ""});

    CheckItem w5{"(w5) r^C_AB = 0", true, ""};
    for (int k = p; k < n - p && w5.pass; ++k)
        for (int i = p; i < n - p && w5.pass; ++i)
            for (int j = p; j < n - p && w5.pass; ++j)
                if (!f.r(k, i, j).is_zero()) {
                    w5.pass = false;
                    w5.witness = rname(k, i, j) + " = " + f.r(k, i, j).str();
                }
    rep.w5 = w5.pass;
    rep.checks.push_back(std::move(w5));

    CheckItem dr1{"(dr1) dr^d_{b,cbar}(e_A) = 0", true, ""};
    for (int d = 0; d < p && dr1.pass; ++d)
        for (int b = 0; b < p && dr1.pass; ++b)
            for (int c = n - p; c < n && dr1.pass; ++c)
                for (int A = p; A < n - p && dr1.pass; ++A) {
                    RatExpr v = f.dir_deriv(RatExpr(f.r(d, b, c)), A);
                    if (!v.is_zero()) {
                        dr1.pass = false;
                        dr1.witness = "d" + rname(d, b, c) + "(e_" + std::to_string(A + 1) +
                                      ") = " + v.str();
                    }
                }
    rep.dr1 = dr1.pass;
    rep.checks.push_back(std::move(dr1));

    CheckItem dr2{"(dr2) dr^d_{BC}(e_A) = dr^D_{B,cbar}(e_A) = 0", true, ""};
    for (int A = p; A < n - p && dr2.pass; ++A) {
        for (int d = 0; d < p && dr2.pass; ++d)
            for (int B = p; B < n - p && dr2.pass; ++B)
                for (int C = p; C < n - p && dr2.pass; ++C) {
                    RatExpr v = f.dir_deriv(RatExpr(f.r(d, B, C)), A);
                    if (!v.is_zero()) {
                        dr2.pass = false;
                        dr2.witness = "d" + rname(d, B, C) + "(e_" + std::to_string(A + 1) +
                                      ") = " + v.str();
                    }
                }
        for (int D = p; D < n - p && dr2.pass; ++D)
            for (int B = p; B < n - p && dr2.pass; ++B)
                for (int c = n - p; c < n && dr2.pass; ++c) {
                    RatExpr v = f.dir_deriv(RatExpr(f.r(D, B, c)), A);
                    if (!v.is_zero()) {
                        dr2.pass = false;
                        dr2.witness = "d" + rname(D, B, c) + "(e_" + std::to_string(A + 1) +
                                      ") = " + v.str();
                    }
                }
    }
    rep.dr2 = dr2.pass;
    rep.checks.push_back(std::move(dr2));

    // Ricci formula on the (b, cbar) block:
    // R_{b cbar} = 1/2 ( g_{f cbar} g^{abar d} dr^f_{abar d}(e_b) + dr^d_{cbar d}(e_b) )
    const auto& g = f.metric();
    const auto& ginv = f.metric_inverse();
    CheckItem formula{"(ricinr) R_{b,cbar} = 0", true, ""};
    for (int b = 0; b < p; ++b)
        for (int c = n - p; c < n; ++c) {
            RatExpr v;
            for (int fa = 0; fa < p; ++fa)
                for (int ab = n - p; ab < n; ++ab)
                    for (int d = 0; d < p; ++d) {
                        if (g[fa * n + c].is_zero() || ginv[ab * n + d].is_zero()) continue;
                        RatExpr dr = f.dir_deriv(RatExpr(f.r(fa, ab, d)), b);
                        if (!dr.is_zero()) v += g[fa * n + c] * ginv[ab * n + d] * dr;
                    }
            for (int d = 0; d < p; ++d) {
                RatExpr dr = f.dir_deriv(RatExpr(f.r(d, c, d)), b);
                if (!dr.is_zero()) v += dr;
            }
            v = v * RatExpr::constant(Rational(1, 2));
            if (!v.is_zero() && formula.pass) {
                formula.pass = false;
                formula.witness = "R_{" + std::to_string(b + 1) + "," + std::to_string(c + 1) +
                                  "} = " + v.str();
            }
        }
    rep.checks.push_back(formula);

    // direct curvature conclusions
    TensorField rm = frame_curvature(f);
    TensorField ric = frame_ricci(f);
    CheckItem concl{"curvature conclusions R_ABCi = R_{abar b D cbar} = 0, R_Ai = 0", true, ""};
    for (int A = p; A < n - p && concl.pass; ++A)
        for (int B = p; B < n - p && concl.pass; ++B)
            for (int C = p; C < n - p && concl.pass; ++C)
                for (int i = 0; i < n && concl.pass; ++i)
                    if (!rm.at({A, B, C, i}).is_zero()) {
                        concl.pass = false;
                        concl.witness = "R_ABCi nonzero";
                    }
    for (int a = n - p; a < n && concl.pass; ++a)
        for (int b = 0; b < p && concl.pass; ++b)
            for (int D = p; D < n - p && concl.pass; ++D)
                for (int c = n - p; c < n && concl.pass; ++c)
                    if (!rm.at({a, b, D, c}).is_zero()) {
                        concl.pass = false;
                        concl.witness = "R_{abar b D cbar} nonzero";
                    }
    for (int A = p; A < n - p && concl.pass; ++A)
        for (int i = 0; i < n && concl.pass; ++i)
            if (!ric.at({A, i}).is_zero()) {
                concl.pass = false;
                concl.witness = "R_Ai nonzero";
            }
    rep.curvature_conclusions = concl.pass;
    rep.checks.push_back(std::move(concl));

    // image of the Ricci tensor inside N: components vanish off the barxbar block
    CheckItem nullb{"Ricci supported on the (abar, cbar) block", true, ""};
    for (int i = 0; i < n && nullb.pass; ++i)
        for (int j = 0; j < n && nullb.pass; ++j) {
            if (f.is_bar(i) && f.is_bar(j)) continue;
            if (!ric.at({i, j}).is_zero()) {
                nullb.pass = false;
                nullb.witness = "Ric[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                "] = " + ric.at({i, j}).str();
            }
        }
    rep.ricci_null_block = nullb.pass;
    rep.checks.push_back(std::move(nullb));
    return rep;
}

WalkerCoordReport walker_check_coordinates(const Metric& g, int p) {
    const int n = g.n();
    if (p <= 0 || 2 * p > n) throw MathError("walker_check_coordinates: bad rank");
    WalkerCoordReport rep;
    CheckItem block{"Walker block form", true, ""};
    auto fail = [&](const std::string& w) {
        if (block.pass) {
            block.pass = false;
            block.witness = w;
        }
    };
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b)
            if (!g.at(a, b).is_zero()) fail("g[a,b] block not zero");
        for (int B = p; B < n - p; ++B)
            if (!g.at(a, B).is_zero()) fail("g[a,B] block not zero");
        for (int c = n - p; c < n; ++c) {
            RatExpr want = (c == n - p + a) ? RatExpr::integer(1) : RatExpr();
            if (!(g.at(a, c) == want)) fail("g[a,cbar] pairing is not the identity");
        }
    }
    for (int i = p; i < n; ++i)
        for (int j = p; j < n - p; ++j)
            for (int a = 0; a < p; ++a)
                if (!(i >= n - p && j >= n - p))  // F and G blocks only
                    if (g.at(i, j).depends_on(g.coords()[a]))
                        fail("F/G entries depend on x^" + g.coords()[a]);
    rep.block_form = block.pass;
    rep.checks.push_back(std::move(block));

    // parallelism of span(d_1..d_p): nabla_i d_a has components only in the span
    TensorField gam = christoffel(g);
    CheckItem par{"span(d_a) parallel", true, ""};
    for (int k = p; k < n && par.pass; ++k)
        for (int i = 0; i < n && par.pass; ++i)
            for (int a = 0; a < p && par.pass; ++a)
                if (!gam.at({k, i, a}).is_zero()) {
                    par.pass = false;
                    par.witness = "Gamma^" + std::to_string(k + 1) + "_{" + std::to_string(i + 1) +
                                  "," + std::to_string(a + 1) + "} = " + gam.at({k, i, a}).str();
                }
    rep.parallel = par.pass;
    rep.checks.push_back(std::move(par));

    TensorField ric = ricci(g);
    auto nil = nilpotency_report(g, ric);
    rep.ricci_nilpotent = nil.square_zero && nil.image_totally_null && nil.trace_free;
    rep.checks.push_back({"Ricci two-step nilpotent", rep.ricci_nilpotent, nil.witness});
    rep.ricci_image_in_null = image_in_null_block(g.inverse_components(), ric, p);
    rep.checks.push_back({"image of Ricci inside N", rep.ricci_image_in_null, ""});
    return rep;
}

bool image_in_null_block(const std::vector<RatExpr>& ginv, const TensorField& t, int p) {
    const int n = t.n();
    for (int i = p; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RatExpr v;
            for (int k = 0; k < n; ++k)
                if (!ginv[i * n + k].is_zero() && !t.at({k, j}).is_zero())
                    v += ginv[i * n + k] * t.at({k, j});
            if (!v.is_zero()) return false;
        }
    return true;
}

namespace {

NullContractionReport contraction_report(const TensorField& rm, int n, int p) {
    NullContractionReport rep;
    rep.contraction_vanishes = true;
    for (int a = 0; a < p && rep.contraction_vanishes; ++a)
        for (int j = 0; j < n && rep.contraction_vanishes; ++j)
            for (int k = 0; k < n && rep.contraction_vanishes; ++k)
                for (int l = 0; l < n && rep.contraction_vanishes; ++l)
                    if (!rm.at({a, j, k, l}).is_zero()) {
                        rep.contraction_vanishes = false;
                        rep.witness = "R[" + std::to_string(a + 1) + "," + std::to_string(j + 1) +
                                      "," + std::to_string(k + 1) + "," + std::to_string(l + 1) +
                                      "] = " + rm.at({a, j, k, l}).str();
                    }
    rep.rank_one_block = true;
    for (int ab = n - p; ab < n && rep.rank_one_block; ++ab)
        for (int b = 0; b < p && rep.rank_one_block; ++b)
            for (int d = 0; d < p && rep.rank_one_block; ++d)
                for (int cb = n - p; cb < n && rep.rank_one_block; ++cb)
                    if (!rm.at({ab, b, d, cb}).is_zero()) rep.rank_one_block = false;
    return rep;
}

}  // namespace

NullContractionReport curvature_null_contraction(const Metric& g, int p) {
    return contraction_report(riemann(g), g.n(), p);
}

NullContractionReport curvature_null_contraction(const FrameData& f) {
    return contraction_report(frame_curvature(f), f.n(), f.p());
}

FrameData build_semidirect(const SemidirectAlgebra& s) {
    const int p = s.p, q = s.q, n = p + q, m = q - p;
    if (p <= 0 || m < 0) throw MathError("build_semidirect: need 0 < p <= q");
    auto sz = [&](const std::vector<Rational>& v, int want, const char* name) {
        if ((int)v.size() != want)
            throw MathError(std::string("build_semidirect: bad size for ") + name);
    };
    sz(s.bracket_mm, p * m * m, "bracket_mm");
    sz(s.bracket_h, p * p * p, "bracket_h");
    sz(s.phi_z, p * p * p, "phi_z");
    sz(s.phi_mz, p * p * m, "phi_mz");
    sz(s.phi_mm, p * m * m, "phi_mm");

    std::vector<Rational> r(n * n * n, Rational(0));
    auto put = [&](int k, int i, int j, const Rational& v) {
        r[(k * n + i) * n + j] += v;
        r[(k * n + j) * n + i] -= v;
    };
    // global index layout: z = [0,p), m = [p, q), h = [q, n)
    for (int c = 0; c < p; ++c)
        for (int A = 0; A < m; ++A)
            for (int B = A + 1; B < m; ++B) {
                const Rational& v = s.bracket_mm[(c * m + A) * m + B];
                if (v != 0) put(c, p + A, p + B, v);
            }
    for (int c = 0; c < p; ++c)
        for (int a = 0; a < p; ++a)
            for (int b = a + 1; b < p; ++b) {
                const Rational& v = s.bracket_h[(c * p + a) * p + b];
                if (v != 0) put(q + c, q + a, q + b, v);
            }
    for (int ab = 0; ab < p; ++ab) {
        for (int d = 0; d < p; ++d)
            for (int b = 0; b < p; ++b) {
                const Rational& v = s.phi_z[(ab * p + d) * p + b];
                if (v != 0) put(d, q + ab, b, v);
            }
        for (int d = 0; d < p; ++d)
            for (int B = 0; B < m; ++B) {
                const Rational& v = s.phi_mz[(ab * p + d) * m + B];
                if (v != 0) put(d, q + ab, p + B, v);
            }
        for (int E = 0; E < m; ++E)
            for (int B = 0; B < m; ++B) {
                const Rational& v = s.phi_mm[(ab * m + E) * m + B];
                if (v != 0) put(p + E, q + ab, p + B, v);
            }
    }

    // Jacobi on every triple, with failures named by identity family.
    auto rr = [&](int k, int i, int j) -> const Rational& { return r[(k * n + i) * n + j]; };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational v(0);
                    for (int e = 0; e < n; ++e) {
                        v += rr(e, i, j) * rr(l, e, k);
                        v += rr(e, j, k) * rr(l, e, i);
                        v += rr(e, k, i) * rr(l, e, j);
                    }
                    if (v != 0) {
                        int bars = (i >= q) + (j >= q) + (k >= q);
                        std::string which;
                        if (bars == 0)
                            which = "two-step nilpotency of k";
                        else if (bars == 1)
                            which = "derivation condition r_{AB}^e r_{e cbar}^d = "
                                    "-2 r_{cbar[A}^C r_{B]C}^d";
                        else
                            which = "homomorphism identities r_{abar bbar}^cbar "
                                    "r_{. cbar}^. = 2 r_{.[abar}^. r_{bbar].}^.";
                        throw MathError("build_semidirect: Jacobi fails on (e_" +
                                        std::to_string(i + 1) + ", e_" + std::to_string(j + 1) +
                                        ", e_" + std::to_string(k + 1) + "): violated " + which);
                    }
                }

    std::vector<Expr> structure(n * n * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                structure[(k * n + i) * n + j] = Expr::constant(rr(k, i, j));
    return FrameData(n, p, s.g_null, s.g_mid, std::move(structure));
}

std::pair<Metric, FrameData> realize_left_invariant(const FrameData& f,
                                                    const std::string& coord_prefix) {
    const int n = f.n();
    if (!f.constant_structure())
        throw MathError("realize_left_invariant: structure functions must be constant");
    std::vector<std::vector<Rational>> ad(n, std::vector<Rational>(n * n, Rational(0)));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                ad[l][k * n + j] = *f.r(k, l, j).as_constant();
    std::vector<std::string> coords;
    for (int i = 0; i < n; ++i) coords.push_back(coord_prefix + std::to_string(i + 1));
    // M_j = Ad(exp(-x_n e_n)) ... Ad(exp(-x_{j+1} e_{j+1})) e_j, polynomial by
    // nilpotency; columns of M express d_j through the left-invariant frame.
    std::vector<RatExpr> M(n * n);
    for (int j = 0; j < n; ++j) {
        std::vector<Expr> v(n);
        v[j] = Expr::integer(1);
        for (int l = j + 1; l < n; ++l) {
            // v <- exp(-x_l ad_l) v
            std::vector<Expr> acc = v, term = v;
            Rational fact(1);
            bool terminated = false;
            for (int mpow = 1; mpow <= n; ++mpow) {
                std::vector<Expr> nt(n);
                bool nonzero = false;
                for (int a = 0; a < n; ++a) {
                    Expr s;
                    for (int b = 0; b < n; ++b)
                        if (ad[l][a * n + b] != 0 && !term[b].is_zero())
                            s += Expr::constant(ad[l][a * n + b]) * term[b];
                    if (!s.is_zero()) nonzero = true;
                    nt[a] = std::move(s);
                }
                if (!nonzero) {
                    terminated = true;
                    break;
                }
                fact *= Rational(-1, mpow);
                Expr xl = Expr::variable(coords[l]);
                for (int a = 0; a < n; ++a) {
                    term[a] = nt[a];
                    acc[a] += Expr::constant(fact) * xl.pow(mpow) * nt[a];
                }
            }
            if (!terminated)
                throw MathError("realize_left_invariant: algebra is not nilpotent (ad_" +
                                std::to_string(l + 1) + " series does not terminate)");
            v = acc;
        }
        for (int k = 0; k < n; ++k) M[k * n + j] = RatExpr(v[k]);
    }
    // coordinate metric: g_ij = M^k_i M^l_j gframe_kl
    const auto& gf = f.metric();
    std::vector<RatExpr> gc(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            RatExpr s;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    if (gf[k * n + l].is_zero()) continue;
                    if (M[k * n + i].is_zero() || M[l * n + j].is_zero()) continue;
                    s += M[k * n + i] * M[l * n + j] * gf[k * n + l];
                }
            gc[i * n + j] = s;
            gc[j * n + i] = std::move(s);
        }
    Metric metric(coords, gc);
    // realization E with e_k = sum_j Minv[j][k] d_j
    std::vector<RatExpr> Minv = matrix_inverse(M, n, matrix_det(M, n));
    std::vector<RatExpr> E(n * n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) E[k * n + j] = Minv[j * n + k];
    FrameData realized = f;
    realized.set_realization(coords, std::move(E));
    return {std::move(metric), std::move(realized)};
}

}  // namespace af
