#include "ambientforge/tensor.hpp"

#include <algorithm>

namespace af {

namespace {

// Iterate all multi-indices of the given rank in row-major order.
struct MultiIndex {
    MultiIndex(int n, int rank) : n_(n), idx_(rank, 0), done_(rank == 0 ? false : false) {}
    const std::vector<int>& operator*() const { return idx_; }
    bool next() {
        for (int s = (int)idx_.size() - 1; s >= 0; --s) {
            if (++idx_[s] < n_) return true;
            idx_[s] = 0;
        }
        return false;
    }
    int n_;
    std::vector<int> idx_;
    bool done_;
};

size_t flat_of(int n, const std::vector<int>& idx) {
    size_t f = 0;
    for (int i : idx) f = f * n + i;
    return f;
}

}  // namespace

TensorField::TensorField(int n, std::vector<bool> upper_slots)
    : n_(n), upper_(std::move(upper_slots)) {
    size_t sz = 1;
    for (size_t s = 0; s < upper_.size(); ++s) sz *= n_;
    c_.assign(sz, RatExpr());
}

size_t TensorField::flat(std::initializer_list<int> idx) const {
    size_t f = 0;
    for (int i : idx) f = f * n_ + i;
    return f;
}

bool TensorField::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const RatExpr& e) { return e.is_zero(); });
}

bool TensorField::operator==(const TensorField& o) const {
    if (n_ != o.n_ || upper_ != o.upper_) return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

TensorField TensorField::operator-() const {
    TensorField t = *this;
    for (auto& e : t.c_) e = -e;
    return t;
}

TensorField operator+(TensorField a, const TensorField& b) {
    if (a.n_ != b.n_ || a.upper_ != b.upper_) throw MathError("tensor shape mismatch in +");
    for (size_t i = 0; i < a.c_.size(); ++i)
        if (!b.c_[i].is_zero()) a.c_[i] += b.c_[i];
    return a;
}

TensorField operator-(TensorField a, const TensorField& b) {
    if (a.n_ != b.n_ || a.upper_ != b.upper_) throw MathError("tensor shape mismatch in -");
    for (size_t i = 0; i < a.c_.size(); ++i)
        if (!b.c_[i].is_zero()) a.c_[i] -= b.c_[i];
    return a;
}

TensorField TensorField::scaled(const RatExpr& f) const {
    TensorField t = *this;
    for (auto& e : t.c_) e = e * f;
    return t;
}

TensorField TensorField::scaled(const Rational& q) const { return scaled(RatExpr::constant(q)); }

bool TensorField::symmetric_in(int s1, int s2) const {
    MultiIndex mi(n_, rank());
    do {
        std::vector<int> idx = *mi;
        std::swap(idx[s1], idx[s2]);
        if (!(c_[flat_of(n_, *mi)] == c_[flat_of(n_, idx)])) return false;
    } while (mi.next());
    return true;
}

bool TensorField::antisymmetric_in(int s1, int s2) const {
    MultiIndex mi(n_, rank());
    do {
        std::vector<int> idx = *mi;
        std::swap(idx[s1], idx[s2]);
        if (!(c_[flat_of(n_, *mi)] == -c_[flat_of(n_, idx)])) return false;
    } while (mi.next());
    return true;
}

RatExpr matrix_det(const std::vector<RatExpr>& m, int n) {
    if (n == 1) return m[0];
    // expand along the row with the most structural zeros
    int best = 0, best_zeros = -1;
    for (int i = 0; i < n; ++i) {
        int z = 0;
        for (int j = 0; j < n; ++j)
            if (m[i * n + j].is_zero()) ++z;
        if (z > best_zeros) {
            best_zeros = z;
            best = i;
        }
    }
    RatExpr det;
    for (int j = 0; j < n; ++j) {
        const RatExpr& pivot = m[best * n + j];
        if (pivot.is_zero()) continue;
        std::vector<RatExpr> sub;
        sub.reserve((n - 1) * (n - 1));
        for (int r = 0; r < n; ++r) {
            if (r == best) continue;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.push_back(m[r * n + c]);
            }
        }
        RatExpr term = pivot * matrix_det(sub, n - 1);
        if ((best + j) % 2)
            det -= term;
        else
            det += term;
    }
    return det;
}

std::vector<RatExpr> matrix_inverse(const std::vector<RatExpr>& m, int n, const RatExpr& det) {
    if (det.is_zero()) throw MathError("matrix_inverse: singular matrix");
    std::vector<RatExpr> inv(n * n);
    if (n == 1) {
        inv[0] = RatExpr::integer(1) / det;
        return inv;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<RatExpr> sub;
            sub.reserve((n - 1) * (n - 1));
            for (int r = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == i) continue;
                    sub.push_back(m[r * n + c]);
                }
            }
            RatExpr cof = matrix_det(sub, n - 1);
            if ((i + j) % 2) cof = -cof;
            inv[i * n + j] = cof / det;
        }
    }
    return inv;
}

Metric::Metric(std::vector<std::string> coords, std::vector<RatExpr> components)
    : n_((int)coords.size()), coords_(std::move(coords)), g_(std::move(components)) {
    if ((int)g_.size() != n_ * n_) throw MathError("Metric: component count != n^2");
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (g_[i * n_ + j] != g_[j * n_ + i])
                throw MathError("Metric: not symmetric at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
    det_ = matrix_det(g_, n_);
    if (det_.is_zero()) throw MathError("Metric: determinant vanishes identically");
}

Metric Metric::diagonal(std::vector<std::string> coords, std::vector<RatExpr> diag) {
    int n = (int)coords.size();
    std::vector<RatExpr> g(n * n);
    for (int i = 0; i < n; ++i) g[i * n + i] = diag[i];
    return Metric(std::move(coords), std::move(g));
}

Metric Metric::flat(std::vector<std::string> coords, std::vector<int> signs) {
    int n = (int)coords.size();
    std::vector<RatExpr> diag;
    for (int i = 0; i < n; ++i)
        diag.push_back(RatExpr::integer(signs.empty() ? 1 : signs[i]));
    return diagonal(std::move(coords), std::move(diag));
}

int Metric::coord_index(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
        if (coords_[i] == name) return i;
    throw MathError("Metric: unknown coordinate " + name);
}

const std::vector<RatExpr>& Metric::inverse_components() const {
    if (inv_.empty()) inv_ = matrix_inverse(g_, n_, det_);
    return inv_;
}

GeomContext<RatExpr> Metric::context() const {
    GeomContext<RatExpr> ctx;
    ctx.dim = n_;
    auto coords = coords_;
    ctx.deriv = [coords](const RatExpr& e, int i) { return e.diff(coords[i]); };
    return ctx;
}

TensorField Metric::as_tensor() const {
    TensorField t(n_, {false, false});
    for (int i = 0; i < n_ * n_; ++i) t[i] = g_[i];
    return t;
}

TensorField inverse_metric(const Metric& g) {
    TensorField t(g.n(), {true, true});
    const auto& inv = g.inverse_components();
    for (int i = 0; i < g.n() * g.n(); ++i) t[i] = inv[i];
    return t;
}

TensorField christoffel(const Metric& g) {
    TensorField t(g.n(), {true, false, false});
    auto gam = engine_christoffel(g.context(), g.components(), g.inverse_components());
    for (size_t i = 0; i < gam.size(); ++i) t[i] = std::move(gam[i]);
    return t;
}

TensorField riemann_ud(const Metric& g) {
    auto gam = engine_christoffel(g.context(), g.components(), g.inverse_components());
    auto R = engine_riemann_ud(g.context(), gam);
    TensorField t(g.n(), {false, false, false, true});
    for (size_t i = 0; i < R.size(); ++i) t[i] = std::move(R[i]);
    return t;
}

TensorField riemann(const Metric& g) {
    const int n = g.n();
    TensorField up = riemann_ud(g);
    TensorField t(n, {false, false, false, false});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    RatExpr v;
                    for (int m = 0; m < n; ++m) {
                        const RatExpr& r = up.at({i, j, k, m});
                        if (!r.is_zero() && !g.at(m, l).is_zero()) v += r * g.at(m, l);
                    }
                    t.at({i, j, k, l}) = v;
                    t.at({j, i, k, l}) = -std::move(v);
                }
    return t;
}

TensorField ricci(const Metric& g) {
    auto gam = engine_christoffel(g.context(), g.components(), g.inverse_components());
    auto ric = engine_ricci(g.context(), gam);
    TensorField t(g.n(), {false, false});
    for (size_t i = 0; i < ric.size(); ++i) t[i] = std::move(ric[i]);
    return t;
}

RatExpr scalar_curvature(const Metric& g) { return trace(g, ricci(g)); }

RatExpr trace(const Metric& g, const TensorField& t) {
    if (t.rank() != 2) throw MathError("trace: rank-2 tensor expected");
    const auto& inv = g.inverse_components();
    const int n = g.n();
    RatExpr s;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (inv[i * n + j].is_zero() || t.at({i, j}).is_zero()) continue;
            s += inv[i * n + j] * t.at({i, j});
        }
    return s;
}

TensorField schouten(const Metric& g) {
    const int n = g.n();
    if (n <= 2) throw MathError("schouten: requires dimension > 2");
    TensorField ric = ricci(g);
    RatExpr scal = trace(g, ric);
    RatExpr a = RatExpr::constant(Rational(1, n - 2));
    RatExpr b = scal * RatExpr::constant(Rational(1, 2 * (n - 1)));
    TensorField p(n, {false, false});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p.at({i, j}) = a * (ric.at({i, j}) - b * g.at(i, j));
    return p;
}

TensorField covariant_derivative(const Metric& g, const TensorField& t) {
    const int n = g.n();
    TensorField gam = christoffel(g);
    std::vector<bool> shape{false};
    shape.insert(shape.end(), t.variance().begin(), t.variance().end());
    TensorField out(n, shape);
    const int r = t.rank();
    MultiIndex mi(n, r);
    do {
        const std::vector<int>& idx = *mi;
        size_t base = flat_of(n, idx);
        for (int m = 0; m < n; ++m) {
            RatExpr v = t[base].is_zero() ? RatExpr() : t[base].diff(g.coords()[m]);
            for (int s = 0; s < r; ++s) {
                std::vector<int> jdx = idx;
                for (int p = 0; p < n; ++p) {
                    jdx[s] = p;
                    const RatExpr& tc = t[flat_of(n, jdx)];
                    if (tc.is_zero()) continue;
                    if (t.variance()[s]) {
                        const RatExpr& ga = gam.at({idx[s], m, p});
                        if (!ga.is_zero()) v += ga * tc;
                    } else {
                        const RatExpr& ga = gam.at({p, m, idx[s]});
                        if (!ga.is_zero()) v -= ga * tc;
                    }
                }
            }
            out[m * t.size() + base] = std::move(v);
        }
    } while (mi.next());
    return out;
}

TensorField box(const Metric& g, const TensorField& t) {
    const int n = g.n();
    TensorField dd = covariant_derivative(g, covariant_derivative(g, t));
    const auto& inv = g.inverse_components();
    TensorField out(n, t.variance());
    size_t block = t.size();
    for (size_t f = 0; f < block; ++f) {
        RatExpr v;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                if (inv[k * n + l].is_zero()) continue;
                const RatExpr& w = dd[(k * (size_t)n + l) * block + f];
                if (!w.is_zero()) v += inv[k * n + l] * w;
            }
        out[f] = std::move(v);
    }
    return out;
}

TensorField divergence(const Metric& g, const TensorField& t) {
    if (t.rank() < 1) throw MathError("divergence: rank >= 1 expected");
    const int n = g.n();
    TensorField dt = covariant_derivative(g, t);
    const auto& inv = g.inverse_components();
    std::vector<bool> shape(t.variance().begin() + 1, t.variance().end());
    TensorField out(n, shape);
    size_t block = out.size();
    for (size_t f = 0; f < block; ++f) {
        RatExpr v;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                if (inv[k * n + l].is_zero()) continue;
                const RatExpr& w = dt[(k * (size_t)n + l) * block + f];
                if (!w.is_zero()) v += inv[k * n + l] * w;
            }
        out[f] = std::move(v);
    }
    return out;
}

TensorField lie_derivative(const TensorField& x, const TensorField& t,
                           const std::vector<std::string>& coords) {
    const int n = t.n();
    if (x.rank() != 1 || !x.variance()[0]) throw MathError("lie_derivative: X must be a vector");
    TensorField out(n, t.variance());
    const int r = t.rank();
    MultiIndex mi(n, r);
    do {
        const std::vector<int>& idx = *mi;
        size_t base = flat_of(n, idx);
        RatExpr v;
        for (int p = 0; p < n; ++p) {
            if (!x[p].is_zero() && !t[base].is_zero()) v += x[p] * t[base].diff(coords[p]);
        }
        for (int s = 0; s < r; ++s) {
            std::vector<int> jdx = idx;
            for (int p = 0; p < n; ++p) {
                jdx[s] = p;
                const RatExpr& tc = t[flat_of(n, jdx)];
                if (tc.is_zero()) continue;
                if (t.variance()[s]) {
                    if (!x[idx[s]].is_zero()) v -= tc * x[idx[s]].diff(coords[p]);
                } else {
                    if (!x[p].is_zero()) v += tc * x[p].diff(coords[idx[s]]);
                }
            }
        }
        out[base] = std::move(v);
    } while (mi.next());
    return out;
}

TensorField cotton(const Metric& g) {
    const int n = g.n();
    if (n < 3) throw MathError("cotton: requires dimension >= 3");
    TensorField dp = covariant_derivative(g, schouten(g));
    TensorField a(n, {false, false, false});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                a.at({i, j, k}) = dp.at({j, k, i}) - dp.at({k, j, i});
    return a;
}

TensorField weyl(const Metric& g) {
    const int n = g.n();
    if (n < 4) throw MathError("weyl: requires dimension >= 4");
    TensorField r = riemann(g);
    TensorField p = schouten(g);
    TensorField w(n, {false, false, false, false});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    RatExpr kn = p.at({i, k}) * g.at(j, l) - p.at({j, k}) * g.at(i, l) +
                                 p.at({j, l}) * g.at(i, k) - p.at({i, l}) * g.at(j, k);
                    w.at({i, j, k, l}) = r.at({i, j, k, l}) - kn;
                }
    return w;
}

TensorField bach(const Metric& g) {
    const int n = g.n();
    TensorField a = cotton(g);
    TensorField da = covariant_derivative(g, a);
    TensorField w = weyl(g);
    TensorField p = schouten(g);
    const auto& inv = g.inverse_components();
    // The divergence slot is pinned by the dimension-4 identity "Bach =
    // ambient obstruction" and by the rho^2 expansion relation
    // (4-n) mu = B + (4-n) P.P; with this library's curvature sign the
    // correct contraction is D^k A_ikj.
    TensorField b(n, {false, false});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RatExpr v;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    if (!inv[l * n + k].is_zero()) {
                        const RatExpr& d = da.at({l, i, k, j});
                        if (!d.is_zero()) v += inv[l * n + k] * d;
                    }
                }
            // P^kl W_kijl with both Schouten indices raised
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const RatExpr& wk = w.at({k, i, j, l});
                    if (wk.is_zero()) continue;
                    RatExpr pu;
                    for (int aa = 0; aa < n; ++aa)
                        for (int bb = 0; bb < n; ++bb) {
                            if (inv[k * n + aa].is_zero() || inv[l * n + bb].is_zero()) continue;
                            const RatExpr& pc = p.at({aa, bb});
                            if (!pc.is_zero()) v -= inv[k * n + aa] * inv[l * n + bb] * pc * wk;
                        }
                    (void)pu;
                }
            b.at({i, j}) = std::move(v);
        }
    return b;
}

TensorField connection_difference(const Metric& g, const Metric& g0) {
    if (g.n() != g0.n()) throw MathError("connection_difference: dimension mismatch");
    const int n = g.n();
    TensorField dg = covariant_derivative(g0, g.as_tensor());
    const auto& inv = g.inverse_components();
    TensorField c(n, {true, false, false});
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                RatExpr v;
                for (int l = 0; l < n; ++l) {
                    if (inv[k * n + l].is_zero()) continue;
                    RatExpr inner = dg.at({l, i, j}) - dg.at({i, j, l}) - dg.at({j, i, l});
                    if (!inner.is_zero()) v += inv[k * n + l] * inner;
                }
                v = v * RatExpr::constant(Rational(1, 2));
                c.at({k, i, j}) = v;
                if (j != i) c.at({k, j, i}) = std::move(v);
            }
    return c;
}

TensorField relative_ricci(const Metric& g0, const TensorField& c) {
    const int n = g0.n();
    TensorField dc = covariant_derivative(g0, c);
    TensorField r = ricci(g0);
    TensorField out(n, {false, false});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RatExpr v = r.at({i, j});
            for (int k = 0; k < n; ++k) {
                v += dc.at({i, k, k, j}) - dc.at({k, k, i, j});
                for (int p = 0; p < n; ++p) {
                    const RatExpr& cij = c.at({p, i, j});
                    if (!cij.is_zero() && !c.at({k, k, p}).is_zero())
                        v += cij * c.at({k, k, p});
                    if (!c.at({p, j, k}).is_zero() && !c.at({k, i, p}).is_zero())
                        v -= c.at({p, j, k}) * c.at({k, i, p});
                }
            }
            out.at({i, j}) = std::move(v);
        }
    return out;
}

NilpotencyReport nilpotency_report(const Metric& g0, const TensorField& h) {
    const int n = g0.n();
    if (h.rank() != 2) throw MathError("nilpotency_report: (0,2) tensor expected");
    NilpotencyReport rep;
    const auto& inv = g0.inverse_components();
    // h-sharp = g0^{-1} h as a matrix
    std::vector<RatExpr> hs(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RatExpr v;
            for (int k = 0; k < n; ++k)
                if (!inv[i * n + k].is_zero() && !h.at({k, j}).is_zero())
                    v += inv[i * n + k] * h.at({k, j});
            hs[i * n + j] = std::move(v);
        }
    RatExpr tr;
    for (int i = 0; i < n; ++i) tr += hs[i * n + i];
    rep.trace_free = tr.is_zero();
    rep.scalar_flat = rep.trace_free;
    if (!rep.trace_free) rep.witness = "trace = " + tr.str();

    rep.square_zero = true;
    for (int i = 0; i < n && rep.square_zero; ++i)
        for (int j = 0; j < n && rep.square_zero; ++j) {
            RatExpr v;
            for (int k = 0; k < n; ++k)
                if (!hs[i * n + k].is_zero() && !hs[k * n + j].is_zero())
                    v += hs[i * n + k] * hs[k * n + j];
            if (!v.is_zero()) {
                rep.square_zero = false;
                if (rep.witness.empty())
                    rep.witness = "(h#)^2[" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + "] = " + v.str();
            }
        }

    rep.image_totally_null = true;
    for (int i = 0; i < n && rep.image_totally_null; ++i)
        for (int j = 0; j < n && rep.image_totally_null; ++j) {
            // (h g0^{-1} h)_{ij}
            RatExpr v;
            for (int k = 0; k < n; ++k)
                if (!h.at({i, k}).is_zero() && !hs[k * n + j].is_zero())
                    v += h.at({i, k}) * hs[k * n + j];
            if (!v.is_zero()) {
                rep.image_totally_null = false;
                if (rep.witness.empty())
                    rep.witness = "g(h.,h.)[" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + "] = " + v.str();
            }
        }
    return rep;
}

}  // namespace af
