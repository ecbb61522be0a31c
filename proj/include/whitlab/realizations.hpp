#pragma once

#include <map>
#include <utility>
#include <variant>

#include "report.hpp"

namespace whitlab {

struct RootData {
    int ell = 1;
    std::vector<double> rho;
    std::vector<std::vector<int>> simple_roots;
    int fundamental_weight_count = 1;

    static RootData of(int ell) {
        if (ell < 1) throw RankUnsupported("rank must be positive");
        RootData r;
        r.ell = ell;
        for (int i = 1; i <= ell + 1; ++i) r.rho.push_back(ell / 2.0 + 1 - i);
        for (int j = 0; j < ell; ++j) {
            std::vector<int> a(ell + 1, 0);
            a[j] = 1;
            a[j + 1] = -1;
            r.simple_roots.push_back(a);
        }
        r.fundamental_weight_count = ell;
        return r;
    }

    double rho_of(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) s += rho[i] * x[i];
        return s;
    }
};

struct SpectralParams {
    int ell = 1;
    std::vector<cplx> gamma;
    std::vector<double> lambda;
    double eps = 0.0;
    double kappa = 0.0;

    // gamma = lambda + i eps (1, -1, 0, ...): this is lambda + 2 i eps rho for
    // gl2 and lambda + i eps alpha_1 for gl3.
    static SpectralParams from_lambda(std::vector<double> lambda, double eps, double kappa = 0.0) {
        if (lambda.size() < 2) throw RankUnsupported("need at least two spectral entries");
        if (eps != 0.0 && !(eps > 0 && eps < 0.5)) throw PreconditionViolated("eps must lie in (0, 1/2)");
        SpectralParams p;
        p.ell = static_cast<int>(lambda.size()) - 1;
        p.lambda = lambda;
        p.eps = eps;
        p.kappa = kappa;
        for (double l : lambda) p.gamma.push_back(l);
        p.gamma[0] += I * eps;
        p.gamma[1] -= I * eps;
        return p;
    }

    static SpectralParams from_gamma(std::vector<cplx> gamma, double kappa = 0.0) {
        if (gamma.size() < 2) throw RankUnsupported("need at least two spectral entries");
        SpectralParams p;
        p.ell = static_cast<int>(gamma.size()) - 1;
        p.gamma = gamma;
        for (cplx g : gamma) p.lambda.push_back(g.real());
        p.eps = gamma[0].imag();
        p.kappa = kappa;
        return p;
    }

    std::vector<cplx> gamma_bar() const {
        std::vector<cplx> g;
        for (cplx z : gamma) g.push_back(std::conj(z));
        return g;
    }
    SpectralParams dual() const {
        SpectralParams p = *this;
        p.gamma = gamma_bar();
        return p;
    }
    cplx gamma_sum() const {
        cplx s = 0.0;
        for (cplx z : gamma) s += z;
        return s;
    }
    std::string echo() const {
        return echo_list("gamma", gamma) + " kappa=" + format_real(kappa);
    }
};

enum class RealizationKind { GT, GT_modified, GT_shifted, GG, GG_modified, GG_modified_dual, GT_dual };

inline const char* kind_name(RealizationKind k) {
    switch (k) {
        case RealizationKind::GT: return "GT";
        case RealizationKind::GT_modified: return "GT_modified";
        case RealizationKind::GT_shifted: return "GT_shifted";
        case RealizationKind::GG: return "GG";
        case RealizationKind::GG_modified: return "GG_modified";
        case RealizationKind::GG_modified_dual: return "GG_modified_dual";
        case RealizationKind::GT_dual: return "GT_dual";
    }
    return "?";
}

// A generator is a difference operator (GT and modified GG) or a first-order
// differential operator (GG).
class Generator {
public:
    Generator() = default;
    Generator(ShiftOp op) : op_(std::move(op)) {}
    Generator(DiffOp op) : op_(std::move(op)) {}

    bool differential() const { return std::holds_alternative<DiffOp>(op_); }
    const ShiftOp& shift_op() const { return std::get<ShiftOp>(op_); }
    const DiffOp& diff_op() const { return std::get<DiffOp>(op_); }
    int arity() const { return differential() ? diff_op().arity() : shift_op().arity(); }

    cplx apply_at(const AnalyticFn& f, const Point& z, double h = 1e-3) const {
        if (differential()) return whitlab::apply_at(diff_op(), f, z, h);
        return shift_op().apply_at(f, z);
    }

    friend Generator operator+(const Generator& a, const Generator& b) {
        if (a.differential() != b.differential()) throw ArityMismatch("mixed generator types");
        if (a.differential()) return Generator(a.diff_op() + b.diff_op());
        return Generator(a.shift_op() + b.shift_op());
    }
    friend Generator operator-(const Generator& a, const Generator& b) {
        if (a.differential() != b.differential()) throw ArityMismatch("mixed generator types");
        if (a.differential()) return Generator(a.diff_op() - b.diff_op());
        return Generator(a.shift_op() - b.shift_op());
    }
    friend Generator operator*(cplx c, const Generator& a) {
        if (a.differential()) return Generator(c * a.diff_op());
        return Generator(c * a.shift_op());
    }
    friend Generator bracket(const Generator& a, const Generator& b, double h = 1e-3) {
        if (a.differential() != b.differential()) throw ArityMismatch("mixed generator types");
        if (a.differential()) return Generator(commutator(a.diff_op(), b.diff_op(), h));
        return Generator(commutator(a.shift_op(), b.shift_op()));
    }

private:
    std::variant<ShiftOp, DiffOp> op_;
};

struct Realization {
    RealizationKind kind = RealizationKind::GT;
    int ell = 1;
    SpectralParams params;
    std::map<std::pair<int, int>, Generator> generators;  // 1-based (i, j)

    int arity() const { return ell * (ell + 1) / 2; }
    bool differential() const { return kind == RealizationKind::GG; }
    const Generator& E(int i, int j) const {
        auto it = generators.find({i, j});
        if (it == generators.end()) throw DomainError("generator E" + std::to_string(i) + std::to_string(j) + " not printed");
        return it->second;
    }
    bool has(int i, int j) const { return generators.count({i, j}) != 0; }
};

struct WhittakerVector {
    enum class Side { L, R } side = Side::R;
    RealizationKind realization_kind = RealizationKind::GT;
    AnalyticFn fn;
};

namespace detail {

inline Shift sh(int a, int b = 0, int c = 0) { return Shift{a, b, c, 0, 0, 0}; }

template <class F>
AnalyticFn coeff(int n, F f) {
    return AnalyticFn(n, std::move(f));
}

template <class F>
ShiftTerm term(int n, F f, Shift s) {
    return {AnalyticFn(n, std::move(f)), s};
}

template <class F>
ShiftOp mult(int n, F f) {
    return ShiftOp::multiplication(AnalyticFn(n, std::move(f)));
}

inline void require_rank(int ell) {
    if (ell != 1 && ell != 2) throw RankUnsupported("only gl2 and gl3 (ell = 1, 2) are realized");
}

}  // namespace detail

// Gelfand-Tsetlin difference operators in tau (ell = 1) or
// (tau11, tau21, tau22) (ell = 2); tau_{ell+1,k} is gamma_k.
inline Realization gt_realization(const SpectralParams& p) {
    using namespace detail;
    require_rank(p.ell);
    Realization r;
    r.kind = RealizationKind::GT;
    r.ell = p.ell;
    r.params = p;
    const auto g = p.gamma;
    if (p.ell == 1) {
        r.generators[{1, 1}] = mult(1, [](const Point& t) { return -I * t[0]; });
        r.generators[{2, 2}] = mult(1, [g](const Point& t) { return -I * (g[0] + g[1]) + I * t[0]; });
        r.generators[{1, 2}] = ShiftOp(1, {term(1,
                                                 [g](const Point& t) {
                                                     return -I * (I * (t[0] - g[0]) + 0.5) * (I * (t[0] - g[1]) + 0.5);
                                                 },
                                                 sh(1))});
        r.generators[{2, 1}] = ShiftOp(1, {term(1, [](const Point&) { return -I; }, sh(-1))});
        return r;
    }
    r.generators[{1, 1}] = mult(3, [](const Point& t) { return -I * t[0]; });
    r.generators[{2, 2}] = mult(3, [](const Point& t) { return -I * (t[1] + t[2]) + I * t[0]; });
    r.generators[{3, 3}] = mult(3, [g](const Point& t) { return -I * (g[0] + g[1] + g[2]) + I * (t[1] + t[2]); });
    r.generators[{1, 2}] = ShiftOp(
        3, {term(3, [](const Point& t) { return -I * (I * (t[0] - t[1]) + 0.5) * (I * (t[0] - t[2]) + 0.5); }, sh(1, 0, 0))});
    r.generators[{2, 1}] = ShiftOp(3, {term(3, [](const Point&) { return -I; }, sh(-1, 0, 0))});
    auto top = [g](cplx t) {
        cplx pr = 1.0;
        for (int i = 0; i < 3; ++i) pr *= I * (t - g[i]) + 0.5;
        return pr;
    };
    r.generators[{2, 3}] = ShiftOp(3, {term(3, [top](const Point& t) { return -I * top(t[1]) / (I * (t[1] - t[2])); }, sh(0, 1, 0)),
                                       term(3, [top](const Point& t) { return -I * top(t[2]) / (I * (t[2] - t[1])); }, sh(0, 0, 1))});
    r.generators[{3, 2}] =
        ShiftOp(3, {term(3, [](const Point& t) { return I * (I * (t[0] - t[1]) + 0.5) / (I * (t[1] - t[2])); }, sh(0, -1, 0)),
                    term(3, [](const Point& t) { return I * (I * (t[0] - t[2]) + 0.5) / (I * (t[2] - t[1])); }, sh(0, 0, -1))});
    return r;
}

// The dual module is the same functional model at conjugate spectral parameter.
inline Realization gt_dual(const SpectralParams& p) {
    Realization r = gt_realization(p.dual());
    r.kind = RealizationKind::GT_dual;
    return r;
}

// GT pairing measure. For gl3 it carries the 1/2 Weyl factor of the S2
// symmetry in (tau21, tau22), so that the pairing of Whittaker vectors is the
// Whittaker function itself rather than twice it.
inline AnalyticFn gt_measure(int ell) {
    detail::require_rank(ell);
    if (ell == 1) return AnalyticFn::constant(1, 1.0 / (2 * kPi));
    return AnalyticFn(3, [](const Point& t) {
        return 0.5 * std::pow(2 * kPi, -3.0) * std::exp(kPi * (t[1] + t[2])) * reciprocal_gamma_pair(t[1] - t[2]);
    });
}

// Square root mu_1 of the measure used by the modified realization:
// mu(tau) = mu_1(tau) conj(mu_1(tau)) on the real locus.
inline AnalyticFn gt_mu1(int ell) {
    detail::require_rank(ell);
    if (ell == 1) return AnalyticFn::constant(1, 1.0 / std::sqrt(2 * kPi));
    return AnalyticFn(3, [](const Point& t) {
        return std::exp(kPi * (t[1] + t[2]) / 2.0 - log_gamma_any(I * (t[1] - t[2]))) / (std::sqrt(2.0) * std::pow(2 * kPi, 1.5));
    });
}

inline Realization gt_modified(const SpectralParams& p) {
    if (p.ell != 2) throw RankUnsupported("the modified GT realization is defined for gl3");
    Realization base = gt_realization(p);
    Realization r;
    r.kind = RealizationKind::GT_modified;
    r.ell = 2;
    r.params = p;
    const AnalyticFn mu1 = gt_mu1(2);
    for (const auto& [ij, gen] : base.generators) r.generators[ij] = conjugate(gen.shift_op(), mu1);
    return r;
}

// E_ij with argument tau11 -> tau11 - i kappa (modified GT for gl3, plain GT for gl2).
inline Realization gt_shifted(const SpectralParams& p) {
    detail::require_rank(p.ell);
    const double k = p.kappa;
    if (p.ell == 1 && !(k < 0.5 - p.eps && k > -0.5 - p.eps))
        throw KappaOutOfRange("gl2 contour shift needs -1/2 - eps < kappa < 1/2 - eps");
    if (p.ell == 2 && !(k < 0.5 && k > -0.5)) throw KappaOutOfRange("gl3 contour shift needs |kappa| < 1/2");
    Realization base = p.ell == 1 ? gt_realization(p) : gt_modified(p);
    Realization r;
    r.kind = RealizationKind::GT_shifted;
    r.ell = p.ell;
    r.params = p;
    Point off(base.arity());
    off[0] = -I * k;
    for (const auto& [ij, gen] : base.generators) r.generators[ij] = translate_argument(gen.shift_op(), off);
    return r;
}

// Gauss-Givental first-order differential operators in T (ell = 1) or
// (T11, T21, T22) (ell = 2).
inline Realization gg_realization(const SpectralParams& p) {
    using namespace detail;
    require_rank(p.ell);
    Realization r;
    r.kind = RealizationKind::GG;
    r.ell = p.ell;
    r.params = p;
    const auto g = p.gamma;
    const int n = r.arity();
    auto c = [n](cplx v) { return AnalyticFn::constant(n, v); };
    auto ex = [n](int pos, int neg, double coef = 1.0) {
        // coef * e^{T_pos - T_neg}, with -1 meaning "absent"
        return [pos, neg, coef](const Point& t) {
            cplx e = 0.0;
            if (pos >= 0) e += t[pos];
            if (neg >= 0) e -= t[neg];
            return coef * std::exp(e);
        };
    };
    auto prod = [n](std::function<cplx(const Point&)> a, cplx k) {
        return AnalyticFn(n, [a, k](const Point& t) { return k * a(t); });
    };
    if (p.ell == 1) {
        r.generators[{1, 1}] = DiffOp(c(-I * g[0]), {{c(-1.0), 0}});
        r.generators[{2, 2}] = DiffOp(c(-I * g[1]), {{c(1.0), 0}});
        auto em = ex(-1, 0), ep = ex(0, -1);
        r.generators[{1, 2}] = DiffOp(prod(em, -0.5), {{prod(em, 1.0), 0}});
        r.generators[{2, 1}] = DiffOp(prod(ep, I * (g[1] - g[0]) - 0.5), {{prod(ep, -1.0), 0}});
        return r;
    }
    const cplx a21 = I * (g[1] - g[0]) - 0.5, a32 = I * (g[2] - g[1]) - 0.5;
    r.generators[{1, 1}] = DiffOp(c(-I * g[0]), {{c(-1.0), 0}, {c(-1.0), 1}});
    r.generators[{2, 2}] = DiffOp(c(-I * g[1]), {{c(-1.0), 2}, {c(1.0), 1}});
    r.generators[{3, 3}] = DiffOp(c(-I * g[2]), {{c(1.0), 0}, {c(1.0), 2}});
    {
        auto e = ex(-1, 1);
        r.generators[{1, 2}] = DiffOp(prod(e, -0.5), {{prod(e, 1.0), 1}});
    }
    {
        auto e1 = ex(1, 0), e2 = ex(-1, 2);
        AnalyticFn s(n, [e1, e2](const Point& t) { return -0.5 * e1(t) - 0.5 * e2(t); });
        AnalyticFn d0(n, [e1, e2](const Point& t) { return e1(t) + e2(t); });
        r.generators[{2, 3}] = DiffOp(s, {{d0, 0}, {prod(e2, -1.0), 1}, {prod(e2, 1.0), 2}});
    }
    {
        auto e1 = ex(0, 2), e2 = ex(1, -1);
        AnalyticFn s(n, [e1, e2, a21](const Point& t) { return a21 * (e1(t) + e2(t)); });
        AnalyticFn d0(n, [e1, e2](const Point& t) { return -e1(t) - e2(t); });
        r.generators[{2, 1}] = DiffOp(s, {{d0, 0}, {prod(e2, 1.0), 2}, {prod(e2, -1.0), 1}});
    }
    {
        auto e = ex(2, -1);
        r.generators[{3, 2}] = DiffOp(prod(e, a32), {{prod(e, -1.0), 2}});
    }
    return r;
}

// Fourier image of the GG realization: difference operators in s
// (ell = 1) or (s11, s21, s22) (ell = 2). `dual` replaces gamma by conj(gamma).
inline Realization gg_modified(const SpectralParams& params, bool dual = false) {
    using namespace detail;
    require_rank(params.ell);
    const SpectralParams p = dual ? params.dual() : params;
    Realization r;
    r.kind = dual ? RealizationKind::GG_modified_dual : RealizationKind::GG_modified;
    r.ell = p.ell;
    r.params = params;
    const auto g = p.gamma;
    if (p.ell == 1) {
        r.generators[{1, 1}] = mult(1, [g](const Point& s) { return -I * (g[0] + s[0]); });
        r.generators[{2, 2}] = mult(1, [g](const Point& s) { return -I * (g[1] - s[0]); });
        r.generators[{1, 2}] = ShiftOp(1, {term(1, [](const Point& s) { return I * s[0] + 0.5; }, sh(1))});
        r.generators[{2, 1}] = ShiftOp(1, {term(1, [g](const Point& s) { return I * (g[1] - g[0] - s[0]) + 0.5; }, sh(-1))});
        return r;
    }
    r.generators[{1, 1}] = mult(3, [g](const Point& s) { return -I * (g[0] + s[0] + s[1]); });
    r.generators[{2, 2}] = mult(3, [g](const Point& s) { return -I * g[1] - I * s[2] + I * s[1]; });
    r.generators[{3, 3}] = mult(3, [g](const Point& s) { return -I * g[2] + I * (s[0] + s[2]); });
    r.generators[{1, 2}] = ShiftOp(3, {term(3, [](const Point& s) { return I * s[1] + 0.5; }, sh(0, 1, 0))});
    r.generators[{2, 3}] = ShiftOp(3, {term(3, [](const Point& s) { return I * s[0] + 0.5; }, sh(1, -1, 0)),
                                       term(3, [](const Point& s) { return I * (s[0] - s[1] + s[2]) + 0.5; }, sh(0, 0, 1))});
    r.generators[{2, 1}] =
        ShiftOp(3, {term(3, [g](const Point& s) { return I * (g[1] - g[0] - s[0]) + 0.5; }, sh(-1, 0, 1)),
                    term(3, [g](const Point& s) { return I * (g[1] - g[0] - s[0] - s[1] + s[2]) + 0.5; }, sh(0, -1, 0))});
    r.generators[{3, 2}] = ShiftOp(3, {term(3, [g](const Point& s) { return I * (g[2] - g[1] - s[2]) + 0.5; }, sh(0, 0, -1))});
    return r;
}

// Realization acting on the L-side (dual) module.
inline Realization dual_realization(const Realization& r) {
    switch (r.kind) {
        case RealizationKind::GT: return gt_dual(r.params);
        case RealizationKind::GT_modified: {
            Realization d = gt_modified(r.params.dual());
            d.params = r.params;
            return d;
        }
        case RealizationKind::GG: return gg_realization(r.params.dual());
        case RealizationKind::GG_modified: return gg_modified(r.params, true);
        default: throw NoPrintedVector(std::string("no dual Whittaker model for ") + kind_name(r.kind));
    }
}

// Transposed ("primed") generators with respect to the bilinear pairing.
inline std::map<std::pair<int, int>, ShiftOp> primed(const Realization& r) {
    if (r.differential()) throw DomainError("primed operators are defined for difference realizations");
    std::map<std::pair<int, int>, ShiftOp> out;
    for (const auto& [ij, gen] : r.generators) out[ij] = transpose(gen.shift_op());
    return out;
}

// Whittaker vectors exactly as the realization defines them; L-side vectors
// live in the dual module (conjugate spectral parameter).
inline std::pair<WhittakerVector, WhittakerVector> whittaker_vectors(const Realization& r) {
    using WV = WhittakerVector;
    const auto g = r.params.gamma;
    const auto gb = r.params.gamma_bar();
    auto pack = [&](AnalyticFn L, AnalyticFn R) {
        return std::make_pair(WV{WV::Side::L, r.kind, std::move(L)}, WV{WV::Side::R, r.kind, std::move(R)});
    };
    switch (r.kind) {
        case RealizationKind::GT:
        case RealizationKind::GT_modified: {
            AnalyticFn L, R;
            if (r.ell == 1) {
                L = AnalyticFn(1, [](const Point& t) { return std::exp(-kPi * t[0] / 2.0); });
                R = AnalyticFn(1, [g](const Point& t) {
                    cplx e = kPi * t[0] / 2.0;
                    for (int j = 0; j < 2; ++j) e += log_gamma_any(I * (g[j] - t[0]) + 0.5);
                    return std::exp(e);
                });
            } else {
                L = AnalyticFn(3, [](const Point& t) { return std::exp(-kPi * (t[0] + t[1] + t[2]) / 2.0); });
                R = AnalyticFn(3, [g](const Point& t) {
                    cplx e = kPi * (t[0] - t[1] - t[2]) / 2.0;
                    for (int j = 1; j <= 2; ++j) {
                        e += log_gamma_any(I * (t[j] - t[0]) + 0.5);
                        for (int i = 0; i < 3; ++i) e += log_gamma_any(I * (g[i] - t[j]) + 0.5);
                    }
                    return std::exp(e);
                });
            }
            if (r.kind == RealizationKind::GT_modified) {
                const AnalyticFn mu1 = gt_mu1(r.ell);
                L = mu1 * L;
                R = mu1 * R;
            }
            return pack(L, R);
        }
        case RealizationKind::GG: {
            if (r.ell == 1) {
                const cplx c = I * (gb[1] - gb[0]) - 0.5;
                return pack(AnalyticFn(1, [c](const Point& t) { return std::exp(c * t[0] - std::exp(-t[0])); }),
                            AnalyticFn(1, [](const Point& t) { return std::exp(0.5 * t[0] - std::exp(t[0])); }));
            }
            const cplx c1 = I * (gb[1] - gb[0]) - 0.5, c2 = I * (gb[2] - gb[1]) - 0.5;
            return pack(AnalyticFn(3,
                                   [c1, c2](const Point& t) {
                                       return std::exp(c1 * t[0] - std::exp(t[1] - t[0]) + c2 * (t[1] + t[2]) -
                                                       std::exp(-t[1]) - std::exp(-t[2]));
                                   }),
                        AnalyticFn(3, [](const Point& t) {
                            return std::exp(0.5 * (t[0] + t[1] + t[2]) - std::exp(t[0] - t[2]) - std::exp(t[1]) -
                                            std::exp(t[2]));
                        }));
        }
        case RealizationKind::GG_modified: {
            if (r.ell == 1) {
                const double c = std::pow(2 * kPi, -0.5);
                return pack(AnalyticFn(1, [c, gb](const Point& s) { return c * gamma(I * (gb[0] - gb[1] + s[0]) + 0.5); }),
                            AnalyticFn(1, [c](const Point& s) { return c * gamma(0.5 - I * s[0]); }));
            }
            const double c = std::pow(2 * kPi, -1.5);
            return pack(AnalyticFn(3,
                                   [c, gb](const Point& s) {
                                       return c * std::exp(log_gamma_any(I * (gb[0] - gb[1] + s[0]) + 0.5) +
                                                           log_gamma_any(I * (gb[1] - gb[2] + s[2]) + 0.5) +
                                                           log_gamma_any(I * (gb[0] - gb[2] + s[0] + s[1]) + 1.0));
                                   }),
                        AnalyticFn(3, [c](const Point& s) {
                            return c * std::exp(log_gamma_any(0.5 - I * s[1]) + log_gamma_any(0.5 - I * s[0]) +
                                                log_gamma_any(1.0 - I * s[0] - I * s[2]));
                        }));
        }
        default:
            throw NoPrintedVector(std::string("no Whittaker vectors are printed for ") + kind_name(r.kind) +
                                  (r.kind == RealizationKind::GT_shifted ? "; use the GT_modified vectors" : ""));
    }
}

namespace detail {

inline SampleSet realization_samples(const Realization& r, std::uint64_t seed, int n_points = 20, int n_tests = 2) {
    // Keep clear of the 1/(tau21 - tau22) coefficient poles of the gl3 GT operators.
    auto accept = [](const Point& z) { return z.n < 3 || std::abs(z[1] - z[2]) > 0.1; };
    return make_samples(r.arity(), seed, n_points, n_tests, 1.0, r.differential() ? 0.0 : 0.1, accept);
}

}  // namespace detail

inline IdentityReport check_whittaker_defining(const Realization& r,
                                               const std::pair<WhittakerVector, WhittakerVector>& vectors,
                                               std::uint64_t seed = 7, double h = 1e-3) {
    const Realization dual = dual_realization(r);
    const SampleSet s = detail::realization_samples(r, seed);
    WorstCase worst;
    // Normalized by |w| so that the residual is |(E w + w)/w|.
    auto rel = [&](cplx ew, cplx w) { worst.update(ew / w, -1.0); };
    for (int j = 1; j <= r.ell; ++j)
        for (const auto& z : s.points) {
            rel(r.E(j, j + 1).apply_at(vectors.second.fn, z, h), vectors.second.fn(z));
            rel(dual.E(j + 1, j).apply_at(vectors.first.fn, z, h), vectors.first.fn(z));
        }
    return worst.report(std::string("whittaker_defining/") + kind_name(r.kind) + "/ell=" + std::to_string(r.ell),
                        r.params.echo());
}

struct Relation {
    std::string name;
    Generator lhs;
    Generator rhs;
};

inline std::vector<Relation> gl_relations(const Realization& r, double h = 1e-3) {
    std::vector<Relation> out;
    const int n = r.ell + 1;
    auto zero = [&]() -> Generator {
        if (r.differential()) return DiffOp(r.arity());
        return ShiftOp::zero(r.arity());
    };
    auto nm = [](const char* tag, int a, int b, int c, int d) {
        return std::string(tag) + "[E" + std::to_string(a) + std::to_string(b) + ",E" + std::to_string(c) + std::to_string(d) + "]";
    };
    // Cartan action on printed root generators.
    for (int i = 1; i <= n; ++i)
        for (const auto& [jk, gen] : r.generators) {
            const auto [j, k] = jk;
            if (j == k) continue;
            const double c = (i == j) - (i == k);
            out.push_back({nm("", i, i, j, k), bracket(r.E(i, i), gen, h), c * gen});
        }
    for (int i = 1; i < n; ++i)
        out.push_back({nm("", i, i + 1, i + 1, i), bracket(r.E(i, i + 1), r.E(i + 1, i), h), r.E(i, i) - r.E(i + 1, i + 1)});
    if (n == 3) {
        out.push_back({nm("", 1, 2, 3, 2), bracket(r.E(1, 2), r.E(3, 2), h), zero()});
        out.push_back({nm("", 2, 1, 2, 3), bracket(r.E(2, 1), r.E(2, 3), h), zero()});
        if (!r.differential()) {
            // Serre relations; nested FD brackets of the differential model are too noisy to be useful.
            out.push_back({"[E12,[E12,E23]]", bracket(r.E(1, 2), bracket(r.E(1, 2), r.E(2, 3))), zero()});
            out.push_back({"[E23,[E23,E12]]", bracket(r.E(2, 3), bracket(r.E(2, 3), r.E(1, 2))), zero()});
            out.push_back({"[E21,[E21,E32]]", bracket(r.E(2, 1), bracket(r.E(2, 1), r.E(3, 2))), zero()});
            out.push_back({"[E32,[E32,E21]]", bracket(r.E(3, 2), bracket(r.E(3, 2), r.E(2, 1))), zero()});
        }
    }
    return out;
}

inline IdentityReport check_relations(const std::string& name, const std::vector<Relation>& rels, const SampleSet& s,
                                      const std::string& echo, double h = 1e-3) {
    WorstCase worst;
    std::string worst_name;
    for (const auto& rel : rels) {
        WorstCase w;
        for (const auto& f : s.tests)
            for (const auto& z : s.points) w.update(rel.lhs.apply_at(f, z, h), rel.rhs.apply_at(f, z, h));
        if (worst_name.empty() || w.residual > worst.residual) {
            worst = w;
            worst_name = rel.name;
        }
    }
    return worst.report(name + " worst=" + worst_name, echo);
}

inline IdentityReport check_gl_commutations(const Realization& r, std::uint64_t seed = 11, double h = 1e-3) {
    return check_relations(std::string("gl_commutations/") + kind_name(r.kind) + "/ell=" + std::to_string(r.ell),
                           gl_relations(r, h), detail::realization_samples(r, seed), r.params.echo(), h);
}

// [X', Y'] = -[X, Y]' for the transposed generators.
inline IdentityReport check_opposite_relations(const Realization& r, std::uint64_t seed = 13) {
    const auto pr = primed(r);
    std::vector<Relation> rels;
    for (const auto& [a, x] : r.generators)
        for (const auto& [b, y] : r.generators) {
            if (!(a < b)) continue;
            const std::string nm = "[E" + std::to_string(a.first) + std::to_string(a.second) + "',E" +
                                   std::to_string(b.first) + std::to_string(b.second) + "']";
            rels.push_back({nm, commutator(pr.at(a), pr.at(b)),
                            -1.0 * transpose(commutator(x.shift_op(), y.shift_op()))});
        }
    return check_relations(std::string("opposite_relations/") + kind_name(r.kind) + "/ell=" + std::to_string(r.ell), rels,
                           detail::realization_samples(r, seed), r.params.echo());
}

}  // namespace whitlab
