#pragma once

#include "identities.hpp"
#include "realizations.hpp"

namespace whitlab {

// An integral kernel with its delta factors already eliminated. The kernel
// maps functions of `in` variables to functions of `out` variables; the
// deltas fix some `in` variables as affine functions of `out` and of the
// remaining free `in` variables (free_count of them, integrated over R).
struct ReducedKernel {
    std::string name;
    int in_arity = 1;
    int out_arity = 1;
    int free_count = 0;
    std::function<Point(const Point& out, const Point& free)> constraint_map;
    AnalyticFn prefactor;  // depends on `out` only
    std::function<cplx(const Point& out, const Point& in)> density;

    cplx integrand(const AnalyticFn& f, const Point& out, const Point& free) const {
        const Point in = constraint_map(out, free);
        if (!f.admits(in)) throw StripExhausted(name + ": delta support leaves the analyticity strip of f");
        return density(out, in) * f(in);
    }
};

inline QuadResult apply_reduced(const ReducedKernel& k, const AnalyticFn& f, const Point& out, const QuadSpec& spec = {}) {
    if (f.arity() != k.in_arity) throw ArityMismatch(k.name + ": function arity differs from the kernel input");
    if (out.n != k.out_arity) throw ArityMismatch(k.name + ": output point has the wrong arity");
    const cplx pre = k.prefactor(out);
    if (k.free_count == 0) {
        QuadResult q;
        q.value = pre * k.integrand(f, out, Point(0));
        return q;
    }
    if (k.free_count != 1) throw DimensionUnsupported("reduced kernels integrate over at most one free variable");
    QuadResult q = integrate_line([&](const Point& w) { return k.integrand(f, out, w); }, Contour::real(1), spec);
    q.value *= pre;
    q.err_estimate *= std::abs(pre);
    return q;
}

// ---------------------------------------------------------------- gl2

enum class Gl2Kernel { BR, BL, BLdag, N };

inline const char* gl2_kernel_name(Gl2Kernel w) {
    switch (w) {
        case Gl2Kernel::BR: return "BR";
        case Gl2Kernel::BL: return "BL";
        case Gl2Kernel::BLdag: return "BLdag";
        case Gl2Kernel::N: return "N";
    }
    return "?";
}

namespace detail {

inline void require_gl2(const SpectralParams& p) {
    if (p.ell != 1) throw RankUnsupported("gl2 kernels need ell = 1");
}

inline Point pt1(cplx a) { return Point{a}; }

// e^{i Arg Gamma(i(l2 - tau) + 1/2)}
inline cplx n_phase(double l2, double tau) {
    const cplx g = log_gamma(I * (l2 - tau) + 0.5);
    return std::exp(I * g.imag());
}

}  // namespace detail

inline ReducedKernel gl2_kernel(Gl2Kernel which, const SpectralParams& p) {
    detail::require_gl2(p);
    const auto g = p.gamma;
    const auto gb = p.gamma_bar();
    ReducedKernel k;
    k.name = std::string("gl2/") + gl2_kernel_name(which);
    k.prefactor = AnalyticFn::constant(1, 1.0);
    switch (which) {
        case Gl2Kernel::BR:
            // delta(g1 + s - tau)
            k.constraint_map = [g](const Point& t, const Point&) { return detail::pt1(t[0] - g[0]); };
            k.density = [g](const Point& t, const Point&) {
                return std::exp(kPi * t[0] / 2.0 + log_gamma_any(I * (g[1] - t[0]) + 0.5));
            };
            break;
        case Gl2Kernel::BL:
            k.constraint_map = [gb](const Point& t, const Point&) { return detail::pt1(t[0] - gb[0]); };
            k.density = [gb](const Point& t, const Point& s) {
                return std::exp(-kPi * t[0] / 2.0) * rgamma(I * (gb[0] - gb[1] + s[0]) + 0.5);
            };
            break;
        case Gl2Kernel::BLdag:
            // output variable is s, the delta fixes tau = g1 + s
            k.constraint_map = [g](const Point& s, const Point&) { return detail::pt1(g[0] + s[0]); };
            k.density = [g](const Point& s, const Point& t) {
                return std::exp(-kPi * t[0] / 2.0) * rgamma(I * (g[1] - g[0] - s[0]) + 0.5);
            };
            break;
        case Gl2Kernel::N: {
            const double l1 = p.lambda[0], l2 = p.lambda[1];
            k.constraint_map = [l1](const Point& t, const Point&) { return detail::pt1(t[0] - l1); };
            k.density = [l2](const Point& t, const Point&) { return detail::n_phase(l2, t[0].real()); };
            break;
        }
    }
    return k;
}

inline cplx gl2_apply_kernel(Gl2Kernel which, const AnalyticFn& f, const SpectralParams& p, double tau) {
    if (which == Gl2Kernel::N && p.eps != 0.0) throw PreconditionViolated("the unitary kernel N is defined at eps = 0");
    return apply_reduced(gl2_kernel(which, p), f, detail::pt1(tau)).value;
}

// sigma(tau) = e^{-pi tau/2} / |Gamma(i(l2 - tau) + 1/2)| on the real line.
inline double gl2_sigma(double lambda2, double tau) {
    return std::exp(-kPi * tau / 2 - log_gamma(I * (lambda2 - tau) + 0.5).real());
}

inline double gl2_sigma_closed_form(double lambda2, double tau) {
    return std::exp(-kPi * lambda2 / 2) * std::sqrt((1 + std::exp(2 * kPi * (lambda2 - tau))) / (2 * kPi));
}

// The gl2 kernel lemmas at the sample points `taus`: kernel actions on the
// Whittaker vectors, the B_L-dagger relation, and the unitary kernel N.
inline std::vector<IdentityReport> check_gl2_lemmas(const SpectralParams& p, const std::vector<double>& taus) {
    detail::require_gl2(p);
    const auto gt = whittaker_vectors(gt_realization(p));
    const auto gg = whittaker_vectors(gg_modified(p));
    const cplx mu1 = gt_mu1(1)(0.0);
    const auto& phiL = gg.first.fn;
    const auto& phiR = gg.second.fn;
    WorstCase br, bl, fix, dag;
    for (double t : taus) {
        br.update(gl2_apply_kernel(Gl2Kernel::BR, phiR, p, t), mu1 * gt.second.fn(t));
        bl.update(gl2_apply_kernel(Gl2Kernel::BL, phiL, p, t), mu1 * gt.first.fn(t));
        const AnalyticFn brphi(1, [p, phiR](const Point& z) {
            return apply_reduced(gl2_kernel(Gl2Kernel::BR, p), phiR, z).value;
        });
        fix.update(gl2_apply_kernel(Gl2Kernel::BLdag, brphi, p, t), phiR(t));
        // B_L-dagger kernel against B_R kernel on the common support s = tau - g1.
        const Point tau{t}, s{t - p.gamma[0]};
        const cplx ratio = std::exp(-kPi * t - 2.0 * log_gamma_any(I * (p.gamma[1] - t) + 0.5));
        dag.update(gl2_kernel(Gl2Kernel::BLdag, p).density(s, tau), gl2_kernel(Gl2Kernel::BR, p).density(tau, s) * ratio);
    }
    const std::string echo = p.echo();
    return {br.report("gl2/BR*phiR=mu1*psiR", echo), bl.report("gl2/BL*phiL=mu1*psiL", echo),
            fix.report("gl2/BLdag*BR*phiR=phiR", echo), dag.report("gl2/BLdag_kernel=BR_kernel*ratio", echo)};
}

// N at eps = 0: unit modulus, N = sigma B_R = sigma^{-1} B_L, sigma closed form.
inline std::vector<IdentityReport> check_gl2_unitary(const std::vector<double>& lambda, const std::vector<double>& taus) {
    const SpectralParams p = SpectralParams::from_lambda(lambda, 0.0);
    const ReducedKernel N = gl2_kernel(Gl2Kernel::N, p), BR = gl2_kernel(Gl2Kernel::BR, p),
                        BL = gl2_kernel(Gl2Kernel::BL, p);
    const double l2 = lambda[1];
    WorstCase mod, viaR, viaL, sig;
    for (double t : taus) {
        const Point tau{t}, s{t - lambda[0]};
        const cplx n = N.density(tau, s);
        mod.update(std::abs(n), 1.0);
        viaR.update(n, gl2_sigma(l2, t) * BR.density(tau, s));
        viaL.update(n, BL.density(tau, s) / gl2_sigma(l2, t));
        sig.update(gl2_sigma(l2, t), gl2_sigma_closed_form(l2, t));
    }
    const std::string echo = p.echo();
    return {mod.report("gl2/N_phase_modulus", echo), viaR.report("gl2/N=sigma*BR", echo),
            viaL.report("gl2/N=BL/sigma", echo), sig.report("gl2/sigma_closed_form", echo)};
}

// ---------------------------------------------------------------- gl3

// The three gl3 kernels carry 1/(2 sqrt2 pi): the 1/2 Weyl factor of the
// (tau21, tau22) symmetry is split evenly between left and right.
inline const double kGl3KernelNorm = 1.0 / (2 * std::sqrt(2.0) * kPi);

namespace detail {

inline void require_gl3(const SpectralParams& p) {
    if (p.ell != 2) throw RankUnsupported("gl3 kernels need ell = 2");
}

// delta(g1 + s11 + s21 - tau11 + i kappa) delta(g1 + g2 + s11 + s22 - tau21 - tau22), solved for s11, s22.
inline Point gl3_solve_s11_s22(const std::vector<cplx>& g, double kappa, const Point& t, cplx s21) {
    const cplx s11 = t[0] - I * kappa - g[0] - s21;
    const cplx s22 = t[1] + t[2] - g[0] - g[1] - s11;
    return Point{s11, s21, s22};
}

// Same supports solved for s21, s22 in terms of the free s11.
inline Point gl3_solve_s21_s22(const std::vector<cplx>& g, double kappa, const Point& t, cplx s11) {
    const cplx s21 = t[0] - I * kappa - g[0] - s11;
    const cplx s22 = t[1] + t[2] - g[0] - g[1] - s11;
    return Point{s11, s21, s22};
}

}  // namespace detail

inline ReducedKernel gl3_kernel_BR(const SpectralParams& p) {
    detail::require_gl3(p);
    const auto g = p.gamma;
    const double k = p.kappa;
    ReducedKernel r;
    r.name = "gl3/BR";
    r.in_arity = r.out_arity = 3;
    r.free_count = 1;
    r.constraint_map = [g, k](const Point& t, const Point& w) { return detail::gl3_solve_s11_s22(g, k, t, w[0]); };
    r.prefactor = AnalyticFn(3, [g, k](const Point& t) {
        cplx e = kPi * (t[0] - I * k) / 2.0 - log_gamma_any(I * (t[1] - t[2]));
        for (int j = 1; j <= 2; ++j)
            e += log_gamma_any(I * (t[j] - t[0]) - k + 0.5) + log_gamma_any(I * (g[2] - t[j]) + 0.5);
        return kGl3KernelNorm * std::exp(e);
    });
    r.density = [g, k](const Point& t, const Point& s) {
        cplx e = log_gamma_any(I * (g[1] - g[0] - s[0]) + 0.5) - log_gamma_any(0.5 - I * s[1]);
        for (int j = 1; j <= 2; ++j) e += log_gamma_any(I * (t[0] - t[j] - s[1]) + k);
        return std::exp(e);
    };
    return r;
}

inline ReducedKernel gl3_kernel_BL(const SpectralParams& p) {
    detail::require_gl3(p);
    const auto gb = p.gamma_bar();
    const double k = p.kappa;
    ReducedKernel r;
    r.name = "gl3/BL";
    r.in_arity = r.out_arity = 3;
    r.free_count = 1;
    r.constraint_map = [gb, k](const Point& t, const Point& w) { return detail::gl3_solve_s21_s22(gb, k, t, w[0]); };
    r.prefactor = AnalyticFn(3, [gb, k](const Point& t) {
        cplx e = -kPi * (t[0] - I * k) / 2.0 - log_gamma_any(I * (t[1] - t[2]));
        for (int j = 1; j <= 2; ++j)
            e -= log_gamma_any(I * (t[0] - t[j]) + k + 0.5) + log_gamma_any(I * (t[j] - gb[2]) + 0.5);
        return kGl3KernelNorm * std::exp(e);
    });
    r.density = [gb, k](const Point& t, const Point& s) {
        cplx e = log_gamma_any(I * s[1] + 0.5) - log_gamma_any(I * (gb[0] - gb[1] + s[0]) + 0.5);
        for (int j = 1; j <= 2; ++j) e += log_gamma_any(I * (t[0] - t[j] - s[1]) + k);
        return std::exp(e);
    };
    return r;
}

namespace detail {

// B_L-dagger(s; tau) on its support without the 1/Gamma(-i tau21 + i tau22) factor.
inline cplx gl3_BLdag_core(const SpectralParams& p, const Point& s, const Point& t) {
    const auto g = p.gamma;
    const double k = p.kappa;
    cplx e = -kPi * (t[0] - I * k) / 2.0 + log_gamma_any(0.5 - I * s[1]) - log_gamma_any(0.5 - I * (g[0] - g[1] + s[0]));
    for (int j = 1; j <= 2; ++j)
        e += log_gamma_any(-I * (t[0] - t[j] - s[1]) - k) - log_gamma_any(-I * (t[0] - t[j]) - k + 0.5) -
             log_gamma_any(-I * (t[j] - g[2]) + 0.5);
    return kGl3KernelNorm * std::exp(e);
}

// psi-tilde_R(tau11 - i kappa, tau21, tau22) without 1/Gamma(i tau21 - i tau22).
inline cplx gl3_psi_tilde_R_core(const SpectralParams& p, const Point& t) {
    const auto g = p.gamma;
    const cplx t11 = t[0] - I * p.kappa;
    cplx e = kPi * t11 / 2.0;
    for (int j = 1; j <= 2; ++j) {
        e += log_gamma_any(I * (t[j] - t11) + 0.5);
        for (int i = 0; i < 3; ++i) e += log_gamma_any(I * (g[i] - t[j]) + 0.5);
    }
    return std::exp(e) / (std::sqrt(2.0) * std::pow(2 * kPi, 1.5));
}

}  // namespace detail

inline cplx gl3_BLdag_density(const SpectralParams& p, const Point& s, const Point& t) {
    return detail::gl3_BLdag_core(p, s, t) * rgamma(-I * (t[1] - t[2]));
}

inline void require_gl3_BR(const SpectralParams& p) {
    detail::require_gl3(p);
    if (!(p.kappa > 0)) throw ParameterConstraintViolated("gl3 B_R needs kappa > 0");
    if (!(0.5 - p.kappa - p.eps > 0)) throw ParameterConstraintViolated("gl3 B_R needs 1/2 - kappa - eps > 0");
}

inline void require_gl3_BL(const SpectralParams& p) {
    detail::require_gl3(p);
    if (!(p.eps > 0 && p.eps < 0.5)) throw ParameterConstraintViolated("gl3 B_L needs 0 < eps < 1/2");
    if (std::abs(p.gamma[2].imag()) > 1e-15) throw ParameterConstraintViolated("gl3 B_L needs a real third spectral entry");
    if (!(p.kappa + 0.5 - p.eps > 0)) throw ParameterConstraintViolated("gl3 B_L needs kappa + 1/2 - eps > 0");
}

inline QuadResult gl3_BR_apply(const AnalyticFn& f, const SpectralParams& p, const Point& tau, const QuadSpec& spec = {}) {
    require_gl3_BR(p);
    return apply_reduced(gl3_kernel_BR(p), f, tau, spec);
}

inline QuadResult gl3_BL_apply(const AnalyticFn& f, const SpectralParams& p, const Point& tau, const QuadSpec& spec = {}) {
    require_gl3_BL(p);
    return apply_reduced(gl3_kernel_BL(p), f, tau, spec);
}

// psi-tilde of the modified GT model evaluated at (tau11 - i kappa, tau21, tau22).
inline cplx gl3_psi_tilde(const SpectralParams& p, const Point& tau, bool right) {
    const auto v = whittaker_vectors(gt_modified(p));
    const Point z{tau[0] - I * p.kappa, tau[1], tau[2]};
    return right ? v.second.fn(z) : v.first.fn(z);
}

// Barnes parameters of the B_R reduction: the s21 integrand is
// prod_j Gamma(a_j - i s21) prod_i Gamma(b_i + i s21) times constants.
inline std::pair<std::array<cplx, 2>, std::array<cplx, 2>> gl3_BR_barnes_params(const SpectralParams& p, const Point& tau) {
    const auto g = p.gamma;
    const double k = p.kappa;
    std::array<cplx, 2> a{I * (tau[0] - tau[1]) + k, I * (tau[0] - tau[2]) + k};
    std::array<cplx, 2> b{I * (g[0] - tau[0]) + 0.5 - k, I * (g[1] - tau[0]) + 0.5 - k};
    return {a, b};
}

inline IdentityReport check_gl3_BR_action(const SpectralParams& p, const Point& tau, const QuadSpec& spec = {}) {
    const auto phiR = whittaker_vectors(gg_modified(p)).second.fn;
    const QuadResult q = gl3_BR_apply(phiR, p, tau, spec);
    return make_report("gl3/BR*phiR=psiR", q.value, gl3_psi_tilde(p, tau, true), q,
                       p.echo() + " " + echo_list("tau", {tau[0], tau[1], tau[2]}));
}

inline IdentityReport check_gl3_BL_action(const SpectralParams& p, const Point& tau, const QuadSpec& spec = {}) {
    const auto phiL = whittaker_vectors(gg_modified(p)).first.fn;
    const QuadResult q = gl3_BL_apply(phiL, p, tau, spec);
    return make_report("gl3/BL*phiL=psiL", q.value, gl3_psi_tilde(p, tau, false), q,
                       p.echo() + " " + echo_list("tau", {tau[0], tau[1], tau[2]}));
}

// a-vector of the tau_- integral in the fixed-point reduction.
inline std::array<cplx, 3> gl3_fixedpoint_glo11_params(const SpectralParams& p, const Point& s) {
    const auto g = p.gamma;
    const cplx half = (g[0] + g[1] + s[0] + s[2]) / 2.0;
    return {I * (g[0] - half) + 0.5, I * (g[1] - half) + 0.5, I * (half - g[0] - s[0])};
}

// (B_L-dagger B_R phi_R)(s) with B_R phi_R = psi-tilde_R: the tau11 and
// tau_+ deltas are solved, leaving a single tau_- quadrature.
inline IdentityReport gl3_BLdag_BR_fixedpoint(const SpectralParams& p, const Point& s, const QuadSpec& spec = {}) {
    detail::require_gl3(p);
    if (!(p.eps > 0 && p.eps < 0.5)) throw ParameterConstraintViolated("the fixed point needs 0 < eps < 1/2");
    const auto g = p.gamma;
    const double k = p.kappa;
    const cplx t11 = g[0] + s[0] + s[1] + I * k;
    const cplx plus = (g[0] + g[1] + s[0] + s[2]) / 2.0;
    // The two reciprocal Gammas in tau21 - tau22 combine into the entire 1/(Gamma(2i tau_-) Gamma(-2i tau_-)).
    auto f = [&](const Point& w) {
        const Point tau{t11, plus + w[0], plus - w[0]};
        return detail::gl3_BLdag_core(p, s, tau) * detail::gl3_psi_tilde_R_core(p, tau) * reciprocal_gamma_pair(2.0 * w[0]);
    };
    // d tau21 d tau22 = 2 d tau_+ d tau_- and delta(c - 2 tau_+) = delta(c/2 - tau_+)/2 cancel.
    const QuadResult q = integrate_line(f, Contour::real(1), spec);
    const auto phiR = whittaker_vectors(gg_modified(p)).second.fn;
    return make_report("gl3/BLdag*BR*phiR=phiR", q.value, phiR(s), q, p.echo() + " " + echo_list("s", {s[0], s[1], s[2]}));
}

// ---------------------------------------------------------------- kernel identities

enum class AppendixIdentity { E21, E23 };

// E21: on tau11 = g1 + s11 + s21 - i the bracket collected from the two
// shifted kernels equals prod_j (i(tau11 - tau2j) - 1/2), up to a term that
// vanishes on the second support.
inline IdentityReport check_e21_identity(const std::vector<cplx>& g, cplx s11, cplx s21, cplx s22, cplx t21, cplx t22) {
    const cplx t11 = g[0] + s11 + s21 - I;
    const cplx u = I * s21 + 0.5;
    const cplx lhs = -(I * (g[1] - g[0] - s11 - s21 + s22) - 0.5) * u + (I * (t11 - t21 - s21) - 1.0) * (I * (t11 - t22 - s21) - 1.0);
    const cplx rhs = (I * (t11 - t21) - 0.5) * (I * (t11 - t22) - 0.5) - I * (g[0] + g[1] + s11 + s22 - t21 - t22) * u;
    return make_report("appendix/E21", lhs, rhs, {},
                       echo_list("gamma", {g[0], g[1]}) + " " + echo_list("s", {s11, s21, s22}) + " " +
                           echo_list("tau2", {t21, t22}));
}

// E23 in the variables s = i s21 + 1/2, t = i tau11, a_j = i tau2j + 1/2.
// The difference quotient equals minus the right-hand side.
inline IdentityReport check_e23_identity(const std::vector<cplx>& g, cplx s, cplx t, cplx a1, cplx a2) {
    if (std::abs(a1 - a2) < 1e-8) throw DegenerateSample("E23 needs a1 != a2");
    if (std::abs(t - s - a1) < 1e-8 || std::abs(t - s - a2) < 1e-8) throw DegenerateSample("E23 needs t - s - a_i != 0");
    auto P = [&](cplx a) { return (a - I * g[0]) * (a - I * g[1]); };
    const cplx lhs = ((a1 - t) / (t - s - a1) * P(a1) - (a2 - t) / (t - s - a2) * P(a2)) / (a1 - a2);
    const cplx rhs = -(a1 + a2 - I * (g[0] + g[1]) - s + s * (I * g[0] - t + s) * (I * g[1] - t + s) / ((t - s - a1) * (t - s - a2)));
    return make_report("appendix/E23", lhs, rhs, {},
                       echo_list("gamma", {g[0], g[1]}) + " " + echo_list("s,t,a1,a2", {s, t, a1, a2}));
}

// Draws `n` random complex samples (|Re|, |Im| <= 2) keeping 0.1 away from
// the identities' poles and reports the worst one.
inline IdentityReport check_appendixB_identity(AppendixIdentity which, std::uint64_t seed, int n = 100) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto rc = [&] { return cplx(u(rng), u(rng)); };
    IdentityReport worst;
    bool first = true;
    for (int k = 0; k < n;) {
        IdentityReport r;
        if (which == AppendixIdentity::E21) {
            const std::vector<cplx> g{rc(), rc()};
            const cplx s11 = rc(), s21 = rc(), s22 = rc(), t21 = rc(), t22 = rc();
            r = check_e21_identity(g, s11, s21, s22, t21, t22);
        } else {
            const std::vector<cplx> g{rc(), rc()};
            const cplx s = rc(), t = rc(), a1 = rc(), a2 = rc();
            if (std::abs(a1 - a2) < 0.1 || std::abs(t - s - a1) < 0.1 || std::abs(t - s - a2) < 0.1) continue;
            r = check_e23_identity(g, s, t, a1, a2);
        }
        ++k;
        // absolute residual relative to max(|rhs|, 1): both sides are O(1) polynomials/rationals
        r.rel_residual = r.abs_residual / std::max(std::abs(r.rhs), 1.0);
        if (first || r.rel_residual > worst.rel_residual) worst = r;
        first = false;
    }
    return worst;
}

enum class KernelSide { R_gl3, Ldag_gl3, R_gl2, L_gl2 };

inline const char* kernel_side_name(KernelSide s) {
    switch (s) {
        case KernelSide::R_gl3: return "R_gl3";
        case KernelSide::Ldag_gl3: return "Ldag_gl3";
        case KernelSide::R_gl2: return "R_gl2";
        case KernelSide::L_gl2: return "L_gl2";
    }
    return "?";
}

// A kernel on (tau, s) written as smooth(tau, s) times deltas of affine forms.
struct DeltaKernel {
    int n_tau = 1;
    int n_s = 1;
    AnalyticFn smooth;  // arity n_tau + n_s, variables (tau..., s...)
    // Each support is sum coeff * z + constant = 0.
    std::vector<std::pair<std::vector<double>, cplx>> supports;
};

namespace detail {

inline cplx lg(cplx z) { return log_gamma_any(z); }

inline DeltaKernel gl3_CR(const SpectralParams& p) {
    const auto g = p.gamma;
    DeltaKernel k;
    k.n_tau = k.n_s = 3;
    k.smooth = AnalyticFn(6, [g](const Point& z) {
        const cplx t11 = z[0], s11 = z[3], s21 = z[4];
        cplx e = kPi * (t11 - z[1] - z[2]) / 2.0 + lg(I * (g[1] - g[0] - s11) + 0.5) - lg(0.5 - I * s21);
        for (int j = 1; j <= 2; ++j)
            e += lg(I * (t11 - z[j] - s21)) + lg(I * (z[j] - t11) + 0.5) + lg(I * (g[2] - z[j]) + 0.5);
        return std::sqrt(2 * kPi) * std::exp(e);
    });
    k.supports = {{{-1, 0, 0, 1, 1, 0}, g[0]}, {{0, -1, -1, 1, 0, 1}, g[0] + g[1]}};
    return k;
}

// mu_1(tau) B_L-dagger(s; tau11 + i kappa, tau21, tau22), kappa-free.
inline DeltaKernel gl3_CL(const SpectralParams& p) {
    const auto g = p.gamma;
    DeltaKernel k;
    k.n_tau = k.n_s = 3;
    k.smooth = AnalyticFn(6, [g](const Point& z) {
        const cplx t11 = z[0], s11 = z[3], s21 = z[4];
        cplx e = kPi * (z[1] + z[2] - t11) / 2.0 + lg(0.5 - I * s21) - lg(0.5 - I * (g[0] - g[1] + s11));
        for (int j = 1; j <= 2; ++j)
            e += lg(-I * (t11 - z[j] - s21)) - lg(I * (z[j] - t11) + 0.5) - lg(I * (g[2] - z[j]) + 0.5);
        return std::sqrt(2 * kPi) * reciprocal_gamma_pair(z[1] - z[2]) * std::exp(e);
    });
    k.supports = {{{-1, 0, 0, 1, 1, 0}, g[0]}, {{0, -1, -1, 1, 0, 1}, g[0] + g[1]}};
    return k;
}

inline DeltaKernel gl2_kernel_full(Gl2Kernel which, const SpectralParams& p) {
    const ReducedKernel r = gl2_kernel(which, p);
    DeltaKernel k;
    k.smooth = AnalyticFn(2, [r](const Point& z) { return r.density(Point{z[0]}, Point{z[1]}); });
    const cplx g1 = which == Gl2Kernel::BL ? std::conj(p.gamma[0]) : p.gamma[0];
    k.supports = {{{-1, 1}, g1}};
    return k;
}

// Delta offsets produced by a shift: L(z - i d) = L(z) - i coeff.d.
inline std::vector<cplx> support_offsets(const DeltaKernel& k, const Shift& d) {
    std::vector<cplx> out;
    for (const auto& [c, c0] : k.supports) {
        cplx o = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) o -= I * c[m] * double(d[m]);
        out.push_back(o);
    }
    return out;
}

}  // namespace detail

// E_ij(tau) K = E'_ij(s) K as distributions: every term must move the delta
// supports by the same offset, and the smooth parts must then agree on the
// shifted support. Residuals are relative to max(|lhs|, |rhs|, |smooth|).
inline IdentityReport check_kernel_intertwining(KernelSide side, int i, int j, const SpectralParams& p,
                                                std::uint64_t seed = 17, int n_points = 20) {
    DeltaKernel k;
    ShiftOp lhs, rhs;
    const bool gl3 = side == KernelSide::R_gl3 || side == KernelSide::Ldag_gl3;
    if (gl3) detail::require_gl3(p);
    else detail::require_gl2(p);
    const int nt = gl3 ? 3 : 1, n = 2 * nt;
    switch (side) {
        case KernelSide::R_gl3:
            k = detail::gl3_CR(p);
            lhs = embed(gt_realization(p).E(i, j).shift_op(), n, 0);
            rhs = embed(transpose(gg_modified(p).E(i, j).shift_op()), n, nt);
            break;
        case KernelSide::Ldag_gl3:
            k = detail::gl3_CL(p);
            lhs = embed(gg_modified(p).E(i, j).shift_op(), n, nt);
            rhs = embed(transpose(gt_realization(p).E(i, j).shift_op()), n, 0);
            break;
        case KernelSide::R_gl2:
            k = detail::gl2_kernel_full(Gl2Kernel::BR, p);
            lhs = embed(gt_realization(p).E(i, j).shift_op(), n, 0);
            rhs = embed(transpose(gg_modified(p).E(i, j).shift_op()), n, nt);
            break;
        case KernelSide::L_gl2:
            k = detail::gl2_kernel_full(Gl2Kernel::BL, p);
            lhs = embed(gt_dual(p).E(i, j).shift_op(), n, 0);
            rhs = embed(transpose(gg_modified(p, true).E(i, j).shift_op()), n, nt);
            break;
    }
    const std::string name = std::string("kernel_intertwining/") + kernel_side_name(side) + "/E" + std::to_string(i) +
                             std::to_string(j);
    // All terms of both sides must land on one common shifted support.
    std::vector<cplx> offset;
    bool have = false, consistent = true;
    for (const ShiftOp* op : {&lhs, &rhs})
        for (const auto& t : op->terms()) {
            const auto o = detail::support_offsets(k, t.shift);
            if (!have) offset = o, have = true;
            for (std::size_t m = 0; m < o.size(); ++m)
                if (std::abs(o[m] - offset[m]) > 1e-12) consistent = false;
        }
    if (!consistent) {
        IdentityReport r = make_report(name, 1.0, 0.0, {}, p.echo() + " support offsets differ between terms");
        r.rel_residual = 1.0;
        return r;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    WorstCase worst;
    for (int m = 0; m < n_points;) {
        Point z(n);
        for (int a = 0; a < nt; ++a) z[a] = u(rng);
        if (gl3 && std::abs(z[1] - z[2]) < 0.1) continue;
        ++m;
        if (gl3) {
            // free s21; s11 and s22 from the shifted supports
            z[4] = u(rng);
            z[3] = z[0] - k.supports[0].second - z[4] - offset[0];
            z[5] = z[1] + z[2] - k.supports[1].second - z[3] - offset[1];
        } else {
            z[1] = z[0] - k.supports[0].second - offset[0];
        }
        const cplx a = lhs.apply_at(k.smooth, z), b = rhs.apply_at(k.smooth, z);
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(k.smooth(z)), kResidualFloor});
        const double r = std::abs(a - b) / scale;
        if (r >= worst.residual) {
            worst.residual = r;
            worst.lhs = a;
            worst.rhs = b;
        }
    }
    return worst.report(name, p.echo());
}

inline std::vector<IdentityReport> check_kernel_intertwining_all(KernelSide side, const SpectralParams& p,
                                                                 std::uint64_t seed = 17) {
    std::vector<IdentityReport> out;
    const int n = (side == KernelSide::R_gl3 || side == KernelSide::Ldag_gl3) ? 3 : 2;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (std::abs(i - j) > 1) continue;
            out.push_back(check_kernel_intertwining(side, i, j, p, seed));
        }
    return out;
}

}  // namespace whitlab
