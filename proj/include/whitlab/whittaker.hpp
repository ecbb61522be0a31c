#pragma once

#include "realizations.hpp"

namespace whitlab {

struct TorusPoint {
    std::vector<double> x;
};

enum class Rep { MB, Givental, Modified };

inline const char* rep_name(Rep r) {
    switch (r) {
        case Rep::MB: return "mb";
        case Rep::Givental: return "givental";
        case Rep::Modified: return "modified";
    }
    return "?";
}

struct WhittakerValue {
    cplx value{};
    Rep rep = Rep::MB;
    QuadResult quad{};
};

namespace detail {

inline void require_point(const SpectralParams& p, const TorusPoint& x) {
    if (p.ell >= 3) throw DimensionUnsupported("Whittaker integrals are evaluated for ell = 1, 2 only");
    if (p.ell < 1) throw RankUnsupported("rank must be positive");
    if (static_cast<int>(x.x.size()) != p.ell + 1) throw ArityMismatch("torus point must have ell + 1 entries");
    for (double v : x.x)
        if (!std::isfinite(v)) throw DomainError("torus point has non-finite entries");
}

// Gamma(i(g - t) + 1/2) on the real t-line needs Re > 0, i.e. Im g < 1/2.
inline void require_gamma_arg(cplx arg, const char* what) {
    if (!(arg.real() > 0)) throw GammaArgumentViolation(std::string(what) + ": Gamma argument has non-positive real part on the contour");
}

inline WhittakerValue finish(Rep rep, cplx pre, QuadResult q) {
    q.value *= pre;
    q.err_estimate *= std::abs(pre);
    return {q.value, rep, q};
}

}  // namespace detail

// A Whittaker integral at a fixed torus point: value = prefactor * int integrand.
// MB and modified integrands separate as amplitude(t) e^{i freq.t} with the
// x-dependence only in freq, which frozen-rule evaluators exploit.
struct WhittakerIntegral {
    Rep rep = Rep::MB;
    int dim = 1;
    cplx prefactor = 1.0;
    std::function<cplx(const Point&)> integrand;
    std::function<cplx(const Point&)> amplitude;  // empty when not separable
    std::vector<double> freq;
};

namespace detail {

inline WhittakerIntegral separable(Rep rep, cplx pre, std::function<cplx(const Point&)> amp, std::vector<double> freq) {
    WhittakerIntegral w;
    w.rep = rep;
    w.dim = static_cast<int>(freq.size());
    w.prefactor = pre;
    w.amplitude = amp;
    w.freq = freq;
    w.integrand = [amp, freq](const Point& t) {
        cplx ph = 0.0;
        for (std::size_t k = 0; k < freq.size(); ++k) ph += freq[k] * t[static_cast<int>(k)];
        return std::exp(I * ph) * amp(t);
    };
    return w;
}

}  // namespace detail

inline WhittakerIntegral mb_integral(const SpectralParams& p, const TorusPoint& X) {
    detail::require_point(p, X);
    const auto g = p.gamma;
    const auto& x = X.x;
    for (cplx gi : g) detail::require_gamma_arg(I * gi + 0.5, "psi_mb");
    if (p.ell == 1) {
        const double u = x[0] - x[1];
        auto amp = [g](const Point& t) {
            return std::exp(log_gamma_any(I * (g[0] - t[0]) + 0.5) + log_gamma_any(I * (g[1] - t[0]) + 0.5));
        };
        const cplx pre = std::exp(I * (g[0] + g[1]) * x[1] - u / 2) / (2 * kPi);
        return detail::separable(Rep::MB, pre, amp, {u});
    }
    const double u1 = x[0] - x[1], u2 = x[1] - x[2];
    auto amp = [g](const Point& t) {
        cplx e = 0.0;
        for (int j = 1; j <= 2; ++j) {
            e += log_gamma_any(I * (t[j] - t[0]) + 0.5);
            for (int i = 0; i < 3; ++i) e += log_gamma_any(I * (g[i] - t[j]) + 0.5);
        }
        return reciprocal_gamma_pair(t[1] - t[2]) * std::exp(e);
    };
    // 1/2 is the Weyl factor of the (tau21, tau22) symmetry of the integrand.
    const cplx pre = 0.5 * std::exp(I * (g[0] + g[1] + g[2]) * x[2] - (x[0] - x[2])) / std::pow(2 * kPi, 3.0);
    return detail::separable(Rep::MB, pre, amp, {u1, u2, u2});
}

// Superpotential exponent of the Givental integrand (log-space, then exp).
inline WhittakerIntegral givental_integral(const SpectralParams& p, const TorusPoint& X) {
    detail::require_point(p, X);
    const auto g = p.gamma;
    const auto x = X.x;
    WhittakerIntegral w;
    w.rep = Rep::Givental;
    if (p.ell == 1) {
        w.integrand = [g, x](const Point& t) {
            const cplx T = t[0];
            return std::exp(I * g[1] * (x[0] + x[1] - T) + I * g[0] * T - std::exp(x[0] - T) - std::exp(T - x[1]));
        };
        return w;
    }
    w.dim = 3;
    w.integrand = [g, x](const Point& t) {
        const cplx T11 = t[0], T21 = t[1], T22 = t[2];
        const cplx F = I * (g[1] - g[2]) * (T21 + T22) + I * (g[0] - g[1]) * T11 - std::exp(x[0] - T21) -
                       std::exp(T21 - x[1]) - std::exp(x[1] - T22) - std::exp(T22 - x[2]) - std::exp(T21 - T11) -
                       std::exp(T11 - T22);
        return std::exp(F);
    };
    w.prefactor = std::exp(I * g[2] * (x[0] + x[1] + x[2]));
    return w;
}

inline WhittakerIntegral modified_integral(const SpectralParams& p, const TorusPoint& X) {
    detail::require_point(p, X);
    const auto g = p.gamma;
    const auto& x = X.x;
    if (p.ell == 1) {
        detail::require_gamma_arg(0.5 - I * (g[0] - g[1]), "psi_modified");
        const double u = x[0] - x[1];
        auto amp = [g](const Point& s) { return std::exp(log_gamma_any(0.5 - I * s[0]) + log_gamma_any(0.5 - I * (g[0] - g[1] + s[0]))); };
        const cplx pre = std::exp(I * (g[0] * x[0] + g[1] * x[1]) - u / 2) / (2 * kPi);
        return detail::separable(Rep::Modified, pre, amp, {u});
    }
    detail::require_gamma_arg(1.0 - I * (g[0] - g[2]), "psi_modified");
    detail::require_gamma_arg(0.5 - I * (g[1] - g[2]), "psi_modified");
    detail::require_gamma_arg(0.5 - I * (g[0] - g[1]), "psi_modified");
    const double a = x[0] - x[1], b = x[0] - x[2], c = x[1] - x[2];
    auto amp = [g](const Point& s) {
        const cplx s11 = s[0], s21 = s[1], s22 = s[2];
        return std::exp(log_gamma_any(0.5 - I * s21) + log_gamma_any(0.5 - I * s11) + log_gamma_any(1.0 - I * (s11 + s22)) +
                        log_gamma_any(1.0 - I * (g[0] - g[2] + s11 + s21)) + log_gamma_any(0.5 - I * (g[1] - g[2] + s22)) +
                        log_gamma_any(0.5 - I * (g[0] - g[1] + s11)));
    };
    const cplx pre = std::exp(I * (g[0] * x[0] + g[1] * x[1] + g[2] * x[2]) - x[0] + x[2]) / std::pow(2 * kPi, 3.0);
    return detail::separable(Rep::Modified, pre, amp, {b, a, c});
}

inline WhittakerIntegral whittaker_integral(Rep rep, const SpectralParams& p, const TorusPoint& x) {
    switch (rep) {
        case Rep::MB: return mb_integral(p, x);
        case Rep::Givental: return givental_integral(p, x);
        case Rep::Modified: return modified_integral(p, x);
    }
    throw DomainError("unknown representation");
}

inline WhittakerValue evaluate(const WhittakerIntegral& w, const QuadSpec& spec = {}) {
    const auto& f = w.integrand;
    QuadResult q = w.dim == 1 ? integrate_line(f, Contour::real(1), spec) : integrate_tensor(f, Contour::real(w.dim), spec);
    return detail::finish(w.rep, w.prefactor, q);
}

inline WhittakerValue psi_mb(const SpectralParams& p, const TorusPoint& x, const QuadSpec& spec = {}) {
    return evaluate(mb_integral(p, x), spec);
}

inline WhittakerValue psi_givental(const SpectralParams& p, const TorusPoint& x, const QuadSpec& spec = {}) {
    return evaluate(givental_integral(p, x), spec);
}

inline WhittakerValue psi_modified(const SpectralParams& p, const TorusPoint& x, const QuadSpec& spec = {}) {
    return evaluate(modified_integral(p, x), spec);
}

inline WhittakerValue psi(Rep rep, const SpectralParams& p, const TorusPoint& x, const QuadSpec& spec = {}) {
    switch (rep) {
        case Rep::MB: return psi_mb(p, x, spec);
        case Rep::Givental: return psi_givental(p, x, spec);
        case Rep::Modified: return psi_modified(p, x, spec);
    }
    throw DomainError("unknown representation");
}

// Torus point with the given simple-root coordinates u_i = x_i - x_{i+1} and last entry `base`.
inline TorusPoint torus_from_u(const std::vector<double>& u, double base = 0.0) {
    TorusPoint t;
    t.x.assign(u.size() + 1, base);
    for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) t.x[i] = t.x[i + 1] + u[i];
    return t;
}

// Normalized matrix element: Psi with its dependence on the centre of mass and
// the e^{-rho(x)} factor stripped, a function of u alone.
inline cplx phi_normalized(const SpectralParams& p, const std::vector<double>& u, Rep rep, const QuadSpec& spec = {},
                           double base = 0.0) {
    if (static_cast<int>(u.size()) != p.ell) throw ArityMismatch("u must have ell entries");
    const TorusPoint X = torus_from_u(u, base);
    const auto& x = X.x;
    const cplx v = psi(rep, p, X, spec).value;
    if (p.ell == 1) return std::exp(-I * (p.gamma[0] + p.gamma[1]) * x[1] + (x[0] - x[1]) / 2) * v;
    return std::exp(-I * p.gamma_sum() * x[2] + x[0] - x[2]) * v;
}

inline cplx phi_hat_closed_form(const SpectralParams& p, const std::vector<double>& q) {
    const auto g = p.gamma;
    if (static_cast<int>(q.size()) != p.ell) throw ArityMismatch("p must have ell entries");
    if (p.ell == 1) return gamma(I * (g[0] - q[0]) + 0.5) * gamma(I * (g[1] - q[0]) + 0.5) / std::sqrt(2 * kPi);
    if (p.ell != 2) throw DimensionUnsupported("closed form is available for ell = 1, 2");
    cplx e = -log_gamma_any(I * (p.gamma_sum() - q[0] - q[1]) + 2.0);
    for (int i = 0; i < 3; ++i) e += log_gamma_any(I * (g[i] - q[0]) + 1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) e += log_gamma_any(I * (g[i] + g[j] - q[1]) + 1.0);
    return std::exp(e) / (2 * kPi);
}

// Fourier transform of the gl3 Mellin-Barnes normalized element after the
// tau11 and tau_+ integrations: a single tau_- integral.
inline QuadResult phi_hat_mb_integral_result(const SpectralParams& p, const std::vector<double>& q, const QuadSpec& spec = {}) {
    if (p.ell != 2) throw DimensionUnsupported("the tau_- integral is the gl3 Fourier transform");
    if (q.size() != 2) throw ArityMismatch("p must have two entries");
    const auto g = p.gamma;
    std::array<cplx, 4> a;
    for (int i = 0; i < 3; ++i) a[i] = I * (g[i] - q[1] / 2) + 0.5;
    a[3] = I * (q[1] / 2 - q[0]) + 0.5;
    for (cplx ai : a) detail::require_gamma_arg(ai, "phi_hat_mb_integral");
    auto f = [a](const Point& t) {
        cplx e = 0.0;
        for (cplx ai : a) e += log_gamma_any(ai + I * t[0]) + log_gamma_any(ai - I * t[0]);
        return reciprocal_gamma_pair(2.0 * t[0]) * std::exp(e);
    };
    QuadResult r = integrate_line(f, Contour::real(1), spec);
    const double pre = 1.0 / (2 * std::pow(2 * kPi, 2.0));
    r.value *= pre;
    r.err_estimate *= pre;
    return r;
}

inline cplx phi_hat_mb_integral(const SpectralParams& p, const std::vector<double>& q, const QuadSpec& spec = {}) {
    return phi_hat_mb_integral_result(p, q, spec).value;
}

// K_nu(z) = 1/2 int e^{-z cosh t + nu t} dt, independent of the Whittaker code paths.
inline cplx bessel_k_oracle(cplx nu, double z, const QuadSpec& spec = {}) {
    if (!(z > 0)) throw DomainError("bessel_k_oracle needs z > 0");
    auto f = [nu, z](const Point& t) { return std::exp(-z * std::cosh(t[0]) + nu * t[0]); };
    return 0.5 * integrate_line(f, Contour::real(1), spec).value;
}

// 2 e^{i(g1+g2)(x1+x2)/2} K_{i(g1-g2)}(2 e^{(x1-x2)/2}).
inline cplx psi_gl2_bessel(const SpectralParams& p, const TorusPoint& X, const QuadSpec& spec = {}) {
    const auto g = p.gamma;
    const auto& x = X.x;
    return 2.0 * std::exp(I * (g[0] + g[1]) * (x[0] + x[1]) / 2.0) *
           bessel_k_oracle(I * (g[0] - g[1]), 2 * std::exp((x[0] - x[1]) / 2), spec);
}

}  // namespace whitlab
