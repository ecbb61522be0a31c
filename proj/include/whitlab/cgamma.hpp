#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace whitlab {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline bool near_pole(cplx z) {
    if (std::abs(z.imag()) > 1e-12 || z.real() > 0.5) return false;
    return std::abs(z.real() - std::round(z.real())) < 1e-12;
}

// Stirling series for log Gamma(w), valid once |w| >= 10 with Re w >= 0.
inline cplx stirling_series(cplx w) {
    static constexpr double c[] = {1.0 / 12,          -1.0 / 360,       1.0 / 1260,
                                   -1.0 / 1680,       1.0 / 1188,       -691.0 / 360360,
                                   1.0 / 156,         -3617.0 / 122400};
    const cplx r = 1.0 / w;
    const cplx r2 = r * r;
    cplx s = c[7];
    for (int k = 6; k >= 0; --k) s = s * r2 + c[k];
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2 * kPi) + s * r;
}

inline int shift_count(cplx z) {
    const double target = std::abs(z.imag()) >= 10 ? 0.0 : 10.0;
    return z.real() >= target ? 0 : static_cast<int>(std::ceil(target - z.real()));
}

}  // namespace detail

// log Gamma(z) on an unspecified sheet: exp() of it is Gamma(z). This is the
// cheap variant every integrand uses, since integrands only ever exponentiate.
inline cplx log_gamma_any(cplx z) {
    if (detail::near_pole(z)) throw PoleError("Gamma pole at " + std::to_string(z.real()));
    const int n = detail::shift_count(z);
    if (n == 0) return detail::stirling_series(z);
    cplx prod = 1.0;
    cplx logsum = 0.0;
    for (int k = 0; k < n; ++k) {
        prod *= z + double(k);
        if (std::abs(prod) > 1e150) {
            logsum += std::log(prod);
            prod = 1.0;
        }
    }
    return detail::stirling_series(z + double(n)) - logsum - std::log(prod);
}

// Principal (continuous from the positive axis) branch of log Gamma.
inline cplx log_gamma(cplx z) {
    if (detail::near_pole(z)) throw PoleError("Gamma pole at " + std::to_string(z.real()));
    const int n = detail::shift_count(z);
    cplx acc = detail::stirling_series(z + double(n));
    double mod = 0.0;
    double arg = 0.0;
    cplx prod = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx w = z + double(k);
        arg += std::arg(w);
        prod *= w;
        if (std::abs(prod) > 1e150) {
            mod += std::log(std::abs(prod));
            prod = 1.0;
        }
    }
    mod += std::log(std::abs(prod));
    return acc - cplx(mod, arg);
}

inline cplx gamma(cplx z) {
    const cplx lg = log_gamma_any(z);
    if (lg.real() > 709.0) throw RangeError("Gamma overflows at |z| = " + std::to_string(std::abs(z)));
    return std::exp(lg);
}

// 1 / Gamma(z), entire: zero at the poles instead of an error.
inline cplx rgamma(cplx z) {
    if (detail::near_pole(z)) return 0.0;
    return std::exp(-log_gamma_any(z));
}

// Leading Stirling envelope sqrt(2 pi) e^{-pi|t|/2} |t|^{sigma-1/2} of |Gamma(sigma+it)|.
inline double stirling_envelope(double sigma, double t) {
    if (std::abs(t) < 5) throw DomainError("stirling_envelope needs |t| >= 5");
    return std::sqrt(2 * kPi) * std::exp(-kPi * std::abs(t) / 2) * std::pow(std::abs(t), sigma - 0.5);
}

// 1/(Gamma(ix) Gamma(-ix)) = x sinh(pi x)/pi, the measure factor of the GT pairing.
inline cplx reciprocal_gamma_pair(cplx x) {
    if (std::abs(x) < 1e-8) return x * x * (1.0 + kPi * kPi * x * x / 6.0);
    return x * std::sinh(kPi * x) / kPi;
}

}  // namespace whitlab
