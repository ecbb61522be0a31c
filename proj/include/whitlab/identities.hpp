#pragma once

#include "report.hpp"

namespace whitlab {

namespace detail {

inline constexpr double kReFloor = 0.05;

inline void require_re(const std::vector<cplx>& zs, const char* what) {
    for (cplx z : zs)
        if (!(z.real() > kReFloor))
            throw PreconditionViolated(std::string(what) + ": parameter " + format_complex(z) + " has Re <= 0.05");
}

// log(1 + e^t) without overflow.
inline cplx softplus(cplx t) {
    if (t.real() > 0) return t + std::log(1.0 + std::exp(-t));
    return std::log(1.0 + std::exp(t));
}

}  // namespace detail

// (1/2pi) int prod Gamma(a_i - i g) prod Gamma(b_j + i g) dg = prod Gamma(a_j + b_i) / Gamma(sum a + sum b).
inline IdentityReport barnes_first(std::array<cplx, 2> a, std::array<cplx, 2> b, const QuadSpec& spec = {}) {
    detail::require_re({a[0], a[1], b[0], b[1]}, "barnes_first");
    auto f = [a, b](const Point& z) {
        const cplx t = z[0];
        return std::exp(log_gamma_any(a[0] - I * t) + log_gamma_any(a[1] - I * t) + log_gamma_any(b[0] + I * t) +
                        log_gamma_any(b[1] + I * t));
    };
    QuadResult q = integrate_line(f, Contour::real(1), spec);
    const cplx lhs = q.value / (2 * kPi);
    cplx e = -log_gamma_any(a[0] + a[1] + b[0] + b[1]);
    for (cplx ai : a)
        for (cplx bj : b) e += log_gamma_any(ai + bj);
    return make_report("barnes_first", lhs, std::exp(e), q, echo_list("a", {a[0], a[1]}) + " " + echo_list("b", {b[0], b[1]}));
}

namespace detail {

// int prod_i Gamma(a_i + i t) Gamma(a_i - i t) / (Gamma(2it) Gamma(-2it)) dt over R.
template <std::size_t N>
QuadResult weyl_pair_integral(const std::array<cplx, N>& a, const QuadSpec& spec) {
    auto f = [a](const Point& z) {
        const cplx t = z[0];
        cplx e = 0.0;
        for (cplx ai : a) e += log_gamma_any(ai + I * t) + log_gamma_any(ai - I * t);
        return reciprocal_gamma_pair(2.0 * t) * std::exp(e);
    };
    return integrate_line(f, Contour::real(1), spec);
}

}  // namespace detail

// (1/2pi) int prod Gamma(a_i +- i g) / (Gamma(2ig) Gamma(-2ig)) dg = 2 prod_{i<j} Gamma(a_i + a_j) / Gamma(sum a).
inline IdentityReport gustafson_n1(std::array<cplx, 4> a, const QuadSpec& spec = {}) {
    detail::require_re({a.begin(), a.end()}, "gustafson_n1");
    QuadResult q = detail::weyl_pair_integral(a, spec);
    cplx e = -log_gamma_any(a[0] + a[1] + a[2] + a[3]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) e += log_gamma_any(a[i] + a[j]);
    return make_report("gustafson_n1", q.value / (2 * kPi), 2.0 * std::exp(e), q, echo_list("a", {a.begin(), a.end()}));
}

// (1/4pi) int prod_{i=1}^3 Gamma(a_i +- i t) / (Gamma(2it) Gamma(-2it)) dt = prod_{i<j} Gamma(a_i + a_j).
inline IdentityReport glo11(std::array<cplx, 3> a, const QuadSpec& spec = {}) {
    detail::require_re({a.begin(), a.end()}, "glo11");
    QuadResult q = detail::weyl_pair_integral(a, spec);
    cplx e = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) e += log_gamma_any(a[i] + a[j]);
    return make_report("glo11", q.value / (4 * kPi), std::exp(e), q, echo_list("a", {a.begin(), a.end()}));
}

// Gamma(z) = int e^{z u - e^u} du.
inline IdentityReport euler_gamma(cplx z, const QuadSpec& spec = {}) {
    detail::require_re({z}, "euler_gamma");
    auto f = [z](const Point& u) { return std::exp(z * u[0] - std::exp(u[0])); };
    QuadResult q = integrate_line(f, Contour::real(1), spec);
    return make_report("euler_gamma", q.value, gamma(z), q, echo_list("z", {z}));
}

// B(a, b) = int e^{a t} / (1 + e^t)^{a+b} dt.
inline IdentityReport beta_integral(cplx a, cplx b, const QuadSpec& spec = {}) {
    detail::require_re({a, b}, "beta_integral");
    auto f = [a, b](const Point& t) { return std::exp(a * t[0] - (a + b) * detail::softplus(t[0])); };
    QuadResult q = integrate_line(f, Contour::real(1), spec);
    const cplx rhs = std::exp(log_gamma_any(a) + log_gamma_any(b) - log_gamma_any(a + b));
    return make_report("beta_integral", q.value, rhs, q, echo_list("a", {a}) + " " + echo_list("b", {b}));
}

// Residue of f at a simple pole by the 32-node trapezoid rule on |z - p| = r.
inline cplx residue_estimate(const AnalyticFn& f, cplx pole, double radius = 0.02, int nodes = 32) {
    cplx acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const cplx e = std::exp(I * (2 * kPi * k / nodes));
        acc += f(pole + radius * e) * e;
    }
    return acc * radius / double(nodes);
}

// lhs: int_R f - int_{R - i kappa} f. rhs: the jump predicted from the declared
// poles strictly between the two lines, -2 pi i sum Res (zero if none).
inline IdentityReport contour_shift_residual(const AnalyticFn& f, double kappa, const std::vector<cplx>& poles,
                                             const QuadSpec& spec = {}) {
    if (f.arity() != 1) throw ArityMismatch("contour shift is one-dimensional");
    auto g = [&f](const Point& z) { return f(z); };
    const QuadResult q0 = integrate_line(g, Contour::real(1), spec);
    const QuadResult q1 = integrate_line(g, Contour::line(kappa), spec);
    const double lo = std::min(0.0, -kappa), hi = std::max(0.0, -kappa);
    cplx res = 0.0;
    for (cplx p : poles)
        if (p.imag() > lo && p.imag() < hi) res += residue_estimate(f, p);
    const double orient = kappa > 0 ? -1.0 : 1.0;
    QuadResult q = q0;
    q.err_estimate += q1.err_estimate;
    q.n_evals += q1.n_evals;
    q.value = q0.value - q1.value;
    return make_report("contour_shift", q.value, orient * 2 * kPi * I * res, q, "kappa=" + format_real(kappa));
}

}  // namespace whitlab
