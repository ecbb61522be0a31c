#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace whitlab {

inline constexpr double kResidualFloor = 1e-300;

struct IdentityReport {
    std::string name;
    cplx lhs{};
    cplx rhs{};
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    QuadResult quad{};
    std::string params_echo;
};

inline std::string format_complex(cplx z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string echo_list(const std::string& key, const std::vector<cplx>& zs) {
    std::string s = key + "=(";
    for (std::size_t k = 0; k < zs.size(); ++k) s += (k ? "," : "") + format_complex(zs[k]);
    return s + ")";
}

inline IdentityReport make_report(std::string name, cplx lhs, cplx rhs, QuadResult quad = {}, std::string echo = {}) {
    IdentityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_residual = std::abs(lhs - rhs);
    r.rel_residual = r.abs_residual / std::max(std::abs(rhs), kResidualFloor);
    r.quad = quad;
    r.params_echo = std::move(echo);
    return r;
}

// Operator identities compare values that may legitimately vanish (e.g. a
// commutator that should be zero), so they are scaled by max(|lhs|, |rhs|, 1).
struct WorstCase {
    double residual = 0.0;
    cplx lhs{};
    cplx rhs{};

    void update(cplx a, cplx b) {
        const double r = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
        if (r > residual || (residual == 0.0 && lhs == cplx{} && rhs == cplx{})) {
            residual = r;
            lhs = a;
            rhs = b;
        }
    }
    void merge(const WorstCase& o) {
        if (o.residual > residual) *this = o;
    }
    IdentityReport report(std::string name, std::string echo = {}) const {
        IdentityReport r;
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        r.abs_residual = std::abs(lhs - rhs);
        r.rel_residual = residual;
        r.params_echo = std::move(echo);
        return r;
    }
};

}  // namespace whitlab
