#pragma once

#include "whittaker.hpp"

namespace whitlab {

using PsiEvaluator = std::function<cplx(const SpectralParams&, const TorusPoint&)>;

struct TodaScanReport {
    std::vector<cplx> ratios;
    cplx mean{};
    double spread = 0.0;
    double fd_step = 0.0;
};

inline void require_fd_step(double h) {
    if (!(h > 1e-4 && h < 1e-2)) throw StepInvalid("finite-difference step must lie in (1e-4, 1e-2)");
}

// H2 psi = -1/2 sum d^2 psi / dx_i^2 + sum_j e^{x_j - x_{j+1}} psi, with
// fourth-order central stencils. The centre value is evaluated first.
inline cplx h2_apply(const PsiEvaluator& psi, const SpectralParams& p, const TorusPoint& x, double h) {
    require_fd_step(h);
    const cplx centre = psi(p, x);
    cplx lap = 0.0;
    for (std::size_t i = 0; i < x.x.size(); ++i) {
        auto at = [&](double d) {
            TorusPoint y = x;
            y.x[i] += d;
            return psi(p, y);
        };
        lap += (-at(2 * h) + 16.0 * at(h) - 30.0 * centre + 16.0 * at(-h) - at(-2 * h)) / (12 * h * h);
    }
    double pot = 0.0;
    for (std::size_t j = 0; j + 1 < x.x.size(); ++j) pot += std::exp(x.x[j] - x.x[j + 1]);
    return -0.5 * lap + pot * centre;
}

inline TodaScanReport eigen_ratio_scan(const PsiEvaluator& psi, const SpectralParams& p, const std::vector<TorusPoint>& grid,
                                       double h) {
    require_fd_step(h);
    if (grid.empty()) throw PreconditionViolated("empty grid");
    for (const auto& x : grid)
        for (double v : x.x)
            if (std::abs(v) > 2.0) throw PreconditionViolated("grid points must satisfy |x_i| <= 2");
    TodaScanReport r;
    r.fd_step = h;
    for (const auto& x : grid) r.ratios.push_back(h2_apply(psi, p, x, h) / psi(p, x));
    for (cplx z : r.ratios) r.mean += z;
    r.mean /= double(r.ratios.size());
    for (cplx a : r.ratios)
        for (cplx b : r.ratios) r.spread = std::max(r.spread, std::abs(a - b));
    return r;
}

// Whittaker evaluator that freezes the adaptive node set at the first point
// of every stencil and reuses it for points within `reuse_radius`. Finite
// differences then differentiate one smooth quadrature sum instead of
// adaptive noise. Separable integrands cache weight * amplitude per node, so
// each further evaluation costs one complex exponential per node; their
// amplitude does not depend on x, so by default one rule serves the whole
// |x_i| <= 2 domain. A negative radius selects that default.
class FrozenWhittaker {
public:
    FrozenWhittaker(Rep rep, QuadSpec spec = {}, double reuse_radius = -1.0)
        : state_(std::make_shared<State>()), rep_(rep), spec_(spec), radius_(reuse_radius) {}

    cplx operator()(const SpectralParams& p, const TorusPoint& x) const {
        State& s = *state_;
        if (!s.valid || p.gamma != s.gamma || !near(x, s.anchor)) refreeze(p, x);
        const WhittakerIntegral w = whittaker_integral(rep_, p, x);
        if (!w.amplitude) return w.prefactor * apply_rule(s.rule, w.integrand);
        std::vector<cplx> part(kChunks, 0.0);
        const std::size_t n = s.rule.size();
        detail::parallel_for(kChunks, [&](std::size_t c) {
            cplx acc = 0.0;
            for (std::size_t j = c * n / kChunks; j < (c + 1) * n / kChunks; ++j) {
                double ph = 0.0;
                for (int k = 0; k < s.rule.dim; ++k) ph += w.freq[k] * s.rule.nodes[j * s.rule.dim + k];
                acc += s.cached[j] * cplx(std::cos(ph), std::sin(ph));
            }
            part[c] = acc;
        });
        cplx total = 0.0;
        for (cplx v : part) total += v;
        return w.prefactor * total;
    }

    std::size_t rule_size() const { return state_->rule.size(); }

private:
    static constexpr std::size_t kChunks = 64;

    struct State {
        bool valid = false;
        std::vector<cplx> gamma;
        TorusPoint anchor;
        QuadRule rule;
        std::vector<cplx> cached;
    };

    bool near(const TorusPoint& a, const TorusPoint& b) const {
        if (a.x.size() != b.x.size()) return false;
        const double r = radius_ >= 0 ? radius_ : (rep_ == Rep::Givental ? 0.05 : 4.0);
        for (std::size_t i = 0; i < a.x.size(); ++i)
            if (std::abs(a.x[i] - b.x[i]) > r) return false;
        return true;
    }

    void refreeze(const SpectralParams& p, const TorusPoint& x) const {
        State& s = *state_;
        const WhittakerIntegral w = whittaker_integral(rep_, p, x);
        s.rule = freeze_rule(w.integrand, Contour::real(w.dim), spec_);
        s.cached.assign(s.rule.size(), 0.0);
        if (w.amplitude)
            detail::parallel_for(s.rule.size(), [&](std::size_t j) { s.cached[j] = s.rule.weights[j] * w.amplitude(s.rule.point(j)); });
        s.gamma = p.gamma;
        s.anchor = x;
        s.valid = true;
    }

    std::shared_ptr<State> state_;
    Rep rep_;
    QuadSpec spec_;
    double radius_;
};

// Eigenvalue (gamma_1^2 + gamma_2^2)/2 of the gl2 Hamiltonian, from the Bessel
// equation z^2 K'' + z K' - (z^2 + nu^2) K = 0 with nu = i(gamma_1 - gamma_2).
inline cplx gl2_toda_eigenvalue(const SpectralParams& p) {
    if (p.ell != 1) throw RankUnsupported("the Bessel reduction is the gl2 case");
    return (p.gamma[0] * p.gamma[0] + p.gamma[1] * p.gamma[1]) / 2.0;
}

}  // namespace whitlab
