// Evaluates the gl2 Whittaker function through its three integral
// representations and compares each with the Macdonald-function formula.

#include <cstdio>

#include <whitlab/whittaker.hpp>

using namespace whitlab;

int main() {
    const auto p = SpectralParams::from_lambda({0.4, -0.1}, 0.15);
    QuadSpec spec;
    spec.rel_tol = 1e-12;

    std::printf("%-14s %-26s %-10s %-10s %-10s\n", "x", "Psi (Bessel)", "MB", "Givental", "modified");
    for (const TorusPoint x : {TorusPoint{{0.0, 0.0}}, TorusPoint{{0.5, -0.5}}, TorusPoint{{-1.0, 0.3}}, TorusPoint{{1.2, 1.0}}}) {
        const cplx ref = psi_gl2_bessel(p, x, spec);
        auto rel = [&](Rep r) { return std::abs(psi(r, p, x, spec).value - ref) / std::abs(ref); };
        std::printf("(%5.2f,%5.2f)  %+.6e%+.6ei  %.1e    %.1e    %.1e\n", x.x[0], x.x[1], ref.real(), ref.imag(), rel(Rep::MB),
                    rel(Rep::Givental), rel(Rep::Modified));
    }
}
