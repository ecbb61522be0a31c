// Checks the first Barnes lemma at a point given on the command line, e.g.
//   sample_barnes 0.5 0.3 0.7 -0.2 0.4 0.1 0.9 0
// for a = (0.5+0.3i, 0.7-0.2i), b = (0.4+0.1i, 0.9).

#include <cstdio>
#include <cstdlib>

#include <whitlab/identities.hpp>

using namespace whitlab;

int main(int argc, char** argv) {
    double v[8] = {0.5, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0};
    if (argc == 9)
        for (int k = 0; k < 8; ++k) v[k] = std::atof(argv[k + 1]);
    else if (argc != 1) {
        std::fprintf(stderr, "usage: %s [a1re a1im a2re a2im b1re b1im b2re b2im]\n", argv[0]);
        return 3;
    }
    try {
        const IdentityReport r = barnes_first({cplx(v[0], v[1]), cplx(v[2], v[3])}, {cplx(v[4], v[5]), cplx(v[6], v[7])});
        std::printf("%s\n  %s\n", r.name.c_str(), r.params_echo.c_str());
        std::printf("  integral     %s\n  closed form  %s\n", format_complex(r.lhs).c_str(), format_complex(r.rhs).c_str());
        std::printf("  rel residual %.3e  (%ld integrand evaluations)\n", r.rel_residual, r.quad.n_evals);
        return r.rel_residual < 1e-8 ? 0 : 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
}
