#include <catch_amalgamated.hpp>

#include <random>

#include <whitlab/intertwiners.hpp>

using namespace whitlab;

namespace {

const SpectralParams& gl3_params() {
    static const SpectralParams p = SpectralParams::from_lambda({0.2, -0.1, 0.3}, 0.2, 0.1);
    return p;
}

void check_all(const std::vector<IdentityReport>& rs, double tol) {
    for (const auto& r : rs) {
        INFO(r.name << " " << r.params_echo);
        CHECK(r.rel_residual < tol);
    }
}

}  // namespace

TEST_CASE("gl2 kernel lemmas", "[intertwiners]") {
    const std::vector<double> taus{-1.0, -0.3, 0.0, 0.4, 1.2};
    check_all(check_gl2_lemmas(SpectralParams::from_lambda({0.3, -0.2}, 0.2), taus), 1e-12);
    check_all(check_gl2_lemmas(SpectralParams::from_lambda({-0.5, 0.1}, 0.35), taus), 1e-12);
}

TEST_CASE("gl2 kernel lemmas on random spectral data", "[intertwiners][property]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ul(-1.0, 1.0), ue(0.05, 0.45);
    for (int k = 0; k < 10; ++k) {
        const auto p = SpectralParams::from_lambda({ul(rng), ul(rng)}, ue(rng));
        check_all(check_gl2_lemmas(p, {-0.7, 0.2, 0.9}), 1e-11);
    }
}

TEST_CASE("gl2 unitary kernel", "[intertwiners]") {
    const std::vector<double> taus{-1.0, -0.3, 0.0, 0.4, 1.2};
    const auto rs = check_gl2_unitary({0.3, -0.2}, taus);
    check_all(rs, 1e-13);
    CHECK(rs.size() == 4);

    // sigma against a direct evaluation of |Gamma| on the real line
    for (double t : taus) {
        const double direct = std::exp(-kPi * t / 2) / std::abs(gamma(I * (-0.2 - t) + 0.5));
        CHECK(std::abs(gl2_sigma(-0.2, t) - direct) < 1e-13 * direct);
    }
    const auto p = SpectralParams::from_lambda({0.3, -0.2}, 0.2);
    const AnalyticFn f = whittaker_vectors(gg_modified(p)).second.fn;
    CHECK_THROWS_AS(gl2_apply_kernel(Gl2Kernel::N, f, p, 0.1), PreconditionViolated);
}

TEST_CASE("gl3 kernels map phi to psi-tilde", "[intertwiners]") {
    const auto& p = gl3_params();
    const std::vector<Point> taus{{0.3, -0.4, 0.5}, {0.0, 0.1, -0.1}, {-0.6, 0.2, 0.9}, {1.1, -0.7, -0.2}, {0.25, 0.5, -0.5}};
    for (const auto& tau : taus) {
        const auto br = check_gl3_BR_action(p, tau);
        const auto bl = check_gl3_BL_action(p, tau);
        INFO(br.params_echo);
        CHECK(br.rel_residual < 1e-9);
        CHECK(bl.rel_residual < 1e-9);
    }
}

TEST_CASE("gl3 B_R action reduces to the first Barnes lemma", "[intertwiners]") {
    const auto& p = gl3_params();
    const Point tau{0.3, -0.4, 0.5};
    const auto [a, b] = gl3_BR_barnes_params(p, tau);
    for (cplx z : {a[0], a[1], b[0], b[1]}) CHECK(z.real() > 0.05);
    CHECK(barnes_first(a, b).rel_residual < 1e-9);
}

TEST_CASE("gl3 fixed point of B_L-dagger B_R", "[intertwiners]") {
    const auto& p = gl3_params();
    for (const Point& s : {Point{0.1, -0.2, 0.3}, Point{0.0, 0.0, 0.0}, Point{-0.4, 0.3, 0.2}}) {
        const auto r = gl3_BLdag_BR_fixedpoint(p, s);
        INFO(r.params_echo);
        CHECK(r.rel_residual < 1e-9);
    }
    const auto a = gl3_fixedpoint_glo11_params(p, Point{0.1, -0.2, 0.3});
    for (cplx z : a) CHECK(z.real() > 0.05);
    CHECK(glo11(a).rel_residual < 1e-9);
}

TEST_CASE("polynomial identities behind E21 and E23", "[intertwiners]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        CHECK(check_appendixB_identity(AppendixIdentity::E21, seed, 100).rel_residual < 1e-12);
        CHECK(check_appendixB_identity(AppendixIdentity::E23, seed, 100).rel_residual < 1e-12);
    }
    const std::vector<cplx> g{cplx(0.1, 0.2), cplx(-0.3, 0.0)};
    CHECK_THROWS_AS(check_e23_identity(g, 0.3, 0.9, cplx(0.2, 0.1), cplx(0.2, 0.1)), DegenerateSample);
    CHECK_THROWS_AS(check_e23_identity(g, 0.3, 0.9, 0.6, 0.1), DegenerateSample);
}

TEST_CASE("kernels intertwine the two realizations", "[intertwiners]") {
    const auto p2 = SpectralParams::from_lambda({0.3, -0.2}, 0.2);
    for (auto side : {KernelSide::R_gl2, KernelSide::L_gl2}) {
        const auto rs = check_kernel_intertwining_all(side, p2);
        CHECK(rs.size() == 4);
        check_all(rs, 1e-12);
    }
    for (auto side : {KernelSide::R_gl3, KernelSide::Ldag_gl3}) {
        const auto rs = check_kernel_intertwining_all(side, gl3_params());
        CHECK(rs.size() == 7);
        check_all(rs, 1e-12);
    }
}

TEST_CASE("gl3 kernel parameter constraints", "[intertwiners]") {
    const Point tau{0.3, -0.4, 0.5};
    const auto no_kappa = SpectralParams::from_lambda({0.2, -0.1, 0.3}, 0.2, 0.0);
    CHECK_THROWS_AS(check_gl3_BR_action(no_kappa, tau), ParameterConstraintViolated);
    const auto wide = SpectralParams::from_lambda({0.2, -0.1, 0.3}, 0.2, 0.35);
    CHECK_THROWS_AS(check_gl3_BR_action(wide, tau), ParameterConstraintViolated);
    const auto flat = SpectralParams::from_lambda({0.2, -0.1, 0.3}, 0.0, 0.1);
    CHECK_THROWS_AS(check_gl3_BL_action(flat, tau), ParameterConstraintViolated);
    CHECK_THROWS_AS(gl3_BLdag_BR_fixedpoint(flat, Point{0.0, 0.0, 0.0}), ParameterConstraintViolated);
}
