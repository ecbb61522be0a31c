#include <catch_amalgamated.hpp>

#include <whitlab/toda.hpp>

using namespace whitlab;

namespace {

std::vector<TorusPoint> gl2_grid() {
    std::vector<TorusPoint> g;
    for (double a : {-0.6, 0.0, 0.6})
        for (double b : {-0.5, 0.1, 0.7}) g.push_back({{a, b}});
    return g;
}

std::vector<TorusPoint> gl3_grid() {
    return {{{0, 0, 0}}, {{0.3, 0, -0.2}}, {{-0.2, 0.1, 0.3}}, {{0.4, -0.3, 0}}, {{0.1, 0.3, -0.3}}};
}

QuadSpec tol(double rel) {
    QuadSpec s;
    s.rel_tol = rel;
    return s;
}

}  // namespace

TEST_CASE("H2 on an exponential", "[toda]") {
    // psi = e^{a.x}: the kinetic part is -|a|^2/2 exactly.
    const std::vector<double> a{0.7, -0.2, 0.4};
    const PsiEvaluator psi = [a](const SpectralParams&, const TorusPoint& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x.x[i];
        return cplx(std::exp(s));
    };
    const auto p = SpectralParams::from_gamma({0.0, 0.0, 0.0});
    for (const auto& x : gl3_grid()) {
        const double expect = -0.5 * (0.49 + 0.04 + 0.16) + std::exp(x.x[0] - x.x[1]) + std::exp(x.x[1] - x.x[2]);
        CHECK(std::abs(h2_apply(psi, p, x, 1e-3) / psi(p, x) - expect) < 1e-8);
    }
}

TEST_CASE("finite-difference step and grid validation", "[toda]") {
    const PsiEvaluator one = [](const SpectralParams&, const TorusPoint&) { return cplx(1.0); };
    const auto p = SpectralParams::from_gamma({0.0, 0.0});
    CHECK_THROWS_AS(h2_apply(one, p, {{0.0, 0.0}}, 1e-5), StepInvalid);
    CHECK_THROWS_AS(eigen_ratio_scan(one, p, gl2_grid(), 0.02), StepInvalid);
    CHECK_THROWS_AS(eigen_ratio_scan(one, p, {}, 1e-3), PreconditionViolated);
    CHECK_THROWS_AS(eigen_ratio_scan(one, p, {{{2.5, 0.0}}}, 1e-3), PreconditionViolated);
    CHECK_THROWS_AS(gl2_toda_eigenvalue(SpectralParams::from_gamma({0.1, 0.0, -0.1})), RankUnsupported);
}

TEST_CASE("gl2 Whittaker functions are Toda eigenfunctions", "[toda]") {
    const std::vector<std::pair<std::vector<cplx>, double>> cases{{{0.5, -0.5}, 0.25}, {{0.0, 0.0}, 0.0}};
    for (const auto& [g, expect] : cases) {
        const auto p = SpectralParams::from_gamma(g);
        CHECK(std::abs(gl2_toda_eigenvalue(p) - expect) < 1e-15);
        for (Rep r : {Rep::Givental, Rep::MB, Rep::Modified}) {
            const auto scan = eigen_ratio_scan(FrozenWhittaker(r, tol(1e-13)), p, gl2_grid(), 1e-3);
            INFO(rep_name(r) << " mean " << scan.mean);
            CHECK(scan.spread < 1e-7);
            CHECK(std::abs(scan.mean - expect) < 1e-7);
        }
    }
}

TEST_CASE("gl2 eigenvalue ratios do not depend on the representation", "[toda][property]") {
    const auto p = SpectralParams::from_gamma({0.3, -0.1});
    const auto base = eigen_ratio_scan(FrozenWhittaker(Rep::Givental, tol(1e-13)), p, gl2_grid(), 1e-3);
    for (Rep r : {Rep::MB, Rep::Modified}) {
        const auto other = eigen_ratio_scan(FrozenWhittaker(r, tol(1e-13)), p, gl2_grid(), 1e-3);
        for (std::size_t k = 0; k < base.ratios.size(); ++k) CHECK(std::abs(other.ratios[k] - base.ratios[k]) < 1e-7);
    }
}

TEST_CASE("gl3 Givental integral is a Toda eigenfunction", "[toda]") {
    const auto p = SpectralParams::from_gamma({0.2, 0.0, -0.2});
    const auto scan = eigen_ratio_scan(FrozenWhittaker(Rep::Givental, tol(1e-7)), p, gl3_grid(), 1e-3);
    CHECK(scan.spread < 1e-4);
    CHECK(std::abs(scan.mean - 0.04) < 1e-4);

    // Permuting the spectral data leaves the eigenvalue unchanged.
    const auto q = SpectralParams::from_gamma({-0.2, 0.2, 0.0});
    const auto perm = eigen_ratio_scan(FrozenWhittaker(Rep::Givental, tol(1e-7)), q, gl3_grid(), 1e-3);
    CHECK(perm.spread < 1e-4);
    CHECK(std::abs(perm.mean - scan.mean) < 1e-4);
}

TEST_CASE("gl3 Mellin-Barnes integral is a Toda eigenfunction", "[toda]") {
    const auto p = SpectralParams::from_gamma({0.2, 0.0, -0.2});
    const auto scan = eigen_ratio_scan(FrozenWhittaker(Rep::MB, tol(1e-6)), p, gl3_grid(), 1e-3);
    CHECK(scan.spread < 1e-4);
    CHECK(std::abs(scan.mean - 0.04) < 1e-4);
}
