#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include <whitlab/identities.hpp>
#include <whitlab/whittaker.hpp>

using namespace whitlab;
using Catch::Matchers::WithinRel;

namespace {

cplx draw(std::mt19937_64& rng, double re_lo, double re_hi, double im) {
    std::uniform_real_distribution<double> ur(re_lo, re_hi), ui(-im, im);
    return {ur(rng), ui(rng)};
}

}  // namespace

TEST_CASE("First Barnes Lemma", "[identities]") {
    const auto half = barnes_first({0.5, 0.5}, {0.5, 0.5});
    CHECK_THAT(half.rhs.real(), WithinRel(1.0, 1e-14));
    CHECK(half.rel_residual < 1e-10);

    const auto mixed = barnes_first({1.0, 0.5}, {0.5, 1.0});
    CHECK_THAT(mixed.rhs.real(), WithinRel(kPi / 8, 1e-14));
    CHECK(mixed.rel_residual < 1e-10);

    std::mt19937_64 rng(42);
    for (int k = 0; k < 20; ++k) {
        const std::array<cplx, 2> a{draw(rng, 0.1, 1.2, 0.5), draw(rng, 0.1, 1.2, 0.5)};
        const std::array<cplx, 2> b{draw(rng, 0.1, 1.2, 0.5), draw(rng, 0.1, 1.2, 0.5)};
        const auto r = barnes_first(a, b);
        INFO(r.params_echo);
        CHECK(r.rel_residual < 1e-8);
    }
    CHECK_THROWS_AS(barnes_first({0.04, 0.5}, {0.5, 0.5}), PreconditionViolated);
}

TEST_CASE("Gustafson integral, n = 1", "[identities]") {
    const auto half = gustafson_n1({0.5, 0.5, 0.5, 0.5});
    CHECK_THAT(half.rhs.real(), WithinRel(2.0, 1e-14));
    CHECK(half.rel_residual < 1e-7);
    CHECK(gustafson_n1({0.3, 0.5, 0.7, 0.9}).rel_residual < 1e-7);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 10; ++k) {
        std::array<cplx, 4> a;
        for (auto& z : a) z = draw(rng, 0.15, 1.0, 0.5);
        const auto r = gustafson_n1(a);
        INFO(r.params_echo);
        CHECK(r.rel_residual < 1e-7);
    }
    CHECK_THROWS_AS(gustafson_n1({0.5, 0.5, 0.5, -0.1}), PreconditionViolated);
}

TEST_CASE("Weyl-pair integral with three parameters", "[identities]") {
    const auto half = glo11({0.5, 0.5, 0.5});
    CHECK_THAT(half.rhs.real(), WithinRel(1.0, 1e-14));
    CHECK(half.rel_residual < 1e-7);
    CHECK(glo11({0.6, 0.8, 1.1}).rel_residual < 1e-7);

    std::mt19937_64 rng(8);
    for (int k = 0; k < 10; ++k) {
        std::array<cplx, 3> a;
        for (auto& z : a) z = draw(rng, 0.15, 1.0, 0.5);
        const auto r = glo11(a);
        INFO(r.params_echo);
        CHECK(r.rel_residual < 1e-7);
    }
}

TEST_CASE("the Weyl-pair measure is finite at the origin", "[identities]") {
    const std::array<cplx, 4> a{0.5, 0.5, 0.5, 0.5};
    cplx e = 0.0;
    for (cplx ai : a) e += 2.0 * log_gamma_any(ai);
    const cplx at_zero = reciprocal_gamma_pair(0.0) * std::exp(e);
    CHECK(std::isfinite(at_zero.real()));
    CHECK(at_zero == cplx(0.0));
}

TEST_CASE("Euler integral", "[identities]") {
    CHECK_THAT(euler_gamma(1.0).lhs.real(), WithinRel(1.0, 1e-10));
    CHECK_THAT(euler_gamma(0.5).lhs.real(), WithinRel(std::sqrt(kPi), 1e-10));
    CHECK(euler_gamma(cplx(2, 1)).rel_residual < 1e-10);
    CHECK_THROWS_AS(euler_gamma(-0.3), PreconditionViolated);
}

TEST_CASE("Beta integral", "[identities]") {
    CHECK_THAT(beta_integral(1.0, 1.0).lhs.real(), WithinRel(1.0, 1e-10));
    CHECK_THAT(beta_integral(0.5, 0.5).lhs.real(), WithinRel(kPi, 1e-10));
    CHECK(beta_integral(0.7, cplx(1.3, 0.2)).rel_residual < 1e-9);
}

TEST_CASE("contour shift across the first pole", "[identities]") {
    const double eps = 0.2;
    const auto p = SpectralParams::from_lambda({0.3, -0.2}, eps);
    const auto w = mb_integral(p, {{0.4, -0.1}});
    const AnalyticFn f(1, [w](const Point& z) { return w.prefactor * w.integrand(z); });
    const cplx pole = p.gamma[0] - 0.5 * I;
    CHECK(std::abs(pole - cplx(0.3, eps - 0.5)) < 1e-15);

    const auto ok = contour_shift_residual(f, 0.25, {pole});
    CHECK(ok.abs_residual < 1e-8);
    CHECK(std::abs(ok.lhs) < 1e-8);

    const auto jump = contour_shift_residual(f, 0.35, {pole});
    // Analytic residue: Gamma(z) has residue 1 at z = 0 and dz/dtau = -i.
    const cplx other = w.prefactor * std::exp(I * (0.4 + 0.1) * pole) * gamma(I * (p.gamma[1] - pole) + 0.5);
    const cplx residue = I * other;
    CHECK(std::abs(jump.lhs - (-2 * kPi * I * residue)) < 1e-4 * std::abs(jump.lhs));
    CHECK(jump.rel_residual < 1e-4);

    const AnalyticFn gauss(1, [](const Point& z) { return std::exp(-z[0] * z[0]); });
    for (double kappa : {0.3, 0.7, 1.0}) CHECK(contour_shift_residual(gauss, kappa, {}).abs_residual < 1e-10);
}

TEST_CASE("identity reports respect parameter symmetries", "[identities][property]") {
    const std::array<cplx, 2> a{cplx(0.4, 0.2), cplx(0.9, -0.1)}, b{cplx(0.3, -0.3), cplx(0.7, 0.4)};
    const auto r0 = barnes_first(a, b);
    const auto r1 = barnes_first({a[1], a[0]}, b);
    const auto r2 = barnes_first(a, {b[1], b[0]});
    CHECK(std::abs(r0.lhs - r1.lhs) < 1e-9 * std::abs(r0.lhs));
    CHECK(std::abs(r0.lhs - r2.lhs) < 1e-9 * std::abs(r0.lhs));

    std::array<cplx, 4> g{cplx(0.3, 0.1), cplx(0.5, -0.2), cplx(0.7, 0.0), cplx(0.9, 0.3)};
    const cplx g0 = gustafson_n1(g).lhs;
    std::sort(g.begin(), g.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    int count = 0;
    do {
        if (++count % 5) continue;
        CHECK(std::abs(gustafson_n1(g).lhs - g0) < 1e-9 * std::abs(g0));
    } while (std::next_permutation(g.begin(), g.end(), [](cplx x, cplx y) { return x.real() < y.real(); }));

    std::array<cplx, 3> h{cplx(0.6, 0.1), cplx(0.8, -0.2), cplx(1.1, 0.2)};
    const cplx h0 = glo11(h).lhs;
    std::sort(h.begin(), h.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    while (std::next_permutation(h.begin(), h.end(), [](cplx x, cplx y) { return x.real() < y.real(); }))
        CHECK(std::abs(glo11(h).lhs - h0) < 1e-9 * std::abs(h0));
}

TEST_CASE("tightening the tolerance does not degrade the residual", "[identities][property]") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
        const std::array<cplx, 2> a{draw(rng, 0.2, 1.0, 0.4), draw(rng, 0.2, 1.0, 0.4)};
        const std::array<cplx, 2> b{draw(rng, 0.2, 1.0, 0.4), draw(rng, 0.2, 1.0, 0.4)};
        QuadSpec s;
        s.rel_tol = 1e-8;
        const double coarse = barnes_first(a, b, s).rel_residual;
        s.rel_tol /= 2;
        const double fine = barnes_first(a, b, s).rel_residual;
        CHECK(fine <= 2 * std::max(coarse, 1e-14));
    }
}
