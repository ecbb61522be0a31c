#include <catch_amalgamated.hpp>

#include <whitlab/whittaker.hpp>

using namespace whitlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

QuadResult line(const std::function<cplx(cplx)>& f, double kappa = 0.0, QuadSpec spec = {}) {
    return integrate_line([&](const Point& z) { return f(z[0]); }, Contour::line(kappa), spec);
}

}  // namespace

TEST_CASE("QuadSpec validation", "[quadrature]") {
    QuadSpec s;
    s.rel_tol = 0;
    CHECK_THROWS_AS(s.validate(), PreconditionViolated);
    s = {};
    s.max_panels = 3;
    CHECK_THROWS_AS(s.validate(), PreconditionViolated);
    s = {};
    s.initial_radius = -1;
    CHECK_THROWS_AS(s.validate(), PreconditionViolated);
}

TEST_CASE("line integrals with closed forms", "[quadrature]") {
    const auto g = line([](cplx t) { return std::exp(-t * t); });
    CHECK_THAT(g.value.real(), WithinRel(std::sqrt(kPi), 1e-12));
    CHECK(g.err_estimate >= 0.0);
    CHECK(g.n_evals > 0);

    const auto s = line([](cplx t) { return 1.0 / std::cosh(kPi * t); });
    CHECK_THAT(s.value.real(), WithinRel(1.0, 1e-11));

    const auto r = line([](cplx t) { return gamma(0.5 - I * t) * gamma(0.5 + I * t); });
    CHECK_THAT(r.value.real(), WithinRel(kPi, 1e-11));
    CHECK(std::abs(r.value.imag()) < 1e-12);
}

TEST_CASE("tensor integrals", "[quadrature]") {
    const auto g2 = integrate_tensor([](const Point& z) { return std::exp(-z[0] * z[0] - z[1] * z[1]); }, Contour::real(2), {});
    CHECK_THAT(g2.value.real(), WithinRel(kPi, 1e-10));
    const auto g3 = integrate_tensor(
        [](const Point& z) { return std::exp(-z[0] * z[0] - 2.0 * z[1] * z[1] - 0.5 * z[2] * z[2]); }, Contour::real(3), {});
    CHECK_THAT(g3.value.real(), WithinRel(std::pow(kPi, 1.5), 1e-9));
    CHECK_THROWS_AS(integrate_tensor([](const Point&) { return cplx(0); }, Contour::real(4), {}), DimensionUnsupported);

    // The gl2 Givental integrand through the tensor entry point.
    const auto p = SpectralParams::from_gamma({0.0, 0.0});
    const auto w = givental_integral(p, {{0.0, 0.0}});
    const auto q = integrate_tensor(w.integrand, Contour::real(1), {});
    CHECK_THAT(q.value.real(), WithinRel(0.2277877, 1e-6));
}

TEST_CASE("errors surface from the integrator", "[quadrature]") {
    CHECK_THROWS_AS(line([](cplx) { return cplx(1.0); }), DecayProbeFailed);
    QuadSpec tight;
    tight.max_panels = 8;
    tight.rel_tol = 1e-14;
    CHECK_THROWS_AS(line([](cplx t) { return std::exp(-t * t) * std::cos(40.0 * t); }, 0.0, tight), NonConvergence);
    CHECK_THROWS_AS(line([](cplx t) { return std::exp(-t * t) * std::log(t.real() > 0 ? -1.0 : 1.0); }), DomainError);
}

TEST_CASE("integration on a shifted line", "[quadrature]") {
    // Entire integrand: the shift is invisible.
    const auto a = line([](cplx t) { return std::exp(-t * t); }, 0.7);
    CHECK_THAT(a.value.real(), WithinRel(std::sqrt(kPi), 1e-11));
    CHECK(std::abs(a.value.imag()) < 1e-11);
}

TEST_CASE("contour shift invariance for Gamma products below the line", "[quadrature][property]") {
    const double eps = 0.2;
    const auto p = SpectralParams::from_lambda({0.3, -0.2}, eps);
    const auto g = p.gamma;
    auto f = [g](cplx t) { return gamma(I * (g[0] - t) + 0.5) * gamma(I * (g[1] - t) + 0.5) * std::exp(0.4 * I * t); };
    QuadSpec spec;
    const cplx base = line(f, 0.0, spec).value;
    for (double kappa : {0.05, 0.15, 0.25}) {
        const cplx shifted = line(f, kappa, spec).value;
        CHECK(std::abs(shifted - base) < 10 * spec.rel_tol * std::abs(base));
    }
}

TEST_CASE("pole crossing changes the value by 2 pi i times the residue", "[quadrature][property]") {
    // f = e^{-t^2}/(t + 0.3 i): simple pole at -0.3 i with residue e^{0.09}.
    auto f = [](cplx t) { return std::exp(-t * t) / (t + 0.3 * I); };
    const cplx above = line(f, 0.0).value;
    const cplx below = line(f, 0.5).value;
    const cplx jump = 2 * kPi * I * std::exp(0.09);
    CHECK(std::abs((above - below) + jump) < 1e-9);
}

TEST_CASE("refinement is monotone in the panel budget", "[quadrature][property]") {
    auto f = [](const Point& z) { return std::exp(-z[0] * z[0]) * std::cos(6.0 * z[0]); };
    QuadSpec a;
    a.rel_tol = 1e-13;
    QuadSpec b = a;
    b.max_panels = 2 * a.max_panels;
    const auto ra = integrate_line(f, Contour::real(1), a);
    const auto rb = integrate_line(f, Contour::real(1), b);
    CHECK(rb.err_estimate <= ra.err_estimate);
    CHECK_THAT(ra.value.real(), WithinRel(std::sqrt(kPi) * std::exp(-9.0), 1e-11));
}

TEST_CASE("deterministic results", "[quadrature][property]") {
    auto f = [](const Point& z) { return std::exp(-z[0] * z[0] - z[1] * z[1] + 0.3 * I * z[0] * z[1]); };
    const auto r1 = integrate_tensor(f, Contour::real(2), {});
    const auto r2 = integrate_tensor(f, Contour::real(2), {});
    CHECK(r1.value == r2.value);
    CHECK(r1.n_evals == r2.n_evals);
}

TEST_CASE("thread count does not change tensor results", "[quadrature][property]") {
    auto f = [](const Point& z) { return std::exp(-z[0] * z[0] - 0.5 * z[1] * z[1] + 0.3 * I * z[0] * z[1]); };
    const char* saved = std::getenv("WHITLAB_THREADS");
    const std::string keep = saved ? saved : "";
    ::setenv("WHITLAB_THREADS", "1", 1);
    const auto serial = integrate_tensor(f, Contour::real(2), {});
    ::setenv("WHITLAB_THREADS", "4", 1);
    const auto threaded = integrate_tensor(f, Contour::real(2), {});
    if (saved)
        ::setenv("WHITLAB_THREADS", keep.c_str(), 1);
    else
        ::unsetenv("WHITLAB_THREADS");
    CHECK(serial.value == threaded.value);
    CHECK(serial.err_estimate == threaded.err_estimate);
}

TEST_CASE("frozen rules reproduce the adaptive value", "[quadrature]") {
    auto f = [](const Point& z) { return std::exp(-z[0] * z[0] + 0.5 * I * z[0]); };
    const auto rule = freeze_rule(f, Contour::real(1), {});
    CHECK_THAT(apply_rule(rule, f).real(), WithinRel(integrate_line(f, Contour::real(1), {}).value.real(), 1e-13));
}

TEST_CASE("Fourier transform conventions", "[quadrature]") {
    const cplx g0 = fourier_transform([](const Point& z) { return std::exp(-z[0] * z[0] / 2.0); }, {0.0}, {});
    CHECK_THAT(g0.real(), WithinRel(1.0, 1e-12));

    // Euler: (2 pi)^{-1/2} int e^{-i p t} e^{z t - e^t} dt = (2 pi)^{-1/2} Gamma(z - i p).
    const cplx z(0.8, 0.3);
    const double p = 0.6;
    const cplx e = fourier_transform([z](const Point& t) { return std::exp(z * t[0] - std::exp(t[0])); }, {p}, {});
    CHECK(std::abs(e - gamma(z - I * p) / std::sqrt(2 * kPi)) < 1e-10);

    // Parseval for two Gaussians: <f, g> = <f^, g^> with the conjugate-linear pairing.
    auto f = [](const Point& t) { return std::exp(-(t[0] - 0.3) * (t[0] - 0.3)); };
    auto g = [](const Point& t) { return std::exp(-0.5 * (t[0] + 0.2) * (t[0] + 0.2) + 0.4 * I * t[0]); };
    const cplx direct = integrate_line([&](const Point& t) { return f(t) * std::conj(g(Point{std::conj(t[0])})); },
                                       Contour::real(1), {})
                            .value;
    QuadSpec fs;
    fs.rel_tol = 1e-12;
    const cplx hat = integrate_line(
                         [&](const Point& q) {
                             const double k = q[0].real();
                             return fourier_transform(f, {k}, fs) * std::conj(fourier_transform(g, {k}, fs));
                         },
                         Contour::real(1), {})
                         .value;
    CHECK(std::abs(direct - hat) < 1e-10);
}
