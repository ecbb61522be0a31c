#include <catch_amalgamated.hpp>

#include <whitlab/realizations.hpp>

using namespace whitlab;
using Catch::Matchers::WithinAbs;

namespace {

AnalyticFn fn1(std::function<cplx(cplx)> f) {
    return AnalyticFn(1, [f](const Point& z) { return f(z[0]); });
}

const SampleSet& samples1() {
    static const SampleSet s = make_samples(1, 5, 20, 2);
    return s;
}

}  // namespace

TEST_CASE("shift_apply", "[funcspace]") {
    const ShiftOp down = ShiftOp::shift(1, 0, 1);
    const AnalyticFn f = fn1([](cplx t) { return std::exp(kPi * t / 2.0); });
    const AnalyticFn g = shift_apply(down, f);
    for (double t : {-1.0, 0.0, 0.7}) CHECK(std::abs(g(t) - (-I) * f(t)) < 1e-14);

    const AnalyticFn same = shift_apply(ShiftOp::identity(1), f);
    CHECK(same(cplx(0.3, 0.1)) == f(cplx(0.3, 0.1)));
}

TEST_CASE("gl2 raising operator fixes the right Whittaker vector", "[funcspace]") {
    const auto p = SpectralParams::from_lambda({0.4, -0.1}, 0.2);
    const Realization r = gt_realization(p);
    const auto [wl, wr] = whittaker_vectors(r);
    const AnalyticFn e12 = shift_apply(r.E(1, 2).shift_op(), wr.fn);
    for (double t : {-1.3, -0.2, 0.5, 1.1}) CHECK(std::abs(e12(t) + wr.fn(t)) < 1e-12 * std::abs(wr.fn(t)));
}

TEST_CASE("strip bookkeeping", "[funcspace]") {
    const AnalyticFn narrow(1, [](const Point& z) { return z[0]; }, {Strip{-0.5, 0.5}});
    CHECK_THROWS_AS(ShiftOp::shift(1, 0, 1).apply_at(narrow, Point{cplx(0.0)}), StripExhausted);
    const AnalyticFn g = shift_apply(ShiftOp::shift(1, 0, 1), AnalyticFn(1, [](const Point& z) { return z[0]; }, {Strip{-2.0, 0.5}}));
    CHECK(g.strip()[0].lo == -1.0);
    CHECK(g.strip()[0].hi == 0.5);
}

TEST_CASE("arity mismatches", "[funcspace]") {
    CHECK_THROWS_AS(shift_compose(ShiftOp::identity(1), ShiftOp::identity(2)), ArityMismatch);
    CHECK_THROWS_AS(AnalyticFn(0, [](const Point&) { return cplx(0); }), ArityMismatch);
    CHECK_THROWS_AS(AnalyticFn(7, [](const Point&) { return cplx(0); }), ArityMismatch);
    CHECK_THROWS_AS(DiffOp(AnalyticFn::constant(1, 0.0), {{AnalyticFn::constant(1, 1.0), 1}}), ArityMismatch);
}

TEST_CASE("shift_compose", "[funcspace]") {
    const ShiftOp down = ShiftOp::shift(1, 0, 1), up = ShiftOp::shift(1, 0, -1);
    CHECK(shift_op_distance(shift_compose(down, up), ShiftOp::identity(1), samples1()) < 1e-15);

    const ShiftOp tau = ShiftOp::multiplication(fn1([](cplx t) { return t; }));
    const AnalyticFn id = fn1([](cplx t) { return t; });
    const Point zero{cplx(0.0)};
    const cplx a = shift_compose(tau, down).apply_at(id, zero);
    const cplx b = shift_compose(down, tau).apply_at(id, zero);
    CHECK(std::abs((b - a) - (-I) * down.apply_at(id, zero)) < 1e-15);

    const ShiftOp z = shift_compose(down, ShiftOp::zero(1));
    CHECK(z.terms().empty());
}

TEST_CASE("action is compatible with composition", "[funcspace][property]") {
    const auto p = SpectralParams::from_lambda({0.2, -0.3, 0.1}, 0.15);
    const Realization r = gt_realization(p);
    const SampleSet s = detail::realization_samples(r, 21);
    for (const auto& [ij, x] : r.generators)
        for (const auto& [kl, y] : r.generators) {
            const ShiftOp xy = shift_compose(x.shift_op(), y.shift_op());
            const double res = operator_residual(
                [&](const AnalyticFn& f, const Point& z) { return xy.apply_at(f, z); },
                [&](const AnalyticFn& f, const Point& z) { return x.shift_op().apply_at(shift_apply(y.shift_op(), f), z); }, s);
            CHECK(res < 1e-12);
        }
}

TEST_CASE("operators built in different orders compare equal", "[funcspace][property]") {
    const AnalyticFn c1 = fn1([](cplx t) { return t * t; });
    const AnalyticFn c2 = fn1([](cplx t) { return std::exp(t); });
    ShiftOp a(1, {{c1, {1}}, {c2, {-1}}, {c1, {0}}});
    ShiftOp b(1, {{c1, {0}}, {c2, {-1}}, {c1, {1}}});
    CHECK(shift_op_distance(a, b, samples1()) < 1e-10);
    CHECK(a.terms().size() == 3);
    // Equal shifts merge.
    ShiftOp m(1, {{c1, {1}}, {c2, {1}}});
    CHECK(m.terms().size() == 1);
}

TEST_CASE("commutator and transpose", "[funcspace]") {
    const auto p = SpectralParams::from_lambda({0.3, -0.4}, 0.1);
    const Realization r = gt_realization(p);
    const SampleSet s = make_samples(1, 9, 5, 1);
    const ShiftOp c = commutator(r.E(1, 2).shift_op(), r.E(2, 1).shift_op());
    CHECK(shift_op_distance(c, r.E(1, 1).shift_op() - r.E(2, 2).shift_op(), s) < 1e-11);
    CHECK(shift_op_distance(commutator(r.E(1, 1).shift_op(), r.E(1, 2).shift_op()), r.E(1, 2).shift_op(), s) < 1e-11);

    const Realization m = gg_modified(p);
    const auto pr = primed(m);
    const ShiftOp lhs = commutator(pr.at({1, 2}), pr.at({2, 1}));
    const ShiftOp rhs = -1.0 * transpose(commutator(m.E(1, 2).shift_op(), m.E(2, 1).shift_op()));
    CHECK(shift_op_distance(lhs, rhs, samples1()) < 1e-10);
}

TEST_CASE("transpose is adjoint for the bilinear pairing", "[funcspace][property]") {
    // int (A f) g = int f (A' g) for entire decaying test functions.
    const AnalyticFn c = fn1([](cplx t) { return 0.5 + I * t; });
    const ShiftOp a(1, {{c, {1}}, {fn1([](cplx t) { return t * t; }), {-1}}});
    const AnalyticFn f = gaussian_test(Point{cplx(0.2, 0.3)});
    const AnalyticFn g = gaussian_test(Point{cplx(-0.4, -0.1)});
    auto pairing = [](const AnalyticFn& u, const AnalyticFn& v) {
        return integrate_line([&](const Point& z) { return u(z) * v(z); }, Contour::real(1), {}).value;
    };
    const cplx lhs = pairing(shift_apply(a, f), g);
    const cplx rhs = pairing(f, shift_apply(transpose(a), g));
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
}

TEST_CASE("diff_apply", "[funcspace]") {
    const DiffOp d(AnalyticFn::constant(1, 0.0), {{AnalyticFn::constant(1, 1.0), 0}});
    const AnalyticFn f = fn1([](cplx t) { return std::exp(2.0 * t); });
    CHECK_THAT(diff_apply(d, f, 1e-3)(0.0).real(), WithinAbs(2.0, 1e-9));
    CHECK_THROWS_AS(diff_apply(d, f, 1e-7), StepInvalid);
    CHECK_THROWS_AS(diff_apply(d, f, 0.05), StepInvalid);

    const DiffOp zero(1);
    CHECK(diff_apply(zero, f, 1e-3)(0.4) == cplx(0.0));

    const auto p = SpectralParams::from_gamma({0.3, -0.2});
    const Realization gg = gg_realization(p);
    const auto [wl, wr] = whittaker_vectors(gg);
    const AnalyticFn e12 = diff_apply(gg.E(1, 2).diff_op(), wr.fn, 1e-3);
    for (double t : {-0.8, 0.1, 0.6}) CHECK(std::abs(e12(t) + wr.fn(t)) < 1e-7 * std::abs(wr.fn(t)));
}

TEST_CASE("difference quotient converges at fourth order", "[funcspace][property]") {
    const DiffOp d(AnalyticFn::constant(1, 0.0), {{AnalyticFn::constant(1, 1.0), 0}});
    const AnalyticFn f = fn1([](cplx t) { return std::sin(3.0 * t); });
    const double exact = 3.0 * std::cos(3.0 * 0.4);
    const double e1 = std::abs(diff_apply(d, f, 8e-3)(0.4) - exact);
    const double e2 = std::abs(diff_apply(d, f, 4e-3)(0.4) - exact);
    CHECK(std::log2(e1 / e2) >= 3.5);
}
