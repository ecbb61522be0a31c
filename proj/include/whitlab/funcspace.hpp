#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "cgamma.hpp"

namespace whitlab {

inline constexpr int kMaxArity = 6;

// A point in C^n, n <= kMaxArity. Cheap to copy so integrands never allocate.
struct Point {
    std::array<cplx, kMaxArity> v{};
    int n = 0;

    Point() = default;
    explicit Point(int arity) : n(arity) {}
    Point(std::initializer_list<cplx> xs) : n(static_cast<int>(xs.size())) {
        std::copy(xs.begin(), xs.end(), v.begin());
    }
    cplx& operator[](int k) { return v[k]; }
    const cplx& operator[](int k) const { return v[k]; }
    const cplx* data() const { return v.data(); }
};

// Admissible band of imaginary parts along one axis.
struct Strip {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double y) const { return y >= lo - 1e-12 && y <= hi + 1e-12; }
};

class AnalyticFn {
public:
    using Eval = std::function<cplx(const Point&)>;

    AnalyticFn() = default;
    AnalyticFn(int arity, Eval f, std::vector<Strip> strip = {})
        : arity_(arity), f_(std::make_shared<Eval>(std::move(f))), strip_(std::move(strip)) {
        if (arity_ < 1 || arity_ > kMaxArity) throw ArityMismatch("arity out of range");
        if (strip_.empty()) strip_.assign(arity_, Strip{});
        if (static_cast<int>(strip_.size()) != arity_) throw ArityMismatch("strip size != arity");
    }

    // Constant function.
    static AnalyticFn constant(int arity, cplx c) {
        return AnalyticFn(arity, [c](const Point&) { return c; });
    }

    int arity() const { return arity_; }
    const std::vector<Strip>& strip() const { return strip_; }
    bool valid() const { return static_cast<bool>(f_); }

    bool admits(const Point& z) const {
        for (int k = 0; k < arity_; ++k)
            if (!strip_[k].contains(z[k].imag())) return false;
        return true;
    }

    cplx operator()(const Point& z) const { return (*f_)(z); }
    cplx operator()(cplx z) const {
        Point p(1);
        p[0] = z;
        return (*f_)(p);
    }

private:
    int arity_ = 0;
    std::shared_ptr<const Eval> f_;
    std::vector<Strip> strip_;
};

inline AnalyticFn operator*(const AnalyticFn& a, const AnalyticFn& b) {
    if (a.arity() != b.arity()) throw ArityMismatch("product of functions of different arity");
    std::vector<Strip> s(a.arity());
    for (int k = 0; k < a.arity(); ++k)
        s[k] = {std::max(a.strip()[k].lo, b.strip()[k].lo), std::min(a.strip()[k].hi, b.strip()[k].hi)};
    return AnalyticFn(a.arity(), [a, b](const Point& z) { return a(z) * b(z); }, s);
}

// Imaginary shifts are integer multiples of -i per axis: shift d means
// (e^{d.(-i d/dtau)} f)(tau) = f(tau - i d).
using Shift = std::array<int, kMaxArity>;

struct ShiftTerm {
    AnalyticFn coeff;
    Shift shift{};
};

inline Point shifted(const Point& z, const Shift& d) {
    Point w = z;
    for (int k = 0; k < z.n; ++k) w[k] -= I * double(d[k]);
    return w;
}

class ShiftOp {
public:
    ShiftOp() = default;
    explicit ShiftOp(int arity) : arity_(arity) {}
    ShiftOp(int arity, std::vector<ShiftTerm> terms) : arity_(arity) {
        for (auto& t : terms) add(std::move(t));
    }

    static ShiftOp identity(int arity) { return multiplication(AnalyticFn::constant(arity, 1.0)); }
    static ShiftOp zero(int arity) { return ShiftOp(arity); }
    static ShiftOp multiplication(AnalyticFn c) {
        ShiftOp op(c.arity());
        op.add({std::move(c), Shift{}});
        return op;
    }
    // Pure shift along one axis by d units of -i.
    static ShiftOp shift(int arity, int axis, int d) {
        Shift s{};
        s[axis] = d;
        ShiftOp op(arity);
        op.add({AnalyticFn::constant(arity, 1.0), s});
        return op;
    }

    int arity() const { return arity_; }
    const std::vector<ShiftTerm>& terms() const { return terms_; }

    // Terms with equal shifts are merged into one coefficient (summed pointwise).
    void add(ShiftTerm t) {
        if (t.coeff.arity() != arity_) throw ArityMismatch("term arity differs from operator arity");
        for (auto& u : terms_) {
            if (u.shift == t.shift) {
                AnalyticFn a = u.coeff, b = t.coeff;
                u.coeff = AnalyticFn(arity_, [a, b](const Point& z) { return a(z) + b(z); }, a.strip());
                return;
            }
        }
        terms_.push_back(std::move(t));
        std::sort(terms_.begin(), terms_.end(),
                  [](const ShiftTerm& x, const ShiftTerm& y) { return x.shift < y.shift; });
    }

    // Apply to f at one point without building a new handle.
    cplx apply_at(const AnalyticFn& f, const Point& z) const {
        cplx acc = 0.0;
        for (const auto& t : terms_) {
            const Point w = shifted(z, t.shift);
            if (!f.admits(w)) throw StripExhausted("shifted argument leaves the analyticity strip");
            acc += t.coeff(z) * f(w);
        }
        return acc;
    }

private:
    int arity_ = 0;
    std::vector<ShiftTerm> terms_;
};

inline ShiftOp operator+(const ShiftOp& a, const ShiftOp& b) {
    if (a.arity() != b.arity()) throw ArityMismatch("sum of operators of different arity");
    ShiftOp r = a;
    for (const auto& t : b.terms()) r.add(t);
    return r;
}

inline ShiftOp operator*(cplx c, const ShiftOp& a) {
    ShiftOp r(a.arity());
    for (const auto& t : a.terms()) {
        AnalyticFn f = t.coeff;
        r.add({AnalyticFn(a.arity(), [f, c](const Point& z) { return c * f(z); }, f.strip()), t.shift});
    }
    return r;
}

inline ShiftOp operator-(const ShiftOp& a, const ShiftOp& b) { return a + (-1.0 * b); }

inline AnalyticFn shift_apply(const ShiftOp& op, const AnalyticFn& f) {
    if (op.arity() != f.arity()) throw ArityMismatch("operator and function arity differ");
    std::vector<Strip> s = f.strip();
    for (const auto& t : op.terms())
        for (int k = 0; k < f.arity(); ++k) {
            s[k].lo = std::max(s[k].lo, f.strip()[k].lo + t.shift[k]);
            s[k].hi = std::min(s[k].hi, f.strip()[k].hi + t.shift[k]);
        }
    return AnalyticFn(f.arity(), [op, f](const Point& z) { return op.apply_at(f, z); }, s);
}

// (a b) f = a (b f): coefficients of b are evaluated at a's shifted argument.
inline ShiftOp shift_compose(const ShiftOp& a, const ShiftOp& b) {
    if (a.arity() != b.arity()) throw ArityMismatch("compose of operators of different arity");
    const int n = a.arity();
    ShiftOp r(n);
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            Shift s{};
            for (int k = 0; k < kMaxArity; ++k) s[k] = ta.shift[k] + tb.shift[k];
            AnalyticFn ca = ta.coeff, cb = tb.coeff;
            const Shift da = ta.shift;
            r.add({AnalyticFn(n, [ca, cb, da](const Point& z) { return ca(z) * cb(shifted(z, da)); }), s});
        }
    return r;
}

inline ShiftOp commutator(const ShiftOp& a, const ShiftOp& b) {
    return shift_compose(a, b) - shift_compose(b, a);
}

// Transpose with respect to the bilinear pairing integral of f g over R^n:
// c(tau) e^{shift d} becomes c(tau + i d) e^{shift -d}. This is the
// "primed" operator construction; it reverses products.
inline ShiftOp transpose(const ShiftOp& a) {
    const int n = a.arity();
    ShiftOp r(n);
    for (const auto& t : a.terms()) {
        Shift m{};
        for (int k = 0; k < kMaxArity; ++k) m[k] = -t.shift[k];
        AnalyticFn c = t.coeff;
        r.add({AnalyticFn(n, [c, m](const Point& z) { return c(shifted(z, m)); }), m});
    }
    return r;
}

// Conjugation f -> g op g^{-1} by a nowhere-vanishing multiplier g.
inline ShiftOp conjugate(const ShiftOp& a, const AnalyticFn& g) {
    const int n = a.arity();
    ShiftOp r(n);
    for (const auto& t : a.terms()) {
        AnalyticFn c = t.coeff;
        const Shift d = t.shift;
        r.add({AnalyticFn(n, [c, g, d](const Point& z) { return c(z) * g(z) / g(shifted(z, d)); }), d});
    }
    return r;
}

// Coefficients evaluated at an argument translated by `offset` (shifts kept).
inline ShiftOp translate_argument(const ShiftOp& a, const Point& offset) {
    const int n = a.arity();
    ShiftOp r(n);
    for (const auto& t : a.terms()) {
        AnalyticFn c = t.coeff;
        r.add({AnalyticFn(n,
                          [c, offset](const Point& z) {
                              Point w = z;
                              for (int k = 0; k < z.n; ++k) w[k] += offset[k];
                              return c(w);
                          }),
               t.shift});
    }
    return r;
}

// Embed an operator on n variables into n+m variables starting at `offset`.
inline ShiftOp embed(const ShiftOp& a, int total_arity, int offset) {
    ShiftOp r(total_arity);
    for (const auto& t : a.terms()) {
        Shift s{};
        for (int k = 0; k < a.arity(); ++k) s[offset + k] = t.shift[k];
        AnalyticFn c = t.coeff;
        const int n = a.arity();
        r.add({AnalyticFn(total_arity,
                          [c, n, offset](const Point& z) {
                              Point w(n);
                              for (int k = 0; k < n; ++k) w[k] = z[offset + k];
                              return c(w);
                          }),
               s});
    }
    return r;
}

// First-order differential operator: scalar(T) + sum_k coeff_k(T) d/dT_axis.
class DiffOp {
public:
    struct Term {
        AnalyticFn coeff;
        int axis;
    };

    DiffOp() = default;
    explicit DiffOp(int arity) : arity_(arity), scalar_(AnalyticFn::constant(arity, 0.0)) {}
    DiffOp(AnalyticFn scalar, std::vector<Term> terms) : arity_(scalar.arity()), scalar_(std::move(scalar)), terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (t.coeff.arity() != arity_) throw ArityMismatch("coefficient arity differs");
            if (t.axis < 0 || t.axis >= arity_) throw ArityMismatch("derivative axis out of range");
        }
    }

    int arity() const { return arity_; }
    const AnalyticFn& scalar() const { return scalar_; }
    const std::vector<Term>& terms() const { return terms_; }

private:
    int arity_ = 0;
    AnalyticFn scalar_;
    std::vector<Term> terms_;
};

inline cplx apply_at(const DiffOp& op, const AnalyticFn& f, const Point& z, double h);

// Central difference with one Richardson step: error O(h^4).
inline cplx partial(const AnalyticFn& f, const Point& z, int axis, double h) {
    auto d = [&](double s) {
        Point p = z, m = z;
        p[axis] += s;
        m[axis] -= s;
        return (f(p) - f(m)) / (2 * s);
    };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

inline AnalyticFn diff_apply(const DiffOp& op, const AnalyticFn& f, double h) {
    if (!(h > 1e-6 && h < 1e-2)) throw StepInvalid("finite-difference step must lie in (1e-6, 1e-2)");
    if (op.arity() != f.arity()) throw ArityMismatch("operator and function arity differ");
    return AnalyticFn(f.arity(), [op, f, h](const Point& z) { return apply_at(op, f, z, h); });
}

inline DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    if (a.arity() != b.arity()) throw ArityMismatch("sum of operators of different arity");
    AnalyticFn sa = a.scalar(), sb = b.scalar();
    auto terms = a.terms();
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return DiffOp(AnalyticFn(a.arity(), [sa, sb](const Point& z) { return sa(z) + sb(z); }), terms);
}

inline DiffOp operator*(cplx c, const DiffOp& a) {
    auto scale = [c](const AnalyticFn& f) {
        return AnalyticFn(f.arity(), [c, f](const Point& z) { return c * f(z); }, f.strip());
    };
    std::vector<DiffOp::Term> terms;
    for (const auto& t : a.terms()) terms.push_back({scale(t.coeff), t.axis});
    return DiffOp(scale(a.scalar()), terms);
}

inline DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-1.0 * b); }

inline cplx apply_at(const DiffOp& op, const AnalyticFn& f, const Point& z, double h) {
    cplx acc = op.scalar()(z) * f(z);
    for (const auto& t : op.terms()) acc += t.coeff(z) * partial(f, z, t.axis, h);
    return acc;
}

// [A, B] of first-order operators is first order again; coefficient
// derivatives are taken by finite differences with step h.
inline DiffOp commutator(const DiffOp& a, const DiffOp& b, double h) {
    if (a.arity() != b.arity()) throw ArityMismatch("commutator of operators of different arity");
    const int n = a.arity();
    // X(g) for the vector-field part of X.
    auto vf = [h](const DiffOp& x, const AnalyticFn& g) {
        return AnalyticFn(g.arity(), [x, g, h](const Point& z) {
            cplx acc = 0.0;
            for (const auto& t : x.terms()) acc += t.coeff(z) * partial(g, z, t.axis, h);
            return acc;
        });
    };
    auto diff = [n](const AnalyticFn& p, const AnalyticFn& q) {
        return AnalyticFn(n, [p, q](const Point& z) { return p(z) - q(z); });
    };
    std::vector<DiffOp::Term> terms;
    for (int l = 0; l < n; ++l) {
        AnalyticFn al = AnalyticFn::constant(n, 0.0), bl = AnalyticFn::constant(n, 0.0);
        bool any = false;
        for (const auto& t : a.terms())
            if (t.axis == l) {
                AnalyticFn c = al, d = t.coeff;
                al = AnalyticFn(n, [c, d](const Point& z) { return c(z) + d(z); });
                any = true;
            }
        for (const auto& t : b.terms())
            if (t.axis == l) {
                AnalyticFn c = bl, d = t.coeff;
                bl = AnalyticFn(n, [c, d](const Point& z) { return c(z) + d(z); });
                any = true;
            }
        if (any) terms.push_back({diff(vf(a, bl), vf(b, al)), l});
    }
    return DiffOp(diff(vf(a, b.scalar()), vf(b, a.scalar())), terms);
}

// Sampled operator equality: the notion of equality used across the library.
struct SampleSet {
    std::vector<Point> points;
    std::vector<AnalyticFn> tests;
};

// Gaussian test functions e^{-sum (z_k - c_k)^2 / 2}, |Im c_k| <= 1.
inline AnalyticFn gaussian_test(const Point& centre) {
    return AnalyticFn(centre.n, [centre](const Point& z) {
        cplx e = 0.0;
        for (int k = 0; k < z.n; ++k) e += (z[k] - centre[k]) * (z[k] - centre[k]);
        return std::exp(-0.5 * e);
    });
}

// Points have real parts in [-re_box, re_box] and imaginary parts in
// [-im_box, im_box]; `accept` rejects points near coefficient poles.
inline SampleSet make_samples(int arity, std::uint64_t seed, int n_points = 20, int n_tests = 2,
                              double re_box = 1.0, double im_box = 0.3,
                              const std::function<bool(const Point&)>& accept = nullptr) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ure(-re_box, re_box), uim(-im_box, im_box), uc(-1.0, 1.0);
    SampleSet s;
    while (static_cast<int>(s.points.size()) < n_points) {
        Point p(arity);
        for (int k = 0; k < arity; ++k) p[k] = cplx(ure(rng), uim(rng));
        if (!accept || accept(p)) s.points.push_back(p);
    }
    for (int j = 0; j < n_tests; ++j) {
        Point c(arity);
        for (int k = 0; k < arity; ++k) c[k] = cplx(uc(rng), uc(rng));
        s.tests.push_back(gaussian_test(c));
    }
    return s;
}

// max |A f - B f| / max(|A f|, |B f|, 1) over the sample set.
inline double operator_residual(const std::function<cplx(const AnalyticFn&, const Point&)>& lhs,
                                const std::function<cplx(const AnalyticFn&, const Point&)>& rhs,
                                const SampleSet& s) {
    double worst = 0.0;
    for (const auto& f : s.tests)
        for (const auto& z : s.points) {
            const cplx a = lhs(f, z), b = rhs(f, z);
            const double scale = std::max({std::abs(a), std::abs(b), 1.0});
            worst = std::max(worst, std::abs(a - b) / scale);
        }
    return worst;
}

inline double shift_op_distance(const ShiftOp& a, const ShiftOp& b, const SampleSet& s) {
    return operator_residual([&](const AnalyticFn& f, const Point& z) { return a.apply_at(f, z); },
                             [&](const AnalyticFn& f, const Point& z) { return b.apply_at(f, z); }, s);
}

}  // namespace whitlab
