#pragma once

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <thread>
#include <vector>

#include "funcspace.hpp"

namespace whitlab {

struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-15;
    int max_panels = 20000;
    double initial_radius = 6.0;
    double decay_rate_hint = 0.0;  // nats per unit coordinate; 0 = probe only

    void validate() const {
        if (!(rel_tol > 0 && abs_tol > 0)) throw PreconditionViolated("tolerances must be positive");
        if (max_panels < 4) throw PreconditionViolated("max_panels must be at least 4");
        if (!(initial_radius > 0)) throw PreconditionViolated("initial_radius must be positive");
    }
};

// Integration over (R - i shifts[0]) x (R - i shifts[1]) x ...
struct Contour {
    int dim = 1;
    std::vector<double> shifts{0.0};

    static Contour real(int d) { return {d, std::vector<double>(d, 0.0)}; }
    static Contour line(double kappa) { return {1, {kappa}}; }
};

struct QuadResult {
    cplx value{};
    double err_estimate = 0.0;
    long n_evals = 0;
    double truncation_radius = 0.0;
};

// Frozen node set of a finished adaptive run. Reusing it for a family of
// integrands (e.g. a stencil in x) makes the approximant a smooth function
// of the family parameter.
struct QuadRule {
    int dim = 1;
    std::vector<double> shifts;
    std::vector<double> nodes;  // dim entries per node, real parts
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    Point point(std::size_t j) const {
        Point z(dim);
        for (int k = 0; k < dim; ++k) z[k] = cplx(nodes[j * dim + k], -shifts[k]);
        return z;
    }
};

namespace detail {

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};

inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
                break;
            }
            r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        r.x[i] = x;
    }
    return r;
}

inline const GaussRule& gl16() {
    static const GaussRule r = gauss_legendre(16);
    return r;
}
inline const GaussRule& gl8() {
    static const GaussRule r = gauss_legendre(8);
    return r;
}

inline int thread_count() {
    if (const char* s = std::getenv("WHITLAB_THREADS")) {
        const int n = std::atoi(s);
        if (n >= 1) return n;
    }
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

// Runs body(i) for i in [0, n). Each index writes only its own slot, so the
// result does not depend on the thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t t = std::min<std::size_t>(thread_count(), n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(t);
    for (std::size_t k = 0; k < t; ++k)
        pool.emplace_back([&, k] {
            try {
                for (std::size_t i = k; i < n; i += t) body(i);
            } catch (...) {
                errs[k] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

template <class F>
cplx eval_on_contour(const F& f, const double* x, const std::vector<double>& shifts, int dim) {
    Point z(dim);
    for (int k = 0; k < dim; ++k) z[k] = cplx(x[k], -shifts[k]);
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("integrand is not finite on the contour");
    return v;
}

// Radius along direction `sign` of axis `axis` through `centre` beyond which
// |f| stays below thr. Radii grow by 1.5 per probe.
template <class F>
double probe_radius(const F& f, const std::vector<double>& shifts, int dim, const std::vector<double>& centre,
                    int axis, double sign, double r0, double thr, long& evals) {
    double prev = std::numeric_limits<double>::infinity();
    for (double r = r0; r < 4000.0; r *= 1.5) {
        double p = 0.0;
        for (double off : {0.0, 0.31, 0.73}) {
            std::vector<double> x = centre;
            x[axis] += sign * (r + off);
            p = std::max(p, std::abs(eval_on_contour(f, x.data(), shifts, dim)));
            ++evals;
        }
        if (p < thr && p <= prev) return r + 0.73;
        prev = p;
    }
    throw DecayProbeFailed("integrand does not decay along axis " + std::to_string(axis));
}

struct Panel {
    double a, b;
    cplx q16;
    double err;
    double absint;
};

template <class F>
Panel line_panel(const F& g, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto& r16 = gl16();
    const auto& r8 = gl8();
    cplx q16 = 0.0, q8 = 0.0;
    double aq = 0.0;
    for (std::size_t i = 0; i < r16.x.size(); ++i) {
        const cplx v = g(c + h * r16.x[i]);
        q16 += r16.w[i] * v;
        aq += r16.w[i] * std::abs(v);
    }
    for (std::size_t i = 0; i < r8.x.size(); ++i) q8 += r8.w[i] * g(c + h * r8.x[i]);
    return {a, b, h * q16, h * std::abs(q16 - q8), h * aq};
}

struct LineRun {
    QuadResult result;
    std::vector<Panel> panels;
};

template <class F>
LineRun line_adaptive(const F& f, const Contour& contour, const QuadSpec& spec) {
    spec.validate();
    if (contour.dim != 1 || contour.shifts.size() != 1) throw ArityMismatch("line contour must be 1-dimensional");
    long evals = 0;
    auto g = [&](double t) {
        ++evals;
        return eval_on_contour(f, &t, contour.shifts, 1);
    };
    double peak = 0.0;
    const double r0 = spec.initial_radius;
    for (int i = 0; i <= 64; ++i) peak = std::max(peak, std::abs(g(-r0 + 2 * r0 * i / 64.0)));
    double r_start = r0;
    const double thr = std::max(spec.abs_tol, spec.rel_tol * peak) / 10.0;
    if (spec.decay_rate_hint > 0 && peak > thr) r_start = std::max(r0, std::log(peak / thr) / spec.decay_rate_hint);
    long probe_evals = 0;
    const double left = probe_radius(f, contour.shifts, 1, {0.0}, 0, -1.0, r_start, thr, probe_evals);
    const double right = probe_radius(f, contour.shifts, 1, {0.0}, 0, 1.0, r_start, thr, probe_evals);
    evals += probe_evals;

    const int m = std::max(4, static_cast<int>(std::ceil(left + right)));
    std::vector<Panel> panels;
    for (int i = 0; i < m; ++i) panels.push_back(line_panel(g, -left + (left + right) * i / m, -left + (left + right) * (i + 1) / m));

    auto totals = [&](cplx& q, double& e, double& a) {
        q = 0.0;
        e = a = 0.0;
        for (const auto& p : panels) {
            q += p.q16;
            e += p.err;
            a += p.absint;
        }
    };
    cplx q;
    double e, a;
    totals(q, e, a);
    auto cmp = [&](std::size_t x, std::size_t y) { return panels[x].err < panels[y].err; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);
    auto tol = [&] { return std::max({spec.abs_tol, spec.rel_tol * std::abs(q), 1e-15 * a}); };
    while (e > tol()) {
        if (static_cast<int>(panels.size()) >= spec.max_panels)
            throw NonConvergence("panel budget exhausted (" + std::to_string(spec.max_panels) + ")");
        const std::size_t i = heap.top();
        heap.pop();
        const Panel p = panels[i];
        const double mid = 0.5 * (p.a + p.b);
        panels[i] = line_panel(g, p.a, mid);
        panels.push_back(line_panel(g, mid, p.b));
        heap.push(i);
        heap.push(panels.size() - 1);
        totals(q, e, a);
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    totals(q, e, a);
    return {{q, e, evals, std::max(left, right)}, std::move(panels)};
}

// One tensor cell: GL8 product first; GL16 product unless negligible.
struct Cell {
    std::array<double, 3> lo{}, hi{};
    cplx q{};
    double err = 0.0;
    double maxabs = 0.0;
    double absint = 0.0;
    bool fine = false;
};

template <class F>
void cell_eval(const F& f, const std::vector<double>& shifts, int dim, Cell& c, bool fine, long& evals) {
    auto product = [&](const GaussRule& r, double& maxabs, double& absint) {
        const int m = static_cast<int>(r.x.size());
        int total = 1;
        for (int k = 0; k < dim; ++k) total *= m;
        cplx q = 0.0;
        double x[3];
        for (int idx = 0; idx < total; ++idx) {
            int rem = idx;
            double w = 1.0;
            for (int k = 0; k < dim; ++k) {
                const int j = rem % m;
                rem /= m;
                const double h = 0.5 * (c.hi[k] - c.lo[k]);
                x[k] = 0.5 * (c.hi[k] + c.lo[k]) + h * r.x[j];
                w *= h * r.w[j];
            }
            const cplx v = eval_on_contour(f, x, shifts, dim);
            q += w * v;
            maxabs = std::max(maxabs, std::abs(v));
            absint += w * std::abs(v);
        }
        evals += total;
        return q;
    };
    double m8 = 0.0, a8 = 0.0;
    const cplx q8 = product(gl8(), m8, a8);
    c.maxabs = m8;
    c.absint = a8;
    c.fine = fine;
    if (!fine) {
        c.q = q8;
        c.err = 0.01 * a8;
        return;
    }
    double m16 = 0.0, a16 = 0.0;
    c.q = product(gl16(), m16, a16);
    c.maxabs = std::max(m8, m16);
    c.absint = a16;
    // Geometric convergence of Gauss rules: the order-16 error is about the
    // square of the order-8 discrepancy relative to the cell's mass.
    const double d = std::abs(c.q - q8);
    c.err = a16 > 0 ? d * std::min(1.0, 10.0 * d / a16) : d;
}

struct TensorRun {
    QuadResult result;
    std::vector<Cell> cells;
};

template <class F>
TensorRun tensor_adaptive(const F& f, const Contour& contour, const QuadSpec& spec) {
    spec.validate();
    const int dim = contour.dim;
    if (dim > 3) throw DimensionUnsupported("tensor quadrature supports dimension <= 3, got " + std::to_string(dim));
    if (static_cast<int>(contour.shifts.size()) != dim) throw ArityMismatch("contour shifts length != dim");
    long evals = 0;
    const auto& sh = contour.shifts;

    // Coarse scan for the peak and a rough mass scale.
    const int ncoarse = dim == 3 ? 13 : 25;
    const double r0 = spec.initial_radius;
    double peak = 0.0;
    std::vector<double> centre(dim, 0.0);
    {
        int total = 1;
        for (int k = 0; k < dim; ++k) total *= ncoarse;
        for (int idx = 0; idx < total; ++idx) {
            int rem = idx;
            double x[3];
            for (int k = 0; k < dim; ++k) {
                x[k] = -r0 + 2 * r0 * (rem % ncoarse) / (ncoarse - 1.0);
                rem /= ncoarse;
            }
            const double v = std::abs(eval_on_contour(f, x, sh, dim));
            if (v > peak) {
                peak = v;
                centre.assign(x, x + dim);
            }
        }
        evals += total;
    }
    const double thr = std::max(spec.abs_tol, spec.rel_tol * peak) / 10.0;
    std::array<double, 3> lo{}, hi{};
    for (int k = 0; k < dim; ++k) {
        double rs = r0;
        if (spec.decay_rate_hint > 0 && peak > thr) rs = std::max(r0, std::log(peak / thr) / spec.decay_rate_hint);
        lo[k] = centre[k] - probe_radius(f, sh, dim, centre, k, -1.0, rs, thr, evals);
        hi[k] = centre[k] + probe_radius(f, sh, dim, centre, k, 1.0, rs, thr, evals);
    }

    for (int expansion = 0;; ++expansion) {
        std::array<int, 3> m{1, 1, 1};
        long ncell = 1;
        for (int k = 0; k < dim; ++k) {
            m[k] = std::max(2, static_cast<int>(std::ceil((hi[k] - lo[k]) / 2.0)));
            ncell *= m[k];
        }
        if (ncell > static_cast<long>(spec.max_panels) * 64)
            throw NonConvergence("tensor cell budget exhausted");
        std::vector<Cell> cells(ncell);
        for (long idx = 0; idx < ncell; ++idx) {
            long rem = idx;
            for (int k = 0; k < dim; ++k) {
                const int j = rem % m[k];
                rem /= m[k];
                const double w = (hi[k] - lo[k]) / m[k];
                cells[idx].lo[k] = lo[k] + j * w;
                cells[idx].hi[k] = lo[k] + (j + 1) * w;
            }
        }
        std::vector<long> ev(ncell, 0);
        parallel_for(cells.size(), [&](std::size_t i) { cell_eval(f, sh, dim, cells[i], false, ev[i]); });
        cplx q8 = 0.0;
        double amass = 0.0;
        for (const auto& c : cells) {
            q8 += c.q;
            amass += c.absint;
        }
        const double tol0 = std::max({spec.abs_tol, spec.rel_tol * std::abs(q8), 1e-15 * amass});
        const double negligible = 1e-4 * tol0 / static_cast<double>(ncell);
        std::vector<std::size_t> refine;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double vol = 1.0;
            for (int k = 0; k < dim; ++k) vol *= cells[i].hi[k] - cells[i].lo[k];
            if (cells[i].maxabs * vol > negligible) refine.push_back(i);
        }
        parallel_for(refine.size(), [&](std::size_t j) {
            long e = 0;
            cell_eval(f, sh, dim, cells[refine[j]], true, e);
            ev[refine[j]] += e;
        });
        for (long e : ev) evals += e;

        auto totals = [&](cplx& q, double& err, double& a) {
            q = 0.0;
            err = a = 0.0;
            for (const auto& c : cells) {
                q += c.q;
                err += c.err;
                a += c.absint;
            }
        };
        cplx q;
        double err, a;
        totals(q, err, a);
        auto tol = [&] { return std::max({spec.abs_tol, spec.rel_tol * std::abs(q), 1e-15 * a}); };
        const long budget = static_cast<long>(spec.max_panels) * 64;
        while (err > tol()) {
            // Split every cell whose error exceeds its share of the budget.
            const double share = tol() / static_cast<double>(cells.size());
            std::vector<std::size_t> bad;
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i].err > share) bad.push_back(i);
            if (bad.empty()) {
                auto worst = std::max_element(cells.begin(), cells.end(),
                                              [](const Cell& x, const Cell& y) { return x.err < y.err; });
                bad.push_back(static_cast<std::size_t>(worst - cells.begin()));
            }
            const int kids = 1 << dim;
            if (static_cast<long>(cells.size() + bad.size() * (kids - 1)) > budget)
                throw NonConvergence("tensor cell budget exhausted");
            std::vector<Cell> fresh;
            for (std::size_t i : bad) {
                const Cell parent = cells[i];
                for (int kmask = 0; kmask < kids; ++kmask) {
                    Cell c;
                    for (int k = 0; k < dim; ++k) {
                        const double mid = 0.5 * (parent.lo[k] + parent.hi[k]);
                        const bool upper = (kmask >> k) & 1;
                        c.lo[k] = upper ? mid : parent.lo[k];
                        c.hi[k] = upper ? parent.hi[k] : mid;
                    }
                    fresh.push_back(c);
                }
            }
            std::vector<long> fe(fresh.size(), 0);
            parallel_for(fresh.size(), [&](std::size_t j) { cell_eval(f, sh, dim, fresh[j], true, fe[j]); });
            for (long e : fe) evals += e;
            // Replace parents in place, append the remaining children: order stays deterministic.
            for (std::size_t j = 0; j < bad.size(); ++j) {
                cells[bad[j]] = fresh[j * kids];
                for (int kk = 1; kk < kids; ++kk) cells.push_back(fresh[j * kids + kk]);
            }
            totals(q, err, a);
        }

        // Boundary check: mass on the faces means the box was too small.
        bool grew = false;
        if (expansion < 4) {
            for (int k = 0; k < dim; ++k) {
                double face_lo = 0.0, face_hi = 0.0;
                for (const auto& c : cells) {
                    if (c.lo[k] == lo[k]) face_lo = std::max(face_lo, c.maxabs);
                    if (c.hi[k] == hi[k]) face_hi = std::max(face_hi, c.maxabs);
                }
                const double w = hi[k] - lo[k];
                if (face_lo > 100 * thr) {
                    lo[k] -= 0.5 * w;
                    grew = true;
                }
                if (face_hi > 100 * thr) {
                    hi[k] += 0.5 * w;
                    grew = true;
                }
            }
        }
        if (!grew) {
            double rad = 0.0;
            for (int k = 0; k < dim; ++k) rad = std::max({rad, std::abs(lo[k]), std::abs(hi[k])});
            return {{q, err, evals, rad}, std::move(cells)};
        }
    }
}

}  // namespace detail

template <class F>
QuadResult integrate_line(const F& f, const Contour& contour, const QuadSpec& spec) {
    return detail::line_adaptive(f, contour, spec).result;
}

template <class F>
QuadResult integrate_tensor(const F& f, const Contour& contour, const QuadSpec& spec) {
    if (contour.dim > 3) throw DimensionUnsupported("tensor quadrature supports dimension <= 3");
    if (contour.dim == 1) return integrate_line(f, contour, spec);
    return detail::tensor_adaptive(f, contour, spec).result;
}

// Adaptive run on f, returning the final node set for reuse on related integrands.
template <class F>
QuadRule freeze_rule(const F& f, const Contour& contour, const QuadSpec& spec) {
    QuadRule rule;
    rule.dim = contour.dim;
    rule.shifts = contour.shifts;
    if (contour.dim == 1) {
        const auto run = detail::line_adaptive(f, contour, spec);
        for (const auto& p : run.panels) {
            const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
            const auto& r = detail::gl16();
            for (std::size_t i = 0; i < r.x.size(); ++i) {
                rule.nodes.push_back(c + h * r.x[i]);
                rule.weights.push_back(h * r.w[i]);
            }
        }
        return rule;
    }
    if (contour.dim > 3) throw DimensionUnsupported("tensor quadrature supports dimension <= 3");
    const auto run = detail::tensor_adaptive(f, contour, spec);
    const int dim = contour.dim;
    for (const auto& c : run.cells) {
        const auto& r = c.fine ? detail::gl16() : detail::gl8();
        const int m = static_cast<int>(r.x.size());
        int total = 1;
        for (int k = 0; k < dim; ++k) total *= m;
        for (int idx = 0; idx < total; ++idx) {
            int rem = idx;
            double w = 1.0;
            for (int k = 0; k < dim; ++k) {
                const int j = rem % m;
                rem /= m;
                const double h = 0.5 * (c.hi[k] - c.lo[k]);
                rule.nodes.push_back(0.5 * (c.hi[k] + c.lo[k]) + h * r.x[j]);
                w *= h * r.w[j];
            }
            rule.weights.push_back(w);
        }
    }
    return rule;
}

template <class F>
cplx apply_rule(const QuadRule& rule, const F& f) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) acc += rule.weights[j] * f(rule.point(j));
    return acc;
}

// (2 pi)^{-d/2} int e^{-i p.xi} f(xi) dxi over R^d.
template <class F>
cplx fourier_transform(const F& f, const std::vector<double>& p, const QuadSpec& spec) {
    const int d = static_cast<int>(p.size());
    if (d > 3) throw DimensionUnsupported("Fourier transform supports dimension <= 3");
    auto g = [&](const Point& z) {
        cplx ph = 0.0;
        for (int k = 0; k < d; ++k) ph += p[k] * z[k];
        return std::exp(-I * ph) * f(z);
    };
    const QuadResult r = integrate_tensor(g, Contour::real(d), spec);
    return r.value / std::pow(2 * kPi, d / 2.0);
}

}  // namespace whitlab
