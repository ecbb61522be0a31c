#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <whitlab/whitlab.hpp>

using namespace whitlab;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "0.2+0.2i", "-0.5", "i", "-2.5e-1i", "1e-3-4i".
cplx parse_complex(std::string s) {
    std::erase(s, ' ');
    if (s.empty()) throw UsageError("empty complex number");
    auto num = [&](const std::string& t, double unit) {
        if (t.empty() || t == "+") return unit;
        if (t == "-") return -unit;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size()) throw UsageError("cannot parse '" + s + "' as a complex number");
        return v;
    };
    if (s.back() != 'i') return num(s, 0.0);
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos) return {0.0, num(body, 1.0)};
    return {num(body.substr(0, split), 0.0), num(body.substr(split), 1.0)};
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
    return out;
}

std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    for (const auto& t : split_list(s)) out.push_back(parse_complex(t));
    return out;
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    for (cplx z : parse_complex_list(s)) {
        if (z.imag() != 0.0) throw UsageError("expected real entries in '" + s + "'");
        out.push_back(z.real());
    }
    return out;
}

struct Options {
    int ell = 1;
    std::string gamma, lambda, x;
    std::optional<double> eps, kappa;
    std::uint64_t seed = 42;
    std::optional<double> tol, rel_tol, abs_tol;
    std::optional<int> samples, max_panels;
    std::string format = "json";
    std::string output;
    std::string config;
    bool no_timing = false;

    std::string which = "all";
    std::string rep = "givental";
    std::string reps = "mb,givental,modified";
    std::string check = "all";
    std::string realization = "all";
    bool fourier = false;
    double h = 1e-3;
};

QuadSpec quad_spec(const Options& o, double default_rel) {
    QuadSpec s;
    s.rel_tol = o.rel_tol.value_or(default_rel);
    if (o.abs_tol) s.abs_tol = *o.abs_tol;
    if (o.max_panels) s.max_panels = *o.max_panels;
    return s;
}

// Spectral data from --gamma or from --lambda/--eps; empty when neither is given.
std::optional<SpectralParams> user_params(const Options& o) {
    if (!o.gamma.empty()) {
        if (!o.lambda.empty()) throw UsageError("give either --gamma or --lambda, not both");
        return SpectralParams::from_gamma(parse_complex_list(o.gamma), o.kappa.value_or(0.0));
    }
    if (!o.lambda.empty()) return SpectralParams::from_lambda(parse_real_list(o.lambda), o.eps.value_or(0.0), o.kappa.value_or(0.0));
    return std::nullopt;
}

SpectralParams params_or(const Options& o, std::vector<double> lambda, double eps, double kappa) {
    if (auto p = user_params(o)) return *p;
    return SpectralParams::from_lambda(std::move(lambda), o.eps.value_or(eps), o.kappa.value_or(kappa));
}

std::vector<double> default_lambda(int ell) {
    if (ell == 1) return {0.3, -0.2};
    if (ell == 2) return {0.2, -0.1, 0.3};
    return std::vector<double>(ell + 1, 0.0);
}

struct Check {
    IdentityReport r;
    double threshold = 0.0;
    double wall_ms = 0.0;
    std::string error;
    bool numerical = false;
    bool pass() const { return error.empty() && r.rel_residual < threshold; }
};

class Run {
public:
    Run(std::string command, const Options& o) : command_(std::move(command)), timing_(!o.no_timing) {}

    json config = json::object();

    template <class F>
    void add(const std::string& name, double threshold, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        c.threshold = threshold;
        try {
            c.r = f();
            c.r.name = name;
        } catch (const Error& e) {
            c.r.name = name;
            c.error = e.what();
            c.numerical = e.numerical();
        }
        if (timing_) c.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        checks_.push_back(std::move(c));
    }

    void add_all(const std::string& name, double threshold, const std::function<std::vector<IdentityReport>()>& f) {
        std::vector<IdentityReport> rs;
        add(name, threshold, [&] {
            rs = f();
            return IdentityReport{};
        });
        Check head = std::move(checks_.back());
        checks_.pop_back();
        if (!head.error.empty()) {
            checks_.push_back(std::move(head));
            return;
        }
        for (auto& r : rs) {
            Check c;
            c.r = std::move(r);
            c.threshold = threshold;
            c.wall_ms = head.wall_ms / static_cast<double>(rs.size());
            checks_.push_back(std::move(c));
        }
    }

    bool pass() const {
        if (checks_.empty()) return false;
        for (const auto& c : checks_)
            if (!c.pass()) return false;
        return true;
    }

    int exit_code() const {
        for (const auto& c : checks_)
            if (c.numerical) return 2;
        return pass() ? 0 : 1;
    }

    json to_json() const {
        json j;
        j["command"] = command_;
        j["config"] = config;
        j["checks"] = json::array();
        for (const auto& c : checks_) {
            json k;
            k["name"] = c.r.name;
            k["lhs"] = cjson(c.r.lhs, c);
            k["rhs"] = cjson(c.r.rhs, c);
            k["abs_err"] = num(c.r.abs_residual, c);
            k["rel_err"] = num(c.r.rel_residual, c);
            k["n_evals"] = c.r.quad.n_evals;
            k["wall_ms"] = c.wall_ms;
            k["threshold"] = c.threshold;
            k["pass"] = c.pass();
            if (!c.r.params_echo.empty()) k["params"] = c.r.params_echo;
            if (!c.error.empty()) k["error"] = c.error;
            j["checks"].push_back(std::move(k));
        }
        j["pass"] = pass();
        return j;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "command,name,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,n_evals,wall_ms,threshold,pass,error\n";
        auto q = [](std::string s) {
            std::string out = "\"";
            for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return out + "\"";
        };
        auto f = [](double v) { return std::isfinite(v) ? format_real(v) : std::string(); };
        for (const auto& c : checks_) {
            const bool e = !c.error.empty();
            os << command_ << ',' << q(c.r.name) << ',' << (e ? "" : f(c.r.lhs.real())) << ',' << (e ? "" : f(c.r.lhs.imag()))
               << ',' << (e ? "" : f(c.r.rhs.real())) << ',' << (e ? "" : f(c.r.rhs.imag())) << ','
               << (e ? "" : f(c.r.abs_residual)) << ',' << (e ? "" : f(c.r.rel_residual)) << ',' << c.r.quad.n_evals << ','
               << format_real(c.wall_ms) << ',' << format_real(c.threshold) << ',' << (c.pass() ? "true" : "false") << ','
               << q(c.error) << '\n';
        }
        os << command_ << ",overall,,,,,,,,,," << (pass() ? "true" : "false") << ",\n";
        return os.str();
    }

private:
    static json num(double v, const Check& c) {
        if (!c.error.empty() || !std::isfinite(v)) return nullptr;
        return v;
    }
    static json cjson(cplx z, const Check& c) {
        if (!c.error.empty()) return nullptr;
        return {{"re", num(z.real(), c)}, {"im", num(z.imag(), c)}};
    }

    std::string command_;
    bool timing_;
    std::vector<Check> checks_;
};

json list_json(const std::vector<cplx>& zs) {
    json a = json::array();
    for (cplx z : zs) a.push_back(format_complex(z));
    return a;
}

void echo_common(Run& run, const Options& o) {
    run.config["seed"] = o.seed;
    if (o.tol) run.config["tol"] = *o.tol;
    if (o.samples) run.config["samples"] = *o.samples;
    if (o.rel_tol) run.config["rel_tol"] = *o.rel_tol;
    if (o.abs_tol) run.config["abs_tol"] = *o.abs_tol;
    if (o.max_panels) run.config["max_panels"] = *o.max_panels;
    run.config["format"] = o.format;
}

// ---------------------------------------------------------------- commands

void cmd_identities(Run& run, const Options& o) {
    run.config["which"] = o.which;
    std::mt19937_64 rng(o.seed);
    auto draw = [&](double lo, double hi, double im) {
        std::uniform_real_distribution<double> ur(lo, hi), ui(-im, im);
        const double re = ur(rng);
        return cplx(re, ui(rng));
    };
    const QuadSpec spec = quad_spec(o, 1e-10);
    auto want = [&](const char* w) { return o.which == "all" || o.which == w; };
    auto count = [&](int d) {
        const int n = o.samples.value_or(d);
        if (n < 1) throw UsageError("--samples must be at least 1");
        return n;
    };
    if (want("barnes"))
        for (int k = 0, n = count(20); k < n; ++k) {
            const std::array<cplx, 2> a{draw(0.1, 1.2, 0.5), draw(0.1, 1.2, 0.5)}, b{draw(0.1, 1.2, 0.5), draw(0.1, 1.2, 0.5)};
            run.add("barnes[" + std::to_string(k) + "]", o.tol.value_or(1e-8), [&] { return barnes_first(a, b, spec); });
        }
    if (want("gustafson"))
        for (int k = 0, n = count(10); k < n; ++k) {
            std::array<cplx, 4> a;
            for (auto& z : a) z = draw(0.15, 1.0, 0.5);
            run.add("gustafson[" + std::to_string(k) + "]", o.tol.value_or(1e-7), [&] { return gustafson_n1(a, spec); });
        }
    if (want("glo11"))
        for (int k = 0, n = count(10); k < n; ++k) {
            std::array<cplx, 3> a;
            for (auto& z : a) z = draw(0.15, 1.0, 0.5);
            run.add("glo11[" + std::to_string(k) + "]", o.tol.value_or(1e-7), [&] { return glo11(a, spec); });
        }
    // The Euler box reaches into Re z < 0 on purpose: those draws record a precondition failure.
    if (want("euler"))
        for (int k = 0, n = count(5); k < n; ++k) {
            const cplx z = draw(-0.5, 3.0, 1.0);
            run.add("euler[" + std::to_string(k) + "]", o.tol.value_or(1e-10), [&] { return euler_gamma(z, spec); });
        }
    if (want("beta"))
        for (int k = 0, n = count(5); k < n; ++k) {
            const cplx a = draw(0.2, 2.0, 0.5), b = draw(0.2, 2.0, 0.5);
            run.add("beta[" + std::to_string(k) + "]", o.tol.value_or(1e-9), [&] { return beta_integral(a, b, spec); });
        }
}

Rep parse_rep(const std::string& s) {
    if (s == "mb") return Rep::MB;
    if (s == "givental") return Rep::Givental;
    if (s == "modified") return Rep::Modified;
    throw UsageError("unknown representation '" + s + "'");
}

void cmd_eval(Run& run, const Options& o) {
    const Rep rep = parse_rep(o.rep);
    const SpectralParams p = user_params(o).value_or(SpectralParams::from_gamma(std::vector<cplx>(o.ell + 1, 0.0)));
    if (p.ell != o.ell) throw UsageError("spectral vector must have ell + 1 entries");
    TorusPoint x{std::vector<double>(o.ell + 1, 0.0)};
    if (!o.x.empty()) x.x = parse_real_list(o.x);
    if (static_cast<int>(x.x.size()) != o.ell + 1) throw UsageError("--x must have ell + 1 entries");
    run.config["rep"] = o.rep;
    run.config["ell"] = o.ell;
    run.config["gamma"] = list_json(p.gamma);
    run.config["x"] = x.x;
    const QuadSpec spec = quad_spec(o, o.ell == 1 ? 1e-12 : 1e-8);
    const std::string name = std::string("psi_") + rep_name(rep);
    if (o.ell == 1) {
        run.add(name + " vs bessel", o.tol.value_or(1e-8), [&] {
            const WhittakerValue v = psi(rep, p, x, spec);
            return make_report(name + " vs bessel", v.value, psi_gl2_bessel(p, x, spec), v.quad, p.echo());
        });
        return;
    }
    // No closed form: the right-hand side echoes the value and abs_err is the quadrature error estimate.
    run.add(name, o.tol.value_or(1e-6), [&] {
        const WhittakerValue v = psi(rep, p, x, spec);
        IdentityReport r = make_report(name, v.value, v.value, v.quad, p.echo());
        r.abs_residual = v.quad.err_estimate;
        r.rel_residual = v.quad.err_estimate / std::max(std::abs(v.value), kResidualFloor);
        return r;
    });
}

std::string sample_tag(int k) { return "sample[" + std::to_string(k) + "]"; }

void cmd_compare(Run& run, const Options& o) {
    run.config["ell"] = o.ell;
    run.config["reps"] = o.reps;
    run.config["fourier"] = o.fourier;
    std::mt19937_64 rng(o.seed);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const auto fixed = user_params(o);
    if (fixed && fixed->ell != o.ell) throw UsageError("spectral vector must have ell + 1 entries");

    if (o.fourier) {
        if (o.ell != 2) throw UsageError("--fourier compares the gl3 Fourier side (ell = 2)");
        const QuadSpec spec = quad_spec(o, 1e-11);
        for (int k = 0, n = o.samples.value_or(10); k < n; ++k) {
            const std::vector<double> lam{u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5)};
            const SpectralParams p = fixed ? *fixed : SpectralParams::from_lambda(lam, 0.2);
            const std::vector<double> q{u(-1.0, 1.0), u(-1.0, 1.0)};
            run.add(sample_tag(k) + " phi_hat", o.tol.value_or(1e-7), [&] {
                const QuadResult r = phi_hat_mb_integral_result(p, q, spec);
                return make_report(sample_tag(k) + " phi_hat mb_integral vs closed_form", r.value, phi_hat_closed_form(p, q), r,
                                   p.echo() + " " + echo_list("p", {q[0], q[1]}));
            });
        }
        return;
    }

    std::vector<Rep> reps;
    for (const auto& s : split_list(o.reps)) reps.push_back(parse_rep(s));
    if (reps.empty()) throw UsageError("--reps is empty");
    const double tol = o.tol.value_or(o.ell == 1 ? 1e-8 : 1e-6);
    const QuadSpec spec = quad_spec(o, o.ell == 1 ? 1e-12 : 1e-8);
    for (int k = 0, n = o.samples.value_or(o.ell == 1 ? 9 : 3); k < n; ++k) {
        SpectralParams p;
        TorusPoint x;
        if (o.ell == 1) {
            const std::vector<double> lam{u(-0.8, 0.8), u(-0.8, 0.8)};
            const double eps = u(0.0, 0.2);
            p = fixed ? *fixed : SpectralParams::from_lambda(lam, eps);
            x.x = {u(-1.0, 1.0), u(-1.0, 1.0)};
        } else if (o.ell == 2) {
            const std::vector<double> lam{u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5)};
            p = fixed ? *fixed : SpectralParams::from_lambda(lam, 0.2);
            x.x = {u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5)};
        } else {
            p = fixed ? *fixed : SpectralParams::from_gamma(std::vector<cplx>(o.ell + 1, 0.0));
            x.x.assign(o.ell + 1, 0.0);
        }
        std::vector<WhittakerValue> vals;
        for (Rep r : reps) {
            const std::string nm = sample_tag(k) + " psi_" + rep_name(r);
            run.add(nm, tol, [&] {
                const WhittakerValue v = psi(r, p, x, spec);
                vals.push_back(v);
                IdentityReport rep = make_report(nm, v.value, v.value, v.quad, p.echo());
                rep.abs_residual = v.quad.err_estimate;
                rep.rel_residual = v.quad.err_estimate / std::max(std::abs(v.value), kResidualFloor);
                return rep;
            });
        }
        if (vals.size() != reps.size()) continue;
        for (std::size_t a = 0; a < reps.size(); ++a)
            for (std::size_t b = a + 1; b < reps.size(); ++b) {
                const std::string nm = sample_tag(k) + " " + rep_name(reps[a]) + " vs " + rep_name(reps[b]);
                run.add(nm, tol, [&] { return make_report(nm, vals[a].value, vals[b].value, {}, p.echo()); });
            }
        if (o.ell == 1) {
            const std::string nm = sample_tag(k) + " " + rep_name(reps[0]) + " vs bessel";
            run.add(nm, tol, [&] { return make_report(nm, vals[0].value, psi_gl2_bessel(p, x, spec), {}, p.echo()); });
        }
    }
}

void cmd_intertwine(Run& run, const Options& o) {
    run.config["check"] = o.check;
    static const char* kChecks[] = {"all", "br", "bl", "bldag-br", "e21", "e23", "kernel-all", "gl2-all"};
    if (std::find(std::begin(kChecks), std::end(kChecks), o.check) == std::end(kChecks))
        throw UsageError("unknown --check '" + o.check + "'");
    auto want = [&](const char* c) { return o.check == "all" || o.check == c; };
    const auto fixed = user_params(o);
    const SpectralParams p3 = fixed && fixed->ell == 2 ? *fixed : SpectralParams::from_lambda(default_lambda(2), o.eps.value_or(0.2), o.kappa.value_or(0.1));
    const SpectralParams p2 = fixed && fixed->ell == 1 ? *fixed : SpectralParams::from_lambda(default_lambda(1), o.eps.value_or(0.2));
    run.config["gl3_gamma"] = list_json(p3.gamma);
    run.config["gl3_kappa"] = p3.kappa;
    run.config["gl2_gamma"] = list_json(p2.gamma);
    const QuadSpec spec = quad_spec(o, 1e-10);
    std::mt19937_64 rng(o.seed);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto taus = [&](int n, double r) {
        std::vector<Point> out;
        while (static_cast<int>(out.size()) < n) {
            Point t{u(-r, r), u(-r, r), u(-r, r)};
            if (std::abs(t[1] - t[2]) > 0.1) out.push_back(t);
        }
        return out;
    };
    auto tag = [](const char* c, int k) { return std::string(c) + "[" + std::to_string(k) + "]"; };
    if (want("br")) {
        const auto ts = taus(o.samples.value_or(5), 1.0);
        for (int k = 0; k < static_cast<int>(ts.size()); ++k)
            run.add(tag("br", k), o.tol.value_or(1e-8), [&] { return check_gl3_BR_action(p3, ts[k], spec); });
    }
    if (want("bl")) {
        const auto ts = taus(o.samples.value_or(5), 1.0);
        for (int k = 0; k < static_cast<int>(ts.size()); ++k)
            run.add(tag("bl", k), o.tol.value_or(1e-8), [&] { return check_gl3_BL_action(p3, ts[k], spec); });
    }
    if (want("bldag-br")) {
        const auto ss = taus(o.samples.value_or(3), 0.5);
        for (int k = 0; k < static_cast<int>(ss.size()); ++k)
            run.add(tag("bldag-br", k), o.tol.value_or(1e-7), [&] { return gl3_BLdag_BR_fixedpoint(p3, ss[k], spec); });
    }
    if (want("e21"))
        run.add("e21", o.tol.value_or(1e-12), [&] { return check_appendixB_identity(AppendixIdentity::E21, o.seed, o.samples.value_or(100)); });
    if (want("e23"))
        run.add("e23", o.tol.value_or(1e-12), [&] { return check_appendixB_identity(AppendixIdentity::E23, o.seed, o.samples.value_or(100)); });
    if (want("kernel-all")) {
        for (auto side : {KernelSide::R_gl2, KernelSide::L_gl2})
            run.add_all(std::string("kernel/") + kernel_side_name(side), o.tol.value_or(1e-10),
                        [&] { return check_kernel_intertwining_all(side, p2, o.seed); });
        for (auto side : {KernelSide::R_gl3, KernelSide::Ldag_gl3})
            run.add_all(std::string("kernel/") + kernel_side_name(side), o.tol.value_or(1e-10),
                        [&] { return check_kernel_intertwining_all(side, p3, o.seed); });
    }
    if (want("gl2-all")) {
        const std::vector<double> ts{-1.0, -0.3, 0.0, 0.4, 1.2};
        run.add_all("gl2/lemmas", o.tol.value_or(1e-11), [&] { return check_gl2_lemmas(p2, ts); });
        run.add_all("gl2/unitary", o.tol.value_or(1e-11), [&] { return check_gl2_unitary(p2.lambda, ts); });
    }
}

std::vector<TorusPoint> toda_grid(int ell) {
    if (ell == 1) {
        std::vector<TorusPoint> g;
        for (double a : {-0.6, 0.0, 0.6})
            for (double b : {-0.5, 0.1, 0.7}) g.push_back({{a, b}});
        return g;
    }
    return {{{0, 0, 0}}, {{0.3, 0, -0.2}}, {{-0.2, 0.1, 0.3}}, {{0.4, -0.3, 0}}, {{0.1, 0.3, -0.3}}};
}

void cmd_toda(Run& run, const Options& o) {
    SpectralParams p;
    if (auto f = user_params(o)) p = *f;
    else p = SpectralParams::from_gamma(o.ell == 1 ? std::vector<cplx>{0.5, -0.5} : std::vector<cplx>{0.2, 0.0, -0.2});
    if (p.ell != o.ell) throw UsageError("spectral vector must have ell + 1 entries");
    if (o.ell != 1 && o.ell != 2) throw RankUnsupported("the Toda check covers gl2 and gl3");
    std::vector<Rep> reps;
    if (o.rep == "all") reps = {Rep::Givental, Rep::MB, Rep::Modified};
    else reps = {parse_rep(o.rep)};
    run.config["ell"] = o.ell;
    run.config["gamma"] = list_json(p.gamma);
    run.config["rep"] = o.rep;
    run.config["step"] = o.h;
    const double tol = o.tol.value_or(o.ell == 1 ? 1e-5 : 1e-4);
    cplx eigen = 0.0;
    for (cplx g : p.gamma) eigen += g * g / 2.0;
    const auto grid = toda_grid(o.ell);
    for (Rep r : reps) {
        const QuadSpec spec = quad_spec(o, o.ell == 1 ? 1e-13 : (r == Rep::Givental ? 1e-7 : 1e-6));
        TodaScanReport scan;
        const std::string base = std::string("toda/") + rep_name(r);
        run.add(base + "/spread", tol, [&] {
            scan = eigen_ratio_scan(FrozenWhittaker(r, spec), p, grid, o.h);
            IdentityReport rep = make_report(base + "/spread", scan.spread, 0.0, {}, p.echo());
            rep.rel_residual = scan.spread;
            return rep;
        });
        if (scan.ratios.empty()) continue;
        run.add(base + "/mean", tol, [&] {
            IdentityReport rep = make_report(base + "/mean", scan.mean, eigen, {}, p.echo());
            rep.rel_residual = rep.abs_residual / std::max(std::abs(eigen), 1.0);
            return rep;
        });
    }
}

std::vector<std::string> realization_list(const std::string& sel, const std::vector<std::string>& all) {
    if (sel == "all") return all;
    if (std::find(all.begin(), all.end(), sel) == all.end()) throw UsageError("unknown --realization '" + sel + "'");
    return {sel};
}

Realization make_realization(const std::string& k, const SpectralParams& p) {
    if (k == "gt") return gt_realization(p);
    if (k == "gtdual") return gt_dual(p);
    if (k == "gtmod") return gt_modified(p);
    if (k == "gtshift") return gt_shifted(p);
    if (k == "gg") return gg_realization(p);
    if (k == "ggmod") return gg_modified(p);
    return gg_modified(p, true);
}

void cmd_commutators(Run& run, const Options& o) {
    const SpectralParams p = params_or(o, default_lambda(o.ell), 0.2, 0.1);
    run.config["ell"] = o.ell;
    run.config["gamma"] = list_json(p.gamma);
    run.config["kappa"] = p.kappa;
    run.config["realization"] = o.realization;
    auto kinds = realization_list(o.realization, {"gt", "gtdual", "gtmod", "gtshift", "gg", "ggmod", "ggmod-dual"});
    for (const auto& k : kinds) {
        if (o.realization == "all" && k == "gtmod" && p.ell != 2) continue;
        const double tol = o.tol.value_or(k == "gg" ? 1e-6 : 1e-10);
        run.add(k + "/commutations", tol, [&] { return check_gl_commutations(make_realization(k, p), o.seed); });
        if (k != "gg") run.add(k + "/opposite", tol, [&] { return check_opposite_relations(make_realization(k, p), o.seed + 2); });
    }
}

void cmd_whitvec(Run& run, const Options& o) {
    const SpectralParams p = params_or(o, default_lambda(o.ell), 0.2, 0.1);
    run.config["ell"] = o.ell;
    run.config["gamma"] = list_json(p.gamma);
    run.config["realization"] = o.realization;
    for (const auto& k : realization_list(o.realization, {"gt", "gtmod", "gg", "ggmod"})) {
        if (o.realization == "all" && k == "gtmod" && p.ell != 2) continue;
        run.add(k + "/whittaker_defining", o.tol.value_or(k == "gg" ? 1e-6 : 1e-10), [&] {
            const Realization r = make_realization(k, p);
            return check_whittaker_defining(r, whittaker_vectors(r), o.seed);
        });
    }
}

// Config file lines "key = value" become "--key value" ahead of the real
// arguments, so flags given on the command line take precedence.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t k = 0; k + 1 < args.size(); ++k)
        if (args[k] == "--config") path = args[k + 1];
        else if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::vector<std::string> extra;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "config") continue;
        if (key == "no-timing") {
            if (value == "true" || value == "1") extra.push_back("--no-timing");
            continue;
        }
        extra.push_back("--" + key);
        extra.push_back(value);
    }
    std::vector<std::string> out = args;
    auto pos = std::find_if(out.begin() + 1, out.end(), [](const std::string& s) { return !s.empty() && s[0] != '-'; });
    if (pos == out.end()) return args;
    out.insert(pos + 1, extra.begin(), extra.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"whitlab: numerical checks for gl2 and gl3 Whittaker functions"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto common = [&](CLI::App* s, bool params) {
        s->add_option("--seed", o.seed, "Seed for random sample draws");
        s->add_option("--tol", o.tol, "Pass threshold on rel_err (command-specific default)");
        s->add_option("--samples", o.samples, "Number of random samples");
        s->add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance");
        s->add_option("--abs-tol", o.abs_tol, "Quadrature absolute tolerance");
        s->add_option("--max-panels", o.max_panels, "Quadrature panel budget");
        s->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--output,-o", o.output, "Write the report here instead of stdout");
        s->add_option("--config", o.config, "key = value file; command-line flags override it");
        s->add_flag("--no-timing", o.no_timing, "Report wall_ms = 0 so reports are byte-reproducible");
        if (!params) return;
        s->add_option("--ell", o.ell, "Rank: 1 for gl2, 2 for gl3");
        s->add_option("--gamma", o.gamma, "Spectral vector, comma-separated a+bi entries");
        s->add_option("--lambda", o.lambda, "Real spectral vector, used with --eps");
        s->add_option("--eps", o.eps, "Imaginary shift of the first two spectral entries");
        s->add_option("--kappa", o.kappa, "Contour shift");
    };

    auto* ids = app.add_subcommand("identities", "Gamma-function integral identities");
    common(ids, false);
    ids->add_option("--which", o.which)->check(CLI::IsMember({"barnes", "gustafson", "glo11", "euler", "beta", "all"}));

    auto* ev = app.add_subcommand("eval", "Evaluate one Whittaker integral");
    common(ev, true);
    ev->add_option("--rep", o.rep)->check(CLI::IsMember({"mb", "givental", "modified"}));
    ev->add_option("--x", o.x, "Torus point, comma-separated");

    auto* cmp = app.add_subcommand("compare", "Compare integral representations at random samples");
    common(cmp, true);
    cmp->add_option("--reps", o.reps, "Comma-separated subset of mb,givental,modified");
    cmp->add_flag("--fourier", o.fourier, "Compare the gl3 Fourier-side integral with its closed form");

    auto* itw = app.add_subcommand("intertwine", "Intertwining kernels and their identities");
    common(itw, true);
    itw->add_option("--check", o.check);

    auto* toda = app.add_subcommand("toda", "Toda eigenfunction scan");
    common(toda, true);
    toda->add_option("--rep", o.rep)->check(CLI::IsMember({"mb", "givental", "modified", "all"}));
    toda->add_option("--step", o.h, "Finite-difference step");

    auto* com = app.add_subcommand("commutators", "gl commutation and opposite relations");
    common(com, true);
    com->add_option("--realization", o.realization);

    auto* wv = app.add_subcommand("whitvec", "Whittaker vector defining equations");
    common(wv, true);
    wv->add_option("--realization", o.realization);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = with_config(args);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const UsageError& e) {
        std::cerr << "whitlab: " << e.what() << "\n";
        return 3;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub == toda && toda->count("--rep") == 0 && o.ell == 1) o.rep = "all";
    Run run(sub->get_name(), o);
    echo_common(run, o);
    try {
        if (sub == ids) cmd_identities(run, o);
        else if (sub == ev) cmd_eval(run, o);
        else if (sub == cmp) cmd_compare(run, o);
        else if (sub == itw) cmd_intertwine(run, o);
        else if (sub == toda) cmd_toda(run, o);
        else if (sub == com) cmd_commutators(run, o);
        else cmd_whitvec(run, o);
    } catch (const UsageError& e) {
        std::cerr << "whitlab: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "whitlab: " << e.what() << "\n";
        return e.numerical() ? 2 : 3;
    }

    const std::string text = o.format == "csv" ? run.to_csv() : run.to_json().dump(2) + "\n";
    if (o.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(o.output, std::ios::binary);
        if (!out) {
            std::cerr << "whitlab: cannot write " << o.output << "\n";
            return 3;
        }
        out << text;
    }
    return run.exit_code();
}
