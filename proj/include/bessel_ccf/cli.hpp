#pragma once
//
// Command-line surface: a RunPlan resolved from flags (and optionally a JSON
// config file, which flags override), executed into a Report.
//
//   integrate  one QuadratureResult per N
//   moments    the moment table with method tags
//   study      convergence records against a reference, with a fitted rate
//   validate   invariant checks at the configured weight
//
// Exit codes: 0 success, 1 usage or invalid parameters, 2 validation
// failure, 3 numerical failure.
//

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccf.hpp"
#include "errors.hpp"
#include "integrands.hpp"
#include "moments.hpp"
#include "oracle.hpp"
#include "problem.hpp"
#include "report.hpp"
#include "validation.hpp"

namespace bessel_ccf::cli {

enum class Command { integrate, moments, study, validate };

inline std::string to_string(Command c) {
    switch (c) {
        case Command::integrate: return "integrate";
        case Command::moments: return "moments";
        case Command::study: return "study";
        case Command::validate: return "validate";
    }
    return "integrate";
}

struct RunPlan {
    Command command = Command::integrate;
    double alpha = 0.0;
    double beta = 0.0;
    double nu = 0.0;
    double omega = 1.0;
    std::string f = "one";
    std::string samples;  ///< file of f values at cc_points; replaces --f when set
    std::vector<int> N_list;
    double tol = 1e-12;
    std::string format = "csv";
    std::string out;
    std::optional<double> reference;
    std::optional<std::pair<int, int>> window;  ///< N range used by the rate fit

    bool operator==(const RunPlan&) const = default;

    Integrand integrand() const;
    ProblemSpec spec() const { return ProblemSpec::make(alpha, beta, nu, omega, integrand()); }
};

/// Thrown by parse_config for --help; carries the help text.
struct help_request {
    std::string text;
};

namespace detail {

inline int parse_int(const std::string& s, const std::string& flag) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw usage_error(flag + ": expected an integer, got '" + s + "'");
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw usage_error(flag + ": value out of range '" + s + "'");
    return static_cast<int>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("--samples: cannot open '" + path + "'");
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        auto cells = split(line, ',');
        if (cells.empty()) continue;
        const std::string& last = cells.back();
        if (last.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            size_t pos = 0;
            double x = std::stod(last, &pos);
            v.push_back(x);
        } catch (const std::exception&) {
            if (v.empty()) continue;  // header line
            throw usage_error("--samples: not a number: '" + last + "'");
        }
    }
    if (v.size() < 2) throw usage_error("--samples: need at least two values");
    return v;
}

}  // namespace detail

inline Integrand RunPlan::integrand() const {
    if (!samples.empty()) return make_sampled_integrand(detail::read_samples(samples), "sampled");
    return make_integrand(f);
}

/// "256", "16,32,64", "16:1024:dyadic" or "16:64:8" (start:stop:step).
inline std::vector<int> parse_N_list(const std::string& text) {
    const std::string flag = "--N";
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        auto p = detail::split(text, ':');
        if (p.size() != 3) throw usage_error(flag + ": range must be start:stop:dyadic or start:stop:step");
        int a = detail::parse_int(p[0], flag), b = detail::parse_int(p[1], flag);
        if (a < 1 || b < a) throw usage_error(flag + ": range needs 1 <= start <= stop");
        if (p[2] == "dyadic") {
            for (long n = a; n <= b; n *= 2) out.push_back(static_cast<int>(n));
        } else {
            int step = detail::parse_int(p[2], flag);
            if (step < 1) throw usage_error(flag + ": step must be positive");
            for (long n = a; n <= b; n += step) out.push_back(static_cast<int>(n));
        }
    } else {
        for (const auto& s : detail::split(text, ',')) out.push_back(detail::parse_int(s, flag));
    }
    if (out.empty()) throw usage_error(flag + ": empty list");
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 1) throw usage_error(flag + ": N must be >= 1");
        if (i > 0 && out[i] <= out[i - 1]) throw usage_error(flag + ": values must be strictly increasing");
    }
    return out;
}

inline std::pair<int, int> parse_window(const std::string& text) {
    auto p = detail::split(text, ':');
    if (p.size() != 2) throw usage_error("--window: expected Nmin:Nmax");
    int a = detail::parse_int(p[0], "--window"), b = detail::parse_int(p[1], "--window");
    if (a < 1 || b < a) throw usage_error("--window: needs 1 <= Nmin <= Nmax");
    return {a, b};
}

inline std::vector<int> default_N_list(Command c) {
    switch (c) {
        case Command::integrate: return {256};
        case Command::moments: return {64};
        case Command::study: return parse_N_list("16:1024:dyadic");
        case Command::validate: return {256};
    }
    return {256};
}

/// Resolves command-line tokens (without the program name) into a plan.
inline RunPlan parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Clenshaw-Curtis-Filon quadrature for x^a (1-x)^b f(x) J_nu(w x) on [0, 1]", "bessel_ccf"};
    app.require_subcommand(1, 1);
    app.set_config();  // disable CLI11's own config handling; --config is JSON below

    struct Raw {
        double alpha = 0, beta = 0, nu = 0, omega = 1, tol = 1e-12, reference = 0;
        bool has_reference = false;
        std::string f = "one", samples, N, format = "csv", out, window, config;
    } raw;
    auto* o_alpha = app.add_option("--alpha", raw.alpha, "exponent of x (> -1)");
    auto* o_beta = app.add_option("--beta", raw.beta, "exponent of 1-x (> -1)");
    auto* o_nu = app.add_option("--nu", raw.nu, "Bessel order (>= 0)");
    auto* o_omega = app.add_option("--omega", raw.omega, "frequency (> 0)");
    auto* o_f = app.add_option("--f", raw.f, "integrand, e.g. abs_pow:c=0.5,k=1");
    auto* o_samples = app.add_option("--samples", raw.samples, "file of f values at the Clenshaw-Curtis points");
    auto* o_N = app.add_option("--N", raw.N, "N, a comma list, or start:stop:dyadic");
    auto* o_tol = app.add_option("--tol", raw.tol, "oracle relative tolerance");
    auto* o_format = app.add_option("--format", raw.format, "csv or json");
    auto* o_out = app.add_option("--out", raw.out, "output file (default stdout)");
    auto* o_ref = app.add_option("--reference", raw.reference, "reference value for study");
    auto* o_window = app.add_option("--window", raw.window, "N range Nmin:Nmax for the rate fit");
    app.add_option("--config", raw.config, "JSON file of defaults; flags override it");

    static const std::pair<Command, const char*> commands[] = {
        {Command::integrate, "approximate the integral for each N"},
        {Command::moments, "dump the modified moments M(0..N)"},
        {Command::study, "errors against a reference and the fitted rate"},
        {Command::validate, "run the self-checks; exit 2 if any fails"},
    };
    std::vector<CLI::App*> subs;
    for (auto [c, what] : commands) {
        auto* s = app.add_subcommand(to_string(c), what);
        s->fallthrough();
        subs.push_back(s);
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw help_request{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw help_request{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    RunPlan plan;
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) plan.command = static_cast<Command>(i);

    if (!raw.config.empty()) {
        std::ifstream in(raw.config);
        if (!in) throw io_error("--config: cannot open '" + raw.config + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw usage_error(std::string("--config: ") + e.what());
        }
        if (!j.is_object()) throw usage_error("--config: expected a JSON object");
        auto num = [&](const char* key, CLI::Option* opt, double& dst) {
            if (!j.contains(key) || opt->count() > 0) return;
            if (!j[key].is_number()) throw usage_error(std::string("--config: '") + key + "' must be a number");
            dst = j[key].get<double>();
        };
        auto str = [&](const char* key, CLI::Option* opt, std::string& dst) {
            if (!j.contains(key) || opt->count() > 0) return;
            if (j[key].is_string())
                dst = j[key].get<std::string>();
            else if (j[key].is_number_integer())
                dst = std::to_string(j[key].get<long>());
            else
                throw usage_error(std::string("--config: '") + key + "' must be a string");
        };
        for (const auto& [key, value] : j.items()) {
            static const std::vector<std::string> known = {"alpha", "beta", "nu", "omega", "f", "samples", "N",
                                                           "tol", "format", "out", "reference", "window"};
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw usage_error("--config: unknown key '" + key + "'");
        }
        num("alpha", o_alpha, raw.alpha);
        num("beta", o_beta, raw.beta);
        num("nu", o_nu, raw.nu);
        num("omega", o_omega, raw.omega);
        num("tol", o_tol, raw.tol);
        num("reference", o_ref, raw.reference);
        raw.has_reference = j.contains("reference");
        str("f", o_f, raw.f);
        str("samples", o_samples, raw.samples);
        str("N", o_N, raw.N);
        str("format", o_format, raw.format);
        str("out", o_out, raw.out);
        str("window", o_window, raw.window);
    }

    plan.alpha = raw.alpha;
    plan.beta = raw.beta;
    plan.nu = raw.nu;
    plan.omega = raw.omega;
    plan.f = raw.f;
    plan.samples = raw.samples;
    plan.tol = raw.tol;
    plan.format = raw.format;
    plan.out = raw.out;
    plan.N_list = raw.N.empty() ? default_N_list(plan.command) : parse_N_list(raw.N);
    if (o_ref->count() > 0 || raw.has_reference) plan.reference = raw.reference;
    if (!raw.window.empty()) plan.window = parse_window(raw.window);

    if (!(plan.alpha > -1.0)) throw parameter_error("--alpha: must be > -1 (got " + format_double(plan.alpha) + ")");
    if (!(plan.beta > -1.0)) throw parameter_error("--beta: must be > -1 (got " + format_double(plan.beta) + ")");
    if (!(plan.nu >= 0.0)) throw parameter_error("--nu: must be >= 0 (got " + format_double(plan.nu) + ")");
    if (!(plan.omega > 0.0) || !std::isfinite(plan.omega))
        throw parameter_error("--omega: must be > 0 (got " + format_double(plan.omega) + ")");
    if (!(plan.tol >= 1e-14)) throw parameter_error("--tol: must be >= 1e-14");
    if (plan.format != "csv" && plan.format != "json") throw usage_error("--format: expected csv or json");
    if (plan.samples.empty()) make_integrand(plan.f);  // reject unknown integrands now
    return plan;
}

/// Tokens that parse back into `plan`.
inline std::vector<std::string> to_args(const RunPlan& plan) {
    std::vector<std::string> a = {to_string(plan.command),
                                  "--alpha", format_double(plan.alpha),
                                  "--beta", format_double(plan.beta),
                                  "--nu", format_double(plan.nu),
                                  "--omega", format_double(plan.omega),
                                  "--f", plan.f,
                                  "--N", detail::join_ints(plan.N_list),
                                  "--tol", format_double(plan.tol),
                                  "--format", plan.format};
    if (!plan.samples.empty()) a.insert(a.end(), {"--samples", plan.samples});
    if (!plan.out.empty()) a.insert(a.end(), {"--out", plan.out});
    if (plan.reference) a.insert(a.end(), {"--reference", format_double(*plan.reference)});
    if (plan.window)
        a.insert(a.end(), {"--window", std::to_string(plan.window->first) + ":" + std::to_string(plan.window->second)});
    return a;
}

/// Config-file form of the plan (everything but the command).
inline nlohmann::json to_config(const RunPlan& plan) {
    nlohmann::json j;
    j["alpha"] = plan.alpha;
    j["beta"] = plan.beta;
    j["nu"] = plan.nu;
    j["omega"] = plan.omega;
    j["f"] = plan.f;
    if (!plan.samples.empty()) j["samples"] = plan.samples;
    j["N"] = detail::join_ints(plan.N_list);
    j["tol"] = plan.tol;
    j["format"] = plan.format;
    if (!plan.out.empty()) j["out"] = plan.out;
    if (plan.reference) j["reference"] = *plan.reference;
    if (plan.window) j["window"] = std::to_string(plan.window->first) + ":" + std::to_string(plan.window->second);
    return j;
}

namespace detail {

inline Report run_integrate(const RunPlan& plan, const ProblemSpec& spec) {
    Report r;
    r.kind = "integrate";
    r.columns = {"N", "value", "moment_err_est", "coeff_tail"};
    MomentCache cache;
    cache.get(spec, plan.N_list.back());
    for (int N : plan.N_list) {
        auto q = ccf_integrate(spec, N, cache);
        r.add_row({static_cast<long>(q.N), q.value, q.moment_err_est, q.coeff_tail});
    }
    return r;
}

inline Report run_moments(const RunPlan& plan, const ProblemSpec& spec) {
    Report r;
    r.kind = "moments";
    r.columns = {"k", "M", "method", "err_est"};
    auto t = moment_table(spec, plan.N_list.back());
    for (int k = 0; k <= t.N(); ++k) {
        const size_t i = static_cast<size_t>(k);
        r.add_row({static_cast<long>(k), t.values[i], to_string(t.method[i]), t.err_est[i]});
    }
    r.meta["k_switch"] = static_cast<long>(t.k_switch);
    for (size_t e = 0; e < t.end_values.size(); ++e) {
        const std::string key = "end_" + std::to_string(t.N() + 1 + static_cast<int>(e));
        r.meta[key] = t.end_values[e];
        r.meta[key + "_method"] = to_string(t.end_method[e]);
    }
    return r;
}

inline Report run_study(const RunPlan& plan, const ProblemSpec& spec) {
    Report r;
    r.kind = "study";
    r.columns = {"N", "approx", "reference", "abs_err", "scaled_err"};
    double reference = 0.0;
    if (plan.reference) {
        reference = *plan.reference;
        r.meta["reference_source"] = std::string("supplied");
    } else {
        OracleConfig cfg;
        cfg.rel_tol = plan.tol;
        auto ref = reference_integral(spec, cfg);
        reference = ref.value;
        r.meta["reference_source"] = std::string("oracle");
        r.meta["reference_err_est"] = ref.err_est;
    }
    auto records = convergence_study(spec, plan.N_list, reference);

    RecordWindow w = default_window(records.size());
    if (plan.window) {
        w = {records.size(), 0};
        for (size_t i = 0; i < records.size(); ++i) {
            if (records[i].N < plan.window->first || records[i].N > plan.window->second) continue;
            w.first = std::min(w.first, i);
            w.last = std::max(w.last, i + 1);
        }
        if (w.first >= w.last) throw usage_error("--window: no records inside the window");
    }
    std::optional<double> fitted;
    try {
        fitted = fit_rate(records, w);
        r.meta["fitted_rate"] = *fitted;
    } catch (const domain_error& e) {
        r.meta["fitted_rate"] = std::string("unavailable: ") + e.what();
    }
    auto predicted = predicted_rate(spec);
    if (predicted) r.meta["predicted_rate"] = *predicted;
    double exponent = predicted ? -*predicted : (fitted ? -*fitted : 0.0);
    r.meta["scale_exponent"] = exponent;

    auto scaled = scaled_errors(records, exponent);
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& c = records[i];
        r.add_row({static_cast<long>(c.N), c.approx, c.reference, c.abs_err, scaled[i]});
    }
    return r;
}

inline void add_check(Report& r, const std::string& name, double value, double threshold, bool ok) {
    r.add_row({name, value, threshold, std::string(ok ? "pass" : "fail")});
    r.passed = r.passed && ok;
}

inline Report run_validate(const RunPlan& plan, const ProblemSpec& spec) {
    using namespace validation;
    Report r;
    r.kind = "validate";
    r.columns = {"check", "value", "threshold", "status"};
    const int N = plan.N_list.back();
    OracleConfig cfg;
    cfg.rel_tol = plan.tol;

    const MomentTable t = moment_table(spec, N);
    double res = max_recurrence_residual(t);
    add_check(r, "recurrence_residual", res, 1e-8, res <= 1e-8);

    double alias = 0.0;
    for (int n : {8, 16})
        for (int p : {1, 2, 3}) alias = std::max(alias, aliasing_error(n, p));
    add_check(r, "aliasing", alias, 1e-12, alias <= 1e-12);

    std::vector<int> ks;
    const int step = std::max(1, N / 32);
    for (int k = 0; k <= N; k += step) ks.push_back(k);
    if (ks.back() != N) ks.push_back(N);
    auto cmp = compare_with_oracle(t, ks, 1e-8, 1e-14, cfg);
    add_check(r, "hybrid_vs_oracle", cmp.metric, 1.0, cmp.metric <= 1.0);

    const ProblemSpec w = t.weight();
    double theta = 0.0;
    for (int k : {3, 17}) {
        double x = reference_moment_x(w, k, cfg).value, th = reference_moment_theta(w, k, cfg).value;
        theta = std::max(theta, std::abs(x - th) / std::max(std::abs(x), 1e-300));
    }
    add_check(r, "theta_equivalence", theta, 1e-10, theta <= 1e-10);

    const int k_lo = std::max(64, static_cast<int>(std::ceil(2.0 * spec.omega)));
    const int k_hi = std::max(1024, 4 * k_lo);
    const MomentTable big = moment_table(w, k_hi);
    if (auto want = endpoint_decay(spec.alpha, spec.beta, spec.nu)) {
        double slope = moment_decay_slope(big, k_lo, k_hi);
        add_check(r, "decay_slope", slope, *want, std::abs(slope - *want) <= 0.25);
    } else {
        double top = 0.0, tail = 0.0;
        for (int k = 0; k <= k_hi; ++k) {
            double m = std::abs(big.values[static_cast<size_t>(k)]);
            top = std::max(top, m);
            if (k >= k_lo) tail = std::max(tail, m);
        }
        add_check(r, "decay_tail", tail / top, 1e-12, tail <= 1e-12 * top);
    }

    std::vector<double> c(11);
    for (size_t i = 0; i < c.size(); ++i) c[i] = (i % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(i + 1);
    ProblemSpec poly = ProblemSpec::make(spec.alpha, spec.beta, spec.nu, spec.omega, chebyshev_polynomial(c));
    const MomentTable t12 = t.N() >= 12 ? t.prefix(12) : moment_table(w, 12);
    auto q = ccf_integrate(poly, 12, t12);
    double direct = 0.0, scale = 0.0;
    for (size_t i = 0; i < c.size(); ++i) {
        direct += c[i] * t12.values[i];
        scale += std::abs(c[i] * t12.values[i]);
    }
    double ex = std::abs(q.value - direct);
    add_check(r, "polynomial_exactness", ex, 1e-12 * scale, ex <= 1e-12 * scale);
    auto ref = reference_integral(poly, cfg);
    double dev = std::abs(q.value - ref.value), lim = std::max(1e-10, q.moment_err_est);
    add_check(r, "polynomial_vs_oracle", dev, lim, dev <= lim);
    return r;
}

}  // namespace detail

/// Runs the plan; every command yields one report.
inline Report execute(const RunPlan& plan) {
    const ProblemSpec spec = plan.spec();
    switch (plan.command) {
        case Command::integrate: return detail::run_integrate(plan, spec);
        case Command::moments: return detail::run_moments(plan, spec);
        case Command::study: return detail::run_study(plan, spec);
        case Command::validate: return detail::run_validate(plan, spec);
    }
    throw usage_error("unknown command");
}

/// Whole program: parse, execute, emit. Reports go to plan.out or `out`;
/// diagnostics and study summaries to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        RunPlan plan = parse_config(args);
        Report rep = execute(plan);
        if (plan.out.empty() || plan.out == "-")
            write_report(rep, plan.format, out);
        else
            emit_report(rep, plan.format, plan.out);
        if (rep.kind == "study")
            for (const char* key : {"fitted_rate", "predicted_rate"})
                if (auto it = rep.meta.find(key); it != rep.meta.end())
                    err << key << ": " << format_cell(it->second) << '\n';
        if (!rep.passed) {
            for (const auto& row : rep.rows)
                if (format_cell(row.back()) == "fail") err << "failed: " << format_cell(row.front()) << '\n';
            return 2;
        }
        return 0;
    } catch (const help_request& h) {
        out << h.text;
        return 0;
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const parameter_error& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return 1;
    } catch (const io_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return 1;
    } catch (const error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace bessel_ccf::cli
