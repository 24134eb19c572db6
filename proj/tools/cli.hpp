#pragma once

// Command-line front end. Every subcommand parses its arguments, calls into the
// library, and prints a CSV table (or JSON lines) to `out`; summaries go to
// `err` in CSV mode. Exit codes: 0 pass, 1 quantitative failure, 2 usage,
// parse or numeric error.

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sonine/sonine.hpp"

namespace sonine::cli {

enum ExitCode : int { pass = 0, fail = 1, error = 2 };

struct RunConfig {
    double tolerance = 1e-6;
    int rule_size = default_rule_size;
    std::string output = "csv";
    double tmin = 1e-3;
    double tmax = 10.0;
    double pmin = 0.1;
    double pmax = 100.0;
    int points = 20;
    int order = 30;
    bool check = false;
};

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Table {
public:
    Table(std::ostream& out, bool jsonl, std::string x, std::string y)
        : out_(out), jsonl_(jsonl), x_(std::move(x)), y_(std::move(y)) {
        if (!jsonl_) out_ << x_ << ',' << y_ << '\n';
    }

    void row(double x, double y) {
        if (jsonl_)
            out_ << nlohmann::json{{x_, x}, {y_, y}}.dump() << '\n';
        else
            out_ << num(x) << ',' << num(y) << '\n';
    }

    void row(int n, double y) {
        if (jsonl_)
            out_ << nlohmann::json{{x_, n}, {y_, y}}.dump() << '\n';
        else
            out_ << n << ',' << num(y) << '\n';
    }

private:
    std::ostream& out_;
    bool jsonl_;
    std::string x_, y_;
};

inline int report_summary(const ResidualReport& r, const RunConfig& cfg, std::ostream& out, std::ostream& err,
                          nlohmann::json extra = nlohmann::json::object()) {
    nlohmann::json s = std::move(extra);
    s["max_abs_residual"] = r.max_abs_residual;
    s["tolerance"] = r.tolerance;
    s["passed"] = r.passed;
    if (cfg.output == "jsonl") {
        out << nlohmann::json{{"summary", s}}.dump() << '\n';
    } else {
        for (auto it = s.begin(); it != s.end(); ++it) {
            err << it.key() << '=';
            if (it->is_number_float())
                err << num(it->get<double>());
            else
                err << it->dump();
            err << '\n';
        }
    }
    return r.passed ? pass : fail;
}

inline SoninePair resolve_pair(const std::string& pair, const std::string& g, const std::string& f) {
    if (!pair.empty()) return parse_pair_spec(pair);
    if (g.empty() || f.empty()) throw CLI::ValidationError("give either --pair NAME or both --g and --f");
    return {parse_kernel_spec(g), parse_kernel_spec(f), "custom"};
}

inline std::vector<double> t_grid(const RunConfig& c) {
    if (c.points < 1) throw CLI::ValidationError("--points must be at least 1");
    if (c.points > 1 && !(c.tmax > c.tmin)) throw CLI::ValidationError("--tmax must exceed --tmin");
    return logspace(c.tmin, c.tmax, c.points);
}

inline std::vector<double> p_grid(const RunConfig& c) {
    if (c.points < 1) throw CLI::ValidationError("--points must be at least 1");
    if (c.points > 1 && !(c.pmax > c.pmin)) throw CLI::ValidationError("--pmax must exceed --pmin");
    return logspace(c.pmin, c.pmax, c.points);
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Construct, evaluate and verify Sonine kernel pairs", "sonine"};
    app.require_subcommand(1);

    // One config per subcommand: CLI11 writes default_val into the bound
    // variable when the option is registered, so a shared struct would end up
    // holding the last subcommand's defaults.
    std::map<const CLI::App*, RunConfig> configs;
    std::string kernel, pair, g_spec, f_spec;

    auto range_t = [&](CLI::App* s, double tmin, double tmax) {
        RunConfig& cfg = configs[s];
        s->add_option("--tmin", cfg.tmin, "Smallest t")->default_val(tmin);
        s->add_option("--tmax", cfg.tmax, "Largest t")->default_val(tmax);
        s->add_option("--points", cfg.points, "Number of log-spaced points")->default_val(20);
    };
    auto numerics = [&](CLI::App* s) {
        RunConfig& cfg = configs[s];
        s->add_option("--tol", cfg.tolerance, "Pass/fail tolerance")->envname("SONINE_TOL")->default_val(1e-6);
        s->add_option("--rule-size", cfg.rule_size, "Quadrature nodes per rule")
            ->envname("SONINE_RULE_SIZE")
            ->default_val(default_rule_size);
    };
    auto output = [&](CLI::App* s) {
        RunConfig& cfg = configs[s];
        s->add_option("--out", cfg.output, "Output format")->check(CLI::IsMember({"csv", "jsonl"}))->default_val("csv");
    };
    auto pair_opts = [&](CLI::App* s) {
        auto* p = s->add_option("--pair", pair, "Catalog pair, e.g. ml:alpha=0.5,beta=0.5");
        auto* g = s->add_option("--g", g_spec, "Kernel spec for g");
        auto* f = s->add_option("--f", f_spec, "Kernel spec for f");
        p->excludes(g)->excludes(f);
    };

    auto* eval = app.add_subcommand("eval", "Tabulate a kernel on log-spaced t");
    eval->add_option("--kernel", kernel, "Kernel spec")->required();
    range_t(eval, 1e-3, 10.0);
    output(eval);

    auto* verify = app.add_subcommand("verify", "Check (g*f)(t) = 1");
    pair_opts(verify);
    range_t(verify, 1e-3, 10.0);
    numerics(verify);
    output(verify);

    auto* associate = app.add_subcommand("associate", "Solve for the associate series of g");
    associate->add_option("--g", g_spec, "Kernel spec with a fractional power series")->required();
    associate->add_option("--order", configs[associate].order, "Truncation order")->default_val(30)->check(CLI::Range(0, 400));
    associate->add_flag("--check", configs[associate].check, "Also report the time-domain residual");
    range_t(associate, 0.01, 0.5);
    numerics(associate);
    output(associate);

    auto* laplace = app.add_subcommand("laplace", "Check p g~(p) f~(p) = 1");
    pair_opts(laplace);
    laplace->add_option("--pmin", configs[laplace].pmin, "Smallest p")->default_val(0.1);
    laplace->add_option("--pmax", configs[laplace].pmax, "Largest p")->default_val(100.0);
    laplace->add_option("--points", configs[laplace].points, "Number of log-spaced points")->default_val(20);
    numerics(laplace);
    output(laplace);

    auto* decompose = app.add_subcommand("decompose", "Solve a g + g*phi = 1 for a kernel regular at 0");
    decompose->add_option("--kernel", kernel, "Kernel spec")->required();
    range_t(decompose, 0.1, 5.0);
    numerics(decompose);
    output(decompose);

    auto* diagnose = app.add_subcommand("diagnose", "Complete monotonicity, singularity and index checks");
    diagnose->add_option("--kernel", kernel, "Kernel spec")->required();
    diagnose->add_option("--order", configs[diagnose].order, "Highest finite-difference order")->default_val(6)->check(
        CLI::Range(0, max_cm_order));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? pass : error;
    }

    const CLI::App* active = app.get_subcommands().front();
    const RunConfig& cfg = configs[active];
    const bool jsonl = cfg.output == "jsonl";
    try {
        if (*eval) {
            const Kernel k = parse_kernel_spec(kernel);
            Table table(out, jsonl, "t", "value");
            for (double t : t_grid(cfg)) table.row(t, k.eval(t));
            return pass;
        }
        if (*verify) {
            const SoninePair p = resolve_pair(pair, g_spec, f_spec);
            const auto r = sonine_residual(p, t_grid(cfg), cfg.rule_size, cfg.tolerance);
            Table table(out, jsonl, "t", "residual");
            for (const auto& pt : r.points) table.row(pt.x, pt.residual);
            return report_summary(r, cfg, out, err);
        }
        if (*associate) {
            const Kernel g = parse_kernel_spec(g_spec);
            const auto res = associate_series(to_frac_series(g, cfg.order), cfg.order);
            {
                Table table(out, jsonl, "n", "b_n");
                for (int n = 0; n <= res.order; ++n) table.row(n, res.f.coeff(static_cast<std::size_t>(n)));
            }
            nlohmann::json extra{{"b0_closed_form", res.b0_closed_form}, {"lead", res.f.lead}, {"step", res.f.step}};
            if (!cfg.check) {
                if (jsonl)
                    out << nlohmann::json{{"summary", extra}}.dump() << '\n';
                else
                    err << "b0_closed_form=" << num(res.b0_closed_form) << '\n';
                return pass;
            }
            const SoninePair p{g, Kernel(kernels::Series{res.f}), "associate"};
            const auto r = sonine_residual(p, t_grid(cfg), cfg.rule_size, cfg.tolerance);
            if (!jsonl) out << '\n';
            Table table(out, jsonl, "t", "residual");
            for (const auto& pt : r.points) table.row(pt.x, pt.residual);
            return report_summary(r, cfg, out, err, extra);
        }
        if (*laplace) {
            const SoninePair p = resolve_pair(pair, g_spec, f_spec);
            const auto r = laplace_sonine_residual(p, TransformGrid{p_grid(cfg)}, cfg.tolerance, cfg.rule_size);
            Table table(out, jsonl, "p", "residual");
            for (const auto& pt : r.points) table.row(pt.x, pt.residual);
            return report_summary(r, cfg, out, err);
        }
        if (*decompose) {
            const Kernel g = parse_kernel_spec(kernel);
            const auto ts = t_grid(cfg);
            const auto d = ns_decompose(g, ts);
            {
                Table table(out, jsonl, "t", "value");
                for (const auto& [t, v] : d.phi_samples) table.row(t, v);
            }
            const auto r = ns_residual(g, d, ts, cfg.tolerance, cfg.rule_size);
            return report_summary(r, cfg, out, err, {{"a", d.a}, {"phi_exponent", d.phi_exponent}});
        }
        if (*diagnose) {
            const Kernel k = parse_kernel_spec(kernel);
            std::vector<double> grid;
            for (int i = 0; i <= 49; ++i) grid.push_back(0.1 + 0.1 * i);
            const auto cm = cm_finite_difference_test(k, grid, 0.05, cfg.order);
            nlohmann::json cm_j{{"check", "cm"}, {"max_order", cm.max_order_checked}, {"passed", cm.passed}};
            cm_j["violation"] = cm.first_violation
                                    ? nlohmann::json{{"order", cm.first_violation->order},
                                                     {"t", cm.first_violation->t},
                                                     {"value", cm.first_violation->value}}
                                    : nlohmann::json(nullptr);
            const auto sl = singularity_limit_test(k, 10);
            const bool sl_ok = sl.grows_unboundedly && sl.t_times_k_to_zero;
            nlohmann::json sl_j{{"check", "singularity"},
                                {"grows_unboundedly", sl.grows_unboundedly},
                                {"t_times_k_to_zero", sl.t_times_k_to_zero},
                                {"passed", sl_ok}};
            nlohmann::json rv_j{{"check", "rv_index"}};
            bool rv_ok = false;
            try {
                const double idx = rv_index_estimate(k, 1e-8, 1e-4, 16);
                rv_ok = idx > -1.0 && idx < 0.0;
                rv_j["value"] = idx;
            } catch (const DomainError& e) {
                rv_j["error"] = e.what();
            }
            rv_j["passed"] = rv_ok;
            const bool all = cm.passed && sl_ok && rv_ok;
            out << cm_j.dump() << '\n' << sl_j.dump() << '\n' << rv_j.dump() << '\n';
            out << nlohmann::json{{"kernel", format_kernel_spec(k)}, {"passed", all}}.dump() << '\n';
            return all ? pass : fail;
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return error;
    } catch (const sonine::Error& e) {
        err << "error: " << e.what() << '\n';
        return error;
    }
    return error;
}

}  // namespace sonine::cli
