#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mutwalk/exact.hpp"
#include "mutwalk/montecarlo.hpp"
#include "mutwalk/oracle.hpp"
#include "mutwalk/rational.hpp"

namespace mutwalk::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.1.0";

// Shortest round-trip decimal rendering, shared by the CSV and table
// formats (JSON numbers go through the serializer, which round-trips too).
std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t c = 0; c < cells.size(); ++c) {
        if (c > 0) line.push_back(',');
        line += cells[c];
    }
    line.push_back('\n');
    return line;
}

// Everything parsed from the command line, with the effective defaults
// already resolved where they do not depend on --n.
struct Invocation {
    std::string command;
    int n = 0;
    std::string p_text;
    bool p_given = false;
    int from = -1;  // -1 means "default to N"
    int to = 0;
    double tol = 1e-12;
    int max_terms = 100000;
    std::int64_t trials = 10000;
    std::uint64_t seed = 0;
    std::int64_t max_steps = std::int64_t(1) << 20;
    int threads = 1;
    int grid_cap = 12;
    bool exact_rational = false;
    bool ehrenfest = false;
    bool stationary = false;
    bool verify = false;
    std::string format = "table";
};

struct ParsedProbability {
    double value = 0.0;
    rational::Rational exact;
    bool is_fraction = false;
};

ParsedProbability parse_probability(const std::string& text) {
    ParsedProbability p;
    p.exact = rational::parse_rational(text, /*require_open_unit=*/true);
    p.value = p.exact.convert_to<double>();
    p.is_fraction = text.find('/') != std::string::npos;
    return p;
}

void check_class(int cls, int n, const char* what) {
    if (cls < 0 || cls > n)
        throw DomainError(std::string(what) + " must lie in [0, " +
                          std::to_string(n) + "], got " + std::to_string(cls));
}

Json base_record(const Invocation& inv,
                 const std::optional<ParsedProbability>& p) {
    Json rec;
    rec["command"] = inv.command;
    Json params;
    params["n_sites"] = inv.n;
    if (p) {
        params["mut_prob"] = p->value;
        params["mut_prob_text"] = inv.p_text;
    }
    rec["params"] = std::move(params);
    rec["results"] = Json::array();
    rec["tool_version"] = kToolVersion;
    rec["timestamp"] = iso8601_utc_now();
    return rec;
}

void emit_json(const Json& rec, std::ostream& out) {
    out << rec.dump(2) << "\n";
}

Json report_json(const PassageTimeReport& r) {
    Json item;
    item["method"] = to_string(r.method);
    item["from"] = r.from_class;
    item["to"] = r.to_class;
    item["value"] = r.value;
    if (r.error_bound) item["error_bound"] = *r.error_bound;
    if (r.terms_used) item["terms_used"] = *r.terms_used;
    return item;
}

void emit_param_header(const Invocation& inv,
                       const std::optional<ParsedProbability>& p,
                       std::ostream& out) {
    out << "command: " << inv.command << "\n";
    out << "n_sites: " << inv.n;
    if (p) out << "  mut_prob: " << format_double(p->value);
    out << "\n";
}

// ----- exact ---------------------------------------------------------------

int run_exact(const Invocation& inv, std::ostream& out) {
    const ParsedProbability p = parse_probability(inv.p_text);
    const ModelParams params(inv.n, p.value);
    const int from = inv.from < 0 ? inv.n : inv.from;
    check_class(from, inv.n, "--from");
    check_class(inv.to, inv.n, "--to");
    SeriesControl ctrl;
    ctrl.abs_tol = inv.tol;
    ctrl.max_terms = inv.max_terms;
    ctrl.validate();

    std::vector<PassageTimeReport> rows;
    if (from == inv.n && inv.to == 0) rows.push_back(traversal_time(params));
    if (from == inv.to) rows.push_back(return_time_class(params, inv.to));
    rows.push_back(passage_time_explicit(params, from, inv.to, ctrl));
    rows.push_back(passage_time_kac_series(params, from, inv.to, ctrl));

    Json rec = base_record(inv, p);
    Json opts;
    opts["from"] = from;
    opts["to"] = inv.to;
    opts["tol"] = inv.tol;
    opts["max_terms"] = inv.max_terms;
    opts["format"] = inv.format;
    rec["options"] = std::move(opts);
    for (const auto& r : rows) rec["results"].push_back(report_json(r));

    if (inv.format == "json") {
        emit_json(rec, out);
    } else if (inv.format == "csv") {
        out << "method,from,to,value,error_bound,terms_used\n";
        for (const auto& r : rows) {
            out << csv_join({to_string(r.method), std::to_string(r.from_class),
                             std::to_string(r.to_class), format_double(r.value),
                             r.error_bound ? format_double(*r.error_bound) : "",
                             r.terms_used ? std::to_string(*r.terms_used) : ""});
        }
    } else {
        emit_param_header(inv, p, out);
        // shortest round-trip doubles run up to 24 chars, keep columns wider
        out << std::left << std::setw(18) << "method" << std::setw(6) << "from"
            << std::setw(6) << "to" << std::setw(26) << "value"
            << std::setw(26) << "error_bound" << "terms_used\n";
        for (const auto& r : rows) {
            out << std::left << std::setw(18) << to_string(r.method)
                << std::setw(6) << r.from_class << std::setw(6) << r.to_class
                << std::setw(26) << format_double(r.value) << std::setw(26)
                << (r.error_bound ? format_double(*r.error_bound) : "-")
                << (r.terms_used ? std::to_string(*r.terms_used) : "-")
                << "\n";
        }
    }
    return 0;
}

// ----- oracle --------------------------------------------------------------

struct OracleChain {
    std::string name;
    TransitionMatrix matrix;
    std::optional<rational::RationalMatrix> exact;
};

int run_oracle(const Invocation& inv, std::ostream& out) {
    if (!inv.p_given && !inv.ehrenfest)
        throw DomainError("oracle requires --p or --ehrenfest");
    check_class(inv.to, inv.n, "--to");

    std::optional<ParsedProbability> p;
    if (inv.p_given) p = parse_probability(inv.p_text);
    const bool rational_mode =
        inv.exact_rational || (p && p->is_fraction) || (!p && inv.ehrenfest);
    if (inv.exact_rational && p && !p->is_fraction)
        throw DomainError(
            "--exact-rational requires --p as a fraction a/b (got '" +
            inv.p_text + "')");

    std::vector<OracleChain> chains;
    if (p) {
        const ModelParams params(inv.n, p->value);
        OracleChain c{"mutation", transition_matrix(params), {}};
        if (rational_mode)
            c.exact = rational::transition_matrix(inv.n, p->exact);
        chains.push_back(std::move(c));
    }
    if (inv.ehrenfest) {
        OracleChain c{"ehrenfest", ehrenfest_matrix(inv.n), {}};
        if (rational_mode) c.exact = rational::ehrenfest_matrix(inv.n);
        chains.push_back(std::move(c));
    }

    Json rec = base_record(inv, p);
    Json opts;
    opts["to"] = inv.to;
    opts["ehrenfest"] = inv.ehrenfest;
    opts["stationary"] = inv.stationary;
    opts["exact_rational"] = rational_mode;
    opts["format"] = inv.format;
    rec["options"] = std::move(opts);

    std::string csv = "kind,chain,class,value,value_exact\n";
    std::ostringstream table;

    for (const auto& chain : chains) {
        const std::vector<double> h = hitting_times_solve(chain.matrix, inv.to);
        const double residual = lempot_residual(chain.matrix, inv.to);
        std::vector<std::string> h_exact;
        std::string residual_exact;
        if (chain.exact) {
            for (const auto& v :
                 rational::hitting_times_solve(*chain.exact, inv.to))
                h_exact.push_back(rational::to_string(v));
            residual_exact =
                rational::to_string(rational::lempot_residual(*chain.exact, inv.to));
        }

        Json hit;
        hit["kind"] = "hitting_times";
        hit["chain"] = chain.name;
        hit["target"] = inv.to;
        hit["values"] = h;
        if (!h_exact.empty()) hit["values_exact"] = h_exact;
        rec["results"].push_back(std::move(hit));

        Json res;
        res["kind"] = "lempot_residual";
        res["chain"] = chain.name;
        res["target"] = inv.to;
        res["value"] = residual;
        if (!residual_exact.empty()) res["value_exact"] = residual_exact;
        rec["results"].push_back(std::move(res));

        for (size_t i = 0; i < h.size(); ++i) {
            csv += csv_join({"hitting_time", chain.name, std::to_string(i),
                             format_double(h[i]),
                             h_exact.empty() ? "" : h_exact[i]});
        }
        csv += csv_join({"lempot_residual", chain.name, "",
                         format_double(residual), residual_exact});

        table << chain.name << " hitting times to class " << inv.to << ":\n";
        for (size_t i = 0; i < h.size(); ++i) {
            table << "  from " << i << ": " << format_double(h[i]);
            if (!h_exact.empty()) table << "  (" << h_exact[i] << ")";
            table << "\n";
        }
        table << "  lempot residual: " << format_double(residual);
        if (!residual_exact.empty()) table << "  (" << residual_exact << ")";
        table << "\n";

        if (inv.stationary) {
            const ClassDistribution pi = stationary_distribution(chain.matrix);
            std::vector<std::string> pi_exact;
            if (chain.exact)
                for (const auto& v : rational::stationary_distribution(*chain.exact))
                    pi_exact.push_back(rational::to_string(v));
            Json st;
            st["kind"] = "stationary";
            st["chain"] = chain.name;
            st["values"] = pi.probs();
            if (!pi_exact.empty()) st["values_exact"] = pi_exact;
            rec["results"].push_back(std::move(st));
            for (int j = 0; j < pi.n_classes(); ++j) {
                csv += csv_join({"stationary", chain.name, std::to_string(j),
                                 format_double(pi[j]),
                                 pi_exact.empty() ? ""
                                                  : pi_exact[static_cast<size_t>(j)]});
            }
            table << "  stationary:";
            for (int j = 0; j < pi.n_classes(); ++j)
                table << " " << format_double(pi[j]);
            table << "\n";
        }
    }

    if (inv.format == "json") {
        emit_json(rec, out);
    } else if (inv.format == "csv") {
        out << csv;
    } else {
        emit_param_header(inv, p, out);
        out << table.str();
    }
    return 0;
}

// ----- mc ------------------------------------------------------------------

int run_mc(const Invocation& inv, std::ostream& out) {
    const ParsedProbability p = parse_probability(inv.p_text);
    const ModelParams params(inv.n, p.value);
    const int from = inv.from < 0 ? inv.n : inv.from;
    check_class(from, inv.n, "--from");
    check_class(inv.to, inv.n, "--to");

    SimConfig cfg;
    cfg.seed = inv.seed;
    cfg.n_trials = inv.trials;
    cfg.max_steps_per_trial = inv.max_steps;
    cfg.n_threads = inv.threads;

    const EstimateReport est = estimate_hitting_time(params, from, inv.to, cfg);
    const double ref =
        hitting_times_solve(transition_matrix(params), inv.to)[static_cast<size_t>(from)];
    const double z = est.std_error > 0.0
                         ? (est.mean - ref) / est.std_error
                         : (est.mean == ref ? 0.0
                                            : std::numeric_limits<double>::infinity());

    Json rec = base_record(inv, p);
    Json opts;
    opts["from"] = from;
    opts["to"] = inv.to;
    opts["trials"] = inv.trials;
    opts["seed"] = inv.seed;
    opts["max_steps"] = inv.max_steps;
    opts["threads"] = inv.threads;
    opts["format"] = inv.format;
    rec["options"] = std::move(opts);
    Json e;
    e["kind"] = "estimate";
    e["mean"] = est.mean;
    e["std_error"] = est.std_error;
    e["ci95_low"] = est.ci95_low;
    e["ci95_high"] = est.ci95_high;
    e["n_trials"] = est.n_trials;
    e["n_censored"] = est.n_censored;
    rec["results"].push_back(std::move(e));
    Json r;
    r["kind"] = "reference";
    r["value"] = ref;
    r["z_score"] = z;
    rec["results"].push_back(std::move(r));

    if (inv.format == "json") {
        emit_json(rec, out);
    } else if (inv.format == "csv") {
        out << "mean,std_error,ci95_low,ci95_high,n_trials,n_censored,"
               "reference,z_score\n";
        out << csv_join({format_double(est.mean), format_double(est.std_error),
                         format_double(est.ci95_low), format_double(est.ci95_high),
                         std::to_string(est.n_trials),
                         std::to_string(est.n_censored), format_double(ref),
                         format_double(z)});
    } else {
        emit_param_header(inv, p, out);
        out << "estimate from " << from << " to " << inv.to << ": mean "
            << format_double(est.mean) << "  std_error "
            << format_double(est.std_error) << "\n";
        out << "ci95 [" << format_double(est.ci95_low) << ", "
            << format_double(est.ci95_high) << "]  trials " << est.n_trials
            << "  censored " << est.n_censored << "\n";
        out << "reference " << format_double(ref) << "  z "
            << format_double(z) << "\n";
    }
    return 0;
}

// ----- table ---------------------------------------------------------------

int run_table(const Invocation& inv, std::ostream& out, std::ostream& err) {
    const ParsedProbability p = parse_probability(inv.p_text);
    if (inv.n > inv.grid_cap)
        throw DomainError("table grid is capped at N = " +
                          std::to_string(inv.grid_cap) +
                          "; raise --grid-cap to override");
    const ModelParams params(inv.n, p.value);
    SeriesControl ctrl;
    ctrl.abs_tol = inv.tol;
    ctrl.max_terms = inv.max_terms;
    ctrl.validate();

    const int s = inv.n + 1;
    std::vector<std::vector<double>> values(
        static_cast<size_t>(s), std::vector<double>(static_cast<size_t>(s)));
    std::vector<std::vector<double>> bounds = values;
    std::vector<std::pair<int, int>> diverged;
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            try {
                const PassageTimeReport r =
                    passage_time_explicit(params, i, j, ctrl);
                values[static_cast<size_t>(i)][static_cast<size_t>(j)] = r.value;
                bounds[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    r.error_bound.value_or(0.0);
            } catch (const NonConvergence&) {
                values[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    std::numeric_limits<double>::quiet_NaN();
                bounds[static_cast<size_t>(i)][static_cast<size_t>(j)] = 0.0;
                diverged.emplace_back(i, j);
            }
        }
    }

    bool verify_ok = true;
    double max_rel_dev = 0.0;
    if (inv.verify) {
        const TransitionMatrix t = transition_matrix(params);
        for (int j = 0; j < s; ++j) {
            const std::vector<double> h = hitting_times_solve(t, j);
            for (int i = 0; i < s; ++i) {
                const double cell =
                    values[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (std::isnan(cell)) {
                    verify_ok = false;
                    continue;
                }
                const double ref = h[static_cast<size_t>(i)];
                const double dev = std::abs(cell - ref) / ref;
                max_rel_dev = std::max(max_rel_dev, dev);
                if (std::abs(cell - ref) >
                    std::max(1e-8 * ref,
                             bounds[static_cast<size_t>(i)][static_cast<size_t>(j)]))
                    verify_ok = false;
            }
        }
    }

    Json rec = base_record(inv, p);
    Json opts;
    opts["tol"] = inv.tol;
    opts["max_terms"] = inv.max_terms;
    opts["verify"] = inv.verify;
    opts["format"] = inv.format;
    rec["options"] = std::move(opts);
    Json m;
    m["kind"] = "passage_matrix";
    m["values"] = values;  // NaN serializes as null
    m["error_bounds"] = bounds;
    Json div = Json::array();
    for (const auto& [i, j] : diverged) div.push_back(Json::array({i, j}));
    m["diverged"] = std::move(div);
    if (inv.verify) {
        m["max_rel_deviation_vs_oracle"] = max_rel_dev;
        m["verify_ok"] = verify_ok;
    }
    rec["results"].push_back(std::move(m));

    if (inv.format == "json") {
        emit_json(rec, out);
    } else {
        // csv is the natural layout here; the human table shares it
        if (inv.format == "table") emit_param_header(inv, p, out);
        std::vector<std::string> head{"from"};
        for (int j = 0; j < s; ++j) head.push_back(std::to_string(j));
        out << csv_join(head);
        for (int i = 0; i < s; ++i) {
            std::vector<std::string> row{std::to_string(i)};
            for (int j = 0; j < s; ++j)
                row.push_back(format_double(
                    values[static_cast<size_t>(i)][static_cast<size_t>(j)]));
            out << csv_join(row);
        }
        for (const auto& [i, j] : diverged)
            out << "# cell (" << i << "," << j
                << ") did not converge within " << inv.max_terms << " terms\n";
        if (inv.verify)
            out << "# max_rel_deviation_vs_oracle,"
                << format_double(max_rel_dev) << "\n";
    }

    if (!diverged.empty()) {
        err << "error: " << diverged.size()
            << " cell(s) did not converge within " << inv.max_terms
            << " terms\n";
        return 2;
    }
    if (inv.verify && !verify_ok) {
        err << "error: table deviates from the linear-solve oracle beyond "
               "tolerance (max relative deviation "
            << format_double(max_rel_dev) << ")\n";
        return 2;
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    Invocation inv;
    CLI::App app{"exact and simulated mean passage times of the "
                 "site-mutation random walk on Hamming classes"};
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* cmd, bool needs_p) {
        cmd->add_option("--n", inv.n, "genome length N (number of sites)")
            ->required();
        auto* popt = cmd->add_option(
            "--p", inv.p_text,
            "per-site mutation probability in (0,1); decimal or fraction a/b");
        if (needs_p) popt->required();
        cmd->add_option("--format", inv.format, "output format")
            ->check(CLI::IsMember({"table", "csv", "json"}))
            ->capture_default_str();
        return popt;
    };

    auto* cmd_exact = app.add_subcommand(
        "exact", "closed forms and series for one (from, to) pair");
    add_common(cmd_exact, true);
    cmd_exact->add_option("--from", inv.from, "start class (default N)");
    cmd_exact->add_option("--to", inv.to, "target class")
        ->capture_default_str();
    cmd_exact->add_option("--tol", inv.tol, "series term tolerance")
        ->capture_default_str();
    cmd_exact->add_option("--max-terms", inv.max_terms, "series term cap")
        ->capture_default_str();

    auto* cmd_oracle = app.add_subcommand(
        "oracle", "linear-solve hitting times, visit counts, stationary law");
    add_common(cmd_oracle, false);
    cmd_oracle->add_option("--to", inv.to, "target class")
        ->capture_default_str();
    cmd_oracle->add_flag("--ehrenfest", inv.ehrenfest,
                         "use the urn comparator chain (no --p needed)");
    cmd_oracle->add_flag("--stationary", inv.stationary,
                         "also emit the stationary distribution");
    cmd_oracle->add_flag("--exact-rational", inv.exact_rational,
                         "force the exact rational backend (--p must be a/b)");

    auto* cmd_mc = app.add_subcommand(
        "mc", "Monte Carlo hitting-time estimate on genotype paths");
    add_common(cmd_mc, true);
    cmd_mc->add_option("--from", inv.from, "start class (default N)");
    cmd_mc->add_option("--to", inv.to, "target class")->capture_default_str();
    cmd_mc->add_option("--trials", inv.trials, "number of trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_mc->add_option("--seed", inv.seed, "simulation seed")
        ->capture_default_str();
    cmd_mc->add_option("--max-steps", inv.max_steps,
                       "per-trial step cap (censoring threshold)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_mc->add_option("--threads", inv.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* cmd_table = app.add_subcommand(
        "table", "full (from, to) passage-time matrix via the explicit series");
    add_common(cmd_table, true);
    cmd_table->add_option("--tol", inv.tol, "series term tolerance")
        ->capture_default_str();
    cmd_table->add_option("--max-terms", inv.max_terms, "series term cap")
        ->capture_default_str();
    cmd_table->add_flag("--verify", inv.verify,
                        "compare every cell against the linear-solve oracle");
    cmd_table->add_option("--grid-cap", inv.grid_cap,
                          "largest N accepted in grid mode")
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("mutwalk");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    inv.p_given = !inv.p_text.empty();
    try {
        if (cmd_exact->parsed()) {
            inv.command = "exact";
            return run_exact(inv, out);
        }
        if (cmd_oracle->parsed()) {
            inv.command = "oracle";
            return run_oracle(inv, out);
        }
        if (cmd_mc->parsed()) {
            inv.command = "mc";
            return run_mc(inv, out);
        }
        inv.command = "table";
        return run_table(inv, out, err);
    } catch (const AllCensored& e) {
        err << "error: " << e.what() << "; raise --max-steps\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mutwalk::cli
