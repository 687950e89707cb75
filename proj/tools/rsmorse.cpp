// Command-line front end: polynomial tables, verification suites and
// numerical reports. Exit codes: 0 pass, 1 verification failure,
// 2 configuration error.

#include "rsmorse.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace rsmorse;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfigError = 2;

struct Options {
    int n = 2;
    std::string q = "1/3", t = "1/2", that0 = "1/2", that1 = "1/3", that2 = "1/5";
    int max_weight = 3;
    double tol = 0;
    int quad_nodes = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";

    std::string suite = "all";
    bool force = false;
    int samples = 100;
    double time = 1.0;
    int steps = 1;
    int cutoff = 12;
    std::vector<int> initial;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ParamSet make_params(const Options& o) {
    try {
        return params_from_hat(parse_rational(o.q), parse_rational(o.t),
                               {parse_rational(o.that0), parse_rational(o.that1), parse_rational(o.that2)});
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void require_config(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + o.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_poly(const Options& o) {
    const ParamSet p = make_params(o);
    require_config(o.max_weight >= 0, "--max-weight must be nonnegative");
    QHahnFamily family(p, o.n, o.max_weight, o.seed);
    const auto labels = partitions_up_to(o.n, o.max_weight);
    std::ostringstream os;
    if (o.format == "csv") {
        write_csv_row(os, {"lambda", "mu", "value"});
        for (const auto& lambda : labels)
            for (const auto& [mu, c] : family.get(lambda).coeffs())
                write_csv_row(os, {partition_csv(lambda), partition_csv(mu), to_string(c)});
    } else {
        json table = json::array();
        for (const auto& lambda : labels) table.push_back(to_json(family.get(lambda), p));
        os << dump(json{{"seed", o.seed}, {"max_weight", o.max_weight}, {"polynomials", table}});
    }
    emit(o, os.str());
    return kPass;
}

int cmd_verify(const Options& o) {
    const VerifyConfig cfg{make_params(o), o.n, o.max_weight, o.seed, 3};
    require_config(cfg.max_weight >= 0, "--max-weight must be nonnegative");
    const std::vector<std::pair<std::string, std::function<SuiteReport(const VerifyConfig&)>>> suites{
        {"pieri", verify_pieri},
        {"qdiff", verify_qdiff},
        {"commute", verify_commute},
        {"nonneg", [](const VerifyConfig& c) { return verify_nonneg(c); }},
        {"limits", [](const VerifyConfig& c) { return verify_limits(c); }},
        {"balance", verify_balance},
    };
    std::vector<SuiteReport> reports;
    for (const auto& [name, run] : suites)
        if (o.suite == "all" || o.suite == name) reports.push_back(run(cfg));

    bool ok = true;
    std::ostringstream os;
    if (o.format == "csv") {
        write_csv_row(os, {"suite", "case", "pass", "detail"});
        for (const auto& r : reports) {
            ok = ok && r.ok();
            for (const auto& c : r.cases) write_csv_row(os, {r.suite, c.name, c.pass ? "true" : "false", c.detail});
        }
    } else {
        json arr = json::array();
        for (const auto& r : reports) {
            ok = ok && r.ok();
            arr.push_back(r.to_json());
        }
        os << dump(json{{"n", o.n}, {"params", to_json(cfg.params)}, {"max_weight", o.max_weight},
                        {"seed", o.seed}, {"pass", ok}, {"suites", arr}});
    }
    emit(o, os.str());
    return ok ? kPass : kFail;
}

int cmd_ortho(const Options& o) {
    const ParamSet p = make_params(o);
    require_config(o.n <= 2 || o.force, "ortho is limited to n <= 2 unless --force is given");
    const double tol = o.tol > 0 ? o.tol : (o.n == 1 ? 1e-8 : 1e-6);
    QHahnFamily family(p, o.n, o.max_weight, o.seed);
    QuadSpec quad{o.quad_nodes, o.force, kDefaultTol};
    const auto rows = orthogonality_table(family, quad, o.max_weight);
    double worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.rel_err);
    const bool ok = worst <= tol;

    std::ostringstream os;
    if (o.format == "csv") {
        write_csv_row(os, {"lambda", "mu", "value", "target", "abs_err", "rel_err", "warning"});
        for (const auto& r : rows)
            write_csv_row(os, {partition_csv(r.lambda), partition_csv(r.mu), format_double(r.value), format_double(r.target),
                               format_double(r.abs_err), format_double(r.rel_err), r.rel_err > tol ? "accuracy" : ""});
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"lambda", to_json(r.lambda)}, {"mu", to_json(r.mu)}, {"value", r.value}, {"target", r.target},
                           {"abs_err", r.abs_err}, {"rel_err", r.rel_err}, {"warning", r.rel_err > tol}});
        os << dump(json{{"n", o.n}, {"params", to_json(p)}, {"nodes", quad.nodes_for(o.n)}, {"tol", tol},
                        {"max_rel_err", worst}, {"pass", ok}, {"rows", arr}});
    }
    emit(o, os.str());
    return ok ? kPass : kFail;
}

int cmd_scatter(const Options& o) {
    const ParamSet p = make_params(o);
    require_config(o.samples > 0, "--samples must be positive");
    const double tol = o.tol > 0 ? o.tol : 1e-12;
    const auto rows = phase_table(p, o.n, o.samples, o.seed);
    double worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.unimodular_err);
    const bool ok = worst <= tol;

    std::ostringstream os;
    if (o.format == "csv") {
        std::vector<std::string> head;
        for (int j = 1; j <= o.n; ++j) head.push_back("xi" + std::to_string(j));
        head.insert(head.end(), {"re", "im", "arg"});
        write_csv_row(os, head);
        for (const auto& r : rows) {
            std::vector<std::string> f;
            for (double x : r.xi) f.push_back(format_double(x));
            f.insert(f.end(), {format_double(r.S.real()), format_double(r.S.imag()), format_double(std::arg(r.S))});
            write_csv_row(os, f);
        }
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"xi", r.xi}, {"re", r.S.real()}, {"im", r.S.imag()}, {"arg", std::arg(r.S)}});
        os << dump(json{{"n", o.n}, {"params", to_json(p)}, {"seed", o.seed}, {"tol", tol},
                        {"max_unimodular_err", worst}, {"pass", ok}, {"rows", arr}});
    }
    emit(o, os.str());
    return ok ? kPass : kFail;
}

int cmd_evolve(const Options& o) {
    const ParamSet p = make_params(o);
    require_config(o.cutoff >= 0, "--cutoff must be nonnegative");
    require_config(o.steps >= 1, "--steps must be positive");
    std::vector<int> parts = o.initial;
    if (parts.empty()) parts.assign(static_cast<std::size_t>(o.n), 0);
    require_config(static_cast<int>(parts.size()) == o.n, "--initial must have n entries");
    require_config(Partition::is_partition(parts), "--initial must be a partition");
    require_config(Partition(parts).weight() <= o.cutoff, "--initial lies outside the cutoff");
    const double tol = o.tol > 0 ? o.tol : 1e-10;

    const auto initial = LatticeFunction<Complex>::delta(Partition(parts), Complex(1));
    const Evolver ev(p, o.n, o.cutoff);
    bool ok = true;
    json series = json::array();
    std::ostringstream os;
    if (o.format == "csv") write_csv_row(os, {"time", "lambda", "re", "im"});
    for (int k = 0; k <= o.steps; ++k) {
        const double time = o.time * k / o.steps;
        const auto r = ev.evolve(initial, time);
        ok = ok && std::abs(r.norm - r.initial_norm) <= tol;
        if (o.format == "csv") {
            for (const auto& [lambda, v] : r.state.values)
                write_csv_row(os, {format_double(time), partition_csv(lambda), format_double(v.real()), format_double(v.imag())});
            continue;
        }
        json state = json::array();
        for (const auto& [lambda, v] : r.state.values)
            state.push_back({{"lambda", to_json(lambda)}, {"re", v.real()}, {"im", v.imag()}});
        series.push_back({{"time", time}, {"norm", r.norm}, {"leakage", r.leakage},
                          {"truncation_warning", r.truncation_warning}, {"state", state}});
    }
    if (o.format != "csv")
        os << dump(json{{"n", o.n}, {"params", to_json(p)}, {"cutoff", o.cutoff}, {"pass", ok}, {"snapshots", series}});
    emit(o, os.str());
    return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice Ruijsenaars-Schneider model with Morse term"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Key-value config file; command-line flags take precedence");

    Options o;
    app.add_option("--n", o.n, "Particle number")->check(CLI::Range(1, 8));
    app.add_option("--q", o.q, "q in (0,1), as p/q or decimal");
    app.add_option("--t", o.t, "t in (0,1)");
    app.add_option("--that0", o.that0, "that_0 in (-1,1)\\{0}");
    app.add_option("--that1", o.that1, "that_1 in (-1,1)\\{0}");
    app.add_option("--that2", o.that2, "that_2 in (-1,1)\\{0}");
    app.add_option("--max-weight", o.max_weight, "Largest partition weight");
    app.add_option("--tol", o.tol, "Numerical tolerance (command-specific default)");
    app.add_option("--quad-nodes", o.quad_nodes, "Gauss-Legendre nodes per axis (0: default)");
    app.add_option("--seed", o.seed, "Seed for sample points");
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    auto* poly = app.add_subcommand("poly", "Coefficient table of P_lambda for |lambda| <= max-weight");
    auto* verify = app.add_subcommand("verify", "Run exact verification suites");
    verify->add_option("--suite", o.suite, "Suite to run")
        ->check(CLI::IsMember({"all", "pieri", "qdiff", "commute", "nonneg", "limits", "balance"}));
    auto* ortho = app.add_subcommand("ortho", "Quadrature orthogonality report");
    ortho->add_flag("--force", o.force, "Allow n > 2");
    auto* scatter = app.add_subcommand("scatter", "Scattering phase table");
    scatter->add_option("--samples", o.samples, "Number of alcove samples");
    auto* evolve = app.add_subcommand("evolve", "Truncated lattice dynamics from a delta state");
    evolve->add_option("--time", o.time, "Final time");
    evolve->add_option("--steps", o.steps, "Number of snapshots after t=0");
    evolve->add_option("--cutoff", o.cutoff, "Largest partition weight kept");
    evolve->add_option("--initial", o.initial, "Initial partition, e.g. --initial 1 0")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*poly) return cmd_poly(o);
        if (*verify) return cmd_verify(o);
        if (*ortho) return cmd_ortho(o);
        if (*scatter) return cmd_scatter(o);
        if (*evolve) return cmd_evolve(o);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DegeneracyError& e) {
        std::cerr << "non-generic parameters: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kConfigError;
}
