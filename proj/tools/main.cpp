// mgflab command-line front end: evaluates one-sided moment generating
// functions, scans existence domains, and runs the convergence experiments,
// emitting CSV or JSON reports.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgflab/convergence.hpp"
#include "mgflab/distributions.hpp"
#include "mgflab/gridspec.hpp"
#include "mgflab/mgf.hpp"
#include "mgflab/montecarlo.hpp"
#include "mgflab/report_io.hpp"

namespace {

using namespace mgflab;

constexpr int kExitOk = 0;
constexpr int kExitEvaluation = 1;
constexpr int kExitUsage = 2;

DistributionModel parse_model(const std::string& spec) {
    if (spec == "frechet") return frechet_model();
    if (spec == "lognormal") return lognormal_model();
    if (spec == "uniform01" || spec == "uniform") return uniform01_model();
    if (spec == "normal" || spec == "std_normal") return standard_normal_model();

    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto int_arg = [&](const char* what) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(what);
            return n;
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("model '") + spec + "': bad " + what);
        }
    };

    if (head == "pareto_seq" || head == "pareto") return pareto_seq_model(int_arg("index n"));
    if (head == "clt_exponential" || head == "clt")
        return clt_exponential_model(int_arg("index n"));
    if (head == "degenerate") {
        try {
            return degenerate_model(parse_double(arg));
        } catch (const std::exception&) {
            throw std::invalid_argument("model '" + spec + "': bad point-mass location");
        }
    }
    if (head == "tabulated") {
        auto [model, report] = tabulated_model(arg);
        if (report.message != "ok") std::cerr << "tabulated load report: " << report.message << "\n";
        return model;
    }
    throw std::invalid_argument("unknown model '" + spec + "'");
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::path p(out_path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("MGFLAB_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
            p = std::filesystem::path(dir) / p;
    }
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write output file '" + p.string() + "'");
    f << text;
    if (!f.good()) throw std::runtime_error("write failed for '" + p.string() + "'");
}

struct CommonOpts {
    std::string out;
    std::string format = "csv";
    QuadratureConfig quad;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const char* default_format = "csv") {
    opts.format = default_format;
    cmd->add_option("--out", opts.out,
                    "output file (default stdout; relative paths resolve under $MGFLAB_OUTPUT_DIR)");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--abs-tol", opts.quad.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--rel-tol", opts.quad.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--max-subdivisions", opts.quad.max_subdivisions, "quadrature panel budget");
}

nlohmann::ordered_json scan_json(const std::string& label, const std::vector<ScanEntry>& scan) {
    nlohmann::ordered_json j;
    j["model"] = label;
    j["scan"] = nlohmann::ordered_json::array();
    for (const auto& e : scan) j["scan"].push_back({{"t", e.t}, {"status", status_name(e.status)}});
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-sided moment generating functions: evaluation, existence scans, and "
                 "convergence diagnostics"};
    app.require_subcommand(1);

    // ---- mgf ----------------------------------------------------------
    auto* mgf_cmd = app.add_subcommand("mgf", "evaluate M(t) for one model at one t");
    std::string mgf_model;
    double mgf_t = 0.0;
    std::string mgf_route = "auto";
    std::uint64_t mgf_seed = kDefaultSeed;
    std::size_t mgf_mc_count = 1000000;
    CommonOpts mgf_opts;
    mgf_cmd->add_option("--model", mgf_model, "model spec (see --help-models)")->required();
    mgf_cmd->add_option("--t", mgf_t, "evaluation point t")->required();
    mgf_cmd->add_option("--route", mgf_route, "evaluation route")
        ->check(CLI::IsMember({"auto", "density", "tail", "closed_form", "mc"}));
    mgf_cmd->add_option("--seed", mgf_seed, "seed for the mc route");
    mgf_cmd->add_option("--mc-count", mgf_mc_count, "draw count for the mc route");
    add_common(mgf_cmd, mgf_opts);

    // ---- scan ---------------------------------------------------------
    auto* scan_cmd = app.add_subcommand("scan", "classify M(t) over a t grid");
    std::string scan_model, scan_grid;
    CommonOpts scan_opts;
    scan_cmd->add_option("--model", scan_model, "model spec")->required();
    scan_cmd->add_option("--t-grid", scan_grid, "grid spec lo:hi:count")->required();
    add_common(scan_cmd, scan_opts);

    // ---- converge -----------------------------------------------------
    auto* conv_cmd = app.add_subcommand(
        "converge", "per-(n, t) MGF table or per-n sup-distance table for a family");
    std::string conv_family, conv_grid, conv_nset, conv_table = "mgf";
    CommonOpts conv_opts;
    conv_cmd->add_option("--family", conv_family, "family id")->required();
    conv_cmd->add_option("--t-grid", conv_grid, "grid spec lo:hi:count (required for --table mgf)");
    conv_cmd->add_option("--n-set", conv_nset, "comma list or logspace:lo:hi:count");
    conv_cmd->add_option("--table", conv_table, "which table to emit")
        ->check(CLI::IsMember({"mgf", "distance"}));
    add_common(conv_cmd, conv_opts);

    // ---- theorem1 -----------------------------------------------------
    auto* th1_cmd = app.add_subcommand(
        "theorem1", "boundedness + weak-convergence verdicts with the consistency cross-check");
    std::string th1_family, th1_interval, th1_grid, th1_nset;
    double th1_mgf_tol = 1e-2, th1_cdf_tol = 1e-2;
    CommonOpts th1_opts;
    th1_cmd->add_option("--family", th1_family, "family id")->required();
    th1_cmd->add_option("--interval", th1_interval, "interval a,b")->required();
    th1_cmd->add_option("--t-grid", th1_grid, "grid spec lo:hi:count (default: 9 interior points)");
    th1_cmd->add_option("--n-set", th1_nset, "comma list or logspace:lo:hi:count");
    th1_cmd->add_option("--mgf-tol", th1_mgf_tol, "|M_n - M| tolerance at the largest n");
    th1_cmd->add_option("--cdf-tol", th1_cdf_tol, "sup-distance tolerance at the largest n");
    add_common(th1_cmd, th1_opts, "json");

    // ---- theorem2 -----------------------------------------------------
    auto* th2_cmd = app.add_subcommand(
        "theorem2", "uniform convergence of transformed CDFs and the tail-integral cross-check");
    std::string th2_family, th2_nset;
    double th2_t = 0.0;
    CommonOpts th2_opts;
    th2_cmd->add_option("--family", th2_family, "family id")->required();
    th2_cmd->add_option("--t", th2_t, "nonzero t inside the existence interval")->required();
    th2_cmd->add_option("--n-set", th2_nset, "comma list or logspace:lo:hi:count");
    add_common(th2_cmd, th2_opts);

    // ---- mc -----------------------------------------------------------
    auto* mc_cmd = app.add_subcommand("mc", "seeded Monte Carlo oracle for one model");
    std::string mc_model;
    std::size_t mc_count = 1000000;
    std::uint64_t mc_seed = kDefaultSeed;
    double mc_t = 0.0;
    CommonOpts mc_opts;
    mc_cmd->add_option("--model", mc_model, "model spec")->required();
    mc_cmd->add_option("--count", mc_count, "number of draws");
    mc_cmd->add_option("--seed", mc_seed, "stream seed");
    mc_cmd->add_option("--t", mc_t, "t for the empirical MGF");
    add_common(mc_cmd, mc_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*mgf_cmd) {
            const DistributionModel model = parse_model(mgf_model);
            MgfValue v;
            if (mgf_route == "auto") {
                v = evaluate_mgf(model, mgf_t, mgf_opts.quad);
            } else if (mgf_route == "density") {
                v = mgf_via_density(model, mgf_t, mgf_opts.quad);
            } else if (mgf_route == "tail") {
                v = mgf_via_tail(model, mgf_t, mgf_opts.quad);
            } else if (mgf_route == "closed_form") {
                v = model.closed_form_mgf(mgf_t);
            } else {
                const MgfEstimate est = empirical_mgf(sample(model, mgf_mc_count, mgf_seed), mgf_t);
                v.route = MgfRoute::monte_carlo;
                v.status = est.overflow ? EvalStatus::Inconclusive : EvalStatus::Finite;
                v.value = est.estimate;
                v.error_estimate = est.std_error;
                if (est.overflow) v.diagnostics = "draw overflowed exp(t x)";
            }
            if (mgf_opts.format == "csv") {
                write_output(single_mgf_csv(model.label(), mgf_t, v), mgf_opts.out);
            } else {
                nlohmann::ordered_json j;
                j["model"] = model.label();
                j["t"] = mgf_t;
                j.update(mgf_value_json(v));
                write_output(j.dump(2) + "\n", mgf_opts.out);
            }
        } else if (*scan_cmd) {
            const DistributionModel model = parse_model(scan_model);
            const auto grid = parse_grid(scan_grid);
            const auto scan = existence_scan(model, grid, scan_opts.quad);
            write_output(scan_opts.format == "csv"
                             ? scan_csv(model.label(), scan)
                             : scan_json(model.label(), scan).dump(2) + "\n",
                         scan_opts.out);
        } else if (*conv_cmd) {
            const DistributionFamily family = make_family(conv_family);
            const std::vector<int> n_set =
                conv_nset.empty() ? family.index_set() : parse_n_set(conv_nset);
            if (conv_table == "distance") {
                if (!family.declared_limit())
                    throw std::runtime_error("family '" + conv_family +
                                             "' has no declared limit; no distance table");
                LabConfig lab;
                lab.quad = conv_opts.quad;
                std::vector<DistanceRow> rows;
                for (int n : n_set) {
                    const SupDistance d =
                        sup_distance(family.member(n), *family.declared_limit(), lab);
                    rows.push_back({n, d.distance, d.arg_x});
                }
                write_output(distance_table_csv(rows), conv_opts.out);
            } else {
                if (conv_grid.empty())
                    throw std::invalid_argument("converge --table mgf requires --t-grid");
                const auto grid = parse_grid(conv_grid);
                std::vector<MgfCell> table;
                for (int n : n_set) {
                    const DistributionModel m = family.member(n);
                    for (double t : grid) table.push_back({n, t, evaluate_mgf(m, t, conv_opts.quad)});
                }
                write_output(mgf_table_csv(family.id(), table), conv_opts.out);
            }
        } else if (*th1_cmd) {
            const DistributionFamily family = make_family(th1_family);
            const Interval interval = parse_interval(th1_interval);
            LabConfig lab;
            lab.quad = th1_opts.quad;
            lab.mgf_tol = th1_mgf_tol;
            lab.cdf_tol = th1_cdf_tol;
            const std::vector<double> grid = th1_grid.empty() ? std::vector<double>{} : parse_grid(th1_grid);
            const std::vector<int> n_set =
                th1_nset.empty() ? family.index_set() : parse_n_set(th1_nset);
            const ConvergenceReport rep = theorem1_report(family, interval, grid, n_set, lab);
            if (th1_opts.format == "json")
                write_output(report_json(rep).dump(2) + "\n", th1_opts.out);
            else
                write_output(mgf_table_csv(rep.family_id, rep.mgf_table), th1_opts.out);
        } else if (*th2_cmd) {
            const DistributionFamily family = make_family(th2_family);
            LabConfig lab;
            lab.quad = th2_opts.quad;
            const std::vector<int> n_set =
                th2_nset.empty() ? family.index_set() : parse_n_set(th2_nset);
            const auto rows = theorem2_demo(family, th2_t, n_set, lab);
            if (th2_opts.format == "csv") {
                write_output(theorem2_csv(rows), th2_opts.out);
            } else {
                nlohmann::ordered_json j = nlohmann::ordered_json::array();
                for (const auto& r : rows) {
                    nlohmann::ordered_json row;
                    row["n"] = r.n;
                    row["sup_g_distance"] = r.sup_g_distance;
                    row["arg_x"] = r.arg_x;
                    row["tail_mgf"] = mgf_value_json(r.tail_mgf);
                    row["reference_mgf"] = mgf_value_json(r.reference_mgf);
                    if (!std::isnan(r.abs_diff)) row["abs_diff"] = r.abs_diff;
                    j.push_back(row);
                }
                write_output(j.dump(2) + "\n", th2_opts.out);
            }
        } else if (*mc_cmd) {
            const DistributionModel model = parse_model(mc_model);
            const SampleBatch batch = sample(model, mc_count, mc_seed);
            if (batch.draws.empty()) throw std::runtime_error("mc: --count must be positive");
            const MgfEstimate est = empirical_mgf(batch, mc_t);
            const double ks = empirical_cdf_distance(batch, model);
            if (mc_opts.format == "csv") {
                std::string out = "model,count,seed,t,mgf_estimate,mgf_std_error,overflow,ks_distance\n";
                out += model.label() + ',' + format_int(static_cast<long long>(batch.count())) +
                       ',' + format_int(static_cast<long long>(mc_seed)) + ',' +
                       format_double(mc_t) + ',' + format_double(est.estimate) + ',' +
                       format_double(est.std_error) + ',' + (est.overflow ? "1" : "0") + ',' +
                       format_double(ks) + '\n';
                write_output(out, mc_opts.out);
            } else {
                nlohmann::ordered_json j;
                j["model"] = model.label();
                j["count"] = batch.count();
                j["seed"] = mc_seed;
                j["t"] = mc_t;
                j["mgf_estimate"] = est.estimate;
                j["mgf_std_error"] = est.std_error;
                j["overflow"] = est.overflow;
                j["ks_distance"] = ks;
                write_output(j.dump(2) + "\n", mc_opts.out);
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EvaluationError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEvaluation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEvaluation;
    }
    return kExitOk;
}
