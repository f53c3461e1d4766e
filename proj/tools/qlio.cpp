// Command-line front end: run experiment matrices, summarize results,
// list benchmark functions, and re-run the refinement on stored solutions.

#include "qlio/qlio.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

using namespace qlio;
using namespace qlio::harness;

struct run_options
{
    std::string config_path;
    std::string functions;
    std::string dims;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> agents;
    std::optional<std::size_t> iter_scale;
    std::optional<double> p_max;
    std::optional<std::size_t> bh_agents;
    std::optional<std::size_t> bh_iters;
    std::optional<std::string> out;
    std::optional<std::size_t> workers;
    std::optional<std::string> scalars;
    bool no_seed_p2 = false;
};

experiment_config build_config(const run_options& o)
{
    experiment_config cfg;
    for (auto name : function_names()) cfg.functions.emplace_back(name);
    cfg.output_path = "results.ndjson";
    if (!o.config_path.empty()) cfg = load_config_file(o.config_path, cfg);
    if (!o.functions.empty()) cfg.functions = parse_function_list(o.functions);
    if (!o.dims.empty()) cfg.dimensions = parse_dimension_list(o.dims);
    if (o.runs) cfg.runs_per_cell = *o.runs;
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.agents) cfg.pso.num_agents = *o.agents;
    if (o.iter_scale) cfg.iteration_scale = *o.iter_scale;
    if (o.p_max) cfg.lio.p_max = *o.p_max;
    if (o.bh_agents) cfg.lio.bh_agents = *o.bh_agents;
    if (o.bh_iters) cfg.lio.bh_iterations = *o.bh_iters;
    if (o.out) cfg.output_path = *o.out;
    if (o.workers) cfg.workers = *o.workers;
    if (o.no_seed_p2) cfg.lio.seed_p2 = false;
    if (o.scalars) apply_config_value(cfg, "pso.random_scalars", *o.scalars);
    return cfg;
}

int cmd_run(const run_options& o)
{
    experiment_config cfg;
    try {
        cfg = build_config(o);
        cfg.validate();
    } catch (const qlio::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }

    const auto tasks = plan_runs(cfg).size();
    std::cerr << "running " << tasks << " runs (" << cfg.functions.size() << " functions x "
              << cfg.dimensions.size() << " dimensions x " << cfg.runs_per_cell
              << " runs) -> " << cfg.output_path << '\n';
    try {
        const auto outcome = run_experiment(cfg);
        std::ofstream csv(cfg.output_path + ".csv");
        if (csv) write_records_csv(csv, outcome.records);
        std::cerr << outcome.records.size() << " runs recorded, " << outcome.failures.size()
                  << " failed\n";
        for (const auto& f : outcome.failures) {
            std::cerr << "  " << f.function << " n=" << f.n << " run " << f.run_index << ": "
                      << f.message << '\n';
        }
        return outcome.failures.empty() ? exit_ok : exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

int cmd_stats(const std::string& in, double alpha, const std::string& csv_path)
{
    try {
        const auto stats = aggregate(read_records_file(in), alpha);
        std::cout << render_table(stats, alpha);
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            if (!csv) throw io_error("cannot open '" + csv_path + "' for writing");
            write_stats_csv(csv, stats);
        }
        return exit_ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

int cmd_list_functions()
{
    std::printf("%-10s %-12s %-18s %-8s %s\n", "name", "display", "bounds", "optimum", "formula");
    for (const auto& info : function_table) {
        char range[48];
        std::snprintf(range, sizeof range, "[%g, %g]", info.lower, info.upper);
        std::printf("%-10s %-12s %-18s %-8g %s\n", std::string(info.name).c_str(),
                    std::string(info.display_name).c_str(), range, 0.0,
                    std::string(info.formula).c_str());
    }
    return exit_ok;
}

int cmd_refine(const std::string& in, const lio_config& cfg, const std::string& out_path,
               double alpha)
{
    try {
        cfg.validate();
    } catch (const qlio::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    try {
        std::vector<run_record> refined;
        for (const auto& rec : read_records_file(in)) refined.push_back(refine_record(rec, cfg));
        if (!out_path.empty()) write_records_file(out_path, refined);
        std::cout << render_table(aggregate(refined, alpha), alpha);
        return exit_ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quaternion-space PSO with p-norm projection refinement"};
    app.require_subcommand(1);

    run_options ro;
    auto* run = app.add_subcommand("run", "Execute an experiment matrix");
    run->add_option("--config", ro.config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    run->add_option("--functions", ro.functions, "Comma-separated function names");
    run->add_option("--dims", ro.dims, "Comma-separated dimensions");
    run->add_option("--runs", ro.runs, "Runs per cell");
    run->add_option("--seed", ro.seed, "Base seed");
    run->add_option("--agents", ro.agents, "PSO agents");
    run->add_option("--iter-scale", ro.iter_scale, "Iterations = scale * n");
    run->add_option("--p-max", ro.p_max, "Upper bound of the projection exponent");
    run->add_option("--bh-agents", ro.bh_agents, "Black Hole agents");
    run->add_option("--bh-iters", ro.bh_iters, "Black Hole iterations");
    run->add_option("--out", ro.out, "Results file (line-delimited JSON)");
    run->add_option("--workers", ro.workers, "Concurrent runs");
    run->add_option("--scalars", ro.scalars, "PSO random factors: per_agent or per_variable")
        ->check(CLI::IsMember({"per_agent", "per_variable"}));
    run->add_flag("--no-seed-p2", ro.no_seed_p2, "Do not start a Black Hole agent at p = 2");

    std::string stats_in;
    std::string stats_csv;
    double alpha = 0.05;
    auto* stats = app.add_subcommand("stats", "Summarize a results file");
    stats->add_option("--in", stats_in, "Results file")->required();
    stats->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    stats->add_option("--csv", stats_csv, "Also write per-cell statistics as CSV");

    app.add_subcommand("list-functions", "List the benchmark functions");

    std::string refine_in;
    std::string refine_out;
    lio_config refine_cfg;
    auto* refine = app.add_subcommand("refine", "Re-run the refinement phase on stored solutions");
    refine->add_option("--in", refine_in, "Results file")->required();
    refine->add_option("--p-max", refine_cfg.p_max, "Upper bound of the projection exponent");
    refine->add_option("--bh-agents", refine_cfg.bh_agents, "Black Hole agents");
    refine->add_option("--bh-iters", refine_cfg.bh_iterations, "Black Hole iterations");
    refine->add_option("--out", refine_out, "Write refined records here");
    refine->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    bool refine_no_seed = false;
    refine->add_flag("--no-seed-p2", refine_no_seed, "Do not start a Black Hole agent at p = 2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    if (*run) return cmd_run(ro);
    if (*stats) return cmd_stats(stats_in, alpha, stats_csv);
    if (app.got_subcommand("list-functions")) return cmd_list_functions();
    if (*refine) {
        refine_cfg.seed_p2 = !refine_no_seed;
        return cmd_refine(refine_in, refine_cfg, refine_out, alpha);
    }
    return exit_usage;
}
