#pragma once

// Experiment matrix: every (function, n) cell run `runs_per_cell` times with
// independently derived seeds, records appended to disk as they finish.

#include "qlio/benchmarks.hpp"
#include "qlio/error.hpp"
#include "qlio/harness/records.hpp"
#include "qlio/lio.hpp"
#include "qlio/optimizers.hpp"
#include "qlio/random.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

namespace qlio::harness {

struct experiment_config
{
    std::vector<std::string> functions;
    std::vector<std::size_t> dimensions = {10, 25, 50, 100};
    std::size_t runs_per_cell = 15;
    std::uint64_t base_seed = 0;
    /// max_iterations is ignored; each cell uses iteration_scale * n.
    pso_config pso;
    lio_config lio;
    std::size_t iteration_scale = 2000;
    std::string output_path;
    std::size_t workers = 1;

    void validate() const
    {
        if (functions.empty()) throw config_error("experiment: no functions");
        if (dimensions.empty()) throw config_error("experiment: no dimensions");
        if (runs_per_cell == 0) throw config_error("experiment: runs_per_cell must be >= 1");
        if (iteration_scale == 0) throw config_error("experiment: iteration_scale must be >= 1");
        for (const auto& f : functions) {
            for (auto n : dimensions) (void)make_function(f, n);
        }
        pso_for(dimensions.front()).validate();
        lio.validate();
    }

    pso_config pso_for(std::size_t n) const
    {
        pso_config cfg = pso;
        cfg.max_iterations = iteration_scale * n;
        return cfg;
    }
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        if (auto item = trim(s.substr(start, end - start)); !item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value)
{
    std::istringstream is(value);
    T out{};
    if (!(is >> out) || !(is >> std::ws).eof()) {
        throw config_error("config: bad value for '" + key + "': '" + value + "'");
    }
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw config_error("config: bad boolean for '" + key + "': '" + value + "'");
}

} // namespace detail

inline std::vector<std::size_t> parse_dimension_list(std::string_view s)
{
    std::vector<std::size_t> out;
    for (const auto& item : detail::split_list(s)) {
        out.push_back(detail::parse_number<std::size_t>("dimensions", item));
    }
    return out;
}

inline std::vector<std::string> parse_function_list(std::string_view s)
{
    return detail::split_list(s);
}

/// Applies one `key = value` setting. Keys mirror experiment_config fields;
/// nested configs use `pso.` and `lio.` prefixes.
inline void apply_config_value(experiment_config& cfg, const std::string& key,
                               const std::string& value)
{
    using detail::parse_bool;
    using detail::parse_number;
    if (key == "functions") cfg.functions = parse_function_list(value);
    else if (key == "dimensions") cfg.dimensions = parse_dimension_list(value);
    else if (key == "runs_per_cell") cfg.runs_per_cell = parse_number<std::size_t>(key, value);
    else if (key == "base_seed") cfg.base_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "iteration_scale") cfg.iteration_scale = parse_number<std::size_t>(key, value);
    else if (key == "output_path") cfg.output_path = value;
    else if (key == "workers") cfg.workers = parse_number<std::size_t>(key, value);
    else if (key == "pso.num_agents") cfg.pso.num_agents = parse_number<std::size_t>(key, value);
    else if (key == "pso.w") cfg.pso.w = parse_number<double>(key, value);
    else if (key == "pso.c1") cfg.pso.c1 = parse_number<double>(key, value);
    else if (key == "pso.c2") cfg.pso.c2 = parse_number<double>(key, value);
    else if (key == "pso.early_stop_delta") cfg.pso.early_stop_delta = parse_number<double>(key, value);
    else if (key == "pso.early_stop_patience")
        cfg.pso.early_stop_patience = parse_number<std::size_t>(key, value);
    else if (key == "pso.random_scalars") {
        if (value == "per_agent") cfg.pso.scalars = random_scalars::per_agent;
        else if (value == "per_variable") cfg.pso.scalars = random_scalars::per_variable;
        else throw config_error("config: pso.random_scalars must be per_agent or per_variable");
    }
    else if (key == "lio.p_max") cfg.lio.p_max = parse_number<double>(key, value);
    else if (key == "lio.bh_agents") cfg.lio.bh_agents = parse_number<std::size_t>(key, value);
    else if (key == "lio.bh_iterations") cfg.lio.bh_iterations = parse_number<std::size_t>(key, value);
    else if (key == "lio.seed_p2") cfg.lio.seed_p2 = parse_bool(key, value);
    else throw config_error("config: unknown key '" + key + "'");
}

/// Reads a flat `key = value` document; `#` starts a comment.
inline experiment_config parse_config(std::istream& is, experiment_config cfg = {})
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_config_value(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

inline experiment_config load_config_file(const std::string& path, experiment_config cfg = {})
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config '" + path + "'");
    return parse_config(in, std::move(cfg));
}

/// Hash of every setting that affects numeric results (output path and
/// worker count excluded), as 16 hex digits.
inline std::string config_hash(const experiment_config& cfg)
{
    std::ostringstream os;
    os.precision(17);
    for (const auto& f : cfg.functions) os << f << ',';
    os << '|';
    for (auto n : cfg.dimensions) os << n << ',';
    os << '|' << cfg.runs_per_cell << '|' << cfg.base_seed << '|' << cfg.iteration_scale << '|'
       << cfg.pso.num_agents << '|' << cfg.pso.w << '|' << cfg.pso.c1 << '|' << cfg.pso.c2 << '|'
       << cfg.pso.early_stop_delta << '|' << cfg.pso.early_stop_patience << '|'
       << static_cast<int>(cfg.pso.scalars) << '|' << cfg.lio.p_max
       << '|' << cfg.lio.bh_agents << '|' << cfg.lio.bh_iterations << '|' << cfg.lio.seed_p2;
    const std::uint64_t h = hash_combine(0x51105eedULL, os.str());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Seed of one run, a pure function of its cell coordinates.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view function,
                                 std::size_t n, std::size_t run_index)
{
    std::uint64_t h = mix64(base_seed);
    h = hash_combine(h, function);
    h = hash_combine(h, n);
    return hash_combine(h, run_index);
}

struct run_task
{
    std::string function;
    std::size_t n = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
};

/// Tasks in matrix order: function, then dimension, then run.
inline std::vector<run_task> plan_runs(const experiment_config& cfg)
{
    std::vector<run_task> tasks;
    for (const auto& f : cfg.functions) {
        for (auto n : cfg.dimensions) {
            for (std::size_t r = 0; r < cfg.runs_per_cell; ++r) {
                tasks.push_back({f, n, r, derive_seed(cfg.base_seed, f, n, r)});
            }
        }
    }
    return tasks;
}

inline run_record make_record(const run_task& task, const run_result& res, const std::string& hash)
{
    run_record r;
    r.function = task.function;
    r.n = task.n;
    r.run_index = task.run_index;
    r.seed = task.seed;
    r.mu = res.phase1.best_fitness;
    r.mu_star = res.refined_fitness;
    r.p_star = res.p_star;
    r.phase1_time = res.phase1.wall_time;
    r.lio_time = res.lio_wall_time;
    r.iterations_used = res.phase1.iterations_used;
    r.stopped_early = res.phase1.stopped_early;
    r.lio_evaluations = res.lio_evaluations;
    r.timestamp = utc_timestamp();
    r.config_hash = hash;
    r.q_star = res.phase1.best_position;
    return r;
}

inline run_record execute_task(const run_task& task, const experiment_config& cfg,
                               const std::string& hash)
{
    const auto f = make_function(task.function, task.n);
    const auto res = optimize(f, cfg.pso_for(task.n), cfg.lio, random_source(task.seed));
    return make_record(task, res, hash);
}

struct experiment_outcome
{
    /// Successful runs in matrix order.
    std::vector<run_record> records;
    std::vector<run_failure> failures;
};

/// Runs the whole matrix on `cfg.workers` threads.
///
/// When `cfg.output_path` is set, each record is appended to it (and each
/// failure to `<output_path>.errors.ndjson`) and flushed as soon as it
/// finishes. A failed run is recorded and skipped. A write failure stops
/// scheduling new runs and raises io_error once in-flight runs finish; the
/// file keeps the records written so far.
inline experiment_outcome run_experiment(const experiment_config& cfg)
{
    cfg.validate();
    const std::string hash = config_hash(cfg);
    const auto tasks = plan_runs(cfg);

    std::optional<std::ofstream> out;
    std::optional<std::ofstream> err;
    if (!cfg.output_path.empty()) {
        out.emplace(cfg.output_path, std::ios::trunc);
        if (!*out) throw io_error("cannot open '" + cfg.output_path + "' for writing");
        err.emplace(cfg.output_path + ".errors.ndjson", std::ios::trunc);
        if (!*err) throw io_error("cannot open error log next to '" + cfg.output_path + "'");
    }

    std::vector<std::optional<run_record>> slots(tasks.size());
    std::vector<run_failure> failures;
    std::mutex writer;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> io_failed{false};

    const auto worker = [&] {
        for (;;) {
            if (io_failed.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto& task = tasks[i];
            try {
                run_record rec = execute_task(task, cfg, hash);
                std::lock_guard lock(writer);
                if (out) {
                    *out << to_ndjson_line(rec) << '\n' << std::flush;
                    if (!*out) io_failed = true;
                }
                slots[i] = std::move(rec);
            } catch (const std::exception& e) {
                run_failure fail{task.function, task.n, task.run_index, task.seed, e.what()};
                std::lock_guard lock(writer);
                if (err) *err << to_json(fail).dump() << '\n' << std::flush;
                failures.push_back(std::move(fail));
            }
        }
    };

    const std::size_t nthreads =
        std::clamp<std::size_t>(cfg.workers, 1, std::max<std::size_t>(tasks.size(), 1));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }

    if (io_failed) throw io_error("write to '" + cfg.output_path + "' failed; partial results kept");

    experiment_outcome outcome;
    for (auto& s : slots) {
        if (s) outcome.records.push_back(std::move(*s));
    }
    outcome.failures = std::move(failures);
    std::sort(outcome.failures.begin(), outcome.failures.end(),
              [](const run_failure& a, const run_failure& b) {
                  return std::tie(a.function, a.n, a.run_index) <
                         std::tie(b.function, b.n, b.run_index);
              });
    return outcome;
}

/// Re-runs only the refinement on stored q*, reusing each record's seed so
/// an unchanged lio_config reproduces mu_star and p_star exactly.
inline run_record refine_record(const run_record& rec, const lio_config& cfg)
{
    const auto f = make_function(rec.function, rec.n);
    phase_result phase1;
    phase1.best_position = rec.q_star;
    phase1.best_fitness = rec.mu;
    phase1.iterations_used = rec.iterations_used;
    phase1.stopped_early = rec.stopped_early;
    phase1.wall_time = rec.phase1_time;

    const auto res = refine(f, phase1, cfg, refine_phase_stream(random_source(rec.seed)));
    run_record out = rec;
    out.mu_star = res.refined_fitness;
    out.p_star = res.p_star;
    out.lio_time = res.lio_wall_time;
    out.lio_evaluations = res.lio_evaluations;
    out.timestamp = utc_timestamp();
    return out;
}

} // namespace qlio::harness
