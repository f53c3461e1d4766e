#pragma once

// Quaternion-space particle swarm (global phase) and the Black Hole
// algorithm on a 1-D interval (used to tune the projection exponent).

#include "qlio/benchmarks.hpp"
#include "qlio/error.hpp"
#include "qlio/hypernum.hpp"
#include "qlio/random.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qlio {

/// Exponent used during the global phase (Euclidean projection).
inline constexpr double euclidean_p = 2.0;

/// Granularity of the random factors r1, r2 in the velocity update.
enum class random_scalars
{
    /// One pair per agent per iteration, shared by all variables.
    per_agent,
    /// A fresh pair for every decision variable.
    per_variable,
};

struct pso_config
{
    std::size_t num_agents = 100;
    std::size_t max_iterations = 20000;
    double w = 0.7;
    double c1 = 1.7;
    double c2 = 1.7;
    double early_stop_delta = 1e-5;
    std::size_t early_stop_patience = 50;
    random_scalars scalars = random_scalars::per_agent;

    /// Defaults with the iteration budget scale * n.
    static pso_config for_dimension(std::size_t n, std::size_t scale = 2000)
    {
        pso_config cfg;
        cfg.max_iterations = scale * n;
        return cfg;
    }

    void validate() const
    {
        if (num_agents == 0) throw config_error("pso: num_agents must be positive");
        if (max_iterations == 0) throw config_error("pso: max_iterations must be positive");
        if (early_stop_patience == 0) throw config_error("pso: early_stop_patience must be positive");
        if (!(early_stop_delta >= 0.0)) throw config_error("pso: early_stop_delta must be >= 0");
        if (!std::isfinite(w) || !std::isfinite(c1) || !std::isfinite(c2)) {
            throw config_error("pso: w, c1, c2 must be finite");
        }
    }

    bool operator==(const pso_config&) const = default;
};

struct agent
{
    std::vector<quaternion> position;
    std::vector<quaternion> velocity;
    std::vector<quaternion> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::infinity();
};

struct swarm
{
    std::vector<agent> agents;
    std::vector<quaternion> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
};

struct phase_result
{
    std::vector<quaternion> best_position;
    double best_fitness = 0.0;
    std::size_t iterations_used = 0;
    bool stopped_early = false;
    double wall_time = 0.0;
    std::size_t evaluations = 0;
    /// Global best after each iteration (initial swarm excluded).
    std::vector<double> history;
};

/// Fitness of a quaternion position: f(M(q_1, p), ..., M(q_n, p)).
/// `scratch` must hold n doubles.
inline double projected_fitness(const objective_function& f, std::span<const quaternion> position,
                                const p_exponent& p, std::span<double> scratch)
{
    map_vector_into(position, f.variable_bounds(), p, scratch);
    return f.evaluate(scratch);
}

/// True when the last `patience` consecutive differences in `history` are
/// all below `delta`. Needs at least patience + 1 entries.
inline bool early_stop_check(std::span<const double> history, double delta, std::size_t patience)
{
    if (patience == 0 || history.size() < patience + 1) return false;
    for (std::size_t t = history.size() - patience; t < history.size(); ++t) {
        if (!(std::fabs(history[t] - history[t - 1]) < delta)) return false;
    }
    return true;
}

namespace detail {

inline void refresh_global_best(swarm& s)
{
    for (const auto& a : s.agents) {
        if (a.best_fitness < s.best_fitness) {
            s.best_fitness = a.best_fitness;
            s.best_position = a.best_position;
        }
    }
}

} // namespace detail

/// Uniformly initialized swarm with zero velocities, evaluated once.
inline swarm qpso_initialize(const objective_function& f, const pso_config& cfg,
                             random_source& rng)
{
    const std::size_t n = f.dimension();
    const p_exponent p2(euclidean_p);
    std::vector<double> scratch(n);

    swarm s;
    s.agents.resize(cfg.num_agents);
    for (auto& a : s.agents) {
        a.position.resize(n);
        for (auto& q : a.position) {
            for (auto& z : q.z) z = rng.uniform();
        }
        a.velocity.assign(n, quaternion{});
        a.best_position = a.position;
        a.fitness = projected_fitness(f, a.position, p2, scratch);
        a.best_fitness = a.fitness;
    }
    detail::refresh_global_best(s);
    return s;
}

/// One synchronous swarm iteration.
///
/// Every agent moves using the global best from the start of the step:
///   v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x),  x <- clip(x + v)
/// with r1, r2 uniform in [0, 1) drawn per agent or per variable according
/// to cfg.scalars. All agents are then evaluated and personal/global bests
/// replaced on strict improvement only.
inline void qpso_step(swarm& s, const objective_function& f, const pso_config& cfg,
                      random_source& rng)
{
    const std::size_t n = f.dimension();
    const bool per_variable = cfg.scalars == random_scalars::per_variable;
    for (auto& a : s.agents) {
        double r1 = 0.0;
        double r2 = 0.0;
        if (!per_variable) {
            r1 = rng.uniform();
            r2 = rng.uniform();
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (per_variable) {
                r1 = rng.uniform();
                r2 = rng.uniform();
            }
            const quaternion& x = a.position[j];
            a.velocity[j] = cfg.w * a.velocity[j] + (cfg.c1 * r1) * (a.best_position[j] - x) +
                            (cfg.c2 * r2) * (s.best_position[j] - x);
            a.position[j] = clip_coefficients(x + a.velocity[j]);
        }
    }

    const p_exponent p2(euclidean_p);
    std::vector<double> scratch(n);
    for (auto& a : s.agents) {
        a.fitness = projected_fitness(f, a.position, p2, scratch);
        if (a.fitness < a.best_fitness) {
            a.best_fitness = a.fitness;
            a.best_position = a.position;
        }
    }
    detail::refresh_global_best(s);
}

/// Global phase: quaternion PSO with early stopping on stagnation of the
/// global best.
inline phase_result qpso_run(const objective_function& f, const pso_config& cfg,
                             random_source rng)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    swarm s = qpso_initialize(f, cfg, rng);
    phase_result out;
    out.evaluations = cfg.num_agents;
    out.history.reserve(cfg.max_iterations);

    for (std::size_t t = 0; t < cfg.max_iterations; ++t) {
        qpso_step(s, f, cfg, rng);
        out.evaluations += cfg.num_agents;
        out.history.push_back(s.best_fitness);
        ++out.iterations_used;
        if (early_stop_check(out.history, cfg.early_stop_delta, cfg.early_stop_patience)) {
            out.stopped_early = t + 1 < cfg.max_iterations;
            break;
        }
    }

    out.best_position = std::move(s.best_position);
    out.best_fitness = s.best_fitness;
    out.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

struct black_hole_result
{
    double best_x = 0.0;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
};

/// Offset added to every fitness when computing the event horizon radius.
inline constexpr double event_horizon_epsilon = 1e-12;

/// Black Hole search for min g(x) on [lo, hi].
///
/// Stars start uniform on the interval; `seeds` overwrite the first stars.
/// Each iteration every star except the black hole (the incumbent best)
/// moves as x <- x + r (x_bh - x); a star that lands inside the event
/// horizon R = (f_bh + eps) / sum (f_i + eps), with R taken from the
/// fitness values at the start of the iteration, is re-drawn uniformly.
/// Each star is evaluated once per iteration at its final position and
/// becomes the black hole on strict improvement. Hence the evaluation count
/// is at most num_agents * (iterations + 1).
template <class Objective>
black_hole_result black_hole_run(Objective&& g, double lo, double hi, std::size_t num_agents,
                                 std::size_t iterations, random_source& rng,
                                 std::span<const double> seeds = {})
{
    bounds{lo, hi}.validate();
    if (num_agents < 2) throw config_error("black hole: need at least 2 agents");
    if (seeds.size() > num_agents) throw shape_error("black hole: more seeds than agents");
    for (double s : seeds) {
        if (!(s >= lo && s <= hi)) throw bounds_error("black hole: seed outside interval");
    }

    std::vector<double> x(num_agents);
    std::vector<double> fit(num_agents);
    black_hole_result out;

    for (std::size_t i = 0; i < num_agents; ++i) {
        x[i] = rng.uniform(lo, hi);
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) x[i] = seeds[i];

    std::size_t bh = 0;
    for (std::size_t i = 0; i < num_agents; ++i) {
        fit[i] = g(x[i]);
        ++out.evaluations;
        if (fit[i] < fit[bh]) bh = i;
    }

    for (std::size_t t = 0; t < iterations; ++t) {
        double total = 0.0;
        for (double v : fit) total += v + event_horizon_epsilon;
        const double radius = (fit[bh] + event_horizon_epsilon) / total;

        for (std::size_t i = 0; i < num_agents; ++i) {
            if (i == bh) continue;
            const double r = rng.uniform();
            double xi = std::clamp(x[i] + r * (x[bh] - x[i]), lo, hi);
            if (std::fabs(xi - x[bh]) < radius) xi = rng.uniform(lo, hi);
            x[i] = xi;
            fit[i] = g(xi);
            ++out.evaluations;
            if (fit[i] < fit[bh]) bh = i;
        }
    }

    out.best_x = x[bh];
    out.best_fitness = fit[bh];
    return out;
}

} // namespace qlio
