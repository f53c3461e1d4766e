#pragma once

// Last-iteration refinement: after the global phase, freeze the best
// hypercomplex solution q* and search the projection exponent p in
// [1, p_max] that minimizes f(M(q*_1, p), ..., M(q*_n, p)).

#include "qlio/benchmarks.hpp"
#include "qlio/error.hpp"
#include "qlio/hypernum.hpp"
#include "qlio/optimizers.hpp"
#include "qlio/random.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qlio {

struct lio_config
{
    double p_max = 5.0;
    std::size_t bh_agents = 20;
    std::size_t bh_iterations = 50;
    /// Start one Black Hole agent at p = 2 so the refined fitness can never
    /// be worse than the global-phase fitness.
    bool seed_p2 = true;

    void validate() const
    {
        if (!(p_max > 1.0) || !std::isfinite(p_max)) throw config_error("lio: p_max must be > 1");
        if (bh_agents < 2) throw config_error("lio: bh_agents must be >= 2");
        if (bh_iterations == 0) throw config_error("lio: bh_iterations must be positive");
    }

    bool operator==(const lio_config&) const = default;
};

struct run_result
{
    phase_result phase1;
    double refined_fitness = 0.0;
    double p_star = euclidean_p;
    double lio_wall_time = 0.0;
    std::size_t lio_evaluations = 0;
    lio_config config;
};

/// g(p) = f(M(q*_1, p), ..., M(q*_n, p)) over p in [1, p_max].
///
/// Holds a reference to `f`, which must outlive the object. q* is copied
/// with its coefficient logarithms cached.
class projection_objective
{
public:
    projection_objective(const objective_function& f, std::span<const quaternion> q_star,
                         double p_max)
        : f_(&f), q_star_(q_star.begin(), q_star.end()), p_max_(p_max), scratch_(f.dimension())
    {
        if (q_star.size() != f.dimension()) {
            throw shape_error("projection objective: q* has " + std::to_string(q_star.size()) +
                              " quaternions, function expects " + std::to_string(f.dimension()));
        }
    }

    double operator()(double p) const
    {
        if (!(p >= 1.0 && p <= p_max_)) {
            throw invalid_exponent_error("projection objective: p = " + std::to_string(p) +
                                         " outside [1, " + std::to_string(p_max_) + "]");
        }
        map_vector_into(std::span<const cached_quaternion>(q_star_), f_->variable_bounds(),
                        p_exponent(p), scratch_);
        return f_->evaluate(scratch_);
    }

    double p_max() const { return p_max_; }

private:
    const objective_function* f_;
    std::vector<cached_quaternion> q_star_;
    double p_max_;
    mutable std::vector<double> scratch_;
};

/// Second phase on a finished global phase. `phase1` is not modified.
inline run_result refine(const objective_function& f, const phase_result& phase1,
                         const lio_config& cfg, random_source rng)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    const projection_objective g(f, phase1.best_position, cfg.p_max);
    const double p2_seed[] = {euclidean_p};
    const std::span<const double> seeds =
        cfg.seed_p2 ? std::span<const double>(p2_seed) : std::span<const double>();

    const auto bh = black_hole_run(g, 1.0, cfg.p_max, cfg.bh_agents, cfg.bh_iterations, rng, seeds);

    run_result out;
    out.phase1 = phase1;
    out.refined_fitness = bh.best_fitness;
    out.p_star = bh.best_x;
    out.lio_evaluations = bh.evaluations;
    out.config = cfg;
    out.lio_wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Stream of `rng` used by each phase of optimize().
inline random_source global_phase_stream(const random_source& rng) { return rng.fork(0); }
inline random_source refine_phase_stream(const random_source& rng) { return rng.fork(1); }

/// Full pipeline: global quaternion PSO with p = 2, then refine.
inline run_result optimize(const objective_function& f, const pso_config& pso_cfg,
                           const lio_config& lio_cfg, const random_source& rng)
{
    lio_cfg.validate();
    phase_result phase1 = qpso_run(f, pso_cfg, global_phase_stream(rng));
    return refine(f, phase1, lio_cfg, refine_phase_stream(rng));
}

} // namespace qlio
