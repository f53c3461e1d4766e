// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include "qlio/qlio.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace qlio;
using namespace qlio::harness;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail)
{
    std::printf("[%s] AC%-2d %-38s %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

quaternion random_quaternion(std::mt19937_64& gen, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(gen), u(gen), u(gen), u(gen)};
}

// Desk-scale protocol shared by criteria 4, 6, 7, 8 and 10.
experiment_config desk_matrix(std::size_t workers)
{
    experiment_config cfg;
    for (auto name : function_names()) cfg.functions.emplace_back(name);
    cfg.dimensions = {10};
    cfg.runs_per_cell = 5;
    cfg.base_seed = 42;
    cfg.iteration_scale = 200;
    cfg.workers = workers;
    return cfg;
}

std::vector<const run_record*> cell(const std::vector<run_record>& recs, const std::string& fn)
{
    std::vector<const run_record*> out;
    for (const auto& r : recs) {
        if (r.function == fn) out.push_back(&r);
    }
    return out;
}

void ac1_mapping_bounded()
{
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> pd(1.0, 5.0);
    std::uniform_real_distribution<double> lo(-1000.0, 1000.0);
    std::uniform_real_distribution<double> width(1e-6, 1000.0);
    std::vector<quaternion> qs;
    std::vector<bounds> bs;
    std::vector<double> ps;
    for (int i = 0; i < 10000; ++i) {
        // include saturated and zero coefficients
        auto q = clip_coefficients(random_quaternion(gen, -0.25, 1.25));
        qs.push_back(q);
        const double l = lo(gen);
        bs.push_back({l, l + width(gen)});
        ps.push_back(pd(gen));
    }
    const auto t0 = std::chrono::steady_clock::now();
    int violations = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double x = map_to_real(qs[i], bs[i], ps[i]);
        if (!(x >= bs[i].lower && x <= bs[i].upper)) ++violations;
    }
    const double dt = seconds_since(t0);
    report(1, "mapping boundedness", violations == 0 && dt < 1.0,
           fmt("violations=%d over 10000, %.4f s (< 1 s)", violations, dt));
}

void ac2_norm_reduction()
{
    std::mt19937_64 gen(2);
    double worst2 = 0.0;
    double worst1 = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto q = random_quaternion(gen, -100.0, 100.0);
        const double euclid = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
        const double taxi = std::fabs(q[0]) + std::fabs(q[1]) + std::fabs(q[2]) + std::fabs(q[3]);
        worst2 = std::max(worst2, std::fabs(pnorm(q, 2.0) - euclid) / euclid);
        worst1 = std::max(worst1, std::fabs(pnorm(q, 1.0) - taxi) / taxi);
    }
    report(2, "norm reduction (p=1, p=2)", worst2 <= 1e-12 && worst1 <= 1e-12,
           fmt("max rel err p=2 %.2e, p=1 %.2e (tol 1e-12)", worst2, worst1));
}

void ac3_benchmark_optima()
{
    double worst = 0.0;
    for (auto name : function_names()) {
        for (std::size_t n : {2, 10, 50}) {
            const std::vector<double> zero(n, 0.0);
            worst = std::max(worst, std::fabs(make_function(name, n).evaluate(zero)));
        }
    }
    report(3, "benchmark optima at origin", worst <= 1e-15,
           fmt("max |f(0)| = %.2e over 8 functions x n in {2,10,50} (tol 1e-15)", worst));
}

void ac4_never_regresses(const std::vector<run_record>& recs)
{
    std::size_t ok = 0;
    for (const auto& r : recs) ok += r.mu_star <= r.mu;
    report(4, "refinement never regresses", ok == recs.size() && recs.size() == 40,
           fmt("mu* <= mu in %zu / %zu runs", ok, recs.size()));
}

void ac5_sphere_convergence()
{
    const auto f = make_function("sphere", 10);
    pso_config cfg;
    cfg.num_agents = 100;
    cfg.max_iterations = 2000;
    cfg.early_stop_delta = 1e-5;
    cfg.early_stop_patience = 50;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> best;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        best.push_back(qpso_run(f, cfg, random_source(seed)).best_fitness);
    }
    const double dt = seconds_since(t0);
    const double med = median(best);
    report(5, "desk-scale sphere convergence", med <= 1e-4 && dt < 120.0,
           fmt("median mu = %.4e (<= 1e-4), %.2f s (< 120 s)", med, dt));
}

void ac6_brown_improvement(const std::vector<run_record>& recs)
{
    std::vector<double> rel, p;
    int satisfied = 0;
    for (const auto* r : cell(recs, "brown")) {
        const double improvement = r->mu > 0.0 ? (r->mu - r->mu_star) / r->mu : 0.0;
        rel.push_back(improvement);
        p.push_back(r->p_star);
        satisfied += improvement >= 0.2 && r->p_star < 1.8;
    }
    report(6, "brown improvement", satisfied >= 3,
           fmt("%d/5 seeds with rel >= 0.2 and p* < 1.8 (need 3); median rel %.3f, median p* %.3f",
               satisfied, median(rel), median(p)));
}

void ac7_rastrigin_p_near_two(const std::vector<run_record>& recs)
{
    std::vector<double> dev;
    for (const auto* r : cell(recs, "rastrigin")) dev.push_back(std::fabs(r->p_star - 2.0));
    const double med = median(dev);
    report(7, "rastrigin p* near 2", med <= 0.1, fmt("median |p* - 2| = %.4f (<= 0.1)", med));
}

void ac8_refinement_cheap(const std::vector<run_record>& recs)
{
    std::size_t cheap = 0;
    std::size_t max_evals = 0;
    double worst = 0.0;
    std::map<std::string, int> over;
    for (const auto& r : recs) {
        const double ratio = r.lio_time / r.phase1_time;
        worst = std::max(worst, ratio);
        if (ratio <= 0.15) ++cheap;
        else ++over[r.function];
        max_evals = std::max(max_evals, r.lio_evaluations);
    }
    std::string over_list;
    for (const auto& [name, count] : over) {
        over_list += (over_list.empty() ? "" : ", ") + name + " x" + std::to_string(count);
    }
    const double share = recs.empty() ? 0.0 : static_cast<double>(cheap) / recs.size();
    report(8, "refinement cost", share >= 0.9 && max_evals <= 20 * 51,
           fmt("%.0f%% of runs with LIO <= 15%% of phase-1 time (need 90%%, worst %.3f); "
               "max evaluations %zu (<= 1020)%s%s",
               100.0 * share, worst, max_evals, over.empty() ? "" : "; over budget: ",
               over_list.c_str()));
}

double brute_force_wilcoxon(const std::vector<double>& diffs)
{
    std::vector<double> d;
    for (double v : diffs) {
        if (v != 0.0) d.push_back(v);
    }
    const std::size_t n = d.size();
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        double less = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::fabs(d[j]) < std::fabs(d[i])) less += 1.0;
            else if (std::fabs(d[j]) == std::fabs(d[i])) equal += 1.0;
        }
        rank[i] = less + (equal + 1.0) / 2.0;
    }
    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0) observed += rank[i];
    }
    std::uint64_t le = 0, ge = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) w += rank[i];
        }
        le += w <= observed;
        ge += w >= observed;
    }
    return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) /
                             static_cast<double>(1ULL << n));
}

void ac9_wilcoxon_oracle()
{
    const auto p_of = [](const std::vector<double>& d) {
        return wilcoxon_signed_rank(d, std::vector<double>(d.size(), 0.0));
    };
    std::mt19937_64 gen(9);
    std::uniform_int_distribution<int> len(1, 10);
    std::uniform_int_distribution<int> coarse(-3, 3);
    std::normal_distribution<double> normal(0.0, 1.0);
    int cases = 0;
    int mismatches = 0;
    while (cases < 200) {
        std::vector<double> d(static_cast<std::size_t>(len(gen)));
        // alternate continuous and coarse (tied / zero) differences
        for (auto& v : d) v = cases % 2 ? normal(gen) : 0.5 * coarse(gen);
        if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) continue;
        mismatches += !bit_equal(p_of(d), brute_force_wilcoxon(d));
        ++cases;
    }
    const double p3 = p_of({1, 2, 3});
    const double p6 = p_of({1, 2, 3, 4, 5, 6});
    report(9, "Wilcoxon exact vs enumeration", mismatches == 0 && p3 == 0.25 && p6 == 0.03125,
           fmt("%d/200 mismatches; p(n=3) = %.5f, p(n=6) = %.5f", mismatches, p3, p6));
}

void ac10_determinism(const std::vector<run_record>& base)
{
    const auto again = run_experiment(desk_matrix(3)).records;
    bool same = again.size() == base.size();
    for (std::size_t i = 0; same && i < base.size(); ++i) {
        same = base[i].function == again[i].function && bit_equal(base[i].mu, again[i].mu) &&
               bit_equal(base[i].mu_star, again[i].mu_star) &&
               bit_equal(base[i].p_star, again[i].p_star);
    }
    report(10, "determinism across worker counts", same,
           fmt("%zu runs re-executed with 3 workers vs 1: %s", again.size(),
               same ? "bit-identical" : "MISMATCH"));
}

void ac11_round_trip()
{
    std::mt19937_64 gen(11);
    std::lognormal_distribution<double> fit(0.0, 6.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<run_record> recs;
    for (auto name : function_names()) {
        for (std::size_t n : {10, 25, 50, 100}) {
            for (std::size_t r = 0; r < 15; ++r) {
                run_record rec;
                rec.function = std::string(name);
                rec.n = n;
                rec.run_index = r;
                rec.seed = derive_seed(7, name, n, r);
                rec.mu = fit(gen);
                rec.mu_star = rec.mu * (0.5 + 0.5 * u(gen));
                rec.p_star = 1.0 + 4.0 * u(gen);
                rec.phase1_time = 10.0 * u(gen);
                rec.lio_time = 0.3 * u(gen);
                rec.iterations_used = 1000;
                rec.lio_evaluations = 1000;
                rec.timestamp = "2026-01-01T00:00:00Z";
                rec.config_hash = "feedfacecafebeef";
                for (std::size_t j = 0; j < n; ++j) rec.q_star.push_back({u(gen), u(gen), u(gen), u(gen)});
                recs.push_back(std::move(rec));
            }
        }
    }
    const auto path = (std::filesystem::temp_directory_path() / "qlio_acceptance_480.ndjson").string();
    write_records_file(path, recs);
    const auto back = read_records_file(path);
    std::filesystem::remove(path);
    const bool records_equal = back == recs;
    const auto a = aggregate(recs);
    const auto b = aggregate(back);
    report(11, "persistence round trip", records_equal && a == b && a.size() == 32,
           fmt("%zu records, %zu cells, records %s, stats %s", back.size(), b.size(),
               records_equal ? "identical" : "DIFFER", a == b ? "identical" : "DIFFER"));
}

} // namespace

int main()
{
    ac1_mapping_bounded();
    ac2_norm_reduction();
    ac3_benchmark_optima();

    const auto t0 = std::chrono::steady_clock::now();
    const auto matrix = run_experiment(desk_matrix(1));
    std::printf("       desk matrix: %zu runs, %zu failures, %.1f s\n", matrix.records.size(),
                matrix.failures.size(), seconds_since(t0));

    ac4_never_regresses(matrix.records);
    ac5_sphere_convergence();
    ac6_brown_improvement(matrix.records);
    ac7_rastrigin_p_near_two(matrix.records);
    ac8_refinement_cheap(matrix.records);
    ac9_wilcoxon_oracle();
    ac10_determinism(matrix.records);
    ac11_round_trip();

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
