#pragma once

#include "qlio/benchmarks.hpp"
#include "qlio/error.hpp"
#include "qlio/harness/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qlio::harness {

/// Largest number of non-zero differences handled by the exact null
/// distribution; larger samples use the normal approximation.
inline constexpr std::size_t wilcoxon_exact_limit = 25;

/// Ranks of |d| (1-based, ties averaged) for the non-zero entries of `diffs`,
/// returned as doubled integers so half ranks stay exact. `positive[i]`
/// tells whether the i-th kept difference was > 0.
struct signed_ranks
{
    std::vector<std::uint32_t> doubled_rank;
    std::vector<bool> positive;
    /// sum over tie groups of (t^3 - t)
    double tie_term = 0.0;
};

inline signed_ranks rank_differences(std::span<const double> diffs)
{
    std::vector<double> nz;
    for (double d : diffs) {
        if (d != 0.0) nz.push_back(d);
    }
    std::vector<std::size_t> order(nz.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::fabs(nz[a]) < std::fabs(nz[b]); });

    signed_ranks out;
    out.doubled_rank.resize(nz.size());
    out.positive.resize(nz.size());
    for (std::size_t i = 0; i < nz.size(); ++i) out.positive[i] = nz[i] > 0.0;

    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && std::fabs(nz[order[j + 1]]) == std::fabs(nz[order[i]])) ++j;
        // ranks i+1 .. j+1 averaged, doubled: (i+1) + (j+1)
        const auto doubled = static_cast<std::uint32_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) out.doubled_rank[order[k]] = doubled;
        const double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

/// Two-sided p-value of the paired signed-rank test on a - b.
///
/// Zero differences are dropped and tied |differences| share their average
/// rank. Up to wilcoxon_exact_limit non-zero differences the p-value comes
/// from the exact distribution of W+ over all 2^n sign assignments (counted
/// by dynamic programming on doubled ranks); above that a normal
/// approximation with tie and continuity corrections is used.
inline double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty()) {
        throw shape_error("wilcoxon: paired samples must have equal non-zero length");
    }
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];

    const signed_ranks sr = rank_differences(diffs);
    const std::size_t n = sr.doubled_rank.size();
    if (n == 0) throw degenerate_sample_error("wilcoxon: all differences are zero");

    std::uint64_t w_plus2 = 0;
    std::uint64_t total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += sr.doubled_rank[i];
        if (sr.positive[i]) w_plus2 += sr.doubled_rank[i];
    }

    if (n <= wilcoxon_exact_limit) {
        // count[s] = number of sign assignments whose doubled W+ equals s
        std::vector<std::uint64_t> count(total2 + 1, 0);
        count[0] = 1;
        std::uint64_t reach = 0;
        for (std::uint32_t r : sr.doubled_rank) {
            for (std::uint64_t s = reach + 1; s-- > 0;) {
                if (count[s] != 0) count[s + r] += count[s];
            }
            reach += r;
        }
        std::uint64_t le = 0;
        std::uint64_t ge = 0;
        for (std::uint64_t s = 0; s <= total2; ++s) {
            if (s <= w_plus2) le += count[s];
            if (s >= w_plus2) ge += count[s];
        }
        const double tail = static_cast<double>(std::min(le, ge)) / std::ldexp(1.0, static_cast<int>(n));
        return std::min(1.0, 2.0 * tail);
    }

    const double nn = static_cast<double>(n);
    const double w_plus = static_cast<double>(w_plus2) / 2.0;
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - sr.tie_term / 48.0;
    if (!(var > 0.0)) return 1.0;
    const double dev = std::max(0.0, std::fabs(w_plus - mean) - 0.5);
    return std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)));
}

struct summary
{
    double mean = 0.0;
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    double std = 0.0;

    bool operator==(const summary&) const = default;
};

inline summary summarize(std::span<const double> xs)
{
    summary s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

enum class winner { qpso, lio, tie };

inline const char* to_string(winner w)
{
    switch (w) {
    case winner::qpso: return "qpso";
    case winner::lio: return "lio";
    default: return "tie";
    }
}

struct cell_key
{
    std::string function;
    std::size_t n = 0;

    /// Registry order first, then dimension.
    auto operator<=>(const cell_key& o) const
    {
        const auto rank = [](const std::string& name) {
            for (std::size_t i = 0; i < std::size(function_table); ++i) {
                if (function_table[i].name == name) return i;
            }
            return std::size(function_table);
        };
        if (auto c = rank(function) <=> rank(o.function); c != 0) return c;
        if (auto c = function <=> o.function; c != 0) return c;
        return n <=> o.n;
    }
    bool operator==(const cell_key&) const = default;
};

struct cell_stats
{
    std::size_t runs = 0;
    summary mu;
    summary mu_star;
    summary p_star;
    summary phase1_time;
    summary lio_time;
    /// 1 when every paired difference is zero.
    double wilcoxon_p_value = 1.0;
    winner best = winner::tie;

    bool operator==(const cell_stats&) const = default;
};

using stats_table = std::map<cell_key, cell_stats>;

/// Per-cell statistics. Each (function, n) cell must contain run indices
/// 0..k-1 exactly once. Results do not depend on record order.
inline stats_table aggregate(const std::vector<run_record>& records, double alpha = 0.05)
{
    std::map<cell_key, std::vector<const run_record*>> cells;
    for (const auto& r : records) cells[{r.function, r.n}].push_back(&r);

    stats_table out;
    for (auto& [key, rs] : cells) {
        std::sort(rs.begin(), rs.end(),
                  [](const run_record* a, const run_record* b) { return a->run_index < b->run_index; });
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i]->run_index != i) {
                throw aggregation_error("incomplete cell " + key.function + " n=" +
                                        std::to_string(key.n) + ": run " + std::to_string(i) +
                                        " missing or duplicated");
            }
        }

        std::vector<double> mu, mu_star, p, t1, t2;
        for (const auto* r : rs) {
            mu.push_back(r->mu);
            mu_star.push_back(r->mu_star);
            p.push_back(r->p_star);
            t1.push_back(r->phase1_time);
            t2.push_back(r->lio_time);
        }

        cell_stats cs;
        cs.runs = rs.size();
        cs.mu = summarize(mu);
        cs.mu_star = summarize(mu_star);
        cs.p_star = summarize(p);
        cs.phase1_time = summarize(t1);
        cs.lio_time = summarize(t2);
        try {
            cs.wilcoxon_p_value = wilcoxon_signed_rank(mu, mu_star);
        } catch (const degenerate_sample_error&) {
            cs.wilcoxon_p_value = 1.0;
        }
        if (cs.wilcoxon_p_value < alpha && cs.mu_star.mean != cs.mu.mean) {
            cs.best = cs.mu_star.mean < cs.mu.mean ? winner::lio : winner::qpso;
        }
        out.emplace(key, cs);
    }
    return out;
}

} // namespace qlio::harness
