#pragma once

#include "qlio/benchmarks.hpp"
#include "qlio/harness/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qlio::harness {

/// Scientific notation with four digits after the point, e.g. 1.3447e-07.
inline std::string format_sci(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

inline std::string format_fixed(double v, int decimals = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string display_name(const std::string& function)
{
    for (const auto& info : function_table) {
        if (info.name == function) return std::string(info.display_name);
    }
    return function;
}

/// Text table: one row per (function, n) cell. Winning columns carry a
/// trailing '*'; on a statistical tie both fitness columns are marked.
inline std::string render_table(const stats_table& stats, double alpha = 0.05)
{
    const std::vector<std::string> header = {"Function",  "Dimensions", "Q-PSO",
                                             "Q-PSO+LIO", "p",          "Q-PSO time (s)",
                                             "LIO time (s)"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, cs] : stats) {
        const auto mark = [&](bool win) { return win ? std::string(" *") : std::string(); };
        rows.push_back({
            display_name(key.function),
            std::to_string(key.n),
            format_sci(cs.mu.mean) + " +- " + format_sci(cs.mu.std) +
                mark(cs.best != winner::lio),
            format_sci(cs.mu_star.mean) + " +- " + format_sci(cs.mu_star.std) +
                mark(cs.best != winner::qpso),
            format_fixed(cs.p_star.mean) + " +- " + format_fixed(cs.p_star.std),
            format_fixed(cs.phase1_time.mean) + " +- " + format_fixed(cs.phase1_time.std),
            format_fixed(cs.lio_time.mean) + " +- " + format_fixed(cs.lio_time.std),
        });
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }

    std::ostringstream os;
    const auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << (c ? " | " : "") << cells[c] << std::string(width[c] - cells[c].size(), ' ');
        }
        os << '\n';
    };
    emit(header);
    std::size_t total = 3 * (header.size() - 1);
    for (auto w : width) total += w;
    os << std::string(total, '-') << '\n';
    for (const auto& r : rows) emit(r);
    if (!rows.empty()) {
        os << "\n* best result by Wilcoxon signed-rank test at alpha = " << alpha
           << "; both columns are marked when the difference is not significant.\n";
    }
    return os.str();
}

/// Per-cell statistics as CSV.
inline void write_stats_csv(std::ostream& os, const stats_table& stats)
{
    os << "function,n,runs,mu_mean,mu_std,mu_star_mean,mu_star_std,p_mean,p_std,"
          "phase1_time_mean,phase1_time_std,lio_time_mean,lio_time_std,wilcoxon_p,winner\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& [key, cs] : stats) {
        line.str("");
        line << key.function << ',' << key.n << ',' << cs.runs << ',' << cs.mu.mean << ','
             << cs.mu.std << ',' << cs.mu_star.mean << ',' << cs.mu_star.std << ','
             << cs.p_star.mean << ',' << cs.p_star.std << ',' << cs.phase1_time.mean << ','
             << cs.phase1_time.std << ',' << cs.lio_time.mean << ',' << cs.lio_time.std << ','
             << cs.wilcoxon_p_value << ',' << to_string(cs.best) << '\n';
        os << line.str();
    }
}

} // namespace qlio::harness
