#pragma once

// Per-run records and their line-delimited JSON persistence.

#include "qlio/error.hpp"
#include "qlio/hypernum.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qlio::harness {

inline constexpr int record_schema_version = 1;

struct run_record
{
    std::string function;
    std::size_t n = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    double mu = 0.0;
    double mu_star = 0.0;
    double p_star = 0.0;
    double phase1_time = 0.0;
    double lio_time = 0.0;
    std::size_t iterations_used = 0;
    bool stopped_early = false;
    std::size_t lio_evaluations = 0;
    std::string timestamp;
    std::string config_hash;
    /// Frozen global-phase solution, needed to re-run the refinement.
    std::vector<quaternion> q_star;

    bool operator==(const run_record&) const = default;
};

/// Failed run, kept out of the results file.
struct run_failure
{
    std::string function;
    std::size_t n = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    std::string message;
};

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json to_json(const run_record& r)
{
    nlohmann::json q = nlohmann::json::array();
    for (const auto& quat : r.q_star) q.push_back(quat.z);
    return {
        {"schema", record_schema_version},
        {"function", r.function},
        {"n", r.n},
        {"run", r.run_index},
        {"seed", r.seed},
        {"mu", r.mu},
        {"mu_star", r.mu_star},
        {"p_star", r.p_star},
        {"phase1_time_s", r.phase1_time},
        {"lio_time_s", r.lio_time},
        {"iterations_used", r.iterations_used},
        {"stopped_early", r.stopped_early},
        {"lio_evaluations", r.lio_evaluations},
        {"timestamp", r.timestamp},
        {"config_hash", r.config_hash},
        {"q_star", std::move(q)},
    };
}

inline nlohmann::json to_json(const run_failure& f)
{
    return {{"schema", record_schema_version}, {"function", f.function}, {"n", f.n},
            {"run", f.run_index},             {"seed", f.seed},         {"error", f.message}};
}

inline run_record record_from_json(const nlohmann::json& j)
{
    const int schema = j.at("schema").get<int>();
    if (schema != record_schema_version) {
        throw io_error("unsupported record schema version " + std::to_string(schema));
    }
    run_record r;
    r.function = j.at("function").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.run_index = j.at("run").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.mu = j.at("mu").get<double>();
    r.mu_star = j.at("mu_star").get<double>();
    r.p_star = j.at("p_star").get<double>();
    r.phase1_time = j.at("phase1_time_s").get<double>();
    r.lio_time = j.at("lio_time_s").get<double>();
    r.iterations_used = j.at("iterations_used").get<std::size_t>();
    r.stopped_early = j.at("stopped_early").get<bool>();
    r.lio_evaluations = j.at("lio_evaluations").get<std::size_t>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& q : j.at("q_star")) {
        const auto z = q.get<std::array<double, quaternion_dim>>();
        r.q_star.push_back(quaternion{z[0], z[1], z[2], z[3]});
    }
    return r;
}

/// One compact JSON object, no trailing newline.
inline std::string to_ndjson_line(const run_record& r) { return to_json(r).dump(); }

inline void write_records(std::ostream& os, const std::vector<run_record>& records)
{
    for (const auto& r : records) os << to_ndjson_line(r) << '\n';
}

/// Parses line-delimited records; blank lines are skipped.
inline std::vector<run_record> read_records(std::istream& is)
{
    std::vector<run_record> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw io_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<run_record> read_records_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return read_records(in);
}

inline void write_records_file(const std::string& path, const std::vector<run_record>& records)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_records(out, records);
    if (!out) throw io_error("write to '" + path + "' failed");
}

/// Flat CSV view of the records (q* omitted).
inline void write_records_csv(std::ostream& os, const std::vector<run_record>& records)
{
    os << "function,n,run,seed,mu,mu_star,p_star,phase1_time_s,lio_time_s,iterations_used,"
          "stopped_early,lio_evaluations,timestamp,config_hash\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& r : records) {
        line.str("");
        line << r.function << ',' << r.n << ',' << r.run_index << ',' << r.seed << ',' << r.mu
             << ',' << r.mu_star << ',' << r.p_star << ',' << r.phase1_time << ',' << r.lio_time
             << ',' << r.iterations_used << ',' << (r.stopped_early ? 1 : 0) << ','
             << r.lio_evaluations << ',' << r.timestamp << ',' << r.config_hash << '\n';
        os << line.str();
    }
}

} // namespace qlio::harness
