#pragma once

// The eight box-constrained test functions used by the experiment harness.
// All have their global minimum 0 at the origin.

#include "qlio/error.hpp"
#include "qlio/hypernum.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qlio {

namespace functions {

inline double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

/// sum x^6 (2 + sin(1/x)); the term at x = 0 is its limit, 0.
inline double csendes(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) {
        if (v == 0.0) continue;
        const double v3 = v * v * v;
        s += v3 * v3 * (2.0 + std::sin(1.0 / v));
    }
    return s;
}

inline double salomon(std::span<const double> x)
{
    const double r = std::sqrt(sphere(x));
    return 1.0 - std::cos(2.0 * std::numbers::pi * r) + 0.1 * r;
}

/// Ackley #1 with the 0.02 decay coefficient. The constant terms are paired
/// as (20 - 20 e^a) + (e - e^b) so the origin evaluates to exactly 0.
inline double ackley1(std::span<const double> x)
{
    const double n = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * std::numbers::pi * v);
    }
    const double e = std::exp(1.0);
    return (20.0 - 20.0 * std::exp(-0.02 * std::sqrt(sq / n))) + (e - std::exp(cs / n));
}

inline double alpine1(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += std::fabs(v * std::sin(v) + 0.1 * v);
    return s;
}

/// 10n + sum (x^2 - 10 cos 2 pi x), accumulated as sum (x^2 + 10 (1 - cos 2 pi x)).
inline double rastrigin(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v + 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * v));
    return s;
}

/// Not the sine-based Schwefel: this variant is (sum x^2)^sqrt(pi).
inline double schwefel(std::span<const double> x)
{
    return std::pow(sphere(x), std::sqrt(std::numbers::pi));
}

namespace detail {

/// (base_sq)^e as exp(e ln base_sq), 0 when base_sq is 0.
inline double brown_term(double base_sq, double e)
{
    return base_sq == 0.0 ? 0.0 : std::exp(e * std::log(base_sq));
}

} // namespace detail

inline double brown(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] * x[i];
        const double b = x[i + 1] * x[i + 1];
        s += detail::brown_term(a, b + 1.0) + detail::brown_term(b, a + 1.0);
    }
    return s;
}

} // namespace functions

/// Static description of one registry entry.
struct function_info
{
    std::string_view name;
    std::string_view display_name;
    std::string_view formula;
    double lower;
    double upper;
    std::size_t min_dimension;
    double (*eval)(std::span<const double>);
};

inline constexpr function_info function_table[] = {
    {"sphere", "Sphere", "sum x_i^2", -10.0, 10.0, 1, &functions::sphere},
    {"csendes", "Csendes", "sum x_i^6 (2 + sin(1/x_i))", -1.0, 1.0, 1, &functions::csendes},
    {"salomon", "Salomon", "1 - cos(2 pi ||x||) + 0.1 ||x||", -100.0, 100.0, 1, &functions::salomon},
    {"ackley1", "Ackley #1",
     "-20 exp(-0.02 sqrt(mean x_i^2)) - exp(mean cos(2 pi x_i)) + 20 + e", -35.0, 35.0, 1,
     &functions::ackley1},
    {"alpine1", "Alpine #1", "sum |x_i sin(x_i) + 0.1 x_i|", -10.0, 10.0, 1, &functions::alpine1},
    {"rastrigin", "Rastrigin", "10n + sum (x_i^2 - 10 cos(2 pi x_i))", -5.12, 5.12, 1,
     &functions::rastrigin},
    {"schwefel", "Schwefel", "(sum x_i^2)^sqrt(pi)", -100.0, 100.0, 1, &functions::schwefel},
    {"brown", "Brown", "sum (x_i^2)^(x_{i+1}^2 + 1) + (x_{i+1}^2)^(x_i^2 + 1)", -1.0, 4.0, 2,
     &functions::brown},
};

inline const function_info& find_function(std::string_view name)
{
    for (const auto& info : function_table) {
        if (info.name == name) return info;
    }
    throw unknown_function_error("unknown benchmark function '" + std::string(name) + "'");
}

/// A benchmark instantiated at dimension n.
class objective_function
{
public:
    objective_function(const function_info& info, std::size_t n)
        : info_(&info), bounds_(n, bounds{info.lower, info.upper})
    {
        if (n < info.min_dimension) {
            throw dimension_error(std::string(info.name) + " requires n >= " +
                                  std::to_string(info.min_dimension) + ", got " +
                                  std::to_string(n));
        }
    }

    std::string_view name() const { return info_->name; }
    const function_info& info() const { return *info_; }
    std::size_t dimension() const { return bounds_.size(); }
    std::span<const bounds> variable_bounds() const { return bounds_; }
    double optimum_fitness() const { return 0.0; }

    /// Fitness at x. Throws on a length mismatch or any coordinate outside
    /// the box; inputs are expected to come through map_vector.
    double evaluate(std::span<const double> x) const
    {
        if (x.size() != bounds_.size()) {
            throw shape_error(std::string(name()) + ": expected " +
                              std::to_string(bounds_.size()) + " variables, got " +
                              std::to_string(x.size()));
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!bounds_[i].contains(x[i])) {
                throw domain_error(std::string(name()) + ": x[" + std::to_string(i) + "] = " +
                                   std::to_string(x[i]) + " outside bounds");
            }
        }
        return info_->eval(x);
    }

    double operator()(std::span<const double> x) const { return evaluate(x); }

private:
    const function_info* info_;
    std::vector<bounds> bounds_;
};

inline objective_function make_function(std::string_view name, std::size_t n)
{
    if (n == 0) throw dimension_error("dimension must be positive");
    return objective_function(find_function(name), n);
}

inline std::vector<std::string_view> function_names()
{
    std::vector<std::string_view> out;
    for (const auto& info : function_table) out.push_back(info.name);
    return out;
}

} // namespace qlio
