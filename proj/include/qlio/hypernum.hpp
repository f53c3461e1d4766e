#pragma once

// Quaternion container, Minkowski p-norm and the bounded hypercomplex-to-real
// projection used by every optimizer in the library.

#include "qlio/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qlio {

/// Number of real coefficients per quaternion.
inline constexpr std::size_t quaternion_dim = 4;

/// a + bi + cj + dk stored as its four real coefficients. Only the
/// vector-space part of the algebra (add, sub, scale) is provided.
struct quaternion
{
    std::array<double, quaternion_dim> z{};

    constexpr quaternion() = default;
    constexpr quaternion(double a, double b, double c, double d) : z{a, b, c, d} {}

    constexpr double operator[](std::size_t i) const { return z[i]; }
    constexpr double& operator[](std::size_t i) { return z[i]; }

    bool operator==(const quaternion&) const = default;

    bool is_finite() const
    {
        return std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); });
    }
};

namespace detail {

inline quaternion checked(const quaternion& q, const char* op)
{
    if (!q.is_finite()) {
        throw numeric_overflow_error(std::string(op) + ": non-finite quaternion coefficient");
    }
    return q;
}

} // namespace detail

inline quaternion q_add(const quaternion& lhs, const quaternion& rhs)
{
    quaternion out;
    for (std::size_t d = 0; d < quaternion_dim; ++d) out[d] = lhs[d] + rhs[d];
    return detail::checked(out, "q_add");
}

inline quaternion q_sub(const quaternion& lhs, const quaternion& rhs)
{
    quaternion out;
    for (std::size_t d = 0; d < quaternion_dim; ++d) out[d] = lhs[d] - rhs[d];
    return detail::checked(out, "q_sub");
}

inline quaternion q_scale(double k, const quaternion& q)
{
    if (!std::isfinite(k)) throw numeric_overflow_error("q_scale: non-finite scalar");
    quaternion out;
    for (std::size_t d = 0; d < quaternion_dim; ++d) out[d] = k * q[d];
    return detail::checked(out, "q_scale");
}

inline quaternion operator+(const quaternion& a, const quaternion& b) { return q_add(a, b); }
inline quaternion operator-(const quaternion& a, const quaternion& b) { return q_sub(a, b); }
inline quaternion operator*(double k, const quaternion& q) { return q_scale(k, q); }

/// Closed real interval [lower, upper] of one decision variable.
struct bounds
{
    double lower = 0.0;
    double upper = 1.0;

    bool operator==(const bounds&) const = default;

    double width() const { return upper - lower; }
    bool contains(double x) const { return x >= lower && x <= upper; }

    void validate() const
    {
        if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
            throw bounds_error("bounds require finite lower < upper, got [" +
                               std::to_string(lower) + ", " + std::to_string(upper) + "]");
        }
    }
};

/// Minkowski exponent p >= 1.
class p_exponent
{
public:
    explicit p_exponent(double value) : value_(value)
    {
        if (!(value >= 1.0) || !std::isfinite(value)) {
            throw invalid_exponent_error("p-norm exponent must be finite and >= 1, got " +
                                         std::to_string(value));
        }
    }

    double value() const { return value_; }

    /// Integer exponents 1..5 take the repeated-multiplication path.
    int integral_order() const
    {
        if (value_ <= 5.0 && value_ == std::floor(value_)) return static_cast<int>(value_);
        return 0;
    }

private:
    double value_;
};

namespace detail {

inline double int_pow(double x, int k)
{
    double r = x;
    for (int i = 1; i < k; ++i) r *= x;
    return r;
}

/// pth root, exact sqrt for p = 2 and identity for p = 1.
inline double root(double s, const p_exponent& p)
{
    switch (p.integral_order()) {
    case 1: return s;
    case 2: return std::sqrt(s);
    default: return std::pow(s, 1.0 / p.value());
    }
}

/// |z|^p for non-integral p, as exp(p ln|z|). ln 0 = -inf gives exactly 0.
inline double general_power(double log_abs, double p) { return std::exp(p * log_abs); }

} // namespace detail

/// (sum_d |z_d|^p)^(1/p)
inline double pnorm(const quaternion& q, const p_exponent& p)
{
    const int k = p.integral_order();
    double sum = 0.0;
    for (double v : q.z) {
        const double a = std::fabs(v);
        sum += k > 0 ? detail::int_pow(a, k) : detail::general_power(std::log(a), p.value());
    }
    return detail::root(sum, p);
}

inline double pnorm(const quaternion& q, double p) { return pnorm(q, p_exponent(p)); }

/// Each coefficient clamped to [0, 1]. Idempotent.
inline quaternion clip_coefficients(const quaternion& q)
{
    quaternion out;
    for (std::size_t d = 0; d < quaternion_dim; ++d) out[d] = std::clamp(q[d], 0.0, 1.0);
    return out;
}

/// D^(1/p): the largest p-norm a clipped quaternion can reach.
inline double max_clipped_norm(const p_exponent& p)
{
    return detail::root(static_cast<double>(quaternion_dim), p);
}

namespace detail {

/// l + (u - l) * norm / max_norm, with the ratio and the result clamped so
/// rounding cannot leave [l, u].
inline double scale_to_bounds(double norm, const bounds& b, double max_norm)
{
    const double ratio = std::min(1.0, norm / max_norm);
    return std::clamp(b.lower + b.width() * ratio, b.lower, b.upper);
}

} // namespace detail

/// Projects q onto [l, u] as l + (u - l) * ||clip(q)||_p / D^(1/p).
/// The input is clipped first, so the result always lies in the interval.
inline double map_to_real(const quaternion& q, const bounds& b, const p_exponent& p)
{
    b.validate();
    return detail::scale_to_bounds(pnorm(clip_coefficients(q), p), b, max_clipped_norm(p));
}

inline double map_to_real(const quaternion& q, const bounds& b, double p)
{
    return map_to_real(q, b, p_exponent(p));
}

/// Element-wise map_to_real written into `out`, which must have size n.
inline void map_vector_into(std::span<const quaternion> qs, std::span<const bounds> bs,
                            const p_exponent& p, std::span<double> out)
{
    if (qs.size() != bs.size() || qs.size() != out.size() || qs.empty()) {
        throw shape_error("map_vector: need |qs| = |bounds| >= 1, got " +
                          std::to_string(qs.size()) + " and " + std::to_string(bs.size()));
    }
    const double max_norm = max_clipped_norm(p);
    for (std::size_t j = 0; j < qs.size(); ++j) {
        bs[j].validate();
        out[j] = detail::scale_to_bounds(pnorm(clip_coefficients(qs[j]), p), bs[j], max_norm);
    }
}

inline std::vector<double> map_vector(std::span<const quaternion> qs, std::span<const bounds> bs,
                                      const p_exponent& p)
{
    std::vector<double> out(qs.size());
    map_vector_into(qs, bs, p, out);
    return out;
}

inline std::vector<double> map_vector(std::span<const quaternion> qs, std::span<const bounds> bs,
                                      double p)
{
    return map_vector(qs, bs, p_exponent(p));
}

/// A clipped quaternion with ln|z_d| cached, for evaluating its p-norm at
/// many exponents. Gives the same bits as pnorm(clip_coefficients(q), p).
class cached_quaternion
{
public:
    explicit cached_quaternion(const quaternion& q) : clipped_(clip_coefficients(q))
    {
        for (std::size_t d = 0; d < quaternion_dim; ++d) log_abs_[d] = std::log(clipped_[d]);
    }

    const quaternion& clipped() const { return clipped_; }

    double pnorm(const p_exponent& p) const
    {
        if (p.integral_order() > 0) return qlio::pnorm(clipped_, p);
        double sum = 0.0;
        for (double l : log_abs_) sum += detail::general_power(l, p.value());
        return detail::root(sum, p);
    }

private:
    quaternion clipped_;
    std::array<double, quaternion_dim> log_abs_{};
};

/// map_vector over cached quaternions; same result as map_vector on the
/// originals.
inline void map_vector_into(std::span<const cached_quaternion> qs, std::span<const bounds> bs,
                            const p_exponent& p, std::span<double> out)
{
    if (qs.size() != bs.size() || qs.size() != out.size() || qs.empty()) {
        throw shape_error("map_vector: need |qs| = |bounds| >= 1, got " +
                          std::to_string(qs.size()) + " and " + std::to_string(bs.size()));
    }
    const double max_norm = max_clipped_norm(p);
    for (std::size_t j = 0; j < qs.size(); ++j) {
        bs[j].validate();
        out[j] = detail::scale_to_bounds(qs[j].pnorm(p), bs[j], max_norm);
    }
}

} // namespace qlio
