#pragma once

#include <stdexcept>
#include <string>

namespace qlio {

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A quaternion operation produced a non-finite coefficient.
class numeric_overflow_error : public error { public: using error::error; };
/// Minkowski exponent outside its admissible range.
class invalid_exponent_error : public error { public: using error::error; };
/// Interval with lower >= upper or non-finite ends.
class bounds_error : public error { public: using error::error; };
/// Sequence lengths that must agree do not.
class shape_error : public error { public: using error::error; };
class unknown_function_error : public error { public: using error::error; };
class dimension_error : public error { public: using error::error; };
/// Objective evaluated outside its box.
class domain_error : public error { public: using error::error; };
/// Signed-rank test on a sample whose differences are all zero.
class degenerate_sample_error : public error { public: using error::error; };
class aggregation_error : public error { public: using error::error; };
class io_error : public error { public: using error::error; };
class config_error : public error { public: using error::error; };

} // namespace qlio
