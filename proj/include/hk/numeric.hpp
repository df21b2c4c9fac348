#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class NumericMode { Rational, Float64 };

std::string to_string(NumericMode m);
NumericMode mode_from_string(const std::string& s);

enum class ErrorCode {
    InvalidParam,
    WrongM,
    InsufficientM,
    EpsilonFailure,
    Overflow,
    BudgetExceeded,
    MonitorViolation,
    NonConvergence,
    Internal,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Default per-integer bit budget for RATIONAL mode opinions.
inline constexpr int kDefaultBitBudget = 4096;

// Convergence slack for FLOAT64 separation tests: gaps must exceed 1 + 2^-40.
inline constexpr double kFloatSeparationSlack = 9.094947017729282e-13;  // 2^-40

long bit_length(const BigInt& v);

void check_bit_budget(const Rational& q, int budget);
inline void check_bit_budget(double, int) {}

// "p/q" or plain integer "p"; canonical (reduced, positive denominator) on output.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

// Shortest round-trip decimal text for a double.
std::string format_double(double x);

double to_double(const Rational& q);
inline double to_double(double x) { return x; }

Rational rational_from_double(double x);

// --- scalar glue shared by the templated core -------------------------------

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr NumericMode mode = NumericMode::Rational;
    static Rational from_int(long v) { return Rational(v); }
    static Rational from_rational(const Rational& q) { return q; }
    static std::string format(const Rational& q) { return format_rational(q); }
    // Exact comparison: a pair is separated when its gap strictly exceeds 1.
    static bool separated(const Rational& gap) { return gap > 1; }
};

template <>
struct scalar_traits<double> {
    static constexpr NumericMode mode = NumericMode::Float64;
    static double from_int(long v) { return static_cast<double>(v); }
    static double from_rational(const Rational& q) { return to_double(q); }
    static std::string format(double x) { return format_double(x); }
    // Convergence-separation test carries a 2^-40 slack against rounding.
    static bool separated(double gap) { return gap > 1.0 + kFloatSeparationSlack; }
};

inline Rational abs_val(const Rational& v) { return v < 0 ? Rational(-v) : v; }
inline double abs_val(double v) { return std::abs(v); }

// Exact floor(root_index-th root of v) for v >= 0.
BigInt integer_root(const BigInt& v, unsigned root_index);

// floor(n^(p/q)) and ceil(n^(p/q)) for n >= 0 and p/q >= 0, computed exactly.
BigInt floor_power(const BigInt& n, const BigInt& p, const BigInt& q);
BigInt ceil_power(const BigInt& n, const BigInt& p, const BigInt& q);

// value > n^(p/q)?  Exact for value >= 0.
bool exceeds_power(const Rational& value, const BigInt& n, const BigInt& p, const BigInt& q);

}  // namespace hk
