#include "hk/numeric.hpp"

#include <charconv>

namespace hk {

std::string to_string(NumericMode m) {
    return m == NumericMode::Rational ? "rational" : "float64";
}

NumericMode mode_from_string(const std::string& s) {
    if (s == "rational") return NumericMode::Rational;
    if (s == "float64") return NumericMode::Float64;
    throw Error(ErrorCode::InvalidParam, "unknown numeric mode: " + s);
}

const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidParam: return "INVALID_PARAM";
        case ErrorCode::WrongM: return "WRONG_M";
        case ErrorCode::InsufficientM: return "INSUFFICIENT_M";
        case ErrorCode::EpsilonFailure: return "EPSILON_FAILURE";
        case ErrorCode::Overflow: return "OVERFLOW";
        case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
        case ErrorCode::MonitorViolation: return "MONITOR_VIOLATION";
        case ErrorCode::NonConvergence: return "NON_CONVERGENCE";
        case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

long bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<long>(msb(abs(v))) + 1;
}

void check_bit_budget(const Rational& q, int budget) {
    if (bit_length(numerator(q)) > budget || bit_length(denominator(q)) > budget)
        throw Error(ErrorCode::Overflow,
                    "rational exceeds " + std::to_string(budget) + "-bit budget");
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return Error(ErrorCode::InvalidParam, "bad rational literal: " + text); };
    auto slash = text.find('/');
    try {
        if (text.empty() || slash == 0 || slash == text.size() - 1) throw bad();
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num) / Rational(den);
    } catch (const std::exception&) {
        throw bad();
    }
}

std::string format_rational(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParam, "non-finite opinion value");
    return Rational(x);  // exact: binary64 values are dyadic rationals
}

BigInt integer_root(const BigInt& v, unsigned root_index) {
    if (v < 0 || root_index == 0) throw Error(ErrorCode::Internal, "integer_root domain");
    if (v == 0) return 0;
    BigInt lo = 1, hi = 1;
    while (pow(hi, root_index) <= v) hi <<= 1;
    while (lo + 1 < hi) {
        BigInt mid = (lo + hi) / 2;
        if (pow(mid, root_index) <= v) lo = mid;
        else hi = mid;
    }
    return lo;
}

BigInt floor_power(const BigInt& n, const BigInt& p, const BigInt& q) {
    if (q <= 0 || p < 0 || n < 0) throw Error(ErrorCode::Internal, "floor_power domain");
    if (p == 0) return 1;
    BigInt np = pow(n, static_cast<unsigned>(p));
    return integer_root(np, static_cast<unsigned>(q));
}

BigInt ceil_power(const BigInt& n, const BigInt& p, const BigInt& q) {
    BigInt f = floor_power(n, p, q);
    if (p == 0) return 1;
    BigInt np = pow(n, static_cast<unsigned>(p));
    return pow(f, static_cast<unsigned>(q)) == np ? f : f + 1;
}

bool exceeds_power(const Rational& value, const BigInt& n, const BigInt& p, const BigInt& q) {
    if (value < 0) return false;
    if (q <= 0 || p < 0) throw Error(ErrorCode::Internal, "exceeds_power domain");
    // value^q > n^p  <=>  num^q > n^p * den^q
    BigInt num = numerator(value), den = denominator(value);
    return pow(num, static_cast<unsigned>(q)) >
           pow(n, static_cast<unsigned>(p)) * pow(den, static_cast<unsigned>(q));
}

}  // namespace hk
