#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace atnlab {

// Exact nonnegative rational with numerator/denominator below 2^24.
// Hamming distances are returned as Rational so that the strict comparison
// d < eps is decided by integer arithmetic instead of a rounded quotient.
class Rational {
public:
    Rational(std::int64_t numerator, std::int64_t denominator)
        : num_(numerator), den_(denominator) {
        if (den_ <= 0 || num_ < 0)
            throw std::invalid_argument("rational: numerator must be >= 0, denominator > 0");
        if (num_ >= (1ll << 24) || den_ >= (1ll << 24))
            throw std::invalid_argument("rational: operand exceeds 2^24");
        const std::int64_t g = std::gcd(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

    // Exact num/den < x, where x participates with its full binary value.
    bool less_than(double x) const {
        if (std::isnan(x)) return false;
        if (num_ == 0) return x > 0.0;
        if (x <= 0.0) return false;
        if (std::isinf(x)) return true;
        int exp2 = 0;
        const double frac = std::frexp(x, &exp2); // x = frac * 2^exp2, frac in [0.5, 1)
        const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53)); // exact 53-bit integer
        const int shift = 53 - exp2; // num/den < x  <=>  num * 2^shift < mant * den
        if (shift <= 0) return true; // x >= 2^52 dwarfs any admissible rational
        if (shift >= 78) return false; // lhs >= 2^78 > mant * den < 2^77
        const unsigned __int128 lhs = static_cast<unsigned __int128>(num_) << shift;
        const unsigned __int128 rhs = static_cast<unsigned __int128>(mant) * static_cast<std::uint64_t>(den_);
        return lhs < rhs;
    }

    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    std::int64_t num_;
    std::int64_t den_;
};

// Largest K in [0, positions] with K/positions < eps, decided exactly.
// At an exact integer boundary eps*positions = I this yields I - 1, matching
// the strict inequality; otherwise floor(eps*positions). Note that the
// boundary is judged on the binary value of eps, not its decimal spelling:
// double(0.1) * 50 is strictly above 5 even though the rounded product is 5.0.
inline int mismatch_budget(std::int64_t positions, double eps) {
    if (positions < 1 || positions >= (1ll << 24))
        throw std::invalid_argument("mismatch_budget: positions out of range");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("mismatch_budget: eps must lie in (0,1)");
    int exp2 = 0;
    const double frac = std::frexp(eps, &exp2);
    const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    const int shift = 53 - exp2; // eps * positions = mant * positions / 2^shift
    const unsigned __int128 product =
        static_cast<unsigned __int128>(mant) * static_cast<std::uint64_t>(positions);
    if (shift >= 127) return 0; // eps * positions < 2^77 / 2^127 < 1
    const unsigned __int128 quotient = product >> shift;
    const unsigned __int128 remainder = product - (quotient << shift);
    auto budget = static_cast<std::int64_t>(quotient);
    if (remainder == 0) budget -= 1; // strict inequality at an exact boundary
    if (budget > positions) budget = positions;
    return static_cast<int>(budget);
}

} // namespace atnlab
