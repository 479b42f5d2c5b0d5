#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace heckmort {

/// Exact rational on int64, always stored reduced with positive denominator.
/// Used for q-exponents and precision horizons, where values stay small; all
/// arithmetic is overflow-checked and throws instead of wrapping.
class Rat64 {
public:
    constexpr Rat64() : num_(0), den_(1) {}
    Rat64(std::int64_t n) : num_(n), den_(1) {}
    Rat64(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0) throw std::domain_error("Rat64: zero denominator");
        reduce();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    friend Rat64 operator-(const Rat64& a) { return Rat64(checked_neg(a.num_), a.den_, already_reduced{}); }

    friend Rat64 operator+(const Rat64& a, const Rat64& b) {
        // (an*bd + bn*ad) / (ad*bd), reduced afterwards
        std::int64_t g = std::gcd(a.den_, b.den_);
        std::int64_t ad = a.den_ / g, bd = b.den_ / g;
        std::int64_t n = checked_add(checked_mul(a.num_, bd), checked_mul(b.num_, ad));
        std::int64_t d = checked_mul(checked_mul(ad, g), bd);
        return Rat64(n, d);
    }
    friend Rat64 operator-(const Rat64& a, const Rat64& b) { return a + (-b); }
    friend Rat64 operator*(const Rat64& a, const Rat64& b) {
        std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
        std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
        std::int64_t n = checked_mul(a.num_ / g1, b.num_ / g2);
        std::int64_t d = checked_mul(a.den_ / g2, b.den_ / g1);
        return Rat64(n, d, already_reduced{});
    }
    friend Rat64 operator/(const Rat64& a, const Rat64& b) {
        if (b.num_ == 0) throw std::domain_error("Rat64: division by zero");
        return a * Rat64(b.den_, b.num_);
    }

    Rat64& operator+=(const Rat64& b) { *this = *this + b; return *this; }
    Rat64& operator-=(const Rat64& b) { *this = *this - b; return *this; }
    Rat64& operator*=(const Rat64& b) { *this = *this * b; return *this; }
    Rat64& operator/=(const Rat64& b) { *this = *this / b; return *this; }

    friend bool operator==(const Rat64& a, const Rat64& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rat64& a, const Rat64& b) { return !(a == b); }
    friend bool operator<(const Rat64& a, const Rat64& b) {
        // cross-multiply; denominators positive
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator>(const Rat64& a, const Rat64& b) { return b < a; }
    friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }
    friend bool operator>=(const Rat64& a, const Rat64& b) { return !(a < b); }

    /// Largest integer <= value.
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    std::int64_t ceil() const { return -(-*this).floor(); }

    /// Fractional part in [0,1).
    Rat64 frac() const { return *this - Rat64(floor()); }

    /// Generalized binomial C(x,2) = x(x-1)/2.
    static Rat64 binom2(const Rat64& x) { return x * (x - Rat64(1)) / Rat64(2); }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat64& r) { return os << r.str(); }

    std::size_t hash() const {
        auto h = static_cast<std::uint64_t>(num_) * 0x9e3779b97f4a7c15ull;
        h ^= static_cast<std::uint64_t>(den_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }

    static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rat64: add overflow");
        return r;
    }
    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rat64: mul overflow");
        return r;
    }
    static std::int64_t checked_neg(std::int64_t a) {
        std::int64_t r;
        if (__builtin_sub_overflow(std::int64_t{0}, a, &r)) throw std::overflow_error("Rat64: neg overflow");
        return r;
    }

private:
    struct already_reduced {};
    Rat64(std::int64_t n, std::int64_t d, already_reduced) : num_(n), den_(d) {}

    void reduce() {
        if (den_ < 0) { num_ = checked_neg(num_); den_ = checked_neg(den_); }
        if (num_ == 0) { den_ = 1; return; }
        std::int64_t g = std::gcd(std::abs(num_), den_);
        num_ /= g;
        den_ /= g;
    }

    std::int64_t num_;
    std::int64_t den_;  // > 0
};

/// q-exponents are exact rationals.
using Exponent = Rat64;

}  // namespace heckmort

template <>
struct std::hash<heckmort::Rat64> {
    std::size_t operator()(const heckmort::Rat64& r) const { return r.hash(); }
};
