#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "cgap/errors.hpp"

namespace cgap {

// Exact rational with int64 parts. Character values and dual-action
// bookkeeping only ever see denominators dividing p^(n-2), so int64 is ample;
// arithmetic still guards against overflow to keep exactness a hard property.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0)
            throw ContractError("Fraction: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    // Representative of the class mod 1 in [0, 1).
    Fraction mod_one() const {
        std::int64_t r = num % den;
        if (r < 0)
            r += den;
        return Fraction(r, den);
    }

    bool is_integer() const { return den == 1; }

    friend Fraction operator+(const Fraction& a, const Fraction& b) {
        return Fraction(checked(a.num, b.den) + checked(b.num, a.den),
                        checked(a.den, b.den));
    }
    friend Fraction operator-(const Fraction& a, const Fraction& b) {
        return Fraction(checked(a.num, b.den) - checked(b.num, a.den),
                        checked(a.den, b.den));
    }
    friend Fraction operator*(const Fraction& a, const Fraction& b) {
        return Fraction(checked(a.num, b.num), checked(a.den, b.den));
    }
    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::string str() const {
        if (den == 1)
            return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

private:
    static std::int64_t checked(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r))
            throw InternalError("Fraction: int64 overflow");
        return r;
    }
};

} // namespace cgap
