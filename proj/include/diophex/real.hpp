#pragma once

// RAII wrapper around mpfr_t. Every value carries its own precision; binary
// operations round to the larger precision of the operands.

#include <mpfr.h>

#include <compare>
#include <string>

#include "diophex/exactlin.hpp"

namespace diophex {

inline constexpr unsigned kDefaultPrecision = 128;

class Real {
public:
    explicit Real(unsigned precision = kDefaultPrecision);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    static Real from_double(double v, unsigned precision = kDefaultPrecision);
    static Real from_integer(const exactlin::Integer& v, unsigned precision = kDefaultPrecision);
    static Real from_rational(const exactlin::Rational& v, unsigned precision = kDefaultPrecision);
    static Real pi(unsigned precision = kDefaultPrecision);

    unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
    /// Same value rounded to `precision` bits.
    Real with_precision(unsigned precision) const;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Nearest integer (ties away from zero).
    exactlin::Integer round() const;
    /// Decimal digits in scientific notation, e.g. "1.2345678901234567890e-05".
    std::string to_string(int digits = 20) const;

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);

    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }
    friend Real operator*(Real a, const Real& b) { return a *= b; }
    friend Real operator/(Real a, const Real& b) { return a /= b; }
    friend Real operator-(Real a) {
        mpfr_neg(a.v_, a.v_, MPFR_RNDN);
        return a;
    }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b);

    friend Real abs(const Real& a);
    friend Real sqrt(const Real& a);
    friend Real cbrt(const Real& a);
    friend Real log(const Real& a);
    friend Real exp(const Real& a);

private:
    mpfr_t v_;
};

/// a·2^e, exactly.
Real ldexp(const Real& a, long e);
/// The integer k times a (rounded once).
Real mul_integer(const Real& a, const exactlin::Integer& k);

}  // namespace diophex
