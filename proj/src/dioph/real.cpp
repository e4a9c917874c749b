#include "diophex/real.hpp"

#include <algorithm>
#include <cstdlib>

namespace diophex {

namespace {

mpfr_prec_t larger(mpfr_srcptr a, mpfr_srcptr b) { return std::max(mpfr_get_prec(a), mpfr_get_prec(b)); }

// Raises the precision of `a` (keeping its value) before an operation with `b`.
void widen(mpfr_ptr a, mpfr_srcptr b) {
    const auto p = larger(a, b);
    if (mpfr_get_prec(a) < p) mpfr_prec_round(a, p, MPFR_RNDN);
}

}  // namespace

Real::Real(unsigned precision) {
    mpfr_init2(v_, static_cast<mpfr_prec_t>(std::max(precision, static_cast<unsigned>(MPFR_PREC_MIN))));
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : Real(other.precision()) { mpfr_swap(v_, other.v_); }

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from_double(double v, unsigned precision) {
    Real r(precision);
    mpfr_set_d(r.v_, v, MPFR_RNDN);
    return r;
}

Real Real::from_integer(const exactlin::Integer& v, unsigned precision) {
    Real r(precision);
    mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real Real::from_rational(const exactlin::Rational& v, unsigned precision) {
    Real r(precision);
    mpfr_set_q(r.v_, v.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::pi(unsigned precision) {
    Real r(precision);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::with_precision(unsigned precision) const {
    Real r(precision);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

exactlin::Integer Real::round() const {
    exactlin::Integer z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDNA);
    return z;
}

std::string Real::to_string(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
    if (is_zero()) return "0";
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Re", digits - 1, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Real& Real::operator+=(const Real& o) {
    widen(v_, o.v_);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator-=(const Real& o) {
    widen(v_, o.v_);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator*=(const Real& o) {
    widen(v_, o.v_);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator/=(const Real& o) {
    widen(v_, o.v_);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

Real abs(const Real& a) {
    Real r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real sqrt(const Real& a) {
    Real r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real cbrt(const Real& a) {
    Real r(a.precision());
    mpfr_cbrt(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real log(const Real& a) {
    Real r(a.precision());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real exp(const Real& a) {
    Real r(a.precision());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real ldexp(const Real& a, long e) {
    Real r = a;
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

Real mul_integer(const Real& a, const exactlin::Integer& k) {
    Real r(a.precision());
    mpfr_mul_z(r.get(), a.get(), k.get_mpz_t(), MPFR_RNDN);
    return r;
}

}  // namespace diophex
