#pragma once
//
// ExtendedReal: a real number carried at a caller-chosen binary precision.
//
// Thin value-semantics wrapper over an MPFR variable. Every arithmetic
// operation is correctly rounded (round-to-nearest) to the larger of the
// operand precisions, and to_double() is a single correctly rounded
// conversion.
//

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <utility>

#include "errors.hpp"

namespace bessel_ccf {

class ExtendedReal {
public:
    static constexpr mpfr_prec_t default_bits = 128;

    explicit ExtendedReal(mpfr_prec_t bits = default_bits) {
        mpfr_init2(v_, clamp(bits));
        mpfr_set_zero(v_, 1);
    }
    ExtendedReal(double x, mpfr_prec_t bits) {
        mpfr_init2(v_, clamp(bits));
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    ExtendedReal(long x, mpfr_prec_t bits) {
        mpfr_init2(v_, clamp(bits));
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    ExtendedReal(const mpz_class& z, mpfr_prec_t bits) {
        mpfr_init2(v_, clamp(bits));
        mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
    }

    ExtendedReal(const ExtendedReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    ExtendedReal(ExtendedReal&& o) noexcept {
        // Leave `o` as a valid 2-bit zero so its destructor stays trivial to reason about.
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    ExtendedReal& operator=(const ExtendedReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ExtendedReal& operator=(ExtendedReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~ExtendedReal() { mpfr_clear(v_); }

    mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }

    /// Same value rounded to a new precision.
    ExtendedReal with_precision(mpfr_prec_t bits) const {
        ExtendedReal r(bits);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
    explicit operator double() const noexcept { return to_double(); }

    std::string to_string(int digits = 40) const {
        mpfr_exp_t e = 0;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
        std::string m(s);
        mpfr_free_str(s);
        if (mpfr_zero_p(v_)) return "0";
        if (!mpfr_number_p(v_)) return m;
        bool neg = !m.empty() && m[0] == '-';
        if (neg) m.erase(0, 1);
        return (neg ? "-0." : "0.") + m + "e" + std::to_string(static_cast<long>(e));
    }

    bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
    int sign() const noexcept { return mpfr_sgn(v_); }

    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_ptr get() noexcept { return v_; }

    ExtendedReal& operator+=(const ExtendedReal& o) { return apply(mpfr_add, o); }
    ExtendedReal& operator-=(const ExtendedReal& o) { return apply(mpfr_sub, o); }
    ExtendedReal& operator*=(const ExtendedReal& o) { return apply(mpfr_mul, o); }
    ExtendedReal& operator/=(const ExtendedReal& o) { return apply(mpfr_div, o); }

    ExtendedReal& operator*=(double d) {
        mpfr_mul_d(v_, v_, d, MPFR_RNDN);
        return *this;
    }
    ExtendedReal& operator/=(double d) {
        mpfr_div_d(v_, v_, d, MPFR_RNDN);
        return *this;
    }
    ExtendedReal& operator+=(double d) {
        mpfr_add_d(v_, v_, d, MPFR_RNDN);
        return *this;
    }

    friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
        return binary(mpfr_add, a, b);
    }
    friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) {
        return binary(mpfr_sub, a, b);
    }
    friend ExtendedReal operator*(const ExtendedReal& a, const ExtendedReal& b) {
        return binary(mpfr_mul, a, b);
    }
    friend ExtendedReal operator/(const ExtendedReal& a, const ExtendedReal& b) {
        return binary(mpfr_div, a, b);
    }
    friend ExtendedReal operator-(const ExtendedReal& a) {
        ExtendedReal r(a.precision());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
        return mpfr_less_p(a.v_, b.v_) != 0;
    }
    friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        return mpfr_equal_p(a.v_, b.v_) != 0;
    }

    friend ExtendedReal abs(const ExtendedReal& a) { return unary(mpfr_abs, a); }
    friend ExtendedReal sqrt(const ExtendedReal& a) { return unary(mpfr_sqrt, a); }
    friend ExtendedReal log(const ExtendedReal& a) { return unary(mpfr_log, a); }
    friend ExtendedReal exp(const ExtendedReal& a) { return unary(mpfr_exp, a); }
    friend ExtendedReal pow(const ExtendedReal& a, const ExtendedReal& b) {
        return binary(mpfr_pow, a, b);
    }
    /// Gamma at the argument's precision. Throws pole_error at 0, -1, -2, ...
    friend ExtendedReal gamma(const ExtendedReal& a) {
        if (mpfr_integer_p(a.v_) && mpfr_sgn(a.v_) <= 0)
            throw pole_error("gamma: pole at nonpositive integer " + a.to_string(20));
        return unary(mpfr_gamma, a);
    }

    static ExtendedReal pi(mpfr_prec_t bits) {
        ExtendedReal r(bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

private:
    static mpfr_prec_t clamp(mpfr_prec_t bits) {
        return std::clamp<mpfr_prec_t>(bits, MPFR_PREC_MIN, MPFR_PREC_MAX);
    }

    using binop = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    using unop = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

    ExtendedReal& apply(binop op, const ExtendedReal& o) {
        if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
        op(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    static ExtendedReal binary(binop op, const ExtendedReal& a, const ExtendedReal& b) {
        ExtendedReal r(std::max(a.precision(), b.precision()));
        op(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    static ExtendedReal unary(unop op, const ExtendedReal& a) {
        ExtendedReal r(a.precision());
        op(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

}  // namespace bessel_ccf
