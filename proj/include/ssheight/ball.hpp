#pragma once

#include "ssheight/real.hpp"

#include <gmpxx.h>

#include <string>

namespace ssheight {

/// Midpoint-radius enclosure of a real number. The midpoint carries the
/// working precision; the radius is a 64-bit upper bound maintained with
/// upward rounding. Every operation returns a ball containing the exact
/// result for every choice of inputs inside the argument balls.
class Ball {
public:
    static constexpr mpfr_prec_t rad_prec = 64;

    explicit Ball(mpfr_prec_t prec);
    Ball(const mpz_class& z, mpfr_prec_t prec);
    Ball(const mpq_class& q, mpfr_prec_t prec);
    Ball(long v, mpfr_prec_t prec);

    const Real& mid() const { return mid_; }
    const Real& rad() const { return rad_; }
    Real& mid() { return mid_; }
    Real& rad() { return rad_; }
    mpfr_prec_t prec() const { return mid_.prec(); }

    /// Inflate radius by |r| (upward).
    void add_error(mpfr_srcptr r);
    void add_error(double r);
    /// Account for the rounding of the midpoint just computed.
    void add_rounding_error();

    bool contains_zero() const;
    bool is_positive() const;   // every point > 0
    bool is_negative() const;   // every point < 0
    bool contains(const mpz_class& z) const;

    /// Upper bound for |x| over the ball.
    Real abs_upper() const;
    /// Lower bound for |x| over the ball (0 when it contains zero).
    Real abs_lower() const;
    /// Lower/upper endpoints with directed rounding.
    Real lower() const;
    Real upper() const;

    /// Unique integer inside the ball when rad < 1/4; returns false otherwise.
    bool unique_integer(mpz_class& out) const;

    std::string to_string(int digits = 20) const;

private:
    Real mid_;
    Real rad_;
};

Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator-(const Ball& a);
Ball operator*(const Ball& a, const Ball& b);
Ball operator*(const Ball& a, long k);
Ball operator*(const Ball& a, const mpz_class& k);
Ball operator/(const Ball& a, const Ball& b);  // throws precision_exhausted if b ∋ 0

Ball ball_pi(mpfr_prec_t prec);
Ball ball_exp(const Ball& x);
Ball ball_cos(const Ball& x);
Ball ball_sin(const Ball& x);
Ball ball_log(const Ball& x);       // requires x > 0
Ball ball_sqrt(const Ball& x);      // requires x > 0
Ball ball_pow(const Ball& x, double e);   // x > 0 required

/// Complex ball stored as a rectangle.
struct CBall {
    Ball re;
    Ball im;

    explicit CBall(mpfr_prec_t prec) : re(prec), im(prec) {}
    CBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const { return re.prec(); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    /// Upper bound on |z|.
    Real abs_upper() const;
    /// Lower bound on |z|, 0 when the rectangle touches the origin.
    Real abs_lower() const;
};

CBall operator+(const CBall& a, const CBall& b);
CBall operator-(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const Ball& b);
CBall operator*(const CBall& a, const mpz_class& k);
CBall operator/(const CBall& a, const CBall& b);

/// Ball for |z| (requires z away from the origin is not necessary).
Ball cball_abs(const CBall& z);

}  // namespace ssheight
