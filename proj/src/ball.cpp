#include "ssheight/ball.hpp"

#include "ssheight/error.hpp"

#include <algorithm>

namespace ssheight {

namespace {

constexpr mpfr_prec_t RP = Ball::rad_prec;

// |x| * y rounded up into a radius-precision value.
Real mul_abs_up(mpfr_srcptr x, mpfr_srcptr y) {
    Real t(RP);
    mpfr_mul(t.get(), x, y, MPFR_RNDA);
    mpfr_abs(t.get(), t.get(), MPFR_RNDN);
    return t;
}

Real abs_up(mpfr_srcptr x) {
    Real t(RP);
    mpfr_set(t.get(), x, MPFR_RNDA);
    mpfr_abs(t.get(), t.get(), MPFR_RNDN);
    return t;
}

void add_up(Real& acc, mpfr_srcptr x) { mpfr_add(acc.get(), acc.get(), x, MPFR_RNDU); }

// One ulp of the midpoint, used after every inexact midpoint operation.
void add_ulp(Ball& b, int ternary) {
    if (ternary == 0) return;
    const Real& m = b.mid();
    if (mpfr_zero_p(m.get())) return;
    Real u(RP);
    mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(m.get()) - m.prec(), MPFR_RNDU);
    b.add_error(u.get());
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) : mid_(prec), rad_(RP) {}

Ball::Ball(const mpz_class& z, mpfr_prec_t prec) : Ball(prec) {
    int t = mpfr_set_z(mid_.get(), z.get_mpz_t(), MPFR_RNDN);
    add_ulp(*this, t);
}

Ball::Ball(const mpq_class& q, mpfr_prec_t prec) : Ball(prec) {
    int t = mpfr_set_q(mid_.get(), q.get_mpq_t(), MPFR_RNDN);
    add_ulp(*this, t);
}

Ball::Ball(long v, mpfr_prec_t prec) : Ball(prec) {
    int t = mpfr_set_si(mid_.get(), v, MPFR_RNDN);
    add_ulp(*this, t);
}

void Ball::add_error(mpfr_srcptr r) {
    Real a = abs_up(r);
    add_up(rad_, a.get());
}

void Ball::add_error(double r) {
    Real a(RP);
    mpfr_set_d(a.get(), r < 0 ? -r : r, MPFR_RNDU);
    add_up(rad_, a.get());
}

void Ball::add_rounding_error() { add_ulp(*this, 1); }

bool Ball::contains_zero() const { return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0; }

bool Ball::is_positive() const { return mpfr_sgn(mid_.get()) > 0 && !contains_zero(); }

bool Ball::is_negative() const { return mpfr_sgn(mid_.get()) < 0 && !contains_zero(); }

Real Ball::lower() const {
    Real l(prec());
    mpfr_sub(l.get(), mid_.get(), rad_.get(), MPFR_RNDD);
    return l;
}

Real Ball::upper() const {
    Real u(prec());
    mpfr_add(u.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    return u;
}

bool Ball::contains(const mpz_class& z) const {
    return mpfr_cmp_z(lower().get(), z.get_mpz_t()) <= 0 &&
           mpfr_cmp_z(upper().get(), z.get_mpz_t()) >= 0;
}

Real Ball::abs_upper() const {
    Real a = abs_up(mid_.get());
    add_up(a, rad_.get());
    return a;
}

Real Ball::abs_lower() const {
    Real a(RP);
    if (contains_zero()) return a;
    Real m(prec());
    mpfr_abs(m.get(), mid_.get(), MPFR_RNDN);
    mpfr_sub(a.get(), m.get(), rad_.get(), MPFR_RNDD);
    return a;
}

bool Ball::unique_integer(mpz_class& out) const {
    if (mpfr_cmp_d(rad_.get(), 0.25) >= 0) return false;
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), mid_.get(), MPFR_RNDN);
    if (!contains(z)) return false;
    out = z;
    return true;
}

std::string Ball::to_string(int digits) const {
    return "[" + mid_.to_string(digits) + " +/- " + rad_.to_string(3) + "]";
}

Ball operator+(const Ball& a, const Ball& b) {
    Ball r(std::max(a.prec(), b.prec()));
    int t = mpfr_add(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    mpfr_add(r.rad().get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
    add_ulp(r, t);
    return r;
}

Ball operator-(const Ball& a, const Ball& b) {
    Ball r(std::max(a.prec(), b.prec()));
    int t = mpfr_sub(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    mpfr_add(r.rad().get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
    add_ulp(r, t);
    return r;
}

Ball operator-(const Ball& a) {
    Ball r = a;
    mpfr_neg(r.mid().get(), r.mid().get(), MPFR_RNDN);
    return r;
}

Ball operator*(const Ball& a, const Ball& b) {
    Ball r(std::max(a.prec(), b.prec()));
    int t = mpfr_mul(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    Real e1 = mul_abs_up(a.mid().get(), b.rad().get());
    Real e2 = mul_abs_up(b.mid().get(), a.rad().get());
    Real e3 = mul_abs_up(a.rad().get(), b.rad().get());
    add_up(e1, e2.get());
    add_up(e1, e3.get());
    r.add_error(e1.get());
    add_ulp(r, t);
    return r;
}

Ball operator*(const Ball& a, long k) {
    Ball r(a.prec());
    int t = mpfr_mul_si(r.mid().get(), a.mid().get(), k, MPFR_RNDN);
    Real e(RP);
    mpfr_mul_si(e.get(), a.rad().get(), k < 0 ? -k : k, MPFR_RNDU);
    r.add_error(e.get());
    add_ulp(r, t);
    return r;
}

Ball operator*(const Ball& a, const mpz_class& k) {
    Ball r(a.prec());
    int t = mpfr_mul_z(r.mid().get(), a.mid().get(), k.get_mpz_t(), MPFR_RNDN);
    mpz_class ak = abs(k);
    Real e(RP);
    mpfr_mul_z(e.get(), a.rad().get(), ak.get_mpz_t(), MPFR_RNDU);
    r.add_error(e.get());
    add_ulp(r, t);
    return r;
}

Ball operator/(const Ball& a, const Ball& b) {
    if (b.contains_zero())
        fail(ErrorKind::precision_exhausted, "division by a ball containing zero");
    Ball r(std::max(a.prec(), b.prec()));
    int t = mpfr_div(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    // |x/y - am/bm| <= (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
    Real num = mul_abs_up(a.mid().get(), b.rad().get());
    Real n2 = mul_abs_up(b.mid().get(), a.rad().get());
    add_up(num, n2.get());
    Real lo = b.abs_lower();
    Real den(RP);
    Real bm(RP);
    mpfr_abs(bm.get(), b.mid().get(), MPFR_RNDD);
    mpfr_mul(den.get(), bm.get(), lo.get(), MPFR_RNDD);
    Real e(RP);
    mpfr_div(e.get(), num.get(), den.get(), MPFR_RNDU);
    r.add_error(e.get());
    add_ulp(r, t);
    return r;
}

Ball ball_pi(mpfr_prec_t prec) {
    Ball r(prec);
    int t = mpfr_const_pi(r.mid().get(), MPFR_RNDN);
    add_ulp(r, t);
    return r;
}

Ball ball_exp(const Ball& x) {
    Ball r(x.prec());
    int t = mpfr_exp(r.mid().get(), x.mid().get(), MPFR_RNDN);
    if (!mpfr_zero_p(x.rad().get())) {
        // |exp(m+d) - exp(m)| <= exp(m) (exp(r) - 1)
        Real em(RP);
        mpfr_exp(em.get(), x.mid().get(), MPFR_RNDU);
        Real er(RP);
        mpfr_expm1(er.get(), x.rad().get(), MPFR_RNDU);
        mpfr_mul(em.get(), em.get(), er.get(), MPFR_RNDU);
        r.add_error(em.get());
    }
    add_ulp(r, t);
    return r;
}

Ball ball_cos(const Ball& x) {
    Ball r(x.prec());
    int t = mpfr_cos(r.mid().get(), x.mid().get(), MPFR_RNDN);
    r.add_error(x.rad().get());
    add_ulp(r, t);
    return r;
}

Ball ball_sin(const Ball& x) {
    Ball r(x.prec());
    int t = mpfr_sin(r.mid().get(), x.mid().get(), MPFR_RNDN);
    r.add_error(x.rad().get());
    add_ulp(r, t);
    return r;
}

Ball ball_log(const Ball& x) {
    if (!x.is_positive()) fail(ErrorKind::precision_exhausted, "log of a ball touching zero");
    Ball r(x.prec());
    int t = mpfr_log(r.mid().get(), x.mid().get(), MPFR_RNDN);
    if (!mpfr_zero_p(x.rad().get())) {
        Real lo = x.abs_lower();
        Real e(RP);
        mpfr_div(e.get(), x.rad().get(), lo.get(), MPFR_RNDU);
        r.add_error(e.get());
    }
    add_ulp(r, t);
    return r;
}

Ball ball_sqrt(const Ball& x) {
    if (!x.is_positive()) fail(ErrorKind::precision_exhausted, "sqrt of a ball touching zero");
    Ball r(x.prec());
    int t = mpfr_sqrt(r.mid().get(), x.mid().get(), MPFR_RNDN);
    if (!mpfr_zero_p(x.rad().get())) {
        Real lo = x.abs_lower();
        mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
        Real e(RP);
        mpfr_div(e.get(), x.rad().get(), lo.get(), MPFR_RNDU);
        r.add_error(e.get());
    }
    add_ulp(r, t);
    return r;
}

Ball ball_pow(const Ball& x, double e) {
    Ball le = ball_log(x);
    Ball eb(x.prec());
    int t = mpfr_set_d(eb.mid().get(), e, MPFR_RNDN);
    add_ulp(eb, t);
    return ball_exp(le * eb);
}

Real CBall::abs_upper() const {
    Real a = re.abs_upper();
    Real b = im.abs_upper();
    Real r(Ball::rad_prec);
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

Real CBall::abs_lower() const {
    Real a = re.abs_lower();
    Real b = im.abs_lower();
    Real r(Ball::rad_prec);
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDD);
    return r;
}

CBall operator+(const CBall& a, const CBall& b) { return {a.re + b.re, a.im + b.im}; }
CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }

CBall operator*(const CBall& a, const CBall& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CBall operator*(const CBall& a, const Ball& b) { return {a.re * b, a.im * b}; }

CBall operator*(const CBall& a, const mpz_class& k) { return {a.re * k, a.im * k}; }

CBall operator/(const CBall& a, const CBall& b) {
    Ball den = b.re * b.re + b.im * b.im;
    if (!den.is_positive())
        fail(ErrorKind::precision_exhausted, "complex division by a ball touching zero");
    CBall num{a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
    return {num.re / den, num.im / den};
}

Ball cball_abs(const CBall& z) {
    Ball s = z.re * z.re + z.im * z.im;
    if (s.is_positive()) return ball_sqrt(s);
    // Enclose [0, upper].
    Ball r(z.prec());
    Real u = z.abs_upper();
    mpfr_div_2ui(r.mid().get(), u.get(), 1, MPFR_RNDN);
    r.add_error(r.mid().get());
    r.add_rounding_error();
    return r;
}

}  // namespace ssheight
