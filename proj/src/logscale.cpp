#include "ssheight/logscale.hpp"

#include "ssheight/error.hpp"

#include <algorithm>

namespace ssheight {

namespace {

constexpr mpfr_prec_t P = logscale_prec;
// ln(1e300): above this a double would overflow.
constexpr double ln_float_max = 690.0;
constexpr double float_max = 1e300;

Real make(mpfr_prec_t p = P) { return Real(p); }

// |v| * 2^(2 - prec): covers one rounding of v.
void add_ulp(Real& slack, const Real& v) {
    if (v.is_zero()) return;
    Real u(64);
    mpfr_abs(u.get(), v.get(), MPFR_RNDU);
    mpfr_mul_2si(u.get(), u.get(), 2 - static_cast<long>(v.prec()), MPFR_RNDU);
    mpfr_add(slack.get(), slack.get(), u.get(), MPFR_RNDU);
}

}  // namespace

// ---- Magnitude ------------------------------------------------------------

Magnitude::Magnitude(int level, Real value) : level_(level), value_(std::move(value)) {
    if (level < 0 || level > 2) fail(ErrorKind::invalid_argument, "magnitude level must be 0, 1 or 2");
}

std::string_view Magnitude::meaning(int level) {
    switch (level) {
        case 0: return "x";
        case 1: return "ln x";
        default: return "ln ln x";
    }
}

Magnitude Magnitude::from_log(const Real& ln_x) {
    if (mpfr_cmp_d(ln_x.get(), ln_float_max) <= 0) {
        Real x = make();
        mpfr_exp(x.get(), ln_x.get(), MPFR_RNDU);
        return Magnitude(0, std::move(x));
    }
    if (mpfr_cmp_d(ln_x.get(), float_max) <= 0) {
        Real v = make();
        mpfr_set(v.get(), ln_x.get(), MPFR_RNDU);
        return Magnitude(1, std::move(v));
    }
    Real v = make();
    mpfr_log(v.get(), ln_x.get(), MPFR_RNDU);
    return Magnitude(2, std::move(v));
}

Magnitude Magnitude::from_log_log(const Real& lnln_x) {
    if (mpfr_cmp_d(lnln_x.get(), ln_float_max) <= 0) {
        Real l = make();
        mpfr_exp(l.get(), lnln_x.get(), MPFR_RNDU);
        return from_log(l);
    }
    Real v = make();
    mpfr_set(v.get(), lnln_x.get(), MPFR_RNDU);
    return Magnitude(2, std::move(v));
}

Magnitude Magnitude::at_level(int level) const {
    Magnitude m = *this;
    while (m.level_ < level) {
        if (m.level_ == 1 && mpfr_sgn(m.value_.get()) <= 0)
            fail(ErrorKind::invalid_argument, "ln ln x undefined for x <= 1");
        Real v = make();
        mpfr_log(v.get(), m.value_.get(), MPFR_RNDU);
        m = Magnitude(m.level_ + 1, std::move(v));
    }
    while (m.level_ > level) {
        Real v = make();
        mpfr_exp(v.get(), m.value_.get(), MPFR_RNDU);
        m = Magnitude(m.level_ - 1, std::move(v));
    }
    return m;
}

Real Magnitude::log() const { return at_level(1).value(); }

int Magnitude::compare(const Magnitude& o) const {
    int l = std::max(level_, o.level_);
    Magnitude a = at_level(l), b = o.at_level(l);
    return mpfr_cmp(a.value_.get(), b.value_.get()) < 0 ? -1 : (mpfr_equal_p(a.value_.get(), b.value_.get()) ? 0 : 1);
}

// ---- BoundValue -----------------------------------------------------------

std::string_view BoundValue::meaning(int level) {
    switch (level) {
        case 0: return "h";
        case 1: return "-ln h";
        default: return "ln(-ln h)";
    }
}

BoundValue BoundValue::from_h(Real h, Real slack) {
    BoundValue b;
    b.level_ = 0;
    b.value_ = std::move(h);
    b.slack_ = std::move(slack);
    return b;
}

BoundValue BoundValue::from_neg_log(Real v, Real slack) {
    BoundValue b = from_h(std::move(v), std::move(slack));
    b.level_ = 1;
    return b;
}

BoundValue BoundValue::from_log_neg_log(Real v, Real slack) {
    BoundValue b = from_h(std::move(v), std::move(slack));
    b.level_ = 2;
    return b;
}

BoundValue BoundValue::exact(const mpq_class& h) {
    BoundValue b;
    b.level_ = 0;
    mpfr_set_q(b.value_.get(), h.get_mpq_t(), MPFR_RNDD);
    add_ulp(b.slack_, b.value_);
    b.exact_ = h;
    return b;
}

bool BoundValue::informative() const { return level_ > 0 || mpfr_sgn(value_.get()) > 0; }

BoundValue BoundValue::to_level(int level) const {
    if (level < 0 || level > 2) fail(ErrorKind::invalid_argument, "bound level must be 0, 1 or 2");
    BoundValue b = *this;
    while (b.level_ < level) {
        BoundValue n;
        n.level_ = b.level_ + 1;
        const Real& v = b.value_;
        Real t = make();
        if (b.level_ == 0) {
            // F in [v, v+s]  ->  -ln F in [-ln(v+s), -ln v]
            if (mpfr_sgn(v.get()) <= 0)
                fail(ErrorKind::invalid_argument, "non-positive bound has no logarithmic form");
            mpfr_log(t.get(), v.get(), MPFR_RNDD);
            mpfr_neg(n.value_.get(), t.get(), MPFR_RNDN);
            mpfr_div(t.get(), b.slack_.get(), v.get(), MPFR_RNDU);
            mpfr_log1p(n.slack_.get(), t.get(), MPFR_RNDU);
        } else {
            // G in [v-s, v]  ->  ln G in [ln(v-s), ln v]
            if (mpfr_sgn(v.get()) <= 0)
                fail(ErrorKind::invalid_argument, "h >= 1 has no ln(-ln h) form");
            mpfr_log(n.value_.get(), v.get(), MPFR_RNDU);
            mpfr_div(t.get(), b.slack_.get(), v.get(), MPFR_RNDU);
            if (mpfr_cmp_ui(t.get(), 1) >= 0) {
                mpfr_set_inf(n.slack_.get(), 1);
            } else {
                mpfr_neg(t.get(), t.get(), MPFR_RNDN);
                mpfr_log1p(n.slack_.get(), t.get(), MPFR_RNDD);
                mpfr_neg(n.slack_.get(), n.slack_.get(), MPFR_RNDU);
            }
        }
        add_ulp(n.slack_, n.value_);
        b = std::move(n);
    }
    while (b.level_ > level) {
        BoundValue n;
        n.level_ = b.level_ - 1;
        const Real& v = b.value_;
        Real t = make();
        if (b.level_ == 2) {
            // [v-s, v] -> [e^(v-s), e^v]; slack e^v (1 - e^-s)
            mpfr_exp(n.value_.get(), v.get(), MPFR_RNDU);
            mpfr_neg(t.get(), b.slack_.get(), MPFR_RNDN);
            mpfr_expm1(t.get(), t.get(), MPFR_RNDD);
            mpfr_neg(t.get(), t.get(), MPFR_RNDU);
            mpfr_mul(n.slack_.get(), n.value_.get(), t.get(), MPFR_RNDU);
        } else {
            // [v-s, v] -> F in [e^-v, e^-(v-s)]; slack e^-v (e^s - 1)
            mpfr_neg(t.get(), v.get(), MPFR_RNDN);
            mpfr_exp(n.value_.get(), t.get(), MPFR_RNDD);
            mpfr_expm1(t.get(), b.slack_.get(), MPFR_RNDU);
            mpfr_mul(n.slack_.get(), n.value_.get(), t.get(), MPFR_RNDU);
        }
        add_ulp(n.slack_, n.value_);
        b = std::move(n);
    }
    if (b.level_ != level_) b.exact_.reset();
    return b;
}

BoundValue BoundValue::normalized() const {
    if (!informative()) return *this;
    BoundValue b = to_level(2);
    if (mpfr_cmp_d(b.value_.get(), ln_float_max) > 0) return b;
    BoundValue one = to_level(1);
    if (mpfr_cmp_d(one.value_.get(), ln_float_max) > 0) return one;
    return level_ == 0 ? *this : to_level(0);
}

Certainty BoundValue::at_least(const mpq_class& t) const {
    if (t <= 0) fail(ErrorKind::invalid_argument, "threshold must be positive");
    if (exact_) return *exact_ >= t ? Certainty::yes : Certainty::no;
    Real lo = make(), hi = make();
    mpfr_set(lo.get(), value_.get(), MPFR_RNDD);
    if (level_ == 0) {
        mpfr_add(hi.get(), value_.get(), slack_.get(), MPFR_RNDU);
        // interval for F: [lo, hi]
        if (mpfr_cmp_q(lo.get(), t.get_mpq_t()) >= 0) return Certainty::yes;
        if (mpfr_cmp_q(hi.get(), t.get_mpq_t()) < 0) return Certainty::no;
        return Certainty::undecided;
    }
    // interval for the stored quantity G: [v - s, v]; F >= t  <=>  G <= g(t)
    mpfr_sub(lo.get(), value_.get(), slack_.get(), MPFR_RNDD);
    mpfr_set(hi.get(), value_.get(), MPFR_RNDU);
    Real g_lo = make(), g_hi = make();
    Real tl = make(), th = make();
    mpfr_set_q(tl.get(), t.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(th.get(), t.get_mpq_t(), MPFR_RNDU);
    // g(t) = -ln t (level 1) or ln(-ln t) (level 2); bracket it
    mpfr_log(g_lo.get(), th.get(), MPFR_RNDU);
    mpfr_neg(g_lo.get(), g_lo.get(), MPFR_RNDD);
    mpfr_log(g_hi.get(), tl.get(), MPFR_RNDD);
    mpfr_neg(g_hi.get(), g_hi.get(), MPFR_RNDU);
    if (level_ == 2) {
        // the encoded h is below 1, so a threshold t >= 1 is never met
        if (mpfr_sgn(g_hi.get()) <= 0) return Certainty::no;
        if (mpfr_sgn(g_lo.get()) <= 0) return Certainty::undecided;
        mpfr_log(g_lo.get(), g_lo.get(), MPFR_RNDD);
        mpfr_log(g_hi.get(), g_hi.get(), MPFR_RNDU);
    }
    if (mpfr_cmp(hi.get(), g_lo.get()) <= 0) return Certainty::yes;
    if (mpfr_cmp(lo.get(), g_hi.get()) > 0) return Certainty::no;
    return Certainty::undecided;
}

int BoundValue::compare(const BoundValue& o) const {
    if (exact_ && o.exact_) return cmp(*exact_, *o.exact_) < 0 ? -1 : (*exact_ == *o.exact_ ? 0 : 1);
    if (!informative() || !o.informative()) {
        // Only level 0 can be non-positive; compare at level 0.
        BoundValue a = to_level(0), b = o.to_level(0);
        int c = mpfr_cmp(a.value_.get(), b.value_.get());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    int l = std::max(level_, o.level_);
    BoundValue a = to_level(l), b = o.to_level(l);
    int c = mpfr_cmp(a.value_.get(), b.value_.get());
    if (l > 0) c = -c;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string BoundValue::value_string(int digits) const { return value_.to_string(digits); }

}  // namespace ssheight
