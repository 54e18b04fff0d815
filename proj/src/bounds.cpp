#include "ssheight/bounds.hpp"

#include "ssheight/curve.hpp"
#include "ssheight/error.hpp"
#include "ssheight/ssearch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>

namespace ssheight::bounds {

namespace {

using u64 = std::uint64_t;
using Poly = std::vector<mpz_class>;
constexpr mpfr_prec_t P = logscale_prec;

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorKind::invalid_argument, what);
}

Real ln_u(u64 x, mpfr_rnd_t rnd) {
    Real r(P), t(P);
    mpfr_set_ui(t.get(), x, rnd);
    mpfr_log(r.get(), t.get(), rnd);
    return r;
}

// ---- integer polynomials --------------------------------------------------

void trim(Poly& f) {
    while (f.size() > 1 && f.back() == 0) f.pop_back();
}

mpz_class content(const Poly& f) {
    mpz_class g = 0;
    for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

// Does g divide f in Q[x]? (g has non-zero leading coefficient.)
bool divides(const Poly& g, const Poly& f) {
    std::vector<mpq_class> r(f.begin(), f.end());
    std::size_t dg = g.size() - 1;
    for (std::size_t i = r.size(); i-- > dg;) {
        if (r[i] == 0) continue;
        mpq_class t = r[i] / g[dg];
        for (std::size_t k = 0; k <= dg; ++k) r[i - dg + k] -= t * g[k];
    }
    for (std::size_t i = 0; i < dg; ++i)
        if (r[i] != 0) return false;
    return true;
}

bool is_eisenstein(const Poly& f) {
    std::size_t d = f.size() - 1;
    for (u64 p = 2; p < 100; ++p) {
        if (!arith::is_prime(p)) continue;
        if (mpz_divisible_ui_p(f[d].get_mpz_t(), p)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) ok = mpz_divisible_ui_p(f[i].get_mpz_t(), p) != 0;
        if (ok && !mpz_divisible_ui_p(f[0].get_mpz_t(), p * p)) return true;
    }
    return false;
}

std::vector<mpz_class> positive_divisors(const mpz_class& n) {
    std::vector<mpz_class> out;
    mpz_class a = abs(n);
    for (mpz_class k = 1; k * k <= a; ++k) {
        if (a % k != 0) continue;
        out.push_back(k);
        if (k * k != a) out.push_back(a / k);
    }
    return out;
}

// ---- complex balls ----------------------------------------------------------

CBall exact_point(const Real& re, const Real& im, mpfr_prec_t prec) {
    CBall z(prec);
    mpfr_set(z.re.mid().get(), re.get(), MPFR_RNDN);
    mpfr_set(z.im.mid().get(), im.get(), MPFR_RNDN);
    return z;
}

CBall midpoint(const CBall& z) { return exact_point(z.re.mid(), z.im.mid(), z.prec()); }

CBall horner(const Poly& f, const CBall& z) {
    CBall acc(z.prec());
    acc.re = Ball(f.back(), z.prec());
    for (std::size_t i = f.size() - 1; i-- > 0;) {
        acc = acc * z;
        acc.re = acc.re + Ball(f[i], z.prec());
    }
    return acc;
}

Poly derivative(const Poly& f) {
    Poly g;
    for (std::size_t i = 1; i < f.size(); ++i) g.push_back(f[i] * static_cast<unsigned long>(i));
    if (g.empty()) g.push_back(0);
    return g;
}

std::vector<std::complex<long double>> aberth_ld(const Poly& f) {
    using C = std::complex<long double>;
    std::size_t d = f.size() - 1;
    std::vector<long double> a(d + 1);
    for (std::size_t i = 0; i <= d; ++i) a[i] = mpz_get_d(f[i].get_mpz_t());
    long double R = 0;
    for (std::size_t i = 0; i < d; ++i)
        if (a[i] != 0) R = std::max(R, std::pow(std::fabs(a[i] / a[d]), 1.0L / static_cast<long double>(d - i)));
    R = std::max<long double>(R, 0.5L) * 1.2L;
    std::vector<C> z(d);
    const long double two_pi = 6.283185307179586476925286766559L;
    for (std::size_t k = 0; k < d; ++k)
        z[k] = std::polar(R, two_pi * static_cast<long double>(k) / static_cast<long double>(d) + 0.4L);

    auto eval = [&](C x, C& dp) {
        C p = a[d];
        dp = 0;
        for (std::size_t i = d; i-- > 0;) {
            dp = dp * x + p;
            p = p * x + a[i];
        }
        return p;
    };
    for (int it = 0; it < 2000; ++it) {
        long double worst = 0;
        for (std::size_t i = 0; i < d; ++i) {
            C dp;
            C p = eval(z[i], dp);
            if (p == C(0)) continue;
            C w = dp == C(0) ? C(1e-6L) : p / dp;
            C s = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) s += 1.0L / (z[i] - z[j]);
            C step = w / (1.0L - w * s);
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / std::max<long double>(1, std::abs(z[i])));
        }
        if (worst < 1e-18L) break;
    }
    return z;
}

// One Aberth sweep at the working precision on exact midpoints.
void aberth_mp(const Poly& f, std::vector<CBall>& z) {
    Poly df = derivative(f);
    std::size_t d = z.size();
    mpfr_prec_t prec = z[0].prec();
    Ball one(1L, prec);
    for (std::size_t i = 0; i < d; ++i) {
        CBall p = horner(f, z[i]);
        CBall dp = horner(df, z[i]);
        if (p.contains_zero() || dp.contains_zero()) continue;
        CBall w = midpoint(p / dp);
        CBall s(prec);
        for (std::size_t j = 0; j < d; ++j) {
            if (j == i) continue;
            CBall diff = z[i] - z[j];
            if (diff.contains_zero()) continue;
            CBall num(Ball(1L, prec), Ball(prec));
            s = midpoint(s + num / diff);
        }
        CBall den(one - (w * s).re, -(w * s).im);
        if (den.contains_zero()) continue;
        z[i] = midpoint(z[i] - w / den);
    }
}

Ball ball_of_real_interval(const Real& lo, const Real& hi, mpfr_prec_t prec) {
    Ball b(prec);
    mpfr_add(b.mid().get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(b.mid().get(), b.mid().get(), 1, MPFR_RNDN);
    Real r(64), t(64);
    mpfr_sub(r.get(), hi.get(), b.mid().get(), MPFR_RNDU);
    mpfr_sub(t.get(), b.mid().get(), lo.get(), MPFR_RNDU);
    mpfr_max(r.get(), r.get(), t.get(), MPFR_RNDU);
    b.add_error(r.get());
    return b;
}

// log max(1, |z|) as a ball.
Ball log_max_one(const CBall& z) {
    mpfr_prec_t prec = z.prec();
    Ball m = cball_abs(z);
    Real lo = m.lower(), hi = m.upper();
    if (mpfr_cmp_ui(lo.get(), 1) >= 0) return ball_log(m);
    if (mpfr_cmp_ui(hi.get(), 1) <= 0) return Ball(0L, prec);
    Real up(prec);
    mpfr_log(up.get(), hi.get(), MPFR_RNDU);
    return ball_of_real_interval(Real(0.0, prec), up, prec);
}

// Is any proper factor of f a product over a subset of the certified roots?
// Returns true (reducible), false (irreducible); throws when undecided.
bool has_root_subset_factor(const Poly& f, const std::vector<CBall>& roots) {
    std::size_t d = roots.size();
    mpfr_prec_t prec = roots[0].prec();
    auto lead_divs = positive_divisors(f.back());
    for (u64 mask = 1; mask + 1 < (u64{1} << d); ++mask) {
        std::size_t k = std::popcount(mask);
        if (2 * k > d) continue;
        // monic product over the subset, low to high
        std::vector<CBall> g{CBall(Ball(1L, prec), Ball(prec))};
        for (std::size_t i = 0; i < d; ++i) {
            if (!(mask >> i & 1)) continue;
            std::vector<CBall> h(g.size() + 1, CBall(prec));
            for (std::size_t t = 0; t < g.size(); ++t) {
                h[t + 1] = h[t + 1] + g[t];
                CBall prod = g[t] * roots[i];
                h[t] = h[t] - prod;
            }
            g = std::move(h);
        }
        for (const auto& b : lead_divs) {
            Poly cand(g.size());
            bool possible = true, ambiguous = false;
            for (std::size_t t = 0; t < g.size() && possible; ++t) {
                CBall c = g[t] * b;
                if (!c.im.contains_zero()) { possible = false; break; }
                mpz_class lo, hi;
                mpfr_get_z(lo.get_mpz_t(), c.re.lower().get(), MPFR_RNDU);
                mpfr_get_z(hi.get_mpz_t(), c.re.upper().get(), MPFR_RNDD);
                if (lo > hi) { possible = false; break; }
                if (lo < hi) ambiguous = true;
                cand[t] = lo;
            }
            if (!possible) continue;
            if (ambiguous) fail(ErrorKind::precision_exhausted, "root enclosures too wide to decide irreducibility");
            if (divides(cand, f)) return true;
        }
    }
    return false;
}

BoundValue h_from_ball(const Ball& b) {
    Real slack(64);
    mpfr_mul_2ui(slack.get(), b.rad().get(), 1, MPFR_RNDU);
    Real lo = b.lower();
    Real v(P);
    mpfr_set(v.get(), lo.get(), MPFR_RNDD);
    return BoundValue::from_h(std::move(v), std::move(slack));
}

BoundValue neg_log_from_ball(const Ball& b) {
    Real slack(64);
    mpfr_mul_2ui(slack.get(), b.rad().get(), 1, MPFR_RNDU);
    Real hi = b.upper();
    Real v(P);
    mpfr_set(v.get(), hi.get(), MPFR_RNDU);
    return BoundValue::from_neg_log(std::move(v), std::move(slack));
}

// Relative rounding slack for values assembled with directed rounding.
Real rounding_slack(const Real& v) {
    Real s(64);
    mpfr_abs(s.get(), v.get(), MPFR_RNDU);
    mpfr_mul_2si(s.get(), s.get(), -static_cast<long>(P) + 16, MPFR_RNDU);
    return s;
}

}  // namespace

// ---- analytic lemmas --------------------------------------------------------

double habegger_c(u64 p) {
    require(p >= 5, "habegger_c needs p >= 5");
    double pd = static_cast<double>(p);
    return std::log(pd) / (10.0 * std::pow(pd, 8));
}

double mignotte_sum_bound(double eps, u64 d, double h) {
    require(eps > 0 && eps < 0.5, "epsilon must lie in (0, 1/2)");
    require(d >= 2, "degree must be at least 2");
    require(h >= 0, "height must be non-negative");
    double dd = static_cast<double>(d);
    return 2 * (eps * std::fabs(std::log(eps)) + std::fabs(std::log1p(-eps))) + 2 / (eps * dd) * std::log(dd) +
           (1 + 1 / eps) * h;
}

double entropy_term(double x) {
    require(x > 0 && x < 1, "x must lie in (0, 1)");
    return -2 * (x * std::log(x) + std::log1p(-x));
}

double aux_L1(double x) {
    require(x > 0 && x <= 0.5, "x must lie in (0, 1/2]");
    return -x * std::log(x) * (2 + 4 / std::log(2.0));
}

double aux_C1(double x, double gamma) {
    require(x > 0 && x <= 0.5, "x must lie in (0, 1/2]");
    require(gamma > 0 && gamma < 1, "gamma must lie in (0, 1)");
    return 8 * std::pow(x, 1 - gamma) / (gamma * std::exp(1.0));
}

double aux_L2(u64 d, double eta, double x) {
    require(d >= 16, "degree must be at least 16");
    require(eta > 0 && eta < 1, "eta must lie in (0, 1)");
    require(x > dobrowolski_floor(d), "x must exceed the degree floor");
    return 19 / std::pow(eta, 4) * std::pow(x, 1 - eta);
}

double sum_bound_explicit(double delta, double h) {
    require(delta > 0 && delta < 0.5, "delta must lie in (0, 1/2)");
    require(h >= 0 && h <= 0.25, "need 0 <= h and sqrt(h) <= 1/2");
    return 40 / std::pow(delta, 4) * std::pow(h, 0.5 - delta);
}

double dobrowolski_floor(u64 d) {
    require(d >= 16, "degree floor needs d >= 16");
    double dd = static_cast<double>(d);
    double r = std::log(std::log(dd)) / std::log(dd);
    return r * r * r / (4 * dd);
}

// ---- samples ------------------------------------------------------------------

std::vector<CBall> certified_roots(const Poly& coeffs_in, mpfr_prec_t prec) {
    Poly f = coeffs_in;
    trim(f);
    require(f.size() >= 2, "constant polynomial has no roots");
    std::size_t d = f.size() - 1;
    if (d == 1) {
        mpq_class r(-f[0], f[1]);
        r.canonicalize();
        return {CBall(Ball(r, prec), Ball(prec))};
    }
    auto approx = aberth_ld(f);
    for (int attempt = 0; attempt < 4; ++attempt, prec *= 2) {
        std::vector<CBall> z;
        for (const auto& a : approx) {
            CBall c(prec);
            mpfr_set_ld(c.re.mid().get(), a.real(), MPFR_RNDN);
            mpfr_set_ld(c.im.mid().get(), a.imag(), MPFR_RNDN);
            z.push_back(c);
        }
        for (int sweep = 0; sweep < 3 + attempt; ++sweep) aberth_mp(f, z);

        // radii d |W_i|, W_i = F(z_i) / (a_d prod (z_i - z_j))
        std::vector<Real> rad;
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            CBall den(Ball(f[d], prec), Ball(prec));
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) den = den * (z[i] - z[j]);
            if (den.contains_zero()) { ok = false; break; }
            CBall w = horner(f, z[i]) / den;
            Real r = w.abs_upper();
            mpfr_mul_ui(r.get(), r.get(), d, MPFR_RNDU);
            rad.push_back(std::move(r));
        }
        for (std::size_t i = 0; i < d && ok; ++i)
            for (std::size_t j = i + 1; j < d && ok; ++j) {
                Real gap = (z[i] - z[j]).abs_lower();
                Real sum(64);
                mpfr_add(sum.get(), rad[i].get(), rad[j].get(), MPFR_RNDU);
                ok = mpfr_cmp(gap.get(), sum.get()) > 0;
            }
        if (!ok) {
            for (std::size_t i = 0; i < d; ++i)
                approx[i] = {mpfr_get_ld(z[i].re.mid().get(), MPFR_RNDN), mpfr_get_ld(z[i].im.mid().get(), MPFR_RNDN)};
            continue;
        }
        for (std::size_t i = 0; i < d; ++i) {
            z[i].re.add_error(rad[i].get());
            z[i].im.add_error(rad[i].get());
        }
        return z;
    }
    fail(ErrorKind::precision_exhausted, "could not separate the roots");
}

bool divides_x_pow_minus_one(const Poly& coeffs_in, unsigned kmax) {
    Poly f = coeffs_in;
    trim(f);
    std::size_t d = f.size() - 1;
    if (d == 0 || abs(f[d]) != 1) return false;
    if (f[d] < 0)
        for (auto& c : f) c = -c;
    // r = x^k mod f, kept as d coefficients
    Poly r(d, 0);
    if (d == 1) {
        // x mod (x - c) = c
        mpz_class c = -f[0], pk = 1;
        for (unsigned k = 1; k <= kmax; ++k) {
            pk *= c;
            if (pk == 1) return true;
        }
        return false;
    }
    r[1] = 1;
    for (unsigned k = 1; k <= kmax; ++k) {
        if (k > 1) {
            // multiply by x and reduce by the monic f
            mpz_class top = r[d - 1];
            for (std::size_t i = d - 1; i > 0; --i) r[i] = r[i - 1] - top * f[i];
            r[0] = -top * f[0];
        }
        bool one = r[0] == 1;
        for (std::size_t i = 1; i < d && one; ++i) one = r[i] == 0;
        if (one) return true;
    }
    return false;
}

AlgebraicSample AlgebraicSample::from_polynomial(Poly f, mpfr_prec_t prec) {
    trim(f);
    require(f.size() >= 2, "a sample needs degree at least 1");
    if (f.back() < 0)
        for (auto& c : f) c = -c;
    mpz_class g = content(f);
    for (auto& c : f) c /= g;
    std::size_t d = f.size() - 1;
    require(f[0] != 0, "zero is excluded");
    require(!(d == 1 && f[0] == -f[1]), "one is excluded");
    require(!divides_x_pow_minus_one(f), "roots of unity are excluded");

    AlgebraicSample s;
    s.coeffs = f;
    s.roots = certified_roots(f, prec);

    if (d == 1) {
        s.proof = IrreducibilityProof::linear;
    } else if (is_eisenstein(f)) {
        s.proof = IrreducibilityProof::eisenstein;
    } else if (d <= 8) {
        require(!has_root_subset_factor(f, s.roots), "polynomial is reducible");
        s.proof = IrreducibilityProof::root_subsets;
    } else {
        fail(ErrorKind::unsupported, "irreducibility undecided above degree 8 without an Eisenstein prime");
    }

    bool palindromic = true;
    for (std::size_t i = 0; i <= d && palindromic; ++i) palindromic = f[i] == f[d - i];
    if (palindromic) {
        bool on_circle = true;
        for (const auto& r : s.roots) {
            Ball m = cball_abs(r);
            if (!m.contains(1)) on_circle = false;
        }
        require(!on_circle, "palindromic with every root on the unit circle");
    }

    mpfr_prec_t wp = s.roots[0].prec();
    Ball sum = ball_log(Ball(f[d], wp));
    for (const auto& r : s.roots) sum = sum + log_max_one(r);
    s.height = sum / Ball(static_cast<long>(d), wp);
    return s;
}

AlgebraicSample random_sample(std::mt19937_64& rng, unsigned dmin, unsigned dmax, long bound) {
    require(dmin >= 1 && dmin <= dmax && bound >= 1, "bad sampling range");
    std::uniform_int_distribution<unsigned> deg(dmin, dmax);
    std::uniform_int_distribution<long> coef(-bound, bound);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        unsigned d = deg(rng);
        Poly f(d + 1);
        for (auto& c : f) c = coef(rng);
        if (f[d] == 0 || f[0] == 0) continue;
        try {
            return AlgebraicSample::from_polynomial(f);
        } catch (const Error&) {
        }
    }
    fail(ErrorKind::effort_exhausted, "no acceptable random sample found");
}

AlgebraicSample random_eisenstein_sample(std::mt19937_64& rng, unsigned d) {
    require(d >= 2, "degree must be at least 2");
    std::uniform_int_distribution<int> tri(-1, 1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Poly f(d + 1);
        f[d] = 1;
        for (unsigned i = 1; i < d; ++i) f[i] = 2 * tri(rng);
        f[0] = (rng() & 1) ? 2 : -2;
        try {
            return AlgebraicSample::from_polynomial(f);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::precision_exhausted) throw;
        }
    }
    fail(ErrorKind::effort_exhausted, "no separable Eisenstein sample found");
}

Ball sum_oracle(const AlgebraicSample& s) {
    mpfr_prec_t wp = s.roots[0].prec();
    Ball sum(wp);
    for (const auto& r : s.roots) {
        CBall c = r;
        c.re = c.re - Ball(1L, wp);
        Ball m = cball_abs(c);
        if (!m.is_positive()) fail(ErrorKind::precision_exhausted, "root enclosure touches 1");
        sum = sum + ball_log(m);
    }
    return sum / Ball(static_cast<long>(s.degree()), wp);
}

Ball sum_identity(const AlgebraicSample& s) {
    mpz_class f1 = 0;
    for (const auto& c : s.coeffs) f1 += c;
    require(f1 != 0, "1 is a root");
    mpfr_prec_t wp = s.roots[0].prec();
    mpq_class r(abs(f1), s.coeffs.back());
    r.canonicalize();
    return ball_log(Ball(r, wp)) / Ball(static_cast<long>(s.degree()), wp);
}

// ---- height bounds ------------------------------------------------------------

BoundValue main_height_bound(u64 p, CurveClass cls, int k) {
    require(p >= 5, "the main bound needs p >= 5");
    switch (cls) {
        case CurveClass::cm: {
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 3, 14);
            return BoundValue::exact(mpq_class(1, den));
        }
        case CurveClass::small_degree: {
            mpz_class den, p4;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, 15);
            mpz_ui_pow_ui(p4.get_mpz_t(), p, 4);
            mpq_class v(6, den * p4);
            v.canonicalize();
            return BoundValue::exact(v);
        }
        case CurveClass::non_cm: break;
    }
    require(k >= 0 && k <= 1000, "constant exponent out of range");
    Ball lp = ball_log(Ball(mpz_class(static_cast<unsigned long>(p)), P));
    Ball num = lp * lp;
    num = num * num * lp;
    mpz_class den, p44;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(k));
    mpz_ui_pow_ui(p44.get_mpz_t(), p, 44);
    Ball h = num / Ball(mpz_class(den * p44), P);
    return h_from_ball(h).normalized();
}

namespace {

// theta bound for thresholds that may exceed 64 bits.
Real theta_for(const mpz_class& n, arith::ThetaKind& kind) {
    if (n.fits_ulong_p()) return ssearch::theta_upper(n.get_ui(), &kind);
    kind = arith::ThetaKind::upper_bound;
    Real v(n, P, MPFR_RNDU);
    Real c = Real::from_string("1.01624", P, MPFR_RNDU);
    mpfr_mul(v.get(), v.get(), c.get(), MPFR_RNDU);
    return v;
}

// ceil(10^7 max{985, cap/12 + 3}^e) for e = 2 (squared) or 1.
mpz_class surjective_n(const Real& cap, SurjectivityThreshold t) {
    Real m(P);
    mpfr_div_ui(m.get(), cap.get(), 12, MPFR_RNDU);
    mpfr_add_ui(m.get(), m.get(), 3, MPFR_RNDU);
    if (mpfr_cmp_ui(m.get(), 985) < 0) mpfr_set_ui(m.get(), 985, MPFR_RNDN);
    if (t == SurjectivityThreshold::squared) mpfr_sqr(m.get(), m.get(), MPFR_RNDU);
    mpfr_mul_ui(m.get(), m.get(), 10'000'000, MPFR_RNDU);
    mpz_class n;
    mpfr_get_z(n.get_mpz_t(), m.get(), MPFR_RNDU);
    return n;
}

// c N log N rounded up.
Real n_log_n(u64 N, unsigned c) {
    Real v = ln_u(N, MPFR_RNDU);
    mpfr_mul_ui(v.get(), v.get(), N, MPFR_RNDU);
    mpfr_mul_ui(v.get(), v.get(), c, MPFR_RNDU);
    return v;
}

// Bound encoding -ln h = 44 ln E + K (K >= 0 given rounded up).
BoundValue from_product(const Magnitude& E, const Real& K) {
    Real v(P), t(P), ln44(P);
    mpfr_set_ui(t.get(), 44, MPFR_RNDN);
    mpfr_log(ln44.get(), t.get(), MPFR_RNDU);
    if (E.level() < 2) {
        Real lnE = E.log();
        mpfr_mul_ui(v.get(), lnE.get(), 44, MPFR_RNDU);
        mpfr_add(v.get(), v.get(), K.get(), MPFR_RNDU);
        Real s = rounding_slack(v);
        return BoundValue::from_neg_log(std::move(v), std::move(s)).normalized();
    }
    // ln(44 ln E + K) = w + log1p(K e^-w), w = ln 44 + ln ln E
    mpfr_add(v.get(), ln44.get(), E.value().get(), MPFR_RNDU);
    if (mpfr_sgn(K.get()) > 0) {
        mpfr_log(t.get(), K.get(), MPFR_RNDU);
        mpfr_sub(t.get(), t.get(), v.get(), MPFR_RNDU);
        mpfr_exp(t.get(), t.get(), MPFR_RNDU);
        mpfr_log1p(t.get(), t.get(), MPFR_RNDU);
        mpfr_add(v.get(), v.get(), t.get(), MPFR_RNDU);
    }
    Real s = rounding_slack(v);
    return BoundValue::from_log_neg_log(std::move(v), std::move(s));
}

}  // namespace

ConductorBound conductor_height_bound(const ConductorBoundInput& in) {
    require(in.N >= 11, "conductor must be at least 11");
    const u64 N = in.N;
    ConductorBound out;
    Real zero(P);

    switch (in.mode) {
        case ConductorMode::explicit_bound: {
            out.n = surjective_n(n_log_n(N, 10), in.threshold);
            out.theta = theta_for(out.n, out.theta_kind);
            Real ln_c = Real::from_string("2.5e9", P, MPFR_RNDU);
            mpfr_log(ln_c.get(), ln_c.get(), MPFR_RNDU);
            Real ln_t = ln_u(N, MPFR_RNDU);
            mpfr_log(ln_t.get(), ln_t.get(), MPFR_RNDU);
            out.product = ssearch::elkies_product_magnitude(ln_c, N, out.theta, ln_t);
            out.bound = from_product(*out.product, zero);
            return out;
        }
        case ConductorMode::semistable: {
            require(in.j.has_value(), "semistable mode needs the j-invariant for B_E");
            Real be = curve::b_e_threshold(*in.j, P);
            mpz_class n;
            mpfr_get_z(n.get_mpz_t(), be.get(), MPFR_RNDU);
            out.n = std::max(mpz_class(11), n);
            out.theta = theta_for(out.n, out.theta_kind);
            Real ln_c = Real::from_string("2.5e9", P, MPFR_RNDU);
            mpfr_log(ln_c.get(), ln_c.get(), MPFR_RNDU);
            Real ln_t = n_log_n(N, 1);
            mpfr_log(ln_t.get(), ln_t.get(), MPFR_RNDU);
            out.product = ssearch::elkies_product_magnitude(ln_c, N, out.theta, ln_t);
            // K = k ln 10 - 5 ln ln 11
            require(in.constant_exponent >= 0 && in.constant_exponent <= 1000, "constant exponent out of range");
            Real K = ln_u(10, MPFR_RNDU), t = ln_u(11, MPFR_RNDD);
            mpfr_mul_ui(K.get(), K.get(), static_cast<unsigned long>(in.constant_exponent), MPFR_RNDU);
            mpfr_log(t.get(), t.get(), MPFR_RNDD);
            mpfr_mul_ui(t.get(), t.get(), 5, MPFR_RNDD);
            mpfr_sub(K.get(), K.get(), t.get(), MPFR_RNDU);
            if (mpfr_sgn(K.get()) < 0) {
                // a tiny exponent makes the prefactor exceed 1; fold it into level 1
                Real lnE = out.product->log();
                Real v(P);
                mpfr_mul_ui(v.get(), lnE.get(), 44, MPFR_RNDU);
                mpfr_add(v.get(), v.get(), K.get(), MPFR_RNDU);
                Real s = rounding_slack(v);
                out.bound = BoundValue::from_neg_log(std::move(v), std::move(s)).normalized();
            } else {
                out.bound = from_product(*out.product, K);
            }
            return out;
        }
        case ConductorMode::effective: {
            require(in.c > 0, "the constant c must be positive");
            u64 rad = arith::radical(6 * N);
            out.q = mpz_class(static_cast<unsigned long>(rad)) * 4;
            Real hj = in.h_j ? *in.h_j : n_log_n(N, 10);
            Ball q(out.q, P), h(P);
            mpfr_set(h.mid().get(), hj.get(), MPFR_RNDU);
            Ball lq = ball_log(q);
            // -ln h = -ln c - 5 ln ln(q log q h_j) + 44 (2.5 ln q + 2 ln ln q + ln h_j)
            Ball inner = ball_log(q * lq * h);
            Ball five_lnln = ball_log(inner) * 5L;
            Ball lin = lq * 5L / Ball(2L, P) + ball_log(lq) * 2L + ball_log(h);
            Ball c(P);
            mpfr_set_d(c.mid().get(), in.c, MPFR_RNDN);
            Ball v = lin * 44L - five_lnln - ball_log(c);
            out.bound = neg_log_from_ball(v).normalized();
            return out;
        }
        case ConductorMode::intro: {
            out.n = surjective_n(n_log_n(N, 18), in.threshold);
            out.theta = theta_for(out.n, out.theta_kind);
            // ln(-ln h) = ln 44 + ln N + theta + 6 ln L + log1p(ln(18 N log N) / (N e^theta L^6))
            Real L = ln_u(8 * N, MPFR_RNDU);
            mpfr_add(L.get(), L.get(), out.theta.get(), MPFR_RNDU);
            Real main(P), t(P);
            mpfr_log(t.get(), L.get(), MPFR_RNDU);
            mpfr_mul_ui(main.get(), t.get(), 6, MPFR_RNDU);
            mpfr_add(main.get(), main.get(), out.theta.get(), MPFR_RNDU);
            Real lnN = ln_u(N, MPFR_RNDU);
            mpfr_add(main.get(), main.get(), lnN.get(), MPFR_RNDU);
            Real tail = n_log_n(N, 18);
            mpfr_log(tail.get(), tail.get(), MPFR_RNDU);
            mpfr_log(tail.get(), tail.get(), MPFR_RNDU);
            mpfr_sub(tail.get(), tail.get(), main.get(), MPFR_RNDU);
            mpfr_exp(tail.get(), tail.get(), MPFR_RNDU);
            mpfr_log1p(tail.get(), tail.get(), MPFR_RNDU);
            Real v = ln_u(44, MPFR_RNDU);
            mpfr_add(v.get(), v.get(), main.get(), MPFR_RNDU);
            mpfr_add(v.get(), v.get(), tail.get(), MPFR_RNDU);
            Real s = rounding_slack(v);
            out.bound = BoundValue::from_log_neg_log(std::move(v), std::move(s));
            return out;
        }
    }
    fail(ErrorKind::invalid_argument, "unknown conductor mode");
}

PadicBound padic_height_bound(u64 p, u64 lambda) {
    require(p >= 2 && arith::is_prime(p), "p must be prime");
    require(lambda >= 1, "lambda must be positive");
    widen_mpfr_exponent_range();
    mpz_class p6;
    mpz_ui_pow_ui(p6.get_mpz_t(), p, 6);
    Ball lp = ball_log(Ball(mpz_class(static_cast<unsigned long>(p)), P));
    Ball B = lp * mpz_class(lambda) + lp;
    B = B / Ball(p6, P) - ball_log(Ball(2L, P));
    PadicBound out;
    if (B.is_positive()) {
        // -ln h = ln 2 + (lambda + 2) ln p - ln B
        Ball v = ball_log(Ball(2L, P)) + lp * mpz_class(lambda) + lp * 2L - ball_log(B);
        out.bound = neg_log_from_ball(v).normalized();
        out.informative = true;
        return out;
    }
    // value returned as-is: B / (2 p^(lambda + 2)), not a valid bound
    Real den(P), v(P);
    mpfr_ui_pow_ui(den.get(), p, lambda + 2, MPFR_RNDN);
    mpfr_mul_2ui(den.get(), den.get(), 1, MPFR_RNDN);
    mpfr_div(v.get(), B.mid().get(), den.get(), MPFR_RNDD);
    out.bound = BoundValue::from_h(std::move(v), Real(64));
    out.informative = false;
    return out;
}

PadicBound padic_corollary_bound(u64 p) {
    require(p >= 3 && arith::is_prime(p), "p must be an odd prime");
    Ball lp = ball_log(Ball(mpz_class(static_cast<unsigned long>(p)), P));
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), p, 6);
    e += 2;
    Ball half_p = ball_log(Ball(mpq_class(static_cast<long>(p), 2), P));
    Ball v = ball_log(Ball(2L, P)) + lp * e - ball_log(half_p);
    return {neg_log_from_ball(v).normalized(), true};
}

}  // namespace ssheight::bounds
