#include "ssheight/classpoly.hpp"

#include "ssheight/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <mutex>
#include <thread>

namespace ssheight::classpoly {

namespace {

using u64 = std::uint64_t;

// sigma_k(n) for n <= K, cached per thread and grown on demand.
struct DivisorSums {
    std::vector<mpz_class> s3, s5;

    void ensure(std::size_t K) {
        if (s3.size() > K) return;
        std::size_t old = s3.size();
        std::size_t n = std::max<std::size_t>(K + 1, 2 * old);
        s3.assign(n, 0);
        s5.assign(n, 0);
        for (std::size_t d = 1; d < n; ++d) {
            mpz_class d3 = mpz_class(static_cast<unsigned long>(d));
            d3 = d3 * d3 * d3;
            mpz_class d5 = d3 * static_cast<unsigned long>(d) * static_cast<unsigned long>(d);
            for (std::size_t m = d; m < n; m += d) {
                s3[m] += d3;
                s5[m] += d5;
            }
        }
    }
};

DivisorSums& divisor_sums() {
    thread_local DivisorSums cache;
    return cache;
}

// log2 of an upper bound on sum_{n>K} n^m r^n, given log2 r (< 0).
double tail_log2(std::size_t K, int m, double log2_r) {
    double k1 = double(K + 1);
    double rho_log2 = m * std::log2((k1 + 1) / k1) + log2_r;
    if (rho_log2 >= -1e-9) return INFINITY;
    double rho = std::exp2(rho_log2);
    return m * std::log2(k1) + k1 * log2_r - std::log2(1 - rho);
}

// Upper bound on the tail as an MPFR number (rounded up).
Real tail_bound(std::size_t K, int m, const Real& r) {
    // (K+1)^m r^(K+1) / (1 - ((K+2)/(K+1))^m r)
    const mpfr_prec_t p = 64;
    Real num(p), rho(p), t(p), one(p);
    mpfr_set_ui(num.get(), K + 1, MPFR_RNDU);
    mpfr_pow_ui(num.get(), num.get(), m, MPFR_RNDU);
    mpfr_pow_ui(t.get(), r.get(), K + 1, MPFR_RNDU);
    mpfr_mul(num.get(), num.get(), t.get(), MPFR_RNDU);
    mpfr_set_ui(rho.get(), K + 2, MPFR_RNDU);
    mpfr_div_ui(rho.get(), rho.get(), K + 1, MPFR_RNDU);
    mpfr_pow_ui(rho.get(), rho.get(), m, MPFR_RNDU);
    mpfr_mul(rho.get(), rho.get(), r.get(), MPFR_RNDU);
    mpfr_ui_sub(one.get(), 1, rho.get(), MPFR_RNDD);
    if (mpfr_sgn(one.get()) <= 0) fail(ErrorKind::precision_exhausted, "q-series tail does not converge");
    mpfr_div(num.get(), num.get(), one.get(), MPFR_RNDU);
    return num;
}

bool ambiguous(const QuadraticForm& f) { return f.b == 0 || f.b == f.a || f.a == f.c; }

std::vector<Ball> poly_mul(const std::vector<Ball>& x, const std::vector<Ball>& y, mpfr_prec_t prec) {
    std::vector<Ball> out(x.size() + y.size() - 1, Ball(prec));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < y.size(); ++k) out[i + k] = out[i + k] + x[i] * y[k];
    return out;
}

std::vector<Ball> poly_product(std::vector<std::vector<Ball>>& factors, std::size_t lo, std::size_t hi,
                               mpfr_prec_t prec) {
    if (hi - lo == 1) return factors[lo];
    std::size_t mid = (lo + hi) / 2;
    return poly_mul(poly_product(factors, lo, mid, prec), poly_product(factors, mid, hi, prec), prec);
}

mpfr_prec_t initial_precision(const std::vector<QuadraticForm>& forms, u64 D) {
    // log2 |j(tau)| ~ pi sqrt(D) / (a ln 2); the coefficient sizes are the
    // sum of these, and the worst q-series cancellation adds the largest.
    double total = 0, largest = 0;
    for (const auto& f : forms) {
        double bits = M_PI * std::sqrt(double(D)) / (double(f.a) * M_LN2);
        total += bits;
        largest = std::max(largest, bits);
    }
    return static_cast<mpfr_prec_t>(total + largest + double(forms.size()) + 64);
}

// Sturm helpers on integer polynomials, lowest degree first.
using ZPoly = std::vector<mpz_class>;

void trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive(ZPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g > 1)
        for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// Pseudo-remainder: lc(B)^(deg A - deg B + 1) A = Q B + R.
ZPoly pseudo_remainder(ZPoly A, const ZPoly& B) {
    const std::size_t db = B.size() - 1;
    const mpz_class& lb = B.back();
    int steps_left = static_cast<int>(A.size()) - static_cast<int>(db);
    while (A.size() >= B.size()) {
        mpz_class la = A.back();
        std::size_t shift = A.size() - B.size();
        for (auto& c : A) c *= lb;
        for (std::size_t i = 0; i <= db; ++i) A[i + shift] -= la * B[i];
        A.pop_back();
        trim(A);
        --steps_left;
    }
    // pad the multiplier up to exponent deg A - deg B + 1
    for (; steps_left > 0; --steps_left)
        for (auto& c : A) c *= lb;
    return A;
}

}  // namespace

bool is_valid_discriminant(u64 D) { return D > 0 && (D % 4 == 0 || D % 4 == 3); }

std::vector<QuadraticForm> reduced_forms(u64 D) {
    if (!is_valid_discriminant(D))
        fail(ErrorKind::invalid_argument, "-" + std::to_string(D) + " is not a discriminant");
    std::vector<QuadraticForm> out;
    const std::int64_t d = static_cast<std::int64_t>(D);
    for (std::int64_t a = 1; 3 * a * a <= d; ++a) {
        for (std::int64_t b = 0; b <= a; ++b) {
            if ((b & 1) != (d & 1)) continue;
            std::int64_t num = b * b + d;
            if (num % (4 * a)) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            out.push_back({a, b, c});
            if (b != 0 && b != a && a != c) out.push_back({a, -b, c});
        }
    }
    return out;
}

CBall form_root(const QuadraticForm& f, u64 D, mpfr_prec_t prec) {
    Ball re(mpq_class(-f.b, 2 * f.a), prec);
    Ball im = ball_sqrt(Ball(mpz_class(static_cast<unsigned long>(D)), prec)) / Ball(2 * f.a, prec);
    return CBall(std::move(re), std::move(im));
}

JEvaluation eval_j(const CBall& tau, mpfr_prec_t prec) {
    widen_mpfr_exponent_range();
    if (!tau.im.is_positive()) fail(ErrorKind::invalid_argument, "tau must lie in the upper half plane");
    const mpfr_prec_t wp = prec + 32;
    CBall t(tau.re, tau.im);
    Ball two_pi = ball_pi(wp) * 2L;
    Ball modulus = ball_exp(-(two_pi * t.im));
    Ball angle = two_pi * t.re;
    CBall q(modulus * ball_cos(angle), modulus * ball_sin(angle));

    Real r = q.abs_upper();
    Real lr(64);
    mpfr_log2(lr.get(), r.get(), MPFR_RNDU);
    double log2_r = lr.to_double(MPFR_RNDU);
    if (!(log2_r < std::log2(0.999)))
        fail(ErrorKind::invalid_argument, "|q| too close to 1; reduce tau first");

    // smallest K with both tails far below the target accuracy
    const double target = -double(wp) - 16;
    std::size_t K = 1;
    while (tail_log2(K, 5, log2_r) + 11 > target || tail_log2(K, 3, log2_r) + 10 > target) {
        K = K < 64 ? K + 1 : K + K / 8;
    }
    auto& sig = divisor_sums();
    sig.ensure(K);

    CBall s3(wp), s5(wp);
    CBall qn = q;
    for (std::size_t n = 1; n <= K; ++n) {
        s3 = s3 + qn * sig.s3[n];
        s5 = s5 + qn * sig.s5[n];
        if (n < K) qn = qn * q;
    }
    // sigma_3(n) <= zeta(3) n^3 < 2 n^3, sigma_5(n) < 2 n^5
    Real t3 = tail_bound(K, 3, r), t5 = tail_bound(K, 5, r);
    mpfr_mul_ui(t3.get(), t3.get(), 2, MPFR_RNDU);
    mpfr_mul_ui(t5.get(), t5.get(), 2, MPFR_RNDU);
    s3.re.add_error(t3.get());
    s3.im.add_error(t3.get());
    s5.re.add_error(t5.get());
    s5.im.add_error(t5.get());

    CBall one(Ball(1L, wp), Ball(wp));
    CBall e4 = one + s3 * mpz_class(240);
    CBall e6 = one - s5 * mpz_class(504);
    CBall e4c = e4 * e4 * e4;
    CBall den = e4c - e6 * e6;
    if (den.contains_zero())
        fail(ErrorKind::precision_exhausted, "E4^3 - E6^2 not separated from zero");
    CBall j = (e4c * mpz_class(1728)) / den;
    return {std::move(j), K};
}

ClassPolynomial hilbert_class_polynomial(u64 D, const ClassPolyOptions& opts) {
    auto forms = reduced_forms(D);
    ClassPolynomial out;
    out.D = D;
    mpfr_prec_t prec = initial_precision(forms, D);

    for (;;) {
        if (prec > opts.max_prec)
            fail(ErrorKind::precision_exhausted,
                 "class polynomial for D=" + std::to_string(D) + " needs more than " +
                     std::to_string(opts.max_prec) + " bits");
        try {
            // One factor per class or conjugate pair.
            std::vector<std::size_t> reps;
            for (std::size_t i = 0; i < forms.size(); ++i)
                if (forms[i].b >= 0) reps.push_back(i);
            std::vector<std::vector<Ball>> factors(reps.size());
            auto work = [&](std::size_t k) {
                widen_mpfr_exponent_range();
                const auto& f = forms[reps[k]];
                CBall j = eval_j(form_root(f, D, prec), prec).value;
                if (ambiguous(f)) {
                    factors[k] = {-j.re, Ball(1L, prec)};
                } else {
                    Ball norm = j.re * j.re + j.im * j.im;
                    factors[k] = {norm, -(j.re * 2L), Ball(1L, prec)};
                }
            };
            unsigned nthreads = std::max(1u, std::min<unsigned>(opts.threads, reps.size()));
            if (nthreads == 1) {
                for (std::size_t k = 0; k < reps.size(); ++k) work(k);
            } else {
                std::vector<std::thread> pool;
                std::exception_ptr err;
                std::mutex err_mu;
                for (unsigned t = 0; t < nthreads; ++t) {
                    pool.emplace_back([&, t] {
                        try {
                            for (std::size_t k = t; k < reps.size(); k += nthreads) work(k);
                        } catch (...) {
                            std::lock_guard lk(err_mu);
                            if (!err) err = std::current_exception();
                        }
                    });
                }
                for (auto& th : pool) th.join();
                if (err) std::rethrow_exception(err);
            }
            auto prod = poly_product(factors, 0, factors.size(), prec);
            std::vector<mpz_class> coeffs(prod.size());
            bool ok = true;
            for (std::size_t i = 0; i < prod.size() && ok; ++i) ok = prod[i].unique_integer(coeffs[i]);
            if (ok) {
                out.coeffs = std::move(coeffs);
                out.precision = prec;
                return out;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::precision_exhausted) throw;
        }
        prec *= 2;
    }
}

mpq_class evaluate_at_rational(std::span<const mpz_class> coeffs, const mpq_class& x) {
    if (coeffs.empty()) return 0;
    const mpz_class& n = x.get_num();
    const mpz_class& d = x.get_den();
    // sum c_i n^i d^(deg - i), then divide by d^deg
    mpz_class acc = coeffs.back(), pw = 1;
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
        pw *= d;
        acc = acc * n + coeffs[i] * pw;
    }
    mpq_class r(acc, pw);
    r.canonicalize();
    return r;
}

int count_real_roots(std::span<const mpz_class> coeffs) {
    ZPoly f(coeffs.begin(), coeffs.end());
    trim(f);
    if (f.size() <= 1) return 0;
    ZPoly df(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) df[i - 1] = f[i] * static_cast<unsigned long>(i);

    std::vector<ZPoly> seq{f, df};
    make_primitive(seq[1]);
    while (seq.back().size() > 1) {
        const ZPoly& A = seq[seq.size() - 2];
        const ZPoly& B = seq.back();
        ZPoly R = pseudo_remainder(A, B);
        if (R.empty()) break;
        // Sturm wants -rem(A, B); prem scales by lc(B)^(deg A - deg B + 1).
        int e = static_cast<int>(A.size() - B.size()) + 1;
        int s = (sgn(B.back()) < 0 && (e & 1)) ? 1 : -1;
        if (s < 0)
            for (auto& c : R) c = -c;
        make_primitive(R);
        seq.push_back(std::move(R));
    }
    auto changes = [](const std::vector<int>& signs) {
        int v = 0, last = 0;
        for (int s : signs) {
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    std::vector<int> at_pos, at_neg;
    for (const auto& p : seq) {
        int s = sgn(p.back());
        at_pos.push_back(s);
        at_neg.push_back(((p.size() - 1) & 1) ? -s : s);
    }
    return changes(at_neg) - changes(at_pos);
}

}  // namespace ssheight::classpoly
