#include "ssheight/ssearch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

namespace ssheight::ssearch {

namespace {

using u64 = std::uint64_t;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// Smallest r in [1, p) with (r/p) = want.
u64 smallest_residue(u64 p, int want) {
    for (u64 r = 1; r < p; ++r)
        if (arith::legendre_symbol(static_cast<std::int64_t>(r), p) == want) return r;
    fail(ErrorKind::invalid_argument, "no residue with the requested symbol mod " + std::to_string(p));
}

Real ln_of(double x, mpfr_rnd_t rnd = MPFR_RNDU) {
    Real r(logscale_prec), t = Real::from_string(std::to_string(x), logscale_prec, rnd);
    mpfr_log(r.get(), t.get(), rnd);
    return r;
}

Real ln_of_u(u64 x, mpfr_rnd_t rnd = MPFR_RNDU) {
    Real r(logscale_prec), t(logscale_prec);
    mpfr_set_ui(t.get(), x, rnd);
    mpfr_log(r.get(), t.get(), rnd);
    return r;
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (Error& e) {
        if (e.stage().empty()) e.set_stage(stage);
        throw;
    }
}

}  // namespace

std::string_view to_string(Witness w) {
    switch (w) {
        case Witness::ell_itself: return "p = ell";
        case Witness::inert: return "legendre(p, ell) = -1";
        case Witness::direct_scan: return "direct scan";
    }
    return "unknown";
}

// ---- congruence ---------------------------------------------------------------

CongruenceSystem assemble_congruence(u64 N, u64 n, const arith::PrimeList& primes, const CongruenceOptions& opts) {
    if (N < 11) fail(ErrorKind::invalid_argument, "conductor must be at least 11");
    if (primes.limit < n) fail(ErrorKind::invalid_argument, "prime list does not reach n");
    double est_bits = std::log2(8.0 * double(N)) + arith::rosser_schoenfeld_theta * double(n) / M_LN2;
    if (est_bits > double(opts.max_modulus_bits))
        fail(ErrorKind::modulus_overflow,
             "modulus for n = " + std::to_string(n) + " needs about " + std::to_string(u64(est_bits)) +
                 " bits (cap " + std::to_string(opts.max_modulus_bits) +
                 "); the search is infeasible at this size, only the bound formulas can be evaluated");

    std::set<u64> conductor_primes;
    for (u64 p : arith::prime_divisors(6 * N))
        if (p != 2) conductor_primes.insert(p);
    std::set<u64> conditioned = conductor_primes;
    for (u64 p : primes.primes) {
        if (p > n) break;
        if (p != 2) conditioned.insert(p);
    }

    CongruenceSystem sys;
    std::vector<arith::Congruence> cs{{7, 8}};
    for (u64 p : conditioned) {
        // With l ≡ 3 mod 4, reciprocity gives (p/l) = (l/p) (-1)^((p-1)/2).
        int want = (p % 4 == 1) ? 1 : -1;
        LegendreCondition c;
        c.prime = p;
        c.required = 1;
        c.residue = smallest_residue(p, want);
        c.from_conductor = conductor_primes.count(p) > 0;
        c.from_threshold = p <= n;
        sys.conditions.push_back(c);
        cs.push_back({mpz_class(static_cast<unsigned long>(c.residue)), mpz_class(static_cast<unsigned long>(p))});
    }
    auto r = arith::crt_combine(cs);
    sys.a = r.residue;
    sys.q = r.modulus;
    if (mpz_sizeinbase(sys.q.get_mpz_t(), 2) > opts.max_modulus_bits)
        fail(ErrorKind::modulus_overflow, "modulus exceeds the configured bit cap");
    return sys;
}

CongruenceSystem assemble_congruence(u64 N, u64 n, const CongruenceOptions& opts) {
    double est_bits = std::log2(8.0 * double(std::max<u64>(N, 1))) + arith::rosser_schoenfeld_theta * double(n) / M_LN2;
    if (est_bits > double(opts.max_modulus_bits))
        fail(ErrorKind::modulus_overflow,
             "modulus for n = " + std::to_string(n) + " needs about " + std::to_string(u64(est_bits)) +
                 " bits (cap " + std::to_string(opts.max_modulus_bits) +
                 "); the search is infeasible at this size, only the bound formulas can be evaluated");
    return assemble_congruence(N, n, arith::primes_up_to(n), opts);
}

bool satisfies(const CongruenceSystem& sys, const mpz_class& ell) {
    if (sys.seven_mod_eight && mpz_fdiv_ui(ell.get_mpz_t(), 8) != 7) return false;
    for (const auto& c : sys.conditions)
        if (arith::legendre_symbol(mpz_class(static_cast<unsigned long>(c.prime)), ell) != c.required) return false;
    return true;
}

// ---- primes in progressions -----------------------------------------------------

Magnitude least_prime_cap(const mpz_class& q) {
    if (q < 3) fail(ErrorKind::invalid_argument, "cap needs q >= 3");
    if (q <= 600) return Magnitude(0, Real::from_string("7.94e9", logscale_prec, MPFR_RNDU));
    if (q <= 100000) {
        Real v = Real::from_string("4.81e12", logscale_prec, MPFR_RNDU);
        mpfr_div_z(v.get(), v.get(), q.get_mpz_t(), MPFR_RNDU);
        return Magnitude(0, std::move(v));
    }
    // ln x0 = 0.036 sqrt(q) (log q)^3
    Real lq(logscale_prec), qq(q, logscale_prec, MPFR_RNDU);
    mpfr_log(lq.get(), qq.get(), MPFR_RNDU);
    Real c = Real::from_string("0.036", logscale_prec, MPFR_RNDU);
    if (mpz_sizeinbase(q.get_mpz_t(), 2) < 1000) {
        Real v(logscale_prec), t(logscale_prec);
        mpfr_sqrt(v.get(), qq.get(), MPFR_RNDU);
        mpfr_pow_ui(t.get(), lq.get(), 3, MPFR_RNDU);
        mpfr_mul(v.get(), v.get(), t.get(), MPFR_RNDU);
        mpfr_mul(v.get(), v.get(), c.get(), MPFR_RNDU);
        return Magnitude::from_log(v);
    }
    // ln ln x0 = ln 0.036 + ln(q)/2 + 3 ln ln q
    Real v(logscale_prec), t(logscale_prec);
    mpfr_log(v.get(), c.get(), MPFR_RNDU);
    mpfr_div_2ui(t.get(), lq.get(), 1, MPFR_RNDU);
    mpfr_add(v.get(), v.get(), t.get(), MPFR_RNDU);
    mpfr_log(t.get(), lq.get(), MPFR_RNDU);
    mpfr_mul_ui(t.get(), t.get(), 3, MPFR_RNDU);
    mpfr_add(v.get(), v.get(), t.get(), MPFR_RNDU);
    return Magnitude::from_log_log(v);
}

ProgressionPrime find_prime_in_ap(const mpz_class& a, const mpz_class& q, const ScanOptions& opts) {
    if (q <= 0) fail(ErrorKind::invalid_argument, "modulus must be positive");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
    if (g != 1) fail(ErrorKind::invalid_argument, "residue and modulus are not coprime");
    ProgressionPrime out;
    mpz_class x = a % q;
    if (x < 0) x += q;
    if (x < opts.start) {
        // first term >= start
        mpz_class k = (opts.start - x + q - 1) / q;
        x += k * q;
    }
    for (u64 k = 0; k < opts.max_candidates; ++k, x += q) {
        ++out.candidates;
        if (arith::is_probable_prime(x)) {
            out.ell = x;
            if (q >= 3) {
                out.cap = least_prime_cap(q);
                Magnitude found(0, Real(x, logscale_prec, MPFR_RNDD));
                out.within_cap = found.compare(*out.cap) <= 0;
            }
            return out;
        }
    }
    fail(ErrorKind::effort_exhausted,
         "no prime among the first " + std::to_string(opts.max_candidates) + " progression terms");
}

// ---- N_l and extraction -----------------------------------------------------------

NumeratorResult numerator_N_ell(const mpq_class& j, u64 ell, const classpoly::ClassPolyOptions& opts) {
    if (ell < 7 || ell % 4 != 3 || !arith::is_prime(ell))
        fail(ErrorKind::invalid_argument, "l must be a prime >= 7 with l ≡ 3 mod 4");
    auto P = classpoly::hilbert_class_polynomial(ell, opts);
    auto P4 = classpoly::hilbert_class_polynomial(4 * ell, opts);
    mpq_class v = classpoly::evaluate_at_rational(P, j) * classpoly::evaluate_at_rational(P4, j);
    v.canonicalize();
    NumeratorResult out;
    out.value = -v.get_num();
    out.deg_l = P.degree();
    out.deg_4l = P4.degree();
    out.precision = std::max(P.precision, P4.precision);
    return out;
}

namespace {

bool certify_candidate(const curve::IntegralModel& model, u64 p, u64 ell, SupersingularCertificate& cert) {
    if (p < 5) return false;
    Witness w;
    if (p == ell) {
        w = Witness::ell_itself;
    } else if (arith::legendre_symbol(static_cast<std::int64_t>(p), ell) == -1) {
        w = Witness::inert;
    } else {
        return false;
    }
    if (!curve::has_good_reduction(model, p)) return false;
    if (p > (u64{1} << 32)) return false;  // beyond naive point counting
    std::int64_t ap = curve::trace_of_frobenius(model, p);
    if (ap != 0) return false;
    cert.p = p;
    cert.a_p = ap;
    cert.witness = w;
    cert.ell = ell;
    return true;
}

}  // namespace

SupersingularCertificate extract_supersingular(const curve::IntegralModel& model, const mpz_class& n_ell, u64 ell,
                                               u64 trial_bound) {
    if (n_ell <= 0) fail(ErrorKind::invalid_argument, "N_l must be positive");
    SupersingularCertificate cert;
    cert.n_ell = n_ell;
    cert.n_ell_digits = mpz_sizeinbase(n_ell.get_mpz_t(), 10);
    mpz_class rest = n_ell;
    auto primes = arith::primes_up_to(trial_bound);
    for (u64 p : primes.primes) {
        if (rest == 1) break;
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        if (certify_candidate(model, p, ell, cert)) return cert;
    }
    if (rest > 1 && arith::is_probable_prime(rest) && mpz_fits_ulong_p(rest.get_mpz_t()) &&
        certify_candidate(model, rest.get_ui(), ell, cert))
        return cert;
    throw ExtractionIncomplete(rest == 1 ? "N_l has no certified supersingular factor"
                                         : "no certified factor below the trial bound; cofactor has " +
                                               std::to_string(mpz_sizeinbase(rest.get_mpz_t(), 10)) + " digits",
                               rest);
}

bool validate(const curve::IntegralModel& model, const SupersingularCertificate& c) {
    if (c.p < 5 || !arith::is_prime(c.p) || !curve::has_good_reduction(model, c.p)) return false;
    if (curve::trace_of_frobenius(model, c.p) != 0 || c.a_p != 0) return false;
    switch (c.witness) {
        case Witness::direct_scan: return true;
        case Witness::ell_itself:
            if (!c.ell || *c.ell != c.p) return false;
            break;
        case Witness::inert:
            if (!c.ell || arith::legendre_symbol(static_cast<std::int64_t>(c.p), *c.ell) != -1) return false;
            break;
    }
    return c.n_ell && mpz_divisible_ui_p(c.n_ell->get_mpz_t(), c.p);
}

SupersingularCertificate search_supersingular_prime(const curve::WeierstrassModel& model,
                                                    const curve::CurveInvariants& inv, const SearchConfig& cfg) {
    if (cfg.cm || curve::is_cm_j_invariant(inv.j))
        throw Error(ErrorKind::cm_curve,
                    "curve has complex multiplication: use the CM bound 3^-14 instead of a supersingular prime",
                    "guard");
    auto model_z = staged("reduce", [&] { return curve::integral_model(model); });
    Real be = curve::b_e_threshold(inv.j);
    mpz_class be_ceil;
    mpfr_get_z(be_ceil.get_mpz_t(), be.get(), MPFR_RNDU);
    u64 n = std::max<u64>({11, cfg.min_prime, be_ceil.get_ui()});

    SupersingularCertificate cert;
    auto t0 = clock_type::now();
    if (cfg.mode == SearchConfig::Mode::direct) {
        u64 start = std::max<u64>(5, cfg.min_prime);
        for (u64 p = start; p <= cfg.direct_limit; ++p) {
            if (!arith::is_prime(p) || !curve::has_good_reduction(model_z, p)) continue;
            if (curve::trace_of_frobenius(model_z, p) == 0) {
                cert.p = p;
                cert.a_p = 0;
                cert.witness = Witness::direct_scan;
                cert.n = start;
                cert.config = cfg;
                cert.timings["scan"] = seconds_since(t0);
                return cert;
            }
        }
        throw Error(ErrorKind::effort_exhausted, "no supersingular prime below the direct-scan limit", "scan");
    }

    CongruenceOptions co;
    co.max_modulus_bits = cfg.max_modulus_bits;
    auto sys = staged("congruence", [&] { return assemble_congruence(inv.conductor, n, co); });
    cert.timings["congruence"] = seconds_since(t0);

    t0 = clock_type::now();
    ScanOptions so;
    so.max_candidates = cfg.max_candidates;
    // l > max(B_E, 7) makes P_l(j) > 0 > P_4l(j)
    so.start = std::max<u64>(8, be_ceil.get_ui() + 1);
    auto found = staged("progression", [&] { return find_prime_in_ap(sys, so); });
    cert.timings["progression"] = seconds_since(t0);
    if (!mpz_fits_ulong_p(found.ell.get_mpz_t()) || found.ell > mpz_class("4611686018427387903"))
        throw Error(ErrorKind::unsupported, "l = " + found.ell.get_str() + " is beyond desk-scale class polynomials",
                    "progression");
    u64 ell = found.ell.get_ui();

    t0 = clock_type::now();
    classpoly::ClassPolyOptions cpo;
    cpo.threads = cfg.threads;
    auto num = staged("numerator", [&] { return numerator_N_ell(inv.j, ell, cpo); });
    cert.timings["numerator"] = seconds_since(t0);
    if (num.value <= 0)
        throw Error(ErrorKind::invalid_argument, "N_l is not positive; l does not exceed B_E", "numerator");

    t0 = clock_type::now();
    auto ext = staged("extract", [&] { return extract_supersingular(model_z, num.value, ell, cfg.trial_bound); });
    ext.timings = cert.timings;
    ext.timings["extract"] = seconds_since(t0);
    ext.n = n;
    ext.q = sys.q;
    ext.a = sys.a;
    ext.config = cfg;
    return ext;
}

// ---- explicit bounds on log p -----------------------------------------------------

Real theta_upper(u64 n, arith::ThetaKind* kind) {
    arith::ThetaOptions to;
    to.prec = logscale_prec;
    to.exact_cap = 1'000'000;
    to.sieve_limit = 10'000'000;
    auto t = arith::chebyshev_theta(n, to);
    if (kind) *kind = t.kind;
    Real v(logscale_prec);
    mpfr_set(v.get(), t.value.get(), MPFR_RNDU);
    Real e(t.error_bound, 64);
    mpfr_add(v.get(), v.get(), e.get(), MPFR_RNDU);
    return v;
}

Magnitude elkies_product_magnitude(const Real& ln_c, u64 N, const Real& theta, const Real& ln_t) {
    const mpfr_prec_t P = logscale_prec;
    Real L = ln_of_u(8 * N);
    mpfr_add(L.get(), L.get(), theta.get(), MPFR_RNDU);
    Real lnL(P), t(P);
    mpfr_log(lnL.get(), L.get(), MPFR_RNDU);

    // R = ln C + ln N + theta + 6 ln L + ln T
    Real R(P);
    mpfr_set(R.get(), ln_c.get(), MPFR_RNDU);
    Real lnN = ln_of_u(N);
    mpfr_add(R.get(), R.get(), lnN.get(), MPFR_RNDU);
    mpfr_add(R.get(), R.get(), theta.get(), MPFR_RNDU);
    mpfr_mul_ui(t.get(), lnL.get(), 6, MPFR_RNDU);
    mpfr_add(R.get(), R.get(), t.get(), MPFR_RNDU);
    mpfr_add(R.get(), R.get(), ln_t.get(), MPFR_RNDU);

    // ln A = ln 0.018 + L/2 + 3 ln L
    Real c018 = Real::from_string("0.018", P, MPFR_RNDU);
    Real lnA(P);
    mpfr_log(lnA.get(), c018.get(), MPFR_RNDU);
    mpfr_div_2ui(t.get(), L.get(), 1, MPFR_RNDU);
    mpfr_add(lnA.get(), lnA.get(), t.get(), MPFR_RNDU);
    mpfr_mul_ui(t.get(), lnL.get(), 3, MPFR_RNDU);
    mpfr_add(lnA.get(), lnA.get(), t.get(), MPFR_RNDU);

    if (mpfr_cmp_ui(lnA.get(), 600) <= 0) {
        Real lnE(P);
        mpfr_exp(lnE.get(), lnA.get(), MPFR_RNDU);
        mpfr_add(lnE.get(), lnE.get(), R.get(), MPFR_RNDU);
        return Magnitude::from_log(lnE);
    }
    // ln ln E = ln A + log1p(R / A), R/A = exp(ln R - ln A)
    Real v(P);
    if (mpfr_sgn(R.get()) > 0) {
        mpfr_log(t.get(), R.get(), MPFR_RNDU);
        mpfr_sub(t.get(), t.get(), lnA.get(), MPFR_RNDU);
        mpfr_exp(t.get(), t.get(), MPFR_RNDU);
        mpfr_log1p(v.get(), t.get(), MPFR_RNDU);
    }
    mpfr_add(v.get(), v.get(), lnA.get(), MPFR_RNDU);
    return Magnitude::from_log_log(v);
}

LogBound ss_prime_log_bound(const LogBoundInput& in, LogBoundVariant variant) {
    if (in.N < 11) fail(ErrorKind::invalid_argument, "conductor must be at least 11");
    const mpfr_prec_t P = logscale_prec;
    LogBound out;
    if (variant == LogBoundVariant::effective) {
        if (in.q < 2) fail(ErrorKind::invalid_argument, "effective variant needs the modulus q >= 2");
        if (!(in.c > 0)) fail(ErrorKind::invalid_argument, "effective constant must be positive");
        // ln(log p) <= ln c + (5/2) ln q + 2 ln ln q + ln h_j
        Real q(in.q, P, MPFR_RNDU), lq(P), t(P), v = ln_of(in.c);
        mpfr_log(lq.get(), q.get(), MPFR_RNDU);
        mpfr_mul_ui(t.get(), lq.get(), 5, MPFR_RNDU);
        mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDU);
        mpfr_add(v.get(), v.get(), t.get(), MPFR_RNDU);
        mpfr_log(t.get(), lq.get(), MPFR_RNDU);
        mpfr_mul_2ui(t.get(), t.get(), 1, MPFR_RNDU);
        mpfr_add(v.get(), v.get(), t.get(), MPFR_RNDU);
        mpfr_log(t.get(), in.h_j.get(), MPFR_RNDU);
        mpfr_add(v.get(), v.get(), t.get(), MPFR_RNDU);
        out.log_p = Magnitude::from_log(v);
        out.n = in.n;
        return out;
    }

    Real ln_c(P), ln_t(P);
    if (variant == LogBoundVariant::boundp) {
        if (in.n < 11) fail(ErrorKind::invalid_argument, "threshold n must be at least 11");
        out.n = in.n;
        ln_c = ln_of(2.5e9);
        mpfr_log(ln_t.get(), in.h_j.get(), MPFR_RNDU);
    } else {
        // n = max(M, (6 N log N)^2), trailing factor N log N
        Real x(P), lnN = ln_of_u(in.N);
        mpfr_mul_ui(x.get(), lnN.get(), 6 * in.N, MPFR_RNDU);
        mpfr_sqr(x.get(), x.get(), MPFR_RNDU);
        mpz_class nz;
        mpfr_get_z(nz.get_mpz_t(), x.get(), MPFR_RNDU);
        if (!mpz_fits_ulong_p(nz.get_mpz_t())) fail(ErrorKind::unsupported, "threshold does not fit 64 bits");
        out.n = std::max<u64>(in.n, nz.get_ui());
        ln_c = ln_of(2.5e10);
        Real t(P);
        mpfr_log(t.get(), lnN.get(), MPFR_RNDU);
        mpfr_add(ln_t.get(), lnN.get(), t.get(), MPFR_RNDU);
    }
    out.theta = theta_upper(out.n, &out.theta_kind);
    out.log_p = elkies_product_magnitude(ln_c, in.N, out.theta, ln_t);
    return out;
}

}  // namespace ssheight::ssearch
