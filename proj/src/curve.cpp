#include "ssheight/curve.hpp"

#include "ssheight/arith.hpp"
#include "ssheight/error.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace ssheight::curve {

namespace {

using u64 = std::uint64_t;

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
        fail(ErrorKind::invalid_argument, "not a rational number: '" + s + "'");
    mpq_class c = q;
    c.canonicalize();
    if (c.get_den() == 0) fail(ErrorKind::invalid_argument, "zero denominator in '" + s + "'");
    return c;
}

struct BInvariants {
    mpq_class b2, b4, b6, b8;
};

template <class T>
BInvariants b_invariants(const T& a1, const T& a2, const T& a3, const T& a4, const T& a6) {
    BInvariants b;
    b.b2 = a1 * a1 + 4 * a2;
    b.b4 = 2 * a4 + a1 * a3;
    b.b6 = a3 * a3 + 4 * a6;
    b.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return b;
}

mpq_class delta_from_b(const BInvariants& b) {
    return -b.b2 * b.b2 * b.b8 - 8 * b.b4 * b.b4 * b.b4 - 27 * b.b6 * b.b6 + 9 * b.b2 * b.b4 * b.b6;
}

constexpr int weights[5] = {1, 2, 3, 4, 6};

bool integral_after_scaling(const std::array<mpq_class, 5>& a, const mpz_class& u) {
    for (int i = 0; i < 5; ++i) {
        mpz_class ui;
        mpz_pow_ui(ui.get_mpz_t(), u.get_mpz_t(), weights[i]);
        mpq_class s = a[i] * ui;
        s.canonicalize();
        if (s.get_den() != 1) return false;
    }
    return true;
}

bool is_twelfth_power(const mpz_class& z) {
    mpz_class r;
    return mpz_root(r.get_mpz_t(), z.get_mpz_t(), 12) != 0;
}

// Every rational CM j-invariant (class number one orders).
const char* const cm_j_invariants[] = {
    "0",          "1728",          "-3375",           "8000",          "-32768",
    "54000",      "287496",        "-884736",         "-12288000",     "16581375",
    "-884736000", "-147197952000", "-262537412640768000",
};

}  // namespace

WeierstrassModel WeierstrassModel::parse(const std::string& text) {
    WeierstrassModel m;
    std::stringstream ss(text);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
        if (k >= 5) fail(ErrorKind::invalid_argument, "curve needs exactly 5 coefficients");
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        m.a[k++] = parse_rational(b == std::string::npos ? std::string{} : item.substr(b, e - b + 1));
    }
    if (k != 5) fail(ErrorKind::invalid_argument, "curve needs exactly 5 coefficients a1,a2,a3,a4,a6");
    return m;
}

std::string WeierstrassModel::to_string() const {
    std::string out;
    for (int i = 0; i < 5; ++i) {
        if (i) out += ',';
        out += a[i].get_str();
    }
    return out;
}

mpq_class discriminant(const WeierstrassModel& m) {
    return delta_from_b(b_invariants(m.a1(), m.a2(), m.a3(), m.a4(), m.a6()));
}

Real rational_height(const mpq_class& x, mpfr_prec_t prec) {
    mpz_class num = abs(x.get_num());
    mpz_class big = num > x.get_den() ? num : mpz_class(x.get_den());
    Real r(prec);
    if (big == 0) return r;
    Real z(big, prec + 16);
    mpfr_log(r.get(), z.get(), MPFR_RNDN);
    return r;
}

CurveInvariants compute_invariants(const WeierstrassModel& m, u64 conductor) {
    if (conductor < 11)
        fail(ErrorKind::invalid_argument, "no elliptic curve over Q has conductor below 11");
    auto b = b_invariants(m.a1(), m.a2(), m.a3(), m.a4(), m.a6());
    CurveInvariants inv;
    inv.b2 = b.b2;
    inv.b4 = b.b4;
    inv.b6 = b.b6;
    inv.b8 = b.b8;
    inv.c4 = b.b2 * b.b2 - 24 * b.b4;
    inv.c6 = -b.b2 * b.b2 * b.b2 + 36 * b.b2 * b.b4 - 216 * b.b6;
    inv.delta = delta_from_b(b);
    if (inv.delta == 0) fail(ErrorKind::singular_model, "model is singular (discriminant 0)");
    inv.j = inv.c4 * inv.c4 * inv.c4 / inv.delta;
    inv.j.canonicalize();
    inv.conductor = conductor;
    Real h = rational_height(inv.j);
    Real log2(128);
    mpfr_const_log2(log2.get(), MPFR_RNDN);
    inv.h_j = mpfr_cmp(h.get(), log2.get()) > 0 ? h : log2;
    return inv;
}

IntegralModel integral_model(const WeierstrassModel& m) {
    mpz_class lcm_den = 1;
    for (const auto& c : m.a) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());

    mpz_class u = 1;
    mpz_class rest = lcm_den;
    for (unsigned long p = 2; p < 1'000'000 && rest > 1; ++p) {
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        unsigned long e = 0;
        for (int i = 0; i < 5; ++i) {
            unsigned long v = 0;
            mpz_class d(m.a[i].get_den());
            while (mpz_divisible_ui_p(d.get_mpz_t(), p)) {
                mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
                ++v;
            }
            e = std::max<unsigned long>(e, (v + weights[i] - 1) / weights[i]);
        }
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
        u *= pe;
    }
    // Unfactored cofactor: scale by it until integral (not necessarily least).
    while (rest > 1 && !integral_after_scaling(m.a, u)) u *= rest;

    IntegralModel out;
    out.u = u;
    for (int i = 0; i < 5; ++i) {
        mpz_class ui;
        mpz_pow_ui(ui.get_mpz_t(), u.get_mpz_t(), weights[i]);
        mpq_class s = m.a[i] * ui;
        s.canonicalize();
        out.a[i] = s.get_num();
    }
    auto b = b_invariants(out.a[0], out.a[1], out.a[2], out.a[3], out.a[4]);
    mpq_class d = delta_from_b(b);
    out.delta = d.get_num();
    if (out.delta == 0) fail(ErrorKind::singular_model, "model is singular (discriminant 0)");
    return out;
}

IntegralModel integral_model(const WeierstrassModel& model, const WeierstrassModel& reduction) {
    CurveInvariants a = compute_invariants(model, 11);
    CurveInvariants b = compute_invariants(reduction, 11);
    mpq_class ratio = b.delta / a.delta;
    ratio.canonicalize();
    if (a.j != b.j || ratio < 0 || !is_twelfth_power(ratio.get_num()) || !is_twelfth_power(ratio.get_den()))
        fail(ErrorKind::invalid_argument, "reduction model is not isomorphic to the curve over Q");
    return integral_model(reduction);
}

bool has_good_reduction(const IntegralModel& m, u64 p) {
    return mpz_fdiv_ui(m.delta.get_mpz_t(), p) != 0;
}

std::int64_t trace_of_frobenius(const IntegralModel& m, u64 p) {
    if (p < 3 || !arith::is_prime(p))
        fail(ErrorKind::invalid_argument, "trace_of_frobenius needs an odd prime, got " + std::to_string(p));
    if (p > (u64{1} << 32))
        fail(ErrorKind::unsupported, "naive point counting is limited to p < 2^32");
    if (!has_good_reduction(m, p))
        fail(ErrorKind::bad_reduction, "bad reduction at p = " + std::to_string(p));

    u64 a[5];
    for (int i = 0; i < 5; ++i) a[i] = mpz_fdiv_ui(m.a[i].get_mpz_t(), p);
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    const u64 b2 = (a[0] * a[0] + 4 * a[1]) % p;
    const u64 b4 = (2 * a[3] + a[0] * a[2]) % p;
    const u64 b6 = (a[2] * a[2] + 4 * a[4]) % p;
    const u64 c3 = 4 % p, c1 = (2 * b4) % p;

    std::vector<std::int8_t> chi(p, -1);
    chi[0] = 0;
    for (u64 x = 1; x <= p / 2; ++x) chi[x * x % p] = 1;

    std::int64_t sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 f = (c3 * x + b2) % p;
        f = (f * x + c1) % p;
        f = (f * x + b6) % p;
        sum += chi[f];
    }
    return -sum;
}

std::int64_t trace_of_frobenius(const WeierstrassModel& model, u64 p) {
    return trace_of_frobenius(integral_model(model), p);
}

bool is_supersingular(const IntegralModel& m, u64 p) {
    if (p < 5) fail(ErrorKind::unsupported, "supersingularity via a_p = 0 is only used for p >= 5");
    return trace_of_frobenius(m, p) == 0;
}

bool is_supersingular(const WeierstrassModel& model, u64 p) {
    if (p < 5) fail(ErrorKind::unsupported, "supersingularity via a_p = 0 is only used for p >= 5");
    return is_supersingular(integral_model(model), p);
}

Real b_e_threshold(const mpq_class& j, mpfr_prec_t prec) {
    Real out(prec);
    if (j == 0) return out;
    Real num(abs(j.get_num()), prec + 16), den(j.get_den(), prec + 16);
    Real lj(prec + 16), t(prec + 16);
    mpfr_log(lj.get(), num.get(), MPFR_RNDN);
    mpfr_log(t.get(), den.get(), MPFR_RNDN);
    mpfr_sub(lj.get(), lj.get(), t.get(), MPFR_RNDN);  // log |j|
    Real pi(prec + 16);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    if (j > 0) {
        mpfr_mul_2ui(pi.get(), pi.get(), 1, MPFR_RNDN);
        mpfr_div(t.get(), lj.get(), pi.get(), MPFR_RNDN);
    } else {
        mpfr_div(t.get(), lj.get(), pi.get(), MPFR_RNDN);
        mpfr_add_ui(t.get(), t.get(), 1, MPFR_RNDN);
    }
    mpfr_sqr(out.get(), t.get(), MPFR_RNDN);
    return out;
}

mpz_class surjectivity_threshold(const Real& h_j) {
    Real t(h_j.prec() + 32);
    mpfr_div_ui(t.get(), h_j.get(), 12, MPFR_RNDU);
    mpfr_add_ui(t.get(), t.get(), 3, MPFR_RNDU);
    if (mpfr_cmp_ui(t.get(), 985) < 0) mpfr_set_ui(t.get(), 985, MPFR_RNDN);
    mpfr_sqr(t.get(), t.get(), MPFR_RNDU);
    mpfr_mul_ui(t.get(), t.get(), 10'000'000, MPFR_RNDU);
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), t.get(), MPFR_RNDU);
    return out;
}

JHeightFromConductor j_height_from_conductor(u64 conductor) {
    if (conductor < 11)
        fail(ErrorKind::invalid_argument, "no elliptic curve over Q has conductor below 11");
    constexpr mpfr_prec_t P = 128;
    JHeightFromConductor out;
    Real N(static_cast<double>(conductor), P), logN(P), lll(P), t(P), pi(P);
    mpfr_set_ui(N.get(), conductor, MPFR_RNDN);
    mpfr_log(logN.get(), N.get(), MPFR_RNDN);
    mpfr_log(lll.get(), logN.get(), MPFR_RNDN);
    mpfr_log(lll.get(), lll.get(), MPFR_RNDN);  // may be negative for N < 16
    mpfr_const_pi(pi.get(), MPFR_RNDN);

    Real& h = out.h_e;
    mpfr_mul(h.get(), N.get(), logN.get(), MPFR_RNDN);
    mpfr_div_ui(h.get(), h.get(), 12, MPFR_RNDN);
    mpfr_mul(t.get(), N.get(), lll.get(), MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), 32, MPFR_RNDN);
    mpfr_add(h.get(), h.get(), t.get(), MPFR_RNDN);
    mpfr_div_ui(t.get(), N.get(), 18, MPFR_RNDN);
    mpfr_add(h.get(), h.get(), t.get(), MPFR_RNDN);
    mpfr_mul_2ui(t.get(), pi.get(), 1, MPFR_RNDN);
    mpfr_add(h.get(), h.get(), t.get(), MPFR_RNDN);
    mpfr_ui_div(t.get(), 163, pi.get(), MPFR_RNDN);
    mpfr_log(t.get(), t.get(), MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_add(h.get(), h.get(), t.get(), MPFR_RNDN);

    Real& full = out.full_chain;
    mpfr_mul_ui(full.get(), h.get(), 12, MPFR_RNDN);
    if (mpfr_cmp_ui(h.get(), 1) > 0) {
        mpfr_log(t.get(), h.get(), MPFR_RNDN);
        mpfr_mul_ui(t.get(), t.get(), 6, MPFR_RNDN);
        mpfr_add(full.get(), full.get(), t.get(), MPFR_RNDN);
    }
    Real c = Real::from_string("75.84", P);
    mpfr_add(full.get(), full.get(), c.get(), MPFR_RNDN);

    mpfr_mul(out.simplified.get(), N.get(), logN.get(), MPFR_RNDU);
    mpfr_mul_ui(out.simplified.get(), out.simplified.get(), 10, MPFR_RNDU);
    return out;
}

bool is_cm_j_invariant(const mpq_class& j) {
    for (const char* s : cm_j_invariants)
        if (j == mpq_class(s)) return true;
    return false;
}

}  // namespace ssheight::curve
