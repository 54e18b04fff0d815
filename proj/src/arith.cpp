#include "ssheight/arith.hpp"

#include "ssheight/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ssheight::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool mr_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

constexpr u64 small_primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

mpz_class product_range(std::span<const u64> v) {
    if (v.empty()) return 1;
    if (v.size() <= 16) {
        mpz_class r = 1;
        for (u64 x : v) mpz_mul_ui(r.get_mpz_t(), r.get_mpz_t(), x);
        return r;
    }
    auto half = v.size() / 2;
    return product_range(v.first(half)) * product_range(v.subspan(half));
}

}  // namespace

PrimeList primes_up_to(u64 limit) {
    PrimeList out;
    out.limit = limit;
    if (limit < 2) return out;
    // odd-only sieve: index i <-> 2i + 1
    const u64 half = (limit - 1) / 2 + 1;
    std::vector<bool> composite(half, false);
    for (u64 i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
        if (composite[i]) continue;
        u64 p = 2 * i + 1;
        for (u64 j = p * p / 2; j < half; j += p) composite[j] = true;
    }
    out.primes.reserve(limit > 100 ? static_cast<size_t>(1.3 * limit / std::log(double(limit))) : 32);
    out.primes.push_back(2);
    for (u64 i = 1; i < half; ++i)
        if (!composite[i]) out.primes.push_back(2 * i + 1);
    return out;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : small_primes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // bases 2..37 are deterministic below 3.3e24
    for (int k = 0; k < 12; ++k)
        if (mr_witness(n, small_primes[k], d, s)) return false;
    return true;
}

bool is_probable_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(n.get_ui());
    for (u64 p : small_primes)
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    mpz_class d = n - 1;
    auto s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    mpz_class nm1 = n - 1, x;
    for (u64 a : small_primes) {
        mpz_class base(static_cast<unsigned long>(a));
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool composite = true;
        for (mp_bitcnt_t i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == nm1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

int jacobi(const mpz_class& a, const mpz_class& n) {
    if (n <= 0 || mpz_even_p(n.get_mpz_t()))
        fail(ErrorKind::invalid_argument, "jacobi symbol needs an odd positive modulus");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

int jacobi(std::int64_t a_signed, u64 n) {
    if (n == 0 || (n & 1) == 0)
        fail(ErrorKind::invalid_argument, "jacobi symbol needs an odd positive modulus");
    __int128 mr = static_cast<__int128>(a_signed) % static_cast<__int128>(n);
    if (mr < 0) mr += n;
    u64 a = static_cast<u64>(mr);
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            u64 r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

int legendre_symbol(const mpz_class& a, const mpz_class& p) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_probable_prime(p))
        fail(ErrorKind::invalid_argument, "legendre symbol needs an odd prime, got " + p.get_str());
    return mpz_jacobi(a.get_mpz_t(), p.get_mpz_t());
}

int legendre_symbol(std::int64_t a, u64 p) {
    if (p < 3 || (p & 1) == 0 || !is_prime(p))
        fail(ErrorKind::invalid_argument, "legendre symbol needs an odd prime, got " + std::to_string(p));
    return jacobi(a, p);
}

Congruence crt_combine(std::span<const Congruence> congruences) {
    Congruence acc{0, 1};
    for (const auto& c : congruences) {
        if (c.modulus <= 0) fail(ErrorKind::invalid_argument, "crt modulus must be positive");
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), acc.modulus.get_mpz_t(),
                   c.modulus.get_mpz_t());
        if (g != 1)
            fail(ErrorKind::invalid_argument,
                 "crt moduli not coprime: " + acc.modulus.get_str() + ", " + c.modulus.get_str());
        // x = acc.r + acc.m * s * (c.r - acc.r)  (mod acc.m * c.m)
        mpz_class m = acc.modulus * c.modulus;
        mpz_class x = acc.residue + acc.modulus * s * (c.residue - acc.residue);
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        acc = {x, m};
    }
    return acc;
}

std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

u64 radical(u64 n) {
    if (n == 0) fail(ErrorKind::invalid_argument, "radical(0) is undefined");
    u64 r = 1;
    for (u64 p : prime_divisors(n)) r *= p;
    return r;
}

mpz_class radical(const mpz_class& n) {
    if (n == 0) fail(ErrorKind::invalid_argument, "radical(0) is undefined");
    mpz_class m = abs(n);
    if (mpz_fits_ulong_p(m.get_mpz_t())) return mpz_class(static_cast<unsigned long>(radical(m.get_ui())));
    mpz_class r = 1;
    for (unsigned long p = 2; mpz_cmp_ui(m.get_mpz_t(), 1) > 0; ++p) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            r *= p;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
        if (mpz_class(p) * p > m) {
            if (m > 1) r *= m;
            break;
        }
    }
    return r;
}

u64 euler_phi(u64 q) {
    if (q == 0) fail(ErrorKind::invalid_argument, "euler_phi(0) is undefined");
    u64 r = q;
    for (u64 p : prime_divisors(q)) r = r / p * (p - 1);
    return r;
}

mpz_class product(std::span<const u64> values) { return product_range(values); }

ThetaValue chebyshev_theta(u64 n, const ThetaOptions& opts) {
    ThetaValue out;
    out.n = n;
    out.value = Real(opts.prec);
    if (n < 2) return out;

    if (n <= opts.exact_cap) {
        auto pl = primes_up_to(n);
        mpz_class prod = product(pl.primes);
        out.kind = ThetaKind::exact;
        Real z(prod, opts.prec + 32);  // rounding of the primorial
        mpfr_log(out.value.get(), z.get(), MPFR_RNDN);
        out.error_bound = std::ldexp(out.value.to_double(), -static_cast<int>(opts.prec) + 2);
        out.primorial = std::move(prod);
        return out;
    }
    if (n <= opts.sieve_limit) {
        auto pl = primes_up_to(n);
        // Kahan-compensated long double sum; each logl is faithful to 1 ulp.
        long double sum = 0, comp = 0;
        for (u64 p : pl.primes) {
            long double y = std::log(static_cast<long double>(p)) - comp;
            long double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        out.kind = ThetaKind::summed;
        mpfr_set_ld(out.value.get(), sum, MPFR_RNDN);
        const double eps = std::ldexp(1.0, -63);
        out.error_bound = 4.0 * eps * (pl.primes.size() * std::log(double(n)) + double(sum));
        return out;
    }
    out.kind = ThetaKind::upper_bound;
    Real c = Real::from_string("1.01624", opts.prec, MPFR_RNDU);
    mpfr_mul_ui(out.value.get(), c.get(), n, MPFR_RNDU);
    out.error_bound = 0;
    return out;
}

}  // namespace ssheight::arith
