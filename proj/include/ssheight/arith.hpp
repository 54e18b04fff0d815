#pragma once

// Exact integer primitives: primes, residue symbols, CRT, Chebyshev theta.

#include "ssheight/real.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ssheight::arith {

struct PrimeList {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;  // ascending, all primes <= limit
};

PrimeList primes_up_to(std::uint64_t limit);

/// Deterministic Miller-Rabin for the whole 64-bit range.
bool is_prime(std::uint64_t n);

/// Deterministic for n < 2^64; above that a strong probable-prime test
/// with the first 20 primes as bases (2 .. 71).
bool is_probable_prime(const mpz_class& n);

/// Jacobi symbol (a/n) for odd positive n, via reciprocity.
int jacobi(const mpz_class& a, const mpz_class& n);
int jacobi(std::int64_t a, std::uint64_t n);

/// Legendre symbol (a/p). Throws invalid_argument unless p is an odd prime.
int legendre_symbol(const mpz_class& a, const mpz_class& p);
int legendre_symbol(std::int64_t a, std::uint64_t p);

struct Congruence {
    mpz_class residue;
    mpz_class modulus;
};

/// Combine pairwise coprime congruences into x ≡ a (mod q), 0 <= a < q.
Congruence crt_combine(std::span<const Congruence> congruences);

/// Product of distinct prime divisors. n = 0 is rejected.
std::uint64_t radical(std::uint64_t n);
mpz_class radical(const mpz_class& n);

std::uint64_t euler_phi(std::uint64_t q);

/// Distinct prime divisors by trial division (inputs are conductors and
/// other desk-sized integers).
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// Exact product of a list of integers (balanced product tree).
mpz_class product(std::span<const std::uint64_t> values);

enum class ThetaKind {
    exact,        // log of the exact primorial; primorial is kept
    summed,       // running sum of log p in extended precision
    upper_bound,  // Rosser-Schoenfeld: theta(x) < 1.01624 x
};

struct ThetaOptions {
    std::uint64_t exact_cap = 1'000'000;     // materialise prod p up to here
    std::uint64_t sieve_limit = 100'000'000; // beyond this only the upper bound
    mpfr_prec_t prec = 128;
};

struct ThetaValue {
    std::uint64_t n = 0;
    ThetaKind kind = ThetaKind::exact;
    Real value{128};
    /// Absolute error bound on `value` (for upper_bound: value - theta(n) > 0).
    double error_bound = 0;
    std::optional<mpz_class> primorial;
};

/// Chebyshev's theta(n) = sum over primes p <= n of log p.
ThetaValue chebyshev_theta(std::uint64_t n, const ThetaOptions& opts = {});

/// Rosser-Schoenfeld constant in theta(x) < c x.
inline constexpr double rosser_schoenfeld_theta = 1.01624;

}  // namespace ssheight::arith
