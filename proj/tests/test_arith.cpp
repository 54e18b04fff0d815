#include "ssheight/arith.hpp"
#include "ssheight/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ssheight;
using namespace ssheight::arith;

namespace {

bool trial_division_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int euler_criterion(std::int64_t a, std::uint64_t p) {
    std::int64_t r = ((a % std::int64_t(p)) + std::int64_t(p)) % std::int64_t(p);
    if (r == 0) return 0;
    std::uint64_t acc = 1, b = r, e = (p - 1) / 2;
    while (e) {
        if (e & 1) acc = acc * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

}  // namespace

TEST(Legendre, SpecExamples) {
    EXPECT_EQ(legendre_symbol(0, 7), 0);
    EXPECT_EQ(legendre_symbol(2, 7), 1);
    EXPECT_EQ(legendre_symbol(3, 7), -1);
    EXPECT_EQ(legendre_symbol(mpz_class(3), mpz_class(7)), -1);
    EXPECT_EQ(legendre_symbol(-1, 43991), -1);
}

TEST(Legendre, RejectsNonOddPrime) {
    EXPECT_THROW(legendre_symbol(3, 9), Error);
    EXPECT_THROW(legendre_symbol(3, 2), Error);
    EXPECT_THROW(legendre_symbol(mpz_class(3), mpz_class(15)), Error);
    try {
        legendre_symbol(1, 4);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
    }
}

TEST(Legendre, AgreesWithEulerCriterion) {
    for (std::uint64_t p : primes_up_to(400).primes) {
        if (p == 2) continue;
        for (std::int64_t a = -50; a < 450; ++a) ASSERT_EQ(legendre_symbol(a, p), euler_criterion(a, p));
    }
}

TEST(Legendre, CompletelyMultiplicative) {
    std::mt19937_64 rng(12345);
    auto primes = primes_up_to(100000).primes;
    std::uniform_int_distribution<std::size_t> pick(1, primes.size() - 1);
    std::uniform_int_distribution<std::int64_t> val(-1'000'000, 1'000'000);
    for (int k = 0; k < 1000; ++k) {
        std::uint64_t p = primes[pick(rng)];
        std::int64_t a = val(rng), b = val(rng);
        mpz_class ab = mpz_class(static_cast<long>(a)) * static_cast<long>(b);
        ASSERT_EQ(legendre_symbol(ab, mpz_class(static_cast<unsigned long>(p))),
                  legendre_symbol(a, p) * legendre_symbol(b, p));
    }
}

TEST(Jacobi, MatchesGmp) {
    for (std::uint64_t n = 1; n < 300; n += 2)
        for (std::int64_t a = -300; a < 300; ++a)
            ASSERT_EQ(jacobi(a, n), mpz_jacobi(mpz_class(static_cast<long>(a)).get_mpz_t(),
                                               mpz_class(static_cast<unsigned long>(n)).get_mpz_t()));
}

TEST(Crt, SpecExamples) {
    std::vector<Congruence> c1{{0, 1}};
    auto r1 = crt_combine(c1);
    EXPECT_EQ(r1.residue, 0);
    EXPECT_EQ(r1.modulus, 1);
    std::vector<Congruence> c2{{7, 8}, {1, 3}};
    auto r2 = crt_combine(c2);
    EXPECT_EQ(r2.residue, 7);
    EXPECT_EQ(r2.modulus, 24);
    std::vector<Congruence> c3{{1, 2}, {2, 3}};
    auto r3 = crt_combine(c3);
    EXPECT_EQ(r3.residue, 5);
    EXPECT_EQ(r3.modulus, 6);
}

TEST(Crt, NonCoprimeRejected) {
    std::vector<Congruence> c{{1, 4}, {3, 6}};
    EXPECT_THROW(crt_combine(c), Error);
}

TEST(Crt, Replays) {
    std::mt19937_64 rng(7);
    auto primes = primes_up_to(2000).primes;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Congruence> cs;
        std::vector<std::uint64_t> chosen;
        for (std::uint64_t p : primes)
            if (rng() % 40 == 0) chosen.push_back(p);
        for (std::uint64_t p : chosen) {
            std::uint64_t m = (rng() % 3 == 0) ? p * p : p;
            cs.push_back({mpz_class(static_cast<unsigned long>(rng() % m)), mpz_class(static_cast<unsigned long>(m))});
        }
        auto r = crt_combine(cs);
        mpz_class prod = 1;
        for (const auto& c : cs) {
            ASSERT_EQ(mpz_class(r.residue - c.residue) % c.modulus, 0);
            prod *= c.modulus;
        }
        ASSERT_EQ(prod, r.modulus);
        ASSERT_TRUE(r.residue >= 0 && r.residue < r.modulus);
    }
}

TEST(Primes, SpecExamples) {
    EXPECT_TRUE(primes_up_to(1).primes.empty());
    EXPECT_EQ(primes_up_to(10).primes, (std::vector<std::uint64_t>{2, 3, 5, 7}));
    EXPECT_EQ(primes_up_to(30).primes, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
    EXPECT_TRUE(primes_up_to(0).primes.empty());
    EXPECT_EQ(primes_up_to(2).primes, (std::vector<std::uint64_t>{2}));
}

TEST(Primes, AgreesWithTrialDivision) {
    auto pl = primes_up_to(10000);
    std::vector<std::uint64_t> expect;
    for (std::uint64_t n = 0; n <= 10000; ++n)
        if (trial_division_prime(n)) expect.push_back(n);
    EXPECT_EQ(pl.primes, expect);
    for (std::uint64_t n = 0; n <= 10000; ++n) ASSERT_EQ(is_prime(n), trial_division_prime(n)) << n;
}

TEST(Primes, MillerRabinLarge) {
    EXPECT_TRUE(is_prime(18446744073709551557ull));   // largest 64-bit prime
    EXPECT_FALSE(is_prime(3825123056546413051ull));   // strong pseudoprime to bases 2..23
    EXPECT_TRUE(is_probable_prime(mpz_class("170141183460469231731687303715884105727")));
    EXPECT_FALSE(is_probable_prime(mpz_class("170141183460469231731687303715884105729")));
}

TEST(Theta, SpecExamples) {
    EXPECT_EQ(chebyshev_theta(1).value.to_double(), 0.0);
    EXPECT_NEAR(chebyshev_theta(2).value.to_double(), std::log(2.0), 1e-15);
    auto t10 = chebyshev_theta(10);
    EXPECT_NEAR(t10.value.to_double(), std::log(210.0), 1e-15);
    ASSERT_TRUE(t10.primorial.has_value());
    EXPECT_EQ(*t10.primorial, 210);
    EXPECT_EQ(*chebyshev_theta(11).primorial, 2310);
}

TEST(Theta, RegimesAgree) {
    ThetaOptions exact;
    ThetaOptions summed;
    summed.exact_cap = 0;
    for (std::uint64_t n : {1000ull, 54321ull, 999999ull}) {
        auto a = chebyshev_theta(n, exact), b = chebyshev_theta(n, summed);
        EXPECT_EQ(a.kind, ThetaKind::exact);
        EXPECT_EQ(b.kind, ThetaKind::summed);
        EXPECT_LE(std::abs(a.value.to_double() - b.value.to_double()), a.error_bound + b.error_bound + 1e-12);
    }
    auto big = chebyshev_theta(9'702'250'000'000ull);
    EXPECT_EQ(big.kind, ThetaKind::upper_bound);
    EXPECT_NEAR(big.value.to_double(), 1.01624 * 9.70225e12, 1.0);
}

TEST(Radical, SpecExamples) {
    EXPECT_EQ(radical(std::uint64_t{1}), 1u);
    EXPECT_EQ(radical(std::uint64_t{12}), 6u);
    EXPECT_EQ(radical(std::uint64_t{66}), 66u);
    EXPECT_EQ(radical(mpz_class("1000000000000000000000000")), 10);
    EXPECT_THROW(radical(std::uint64_t{0}), Error);
}

TEST(EulerPhi, SpecExamples) {
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(euler_phi(8), 4u);
    EXPECT_EQ(euler_phi(9240), 1920u);
}

TEST(Product, MatchesNaive) {
    auto pl = primes_up_to(5000);
    mpz_class naive = 1;
    for (auto p : pl.primes) naive *= static_cast<unsigned long>(p);
    EXPECT_EQ(product(pl.primes), naive);
}
