#pragma once

// Elkies' route to a supersingular prime: one congruence l ≡ a (mod q)
// encoding all Legendre conditions, the least prime l in it, the integer
// N_l = -num(P_l(j) P_4l(j)), and a certified prime factor of N_l.

#include "ssheight/arith.hpp"
#include "ssheight/classpoly.hpp"
#include "ssheight/curve.hpp"
#include "ssheight/error.hpp"
#include "ssheight/logscale.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ssheight::ssearch {

struct LegendreCondition {
    std::uint64_t prime = 0;
    int required = 1;            // wanted value of (prime / l)
    std::uint64_t residue = 0;   // l ≡ residue (mod prime) realises it
    bool from_conductor = false; // prime divides 6N
    bool from_threshold = false; // prime <= n
};

struct CongruenceSystem {
    mpz_class a;
    mpz_class q;
    std::vector<LegendreCondition> conditions;
    bool seven_mod_eight = true;  // l ≡ 7 (mod 8), giving (-1/l) = -1, (2/l) = 1
};

struct CongruenceOptions {
    std::size_t max_modulus_bits = 1u << 22;
};

/// Conditions for every odd prime dividing 6N and every odd prime <= n.
/// `primes` must cover n. Throws modulus_overflow when q would exceed the
/// bit cap (checked against theta(n) < 1.01624 n before materialising).
CongruenceSystem assemble_congruence(std::uint64_t N, std::uint64_t n, const arith::PrimeList& primes,
                                     const CongruenceOptions& opts = {});
CongruenceSystem assemble_congruence(std::uint64_t N, std::uint64_t n, const CongruenceOptions& opts = {});

/// True when the prime l satisfies every recorded condition and l ≡ 7 mod 8.
bool satisfies(const CongruenceSystem& sys, const mpz_class& ell);

/// Upper end of the known explicit range for the least prime in a
/// progression mod q (q >= 3): 7.94e9, 4.81e12/q, exp(0.036 sqrt(q) log^3 q).
Magnitude least_prime_cap(const mpz_class& q);

struct ProgressionPrime {
    mpz_class ell;
    std::uint64_t candidates = 0;   // progression terms tested
    std::optional<Magnitude> cap;   // x0(q), absent for q < 3
    bool within_cap = true;
};

struct ScanOptions {
    std::uint64_t max_candidates = 100'000'000;
    mpz_class start = 0;  // only terms >= start are considered
};

/// Least prime l ≡ a (mod q) with l >= start, by ascending scan.
ProgressionPrime find_prime_in_ap(const mpz_class& a, const mpz_class& q, const ScanOptions& opts = {});
inline ProgressionPrime find_prime_in_ap(const CongruenceSystem& sys, const ScanOptions& opts = {}) {
    return find_prime_in_ap(sys.a, sys.q, opts);
}

struct NumeratorResult {
    mpz_class value;        // N_l
    std::size_t deg_l = 0;  // deg P_l = h(-l)
    std::size_t deg_4l = 0; // deg P_4l
    mpfr_prec_t precision = 0;
};

/// N_l = -num(P_l(j) P_4l(j)) for a prime l ≡ 3 mod 4, l >= 7.
NumeratorResult numerator_N_ell(const mpq_class& j, std::uint64_t ell, const classpoly::ClassPolyOptions& opts = {});

enum class Witness { ell_itself, inert, direct_scan };
std::string_view to_string(Witness w);

struct SearchConfig {
    enum class Mode { elkies, direct } mode = Mode::elkies;
    std::uint64_t min_prime = 11;         // M
    std::uint64_t trial_bound = 10'000'000;
    std::uint64_t max_candidates = 100'000'000;
    std::uint64_t direct_limit = 100'000'000;
    std::size_t max_modulus_bits = 1u << 22;
    unsigned threads = 1;
    bool cm = false;                      // caller asserts CM
};

struct SupersingularCertificate {
    std::uint64_t p = 0;
    std::int64_t a_p = 0;
    Witness witness = Witness::direct_scan;
    std::optional<std::uint64_t> ell;
    std::optional<mpz_class> n_ell;      // kept so p | N_l can be re-checked
    std::size_t n_ell_digits = 0;
    std::uint64_t n = 0;                 // threshold max(11, M, B_E)
    mpz_class q, a;
    SearchConfig config;
    std::map<std::string, double> timings;  // seconds per stage
};

/// Raised when no certified prime factor turned up; carries the part of
/// N_l left after trial division.
class ExtractionIncomplete : public Error {
public:
    ExtractionIncomplete(const std::string& what, mpz_class cofactor)
        : Error(ErrorKind::extraction_incomplete, what), cofactor_(std::move(cofactor)) {}
    const mpz_class& cofactor() const { return cofactor_; }

private:
    mpz_class cofactor_;
};

/// First prime factor p of N_l (ascending trial division, then the cofactor
/// if it is a probable prime) with p = l or (p/l) = -1, p >= 5, good
/// reduction and a_p = 0.
SupersingularCertificate extract_supersingular(const curve::IntegralModel& model, const mpz_class& n_ell,
                                               std::uint64_t ell, std::uint64_t trial_bound = 10'000'000);

/// Re-checks a certificate from its own data: p | N_l (when an l is
/// recorded), the witness symbol, p >= 5, good reduction and a_p = 0.
bool validate(const curve::IntegralModel& model, const SupersingularCertificate& cert);

/// The whole pipeline. n = max(11, M, ceil B_E). Errors carry the stage.
SupersingularCertificate search_supersingular_prime(const curve::WeierstrassModel& model,
                                                    const curve::CurveInvariants& inv, const SearchConfig& config);

// ---- explicit bounds on log p ----------------------------------------------

enum class LogBoundVariant { boundp, boundpnoj, effective };

struct LogBoundInput {
    std::uint64_t N = 11;
    std::uint64_t n = 11;       // boundp: threshold; boundpnoj: M
    Real h_j{128};              // max(log 2, h(j)); unused by boundpnoj
    double c = 1.0;             // effective: the unspecified constant
    mpz_class q = 0;            // effective: congruence modulus
};

struct LogBound {
    Magnitude log_p;            // upper bound on log p
    std::uint64_t n = 0;        // threshold actually used
    arith::ThetaKind theta_kind = arith::ThetaKind::exact;
    Real theta{128};            // upper bound on theta(n) used
};

/// Upper bound on log p from the closed forms:
///   boundp:     2.5e9 e^(0.018 sqrt(X) log^3 X) N e^theta(n) log^6 X h_j, X = 8N e^theta(n)
///   boundpnoj:  2.5e10 ... N log N with n = max(M, (6N log N)^2)
///   effective:  c q^(5/2) (log q)^2 h_j
LogBound ss_prime_log_bound(const LogBoundInput& in, LogBoundVariant variant);

/// ln of  C e^(0.018 sqrt(X) log^3 X) N e^theta log^6 X  T  with X = 8N e^theta,
/// given ln C, an upper bound on theta and ln T; returned as a Magnitude of
/// the whole product (rounded up).
Magnitude elkies_product_magnitude(const Real& ln_c, std::uint64_t N, const Real& theta, const Real& ln_t);

/// Upper bound on theta(n) at working precision: exact, summed plus its
/// error bound, or the Rosser-Schoenfeld bound.
Real theta_upper(std::uint64_t n, arith::ThetaKind* kind = nullptr);

}  // namespace ssheight::ssearch
