#pragma once

// Weierstrass models over Q: invariants, reduction mod p, Frobenius traces
// and the j-dependent thresholds used by the supersingular-prime search.

#include "ssheight/real.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace ssheight::curve {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational coefficients.
struct WeierstrassModel {
    std::array<mpq_class, 5> a;  // a1, a2, a3, a4, a6

    const mpq_class& a1() const { return a[0]; }
    const mpq_class& a2() const { return a[1]; }
    const mpq_class& a3() const { return a[2]; }
    const mpq_class& a4() const { return a[3]; }
    const mpq_class& a6() const { return a[4]; }

    /// Parse "a1,a2,a3,a4,a6", each an integer or p/q in lowest terms.
    static WeierstrassModel parse(const std::string& text);
    std::string to_string() const;
};

struct CurveInvariants {
    mpq_class b2, b4, b6, b8, c4, c6, delta, j;
    std::uint64_t conductor = 0;
    Real h_j{128};  // max(log 2, h(j)), natural log

    bool operator==(const CurveInvariants&) const = delete;
};

/// Exact invariants. Throws singular_model when the discriminant vanishes and
/// invalid_argument for a conductor below 11.
CurveInvariants compute_invariants(const WeierstrassModel& model, std::uint64_t conductor);

/// Discriminant only (no conductor check).
mpq_class discriminant(const WeierstrassModel& model);

/// log max(|num|, |den|) of a rational in lowest terms.
Real rational_height(const mpq_class& x, mpfr_prec_t prec = 128);

/// The model scaled by (x, y) -> (u^2 x, u^3 y) with the least u > 0 that
/// makes every coefficient integral.
struct IntegralModel {
    std::array<mpz_class, 5> a;
    mpz_class u;
    mpz_class delta;
};

IntegralModel integral_model(const WeierstrassModel& model);

/// Integral model built from a caller-supplied model for the same curve
/// (typically a minimal one). Throws invalid_argument unless `reduction`
/// is Q-isomorphic to `model`.
IntegralModel integral_model(const WeierstrassModel& model, const WeierstrassModel& reduction);

bool has_good_reduction(const IntegralModel& model, std::uint64_t p);

/// a_p = p + 1 - #E(F_p) for an odd prime p of good reduction, by summing
/// Legendre symbols of 4x^3 + b2 x^2 + 2 b4 x + b6 over F_p.
std::int64_t trace_of_frobenius(const IntegralModel& model, std::uint64_t p);
std::int64_t trace_of_frobenius(const WeierstrassModel& model, std::uint64_t p);

/// a_p == 0 for p >= 5. Refuses p < 5 (unsupported).
bool is_supersingular(const IntegralModel& model, std::uint64_t p);
bool is_supersingular(const WeierstrassModel& model, std::uint64_t p);

/// B_E: every prime l ≡ 3 mod 4 with l > max(B_E, 7) has
/// P_l(j) > 0 > P_{4l}(j).
Real b_e_threshold(const mpq_class& j, mpfr_prec_t prec = 128);

/// ceil(10^7 max{985, h_j/12 + 3}^2): primes at or above this are surjective
/// for non-CM curves.
mpz_class surjectivity_threshold(const Real& h_j);

struct JHeightFromConductor {
    Real h_e{128};         // bound on the stable Faltings-type height h_E
    Real full_chain{128};  // 12 h_E + 6 log max(1, h_E) + 75.84
    Real simplified{128};  // 10 N log N
};

/// Bounds on max(log 2, h(j)) from the conductor alone; N < 11 rejected.
JHeightFromConductor j_height_from_conductor(std::uint64_t conductor);

/// True for the 13 rational CM j-invariants.
bool is_cm_j_invariant(const mpq_class& j);

}  // namespace ssheight::curve
