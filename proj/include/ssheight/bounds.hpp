#pragma once

// Explicit lower bounds for heights in Q(E_tor), the analytic lemmas behind
// them, and a brute-force conjugate-sum oracle built on certified roots.

#include "ssheight/arith.hpp"
#include "ssheight/ball.hpp"
#include "ssheight/logscale.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace ssheight::bounds {

// ---- analytic lemmas (double precision; domains checked) -------------------

/// log p / (10 p^8), p >= 5.
double habegger_c(std::uint64_t p);

/// 2(e|log e| + |log(1-e)|) + (2/(e d)) log d + (1 + 1/e) h, 0 < e < 1/2, d >= 2.
double mignotte_sum_bound(double eps, std::uint64_t d, double h);

/// -2(x log x + log(1-x)), the quantity both auxiliary bounds dominate.
double entropy_term(double x);

/// -x log x (2 + 4/log 2), 0 < x <= 1/2.
double aux_L1(double x);

/// 8 x^(1-g) / (g e), 0 < x <= 1/2, 0 < g < 1.
double aux_C1(double x, double gamma);

/// (19/eta^4) x^(1-eta) for d >= 16, 0 < eta < 1 and x strictly above the
/// degree-d floor; it dominates log d / d.
double aux_L2(std::uint64_t d, double eta, double x);

/// (40/delta^4) h^(1/2 - delta), 0 < delta < 1/2, sqrt(h) <= 1/2.
double sum_bound_explicit(double delta, double h);

/// (1/(4d)) (log log d / log d)^3, d >= 16.
double dobrowolski_floor(std::uint64_t d);

// ---- algebraic samples -------------------------------------------------------

/// Enclosures of all complex roots of a squarefree integer polynomial
/// (coefficients low to high). Aberth iteration for the midpoints, then
/// disks of radius d |W_i| from the Weierstrass corrections; the disks are
/// checked pairwise disjoint, so each holds exactly one root. Throws
/// precision_exhausted when they cannot be separated.
std::vector<CBall> certified_roots(const std::vector<mpz_class>& coeffs, mpfr_prec_t prec = 128);

/// F divides x^k - 1 for some 1 <= k <= kmax (only possible for monic F).
bool divides_x_pow_minus_one(const std::vector<mpz_class>& coeffs, unsigned kmax = 100);

enum class IrreducibilityProof { linear, root_subsets, eisenstein };

struct AlgebraicSample {
    std::vector<mpz_class> coeffs;  // primitive minimal polynomial, low to high, a_d > 0
    std::vector<CBall> roots;
    Ball height{128};               // (1/d)(log a_d + sum log max(1, |root|))
    IrreducibilityProof proof = IrreducibilityProof::linear;

    std::size_t degree() const { return coeffs.size() - 1; }

    /// Normalises sign and content, certifies the roots and the height, and
    /// proves irreducibility: degree 1, Eisenstein at a prime below 100, or
    /// (degree <= 8) no product of a proper root subset scaled by a divisor
    /// of a_d is an integer factor. Rejects 0, 1 and roots of unity
    /// (x^k - 1 divisibility for k <= 100, or palindromic with every root
    /// on the unit circle). Throws invalid_argument on rejection,
    /// unsupported when irreducibility cannot be decided.
    static AlgebraicSample from_polynomial(std::vector<mpz_class> coeffs, mpfr_prec_t prec = 128);
};

/// Random accepted sample: degree uniform in [dmin, dmax], coefficients
/// uniform in [-bound, bound]; rejected draws are redrawn.
AlgebraicSample random_sample(std::mt19937_64& rng, unsigned dmin = 2, unsigned dmax = 8, long bound = 20);

/// Random Eisenstein-at-2 sample of degree d: x^d + 2(c_{d-1} x^{d-1} + ...
/// + c_1 x) + 2u with c_i in {-1, 0, 1} and u odd in {-1, 1}.
AlgebraicSample random_eisenstein_sample(std::mt19937_64& rng, unsigned d);

/// (1/d) sum log |root - 1| from the root enclosures. Throws
/// precision_exhausted when an enclosure touches 1.
Ball sum_oracle(const AlgebraicSample& s);

/// (1/d) log(|F(1)| / a_d) evaluated from the exact integer F(1).
Ball sum_identity(const AlgebraicSample& s);

// ---- height bounds -----------------------------------------------------------

enum class CurveClass { non_cm, cm, small_degree };

/// Branches of the height bound for a surjective supersingular prime p >= 5:
///   non_cm:       (log p)^5 / (10^k p^44), k = constant_exponent (21 or 31)
///   cm:           3^-14 exactly
///   small_degree: 6e-14 / (10 p^4) exactly (degree of beta at most 1e10)
BoundValue main_height_bound(std::uint64_t p, CurveClass cls, int constant_exponent = 21);

enum class ConductorMode { explicit_bound, semistable, effective, intro };

/// How the surjectivity threshold enters n: the general definition squares
/// the max; linear uses it once, which gives the 1e10-sized inner exponent at N = 11.
enum class SurjectivityThreshold { squared, linear };

struct ConductorBoundInput {
    std::uint64_t N = 11;
    ConductorMode mode = ConductorMode::explicit_bound;
    SurjectivityThreshold threshold = SurjectivityThreshold::squared;
    int constant_exponent = 21;            // semistable only
    std::optional<mpq_class> j;            // semistable: needed for B_E
    std::optional<Real> h_j;               // effective: max(log 2, h(j)); else 10 N log N
    double c = 1.0;                        // effective: the unspecified constant
};

struct ConductorBound {
    BoundValue bound;
    mpz_class n;              // threshold entering theta
    Real theta{logscale_prec};
    arith::ThetaKind theta_kind = arith::ThetaKind::exact;
    std::optional<Magnitude> product;  // the quantity raised to -44, when used
    mpz_class q = 0;          // effective: 4 rad(6N)
};

/// Closed forms depending on the conductor only:
///   explicit_bound  (C e^{0.018 sqrt X log^3 X} N e^theta log^6 X log N)^-44,
///                   C = 2.5e9, n = 10^7 max{985, (10 N log N)/12 + 3}^2
///   semistable      (log 11)^5/10^k (... N log N)^-44 with n = max(11, B_E)
///   effective       c (log(q log q h_j))^5 / (q^{5/2} (log q)^2 h_j)^44
///   intro           (X^{N e^theta log^5 X} 18 N log N)^-44,
///                   n = 10^7 max{985, (18 N log N)/12 + 3}^2
/// where X = 8 N e^theta(n).
ConductorBound conductor_height_bound(const ConductorBoundInput& in);

struct PadicBound {
    BoundValue bound;     // level 0 and possibly negative when not informative
    bool informative = false;
};

/// (1/(2 p^lambda p^2)) ((1 + lambda) log p / p^6 - log 2), p >= 2, lambda >= 1.
PadicBound padic_height_bound(std::uint64_t p, std::uint64_t lambda);

/// log(p/2) / (2 p^(p^6 + 2)), p >= 3.
PadicBound padic_corollary_bound(std::uint64_t p);

}  // namespace ssheight::bounds
