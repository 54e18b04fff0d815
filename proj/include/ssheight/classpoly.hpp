#pragma once

// Reduced binary quadratic forms, certified evaluation of the modular
// j-function and Hilbert class polynomials with exact integer coefficients.

#include "ssheight/ball.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

namespace ssheight::classpoly {

/// a x^2 + b xy + c y^2 with b^2 - 4ac = -D, primitive and reduced:
/// |b| <= a <= c, and b >= 0 when |b| = a or a = c.
struct QuadraticForm {
    std::int64_t a = 0, b = 0, c = 0;
    friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
};

/// True when -D ≡ 0, 1 (mod 4), i.e. D ≡ 0, 3 (mod 4), D > 0.
bool is_valid_discriminant(std::uint64_t D);

/// All reduced primitive forms of discriminant -D, ordered by a, then |b|,
/// positive b first. Length is the class number h(-D).
std::vector<QuadraticForm> reduced_forms(std::uint64_t D);

inline std::size_t class_number(std::uint64_t D) { return reduced_forms(D).size(); }

/// tau = (-b + i sqrt(D)) / (2a), the root in the upper half plane.
CBall form_root(const QuadraticForm& f, std::uint64_t D, mpfr_prec_t prec);

struct JEvaluation {
    CBall value;
    std::size_t terms = 0;  // q-series truncation order
};

/// Certified enclosure of j(tau) = 1728 E4^3 / (E4^3 - E6^2) from the
/// Eisenstein q-series with a rigorous geometric tail bound. Requires
/// |q| < 0.999. Throws precision_exhausted when the denominator ball
/// touches zero.
JEvaluation eval_j(const CBall& tau, mpfr_prec_t prec);

struct ClassPolynomial {
    std::uint64_t D = 0;
    std::vector<mpz_class> coeffs;  // lowest degree first, monic
    mpfr_prec_t precision = 0;      // working precision that certified the rounding

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

struct ClassPolyOptions {
    mpfr_prec_t max_prec = mpfr_prec_t{1} << 22;
    unsigned threads = 1;
};

/// Exact P_D. Each coefficient is the unique integer inside an enclosure of
/// radius < 1/4; precision doubles until that holds.
ClassPolynomial hilbert_class_polynomial(std::uint64_t D, const ClassPolyOptions& opts = {});

/// Exact value of an integer polynomial (lowest degree first) at a rational.
mpq_class evaluate_at_rational(std::span<const mpz_class> coeffs, const mpq_class& x);
inline mpq_class evaluate_at_rational(const ClassPolynomial& P, const mpq_class& x) {
    return evaluate_at_rational(P.coeffs, x);
}

/// Number of distinct real roots via an exact Sturm sequence.
int count_real_roots(std::span<const mpz_class> coeffs);

}  // namespace ssheight::classpoly
