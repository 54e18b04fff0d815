#pragma once

// Numbers too large or too small for any float, kept at a chosen depth of
// logarithms. Magnitude carries upper bounds on a large x > 0; BoundValue
// carries lower bounds on a height h > 0. Every conversion rounds in the
// direction that keeps the bound valid.

#include "ssheight/real.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace ssheight {

inline constexpr mpfr_prec_t logscale_prec = 256;

/// Upper bound on x > 0: level 0 stores x, level 1 ln x, level 2 ln ln x.
class Magnitude {
public:
    Magnitude() : value_(logscale_prec) {}
    Magnitude(int level, Real value);

    /// Shallowest level whose stored value stays below ~1e300 in size.
    static Magnitude from_log(const Real& ln_x);
    static Magnitude from_log_log(const Real& lnln_x);

    int level() const { return level_; }
    const Real& value() const { return value_; }
    static std::string_view meaning(int level);
    std::string_view meaning() const { return meaning(level_); }

    /// Same bound at another level (rounded up).
    Magnitude at_level(int level) const;
    /// ln x rounded up; for level 2 this is exp(value), which MPFR can
    /// hold for values up to about 1e18.
    Real log() const;

    /// -1, 0, 1 comparing the represented numbers at the deeper level.
    int compare(const Magnitude& other) const;

private:
    int level_ = 0;
    Real value_;
};

enum class Certainty { yes, no, undecided };

/// Lower bound on a height: level 0 stores h, level 1 -ln h, level 2
/// ln(-ln h). `slack` bounds how far the stored value may sit from the
/// formula it encodes, always on the conservative side (so the formula
/// lies in [v, v + slack] at level 0 and in [v - slack, v] above).
class BoundValue {
public:
    BoundValue() : value_(logscale_prec), slack_(64) {}

    static BoundValue from_h(Real h, Real slack = Real(64));
    static BoundValue from_neg_log(Real v, Real slack = Real(64));
    static BoundValue from_log_neg_log(Real v, Real slack = Real(64));
    static BoundValue exact(const mpq_class& h);

    int level() const { return level_; }
    const Real& value() const { return value_; }
    const Real& slack() const { return slack_; }
    const std::optional<mpq_class>& exact_value() const { return exact_; }
    static std::string_view meaning(int level);
    std::string_view meaning() const { return meaning(level_); }

    /// h > 0 at level 0. Deeper levels are positive by construction.
    bool informative() const;

    BoundValue to_level(int level) const;
    /// Shallowest level whose stored value stays within double range.
    BoundValue normalized() const;

    /// Is the encoded formula >= t (t > 0)? Uses the slack to decide
    /// both directions; `undecided` when the interval straddles t.
    Certainty at_least(const mpq_class& t) const;

    /// Order of the represented heights (-1 smaller, 1 larger).
    int compare(const BoundValue& other) const;

    std::string value_string(int digits = 25) const;

private:
    int level_ = 0;
    Real value_;
    Real slack_;
    std::optional<mpq_class> exact_;
};

}  // namespace ssheight
