#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssheight {

enum class ErrorKind {
    invalid_argument,
    singular_model,
    bad_reduction,
    unsupported,
    cm_curve,
    precision_exhausted,
    effort_exhausted,
    modulus_overflow,
    extraction_incomplete,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every library module. `stage` is filled in by the
/// search pipeline when an error crosses a stage boundary.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::string stage = {})
        : std::runtime_error(what), kind_(kind), stage_(std::move(stage)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }
    void set_stage(std::string stage) { stage_ = std::move(stage); }

    /// Effort and precision exhaustion are retryable with a bigger budget.
    bool exhausted() const noexcept {
        return kind_ == ErrorKind::precision_exhausted ||
               kind_ == ErrorKind::effort_exhausted ||
               kind_ == ErrorKind::extraction_incomplete;
    }

private:
    ErrorKind kind_;
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace ssheight
