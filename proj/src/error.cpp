#include "ssheight/error.hpp"

namespace ssheight {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::singular_model: return "singular_model";
        case ErrorKind::bad_reduction: return "bad_reduction";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::cm_curve: return "cm_curve";
        case ErrorKind::precision_exhausted: return "precision_exhausted";
        case ErrorKind::effort_exhausted: return "effort_exhausted";
        case ErrorKind::modulus_overflow: return "modulus_overflow";
        case ErrorKind::extraction_incomplete: return "extraction_incomplete";
    }
    return "unknown";
}

}  // namespace ssheight
