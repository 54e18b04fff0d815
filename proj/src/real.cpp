#include "ssheight/real.hpp"

#include <cstdio>
#include <stdexcept>

namespace ssheight {

std::string Real::to_string(int digits) const {
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Rg", digits, v_) < 0 || buf == nullptr)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

Real Real::from_string(const std::string& s, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    Real r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, rnd) != 0)
        throw std::invalid_argument("not a decimal number: " + s);
    return r;
}

void widen_mpfr_exponent_range() {
    // MPFR keeps the exponent range per thread when built with TLS.
    thread_local bool done = false;
    if (done) return;
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    done = true;
}

}  // namespace ssheight
