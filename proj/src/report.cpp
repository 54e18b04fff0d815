#include "ssheight/report.hpp"

#include "ssheight/error.hpp"

#include <stdexcept>

namespace ssheight::report {
namespace {

// Decimal rendering rounded toward `up` so the printed number stays on the
// conservative side of the stored one.
std::string directed(const Real& r, int digits, bool up) {
    char* buf = nullptr;
    const char* fmt = up ? "%.*RUg" : "%.*RDg";
    if (mpfr_asprintf(&buf, fmt, digits, r.get()) < 0 || buf == nullptr)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

}  // namespace

json to_json(const BoundValue& b, int digits) {
    json j;
    j["level"] = b.level();
    bool up = b.level() != 0;
    std::string v = directed(b.value(), digits, up);
    // The printed value moved away from the formula; widen the slack by
    // that distance so [v, v + s] (or [v - s, v]) still contains it.
    Real printed = Real::from_string(v, b.value().prec(), up ? MPFR_RNDU : MPFR_RNDD);
    Real slack(64);
    mpfr_sub(slack.get(), printed.get(), b.value().get(), MPFR_RNDU);
    mpfr_abs(slack.get(), slack.get(), MPFR_RNDU);
    mpfr_add(slack.get(), slack.get(), b.slack().get(), MPFR_RNDU);
    j["value"] = v;
    j["meaning"] = std::string(b.meaning());
    j["slack"] = directed(slack, 6, true);
    j["informative"] = b.informative();
    if (b.exact_value()) j["exact"] = b.exact_value()->get_str();
    return j;
}

json to_json(const Magnitude& m, int digits) {
    json j;
    j["level"] = m.level();
    j["value"] = directed(m.value(), digits, true);
    j["meaning"] = std::string(m.meaning());
    return j;
}

json real_json(const Real& r, int digits) {
    json j;
    j["value"] = r.to_string(digits);
    j["precision_bits"] = r.prec();
    return j;
}

json to_json(const ssearch::SupersingularCertificate& c) {
    json j;
    j["p"] = c.p;
    j["a_p"] = c.a_p;
    j["witness"] = std::string(ssearch::to_string(c.witness));
    j["ell"] = c.ell ? json(*c.ell) : json(nullptr);
    j["n_ell"] = c.n_ell ? json(c.n_ell->get_str()) : json(nullptr);
    j["n_ell_digits"] = c.n_ell_digits;
    j["n"] = c.n;
    j["q"] = c.q.get_str();
    j["a"] = c.a.get_str();
    json cfg;
    cfg["search"] = c.config.mode == ssearch::SearchConfig::Mode::elkies ? "elkies" : "direct";
    cfg["min_prime"] = c.config.min_prime;
    cfg["trial_bound"] = c.config.trial_bound;
    cfg["max_candidates"] = c.config.max_candidates;
    cfg["direct_limit"] = c.config.direct_limit;
    cfg["max_modulus_bits"] = c.config.max_modulus_bits;
    cfg["threads"] = c.config.threads;
    j["config"] = cfg;
    json t = json::object();
    for (const auto& [k, v] : c.timings) t[k] = v;
    j["timings"] = t;
    return j;
}

json to_json(const verify::SuiteResult& r) {
    json j;
    j["suite"] = r.suite;
    j["checked"] = r.checked;
    j["failures"] = r.failures;
    j["failure_examples"] = r.failure_examples;
    json s = json::object();
    for (const auto& [k, v] : r.stats) s[k] = v;
    j["stats"] = s;
    json p = json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    j["seconds"] = r.seconds;
    return j;
}

BoundValue bound_from_json(const json& j) {
    try {
        int level = j.at("level").get<int>();
        if (j.contains("exact")) return BoundValue::exact(mpq_class(j.at("exact").get<std::string>()));
        Real v = Real::from_string(j.at("value").get<std::string>(), logscale_prec,
                                   level == 0 ? MPFR_RNDD : MPFR_RNDU);
        Real s = Real::from_string(j.at("slack").get<std::string>(), 64, MPFR_RNDU);
        switch (level) {
            case 0: return BoundValue::from_h(std::move(v), std::move(s));
            case 1: return BoundValue::from_neg_log(std::move(v), std::move(s));
            case 2: return BoundValue::from_log_neg_log(std::move(v), std::move(s));
            default: break;
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_argument, std::string("malformed bound: ") + e.what());
    } catch (const std::invalid_argument& e) {
        fail(ErrorKind::invalid_argument, std::string("malformed bound: ") + e.what());
    }
    fail(ErrorKind::invalid_argument, "bound level must be 0, 1 or 2");
}

}  // namespace ssheight::report
