#include "ssheight/cli.hpp"

#include "ssheight/arith.hpp"
#include "ssheight/bounds.hpp"
#include "ssheight/classpoly.hpp"
#include "ssheight/curve.hpp"
#include "ssheight/error.hpp"
#include "ssheight/report.hpp"
#include "ssheight/ssearch.hpp"
#include "ssheight/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace ssheight::cli {
namespace {

using report::json;
using report::to_json;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

mpfr_prec_t default_precision() {
    const char* env = std::getenv("SSHEIGHT_PRECISION");
    if (!env || !*env) return 128;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 64 || v > (1L << 20))
        throw Usage("SSHEIGHT_PRECISION must be an integer in [64, 1048576]");
    return static_cast<mpfr_prec_t>(v);
}

std::string theta_kind_name(arith::ThetaKind k) {
    switch (k) {
        case arith::ThetaKind::exact: return "exact";
        case arith::ThetaKind::summed: return "summed";
        case arith::ThetaKind::upper_bound: return "upper_bound";
    }
    return "?";
}

struct Options {
    // global
    unsigned threads = 1;
    std::uint64_t seed = 1;
    // curve
    std::string curve;
    std::uint64_t conductor = 0;
    // supersingular
    std::string search = "elkies";
    std::uint64_t min_prime = 11;
    double effort = 1.0;
    // classpoly
    std::uint64_t D = 0;
    // bound
    std::optional<std::uint64_t> prime;
    bool automatic = false;
    std::string mode = "explicit";
    int constant_exponent = 21;
    bool assume_surjective = false;
    std::vector<std::uint64_t> exceptions;
    bool exceptions_given = false;
    std::string threshold = "squared";
    double c = 1.0;
    // verify
    std::string suite;
    verify::SuiteOptions suite_opts;
};

struct Curve {
    curve::WeierstrassModel model;
    curve::IntegralModel integral;
    curve::CurveInvariants inv;
    bool semistable = false;
    bool cm = false;
};

Curve load_curve(const Options& o) {
    if (o.curve.empty()) fail(ErrorKind::invalid_argument, "--curve is required here");
    if (o.conductor == 0) fail(ErrorKind::invalid_argument, "--conductor is required with --curve");
    Curve c;
    c.model = curve::WeierstrassModel::parse(o.curve);
    c.inv = curve::compute_invariants(c.model, o.conductor);
    c.integral = curve::integral_model(c.model);
    for (auto q : arith::prime_divisors(o.conductor)) {
        if (!mpz_divisible_ui_p(c.integral.delta.get_mpz_t(), q))
            fail(ErrorKind::invalid_argument, "conductor " + std::to_string(o.conductor) +
                                                  " has the prime " + std::to_string(q) +
                                                  ", which does not divide the discriminant");
    }
    c.semistable = arith::radical(o.conductor) == o.conductor;
    c.cm = curve::is_cm_j_invariant(c.inv.j);
    return c;
}

json curve_inputs(const Options& o) {
    json in;
    in["curve"] = o.curve.empty() ? json(nullptr) : json(o.curve);
    in["conductor"] = o.conductor == 0 ? json(nullptr) : json(o.conductor);
    return in;
}

ssearch::SearchConfig search_config(const Options& o) {
    ssearch::SearchConfig cfg;
    cfg.mode = o.search == "direct" ? ssearch::SearchConfig::Mode::direct : ssearch::SearchConfig::Mode::elkies;
    cfg.min_prime = o.min_prime;
    cfg.threads = o.threads;
    auto scale = [&](std::uint64_t v) {
        return static_cast<std::uint64_t>(std::max(1.0, static_cast<double>(v) * o.effort));
    };
    cfg.trial_bound = scale(cfg.trial_bound);
    cfg.max_candidates = scale(cfg.max_candidates);
    cfg.direct_limit = scale(cfg.direct_limit);
    return cfg;
}

// ---- subcommands ------------------------------------------------------------

struct Outcome {
    json inputs = json::object();
    json outputs = json::object();
    json certificate = nullptr;
    bool failed = false;  // command ran but reports a negative result
};

Outcome cmd_invariants(const Options& o, mpfr_prec_t prec) {
    Outcome r;
    r.inputs = curve_inputs(o);
    Curve c = load_curve(o);
    auto& inv = c.inv;
    json& out = r.outputs;
    out["model"] = c.model.to_string();
    for (auto [name, v] : {std::pair{"b2", &inv.b2}, {"b4", &inv.b4}, {"b6", &inv.b6}, {"b8", &inv.b8},
                           {"c4", &inv.c4}, {"c6", &inv.c6}, {"delta", &inv.delta}, {"j", &inv.j}})
        out[name] = v->get_str();
    out["conductor"] = inv.conductor;
    out["semistable"] = c.semistable;
    out["cm"] = c.cm;
    Real h_j = curve::rational_height(inv.j, prec);
    Real ln2(prec);
    mpfr_const_log2(ln2.get(), MPFR_RNDD);
    if (mpfr_less_p(h_j.get(), ln2.get())) h_j = ln2;
    out["h_j"] = report::real_json(h_j);
    out["b_e"] = report::real_json(curve::b_e_threshold(inv.j, prec));
    out["surjectivity_threshold"] = curve::surjectivity_threshold(h_j).get_str();
    auto jc = curve::j_height_from_conductor(inv.conductor);
    out["j_height_from_conductor"] = {{"h_e", report::real_json(jc.h_e)},
                                      {"full_chain", report::real_json(jc.full_chain)},
                                      {"simplified", report::real_json(jc.simplified)}};
    return r;
}

Outcome cmd_supersingular(const Options& o) {
    Outcome r;
    r.inputs = curve_inputs(o);
    r.inputs["search"] = o.search;
    r.inputs["min_prime"] = o.min_prime;
    r.inputs["effort"] = o.effort;
    Curve c = load_curve(o);
    auto cert = ssearch::search_supersingular_prime(c.model, c.inv, search_config(o));
    bool ok = ssearch::validate(c.integral, cert);
    r.outputs["p"] = cert.p;
    r.outputs["a_p"] = cert.a_p;
    r.outputs["validated"] = ok;
    r.certificate = to_json(cert);
    r.failed = !ok;
    return r;
}

Outcome cmd_classpoly(const Options& o) {
    Outcome r;
    r.inputs["d"] = o.D;
    classpoly::ClassPolyOptions opts;
    opts.threads = o.threads;
    auto P = classpoly::hilbert_class_polynomial(o.D, opts);
    r.outputs["D"] = P.D;
    r.outputs["degree"] = P.degree();
    json coeffs = json::array();
    for (const auto& a : P.coeffs) coeffs.push_back(a.get_str());
    r.outputs["coefficients"] = coeffs;
    r.outputs["precision_bits"] = P.precision;
    return r;
}

// Why p may be taken as a surjective prime, or nullopt.
std::optional<std::string> surjectivity_evidence(const Options& o, const Curve& c, std::uint64_t p) {
    if (o.assume_surjective) return "assumed";
    if (o.exceptions_given) {
        if (std::find(o.exceptions.begin(), o.exceptions.end(), p) != o.exceptions.end()) return std::nullopt;
        return "outside the supplied exception list";
    }
    if (c.semistable && p >= 11) return "semistable curve and p >= 11";
    Real h_j = c.inv.h_j;
    if (mpz_class(p) >= curve::surjectivity_threshold(h_j)) return "p at or above the surjectivity threshold";
    return std::nullopt;
}

json bound_payload(const BoundValue& b, const std::string& branch) {
    json j;
    j["branch"] = branch;
    j["bound"] = to_json(b);
    return j;
}

Outcome cmd_bound(const Options& o) {
    Outcome r;
    r.inputs = curve_inputs(o);
    r.inputs["mode"] = o.mode;
    r.inputs["prime"] = o.prime ? json(*o.prime) : json(nullptr);
    r.inputs["auto"] = o.automatic;
    r.inputs["constant_exponent"] = o.constant_exponent;
    r.inputs["assume_surjective"] = o.assume_surjective;
    r.inputs["surjective_exceptions"] = o.exceptions_given ? json(o.exceptions) : json(nullptr);
    r.inputs["threshold"] = o.threshold;

    if (o.mode == "cm") {
        r.outputs = bound_payload(bounds::main_height_bound(5, bounds::CurveClass::cm), "cm");
        return r;
    }

    if (o.prime || o.automatic) {
        if (o.mode != "explicit")
            fail(ErrorKind::invalid_argument, "a prime applies to the explicit and cm modes only");
        Curve c = load_curve(o);
        if (c.cm) {
            r.outputs = bound_payload(bounds::main_height_bound(5, bounds::CurveClass::cm), "cm");
            r.outputs["note"] = "j is a CM invariant";
            return r;
        }
        std::uint64_t p = 0;
        std::string evidence;
        if (o.prime) {
            p = *o.prime;
            if (p < 5 || !arith::is_prime(p)) fail(ErrorKind::invalid_argument, "p must be a prime >= 5");
            if (!curve::has_good_reduction(c.integral, p))
                fail(ErrorKind::bad_reduction, "E has bad reduction at " + std::to_string(p));
            if (!curve::is_supersingular(c.integral, p))
                fail(ErrorKind::invalid_argument, std::to_string(p) + " is not supersingular for E");
            auto ev = surjectivity_evidence(o, c, p);
            if (!ev)
                fail(ErrorKind::invalid_argument,
                     "no evidence that " + std::to_string(p) +
                         " is surjective; pass --assume-surjective or --surjective-exceptions");
            evidence = *ev;
        } else {
            Options so = o;
            so.search = "direct";
            auto cfg = search_config(so);
            cfg.min_prime = 5;
            for (;;) {
                auto cert = ssearch::search_supersingular_prime(c.model, c.inv, cfg);
                if (auto ev = surjectivity_evidence(o, c, cert.p)) {
                    p = cert.p;
                    evidence = *ev;
                    r.certificate = to_json(cert);
                    break;
                }
                if (!o.assume_surjective && !o.exceptions_given && !c.semistable) {
                    // Only the threshold can certify; jump straight to it.
                    mpz_class t = curve::surjectivity_threshold(c.inv.h_j);
                    if (t > cfg.direct_limit)
                        fail(ErrorKind::effort_exhausted,
                             "no surjectivity evidence below the direct-search limit; supply "
                             "--surjective-exceptions or --assume-surjective");
                }
                cfg.min_prime = cert.p + 1;
            }
        }
        r.outputs = bound_payload(bounds::main_height_bound(p, bounds::CurveClass::non_cm, o.constant_exponent),
                                  "non_cm");
        r.outputs["p"] = p;
        r.outputs["surjectivity"] = evidence;
        return r;
    }

    bounds::ConductorBoundInput in;
    std::optional<Curve> c;
    if (!o.curve.empty()) c = load_curve(o);
    if (c) {
        in.N = c->inv.conductor;
        if (c->cm) {
            r.outputs = bound_payload(bounds::main_height_bound(5, bounds::CurveClass::cm), "cm");
            r.outputs["note"] = "j is a CM invariant";
            return r;
        }
    } else {
        if (o.conductor == 0) fail(ErrorKind::invalid_argument, "--conductor is required");
        in.N = o.conductor;
    }
    if (o.mode == "explicit") in.mode = bounds::ConductorMode::explicit_bound;
    else if (o.mode == "semistable") in.mode = bounds::ConductorMode::semistable;
    else if (o.mode == "effective") in.mode = bounds::ConductorMode::effective;
    else in.mode = bounds::ConductorMode::intro;
    in.threshold = o.threshold == "linear" ? bounds::SurjectivityThreshold::linear
                                           : bounds::SurjectivityThreshold::squared;
    in.constant_exponent = o.constant_exponent;
    in.c = o.c;
    if (c) {
        in.j = c->inv.j;
        in.h_j = c->inv.h_j;
        if (in.mode == bounds::ConductorMode::semistable && !c->semistable)
            fail(ErrorKind::invalid_argument, "semistable mode needs a squarefree conductor");
    } else if (in.mode == bounds::ConductorMode::semistable) {
        fail(ErrorKind::invalid_argument, "semistable mode needs --curve for B_E");
    }

    auto describe = [](const bounds::ConductorBound& cb) {
        json j;
        j["bound"] = to_json(cb.bound);
        j["n"] = cb.n.get_str();
        j["theta"] = report::real_json(cb.theta);
        j["theta_kind"] = theta_kind_name(cb.theta_kind);
        j["product"] = cb.product ? to_json(*cb.product) : json(nullptr);
        if (cb.q != 0) j["q"] = cb.q.get_str();
        return j;
    };
    auto cb = bounds::conductor_height_bound(in);
    r.outputs = json{{"branch", o.mode}};
    r.outputs.update(describe(cb));
    if (in.mode == bounds::ConductorMode::explicit_bound) {
        auto alt = in;
        bool squared = in.threshold == bounds::SurjectivityThreshold::squared;
        alt.threshold = squared ? bounds::SurjectivityThreshold::linear : bounds::SurjectivityThreshold::squared;
        json a = describe(bounds::conductor_height_bound(alt));
        a["threshold"] = squared ? "linear" : "squared";
        r.outputs["alternate"] = a;
    }
    return r;
}

Outcome cmd_verify(const Options& o) {
    Outcome r;
    auto opts = o.suite_opts;
    opts.seed = o.seed;
    opts.threads = o.threads;
    r.inputs["suite"] = o.suite;
    r.inputs["lmax"] = opts.lmax;
    r.inputs["dmax"] = opts.dmax;
    r.inputs["pmax"] = opts.pmax;
    r.inputs["xmax"] = opts.xmax;
    r.inputs["samples"] = opts.samples;
    auto res = verify::run_suite(o.suite, opts);
    r.outputs = to_json(res);
    r.failed = !res.passed();
    return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Explicit height lower bounds in Q(E_tor) via a certified supersingular prime", "ssheight"};
    app.require_subcommand(1);
    app.set_version_flag("--version", report::tool_version);
    app.add_option("--threads", o.threads, "Worker threads for library stages")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", o.seed, "Seed for randomised suites");

    auto add_curve = [&](CLI::App* s, bool required) {
        auto* a = s->add_option("--curve", o.curve, "a1,a2,a3,a4,a6 as exact rationals");
        auto* b = s->add_option("--conductor", o.conductor, "Conductor N (>= 11)");
        if (required) {
            a->required();
            b->required();
        }
    };

    auto* inv = app.add_subcommand("invariants", "Exact invariants and j-dependent thresholds");
    add_curve(inv, true);

    auto* ss = app.add_subcommand("supersingular", "Find a certified supersingular prime");
    add_curve(ss, true);
    ss->add_option("--search", o.search, "elkies or direct")->check(CLI::IsMember({"elkies", "direct"}));
    ss->add_option("--min-prime", o.min_prime, "M, the least prime the threshold must reach");
    ss->add_option("--effort", o.effort, "Multiplier on trial, scan and search budgets")
        ->check(CLI::PositiveNumber);

    auto* cp = app.add_subcommand("classpoly", "Hilbert class polynomial P_D");
    cp->add_option("--d", o.D, "D with -D a discriminant")->required();

    auto* bd = app.add_subcommand("bound", "Lower bound on the height of non-torsion elements of Q(E_tor)");
    add_curve(bd, false);
    auto* pr = bd->add_option("--prime", o.prime, "A surjective supersingular prime p");
    auto* au = bd->add_flag("--auto", o.automatic, "Find the least usable supersingular prime");
    pr->excludes(au);
    bd->add_option("--mode", o.mode, "explicit, semistable, effective, cm or intro")
        ->check(CLI::IsMember({"explicit", "semistable", "effective", "cm", "intro"}));
    bd->add_option("--constant-exponent", o.constant_exponent, "21 or 31")->check(CLI::IsMember({21, 31}));
    bd->add_flag("--assume-surjective", o.assume_surjective, "Treat the prime as surjective");
    auto* ex = bd->add_option("--surjective-exceptions", o.exceptions,
                              "Complete list of non-surjective primes")
                   ->delimiter(',');
    bd->add_option("--threshold", o.threshold, "squared or linear surjectivity threshold in n")
        ->check(CLI::IsMember({"squared", "linear"}));
    bd->add_option("--c", o.c, "Constant of the effective mode")->check(CLI::PositiveNumber);
    bd->add_option("--effort", o.effort, "Multiplier on the --auto search budget")->check(CLI::PositiveNumber);

    auto* vf = app.add_subcommand("verify", "Run one numerical verification suite");
    vf->add_option("--suite", o.suite, "Suite name")->required()->check(CLI::IsMember(verify::suite_names()));
    vf->add_option("--lmax", o.suite_opts.lmax, "Largest l for lemma1 and fouvry-murty");
    vf->add_option("--dmax", o.suite_opts.dmax, "Largest D for classnum");
    vf->add_option("--pmax", o.suite_opts.pmax, "Largest p for hasse");
    vf->add_option("--xmax", o.suite_opts.xmax, "Largest x for theta");
    vf->add_option("--samples", o.suite_opts.samples, "Random samples for mignotte-sum");

    for (auto* s : {inv, ss, cp, bd, vf}) s->fallthrough();

    mpfr_prec_t prec = 128;
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        o.exceptions_given = ex->count() > 0;
        prec = default_precision();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return exit_usage;
    } catch (const Usage& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    std::string command = app.get_subcommands().front()->get_name();
    json rep;
    rep["schema"] = report::schema_id;
    rep["tool_version"] = report::tool_version;
    rep["command"] = command;
    rep["seed"] = o.seed;

    auto t0 = std::chrono::steady_clock::now();
    int code = exit_ok;
    Outcome res;
    json error = nullptr;
    try {
        if (command == "invariants") res = cmd_invariants(o, prec);
        else if (command == "supersingular") res = cmd_supersingular(o);
        else if (command == "classpoly") res = cmd_classpoly(o);
        else if (command == "bound") res = cmd_bound(o);
        else res = cmd_verify(o);
        if (res.failed) code = exit_domain;
    } catch (const Error& e) {
        code = e.exhausted() ? exit_exhausted : exit_domain;
        error = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}, {"stage", e.stage()}};
        err << "ssheight " << command << ": " << to_string(e.kind()) << ": " << e.what();
        if (!e.stage().empty()) err << " (stage " << e.stage() << ')';
        err << '\n';
    } catch (const std::invalid_argument& e) {
        code = exit_domain;
        error = {{"kind", "invalid_argument"}, {"message", e.what()}, {"stage", ""}};
        err << "ssheight " << command << ": " << e.what() << '\n';
    }
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (res.inputs.empty()) res.inputs = curve_inputs(o);
    rep["inputs"] = res.inputs;
    rep["inputs"]["precision_bits"] = prec;
    rep["inputs"]["threads"] = o.threads;
    rep["outputs"] = error.is_null() ? res.outputs : json(nullptr);
    rep["certificate"] = res.certificate;
    rep["error"] = error;
    json timings = json::object();
    if (res.certificate.is_object())
        for (auto& [k, v] : res.certificate["timings"].items()) timings[k] = v;
    timings["total"] = total;
    rep["timings"] = timings;
    out << rep.dump(2) << '\n';
    return code;
}

}  // namespace ssheight::cli
