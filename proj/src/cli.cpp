#include "qnr/cli.hpp"

#include "qnr/acceptance.hpp"
#include "qnr/c_radius.hpp"
#include "qnr/dual.hpp"
#include "qnr/isometry.hpp"
#include "qnr/orbit.hpp"
#include "qnr/parallel.hpp"
#include "qnr/radius.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>

namespace qnr::cli {

namespace {

struct Settings {
    std::string input;
    std::string c_file;
    std::string q_text;
    std::string format = "json";
    std::string method = "reduced";
    std::string map_spec;
    std::string mode = "identity";
    std::string x_file;
    std::string w_file;
    std::size_t restarts = 0;
    std::size_t count = 100;
    std::size_t trials = 20;
    std::size_t n = 3;
    std::size_t column = 3;
    std::size_t threads = 0;
    std::uint64_t seed = 0;
    double gap_tol = 0.02;
    double t = 0.0;
    double theta = 0.0;
    double multiplier = 1.0;
    double scale = 1.0;
    std::optional<double> p_prime;
    bool allow_large = false;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

QParameter parse_q(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ValidationError("--q: '" + text + "' is not a decimal number");
    }
    if (used != text.size()) throw ValidationError("--q: '" + text + "' is not a decimal number");
    return QParameter(v);
}

QParameter require_q(const Settings& s) {
    if (s.q_text.empty()) throw ValidationError("--q is required");
    return parse_q(s.q_text);
}

// A file holding either a bare document or a command result whose output
// contains `key`.
Json unwrap(const Json& j, const char* key) {
    if (j.is_object() && j.contains("output") && j.at("output").is_object() && j.at("output").contains(key))
        return j.at("output").at(key);
    return j;
}

Matrix load_matrix(const std::string& path, const char* flag) {
    if (path.empty()) throw ValidationError(std::string(flag) + " is required");
    return matrix_from_json(unwrap(read_json_file(path), "matrix"));
}

IsometryDescriptor load_descriptor(const std::string& path) {
    if (path.empty()) throw ValidationError("--map-spec is required");
    try {
        return descriptor_from_json(unwrap(read_json_file(path), "descriptor"));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("--map-spec: ") + e.what());
    }
}

OptimizerConfig optimizer(const Settings& s, std::size_t default_restarts = 32) {
    OptimizerConfig cfg;
    cfg.restarts = s.restarts > 0 ? s.restarts : default_restarts;
    cfg.seed = s.seed;
    return cfg;
}

Json vector_json(const Vector& v) { return to_json(Matrix(v)); }

Json estimate_json(const RadiusEstimate& e) {
    Json j{{"value", e.value}, {"witness_x", vector_json(e.witness_x)}};
    if (e.witness_y) j["witness_y"] = vector_json(*e.witness_y);
    if (e.witness_unitary) j["witness_unitary"] = to_json(*e.witness_unitary);
    return j;
}

Json estimate_diagnostics(const RadiusEstimate& e) {
    return Json{{"converged", e.converged},
                {"restarts_used", e.restarts_used},
                {"best_gradient_norm", e.best_gradient_norm}};
}

struct Outcome {
    Json output;
    Json diagnostics = Json::object();
    bool converged = true;
    /// Raw text replacing the JSON document (CSV output).
    std::optional<std::string> text;
};

Outcome cmd_radius(const Settings& s) {
    const Matrix a = load_matrix(s.input, "--input");
    RadiusEstimate est;
    std::string kind;
    if (!s.c_file.empty()) {
        const Matrix c = load_matrix(s.c_file, "--c");
        est = c_radius(a, c, optimizer(s, 64));
        kind = "c";
    } else if (!s.q_text.empty()) {
        const QParameter q = parse_q(s.q_text);
        if (s.method == "direct") {
            est = q_radius_direct(a, q, optimizer(s));
        } else {
            est = q_radius_reduced(a, q, optimizer(s));
        }
        kind = "q";
    } else {
        est = numerical_radius(a, optimizer(s));
        kind = "classical";
    }
    Outcome o;
    o.output = estimate_json(est);
    o.output["kind"] = kind;
    o.diagnostics = estimate_diagnostics(est);
    o.converged = est.converged;
    if (s.format == "csv") {
        o.text = "kind,value,converged\n" + kind + "," + fmt17(est.value) + "," + (est.converged ? "true" : "false") + "\n";
    }
    return o;
}

Outcome cmd_range(const Settings& s) {
    const Matrix a = load_matrix(s.input, "--input");
    std::vector<Complex> pts;
    if (!s.c_file.empty()) {
        pts = c_range_sample(a, load_matrix(s.c_file, "--c"), s.count, s.seed);
    } else {
        const QParameter q = s.q_text.empty() ? QParameter(1.0) : parse_q(s.q_text);
        pts = q_range_sample(a, q, s.count, s.seed);
    }
    Outcome o;
    Json arr = Json::array();
    std::string csv = "re,im\n";
    for (const Complex& z : pts) {
        arr.push_back(complex_to_json(z));
        csv += fmt17(z.real()) + "," + fmt17(z.imag()) + "\n";
    }
    o.output = Json{{"points", std::move(arr)}};
    o.diagnostics = Json{{"count", pts.size()}};
    if (s.format == "csv") o.text = csv;
    return o;
}

Outcome cmd_orbit_check(const Settings& s) {
    const OrbitMembership m = is_in_orbit(load_matrix(s.input, "--input"), require_q(s));
    Outcome o;
    o.output = Json{{"in_orbit", m.in_orbit}, {"rank", m.rank}, {"abs_trace", m.abs_trace}, {"hs_norm", m.hs_norm}};
    return o;
}

Outcome cmd_orbit_make(const Settings& s) {
    const QParameter q = require_q(s);
    Rng rng(s.seed);
    Vector x;
    Vector w;
    if (!s.x_file.empty()) {
        x = vector_from_json(read_json_file(s.x_file));
        w = s.w_file.empty() ? rng.unit_vector_orthogonal_to(x) : vector_from_json(read_json_file(s.w_file));
    } else {
        x = rng.unit_vector(s.n);
        w = rng.unit_vector_orthogonal_to(x);
    }
    const OrbitElement e = make_orbit_element(q, x, w, std::polar(1.0, s.theta));
    Outcome o;
    o.output = to_json(e);
    return o;
}

Outcome cmd_orbit_canon(const Settings& s) {
    const QParameter q = require_q(s);
    const Matrix a = load_matrix(s.input, "--input");
    const CanonicalForm cf = canonicalize(a, q);
    const auto n = static_cast<std::size_t>(a.rows());
    const double residual = (cf.theta * (cf.u.adjoint() * build_cq(q, n) * cf.u) - a).norm();
    Outcome o;
    o.output = Json{{"theta", complex_to_json(cf.theta)}, {"U", to_json(cf.u)}, {"residual", residual}};
    return o;
}

Outcome cmd_orbit_decompose(const Settings& s) {
    const QParameter q = require_q(s);
    const Matrix r = load_matrix(s.input, "--input");
    const RankOneSplit split = decompose_rank_one(r, q, s.t, s.column, s.p_prime);
    Outcome o;
    o.output = Json{{"first", to_json(split.first)},
                    {"second", to_json(split.second)},
                    {"xi", complex_to_json(split.xi)},
                    {"eta", complex_to_json(split.eta)},
                    {"residual", (split.first.matrix + split.second.matrix - r).norm()}};
    return o;
}

Outcome cmd_dual(const Settings& s) {
    const QParameter q = require_q(s);
    DualOptions opts;
    opts.gap_tol = s.gap_tol;
    opts.allow_large = s.allow_large;
    const DualEstimate d = dual_radius(load_matrix(s.input, "--input"), q, optimizer(s), opts);
    Outcome o;
    o.output = to_json(d);
    o.diagnostics = Json{{"converged", d.converged}, {"iterations", d.iterations}, {"gap", d.gap()}};
    o.converged = d.converged;
    return o;
}

DaggerMode parse_mode(const std::string& name) {
    try {
        return dagger_mode_from_string(name);
    } catch (const Error&) {
        throw ValidationError("--mode: unknown dagger mode '" + name + "'");
    }
}

Outcome cmd_isometry_make(const Settings& s) {
    if (s.n < 1) throw ValidationError("--n must be >= 1");
    Rng rng(s.seed);
    const IsometryDescriptor d = random_descriptor(s.n, parse_mode(s.mode), rng);
    Outcome o;
    o.output = Json{{"descriptor", to_json(d)}};
    return o;
}

Outcome cmd_isometry_verify(const Settings& s) {
    const QParameter q = s.q_text.empty() ? QParameter(0.5) : parse_q(s.q_text);
    const IsometryDescriptor d = load_descriptor(s.map_spec);
    BlackBoxMap f = as_map(d);
    if (s.multiplier != 1.0) {
        const double k = s.multiplier;
        f.eval = [d, k](const Matrix& a) { return Matrix(k * qnr::apply(d, a)); };
    }
    const IsometryReport rep = verify_isometry(f, q, s.trials, s.seed, optimizer(s));
    Json trials = Json::array();
    for (const auto& t : rep.trials)
        trials.push_back({{"radius_before", t.radius_before}, {"radius_after", t.radius_after}, {"defect", t.defect}});
    Outcome o;
    o.output = Json{{"passed", rep.passed},
                    {"max_defect", rep.max_defect},
                    {"worst_trial", rep.worst_trial},
                    {"tolerance", kIsometryDefectTol},
                    {"trials", std::move(trials)}};
    o.diagnostics = Json{{"converged", rep.converged}};
    o.converged = rep.converged;
    return o;
}

Outcome cmd_isometry_recover(const Settings& s) {
    const QParameter q = s.q_text.empty() ? QParameter(0.5) : parse_q(s.q_text);
    const IsometryDescriptor d = load_descriptor(s.map_spec);
    const auto n = static_cast<std::size_t>(d.u.rows());
    const RecoveryResult rec = recover_parameters(as_map(d), q, n);

    Rng rng(s.seed);
    double round_trip = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Matrix a = rng.dense(n);
        const Matrix fa = qnr::apply(d, a);
        round_trip = std::max(round_trip, (qnr::apply(rec.descriptor, a) - fa).norm() / std::max(fa.norm(), 1e-12));
    }
    Outcome o;
    o.output = Json{{"descriptor", to_json(rec.descriptor)},
                    {"validation_residual", rec.residual},
                    {"round_trip_residual", round_trip}};
    o.diagnostics = Json{{"probes", rec.probes}};
    return o;
}

Json inequality_json(const std::vector<InequalityCheck>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"holds", c.holds}, {"slack", c.slack}});
    return arr;
}

Outcome cmd_bounds(const Settings& s) {
    const QParameter q = require_q(s);
    const Matrix a = load_matrix(s.input, "--input");
    const EquivalenceReport eq = check_equivalence(a, q, optimizer(s));
    Outcome o;
    o.output = Json{{"equivalence",
                     {{"r", eq.r},
                      {"r_q", eq.r_q},
                      {"op_norm", eq.op_norm},
                      {"beta", eq.beta},
                      {"all_hold", eq.all_hold()},
                      {"checks", inequality_json(eq.checks)}}}};
    o.converged = eq.converged;
    if (a.rows() >= 2 && (static_cast<std::size_t>(a.rows()) <= DualOptions{}.max_dim || s.allow_large)) {
        DualOptions opts;
        opts.gap_tol = s.gap_tol;
        opts.allow_large = s.allow_large;
        const SandwichReport sw = dual_trace_sandwich(a, q, optimizer(s), opts);
        o.output["sandwich"] = Json{{"trace_norm", sw.trace_norm},
                                    {"lower", sw.lower},
                                    {"upper", sw.upper},
                                    {"beta", sw.beta},
                                    {"gap", sw.gap},
                                    {"trace_below_upper", sw.trace_below_upper},
                                    {"lower_below_beta", sw.lower_below_beta},
                                    {"within_gap", sw.within_gap},
                                    {"holds", sw.holds()}};
    } else {
        o.output["sandwich"] = nullptr;
        o.diagnostics["sandwich_skipped"] = "matrix size outside the dual solver range";
    }
    o.diagnostics["converged"] = eq.converged;
    return o;
}

Outcome cmd_selftest(const Settings& s) {
    if (!(s.scale > 0.0 && s.scale <= 1.0)) throw ValidationError("--scale must lie in (0, 1]");
    Json report = acceptance::selftest_report(s.seed, s.scale);
    Outcome o;
    o.converged = report.at("passed").get<bool>();
    if (s.format == "text") {
        std::string text;
        for (const auto& line : report.at("table")) text += line.get<std::string>() + "\n";
        text += o.converged ? "selftest PASS\n" : "selftest FAIL\n";
        o.text = text;
    }
    o.output = std::move(report);
    return o;
}

std::uint64_t default_seed() {
    const char* env = std::getenv("QNR_SEED");
    if (env == nullptr || *env == '\0') return 0;
    const std::string text(env);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.front() == '-') throw ValidationError("QNR_SEED: '" + text + "' is not a seed");
    return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    std::string command;
    Json inputs = Json::object();

    auto emit_error = [&](const std::string& message) {
        err << "error: " << message << "\n";
        const Json doc{{"command", command},
                       {"inputs", inputs},
                       {"output", nullptr},
                       {"diagnostics", {{"message", message}}},
                       {"status", "error"}};
        out << doc.dump(2) << "\n";
        return kExitInput;
    };

    try {
        s.seed = default_seed();
    } catch (const Error& e) {
        return emit_error(e.what());
    }

    CLI::App app{"q-numerical radius toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for every subcommand");

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", s.seed, "random seed (default: QNR_SEED or 0)");
        sub->add_option("--threads", s.threads, "cap on worker threads (0 = hardware)");
    };
    auto with_q = [&](CLI::App* sub, const char* help) { sub->add_option("--q", s.q_text, help); };
    auto with_input = [&](CLI::App* sub) { sub->add_option("--input", s.input, "matrix JSON file"); };
    auto with_restarts = [&](CLI::App* sub) { sub->add_option("--restarts", s.restarts, "multi-start restarts"); };

    auto* radius = app.add_subcommand("radius", "classical, q- or C-numerical radius");
    with_input(radius);
    with_q(radius, "q in (0, 1]; omit for the classical radius");
    radius->add_option("--c", s.c_file, "C matrix JSON file for the C-numerical radius");
    radius->add_option("--method", s.method, "reduced|direct")->check(CLI::IsMember({"reduced", "direct"}));
    radius->add_option("--format", s.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    with_restarts(radius);
    common(radius);

    auto* range = app.add_subcommand("range", "sampled points of W_q(A) or W_C(A)");
    with_input(range);
    with_q(range, "q in (0, 1] (default 1)");
    range->add_option("--c", s.c_file, "C matrix JSON file");
    range->add_option("--count", s.count, "number of points");
    range->add_option("--format", s.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    common(range);

    auto* orbit = app.add_subcommand("orbit", "saturated unitary orbit of C_q");
    orbit->require_subcommand(1);
    auto* check = orbit->add_subcommand("check", "membership test");
    with_input(check);
    with_q(check, "q in (0, 1]");
    common(check);
    auto* make = orbit->add_subcommand("make", "build theta x (x) (q x + p w)^*");
    with_q(make, "q in (0, 1]");
    make->add_option("--n", s.n, "dimension for random x, w");
    make->add_option("--x", s.x_file, "unit vector x (JSON)");
    make->add_option("--w", s.w_file, "unit vector w orthogonal to x (JSON)");
    make->add_option("--theta", s.theta, "phase angle of theta");
    common(make);
    auto* canon = orbit->add_subcommand("canon", "canonical form theta U^* C_q U");
    with_input(canon);
    with_q(canon, "q in (0, 1]");
    common(canon);
    auto* decompose = orbit->add_subcommand("decompose", "split a rank-one R into two orbit members");
    with_input(decompose);
    with_q(decompose, "q in (0, 1)");
    decompose->add_option("--t", s.t, "family parameter t");
    decompose->add_option("--column", s.column, "one-based column index k >= 3");
    decompose->add_option("--p-prime", s.p_prime, "p' in [|eta|/2, p)");
    common(decompose);

    auto* dual = app.add_subcommand("dual", "two-sided estimate of the dual norm r_q^*");
    with_input(dual);
    with_q(dual, "q in (0, 1]");
    dual->add_option("--gap-tol", s.gap_tol, "relative gap target");
    dual->add_flag("--allow-large", s.allow_large, "permit n > 4");
    with_restarts(dual);
    common(dual);

    auto* iso = app.add_subcommand("isometry", "isometries S0 + mu U^* A^dag U");
    iso->require_subcommand(1);
    auto* iso_make = iso->add_subcommand("make", "random descriptor");
    iso_make->add_option("--n", s.n, "dimension");
    iso_make->add_option("--mode", s.mode, "identity|transpose|adjoint|conjugate");
    common(iso_make);
    auto* iso_verify = iso->add_subcommand("verify", "numerical isometry test");
    iso_verify->add_option("--map-spec", s.map_spec, "descriptor JSON file");
    with_q(iso_verify, "q in (0, 1] (default 0.5)");
    iso_verify->add_option("--trials", s.trials, "number of random pairs");
    iso_verify->add_option("--multiplier", s.multiplier, "scale the map output (1 keeps the descriptor map)");
    with_restarts(iso_verify);
    common(iso_verify);
    auto* iso_recover = iso->add_subcommand("recover", "recover (S0, mu, U, mode) from the map");
    iso_recover->add_option("--map-spec", s.map_spec, "descriptor JSON file");
    with_q(iso_recover, "q in (0, 1] (default 0.5)");
    common(iso_recover);

    auto* bounds = app.add_subcommand("bounds", "norm-equivalence and trace-norm sandwich report");
    with_input(bounds);
    with_q(bounds, "q in (0, 1]");
    bounds->add_option("--gap-tol", s.gap_tol, "relative gap target for the dual estimate");
    bounds->add_flag("--allow-large", s.allow_large, "permit n > 4 in the dual estimate");
    with_restarts(bounds);
    common(bounds);

    auto* selftest = app.add_subcommand("selftest", "oracle cross-checks and acceptance criteria");
    selftest->add_option("--scale", s.scale, "fraction of nominal trial counts");
    selftest->add_option("--format", s.format, "json|text")->check(CLI::IsMember({"json", "text"}));
    common(selftest);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return emit_error(e.what());
    }

    for (CLI::App* sub = &app; sub != nullptr;) {
        const auto subs = sub->get_subcommands();
        if (subs.empty()) break;
        sub = subs.front();
        command += (command.empty() ? "" : " ") + sub->get_name();
        for (const CLI::Option* opt : sub->get_options()) {
            if (opt->count() == 0 || opt->get_name() == "--help") continue;
            const auto& res = opt->results();
            inputs[opt->get_name()] = res.size() == 1 ? Json(res.front()) : Json(res);
        }
    }
    inputs["seed"] = s.seed;
    parallel::set_max_threads(s.threads);

    Outcome o;
    try {
        if (command == "radius") o = cmd_radius(s);
        else if (command == "range") o = cmd_range(s);
        else if (command == "orbit check") o = cmd_orbit_check(s);
        else if (command == "orbit make") o = cmd_orbit_make(s);
        else if (command == "orbit canon") o = cmd_orbit_canon(s);
        else if (command == "orbit decompose") o = cmd_orbit_decompose(s);
        else if (command == "dual") o = cmd_dual(s);
        else if (command == "isometry make") o = cmd_isometry_make(s);
        else if (command == "isometry verify") o = cmd_isometry_verify(s);
        else if (command == "isometry recover") o = cmd_isometry_recover(s);
        else if (command == "bounds") o = cmd_bounds(s);
        else if (command == "selftest") o = cmd_selftest(s);
        else return emit_error("unknown command '" + command + "'");
    } catch (const Error& e) {
        return emit_error(e.what());
    } catch (const nlohmann::json::exception& e) {
        return emit_error(std::string("malformed JSON: ") + e.what());
    }

    const int code = o.converged ? kExitOk : kExitNotConverged;
    if (o.text) {
        out << *o.text;
    } else {
        const char* status = o.converged ? "ok" : (command == "selftest" ? "failed" : "not_converged");
        const Json doc{{"command", command},
                       {"inputs", std::move(inputs)},
                       {"output", std::move(o.output)},
                       {"diagnostics", std::move(o.diagnostics)},
                       {"status", status}};
        out << doc.dump(2) << "\n";
    }
    if (!o.converged) err << (command == "selftest" ? "warning: self-test checks failed\n" : "warning: not converged\n");
    return code;
}

}  // namespace qnr::cli
