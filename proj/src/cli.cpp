#include "bohr/cli.hpp"

#include "bohr/bases.hpp"
#include "bohr/bohr_radius.hpp"
#include "bohr/gamma.hpp"
#include "bohr/gbp.hpp"
#include "bohr/parallel.hpp"
#include "bohr/series.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bohr {

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"subcommand", c.subcommand}, {"seed", c.seed},     {"plan", c.plan},
                       {"out", c.out},               {"format", c.format}, {"params", c.params}};
}

namespace {

struct Options {
    // shared
    std::uint64_t seed = 7;
    unsigned threads = 0;
    std::string out;
    std::string format = "json";
    SamplingPlan plan;
    // bases and radii
    std::string basis = "monomial";
    int dim = 1;
    int budget = 500;
    double rho_max = 10.0;
    // curve
    std::string function = "mobius";
    double a = 0.5;
    int degree = 200;
    double decay = 0.7;
    std::string coeffs;
    double r_min = 0.01, r_max = 1.0, ref = 1.0;
    int steps = 50;
    // certificates
    double r = 1.0;
    int corpus = 200;
    double r1_factor = 2.0;
    int n_max = 64;
    std::string cert;
    // gamma
    std::string exhaustion = "plane";
    std::string z = "0.5";
    int zmax_index = 8;
    int lp_degree = 12;
    bool force_lp = false;
    double tol = 0.05;
    std::string verdict_out;
    double epsilon = 1.0;
    double k_radius = 1.0;
};

Complex parse_complex(const std::string& s) {
    std::stringstream ss(s);
    double re = 0.0, im = 0.0;
    char sep = 0;
    if (!(ss >> re)) throw InvalidInput("cannot parse complex number: " + s);
    if (ss >> sep) {
        if (sep != ',' || !(ss >> im)) throw InvalidInput("cannot parse complex number: " + s);
    }
    return {re, im};
}

BasisFamily basis_from_flag(const std::string& name, int dim) {
    if (name == "monomial") return BasisFamily::monomial(dim);
    if (name == "faber") {
        if (dim != 1) throw InvalidInput("the Faber family lives in one variable; use --dim 1");
        return BasisFamily::faber_segment();
    }
    throw InvalidInput("unknown basis: " + name);
}

ExhaustionSpec exhaustion_from_flag(const std::string& name, int count) {
    switch (exhaustion_label_from_string(name)) {
    case ExhaustionLabel::PlaneByBalls: return ExhaustionSpec::plane_by_balls(count);
    case ExhaustionLabel::UnitDiscByBalls: return ExhaustionSpec::unit_disc_by_balls(count);
    case ExhaustionLabel::EllipseFamily: return ExhaustionSpec::ellipse_family(count);
    }
    throw InvalidInput("unknown exhaustion: " + name);
}

void write_payload(const RunConfig& cfg, const std::string& payload, std::ostream& out) {
    if (cfg.out.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw InvalidInput("cannot open output file: " + cfg.out);
    f << payload;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json envelope(const RunConfig& cfg) {
    return nlohmann::json{{"schema", kSchema}, {"tool_version", kToolVersion}, {"config", cfg}};
}

using Check = std::pair<std::string, std::function<bool()>>;

std::vector<Check> selftest_checks() {
    const SamplingPlan plan;
    return {
        {"majorant of the constant 1 is 1",
         [plan] {
             return majorant(TruncatedSeries::constant(1, 1.0), BasisFamily::monomial(1), CompactSet::ball(1, 3.0),
                             plan) == 1.0;
         }},
        {"f = z has Bohr radius 1",
         [plan] {
             TruncatedSeries z(1, 1);
             z.set(MultiIndex{1}, 1.0);
             const auto r = individual_bohr_radius(
                 z, BasisFamily::monomial(1), [](double t) { return CompactSet::ball(1, t); }, 1e-3, 1.0,
                 CompactSet::ball(1, 1.0), plan);
             return std::abs(r.radius - 1.0) <= 1e-6;
         }},
        {"constant f saturates",
         [plan] {
             const auto r = individual_bohr_radius(
                 TruncatedSeries::constant(1, 2.0), BasisFamily::monomial(1),
                 [](double t) { return CompactSet::ball(1, t); }, 1e-3, 1.0, CompactSet::ball(1, 1.0), plan);
             return r.saturated;
         }},
        {"Faber member 0 is 1 and F_n = 2 T_n",
         [] {
             const auto F = BasisFamily::faber_segment();
             return basis_eval(F, MultiIndex{0}, {0.3}) == Complex(1.0) &&
                    std::abs(basis_eval(F, MultiIndex{3}, {0.5}) - Complex(2.0 * std::cos(3.0 * std::acos(0.5)))) <
                        1e-14;
         }},
        {"Faber R0 of the constant is 1",
         [plan] {
             return faber_bohr_R0({TruncatedSeries::constant(1, 1.0)}, plan).upper == 1.0;
         }},
        {"schwarz step is sharp for f = z",
         [plan] {
             TruncatedSeries z(1, 1);
             z.set(MultiIndex{1}, 1.0);
             const auto s = schwarz_step(z, 1.0, plan);
             return std::abs(s.lhs - s.bound) <= 1e-12;
         }},
        {"monomial r_tilde is 3r",
         [plan] { return find_r_tilde(BasisFamily::monomial(1), 2.0, 16, plan).parameter == 6.0; }},
        {"basis without constant member is rejected",
         [] {
             TruncatedSeries z(1, 1);
             z.set(MultiIndex{1}, 1.0);
             try {
                 certify(BasisFamily::explicit_members({z}), 1.0, CertifyOptions{}, SamplingPlan{});
             } catch (const InvalidInput&) {
                 return true;
             }
             return false;
         }},
        {"gamma vanishes at the base point",
         [plan] { return gamma_lp(CompactSet::ball(1, 2.0), 0.0, 0.0, 8, plan).value <= 1e-9; }},
        {"gamma closed form at z0 is 0", [] { return gamma_closed_form(CompactSet::ball(1, 2.0), 0.0) == 0.0; }},
        {"delta >= 1 gives the first domain",
         [plan] {
             return schwarz_property_K1(ExhaustionSpec::plane_by_balls(4), CompactSet::ball(1, 0.5), 1.0, 8, plan)
                        .index == 0;
         }},
        {"all-zero gamma curve is decay evidence",
         [] {
             GammaCurve c;
             c.n = {1, 2, 3, 4};
             c.values = {0, 0, 0, 0};
             c.methods.assign(4, GammaMethod::ClosedForm);
             return liouville_verdict(c).verdict == Verdict::DecayEvidence;
         }},
        {"constant f has zero Borel-Caratheodory gap",
         [plan] {
             const auto b = borel_caratheodory_check(TruncatedSeries::constant(1, 3.0), 1.0, 3.0, plan);
             return b.lhs == 0.0 && b.rhs == 0.0;
         }},
    };
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bohr-type inequalities for bases of entire functions", "bohr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
        sub->add_option("--threads", o.threads, "thread cap, 0 = hardware concurrency")->capture_default_str();
        sub->add_option("--out", o.out, "output path (default: stdout)");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        sub->add_option("--boundary-count", o.plan.boundary_count, "boundary samples per dimension")->capture_default_str();
        sub->add_option("--angle-count", o.plan.angle_count, "half-planes per modulus constraint")->capture_default_str();
        sub->add_option("--plan-seed", o.plan.seed, "seed of the sampling plan")->capture_default_str();
        sub->add_option("--refinement-rounds", o.plan.refinement_rounds, "golden-section polish passes")->capture_default_str();
    };
    auto basis_flags = [&o](CLI::App* sub) {
        sub->add_option("--basis", o.basis, "basis family")->check(CLI::IsMember({"monomial", "faber"}))->capture_default_str();
        sub->add_option("--dim", o.dim, "number of variables")->check(CLI::PositiveNumber)->capture_default_str();
    };

    auto* radius = app.add_subcommand("radius", "Bohr radius estimate from a seeded candidate corpus");
    common(radius);
    basis_flags(radius);
    radius->add_option("--budget", o.budget, "number of candidates")->capture_default_str();
    radius->add_option("--rho-max", o.rho_max, "largest Green level searched (faber)")->capture_default_str();

    auto* curve = app.add_subcommand("curve", "majorant curve M(r) against the reference sup S");
    common(curve);
    basis_flags(curve);
    curve->add_option("--function", o.function, "test function")->check(CLI::IsMember({"mobius", "random", "file"}))->capture_default_str();
    curve->add_option("--a", o.a, "Mobius parameter")->capture_default_str();
    curve->add_option("--degree", o.degree, "truncation degree")->capture_default_str();
    curve->add_option("--decay", o.decay, "coefficient decay of the random function")->capture_default_str();
    curve->add_option("--coeffs", o.coeffs, "series JSON file for --function file");
    curve->add_option("--r-min", o.r_min, "smallest family parameter")->capture_default_str();
    curve->add_option("--r-max", o.r_max, "largest family parameter")->capture_default_str();
    curve->add_option("--steps", o.steps, "grid intervals")->capture_default_str();
    curve->add_option("--ref", o.ref, "parameter of the reference compact")->capture_default_str();

    auto* kappa = app.add_subcommand("kappa", "upper bound for the polydisc Bohr radius");
    common(kappa);
    kappa->add_option("--dim", o.dim, "number of variables")->check(CLI::PositiveNumber)->capture_default_str();
    kappa->add_option("--budget", o.budget, "number of candidates")->capture_default_str();

    auto* certify_cmd = app.add_subcommand("certify", "build and check a Bohr certificate for B(r)");
    common(certify_cmd);
    basis_flags(certify_cmd);
    certify_cmd->add_option("--r", o.r, "radius (Green level for faber)")->capture_default_str();
    certify_cmd->add_option("--corpus", o.corpus, "test functions")->capture_default_str();
    certify_cmd->add_option("--r1-factor", o.r1_factor, "r1 = factor * r")->capture_default_str();
    certify_cmd->add_option("--n-max", o.n_max, "members checked in the r_tilde search")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "re-check a certificate on a fresh corpus");
    common(verify);
    verify->add_option("certificate", o.cert, "certificate JSON")->required();
    verify->add_option("--corpus", o.corpus, "test functions (default: the certificate's count)");

    auto* faber = app.add_subcommand("faber-r0", "corpus-relative Faber radius R0");
    common(faber);
    faber->add_option("--budget", o.budget, "test functions")->capture_default_str();
    faber->add_option("--rho-max", o.rho_max, "largest Green level searched")->capture_default_str();

    auto* gamma = app.add_subcommand("gamma", "extremal gamma_n(z) along an exhaustion");
    common(gamma);
    gamma->add_option("--exhaustion", o.exhaustion, "plane | unitdisc | ellipse")->capture_default_str();
    gamma->add_option("--z", o.z, "evaluation point, re or re,im")->capture_default_str();
    gamma->add_option("--zmax-index", o.zmax_index, "number of domains")->capture_default_str();
    gamma->add_option("--degree", o.lp_degree, "polynomial degree of the LP")->capture_default_str();
    gamma->add_flag("--lp", o.force_lp, "use the LP on discs too");
    gamma->add_option("--tol", o.tol, "decay tolerance of the verdict")->capture_default_str();
    gamma->add_option("--verdict-out", o.verdict_out, "verdict JSON path in csv mode");

    auto* bc = app.add_subcommand("bc-general", "compact K1 of the generalized Borel-Caratheodory inequality");
    common(bc);
    bc->add_option("--exhaustion", o.exhaustion, "plane | unitdisc | ellipse")->capture_default_str();
    bc->add_option("--epsilon", o.epsilon, "epsilon > 0")->capture_default_str();
    bc->add_option("--k-radius", o.k_radius, "K is the closed disc of this radius about 0")->capture_default_str();
    bc->add_option("--zmax-index", o.zmax_index, "number of domains")->capture_default_str();
    bc->add_option("--corpus", o.corpus, "test functions")->capture_default_str();
    bc->add_option("--degree", o.lp_degree, "polynomial degree of the LP")->capture_default_str();
    bc->add_flag("--lp", o.force_lp, "use the LP on discs too");

    auto* selftest = app.add_subcommand("selftest", "run the built-in example checks");
    common(selftest);

    if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
        bool known = false;
        for (const auto* sc : app.get_subcommands({})) known = known || sc->get_name() == args.front();
        if (!known) {
            err << "usage error: unknown subcommand: " << args.front() << "\n";
            return kExitUsage;
        }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        out << app.help();
        (void)e;
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    RunConfig cfg;
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.seed = o.seed;
    cfg.plan = o.plan;
    cfg.out = o.out;
    cfg.threads = o.threads;
    auto* sub = app.get_subcommands().front();
    const bool format_given = sub->count("--format") > 0;
    cfg.format = o.format;
    if (!format_given && (cfg.subcommand == "curve" || cfg.subcommand == "gamma")) cfg.format = "csv";
    for (const auto* opt : sub->get_options()) {
        const auto name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "seed" || name == "out" || name == "format" || name == "threads")
            continue;
        if (name == "boundary-count" || name == "angle-count" || name == "plan-seed" || name == "refinement-rounds")
            continue;
        const auto results = opt->reduced_results();
        if (!results.empty()) cfg.params[name] = results.front();
        else if (!opt->get_default_str().empty()) cfg.params[name] = opt->get_default_str();
    }

    try {
        cfg.plan.validate();
        if (o.threads > 0) set_max_threads(o.threads);
        const auto& s = cfg.subcommand;

        if (s == "radius" || s == "kappa") {
            RadiusEstimate est;
            if (s == "kappa" || o.basis == "monomial") {
                if (o.budget < 1) throw InvalidInput("budget must be >= 1");
                est = kappa_upper_search(o.dim, o.budget, o.seed, cfg.plan);
            } else {
                basis_from_flag(o.basis, o.dim);
                est = faber_bohr_R0(faber_test_corpus(o.budget, o.seed), cfg.plan, o.rho_max);
            }
            auto j = envelope(cfg);
            j["result"] = est;
            write_payload(cfg, json_text(j), out);
            return kExitOk;
        }

        if (s == "curve") {
            const auto B = basis_from_flag(o.basis, o.dim);
            TruncatedSeries f(o.dim, 0);
            if (o.function == "mobius") {
                f = B.kind() == BasisKind::Monomial ? mobius_series(o.a, o.degree, o.dim) : mobius_series(o.a, o.degree);
            } else if (o.function == "random") {
                f = random_series(o.dim, std::min(o.degree, o.dim == 1 ? 200 : 12), o.decay, o.seed);
            } else {
                std::ifstream in(o.coeffs);
                if (!in) throw InvalidInput("cannot read coefficient file: " + o.coeffs);
                f = series_from_json(nlohmann::json::parse(in));
            }
            if (o.steps < 1 || !(o.r_max > o.r_min) || !(o.r_min > 0.0)) throw InvalidInput("need 0 < r-min < r-max, steps >= 1");
            std::vector<double> grid;
            for (int k = 0; k <= o.steps; ++k) grid.push_back(o.r_min + (o.r_max - o.r_min) * k / o.steps);
            const int d = o.dim;
            DomainFamily family;
            CompactSet K_ref = CompactSet::segment();
            if (B.kind() == BasisKind::Monomial) {
                family = [d](double t) { return CompactSet::polydisc(d, t); };
                K_ref = CompactSet::polydisc(d, o.ref);
            } else {
                family = [](double t) { return t <= 1.0 ? CompactSet::segment() : CompactSet::bernstein_ellipse(t); };
                K_ref = o.ref <= 1.0 ? CompactSet::segment() : CompactSet::bernstein_ellipse(o.ref);
            }
            const auto mc = majorant_curve(f, B, family, grid, K_ref, cfg.plan);
            if (cfg.format == "csv") {
                write_payload(cfg, to_csv(mc), out);
            } else {
                auto j = envelope(cfg);
                j["result"] = {{"basis", mc.basis}, {"r", mc.r}, {"M", mc.values}, {"S", mc.reference_sup}};
                write_payload(cfg, json_text(j), out);
            }
            return kExitOk;
        }

        if (s == "certify") {
            CertifyOptions opt;
            opt.seed = o.seed;
            opt.corpus_size = o.corpus;
            opt.r1_factor = o.r1_factor;
            opt.n_max = o.n_max;
            const auto c = certify(basis_from_flag(o.basis, o.dim), o.r, opt, cfg.plan);
            nlohmann::json j = c;
            j["config"] = cfg;
            write_payload(cfg, json_text(j), out);
            return c.valid ? kExitOk : kExitViolation;
        }

        if (s == "verify") {
            std::ifstream in(o.cert);
            if (!in) throw InvalidInput("cannot read certificate: " + o.cert);
            const auto c = certificate_from_json(nlohmann::json::parse(in));
            const int count = sub->count("--corpus") > 0 ? o.corpus : std::max(1, c.checked_count);
            const auto check = verify_certificate(c, count, o.seed);
            const bool ok = c.valid && check.worst_slack >= -1e-6;
            auto j = envelope(cfg);
            j["result"] = {{"checked", check.checked},
                           {"worst_slack", check.worst_slack},
                           {"valid", ok},
                           {"certificate_R", c.R},
                           {"witness", check.witness}};
            write_payload(cfg, json_text(j), out);
            return ok ? kExitOk : kExitViolation;
        }

        if (s == "faber-r0") {
            const auto est = faber_bohr_R0(faber_test_corpus(o.budget, o.seed), cfg.plan, o.rho_max);
            auto j = envelope(cfg);
            j["result"] = est;
            write_payload(cfg, json_text(j), out);
            return kExitOk;
        }

        if (s == "gamma") {
            const auto E = exhaustion_from_flag(o.exhaustion, o.zmax_index);
            const auto gc = gamma_curve(E, parse_complex(o.z), o.lp_degree, cfg.plan, o.force_lp);
            nlohmann::json verdict;
            if (gc.values.size() >= 4) verdict = liouville_verdict(gc, o.tol);
            else verdict = {{"verdict", nullptr}, {"note", "fewer than 4 curve entries"}};
            if (cfg.format == "csv") {
                write_payload(cfg, to_csv(gc), out);
                if (!o.verdict_out.empty()) {
                    std::ofstream v(o.verdict_out);
                    if (!v) throw InvalidInput("cannot open verdict file: " + o.verdict_out);
                    auto j = envelope(cfg);
                    j["verdict"] = verdict;
                    v << json_text(j);
                }
            } else {
                auto j = envelope(cfg);
                j["exhaustion"] = E;
                j["curve"] = gc;
                j["verdict"] = verdict;
                write_payload(cfg, json_text(j), out);
            }
            return kExitOk;
        }

        if (s == "bc-general") {
            const auto E = exhaustion_from_flag(o.exhaustion, o.zmax_index);
            const auto report = borel_caratheodory_general(E, CompactSet::ball(1, o.k_radius), o.epsilon,
                                                           bc_corpus(o.corpus, o.seed), o.lp_degree, cfg.plan,
                                                           o.force_lp);
            auto j = envelope(cfg);
            j["result"] = report;
            write_payload(cfg, json_text(j), out);
            return report.holds ? kExitOk : kExitViolation;
        }

        if (s == "selftest") {
            std::ostringstream os;
            int failed = 0;
            auto results = nlohmann::json::array();
            for (const auto& [name, fn] : selftest_checks()) {
                bool ok = false;
                try {
                    ok = fn();
                } catch (const std::exception&) {
                    ok = false;
                }
                if (!ok) ++failed;
                results.push_back({{"check", name}, {"pass", ok}});
                os << (ok ? "PASS " : "FAIL ") << name << "\n";
            }
            if (cfg.format == "json") {
                auto j = envelope(cfg);
                j["result"] = {{"checks", results}, {"failed", failed}};
                write_payload(cfg, json_text(j), out);
            } else {
                write_payload(cfg, os.str(), out);
            }
            return failed == 0 ? kExitOk : kExitViolation;
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return kExitFailure;
    }
    err << "usage error: unhandled subcommand\n";
    return kExitUsage;
}

}  // namespace bohr
