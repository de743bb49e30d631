#include "bohr/gbp.hpp"

#include "bohr/bohr_radius.hpp"
#include "bohr/parallel.hpp"
#include "bohr/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bohr {

namespace {

Point origin(int d) { return Point(static_cast<std::size_t>(d), Complex(0.0, 0.0)); }

bool is_origin(const Point& z) {
    return std::all_of(z.begin(), z.end(), [](const Complex& c) { return c == Complex(0.0, 0.0); });
}

bool faber_root(const BasisFamily& B) { return B.root().kind() == BasisKind::FaberSegment; }

/// Family shifted at the origin: psi_0 = 1, psi_n = phi_n - phi_n(0).
BasisFamily psi_system(const BasisFamily& B) {
    const auto& base = B.kind() == BasisKind::Shifted ? B.base() : B;
    return shift_basis(base, origin(B.dimension()));
}

/// Shifted directly at 0 over an unshifted family.
bool zero_shift_of(const BasisFamily& B, BasisKind root_kind) {
    return B.kind() == BasisKind::Shifted && B.base().kind() == root_kind && is_origin(B.shift_point());
}

double green_level(const CompactSet& K) {
    if (K.is<Segment>()) return 1.0;
    if (K.is<BernsteinEllipse>()) return K.as<BernsteinEllipse>().rho;
    throw InvalidInput("expected the segment or a Bernstein ellipse, got " + K.kind_name());
}

double compact_parameter(const CompactSet& K) {
    if (K.is<Ball>()) return K.as<Ball>().radius;
    return green_level(K);
}

double faber_constant(double rho, double rho1, bool shifted_at_zero) {
    const double q1 = rho / rho1;
    const double q2 = 1.0 / (rho * rho1);
    double c = 1.0 + q1 / (1.0 - q1) + q2 / (1.0 - q2);
    // |F_n(0)| = 2 for even n
    if (shifted_at_zero) c += 2.0 / (rho1 * rho1 - 1.0);
    return c;
}

std::vector<MultiIndex> nonzero_indices(const BasisFamily& B, int n_max) {
    auto idx = B.indices(n_max);
    const auto zero = B.zero_index();
    idx.erase(std::remove(idx.begin(), idx.end(), zero), idx.end());
    return idx;
}

int default_degree(const BasisFamily& B) {
    if (B.root().kind() == BasisKind::Explicit) return static_cast<int>(B.root().members().size()) - 1;
    if (B.dimension() == 1) return 24;
    return B.dimension() == 2 ? 10 : 6;
}

}  // namespace

CompactSet certificate_compact(const BasisFamily& B, double r) {
    if (!(r > 0.0)) throw InvalidInput("radius must be positive");
    if (faber_root(B)) return r <= 1.0 ? CompactSet::segment() : CompactSet::bernstein_ellipse(r);
    return CompactSet::ball(B.dimension(), r);
}

AbsoluteConstant absolute_basis_constant(const BasisFamily& B, double r, double r1, const SamplingPlan& plan,
                                         std::uint64_t seed) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    if (!(r1 > r)) throw InvalidInput("r1 must exceed r");
    const int d = B.dimension();
    const bool monomial = B.kind() == BasisKind::Monomial || zero_shift_of(B, BasisKind::Monomial);
    if (monomial) return {std::pow(r1 / (r1 - r), d), true, "cauchy-polydisc"};

    const bool faber = B.kind() == BasisKind::FaberSegment;
    const bool faber0 = zero_shift_of(B, BasisKind::FaberSegment);
    if (faber || faber0) {
        if (r < 1.0) throw InvalidInput("Faber levels are Green parameters >= 1");
        return {faber_constant(r, r1, faber0), true, "chebyshev-coefficient-bound"};
    }

    // Empirical lower bound; never certified.
    const auto K = certificate_compact(B, r);
    const auto K1 = certificate_compact(B, r1);
    constexpr int kTrials = 64;
    std::vector<double> ratios(kTrials, 0.0);
    const int degree = default_degree(B);
    parallel_for(kTrials, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        TruncatedSeries c(d, degree);
        const double decay = rng.uniform(0.2, 1.0) / r1;
        for (const auto& n : B.indices(degree)) c.set(n, rng.unit_disc() * std::pow(decay, n.total_degree()));
        const double top = sup_norm(expansion_function(B, c), K1, plan);
        if (top > 0.0) ratios[i] = majorant(c, B, K, plan) / top;
    });
    return {*std::max_element(ratios.begin(), ratios.end()), false, "empirical"};
}

SchwarzStep schwarz_step(const TruncatedSeries& f, double r, const SamplingPlan& plan) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    const Complex f0 = f.coefficient(MultiIndex(std::vector<int>(static_cast<std::size_t>(f.dimension()), 0)));
    if (std::abs(f0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "schwarz step needs f(0) = 0, got " << f0;
        throw InvalidInput(os.str());
    }
    auto g = [&f](const Point& z) { return eval(f, z); };
    const int d = f.dimension();
    return {sup_norm(g, CompactSet::ball(d, r), plan), sup_norm(g, CompactSet::ball(d, 3.0 * r), plan) / 3.0};
}

BorelCaratheodoryCheck borel_caratheodory_check(const TruncatedSeries& f, double r1, double r2,
                                                const SamplingPlan& plan) {
    if (!(r1 > 0.0) || !(r2 > r1)) throw InvalidInput("need 0 < r1 < r2");
    const Complex f0 = f.coefficient(MultiIndex(std::vector<int>(static_cast<std::size_t>(f.dimension()), 0)));
    auto g = [&f, f0](const Point& z) { return eval(f, z) - f0; };
    const int d = f.dimension();
    const double lhs = sup_norm(g, CompactSet::ball(d, r1), plan);
    const double rhs = 2.0 * r1 / (r2 - r1) * sup_real_part(g, CompactSet::ball(d, r2), plan);
    return {lhs, rhs};
}

double ratio_sum(const BasisFamily& B, const CompactSet& K, const CompactSet& K1, int n_max,
                 const SamplingPlan& plan) {
    if (n_max < 1) throw InvalidInput("n_max must be >= 1");
    double sum = 0.0;
    for (const auto& n : nonzero_indices(B, n_max)) sum += member_sup(B, n, K, plan) / member_sup(B, n, K1, plan);
    return sum;
}

RTilde find_r_tilde(const BasisFamily& B, const CompactSet& K, int n_max, const SamplingPlan& plan,
                    int max_doublings) {
    if (n_max < 1) throw InvalidInput("n_max must be >= 1");
    if (!B.has_constant_member()) throw InvalidInput("basis has no constant member at index 0");
    const auto idx = nonzero_indices(B, n_max);
    const Point z0 = origin(B.dimension());
    std::vector<double> at_zero;
    at_zero.reserve(idx.size());
    for (const auto& n : idx) at_zero.push_back(std::abs(basis_eval(B, n, z0)));

    RTilde out;
    double worst_ratio = 0.0;
    MultiIndex worst_index = idx.front();
    for (int k = 0; k <= max_doublings; ++k) {
        const double lambda = 3.0 * std::ldexp(1.0, k);
        const auto Kt = dilate(K, lambda);
        double max_ratio = 0.0;
        MultiIndex arg = idx.front();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (at_zero[i] == 0.0) continue;
            const double ratio = at_zero[i] / member_sup(B, idx[i], Kt, plan);
            if (ratio > max_ratio) {
                max_ratio = ratio;
                arg = idx[i];
            }
        }
        if (!out.max_ratios.empty() && max_ratio > out.max_ratios.back()) out.ratios_decreasing = false;
        out.tested_dilations.push_back(lambda);
        out.max_ratios.push_back(max_ratio);
        worst_ratio = max_ratio;
        worst_index = arg;
        if (max_ratio <= 0.25) {
            out.compact = Kt;
            out.parameter = compact_parameter(Kt);
            out.dilation = lambda;
            break;
        }
    }
    if (out.dilation == 0.0) {
        std::ostringstream os;
        os << "no r_tilde found within " << max_doublings << " doublings; worst index " << worst_index.exponents[0];
        for (std::size_t k = 1; k < worst_index.size(); ++k) os << "," << worst_index.exponents[k];
        os << " with ratio " << worst_ratio;
        throw NumericalFailure(os.str());
    }

    const auto& root = B.root();
    const bool zero_at_origin = std::all_of(at_zero.begin(), at_zero.end(), [](double v) { return v == 0.0; });
    if (root.kind() == BasisKind::Monomial && (B.kind() == BasisKind::Monomial || zero_at_origin))
        out.tail_argument = "monomials vanish at 0 for n >= 1; every ratio is 0";
    else if (root.kind() == BasisKind::FaberSegment && zero_at_origin)
        out.tail_argument = "members shifted at 0 vanish there; every ratio is 0";
    else if (B.kind() == BasisKind::FaberSegment)
        out.tail_argument =
            "|F_n(0)| <= 2 and |F_n|_{E(rho)} = rho^n + rho^-n >= rho^n, so the ratio is below 2 rho^-n "
            "and decreases geometrically past n_max";
    else
        out.tail_argument = "not certified beyond n_max";
    return out;
}

RTilde find_r_tilde(const BasisFamily& B, double r, int n_max, const SamplingPlan& plan) {
    return find_r_tilde(B, certificate_compact(B, r), n_max, plan);
}

std::vector<TruncatedSeries> certificate_corpus(const BasisFamily& B, int size, std::uint64_t seed, double r,
                                                double R) {
    if (size < 1) throw InvalidInput("corpus size must be >= 1");
    if (!(r > 0.0) || !(R >= r)) throw InvalidInput("need 0 < r <= R");
    const int d = B.dimension();
    const int top = default_degree(B);
    std::vector<TruncatedSeries> out;
    out.reserve(static_cast<std::size_t>(size));
    TruncatedSeries one(d, 0);
    one.set(B.zero_index(), 1.0);
    out.push_back(one);
    Rng rng(derive_seed(seed, 0xc0));
    // decay spans near-constant functions on K_R up to coefficients of size 2^n on K_r
    const double lo = std::log(0.05 / R), hi = std::log(2.0 / r);
    for (int i = 1; i < size; ++i) {
        const int degree = 1 + static_cast<int>(rng.uniform() * top);
        const double decay = std::exp(rng.uniform(lo, hi));
        const bool boost = rng.uniform() < 0.25;
        const double boost_factor = std::pow(10.0, rng.uniform(0.0, 2.0));
        Rng coeff(derive_seed(seed, static_cast<std::uint64_t>(i)));
        TruncatedSeries f(d, degree);
        for (const auto& n : B.indices(degree)) f.set(n, coeff.unit_disc() * std::pow(decay, n.total_degree()));
        if (boost) f.set(B.zero_index(), f.coefficient(B.zero_index()) * boost_factor);
        out.push_back(std::move(f));
    }
    return out;
}

CorpusCheck check_inequality(const BasisFamily& B, const CompactSet& K, const CompactSet& K_out,
                             const std::vector<TruncatedSeries>& corpus, const SamplingPlan& plan) {
    struct Row {
        double majorant = 0.0, sup = 0.0;
    };
    std::vector<Row> rows(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        rows[i].majorant = majorant(corpus[i], B, K, plan);
        rows[i].sup = sup_norm(expansion_function(B, corpus[i]), K_out, plan);
    });
    CorpusCheck out;
    out.checked = static_cast<int>(corpus.size());
    out.worst_slack = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double slack = rows[i].sup - rows[i].majorant;
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            worst = i;
        }
    }
    if (!corpus.empty())
        out.witness = {{"index", worst},
                       {"function", corpus[worst]},
                       {"majorant", rows[worst].majorant},
                       {"sup", rows[worst].sup}};
    return out;
}

GbpCertificate certify(const BasisFamily& B, double r, const CertifyOptions& options, const SamplingPlan& plan) {
    plan.validate();
    if (!B.has_constant_member())
        throw InvalidInput("basis has no constant member at index 0; no compact K1 can exist");
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    if (!(options.r1_factor > 1.0)) throw InvalidInput("r1 factor must exceed 1");
    if (options.corpus_size < 1) throw InvalidInput("corpus size must be >= 1");

    GbpCertificate c;
    c.basis = B;
    c.plan = plan;
    c.n_max = options.n_max;
    c.corpus_seed = options.seed;
    c.K = certificate_compact(B, r);
    c.r = compact_parameter(c.K);

    const auto rt = find_r_tilde(B, c.K, options.n_max, plan);
    c.r_tilde = rt.parameter;
    c.r_tilde_ratios = rt.max_ratios;
    c.tail_argument = rt.tail_argument;
    c.shift_route = std::any_of(rt.max_ratios.begin(), rt.max_ratios.end(), [](double v) { return v > 0.0; });

    const auto psi = psi_system(B);
    const bool ball_geometry = !faber_root(B);
    CompactSet Ke = c.K;
    if (c.shift_route) {
        Ke = rt.compact;
        if (!ball_geometry) {
            // On balls |psi_n|_K <= |psi_n|_{K~}/3 is the Schwarz lemma; on
            // ellipses it is checked member by member.
            const auto idx = nonzero_indices(psi, options.n_max);
            double lambda = rt.dilation;
            for (int k = 0;; ++k) {
                const bool ok = std::all_of(idx.begin(), idx.end(), [&](const MultiIndex& n) {
                    return member_sup(psi, n, c.K, plan) <= member_sup(psi, n, Ke, plan) / 3.0;
                });
                if (ok) break;
                if (k == 16) throw NumericalFailure("member-wise Schwarz bound not reached");
                lambda *= 2.0;
                Ke = dilate(c.K, lambda);
            }
            c.r_tilde = compact_parameter(Ke);
        }
    }
    c.K_tilde = rt.compact;
    if (c.shift_route) c.K_tilde = Ke;
    c.K1 = dilate(Ke, options.r1_factor);

    const auto constant =
        absolute_basis_constant(psi, compact_parameter(Ke), compact_parameter(c.K1), plan, options.seed);
    c.C = constant.value;
    c.C_certified = constant.certified;

    if (ball_geometry) {
        c.r1 = compact_parameter(c.K1);
        c.inflation = std::sqrt(static_cast<double>(B.dimension()));
        c.R = (2.0 * c.C + 1.0) * c.r1 * c.inflation;
        c.K_out = CompactSet::ball(B.dimension(), c.R);
        if (B.dimension() == 1 && B.kind() == BasisKind::Monomial)
            c.cross_check = "classical Bohr inequality: sum |f_n| r^n <= |f|_{B(3r)}, so R = 3r already suffices";
    } else {
        // E(rho1) lies in the disc of its semi-major axis a1; the disc of
        // radius (2C+1) a1 is the inner disc of E(rho_R).
        c.r1 = c.K1.is<Segment>() ? 1.0 : c.K1.as<BernsteinEllipse>().semi_major();
        c.inflation = 1.0;
        c.R = (2.0 * c.C + 1.0) * c.r1;
        c.K_out = CompactSet::bernstein_ellipse(c.R + std::sqrt(c.R * c.R + 1.0));
    }

    const auto corpus = certificate_corpus(B, options.corpus_size, options.seed, compact_parameter(c.K), c.R);
    const auto check = check_inequality(B, c.K, c.K_out, corpus, plan);
    c.checked_count = check.checked;
    c.worst_slack = check.worst_slack;
    c.witness = check.witness;
    c.valid = c.worst_slack >= -options.tolerance;
    return c;
}

CorpusCheck verify_certificate(const GbpCertificate& cert, int corpus_size, std::uint64_t seed) {
    const auto corpus = certificate_corpus(cert.basis, corpus_size, seed, compact_parameter(cert.K), cert.R);
    return check_inequality(cert.basis, cert.K, cert.K_out, corpus, cert.plan);
}

TransferCheck transfer_check(const GbpCertificate& cert, const CompactSet& G, const ExpansionResult& f,
                             double tolerance) {
    if (!cert.valid) throw InvalidInput("certificate is not valid");
    if (!f.converged) throw InvalidInput("expansion did not converge; partial sums give no bound");
    if (!contains(G, cert.K_out)) throw InvalidInput("G must contain the certificate compact");
    TransferCheck out;
    out.lhs = majorant(f.coefficients, cert.basis, cert.K, cert.plan);
    out.rhs = sup_norm(expansion_function(cert.basis, f.coefficients), G, cert.plan);
    out.holds = out.lhs <= out.rhs + tolerance;
    return out;
}

void to_json(nlohmann::json& j, const GbpCertificate& c) {
    j = nlohmann::json{{"schema", kSchema},
                       {"tool_version", kToolVersion},
                       {"basis", c.basis},
                       {"r", c.r},
                       {"r1", c.r1},
                       {"C", c.C},
                       {"C_certified", c.C_certified},
                       {"r_tilde", c.r_tilde},
                       {"R", c.R},
                       {"inflation", c.inflation},
                       {"shift_route", c.shift_route},
                       {"K", c.K},
                       {"K_tilde", c.K_tilde},
                       {"K1", c.K1},
                       {"K_out", c.K_out},
                       {"n_max", c.n_max},
                       {"checked_count", c.checked_count},
                       {"worst_slack", c.worst_slack},
                       {"valid", c.valid},
                       {"witness", c.witness},
                       {"corpus_seed", c.corpus_seed},
                       {"tail_argument", c.tail_argument},
                       {"cross_check", c.cross_check},
                       {"r_tilde_ratios", c.r_tilde_ratios},
                       {"plan", c.plan}};
}

GbpCertificate certificate_from_json(const nlohmann::json& j) {
    GbpCertificate c;
    c.basis = basis_from_json(j.at("basis"));
    c.r = j.at("r").get<double>();
    c.r1 = j.at("r1").get<double>();
    c.C = j.at("C").get<double>();
    c.C_certified = j.value("C_certified", false);
    c.r_tilde = j.at("r_tilde").get<double>();
    c.R = j.at("R").get<double>();
    c.inflation = j.value("inflation", 1.0);
    c.shift_route = j.value("shift_route", false);
    c.K = compact_from_json(j.at("K"));
    c.K_tilde = compact_from_json(j.at("K_tilde"));
    c.K1 = compact_from_json(j.at("K1"));
    c.K_out = compact_from_json(j.at("K_out"));
    c.n_max = j.value("n_max", 64);
    c.checked_count = j.at("checked_count").get<int>();
    c.worst_slack = j.at("worst_slack").get<double>();
    c.valid = j.at("valid").get<bool>();
    c.witness = j.value("witness", nlohmann::json());
    c.corpus_seed = j.value("corpus_seed", std::uint64_t{0});
    c.tail_argument = j.value("tail_argument", std::string());
    c.cross_check = j.value("cross_check", std::string());
    c.r_tilde_ratios = j.value("r_tilde_ratios", std::vector<double>{});
    c.plan = plan_from_json(j.at("plan"));
    return c;
}

}  // namespace bohr
