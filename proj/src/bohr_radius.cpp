#include "bohr/bohr_radius.hpp"

#include "bohr/parallel.hpp"
#include "bohr/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bohr {

namespace {

constexpr double kRadiusTol = 1e-6;
constexpr double kEqualitySlack = 1e-12;  // relative, absorbs rounding on equality cases

bool inequality_holds(double maj, double sup) { return maj <= sup * (1.0 + kEqualitySlack) + 1e-300; }

}  // namespace

double majorant(const TruncatedSeries& coeffs, const BasisFamily& B, const CompactSet& K, const SamplingPlan& plan) {
    double sum = 0.0;
    for (const auto& [idx, c] : coeffs.coefficients()) {
        const double a = std::abs(c);
        if (a == 0.0) continue;
        sum += a * member_sup(B, idx, K, plan);
    }
    return sum;
}

MajorantCurve majorant_curve(const TruncatedSeries& coeffs, const BasisFamily& B, const DomainFamily& family,
                             const std::vector<double>& r_grid, const CompactSet& K_ref, const SamplingPlan& plan) {
    MajorantCurve curve{r_grid, {}, B, sup_norm(expansion_function(B, coeffs), K_ref, plan)};
    curve.values.reserve(r_grid.size());
    for (double r : r_grid) curve.values.push_back(majorant(coeffs, B, family(r), plan));
    return curve;
}

std::string to_csv(const MajorantCurve& curve) {
    std::ostringstream os;
    os.precision(17);
    os << "r,M(r),S\n";
    for (std::size_t i = 0; i < curve.r.size(); ++i)
        os << curve.r[i] << ',' << curve.values[i] << ',' << curve.reference_sup << '\n';
    return os.str();
}

IndividualRadius individual_bohr_radius(const TruncatedSeries& coeffs, const BasisFamily& B,
                                        const DomainFamily& family, double r_min, double r_max,
                                        double reference_sup, const SamplingPlan& plan) {
    if (!(r_max > r_min) || !(r_min > 0.0)) throw InvalidInput("radius range must satisfy 0 < r_min < r_max");
    IndividualRadius out;
    out.reference_sup = reference_sup;
    auto ok = [&](double r) { return inequality_holds(majorant(coeffs, B, family(r), plan), reference_sup); };
    if (!ok(r_min)) {
        out.violated_at_min = true;
        return out;
    }
    if (ok(r_max)) {
        out.saturated = true;
        out.radius = r_max;
        return out;
    }
    double lo = r_min, hi = r_max;
    while (hi - lo > 0.5 * kRadiusTol) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    out.radius = lo;
    return out;
}

IndividualRadius individual_bohr_radius(const TruncatedSeries& coeffs, const BasisFamily& B,
                                        const DomainFamily& family, double r_min, double r_max,
                                        const CompactSet& K_ref, const SamplingPlan& plan) {
    const double S = sup_norm(expansion_function(B, coeffs), K_ref, plan);
    return individual_bohr_radius(coeffs, B, family, r_min, r_max, S, plan);
}

TruncatedSeries mobius_series(double a, int n, int dimension, int variable) {
    if (!(std::abs(a) < 1.0)) throw InvalidInput("Mobius parameter must satisfy |a| < 1");
    if (variable < 0 || variable >= dimension) throw InvalidInput("Mobius variable out of range");
    TruncatedSeries f(dimension, n);
    auto index = [&](int k) {
        std::vector<int> e(static_cast<std::size_t>(dimension), 0);
        e[static_cast<std::size_t>(variable)] = k;
        return MultiIndex(std::move(e));
    };
    f.set(index(0), a);
    double p = 1.0;  // a^(k-1)
    for (int k = 1; k <= n; ++k) {
        f.set(index(k), -(1.0 - a * a) * p);
        p *= a;
    }
    return f;
}

int mobius_truncation(double a, double tail) {
    if (a == 0.0) return 1;
    const double n = std::log(tail / (1.0 + std::abs(a))) / std::log(std::abs(a));
    return std::max(1, static_cast<int>(std::ceil(n)));
}

void to_json(nlohmann::json& j, const RadiusEstimate& e) {
    j = nlohmann::json{{"lower", e.lower},
                       {"upper", e.upper},
                       {"witness", e.witness},
                       {"violation", e.violation},
                       {"corpus_relative", true},
                       {"note", e.note}};
}

namespace {

struct Candidate {
    std::string description;
    nlohmann::json params;
    TruncatedSeries coeffs;
};

// g(z_u) h(z_v) for one-variable series embedded in distinct coordinates
TruncatedSeries separable_product(const TruncatedSeries& g, const TruncatedSeries& h) {
    TruncatedSeries out(g.dimension(), g.degree_bound() + h.degree_bound());
    for (const auto& [a, x] : g.coefficients())
        for (const auto& [b, y] : h.coefficients()) {
            std::vector<int> e(a.exponents);
            for (std::size_t k = 0; k < e.size(); ++k) e[k] += b[k];
            out.add(MultiIndex(std::move(e)), x * y);
        }
    return out;
}

std::vector<Candidate> kappa_candidates(int d, int budget, std::uint64_t seed) {
    std::vector<Candidate> out;
    for (double a : {0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.97, 0.98, 0.99, 0.995}) {
        const int n = mobius_truncation(a, 1e-10);
        out.push_back({"mobius(z1)", {{"a", a}, {"truncation", n}}, mobius_series(a, n, d, 0)});
    }
    if (d >= 2) {
        for (double a : {0.5, 0.6}) {
            const int n = mobius_truncation(a, 1e-10);
            out.push_back({"mobius(z1)*mobius(z2)",
                           {{"a", a}, {"truncation", n}},
                           separable_product(mobius_series(a, n, d, 0), mobius_series(a, n, d, 1))});
        }
    }
    const int degree = d == 1 ? 8 : d == 2 ? 6 : 4;
    const int random_count = std::max(0, budget - static_cast<int>(out.size()));
    Rng rng(derive_seed(seed, 77));
    for (int i = 0; i < random_count; ++i) {
        const double decay = rng.uniform(0.3, 1.0);
        const auto s = derive_seed(seed, static_cast<std::uint64_t>(i));
        out.push_back({"random_polynomial",
                       {{"index", i}, {"degree", degree}, {"decay", decay}},
                       random_series(d, degree, decay, s)});
    }
    return out;
}

}  // namespace

RadiusEstimate kappa_upper_search(int d, int budget, std::uint64_t seed, const SamplingPlan& plan) {
    if (d < 1) throw InvalidInput("kappa search needs d >= 1");
    const auto B = BasisFamily::monomial(d);
    const auto unit = CompactSet::polydisc(d, 1.0);
    const DomainFamily family = [d](double r) { return CompactSet::polydisc(d, r); };
    const auto candidates = kappa_candidates(d, budget, seed);

    std::vector<IndividualRadius> radii(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i) {
        radii[i] = individual_bohr_radius(candidates[i].coeffs, B, family, 1e-9, 1.0, unit, plan);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i].radius < radii[best].radius) best = i;

    RadiusEstimate est;
    est.upper = radii[best].radius;
    est.witness = {{"description", candidates[best].description},
                   {"params", candidates[best].params},
                   {"radius", radii[best].radius},
                   {"reference_sup", radii[best].reference_sup}};

    // largest grid r <= upper where the whole corpus passes
    double lower = std::floor(est.upper * 1000.0) / 1000.0;
    for (; lower > 0.0; lower -= 1e-3) {
        bool all = true;
        for (std::size_t i = 0; i < candidates.size() && all; ++i)
            all = inequality_holds(majorant(candidates[i].coeffs, B, family(lower), plan), radii[i].reference_sup);
        if (all) break;
    }
    est.lower = std::max(0.0, lower);
    std::ostringstream note;
    note << "upper bound from " << candidates.size() << " candidates on the unit polydisc in dimension " << d
         << "; lower is corpus-relative";
    est.note = note.str();
    return est;
}

std::vector<TruncatedSeries> faber_test_corpus(int count, std::uint64_t seed) {
    std::vector<TruncatedSeries> out;
    Rng rng(derive_seed(seed, 91));
    for (int i = 0; i < count; ++i) {
        const int degree = 2 + static_cast<int>(rng.uniform() * 10.0);
        const double decay = rng.uniform(0.2, 1.0);
        out.push_back(random_series(1, degree, decay, derive_seed(seed, static_cast<std::uint64_t>(i))));
    }
    return out;
}

RadiusEstimate faber_bohr_R0(const std::vector<TruncatedSeries>& tests, const SamplingPlan& plan, double rho_max) {
    if (!(rho_max > 1.0)) throw InvalidInput("rho_max must exceed 1");
    const auto B = BasisFamily::faber_segment();
    const auto segment = CompactSet::segment();
    auto domain = [](double rho) { return rho <= 1.0 ? CompactSet::segment() : CompactSet::bernstein_ellipse(rho); };

    struct PerFunction {
        double lo = 1.0, hi = 1.0;
        bool violation = false;
        double majorant = 0.0;
    };
    std::vector<PerFunction> res(tests.size());
    parallel_for(tests.size(), [&](std::size_t i) {
        const auto f = expansion_function(B, tests[i]);
        auto& r = res[i];
        r.majorant = majorant(tests[i], B, segment, plan);
        auto ok = [&](double rho) { return inequality_holds(r.majorant, sup_norm(f, domain(rho), plan)); };
        if (ok(1.0)) return;
        if (!ok(rho_max)) {
            r.violation = true;
            r.lo = r.hi = rho_max;
            return;
        }
        double lo = 1.0, hi = rho_max;
        while (hi - lo > 0.5 * kRadiusTol) {
            const double mid = 0.5 * (lo + hi);
            (ok(mid) ? hi : lo) = mid;
        }
        r.lo = lo;
        r.hi = hi;
    });

    RadiusEstimate est;
    est.lower = est.upper = 1.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        est.lower = std::max(est.lower, res[i].lo);
        if ((res[i].violation && !res[worst].violation) ||
            (res[i].violation == res[worst].violation && res[i].hi > res[worst].hi))
            worst = i;
        est.upper = std::max(est.upper, res[i].hi);
        est.violation = est.violation || res[i].violation;
    }
    if (!tests.empty()) {
        est.witness = {{"index", worst},
                       {"series", tests[worst]},
                       {"majorant_on_segment", res[worst].majorant},
                       {"rho", res[worst].hi}};
    }
    std::ostringstream note;
    note << "bracket for the Faber Bohr radius R0 relative to " << tests.size()
         << " test functions; the true R0 is an infimum over all bounded functions on the ellipses";
    if (est.violation) note << "; violation at rho_max = " << rho_max;
    est.note = note.str();
    return est;
}

}  // namespace bohr
