#pragma once

#include "bohr/bases.hpp"
#include "bohr/compact.hpp"
#include "bohr/sampling.hpp"
#include "bohr/series.hpp"

#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

namespace bohr {

/// r -> K_r, nested and increasing in r.
using DomainFamily = std::function<CompactSet(double)>;

/// sum_n |f_n| |phi_n|_K
double majorant(const TruncatedSeries& coeffs, const BasisFamily& B, const CompactSet& K, const SamplingPlan& plan);

struct MajorantCurve {
    std::vector<double> r;
    std::vector<double> values;
    BasisFamily basis;
    double reference_sup = 0.0;
};

MajorantCurve majorant_curve(const TruncatedSeries& coeffs, const BasisFamily& B, const DomainFamily& family,
                             const std::vector<double>& r_grid, const CompactSet& K_ref, const SamplingPlan& plan);

/// CSV with header "r,M(r),S".
std::string to_csv(const MajorantCurve& curve);

struct IndividualRadius {
    double radius = 0.0;
    bool saturated = false;        // inequality holds on the whole range
    bool violated_at_min = false;  // fails already at the smallest r
    double reference_sup = 0.0;
};

/// Largest r in [r_min, r_max] with majorant(f, B, K_r) <= |f|_{K_ref},
/// bisected to 1e-6 in r.
IndividualRadius individual_bohr_radius(const TruncatedSeries& coeffs, const BasisFamily& B,
                                        const DomainFamily& family, double r_min, double r_max,
                                        const CompactSet& K_ref, const SamplingPlan& plan);

/// Same search against a precomputed reference sup.
IndividualRadius individual_bohr_radius(const TruncatedSeries& coeffs, const BasisFamily& B,
                                        const DomainFamily& family, double r_min, double r_max,
                                        double reference_sup, const SamplingPlan& plan);

/// Taylor coefficients of (a - z)/(1 - a z) up to degree n.
TruncatedSeries mobius_series(double a, int n, int dimension = 1, int variable = 0);

/// Smallest degree whose Mobius tail (1 + a) a^n falls below tail.
int mobius_truncation(double a, double tail);

struct RadiusEstimate {
    double lower = 0.0;
    double upper = 0.0;
    nlohmann::json witness;
    bool violation = false;  // some test function failed on the whole range
    std::string note;
};

void to_json(nlohmann::json& j, const RadiusEstimate& e);

/// Upper bound for the polydisc Bohr radius kappa_d from a candidate corpus
/// (Mobius functions embedded in z1, separable Mobius products, seeded
/// random polynomials). Lower is the largest r on a 1e-3 grid at which
/// every candidate satisfies the inequality.
RadiusEstimate kappa_upper_search(int d, int budget, std::uint64_t seed, const SamplingPlan& plan);

/// Seeded truncated Chebyshev series used as Faber test functions.
std::vector<TruncatedSeries> faber_test_corpus(int count, std::uint64_t seed);

/// Smallest rho in [1, rho_max] with majorant(f, Faber, [-1,1]) <=
/// |f|_{E_rho} for every test function; relative to the test set.
RadiusEstimate faber_bohr_R0(const std::vector<TruncatedSeries>& tests, const SamplingPlan& plan,
                             double rho_max = 10.0);

}  // namespace bohr
