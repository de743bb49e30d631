#pragma once

#include "bohr/compact.hpp"
#include "bohr/sampling.hpp"
#include "bohr/series.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace bohr {

/// gamma_D(z) for a disc D: the pseudo-hyperbolic distance between z and
/// z0 after mapping D onto the unit disc, |z - c|/rho when z0 = c.
double gamma_closed_form(const CompactSet& D, Complex z, Complex z0 = 0.0);

struct GammaLpResult {
    double value = 0.0;          // LP optimum of Re f(z)
    double slack_factor = 1.0;   // sec(pi/angle_count)
    double solution_sup = 0.0;   // sampled |f*|_D of the optimizer
    double feasible_lower = 0.0; // |f*(z)| / max(1, |f*|_D)
    int degree = 0;
    int iterations = 0;
    std::vector<Complex> coefficients;  // of the degree-scaled polynomial basis
};

/// sup Re f(z) over polynomials of degree <= m with f(z0) = 0 and
/// Re(e^{i theta} f(w)) <= 1 on boundary samples w and angle_count angles.
/// D is a disc in C or a Bernstein ellipse.
GammaLpResult gamma_lp(const CompactSet& D, Complex z0, Complex z, int m, const SamplingPlan& plan);

enum class ExhaustionLabel { PlaneByBalls, UnitDiscByBalls, EllipseFamily };

std::string to_string(ExhaustionLabel label);
ExhaustionLabel exhaustion_label_from_string(const std::string& s);

struct ExhaustionSpec {
    std::vector<CompactSet> domains;
    Complex z0 = 0.0;
    ExhaustionLabel label = ExhaustionLabel::PlaneByBalls;
    int first_n = 1;  // number of domains[0]

    /// Strict nesting and z0 interior to domains[0]; throws InvalidInput.
    void validate() const;

    /// Discs of radius n, n = 1..count.
    static ExhaustionSpec plane_by_balls(int count);
    /// Discs of radius 1 - 2^-n, n = 1..count.
    static ExhaustionSpec unit_disc_by_balls(int count);
    /// Bernstein ellipses E(1 + n), n = 1..count.
    static ExhaustionSpec ellipse_family(int count);
};

enum class GammaMethod { ClosedForm, LP };

struct GammaCurve {
    Complex z = 0.0;
    std::vector<int> n;
    std::vector<double> values;
    std::vector<GammaMethod> methods;
    double slack_factor = 1.0;
    bool monotone = true;  // non-increasing within 1e-6
};

/// gamma_n(z) along the exhaustion, starting at the first domain whose
/// interior contains z. Discs use the closed form unless force_lp is set.
GammaCurve gamma_curve(const ExhaustionSpec& E, Complex z, int m, const SamplingPlan& plan, bool force_lp = false);

/// CSV with header "n,gamma,method".
std::string to_csv(const GammaCurve& curve);

enum class Verdict { DecayEvidence, PlateauEvidence };

struct LiouvilleVerdict {
    Verdict verdict = Verdict::DecayEvidence;
    double limit_estimate = 0.0;
    std::string model;
    double fit_residual = 0.0;
    bool low_confidence = false;
    std::string note = "numerical evidence from a finite curve, not a proof";
};

/// Fits L + A n^-p and L + A q^n to the curve and compares the fitted
/// limit L with tol.
LiouvilleVerdict liouville_verdict(const GammaCurve& curve, double tol = 0.05);

struct SchwarzK1 {
    int index = -1;  // into E.domains
    int n = 0;       // E.first_n + index
    double max_gamma = 0.0;
    Complex argmax = 0.0;
    double delta = 0.0;
    std::vector<double> tested;  // max gamma over K per examined index
};

/// Smallest index with max over K of gamma_n < delta (strict). Domains
/// whose interior misses part of K are skipped.
SchwarzK1 schwarz_property_K1(const ExhaustionSpec& E, const CompactSet& K, double delta, int m,
                              const SamplingPlan& plan, bool force_lp = false);

struct BcGeneralReport {
    double epsilon = 0.0;
    double delta = 0.0;
    SchwarzK1 k1;
    int checked = 0;
    double worst_slack = 0.0;  // min of eps sup_K1 Re(f - f(z0)) - |f - f(z0)|_K
    bool holds = true;
    nlohmann::json witness;
};

/// delta = eps/(2 + eps), K1 from the Schwarz search, then
/// |f - f(z0)|_K <= eps sup_K1 Re(f - f(z0)) on each corpus member.
BcGeneralReport borel_caratheodory_general(const ExhaustionSpec& E, const CompactSet& K, double epsilon,
                                           const std::vector<TruncatedSeries>& corpus, int m,
                                           const SamplingPlan& plan, bool force_lp = false);

/// f = z, a constant, then seeded polynomials of degree <= 8.
std::vector<TruncatedSeries> bc_corpus(int size, std::uint64_t seed);

void to_json(nlohmann::json& j, const GammaLpResult& r);
void to_json(nlohmann::json& j, const ExhaustionSpec& E);
void to_json(nlohmann::json& j, const GammaCurve& c);
void to_json(nlohmann::json& j, const LiouvilleVerdict& v);
void to_json(nlohmann::json& j, const SchwarzK1& k);
void to_json(nlohmann::json& j, const BcGeneralReport& r);

}  // namespace bohr
