#pragma once

#include "bohr/compact.hpp"
#include "bohr/types.hpp"

#include <cstdint>
#include <json.hpp>
#include <vector>

namespace bohr {

struct SamplingPlan {
    int boundary_count = 64;     // points per boundary dimension
    int angle_count = 64;        // half-planes per modulus constraint
    std::uint64_t seed = 0x5eed;
    int refinement_rounds = 2;   // golden-section polish passes

    /// Throws InvalidInput unless every count is >= 8.
    void validate() const;
};

void to_json(nlohmann::json& j, const SamplingPlan& p);
SamplingPlan plan_from_json(const nlohmann::json& j);

/// Points on the (distinguished) boundary of K, deterministic for a plan:
/// circle products on polydiscs, circle sweeps along seeded directions on
/// spheres, the Joukowski image of |w| = rho on ellipses, cos(pi j/k) on
/// the segment. Refining the plan by doubling boundary_count yields a
/// superset of points.
std::vector<Point> boundary_samples(const CompactSet& K, const SamplingPlan& plan);

struct SupEstimate {
    double value = 0.0;   // lower bound on the true sup
    Point argmax;
    int samples = 0;      // grid points evaluated before polishing
    double resolution = 0.0;  // angular spacing of the grid
};

/// Max of g over boundary_samples followed by refinement_rounds of
/// coordinatewise golden-section polish around the best samples.
SupEstimate maximize_on_boundary(const RealEvaluable& g, const CompactSet& K, const SamplingPlan& plan);

/// |f|_K
SupEstimate sup_estimate(const Evaluable& f, const CompactSet& K, const SamplingPlan& plan);
double sup_norm(const Evaluable& f, const CompactSet& K, const SamplingPlan& plan);

/// sup_K Re f
double sup_real_part(const Evaluable& f, const CompactSet& K, const SamplingPlan& plan);

}  // namespace bohr
