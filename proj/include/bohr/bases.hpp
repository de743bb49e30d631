#pragma once

#include "bohr/compact.hpp"
#include "bohr/sampling.hpp"
#include "bohr/series.hpp"

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bohr {

enum class BasisKind { Monomial, FaberSegment, Shifted, Explicit };

/// Indexed family (phi_n). Monomials are indexed by multi-indices of
/// length d, the one-variable families by {n}.
///
/// Shifted(base, z0) has member 0 equal to 1 and member n >= 1 equal to
/// base_n - base_n(z0). Explicit holds a finite list of polynomials and is
/// the only kind that may lack a constant member.
class BasisFamily {
public:
    static BasisFamily monomial(int d);
    static BasisFamily faber_segment();
    static BasisFamily explicit_members(std::vector<TruncatedSeries> members);

    BasisKind kind() const { return kind_; }
    std::string kind_name() const;
    int dimension() const { return dimension_; }

    const BasisFamily& base() const;
    const Point& shift_point() const;
    const std::vector<TruncatedSeries>& members() const;

    /// Member 0 is identically 1.
    bool has_constant_member() const;

    MultiIndex zero_index() const;
    /// Index set truncated at degree (or member number) n.
    std::vector<MultiIndex> indices(int n) const;
    bool valid_index(const MultiIndex& n) const;

    /// Family without shifts (Shifted chains resolved).
    const BasisFamily& root() const;

private:
    friend BasisFamily shift_basis(const BasisFamily& B, const Point& z0);
    BasisFamily(BasisKind kind, int dimension) : kind_(kind), dimension_(dimension) {}

    BasisKind kind_;
    int dimension_;
    std::shared_ptr<const BasisFamily> base_;
    Point z0_;
    std::shared_ptr<const std::vector<TruncatedSeries>> members_;
};

BasisFamily shift_basis(const BasisFamily& B, const Point& z0);

Complex basis_eval(const BasisFamily& B, const MultiIndex& n, const Point& z);

/// Sum of c_n phi_n(z) for coefficients indexed like the family.
Complex expansion_eval(const BasisFamily& B, const TruncatedSeries& coeffs, const Point& z);
Evaluable expansion_function(const BasisFamily& B, TruncatedSeries coeffs);

/// Closed-form |phi_n|_K where one is known (monomials on centered balls
/// and polydiscs, Faber members on the segment and ellipses).
std::optional<double> member_sup_closed_form(const BasisFamily& B, const MultiIndex& n, const CompactSet& K);

/// |phi_n|_K: closed form when available, otherwise sampled.
double member_sup(const BasisFamily& B, const MultiIndex& n, const CompactSet& K, const SamplingPlan& plan);

struct ExtractionBudget {
    int degree = -1;          // -1: 48 in one variable, 16 otherwise
    double radius = 1.0;      // torus radius for monomial extraction
    int samples = 0;          // nodes per axis, 0: automatic
    double tolerance = 1e-8;  // relative to max(1, |f|) on the extraction compact
    std::uint64_t seed = 0x5eed;
};

struct ExpansionResult {
    TruncatedSeries coefficients;
    double residual = 0.0;
    bool converged = true;
};

/// Coefficients of f in B: torus Fourier averages for monomials,
/// Gauss-Chebyshev quadrature for the Faber family.
ExpansionResult extract_coefficients(const BasisFamily& B, const Evaluable& f, const ExtractionBudget& budget,
                                     const SamplingPlan& plan = {});

void to_json(nlohmann::json& j, const BasisFamily& B);
BasisFamily basis_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const ExpansionResult& r);

}  // namespace bohr
