#pragma once

#include "bohr/bases.hpp"
#include "bohr/compact.hpp"
#include "bohr/sampling.hpp"
#include "bohr/series.hpp"

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace bohr {

struct AbsoluteConstant {
    double value = 0.0;
    bool certified = false;
    std::string method;
};

/// C with sum_n |f_n| |phi_n|_{K_r} <= C |f|_{K_r1}.
///
/// Monomials in d variables: (r1/(r1-r))^d from Cauchy estimates on
/// polydiscs. Faber family (r, r1 are Green parameters, 1 = segment): from
/// |a_n| <= 2 rho1^-n |f|_{E(rho1)} summed against |F_n|_{E(rho)}; the
/// Faber family shifted at 0 adds the |F_n(0)| terms. Anything else gets an
/// empirical lower bound from random coefficient vectors, flagged
/// non-certified.
AbsoluteConstant absolute_basis_constant(const BasisFamily& B, double r, double r1, const SamplingPlan& plan,
                                         std::uint64_t seed = 0x5eed);

struct SchwarzStep {
    double lhs = 0.0;    // |f|_{B(r)}
    double bound = 0.0;  // |f|_{B(3r)} / 3
};

/// Requires f(0) = 0 within 1e-12.
SchwarzStep schwarz_step(const TruncatedSeries& f, double r, const SamplingPlan& plan);

struct BorelCaratheodoryCheck {
    double lhs = 0.0;  // |f - f(0)|_{B(r1)}
    double rhs = 0.0;  // 2 r1/(r2 - r1) sup_{B(r2)} Re(f - f(0))
};

BorelCaratheodoryCheck borel_caratheodory_check(const TruncatedSeries& f, double r1, double r2,
                                                const SamplingPlan& plan);

/// sum over 1 <= n <= n_max of |phi_n|_K / |phi_n|_{K1}
double ratio_sum(const BasisFamily& B, const CompactSet& K, const CompactSet& K1, int n_max,
                 const SamplingPlan& plan);

struct RTilde {
    CompactSet compact = CompactSet::segment();
    double parameter = 0.0;   // ball radius, or rho for ellipses
    double dilation = 0.0;    // factor applied to K
    std::vector<double> tested_dilations;
    std::vector<double> max_ratios;  // max_n |phi_n(0)|/|phi_n|, per tested dilation
    bool ratios_decreasing = true;
    std::string tail_argument;
};

/// First K~ in dilate(K, 3), dilate(K, 6), dilate(K, 12), ... with
/// |phi_n(0)| <= |phi_n|_{K~}/4 for 1 <= n <= n_max.
RTilde find_r_tilde(const BasisFamily& B, const CompactSet& K, int n_max, const SamplingPlan& plan,
                    int max_doublings = 16);

/// Convenience overload: K = B(r) for monomials, the Green level r for the
/// Faber family (r = 1 is the segment).
RTilde find_r_tilde(const BasisFamily& B, double r, int n_max, const SamplingPlan& plan);

struct CertifyOptions {
    double r1_factor = 2.0;
    int n_max = 64;
    int corpus_size = 200;
    std::uint64_t seed = 7;
    double tolerance = 1e-9;
};

struct GbpCertificate {
    BasisFamily basis = BasisFamily::monomial(1);
    double r = 0.0;
    double r1 = 0.0;
    double C = 0.0;
    bool C_certified = false;
    double r_tilde = 0.0;
    double R = 0.0;
    double inflation = 1.0;  // sqrt(d) for balls in d > 1, else 1
    bool shift_route = false;
    CompactSet K = CompactSet::segment();
    CompactSet K_tilde = CompactSet::segment();
    CompactSet K1 = CompactSet::segment();
    CompactSet K_out = CompactSet::segment();
    int n_max = 64;
    int checked_count = 0;
    double worst_slack = 0.0;
    bool valid = false;
    nlohmann::json witness;
    std::uint64_t corpus_seed = 0;
    std::string tail_argument;
    std::string cross_check;
    std::vector<double> r_tilde_ratios;
    SamplingPlan plan;
};

/// Compact K of the certificate: B(r) in C^d for monomial roots, the
/// segment (r <= 1) or E(r) for the Faber root.
CompactSet certificate_compact(const BasisFamily& B, double r);

/// Seeded coefficient vectors (indexed like B) used to exercise a
/// certificate; entry 0 is the constant 1.
std::vector<TruncatedSeries> certificate_corpus(const BasisFamily& B, int size, std::uint64_t seed, double r,
                                                double R);

struct CorpusCheck {
    int checked = 0;
    double worst_slack = 0.0;
    nlohmann::json witness;
};

CorpusCheck check_inequality(const BasisFamily& B, const CompactSet& K, const CompactSet& K_out,
                             const std::vector<TruncatedSeries>& corpus, const SamplingPlan& plan);

/// Assembles (r, r1, C, r~, R) and verifies
/// sum |f_n||phi_n|_K <= |f|_{K_out} on a seeded corpus.
GbpCertificate certify(const BasisFamily& B, double r, const CertifyOptions& options, const SamplingPlan& plan);

/// Re-checks a certificate on a fresh corpus.
CorpusCheck verify_certificate(const GbpCertificate& cert, int corpus_size, std::uint64_t seed);

struct TransferCheck {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// For f bounded on G containing K_out: majorant on K <= |f|_G.
TransferCheck transfer_check(const GbpCertificate& cert, const CompactSet& G, const ExpansionResult& f,
                                double tolerance = 1e-9);

void to_json(nlohmann::json& j, const GbpCertificate& c);
GbpCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace bohr
