#include <doctest.h>

#include "bohr/bohr_radius.hpp"
#include "bohr/gbp.hpp"
#include "bohr/random.hpp"

#include <cmath>

using namespace bohr;

namespace {

SamplingPlan small_plan() {
    SamplingPlan p;
    p.boundary_count = 32;
    return p;
}

// dense circle maximum, independent of sup_norm
double circle_max(const TruncatedSeries& f, double radius, int n = 4096) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) best = std::max(best, std::abs(eval(f, {std::polar(radius, 2.0 * kPi * j / n)})));
    return best;
}

TruncatedSeries exp_minus_one(int degree) {
    TruncatedSeries f(1, degree);
    double fact = 1.0;
    for (int n = 1; n <= degree; ++n) {
        fact *= n;
        f.set(MultiIndex{n}, 1.0 / fact);
    }
    return f;
}

}  // namespace

TEST_CASE("absolute basis constant: monomial closed forms") {
    const SamplingPlan plan;
    auto c1 = absolute_basis_constant(BasisFamily::monomial(1), 1.0, 2.0, plan);
    CHECK(c1.value == 2.0);
    CHECK(c1.certified);
    CHECK(absolute_basis_constant(BasisFamily::monomial(2), 1.0, 2.0, plan).value == 4.0);
    CHECK(absolute_basis_constant(BasisFamily::monomial(3), 1.0, 3.0, plan).value == doctest::Approx(3.375));
    CHECK_THROWS_AS(absolute_basis_constant(BasisFamily::monomial(1), 2.0, 2.0, plan), InvalidInput);
    CHECK_THROWS_AS(absolute_basis_constant(BasisFamily::monomial(1), 3.0, 2.0, plan), InvalidInput);
}

TEST_CASE("absolute basis constant bounds random majorants") {
    const double C = absolute_basis_constant(BasisFamily::monomial(1), 1.0, 2.0, SamplingPlan{}).value;
    for (int i = 0; i < 100; ++i) {
        Rng rng(derive_seed(99, static_cast<std::uint64_t>(i)));
        const auto f = random_series(1, 1 + static_cast<int>(rng.uniform() * 15), rng.uniform(0.1, 1.5),
                                     derive_seed(100, static_cast<std::uint64_t>(i)));
        double lhs = 0.0;
        for (const auto& [a, c] : f.coefficients()) lhs += std::abs(c);
        CHECK(lhs <= C * circle_max(f, 2.0) + 1e-9);
    }
}

TEST_CASE("absolute basis constant: Faber family") {
    const SamplingPlan plan;
    const auto F = BasisFamily::faber_segment();
    CHECK(absolute_basis_constant(F, 1.0, 2.0, plan).value == doctest::Approx(3.0));
    const double rho = 1.5, rho1 = 4.0;
    const double expected = 1.0 + (rho / rho1) / (1.0 - rho / rho1) + (1.0 / (rho * rho1)) / (1.0 - 1.0 / (rho * rho1));
    CHECK(absolute_basis_constant(F, rho, rho1, plan).value == doctest::Approx(expected).epsilon(1e-14));
    const auto psi = shift_basis(F, {0.0});
    CHECK(absolute_basis_constant(psi, 1.0, 2.0, plan).value == doctest::Approx(3.0 + 2.0 / 3.0));

    // sum |c_n| |F_n|_{[-1,1]} <= C |f|_{E(2)} on random Chebyshev series
    const double C = absolute_basis_constant(F, 1.0, 2.0, plan).value;
    for (const auto& f : faber_test_corpus(40, 5)) {
        double lhs = std::abs(f.coefficient(MultiIndex{0}));
        for (int n = 1; n <= f.degree_bound(); ++n) lhs += 2.0 * std::abs(f.coefficient(MultiIndex{n}));
        double sup = 0.0;
        for (int j = 0; j < 4096; ++j) {
            const Complex w = std::polar(2.0, 2.0 * kPi * j / 4096);
            sup = std::max(sup, std::abs(expansion_eval(F, f, {0.5 * (w + 1.0 / w)})));
        }
        CHECK(lhs <= C * sup + 1e-9);
    }
}

TEST_CASE("absolute basis constant: explicit families are empirical") {
    TruncatedSeries one(1, 0), z(1, 1), z2(1, 2);
    one.set(MultiIndex{0}, 1.0);
    z.set(MultiIndex{1}, 1.0);
    z2.set(MultiIndex{2}, 1.0);
    z2.set(MultiIndex{1}, 0.5);
    const auto B = BasisFamily::explicit_members({one, z, z2});
    const auto c = absolute_basis_constant(B, 1.0, 2.0, small_plan());
    CHECK_FALSE(c.certified);
    CHECK(c.value > 0.0);
    CHECK(c.method == "empirical");
}

TEST_CASE("schwarz step examples") {
    const SamplingPlan plan;
    TruncatedSeries z(1, 1), z2(1, 2);
    z.set(MultiIndex{1}, 1.0);
    z2.set(MultiIndex{2}, 1.0);
    for (double r : {0.5, 1.0, 2.0}) {
        const auto s = schwarz_step(z, r, plan);
        CHECK(s.lhs == doctest::Approx(r).epsilon(1e-12));
        CHECK(s.bound == doctest::Approx(r).epsilon(1e-12));
        const auto s2 = schwarz_step(z2, r, plan);
        CHECK(s2.lhs == doctest::Approx(r * r).epsilon(1e-12));
        CHECK(s2.bound == doctest::Approx(3.0 * r * r).epsilon(1e-12));
    }
    TruncatedSeries bad(1, 1);
    bad.set(MultiIndex{0}, 0.25);
    bad.set(MultiIndex{1}, 1.0);
    try {
        schwarz_step(bad, 1.0, plan);
        FAIL("expected rejection");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("0.25") != std::string::npos);
    }
}

TEST_CASE("schwarz step property") {
    const auto plan = small_plan();
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        auto f = random_series(1, 8, 0.9, derive_seed(31, static_cast<std::uint64_t>(i)));
        f.set(MultiIndex{0}, 0.0);
        for (double r : {0.5, 1.0, 2.0}) {
            const auto s = schwarz_step(f, r, plan);
            if (s.lhs > s.bound + 1e-9) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("borel-caratheodory check") {
    const SamplingPlan plan;
    const auto b = borel_caratheodory_check(exp_minus_one(40), 1.0, 3.0, plan);
    CHECK(b.lhs == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-9));
    CHECK(b.rhs == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-9));
    CHECK_THROWS_AS(borel_caratheodory_check(exp_minus_one(4), 2.0, 1.0, plan), InvalidInput);

    const auto p = small_plan();
    for (int i = 0; i < 50; ++i) {
        const auto f = random_series(1, 10, 0.8, derive_seed(47, static_cast<std::uint64_t>(i)));
        const auto c = borel_caratheodory_check(f, 1.0, 3.0, p);
        CHECK(c.lhs <= c.rhs + 1e-9);
    }
}

TEST_CASE("ratio sums for monomials are geometric") {
    const SamplingPlan plan;
    const auto B = BasisFamily::monomial(1);
    double prev = 1e300;
    for (double lambda : {2.0, 3.0, 5.0}) {
        const double s = ratio_sum(B, CompactSet::ball(1, 1.0), CompactSet::ball(1, lambda), 64, plan);
        const double expected = 1.0 / (lambda - 1.0) - std::pow(lambda, -64.0) / (lambda - 1.0);
        CHECK(std::abs(s - expected) <= 1e-9);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("find_r_tilde") {
    const SamplingPlan plan;
    for (double r : {0.5, 1.0, 2.5}) {
        const auto t = find_r_tilde(BasisFamily::monomial(2), r, 16, plan);
        CHECK(t.parameter == doctest::Approx(3.0 * r));
        CHECK(t.max_ratios.front() == 0.0);
    }

    const auto F = BasisFamily::faber_segment();
    const auto psi = shift_basis(F, {0.0});
    const auto t0 = find_r_tilde(psi, CompactSet::bernstein_ellipse(1.5), 64, plan);
    CHECK(t0.parameter == doctest::Approx(std::pow(1.5, 3.0)));

    // unshifted: ratio 2/(rho^n + rho^-n) at even n, worst at n = 2
    for (double rho : {1.0, 1.2, 1.05}) {
        const auto K = rho == 1.0 ? CompactSet::segment() : CompactSet::bernstein_ellipse(rho);
        double expected = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double lambda = 3.0 * std::ldexp(1.0, k);
            const double grown = rho == 1.0 ? lambda : std::pow(rho, lambda);
            if (2.0 / (grown * grown + 1.0 / (grown * grown)) <= 0.25) {
                expected = grown;
                break;
            }
        }
        const auto t = find_r_tilde(F, K, 64, plan);
        CHECK(t.parameter == doctest::Approx(expected).epsilon(1e-12));
        CHECK(t.ratios_decreasing);
        CHECK(t.tail_argument.find("geometrically") != std::string::npos);
    }
}

TEST_CASE("find_r_tilde failures") {
    const SamplingPlan plan;
    TruncatedSeries one(1, 0), slow(1, 1), z(1, 1);
    one.set(MultiIndex{0}, 1.0);
    slow.set(MultiIndex{0}, 1.0);
    slow.set(MultiIndex{1}, 1e-3);
    z.set(MultiIndex{1}, 1.0);
    const auto B = BasisFamily::explicit_members({one, slow});
    try {
        find_r_tilde(B, CompactSet::ball(1, 1.0), 4, plan, 4);
        FAIL("expected failure");
    } catch (const NumericalFailure& e) {
        CHECK(std::string(e.what()).find("worst index 1") != std::string::npos);
    }
    // ratio 1/(1 + 1e-3 R) <= 1/4 once R >= 3000 = 3 * 2^10
    CHECK(find_r_tilde(B, CompactSet::ball(1, 1.0), 4, plan).parameter == doctest::Approx(3072.0));
    CHECK_THROWS_AS(find_r_tilde(BasisFamily::explicit_members({z, slow}), CompactSet::ball(1, 1.0), 4, plan),
                    InvalidInput);
}

TEST_CASE("certify monomial d=1") {
    CertifyOptions opt;
    const auto cert = certify(BasisFamily::monomial(1), 1.0, opt, SamplingPlan{});
    CHECK(cert.C == 2.0);
    CHECK(cert.r1 == 2.0);
    CHECK(cert.R == 10.0);
    CHECK(cert.R == (2.0 * cert.C + 1.0) * cert.r1);
    CHECK(cert.r_tilde == 3.0);
    CHECK(cert.C_certified);
    CHECK_FALSE(cert.shift_route);
    CHECK(cert.checked_count == 200);
    CHECK(cert.valid);
    CHECK(cert.worst_slack >= -1e-9);
    CHECK(cert.worst_slack <= 1e-12);  // the constant 1 is in the corpus
    CHECK_FALSE(cert.cross_check.empty());

    const auto again = verify_certificate(cert, 200, 8);
    CHECK(again.checked == 200);
    CHECK(again.worst_slack >= -1e-6);
}

TEST_CASE("certify monomial d=2 inflates by sqrt 2") {
    CertifyOptions opt;
    opt.corpus_size = 30;
    const auto cert = certify(BasisFamily::monomial(2), 1.0, opt, small_plan());
    CHECK(cert.C == 4.0);
    CHECK(cert.R == doctest::Approx(9.0 * 2.0 * std::sqrt(2.0)));
    CHECK(cert.R == (2.0 * cert.C + 1.0) * cert.r1 * cert.inflation);
    CHECK(cert.valid);
}

TEST_CASE("certify the Faber family") {
    CertifyOptions opt;
    opt.corpus_size = 40;
    const auto F = BasisFamily::faber_segment();
    const auto cert = certify(F, 1.0, opt, small_plan());
    CHECK(cert.shift_route);
    CHECK(cert.r_tilde == doctest::Approx(6.0));  // |psi_1|_K = 2 needs (rho + 1/rho)/3 >= 2
    CHECK(cert.R == (2.0 * cert.C + 1.0) * cert.r1);
    CHECK(cert.K_out.as<BernsteinEllipse>().semi_minor() == doctest::Approx(cert.R).epsilon(1e-12));
    CHECK(contains(cert.K_out, cert.K1));
    CHECK(cert.valid);
    CHECK(cert.worst_slack >= -1e-9);

    const auto psi_cert = certify(shift_basis(F, {0.0}), 1.0, opt, small_plan());
    CHECK_FALSE(psi_cert.shift_route);
    CHECK(psi_cert.C == doctest::Approx(3.0 + 2.0 / 3.0));
    CHECK(psi_cert.valid);
}

TEST_CASE("certify rejects bases without a constant member") {
    TruncatedSeries z(1, 1), z2(1, 2);
    z.set(MultiIndex{1}, 1.0);
    z2.set(MultiIndex{2}, 1.0);
    CHECK_THROWS_AS(certify(BasisFamily::explicit_members({z, z2}), 1.0, CertifyOptions{}, SamplingPlan{}),
                    InvalidInput);
}

TEST_CASE("certificate corpus starts with the constant 1") {
    const auto corpus = certificate_corpus(BasisFamily::monomial(1), 10, 3, 1.0, 10.0);
    REQUIRE(corpus.size() == 10);
    CHECK(corpus[0].coefficients().size() == 1);
    CHECK(corpus[0].coefficient(MultiIndex{0}) == Complex(1.0, 0.0));
    const auto again = certificate_corpus(BasisFamily::monomial(1), 10, 3, 1.0, 10.0);
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(corpus[i] == again[i]);
    CHECK_FALSE(certificate_corpus(BasisFamily::monomial(1), 10, 4, 1.0, 10.0)[1] == corpus[1]);
}

TEST_CASE("certificate JSON round trip") {
    CertifyOptions opt;
    opt.corpus_size = 20;
    const auto cert = certify(BasisFamily::monomial(1), 0.5, opt, SamplingPlan{});
    const nlohmann::json j = cert;
    CHECK(j.at("schema") == kSchema);
    const auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.R == cert.R);
    CHECK(back.C == cert.C);
    CHECK(back.K == cert.K);
    CHECK(back.K_out == cert.K_out);
    CHECK(back.worst_slack == cert.worst_slack);
    CHECK(nlohmann::json(back) == j);
}

TEST_CASE("transfer to larger domains") {
    CertifyOptions opt;
    opt.corpus_size = 20;
    const auto cert = certify(BasisFamily::monomial(1), 1.0, opt, SamplingPlan{});
    const ExpansionResult f{mobius_series(0.5, 30), 0.0, true};

    const auto same = transfer_check(cert, CompactSet::ball(1, cert.R), f);
    CHECK(same.holds);
    CHECK(same.lhs == doctest::Approx(majorant(f.coefficients, cert.basis, cert.K, SamplingPlan{})));
    const auto wider = transfer_check(cert, CompactSet::ball(1, 2.0 * cert.R), f);
    CHECK(wider.holds);
    CHECK(wider.rhs - wider.lhs > same.rhs - same.lhs);

    ExpansionResult bad = f;
    bad.converged = false;
    CHECK_THROWS_AS(transfer_check(cert, CompactSet::ball(1, cert.R), bad), InvalidInput);
    CHECK_THROWS_AS(transfer_check(cert, CompactSet::ball(1, 5.0), f), InvalidInput);

    const auto F = BasisFamily::faber_segment();
    const auto fcert = certify(F, 1.0, opt, small_plan());
    const double rho_G = 1.5 * fcert.K_out.as<BernsteinEllipse>().rho;
    for (const auto& g : faber_test_corpus(10, 21)) {
        const auto t = transfer_check(fcert, CompactSet::bernstein_ellipse(rho_G), ExpansionResult{g, 0.0, true});
        CHECK(t.holds);
    }
}
