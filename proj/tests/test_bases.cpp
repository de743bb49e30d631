#include <doctest.h>

#include "bohr/bases.hpp"
#include "bohr/random.hpp"

#include <cmath>

using namespace bohr;

namespace {

double chebyshev_t(int n, double x) { return std::cos(n * std::acos(x)); }

TruncatedSeries unit(const BasisFamily& B, const MultiIndex& k, int degree) {
    TruncatedSeries e(B.dimension(), degree);
    e.set(k, 1.0);
    return e;
}

}  // namespace

TEST_CASE("basis_eval examples") {
    const auto mono = BasisFamily::monomial(1);
    CHECK(std::abs(basis_eval(mono, MultiIndex{3}, {2.0}) - 8.0) < 1e-15);
    const auto faber = BasisFamily::faber_segment();
    CHECK(std::abs(basis_eval(faber, MultiIndex{2}, {1.0}) - 2.0) < 1e-15);
    CHECK(basis_eval(faber, MultiIndex{0}, {Complex(3, 4)}) == Complex(1.0));
    const auto shifted = shift_basis(mono, {0.0});
    CHECK(std::abs(basis_eval(shifted, MultiIndex{3}, {2.0}) - 8.0) < 1e-15);
    CHECK(basis_eval(shifted, MultiIndex{0}, {2.0}) == Complex(1.0));
    CHECK_THROWS_AS(basis_eval(faber, MultiIndex{1, 1}, {0.5}), InvalidInput);
}

TEST_CASE("Faber members are 2 T_n on the segment") {
    const auto faber = BasisFamily::faber_segment();
    for (int n = 1; n <= 12; ++n)
        for (double x : {-1.0, -0.3, 0.0, 0.42, 1.0})
            CHECK(std::abs(basis_eval(faber, MultiIndex{n}, {x}) - 2.0 * chebyshev_t(n, x)) < 1e-12);
}

TEST_CASE("shifted Faber at 0 vanishes at 0") {
    const auto psi = shift_basis(BasisFamily::faber_segment(), {0.0});
    for (int n = 1; n <= 8; ++n) CHECK(std::abs(basis_eval(psi, MultiIndex{n}, {0.0})) < 1e-15);
    CHECK(std::abs(basis_eval(psi, MultiIndex{2}, {0.0})) == 0.0);
}

TEST_CASE("shift relation f = f(z0) + sum f_n psi_n at random points") {
    for (const auto& B : {BasisFamily::monomial(1), BasisFamily::faber_segment(), BasisFamily::monomial(2)}) {
        const auto f = random_series(B.dimension(), 10, 0.6, 42);
        Rng rng(9);
        Point z0(static_cast<std::size_t>(B.dimension()));
        for (auto& c : z0) c = rng.unit_disc();
        const auto psi = shift_basis(B, z0);
        const Complex f_z0 = expansion_eval(B, f, z0);
        for (int i = 0; i < 20; ++i) {
            Point z(z0.size());
            for (auto& c : z) c = 1.5 * rng.unit_disc();
            Complex rhs = f_z0;
            for (const auto& [idx, c] : f.coefficients())
                if (idx != B.zero_index()) rhs += c * basis_eval(psi, idx, z);
            const Complex lhs = expansion_eval(B, f, z);
            CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
            // the shifted family's own expansion with c_0 = f(z0) agrees
            auto g = f;
            g.set(B.zero_index(), f_z0);
            CHECK(std::abs(expansion_eval(psi, g, z) - lhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("extract exp(z) Taylor coefficients") {
    const auto B = BasisFamily::monomial(1);
    const Evaluable f = [](const Point& z) { return std::exp(z[0]); };
    const auto r = extract_coefficients(B, f, ExtractionBudget{});
    CHECK(r.converged);
    double factorial = 1.0;
    for (int n = 0; n <= 12; ++n) {
        if (n > 0) factorial *= n;
        CHECK(std::abs(r.coefficients.coefficient(MultiIndex{n}) - 1.0 / factorial) < 1e-10);
    }
}

TEST_CASE("extract reproduces F_5 and constants") {
    const auto faber = BasisFamily::faber_segment();
    const Evaluable f5 = [&](const Point& z) { return basis_eval(faber, MultiIndex{5}, z); };
    const auto r = extract_coefficients(faber, f5, ExtractionBudget{});
    for (const auto& idx : faber.indices(48))
        CHECK(std::abs(r.coefficients.coefficient(idx) - (idx[0] == 5 ? 1.0 : 0.0)) < 1e-10);

    const Evaluable one = [](const Point&) { return Complex(1.0); };
    for (const auto& B : {BasisFamily::monomial(1), BasisFamily::monomial(2), faber}) {
        const auto c = extract_coefficients(B, one, ExtractionBudget{});
        for (const auto& idx : B.indices(c.coefficients.degree_bound()))
            CHECK(std::abs(c.coefficients.coefficient(idx) - (idx == B.zero_index() ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("reproduction property for k <= 12 in both families") {
    for (const auto& B : {BasisFamily::monomial(1), BasisFamily::faber_segment()}) {
        for (int k = 0; k <= 12; ++k) {
            const MultiIndex idx{k};
            const Evaluable member = [&](const Point& z) { return basis_eval(B, idx, z); };
            ExtractionBudget budget;
            budget.degree = 24;
            const auto r = extract_coefficients(B, member, budget);
            CHECK(r.converged);
            for (const auto& j : B.indices(24))
                CHECK(std::abs(r.coefficients.coefficient(j) - (j == idx ? 1.0 : 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("extraction is linear") {
    for (const auto& B : {BasisFamily::monomial(1), BasisFamily::faber_segment()}) {
        const auto f = random_series(1, 10, 0.5, 1);
        const auto g = random_series(1, 10, 0.5, 2);
        const auto ef = expansion_function(B, f);
        const auto eg = expansion_function(B, g);
        const Evaluable sum = [&](const Point& z) { return ef(z) + eg(z); };
        ExtractionBudget budget;
        budget.degree = 16;
        const auto a = extract_coefficients(B, ef, budget).coefficients;
        const auto b = extract_coefficients(B, eg, budget).coefficients;
        const auto c = extract_coefficients(B, sum, budget).coefficients;
        for (const auto& idx : B.indices(16))
            CHECK(std::abs(c.coefficient(idx) - a.coefficient(idx) - b.coefficient(idx)) < 1e-10);
    }
}

TEST_CASE("shifted extraction stores f(z0) at index 0") {
    const auto B = shift_basis(BasisFamily::monomial(1), {0.25});
    const Evaluable f = [](const Point& z) { return std::exp(z[0]); };
    const auto r = extract_coefficients(B, f, ExtractionBudget{});
    CHECK(std::abs(r.coefficients.coefficient(MultiIndex{0}) - std::exp(0.25)) < 1e-12);
    CHECK(std::abs(r.coefficients.coefficient(MultiIndex{1}) - 1.0) < 1e-12);
}

TEST_CASE("non-converged extraction is reported") {
    // pole just outside the torus: degree 8 leaves a large tail
    const Evaluable f = [](const Point& z) { return 1.0 / (1.1 - z[0]); };
    ExtractionBudget budget;
    budget.radius = 1.0;
    budget.degree = 8;
    const auto r = extract_coefficients(BasisFamily::monomial(1), f, budget);
    CHECK_FALSE(r.converged);
    CHECK(r.residual > 0.0);
}

TEST_CASE("member sup closed forms agree with sampling") {
    SamplingPlan plan;
    plan.boundary_count = 128;
    const auto faber = BasisFamily::faber_segment();
    const auto psi = shift_basis(faber, {0.0});
    for (double rho : {1.5, 2.0, 3.0}) {
        const auto E = CompactSet::bernstein_ellipse(rho);
        for (int n = 1; n <= 12; ++n) {
            const MultiIndex idx{n};
            const double exact = std::pow(rho, n) + std::pow(rho, -n);
            CHECK(*member_sup_closed_form(faber, idx, E) == doctest::Approx(exact).epsilon(1e-14));
            const double sampled = sup_norm([&](const Point& z) { return basis_eval(faber, idx, z); }, E, plan);
            CHECK(std::abs(sampled - exact) <= 1e-9 * exact);
            const double psi_sampled = sup_norm([&](const Point& z) { return basis_eval(psi, idx, z); }, E, plan);
            CHECK(std::abs(psi_sampled - *member_sup_closed_form(psi, idx, E)) <= 1e-9 * psi_sampled);
        }
    }
    const auto mono = BasisFamily::monomial(2);
    const auto ball = CompactSet::ball(2, 1.5);
    plan.boundary_count = 48;
    plan.refinement_rounds = 3;
    for (const auto& idx : mono.indices(4)) {
        const double exact = *member_sup_closed_form(mono, idx, ball);
        const double sampled = sup_norm([&](const Point& z) { return basis_eval(mono, idx, z); }, ball, plan);
        CHECK(sampled <= exact * (1.0 + 1e-12));
        CHECK(sampled >= exact * (1.0 - 1e-6));
    }
}

TEST_CASE("members n >= 1 grow without bound") {
    SamplingPlan plan;
    for (const auto& B : {BasisFamily::monomial(1), BasisFamily::faber_segment()}) {
        for (int n = 1; n <= 6; ++n) {
            double prev = 0.0;
            for (double r : {1.0, 2.0, 4.0, 8.0}) {
                const auto K = B.kind() == BasisKind::Monomial ? CompactSet::ball(1, r)
                               : r == 1.0                      ? CompactSet::segment()
                                                               : CompactSet::bernstein_ellipse(r);
                const double s = sup_norm([&](const Point& z) { return basis_eval(B, MultiIndex{n}, z); }, K, plan);
                CHECK(s > prev);
                prev = s;
            }
        }
    }
}

TEST_CASE("explicit family without a constant member") {
    TruncatedSeries z(1, 1);
    z.set(MultiIndex{1}, 1.0);
    TruncatedSeries z2(1, 2);
    z2.set(MultiIndex{2}, 1.0);
    const auto B = BasisFamily::explicit_members({z, z2});
    CHECK_FALSE(B.has_constant_member());
    CHECK(BasisFamily::explicit_members({TruncatedSeries::constant(1, 1.0), z}).has_constant_member());
    CHECK_THROWS_AS(extract_coefficients(B, [](const Point&) { return Complex(1.0); }, {}), InvalidInput);
}

TEST_CASE("basis json round trip") {
    const auto B = shift_basis(BasisFamily::faber_segment(), {Complex(0.1, -0.2)});
    nlohmann::json j = B;
    const auto C = basis_from_json(j);
    CHECK(C.kind() == BasisKind::Shifted);
    CHECK(C.base().kind() == BasisKind::FaberSegment);
    CHECK(C.shift_point() == B.shift_point());
    nlohmann::json e = ExpansionResult{TruncatedSeries::constant(1, 2.0), 0.0, true};
    CHECK(e.at("residual") == 0.0);
}
