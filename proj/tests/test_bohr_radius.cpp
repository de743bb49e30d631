#include <doctest.h>

#include "bohr/bohr_radius.hpp"
#include "bohr/random.hpp"

#include <chrono>
#include <cmath>

using namespace bohr;

namespace {

const DomainFamily balls = [](double r) { return CompactSet::ball(1, r); };

double mobius_radius(double a) { return 1.0 / (1.0 + 2.0 * a); }

// brute-force oracle for the Faber threshold: dense ellipse sampling and
// bisection, independent of sup_norm / member_sup
double brute_faber_threshold(const TruncatedSeries& c) {
    auto F = [&](Complex z) {
        Complex s = c.coefficient(MultiIndex{0});
        for (int n = 1; n <= c.degree_bound(); ++n) {
            // 2 T_n(z) = w^n + w^-n with z = (w + 1/w)/2
            const Complex w = z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
            s += c.coefficient(MultiIndex{n}) * (std::pow(w, n) + std::pow(w, -n));
        }
        return s;
    };
    double maj = std::abs(c.coefficient(MultiIndex{0}));
    for (int n = 1; n <= c.degree_bound(); ++n) maj += 2.0 * std::abs(c.coefficient(MultiIndex{n}));
    auto sup_at = [&](double rho) {
        double best = 0.0;
        for (int j = 0; j < 200000; ++j) {
            const double t = 2.0 * kPi * j / 200000;
            const Complex w = std::polar(rho, t);
            best = std::max(best, std::abs(F(0.5 * (w + 1.0 / w))));
        }
        return best;
    };
    double lo = 1.0, hi = 10.0;
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        (maj <= sup_at(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TEST_CASE("majorant examples") {
    SamplingPlan plan;
    const auto mono = BasisFamily::monomial(1);
    CHECK(majorant(TruncatedSeries::constant(1, 1.0), mono, CompactSet::ball(1, 5.0), plan) == 1.0);
    CHECK(majorant(TruncatedSeries::constant(1, 1.0), BasisFamily::faber_segment(),
                   CompactSet::bernstein_ellipse(3.0), plan) == 1.0);

    const double a = 0.7, r = 1.2;
    const int N = 30;
    TruncatedSeries f(1, N);
    for (int n = 0; n <= N; ++n) f.set(MultiIndex{n}, std::pow(a, n));
    const double q = a * r;
    const double closed = (1.0 - std::pow(q, N + 1)) / (1.0 - q);
    CHECK(std::abs(majorant(f, mono, CompactSet::ball(1, r), plan) - closed) < 1e-10);

    TruncatedSeries e5(1, 5);
    e5.set(MultiIndex{5}, 1.0);
    const double expected = 2.0 * (std::pow(2.0, 5) + std::pow(2.0, -5)) / 2.0;
    CHECK(expected == 32.03125);
    CHECK(std::abs(majorant(e5, BasisFamily::faber_segment(), CompactSet::bernstein_ellipse(2.0), plan) - expected) <
          1e-8);
}

TEST_CASE("majorant dominates the partial sum") {
    SamplingPlan plan;
    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto f = random_series(1, 15, 0.8, 900 + s);
        for (const auto& B : {BasisFamily::monomial(1), BasisFamily::faber_segment()}) {
            const auto K = B.kind() == BasisKind::Monomial ? CompactSet::ball(1, 1.1) : CompactSet::bernstein_ellipse(1.7);
            CHECK(majorant(f, B, K, plan) >= sup_norm(expansion_function(B, f), K, plan) - 1e-9);
        }
    }
    const auto g = random_series(2, 6, 0.8, 3);
    const auto B2 = BasisFamily::monomial(2);
    const auto K2 = CompactSet::ball(2, 1.0);
    CHECK(majorant(g, B2, K2, plan) >= sup_norm(expansion_function(B2, g), K2, plan) - 1e-9);
}

TEST_CASE("Mobius Bohr radius is 1/(1+2a)") {
    SamplingPlan plan;
    const auto mono = BasisFamily::monomial(1);
    const auto ref = CompactSet::ball(1, 1.0 - 1e-4);
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
        const auto f = mobius_series(a, 200);
        const auto r = individual_bohr_radius(f, mono, balls, 1e-9, 1.0, ref, plan);
        CHECK_FALSE(r.saturated);
        CHECK(std::abs(r.radius - mobius_radius(a)) < 2e-3);
        // bisection consistency around the returned radius
        CHECK(majorant(f, mono, balls(r.radius - 1e-4), plan) <= r.reference_sup);
        CHECK(majorant(f, mono, balls(r.radius + 1e-4), plan) > r.reference_sup);
    }
}

TEST_CASE("individual radius: constants saturate, f = z gives 1") {
    SamplingPlan plan;
    const auto mono = BasisFamily::monomial(1);
    const auto ref = CompactSet::ball(1, 1.0);
    const auto c = individual_bohr_radius(TruncatedSeries::constant(1, Complex(0.3, 0.4)), mono, balls, 1e-9, 1.0,
                                          ref, plan);
    CHECK(c.saturated);
    CHECK(c.radius == 1.0);
    TruncatedSeries z(1, 1);
    z.set(MultiIndex{1}, 1.0);
    const auto r = individual_bohr_radius(z, mono, balls, 1e-9, 1.0, ref, plan);
    CHECK(std::abs(r.radius - 1.0) <= 1e-6);
    CHECK_THROWS_AS(individual_bohr_radius(z, mono, balls, 1.0, 0.5, ref, plan), InvalidInput);
}

TEST_CASE("individual radius reports violation at the smallest r") {
    SamplingPlan plan;
    TruncatedSeries f(1, 1);
    f.set(MultiIndex{0}, 1.0);
    f.set(MultiIndex{1}, 1.0);
    // reference sup 1.0 but majorant >= 1 + r_min
    const auto r = individual_bohr_radius(f, BasisFamily::monomial(1), balls, 0.1, 1.0, 1.0, plan);
    CHECK(r.violated_at_min);
    CHECK(r.radius == 0.0);
}

TEST_CASE("majorant curve is non-decreasing with CSV header") {
    SamplingPlan plan;
    const auto f = mobius_series(0.5, 60);
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(0.1 * i);
    const auto curve = majorant_curve(f, BasisFamily::monomial(1), balls, grid, CompactSet::ball(1, 1.0), plan);
    for (std::size_t i = 1; i < curve.values.size(); ++i) CHECK(curve.values[i] >= curve.values[i - 1]);
    CHECK(to_csv(curve).rfind("r,M(r),S\n", 0) == 0);
}

TEST_CASE("kappa_1 upper bound near 1/3") {
    SamplingPlan plan;
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = kappa_upper_search(1, 500, 7, plan);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(est.upper >= 0.330);
    CHECK(est.upper <= 0.337);
    CHECK(est.lower <= est.upper);
    CHECK(est.lower >= 0.33);
    CHECK(secs < 10.0);
    CHECK(est.witness.at("description") == "mobius(z1)");
}

TEST_CASE("kappa upper bounds across dimensions") {
    SamplingPlan plan;
    plan.boundary_count = 32;
    const auto k1 = kappa_upper_search(1, 40, 7, plan);
    const auto k2 = kappa_upper_search(2, 40, 7, plan);
    const auto k3 = kappa_upper_search(3, 30, 7, plan);
    const auto k4 = kappa_upper_search(4, 30, 7, plan);
    CHECK(k2.upper <= mobius_radius(0.9) + 2e-3);
    CHECK(k2.upper <= k1.upper + 5e-3);
    CHECK(k3.upper <= k2.upper + 5e-3);
    CHECK(k4.upper <= k3.upper + 5e-3);
    CHECK(k4.upper <= k2.upper + 5e-3);
}

TEST_CASE("Mobius truncation tail") {
    for (double a : {0.3, 0.9, 0.99}) {
        const int n = mobius_truncation(a, 1e-10);
        CHECK((1.0 + a) * std::pow(a, n) <= 1e-10);
        CHECK((1.0 + a) * std::pow(a, n - 1) > 1e-10);
    }
    const auto f = mobius_series(0.5, 10);
    CHECK(std::abs(eval(f, {0.3}) - (0.5 - 0.3) / (1.0 - 0.15)) < 1e-3);
}

TEST_CASE("Faber R0 on small test sets") {
    SamplingPlan plan;
    const auto one = TruncatedSeries::constant(1, 1.0);
    const auto only_const = faber_bohr_R0({one}, plan);
    CHECK(only_const.upper == 1.0);
    CHECK_FALSE(only_const.violation);

    // F0 + eps F_n: majorant 1 + 2 eps, sup on E_rho is 1 + eps (rho^n + rho^-n)
    for (int n : {1, 3, 4}) {
        TruncatedSeries f(1, n);
        f.set(MultiIndex{0}, 1.0);
        f.set(MultiIndex{n}, 0.05);
        const auto e = faber_bohr_R0({f}, plan);
        CHECK(e.upper == 1.0);
        CHECK(majorant(f, BasisFamily::faber_segment(), CompactSet::segment(), plan) == doctest::Approx(1.1));
    }

    // F1 - F3 = 8x(1 - x^2): strict inequality needs rho > 1
    TruncatedSeries g(1, 3);
    g.set(MultiIndex{1}, 1.0);
    g.set(MultiIndex{3}, -1.0);
    const auto e = faber_bohr_R0({g}, plan);
    const double oracle = brute_faber_threshold(g);
    CHECK(oracle > 1.0);
    CHECK(e.lower <= e.upper);
    CHECK(std::abs(e.upper - oracle) < 1e-5);
}

TEST_CASE("Faber R0 is monotone in the test set") {
    SamplingPlan plan;
    const auto corpus = faber_test_corpus(40, 3);
    double prev_hi = 1.0, prev_lo = 1.0;
    for (std::size_t k : {5u, 10u, 20u, 40u}) {
        const std::vector<TruncatedSeries> sub(corpus.begin(), corpus.begin() + static_cast<std::ptrdiff_t>(k));
        const auto e = faber_bohr_R0(sub, plan);
        CHECK(e.upper >= prev_hi);
        CHECK(e.lower >= prev_lo);
        prev_hi = e.upper;
        prev_lo = e.lower;
    }
}

TEST_CASE("Faber R0 reports violation at rho_max") {
    SamplingPlan plan;
    TruncatedSeries g(1, 3);
    g.set(MultiIndex{1}, 1.0);
    g.set(MultiIndex{3}, -1.0);
    const auto e = faber_bohr_R0({g}, plan, 1.0001);
    CHECK(e.violation);
    CHECK(e.witness.at("index") == 0);
}
