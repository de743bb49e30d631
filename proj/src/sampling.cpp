#include "bohr/sampling.hpp"

#include "bohr/random.hpp"
#include "bohr/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bohr {

void SamplingPlan::validate() const {
    if (boundary_count < 8 || angle_count < 8 || refinement_rounds < 0)
        throw InvalidInput("sampling plan counts must be >= 8 (refinement_rounds >= 0)");
}

void to_json(nlohmann::json& j, const SamplingPlan& p) {
    j = nlohmann::json{{"boundary_count", p.boundary_count},
                       {"angle_count", p.angle_count},
                       {"seed", p.seed},
                       {"refinement_rounds", p.refinement_rounds}};
}

SamplingPlan plan_from_json(const nlohmann::json& j) {
    SamplingPlan p;
    p.boundary_count = j.value("boundary_count", p.boundary_count);
    p.angle_count = j.value("angle_count", p.angle_count);
    p.seed = j.value("seed", p.seed);
    p.refinement_rounds = j.value("refinement_rounds", p.refinement_rounds);
    p.validate();
    return p;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Parametrized boundary: grid parameters plus the map used for polishing.
struct Chart {
    std::vector<std::vector<double>> grid;
    std::vector<double> lo, hi;
    double window = 0.0;
    std::function<Point(const std::vector<double>&)> map;
};

// Kronecker (R_d) sequence generator: 1/g^(k+1), g^(d+1) = g + 1.
std::vector<double> kronecker_steps(int d) {
    double g = 2.0;
    for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (d + 1));
    std::vector<double> a(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) a[static_cast<std::size_t>(k)] = std::fmod(std::pow(1.0 / g, k + 1), 1.0);
    return a;
}

Chart make_chart(const CompactSet& K, const SamplingPlan& plan) {
    plan.validate();
    const int k = plan.boundary_count;
    Chart c;
    if (K.is<Segment>()) {
        c.lo = {0.0};
        c.hi = {kPi};
        c.window = kPi / k;
        for (int j = 0; j < k; ++j) c.grid.push_back({kPi * j / k});
        c.map = [](const std::vector<double>& t) { return Point{Complex(std::cos(t[0]), 0.0)}; };
        return c;
    }
    if (K.is<BernsteinEllipse>()) {
        const auto e = K.as<BernsteinEllipse>();
        c.lo = {-kInf};
        c.hi = {kInf};
        c.window = 2.0 * kPi / k;
        for (int j = 0; j < k; ++j) c.grid.push_back({2.0 * kPi * j / k});
        c.map = [e](const std::vector<double>& t) {
            return Point{Complex(e.semi_major() * std::cos(t[0]), e.semi_minor() * std::sin(t[0]))};
        };
        return c;
    }
    const int d = K.dimension();
    if (K.is<Polydisc>() || d == 1) {
        Point center;
        std::vector<double> radii;
        if (K.is<Polydisc>()) {
            center = K.as<Polydisc>().center;
            radii = K.as<Polydisc>().radii;
        } else {
            center = K.as<Ball>().center;
            radii = {K.as<Ball>().radius};
        }
        const auto du = static_cast<std::size_t>(d);
        c.lo.assign(du, -kInf);
        c.hi.assign(du, kInf);
        c.window = 2.0 * kPi / k;
        if (d <= 2) {
            std::size_t total = 1;
            for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(k);
            for (std::size_t idx = 0; idx < total; ++idx) {
                std::vector<double> t(du);
                std::size_t rem = idx;
                for (std::size_t i = 0; i < du; ++i) {
                    t[i] = 2.0 * kPi * static_cast<double>(rem % static_cast<std::size_t>(k)) / k;
                    rem /= static_cast<std::size_t>(k);
                }
                c.grid.push_back(std::move(t));
            }
        } else {
            const auto steps = kronecker_steps(d);
            Rng rng(derive_seed(plan.seed, 2));
            std::vector<double> offset(du);
            for (auto& o : offset) o = rng.uniform();
            const std::size_t total = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
            c.window = 2.0 * kPi / std::pow(static_cast<double>(total), 1.0 / d);
            for (std::size_t j = 0; j < total; ++j) {
                std::vector<double> t(du);
                for (std::size_t i = 0; i < du; ++i)
                    t[i] = 2.0 * kPi * std::fmod(offset[i] + static_cast<double>(j) * steps[i], 1.0);
                c.grid.push_back(std::move(t));
            }
        }
        c.map = [center, radii](const std::vector<double>& t) {
            Point z(center.size());
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = center[i] + std::polar(radii[i], t[i]);
            return z;
        };
        return c;
    }
    // Euclidean sphere in C^d, d > 1: seeded directions swept by e^{i theta}.
    const auto& b = K.as<Ball>();
    const auto du = static_cast<std::size_t>(d);
    Rng rng(derive_seed(plan.seed, 1));
    c.lo.assign(2 * du, -kInf);
    c.hi.assign(2 * du, kInf);
    c.window = 2.0 * kPi / k;
    for (int j = 0; j < k; ++j) {
        Point u(du);
        double norm = 0.0;
        for (auto& x : u) {
            x = Complex(rng.normal(), rng.normal());
            norm += std::norm(x);
        }
        norm = std::sqrt(norm);
        for (auto& x : u) x /= norm;
        for (int l = 0; l < k; ++l) {
            const Complex phase = std::polar(1.0, 2.0 * kPi * l / k);
            std::vector<double> t(2 * du);
            for (std::size_t i = 0; i < du; ++i) {
                const Complex v = phase * u[i];
                t[2 * i] = v.real();
                t[2 * i + 1] = v.imag();
            }
            c.grid.push_back(std::move(t));
        }
    }
    const Point center = b.center;
    const double radius = b.radius;
    c.map = [center, radius](const std::vector<double>& t) {
        double n = 0.0;
        for (double x : t) n += x * x;
        n = std::sqrt(n);
        Point z(center.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = center[i] + radius * Complex(t[2 * i], t[2 * i + 1]) / n;
        return z;
    };
    return c;
}

double checked(const RealEvaluable& g, const Point& z) {
    const double v = g(z);
    if (!std::isfinite(v))
        throw EvaluationFailure("non-finite value at " + format_point(z), z);
    return v;
}

// Golden-section maximization along coordinate `k` of t, in place.
double golden_polish(const RealEvaluable& g, const Chart& c, std::vector<double>& t, std::size_t k,
                     double h, double current) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = std::max(t[k] - h, c.lo[k]);
    double b = std::min(t[k] + h, c.hi[k]);
    if (!(b > a)) return current;
    auto value_at = [&](double x) {
        auto s = t;
        s[k] = x;
        return checked(g, c.map(s));
    };
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = value_at(x1), f2 = value_at(x2);
    for (int it = 0; it < 48 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = value_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = value_at(x1);
        }
    }
    double best_x = f1 > f2 ? x1 : x2;
    double best = std::max(f1, f2);
    // the interval ends are candidates too (segment endpoints)
    for (double x : {a, b}) {
        const double v = value_at(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    if (best > current) {
        t[k] = best_x;
        return best;
    }
    return current;
}

}  // namespace

std::vector<Point> boundary_samples(const CompactSet& K, const SamplingPlan& plan) {
    const Chart c = make_chart(K, plan);
    std::vector<Point> out;
    out.reserve(c.grid.size());
    for (const auto& t : c.grid) out.push_back(c.map(t));
    return out;
}

SupEstimate maximize_on_boundary(const RealEvaluable& g, const CompactSet& K, const SamplingPlan& plan) {
    const Chart c = make_chart(K, plan);
    std::vector<double> values(c.grid.size());
    for (std::size_t j = 0; j < c.grid.size(); ++j) values[j] = checked(g, c.map(c.grid[j]));

    std::vector<std::size_t> order(values.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    constexpr std::size_t kStarts = 4;
    const std::size_t starts = std::min(kStarts, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return values[a] > values[b] || (values[a] == values[b] && a < b);
                      });

    SupEstimate est;
    est.samples = static_cast<int>(values.size());
    est.resolution = c.window;
    est.value = values[order[0]];
    est.argmax = c.map(c.grid[order[0]]);
    for (std::size_t s = 0; s < starts; ++s) {
        auto t = c.grid[order[s]];
        double v = values[order[s]];
        double h = c.window;
        for (int round = 0; round < plan.refinement_rounds; ++round) {
            for (std::size_t k = 0; k < t.size(); ++k) v = golden_polish(g, c, t, k, h, v);
            h *= 0.5;
        }
        if (v > est.value) {
            est.value = v;
            est.argmax = c.map(t);
        }
    }
    return est;
}

SupEstimate sup_estimate(const Evaluable& f, const CompactSet& K, const SamplingPlan& plan) {
    return maximize_on_boundary([&](const Point& z) { return std::abs(f(z)); }, K, plan);
}

double sup_norm(const Evaluable& f, const CompactSet& K, const SamplingPlan& plan) {
    return sup_estimate(f, K, plan).value;
}

double sup_real_part(const Evaluable& f, const CompactSet& K, const SamplingPlan& plan) {
    return maximize_on_boundary([&](const Point& z) { return f(z).real(); }, K, plan).value;
}

}  // namespace bohr
