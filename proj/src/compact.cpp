#include "bohr/compact.hpp"

#include "bohr/series.hpp"

#include <algorithm>
#include <cmath>

namespace bohr {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void require_finite_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive and finite");
}

}  // namespace

CompactSet CompactSet::ball(Point center, double radius) {
    if (center.empty()) throw InvalidInput("ball center must have dimension >= 1");
    require_finite_positive(radius, "ball radius");
    return CompactSet(Ball{std::move(center), radius});
}

CompactSet CompactSet::ball(int d, double radius) {
    if (d < 1) throw InvalidInput("dimension must be >= 1");
    return ball(Point(static_cast<std::size_t>(d)), radius);
}

CompactSet CompactSet::polydisc(Point center, std::vector<double> radii) {
    if (center.empty() || center.size() != radii.size())
        throw InvalidInput("polydisc center and radii must have equal dimension >= 1");
    for (double r : radii) require_finite_positive(r, "polydisc radius");
    return CompactSet(Polydisc{std::move(center), std::move(radii)});
}

CompactSet CompactSet::polydisc(int d, double radius) {
    if (d < 1) throw InvalidInput("dimension must be >= 1");
    return polydisc(Point(static_cast<std::size_t>(d)),
                    std::vector<double>(static_cast<std::size_t>(d), radius));
}

CompactSet CompactSet::segment() { return CompactSet(Segment{}); }

CompactSet CompactSet::bernstein_ellipse(double rho) {
    if (!(rho > 1.0) || !std::isfinite(rho)) throw InvalidInput("Bernstein ellipse needs rho > 1");
    return CompactSet(BernsteinEllipse{rho});
}

int CompactSet::dimension() const {
    return std::visit(overloaded{
                          [](const Ball& b) { return static_cast<int>(b.center.size()); },
                          [](const Polydisc& p) { return static_cast<int>(p.center.size()); },
                          [](const auto&) { return 1; },
                      },
                      shape_);
}

std::string CompactSet::kind_name() const {
    return std::visit(overloaded{
                          [](const Ball&) { return std::string("ball"); },
                          [](const Polydisc&) { return std::string("polydisc"); },
                          [](const Segment&) { return std::string("segment"); },
                          [](const BernsteinEllipse&) { return std::string("bernstein_ellipse"); },
                      },
                      shape_);
}

bool CompactSet::contains_point(const Point& z, double tol) const {
    if (static_cast<int>(z.size()) != dimension()) throw InvalidInput("point dimension mismatch");
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                double s = 0.0;
                for (std::size_t k = 0; k < z.size(); ++k) s += std::norm(z[k] - b.center[k]);
                return std::sqrt(s) <= b.radius + tol;
            },
            [&](const Polydisc& p) {
                for (std::size_t k = 0; k < z.size(); ++k)
                    if (std::abs(z[k] - p.center[k]) > p.radii[k] + tol) return false;
                return true;
            },
            [&](const Segment&) {
                return std::abs(z[0].imag()) <= tol && std::abs(z[0].real()) <= 1.0 + tol;
            },
            [&](const BernsteinEllipse& e) {
                const double a = e.semi_major(), b = e.semi_minor();
                const double x = z[0].real() / a, y = z[0].imag() / b;
                return x * x + y * y <= 1.0 + tol;
            },
        },
        shape_);
}

double CompactSet::outer_radius() const {
    return std::visit(overloaded{
                          [](const Ball& b) {
                              double c = 0.0;
                              for (const auto& x : b.center) c = std::max(c, std::abs(x));
                              return c + b.radius;
                          },
                          [](const Polydisc& p) {
                              double m = 0.0;
                              for (std::size_t k = 0; k < p.radii.size(); ++k)
                                  m = std::max(m, std::abs(p.center[k]) + p.radii[k]);
                              return m;
                          },
                          [](const Segment&) { return 1.0; },
                          [](const BernsteinEllipse& e) { return e.semi_major(); },
                      },
                      shape_);
}

bool CompactSet::operator==(const CompactSet& other) const {
    if (shape_.index() != other.shape_.index()) return false;
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                const auto& o = other.as<Ball>();
                return b.center == o.center && b.radius == o.radius;
            },
            [&](const Polydisc& p) {
                const auto& o = other.as<Polydisc>();
                return p.center == o.center && p.radii == o.radii;
            },
            [](const Segment&) { return true; },
            [&](const BernsteinEllipse& e) { return e.rho == other.as<BernsteinEllipse>().rho; },
        },
        shape_);
}

CompactSet dilate(const CompactSet& K, double lambda) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw InvalidInput("dilation factor must be >= 1");
    if (lambda == 1.0) return K;
    return std::visit(overloaded{
                          [&](const Ball& b) { return CompactSet::ball(b.center, b.radius * lambda); },
                          [&](const Polydisc& p) {
                              auto radii = p.radii;
                              for (auto& r : radii) r *= lambda;
                              return CompactSet::polydisc(p.center, std::move(radii));
                          },
                          [&](const Segment&) { return CompactSet::bernstein_ellipse(lambda); },
                          [&](const BernsteinEllipse& e) {
                              return CompactSet::bernstein_ellipse(std::pow(e.rho, lambda));
                          },
                      },
                      K.shape());
}

namespace {

Point planar_boundary_point(const CompactSet& K, double theta) {
    if (K.is<Ball>()) {
        const auto& b = K.as<Ball>();
        return {b.center[0] + std::polar(b.radius, theta)};
    }
    if (K.is<Polydisc>()) {
        const auto& p = K.as<Polydisc>();
        return {p.center[0] + std::polar(p.radii[0], theta)};
    }
    if (K.is<BernsteinEllipse>()) {
        const auto& e = K.as<BernsteinEllipse>();
        return {Complex(e.semi_major() * std::cos(theta), e.semi_minor() * std::sin(theta))};
    }
    return {Complex(std::cos(theta), 0.0)};
}

}  // namespace

bool contains(const CompactSet& outer, const CompactSet& inner) {
    if (outer.dimension() != inner.dimension()) return false;
    constexpr double tol = 1e-12;
    if (outer.is<Ball>() && inner.is<Ball>()) {
        const auto& o = outer.as<Ball>();
        const auto& i = inner.as<Ball>();
        double s = 0.0;
        for (std::size_t k = 0; k < o.center.size(); ++k) s += std::norm(o.center[k] - i.center[k]);
        return std::sqrt(s) + i.radius <= o.radius + tol;
    }
    if (outer.is<Polydisc>() && inner.is<Polydisc>()) {
        const auto& o = outer.as<Polydisc>();
        const auto& i = inner.as<Polydisc>();
        for (std::size_t k = 0; k < o.radii.size(); ++k)
            if (std::abs(o.center[k] - i.center[k]) + i.radii[k] > o.radii[k] + tol) return false;
        return true;
    }
    if (outer.is<BernsteinEllipse>()) {
        if (inner.is<Segment>()) return true;
        if (inner.is<BernsteinEllipse>()) return inner.as<BernsteinEllipse>().rho <= outer.as<BernsteinEllipse>().rho;
    }
    if (inner.is<Segment>() && outer.is<Segment>()) return true;
    if (outer.is<Segment>()) return false;
    if (outer.dimension() != 1) {
        // polydisc/ball mixtures centered together
        if (outer.is<Ball>() && inner.is<Polydisc>()) {
            const auto& o = outer.as<Ball>();
            const auto& i = inner.as<Polydisc>();
            double s = 0.0;
            for (std::size_t k = 0; k < i.radii.size(); ++k)
                s += std::pow(std::abs(i.center[k] - o.center[k]) + i.radii[k], 2);
            return std::sqrt(s) <= o.radius + tol;
        }
        if (outer.is<Polydisc>() && inner.is<Ball>()) {
            const auto& o = outer.as<Polydisc>();
            const auto& i = inner.as<Ball>();
            for (std::size_t k = 0; k < o.radii.size(); ++k)
                if (std::abs(i.center[k] - o.center[k]) + i.radius > o.radii[k] + tol) return false;
            return true;
        }
        return false;
    }
    // planar convex sets: inner boundary inside outer closure
    constexpr int n = 4096;
    for (int j = 0; j < n; ++j) {
        const double theta = 2.0 * kPi * j / n;
        if (!outer.contains_point(planar_boundary_point(inner, theta), 1e-9)) return false;
    }
    return true;
}

void to_json(nlohmann::json& j, const CompactSet& K) {
    nlohmann::json params;
    std::visit(overloaded{
                   [&](const Ball& b) {
                       params = {{"center", point_to_json(b.center)}, {"radius", b.radius}};
                   },
                   [&](const Polydisc& p) {
                       params = {{"center", point_to_json(p.center)}, {"radii", p.radii}};
                   },
                   [&](const Segment&) { params = nlohmann::json::object(); },
                   [&](const BernsteinEllipse& e) { params = {{"rho", e.rho}}; },
               },
               K.shape());
    j = nlohmann::json{{"kind", K.kind_name()}, {"params", params}};
}

CompactSet compact_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    if (kind == "ball") return CompactSet::ball(point_from_json(p.at("center")), p.at("radius").get<double>());
    if (kind == "polydisc")
        return CompactSet::polydisc(point_from_json(p.at("center")), p.at("radii").get<std::vector<double>>());
    if (kind == "segment") return CompactSet::segment();
    if (kind == "bernstein_ellipse") return CompactSet::bernstein_ellipse(p.at("rho").get<double>());
    throw InvalidInput("unknown compact kind '" + kind + "'");
}

}  // namespace bohr
