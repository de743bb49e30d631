#pragma once

#include "bohr/types.hpp"

#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace bohr {

struct Ball {
    Point center;
    double radius;
};

struct Polydisc {
    Point center;
    std::vector<double> radii;
};

/// The real segment [-1, 1] in the plane.
struct Segment {};

/// Joukowski image of |w| = rho, i.e. a sub-level set of the Green function
/// of [-1, 1] with pole at infinity.
struct BernsteinEllipse {
    double rho;
    double semi_major() const { return 0.5 * (rho + 1.0 / rho); }
    double semi_minor() const { return 0.5 * (rho - 1.0 / rho); }
};

/// One of the four compact kinds every experiment works with. Immutable.
class CompactSet {
public:
    using Shape = std::variant<Ball, Polydisc, Segment, BernsteinEllipse>;

    static CompactSet ball(Point center, double radius);
    static CompactSet ball(int d, double radius);
    static CompactSet polydisc(Point center, std::vector<double> radii);
    static CompactSet polydisc(int d, double radius);
    static CompactSet segment();
    static CompactSet bernstein_ellipse(double rho);

    int dimension() const;
    const Shape& shape() const { return shape_; }
    std::string kind_name() const;

    template <class T> bool is() const { return std::holds_alternative<T>(shape_); }
    template <class T> const T& as() const { return std::get<T>(shape_); }

    /// Closed-set membership up to tol.
    bool contains_point(const Point& z, double tol = 1e-12) const;

    /// Largest |z_k| over the set, coordinatewise max.
    double outer_radius() const;

    bool operator==(const CompactSet& other) const;

private:
    explicit CompactSet(Shape s) : shape_(std::move(s)) {}
    Shape shape_;
};

/// Scale by lambda >= 1: radii multiply, ellipses go rho -> rho^lambda and
/// the segment becomes BernsteinEllipse(lambda) when lambda > 1.
CompactSet dilate(const CompactSet& K, double lambda);

/// inner is a subset of outer. Exact for the nested pairs that occur
/// (concentric balls, polydiscs, ellipses, segment in ellipse); other
/// planar pairs are decided on a dense boundary grid.
bool contains(const CompactSet& outer, const CompactSet& inner);

void to_json(nlohmann::json& j, const CompactSet& K);
CompactSet compact_from_json(const nlohmann::json& j);

}  // namespace bohr
