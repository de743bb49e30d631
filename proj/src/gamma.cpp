#include "bohr/gamma.hpp"

#include "bohr/lp.hpp"
#include "bohr/parallel.hpp"
#include "bohr/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bohr {

namespace {

constexpr double kMonotoneTol = 1e-6;
constexpr double kClosedFormMargin = 1e-12;

bool planar_domain(const CompactSet& D) {
    return D.dimension() == 1 && (D.is<Ball>() || D.is<BernsteinEllipse>());
}

bool interior(const CompactSet& D, Complex z) {
    if (D.is<Ball>()) {
        const auto& b = D.as<Ball>();
        return std::abs(z - b.center[0]) < b.radius * (1.0 - 1e-12);
    }
    if (D.is<BernsteinEllipse>()) {
        const auto& e = D.as<BernsteinEllipse>();
        const double x = z.real() / e.semi_major(), y = z.imag() / e.semi_minor();
        return x * x + y * y < 1.0 - 1e-12;
    }
    return false;
}

/// p_k(w) for k = 1..m, each vanishing at z0 and of size ~1 on the boundary.
class PolyBasis {
public:
    PolyBasis(const CompactSet& D, Complex z0, int m) : D_(D), m_(m) { raw(z0, at_z0_); }

    void eval(Complex w, std::vector<Complex>& out) const {
        raw(w, out);
        for (int k = 0; k < m_; ++k) out[static_cast<std::size_t>(k)] -= at_z0_[static_cast<std::size_t>(k)];
    }

private:
    void raw(Complex w, std::vector<Complex>& out) const {
        out.assign(static_cast<std::size_t>(m_), 0.0);
        if (D_.is<Ball>()) {
            const auto& b = D_.as<Ball>();
            const Complex u = (w - b.center[0]) / b.radius;
            Complex p = 1.0;
            for (int k = 0; k < m_; ++k) out[static_cast<std::size_t>(k)] = (p *= u);
        } else {
            const double rho = D_.as<BernsteinEllipse>().rho;
            Complex t0 = 1.0, t1 = w;
            double scale = 1.0;
            for (int k = 1; k <= m_; ++k) {
                scale /= rho;
                out[static_cast<std::size_t>(k - 1)] = 2.0 * t1 * scale;
                const Complex t2 = 2.0 * w * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
        }
    }

    const CompactSet& D_;
    int m_;
    std::vector<Complex> at_z0_;
};

double domain_size(const CompactSet& D) {
    return D.is<Ball>() ? D.as<Ball>().radius : D.as<BernsteinEllipse>().semi_major();
}

// K grid on which gamma is maximized; LP instances use a coarser grid
std::vector<Point> k_grid(const CompactSet& K, const SamplingPlan& plan, bool lp) {
    SamplingPlan p = plan;
    if (lp) p.boundary_count = std::min(plan.boundary_count, 16);
    return boundary_samples(K, p);
}

double fit_linear(const std::vector<double>& x, const std::vector<double>& y, double& L, double& A) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) return std::numeric_limits<double>::infinity();
    A = (n * sxy - sx * sy) / det;
    L = (sy - A * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (L + A * x[i]);
        ss += r * r;
    }
    return std::sqrt(ss / n);
}

}  // namespace

double gamma_closed_form(const CompactSet& D, Complex z, Complex z0) {
    if (D.dimension() != 1 || !D.is<Ball>()) throw InvalidInput("closed form needs a disc in C, got " + D.kind_name());
    const auto& b = D.as<Ball>();
    const Complex a = (z0 - b.center[0]) / b.radius;
    const Complex u = (z - b.center[0]) / b.radius;
    if (!(std::abs(u) < 1.0)) throw InvalidInput("z lies outside the open disc");
    if (!(std::abs(a) < 1.0)) throw InvalidInput("z0 lies outside the open disc");
    return std::abs(u - a) / std::abs(1.0 - std::conj(a) * u);
}

GammaLpResult gamma_lp(const CompactSet& D, Complex z0, Complex z, int m, const SamplingPlan& plan) {
    plan.validate();
    if (!planar_domain(D)) throw InvalidInput("gamma_lp needs a disc or a Bernstein ellipse, got " + D.kind_name());
    if (m < 1) throw InvalidInput("degree must be >= 1");
    if (!interior(D, z)) throw InvalidInput("z must be interior to D: " + format_point({z}));
    if (!interior(D, z0)) throw InvalidInput("z0 must be interior to D: " + format_point({z0}));

    const PolyBasis basis(D, z0, m);
    const auto W = boundary_samples(D, plan);
    const int A = plan.angle_count;
    const std::size_t mm = static_cast<std::size_t>(m);
    DenseMatrix M(W.size() * static_cast<std::size_t>(A), 2 * mm);
    std::vector<Complex> p;
    std::size_t row = 0;
    for (const auto& w : W) {
        basis.eval(w[0], p);
        for (int a = 0; a < A; ++a, ++row) {
            const Complex rot = std::polar(1.0, 2.0 * kPi * a / A);
            for (std::size_t k = 0; k < mm; ++k) {
                const Complex q = rot * p[k];
                M(row, k) = q.real();
                M(row, mm + k) = -q.imag();
            }
        }
    }
    basis.eval(z, p);
    std::vector<double> c(2 * mm);
    for (std::size_t k = 0; k < mm; ++k) {
        c[k] = p[k].real();
        c[mm + k] = -p[k].imag();
    }
    GammaLpResult r;
    r.degree = m;
    r.slack_factor = 1.0 / std::cos(kPi / A);
    r.coefficients.assign(mm, 0.0);
    // every p_k vanishes at z (z = z0): f = 0 is optimal
    if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) return r;

    const auto lp = maximize_inequality(M, std::vector<double>(M.rows, 1.0), c);
    if (lp.status == LpStatus::Unbounded) {
        std::ostringstream os;
        os << "gamma LP unbounded after " << lp.iterations << " iterations; boundary grid too coarse for degree " << m;
        throw NumericalFailure(os.str());
    }
    if (lp.status == LpStatus::Infeasible) throw NumericalFailure("internal error: gamma LP infeasible although f = 0 is feasible");

    r.iterations = lp.iterations;
    r.value = std::max(0.0, lp.objective);
    for (std::size_t k = 0; k < mm; ++k) r.coefficients[k] = Complex(lp.x[k], lp.x[mm + k]);
    const auto coeffs = r.coefficients;
    auto f = [&basis, coeffs](const Point& w) {
        std::vector<Complex> q;
        basis.eval(w[0], q);
        Complex s = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * q[k];
        return s;
    };
    r.solution_sup = sup_norm(f, D, plan);
    r.feasible_lower = std::abs(f({z})) / std::max(1.0, r.solution_sup);
    return r;
}

std::string to_string(ExhaustionLabel label) {
    switch (label) {
    case ExhaustionLabel::PlaneByBalls: return "PlaneByBalls";
    case ExhaustionLabel::UnitDiscByBalls: return "UnitDiscByBalls";
    case ExhaustionLabel::EllipseFamily: return "EllipseFamily";
    }
    return "unknown";
}

ExhaustionLabel exhaustion_label_from_string(const std::string& s) {
    if (s == "PlaneByBalls" || s == "plane") return ExhaustionLabel::PlaneByBalls;
    if (s == "UnitDiscByBalls" || s == "unitdisc") return ExhaustionLabel::UnitDiscByBalls;
    if (s == "EllipseFamily" || s == "ellipse") return ExhaustionLabel::EllipseFamily;
    throw InvalidInput("unknown exhaustion: " + s);
}

void ExhaustionSpec::validate() const {
    if (domains.empty()) throw InvalidInput("exhaustion has no domains");
    for (std::size_t k = 0; k < domains.size(); ++k) {
        if (!planar_domain(domains[k]))
            throw InvalidInput("exhaustion domains must be discs or Bernstein ellipses, got " + domains[k].kind_name());
        if (k > 0 && (domains[k] == domains[k - 1] || !contains(domains[k], domains[k - 1]) ||
                      domain_size(domains[k]) <= domain_size(domains[k - 1])))
            throw InvalidInput("exhaustion is not strictly nested at index " + std::to_string(k));
    }
    if (!interior(domains.front(), z0)) throw InvalidInput("z0 must be interior to the first domain");
}

ExhaustionSpec ExhaustionSpec::plane_by_balls(int count) {
    if (count < 1) throw InvalidInput("count must be >= 1");
    ExhaustionSpec E;
    E.label = ExhaustionLabel::PlaneByBalls;
    for (int n = 1; n <= count; ++n) E.domains.push_back(CompactSet::ball(1, n));
    return E;
}

ExhaustionSpec ExhaustionSpec::unit_disc_by_balls(int count) {
    if (count < 1) throw InvalidInput("count must be >= 1");
    ExhaustionSpec E;
    E.label = ExhaustionLabel::UnitDiscByBalls;
    for (int n = 1; n <= count; ++n) E.domains.push_back(CompactSet::ball(1, 1.0 - std::ldexp(1.0, -n)));
    return E;
}

ExhaustionSpec ExhaustionSpec::ellipse_family(int count) {
    if (count < 1) throw InvalidInput("count must be >= 1");
    ExhaustionSpec E;
    E.label = ExhaustionLabel::EllipseFamily;
    for (int n = 1; n <= count; ++n) E.domains.push_back(CompactSet::bernstein_ellipse(1.0 + n));
    return E;
}

GammaCurve gamma_curve(const ExhaustionSpec& E, Complex z, int m, const SamplingPlan& plan, bool force_lp) {
    E.validate();
    GammaCurve curve;
    curve.z = z;
    curve.slack_factor = 1.0 / std::cos(kPi / plan.angle_count);
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < E.domains.size(); ++k)
        if (interior(E.domains[k], z)) idx.push_back(k);
    if (idx.empty()) throw InvalidInput("z is not interior to any domain of the exhaustion");

    curve.values.assign(idx.size(), 0.0);
    curve.methods.assign(idx.size(), GammaMethod::LP);
    parallel_for(idx.size(), [&](std::size_t i) {
        const auto& D = E.domains[idx[i]];
        if (D.is<Ball>() && !force_lp) {
            curve.values[i] = gamma_closed_form(D, z, E.z0);
            curve.methods[i] = GammaMethod::ClosedForm;
        } else {
            curve.values[i] = gamma_lp(D, E.z0, z, m, plan).value;
        }
    });
    for (std::size_t i = 0; i < idx.size(); ++i) {
        curve.n.push_back(E.first_n + static_cast<int>(idx[i]));
        if (i > 0 && curve.values[i] > curve.values[i - 1] + kMonotoneTol) curve.monotone = false;
    }
    return curve;
}

std::string to_csv(const GammaCurve& curve) {
    std::ostringstream os;
    os.precision(17);
    os << "n,gamma,method\n";
    for (std::size_t i = 0; i < curve.values.size(); ++i)
        os << curve.n[i] << "," << curve.values[i] << ","
           << (curve.methods[i] == GammaMethod::ClosedForm ? "ClosedForm" : "LP") << "\n";
    return os.str();
}

LiouvilleVerdict liouville_verdict(const GammaCurve& curve, double tol) {
    if (curve.values.size() < 4) throw InvalidInput("liouville_verdict needs at least 4 curve entries");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
    LiouvilleVerdict v;
    const auto& y = curve.values;
    const double top = *std::max_element(y.begin(), y.end());
    const double bottom = *std::min_element(y.begin(), y.end());
    if (top <= tol) {
        v.verdict = Verdict::DecayEvidence;
        v.limit_estimate = y.back();
        v.model = "below tolerance";
        return v;
    }

    std::vector<double> n(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) n[i] = curve.n[i];
    double best = std::numeric_limits<double>::infinity(), bestL = y.back();
    std::vector<double> x(y.size());
    for (int s = 1; s <= 16; ++s) {
        const double p = 0.25 * s;
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::pow(n[i], -p);
        double L = 0, A = 0;
        const double res = fit_linear(x, y, L, A);
        if (res < best) {
            best = res;
            bestL = L;
            std::ostringstream os;
            os << "L + A n^-" << p;
            v.model = os.str();
        }
    }
    for (int s = 1; s <= 19; ++s) {
        const double q = 0.05 * s;
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::pow(q, n[i]);
        double L = 0, A = 0;
        const double res = fit_linear(x, y, L, A);
        if (res < best) {
            best = res;
            bestL = L;
            std::ostringstream os;
            os << "L + A " << q << "^n";
            v.model = os.str();
        }
    }
    v.fit_residual = best;
    const bool good_fit = best <= 0.02 * std::max(top - bottom, 1e-12) || best <= 1e-9;
    if (good_fit) {
        v.limit_estimate = std::max(0.0, bestL);
        v.verdict = bestL <= tol ? Verdict::DecayEvidence : Verdict::PlateauEvidence;
    } else {
        v.limit_estimate = y.back();
        v.verdict = Verdict::PlateauEvidence;
        v.low_confidence = true;
    }
    return v;
}

SchwarzK1 schwarz_property_K1(const ExhaustionSpec& E, const CompactSet& K, double delta, int m,
                              const SamplingPlan& plan, bool force_lp) {
    E.validate();
    if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
    if (K.dimension() != 1) throw InvalidInput("K must be a compact set in C");
    SchwarzK1 out;
    out.delta = delta;
    bool entered = false;
    for (std::size_t k = 0; k < E.domains.size(); ++k) {
        const auto& D = E.domains[k];
        const bool lp = force_lp || !D.is<Ball>();
        const auto grid = k_grid(K, plan, lp);
        if (!std::all_of(grid.begin(), grid.end(), [&](const Point& w) { return interior(D, w[0]); })) continue;
        entered = true;
        std::vector<double> g(grid.size(), 0.0);
        parallel_for(grid.size(), [&](std::size_t i) {
            g[i] = lp ? gamma_lp(D, E.z0, grid[i][0], m, plan).value : gamma_closed_form(D, grid[i][0], E.z0);
        });
        const auto it = std::max_element(g.begin(), g.end());
        const double worst = *it;
        out.tested.push_back(worst);
        const double margin = lp ? 0.0 : kClosedFormMargin;
        if (worst < delta - margin) {
            out.index = static_cast<int>(k);
            out.n = E.first_n + out.index;
            out.max_gamma = worst;
            out.argmax = grid[static_cast<std::size_t>(it - g.begin())][0];
            return out;
        }
    }
    std::ostringstream os;
    if (!entered) {
        os << "K is not interior to any domain of the exhaustion";
        throw InvalidInput(os.str());
    }
    os << "exhaustion ended before gamma < " << delta << " on K; smallest max gamma "
       << *std::min_element(out.tested.begin(), out.tested.end());
    throw NumericalFailure(os.str());
}

BcGeneralReport borel_caratheodory_general(const ExhaustionSpec& E, const CompactSet& K, double epsilon,
                                           const std::vector<TruncatedSeries>& corpus, int m,
                                           const SamplingPlan& plan, bool force_lp) {
    if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    BcGeneralReport r;
    r.epsilon = epsilon;
    r.delta = epsilon / (2.0 + epsilon);
    r.k1 = schwarz_property_K1(E, K, r.delta, m, plan, force_lp);
    const auto& K1 = E.domains[static_cast<std::size_t>(r.k1.index)];

    struct Row {
        double lhs = 0.0, rhs = 0.0;
    };
    std::vector<Row> rows(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& f = corpus[i];
        if (f.dimension() != 1) throw InvalidInput("corpus functions must be in one variable");
        const Complex f0 = eval(f, {E.z0});
        auto g = [&f, f0](const Point& w) { return eval(f, w) - f0; };
        rows[i].lhs = sup_norm(g, K, plan);
        rows[i].rhs = epsilon * sup_real_part(g, K1, plan);
    });
    r.checked = static_cast<int>(corpus.size());
    r.worst_slack = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double slack = rows[i].rhs - rows[i].lhs;
        if (slack < r.worst_slack) {
            r.worst_slack = slack;
            worst = i;
        }
        if (rows[i].lhs > rows[i].rhs + 1e-9 * std::max(1.0, rows[i].rhs)) r.holds = false;
    }
    if (!corpus.empty())
        r.witness = {{"index", worst}, {"function", corpus[worst]}, {"lhs", rows[worst].lhs}, {"rhs", rows[worst].rhs}};
    return r;
}

std::vector<TruncatedSeries> bc_corpus(int size, std::uint64_t seed) {
    if (size < 2) throw InvalidInput("corpus size must be >= 2");
    std::vector<TruncatedSeries> out;
    TruncatedSeries z(1, 1);
    z.set(MultiIndex{1}, 1.0);
    out.push_back(z);
    out.push_back(TruncatedSeries::constant(1, Complex(0.75, -0.5)));
    Rng rng(derive_seed(seed, 0xbc));
    for (int i = 2; i < size; ++i) {
        const int degree = 1 + static_cast<int>(rng.uniform() * 8.0);
        const double decay = rng.uniform(0.2, 1.5);
        out.push_back(random_series(1, degree, decay, derive_seed(seed, static_cast<std::uint64_t>(i))));
    }
    return out;
}

void to_json(nlohmann::json& j, const GammaLpResult& r) {
    auto coeffs = nlohmann::json::array();
    for (const auto& c : r.coefficients) coeffs.push_back({c.real(), c.imag()});
    j = nlohmann::json{{"value", r.value},
                       {"slack_factor", r.slack_factor},
                       {"solution_sup", r.solution_sup},
                       {"feasible_lower", r.feasible_lower},
                       {"degree", r.degree},
                       {"iterations", r.iterations},
                       {"coefficients", coeffs}};
}

void to_json(nlohmann::json& j, const ExhaustionSpec& E) {
    j = nlohmann::json{{"label", to_string(E.label)},
                       {"z0", point_to_json({E.z0})},
                       {"first_n", E.first_n},
                       {"domains", E.domains}};
}

void to_json(nlohmann::json& j, const GammaCurve& c) {
    auto methods = nlohmann::json::array();
    for (auto m : c.methods) methods.push_back(m == GammaMethod::ClosedForm ? "ClosedForm" : "LP");
    j = nlohmann::json{{"z", point_to_json({c.z})},
                       {"n", c.n},
                       {"values", c.values},
                       {"methods", methods},
                       {"slack_factor", c.slack_factor},
                       {"monotone", c.monotone}};
}

void to_json(nlohmann::json& j, const LiouvilleVerdict& v) {
    j = nlohmann::json{{"verdict", v.verdict == Verdict::DecayEvidence ? "DecayEvidence" : "PlateauEvidence"},
                       {"limit_estimate", v.limit_estimate},
                       {"model", v.model},
                       {"fit_residual", v.fit_residual},
                       {"low_confidence", v.low_confidence},
                       {"note", v.note}};
}

void to_json(nlohmann::json& j, const SchwarzK1& k) {
    j = nlohmann::json{{"index", k.index},       {"n", k.n},         {"max_gamma", k.max_gamma},
                       {"argmax", point_to_json({k.argmax})}, {"delta", k.delta}, {"tested", k.tested}};
}

void to_json(nlohmann::json& j, const BcGeneralReport& r) {
    j = nlohmann::json{{"epsilon", r.epsilon},   {"delta", r.delta},     {"K1", r.k1},
                       {"checked", r.checked},   {"worst_slack", r.worst_slack}, {"holds", r.holds},
                       {"witness", r.witness}};
}

}  // namespace bohr
