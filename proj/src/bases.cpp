#include "bohr/bases.hpp"

#include "bohr/random.hpp"

#include <algorithm>
#include <cmath>

namespace bohr {

namespace {

// 2 T_n(z) by the three-term recurrence.
Complex faber_member(int n, Complex z) {
    if (n == 0) return 1.0;
    Complex prev = 1.0, cur = z;
    for (int k = 1; k < n; ++k) {
        const Complex next = 2.0 * z * cur - prev;
        prev = cur;
        cur = next;
    }
    return 2.0 * cur;
}

// Sum_n c_n F_n(z) via Clenshaw on a_0 = c_0, a_n = 2 c_n.
Complex faber_sum(const TruncatedSeries& c, Complex z) {
    const int n = c.degree_bound();
    std::vector<Complex> a(static_cast<std::size_t>(n) + 1);
    for (const auto& [idx, v] : c.coefficients())
        a[static_cast<std::size_t>(idx[0])] = idx[0] == 0 ? v : 2.0 * v;
    Complex b1 = 0.0, b2 = 0.0;
    for (int k = n; k >= 1; --k) {
        const Complex b0 = a[static_cast<std::size_t>(k)] + 2.0 * z * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return a[0] + z * b1 - b2;
}

void require_dimension(const BasisFamily& B, const Point& z) {
    if (static_cast<int>(z.size()) != B.dimension())
        throw InvalidInput("point dimension does not match basis dimension");
}

}  // namespace

BasisFamily BasisFamily::monomial(int d) {
    if (d < 1) throw InvalidInput("monomial basis needs d >= 1");
    return BasisFamily(BasisKind::Monomial, d);
}

BasisFamily BasisFamily::faber_segment() { return BasisFamily(BasisKind::FaberSegment, 1); }

BasisFamily BasisFamily::explicit_members(std::vector<TruncatedSeries> members) {
    if (members.empty()) throw InvalidInput("explicit family needs at least one member");
    const int d = members.front().dimension();
    for (const auto& m : members)
        if (m.dimension() != d) throw InvalidInput("explicit members must share a dimension");
    BasisFamily B(BasisKind::Explicit, d);
    B.members_ = std::make_shared<const std::vector<TruncatedSeries>>(std::move(members));
    return B;
}

std::string BasisFamily::kind_name() const {
    switch (kind_) {
    case BasisKind::Monomial: return "monomial";
    case BasisKind::FaberSegment: return "faber_segment";
    case BasisKind::Shifted: return "shifted";
    case BasisKind::Explicit: return "explicit";
    }
    return "unknown";
}

const BasisFamily& BasisFamily::base() const {
    if (kind_ != BasisKind::Shifted) throw InvalidInput("basis is not shifted");
    return *base_;
}

const Point& BasisFamily::shift_point() const {
    if (kind_ != BasisKind::Shifted) throw InvalidInput("basis is not shifted");
    return z0_;
}

const std::vector<TruncatedSeries>& BasisFamily::members() const {
    if (kind_ != BasisKind::Explicit) throw InvalidInput("basis has no explicit member list");
    return *members_;
}

const BasisFamily& BasisFamily::root() const {
    return kind_ == BasisKind::Shifted ? base_->root() : *this;
}

bool BasisFamily::has_constant_member() const {
    if (kind_ != BasisKind::Explicit) return true;
    const auto& m0 = members_->front();
    for (const auto& [alpha, c] : m0.coefficients()) {
        if (alpha.total_degree() == 0) {
            if (std::abs(c - 1.0) > 1e-14) return false;
        } else if (c != Complex{}) {
            return false;
        }
    }
    return !m0.coefficients().empty();
}

MultiIndex BasisFamily::zero_index() const {
    if (root().kind_ == BasisKind::Monomial)
        return MultiIndex(std::vector<int>(static_cast<std::size_t>(dimension_), 0));
    return MultiIndex{0};
}

bool BasisFamily::valid_index(const MultiIndex& n) const {
    switch (root().kind_) {
    case BasisKind::Monomial: return static_cast<int>(n.size()) == dimension_;
    case BasisKind::FaberSegment: return n.size() == 1;
    case BasisKind::Explicit:
        return n.size() == 1 && n[0] < static_cast<int>(root().members_->size());
    case BasisKind::Shifted: break;
    }
    return false;
}

std::vector<MultiIndex> BasisFamily::indices(int n) const {
    const auto& r = root();
    if (r.kind_ == BasisKind::Monomial) return multi_indices_up_to(dimension_, n);
    int top = n;
    if (r.kind_ == BasisKind::Explicit) top = std::min(n, static_cast<int>(r.members_->size()) - 1);
    std::vector<MultiIndex> out;
    for (int k = 0; k <= top; ++k) out.push_back(MultiIndex{k});
    return out;
}

BasisFamily shift_basis(const BasisFamily& B, const Point& z0) {
    require_dimension(B, z0);
    BasisFamily S(BasisKind::Shifted, B.dimension());
    S.base_ = std::make_shared<const BasisFamily>(B);
    S.z0_ = z0;
    return S;
}

Complex basis_eval(const BasisFamily& B, const MultiIndex& n, const Point& z) {
    require_dimension(B, z);
    if (!B.valid_index(n)) throw InvalidInput("index out of range for " + B.kind_name() + " family");
    switch (B.kind()) {
    case BasisKind::Monomial: {
        Complex v = 1.0;
        for (std::size_t k = 0; k < z.size(); ++k) v *= std::pow(z[k], n[k]);
        return v;
    }
    case BasisKind::FaberSegment:
        return faber_member(n[0], z[0]);
    case BasisKind::Explicit:
        return eval(B.members()[static_cast<std::size_t>(n[0])], z);
    case BasisKind::Shifted:
        if (n == B.zero_index()) return 1.0;
        return basis_eval(B.base(), n, z) - basis_eval(B.base(), n, B.shift_point());
    }
    return 0.0;
}

Complex expansion_eval(const BasisFamily& B, const TruncatedSeries& coeffs, const Point& z) {
    require_dimension(B, z);
    switch (B.kind()) {
    case BasisKind::Monomial:
        return eval(coeffs, z);
    case BasisKind::FaberSegment:
        return faber_sum(coeffs, z[0]);
    case BasisKind::Explicit: {
        Complex s = 0.0;
        for (const auto& [idx, c] : coeffs.coefficients()) s += c * basis_eval(B, idx, z);
        return s;
    }
    case BasisKind::Shifted: {
        const auto& base = B.base();
        const auto zero = B.zero_index();
        const Complex c0 = coeffs.coefficient(zero);
        const Complex at_z = expansion_eval(base, coeffs, z) - c0 * basis_eval(base, zero, z);
        const Complex at_z0 =
            expansion_eval(base, coeffs, B.shift_point()) - c0 * basis_eval(base, zero, B.shift_point());
        return c0 + at_z - at_z0;
    }
    }
    return 0.0;
}

Evaluable expansion_function(const BasisFamily& B, TruncatedSeries coeffs) {
    return [B, c = std::move(coeffs)](const Point& z) { return expansion_eval(B, c, z); };
}

std::optional<double> member_sup_closed_form(const BasisFamily& B, const MultiIndex& n, const CompactSet& K) {
    if (!B.valid_index(n)) throw InvalidInput("index out of range for " + B.kind_name() + " family");
    auto at_origin = [](const Point& c) {
        return std::all_of(c.begin(), c.end(), [](Complex x) { return x == Complex{}; });
    };
    switch (B.kind()) {
    case BasisKind::Monomial: {
        if (K.dimension() != B.dimension()) return std::nullopt;
        if (K.is<Polydisc>() && at_origin(K.as<Polydisc>().center)) {
            double v = 1.0;
            const auto& radii = K.as<Polydisc>().radii;
            for (std::size_t k = 0; k < radii.size(); ++k) v *= std::pow(radii[k], n[k]);
            return v;
        }
        if (K.is<Ball>() && at_origin(K.as<Ball>().center)) {
            // max of prod |z_k|^a_k on the sphere: |z_k|^2 = r^2 a_k / |a|
            const int total = n.total_degree();
            double v = std::pow(K.as<Ball>().radius, total);
            for (std::size_t k = 0; k < n.size(); ++k)
                if (n[k] > 0) v *= std::pow(static_cast<double>(n[k]) / total, 0.5 * n[k]);
            return v;
        }
        return std::nullopt;
    }
    case BasisKind::FaberSegment: {
        const int m = n[0];
        if (K.is<Segment>()) return m == 0 ? 1.0 : 2.0;
        if (K.is<BernsteinEllipse>()) {
            const double rho = K.as<BernsteinEllipse>().rho;
            return m == 0 ? 1.0 : std::pow(rho, m) + std::pow(rho, -m);
        }
        return std::nullopt;
    }
    case BasisKind::Shifted: {
        if (n == B.zero_index()) return 1.0;
        const auto& base = B.base();
        const auto& z0 = B.shift_point();
        if (base.kind() == BasisKind::Monomial && at_origin(z0)) return member_sup_closed_form(base, n, K);
        if (base.kind() == BasisKind::FaberSegment && z0[0] == Complex{}) {
            const int m = n[0];
            const double t0 = (m % 2 == 0) ? 1.0 : 0.0;  // |T_m(0)|
            if (K.is<Segment>()) return 2.0 + 2.0 * t0;
            if (K.is<BernsteinEllipse>()) {
                const double rho = K.as<BernsteinEllipse>().rho;
                return std::pow(rho, m) + std::pow(rho, -m) + 2.0 * t0;
            }
        }
        return std::nullopt;
    }
    case BasisKind::Explicit:
        return std::nullopt;
    }
    return std::nullopt;
}

double member_sup(const BasisFamily& B, const MultiIndex& n, const CompactSet& K, const SamplingPlan& plan) {
    if (auto exact = member_sup_closed_form(B, n, K)) return *exact;
    return sup_norm([&](const Point& z) { return basis_eval(B, n, z); }, K, plan);
}

namespace {

int default_degree(const BasisFamily& B) { return B.dimension() == 1 ? 48 : 16; }

int auto_samples(int degree) {
    int m = 16;
    while (m < 2 * degree + 2) m *= 2;
    return m;
}

ExpansionResult extract_monomial(const BasisFamily& B, const Evaluable& f, const ExtractionBudget& budget) {
    const int d = B.dimension();
    const int N = budget.degree < 0 ? default_degree(B) : budget.degree;
    const int M = budget.samples > 0 ? budget.samples : auto_samples(N);
    if (!(budget.radius > 0.0)) throw InvalidInput("extraction radius must be positive");
    if (M <= N) throw InvalidInput("extraction needs more nodes per axis than the degree");
    const double rho = budget.radius;
    const auto du = static_cast<std::size_t>(d);
    const auto Mu = static_cast<std::size_t>(M);
    const auto Nu = static_cast<std::size_t>(N) + 1;

    Rng rng(budget.seed);
    std::vector<double> offset(du);
    for (auto& o : offset) o = rng.uniform(0.0, 2.0 * kPi / M);

    std::size_t total = 1;
    for (std::size_t k = 0; k < du; ++k) total *= Mu;
    std::vector<Complex> values(total);
    Point z(du);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t k = 0; k < du; ++k) {
            z[k] = std::polar(rho, 2.0 * kPi * static_cast<double>(rem % Mu) / M + offset[k]);
            rem /= Mu;
        }
        values[idx] = f(z);
        if (!std::isfinite(values[idx].real()) || !std::isfinite(values[idx].imag()))
            throw EvaluationFailure("non-finite value at " + format_point(z), z);
    }

    // axis-by-axis truncated DFT; axis 0 is fastest varying
    std::vector<std::size_t> shape(du, Mu);
    for (std::size_t axis = 0; axis < du; ++axis) {
        std::size_t stride = 1;
        for (std::size_t k = 0; k < axis; ++k) stride *= shape[k];
        std::size_t outer = 1;
        for (std::size_t k = axis + 1; k < du; ++k) outer *= shape[k];
        std::vector<Complex> twiddle(Nu * Mu);
        for (std::size_t n = 0; n < Nu; ++n)
            for (std::size_t j = 0; j < Mu; ++j)
                twiddle[n * Mu + j] = std::polar(
                    1.0, -static_cast<double>(n) * (2.0 * kPi * static_cast<double>(j) / M + offset[axis]));
        std::vector<Complex> next(stride * Nu * outer);
        for (std::size_t b = 0; b < outer; ++b)
            for (std::size_t a = 0; a < stride; ++a)
                for (std::size_t n = 0; n < Nu; ++n) {
                    Complex s = 0.0;
                    for (std::size_t j = 0; j < Mu; ++j)
                        s += values[a + stride * (j + Mu * b)] * twiddle[n * Mu + j];
                    next[a + stride * (n + Nu * b)] = s / static_cast<double>(M);
                }
        values = std::move(next);
        shape[axis] = Nu;
    }

    TruncatedSeries coeffs(d, N);
    for (const auto& alpha : multi_indices_up_to(d, N)) {
        std::size_t flat = 0, stride = 1;
        for (std::size_t k = 0; k < du; ++k) {
            flat += static_cast<std::size_t>(alpha[k]) * stride;
            stride *= Nu;
        }
        coeffs.set(alpha, values[flat] / std::pow(rho, alpha.total_degree()));
    }
    return {coeffs, 0.0, true};
}

ExpansionResult extract_faber(const Evaluable& f, const ExtractionBudget& budget) {
    const int N = budget.degree < 0 ? 48 : budget.degree;
    const int M = budget.samples > 0 ? budget.samples : std::max(64, 2 * (N + 1));
    if (M <= N) throw InvalidInput("extraction needs more nodes than the degree");
    std::vector<Complex> fx(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        const Point x{Complex(std::cos(kPi * (j + 0.5) / M), 0.0)};
        fx[static_cast<std::size_t>(j)] = f(x);
        if (!std::isfinite(fx[static_cast<std::size_t>(j)].real()) ||
            !std::isfinite(fx[static_cast<std::size_t>(j)].imag()))
            throw EvaluationFailure("non-finite value at " + format_point(x), x);
    }
    TruncatedSeries coeffs(1, N);
    for (int k = 0; k <= N; ++k) {
        Complex a = 0.0;
        for (int j = 0; j < M; ++j) a += fx[static_cast<std::size_t>(j)] * std::cos(k * kPi * (j + 0.5) / M);
        a *= 2.0 / M;
        // f = a_0/2 + sum a_k T_k and F_k = 2 T_k
        coeffs.set(MultiIndex{k}, 0.5 * a);
    }
    return {coeffs, 0.0, true};
}

}  // namespace

ExpansionResult extract_coefficients(const BasisFamily& B, const Evaluable& f, const ExtractionBudget& budget,
                                     const SamplingPlan& plan) {
    ExpansionResult result{TruncatedSeries(B.dimension(), 0), 0.0, true};
    CompactSet extraction = CompactSet::segment();
    switch (B.kind()) {
    case BasisKind::Monomial:
        result = extract_monomial(B, f, budget);
        extraction = CompactSet::polydisc(B.dimension(), budget.radius);
        break;
    case BasisKind::FaberSegment:
        result = extract_faber(f, budget);
        break;
    case BasisKind::Shifted: {
        const auto& base = B.base();
        if (!base.has_constant_member())
            throw InvalidInput("shifted extraction needs a base family with constant member 0");
        auto inner = extract_coefficients(base, f, budget, plan);
        const Complex at_z0 = expansion_eval(base, inner.coefficients, B.shift_point());
        inner.coefficients.set(B.zero_index(), at_z0);
        return inner;
    }
    case BasisKind::Explicit:
        throw InvalidInput("coefficient extraction is not available for explicit families");
    }
    const auto& coeffs = result.coefficients;
    const double f_sup = sup_norm(f, extraction, plan);
    result.residual = sup_norm([&](const Point& z) { return f(z) - expansion_eval(B, coeffs, z); }, extraction,
                               plan);
    result.converged = result.residual <= budget.tolerance * std::max(1.0, f_sup);
    return result;
}

void to_json(nlohmann::json& j, const BasisFamily& B) {
    nlohmann::json params = nlohmann::json::object();
    switch (B.kind()) {
    case BasisKind::Monomial: params["dimension"] = B.dimension(); break;
    case BasisKind::FaberSegment: break;
    case BasisKind::Shifted:
        params["base"] = B.base();
        params["z0"] = point_to_json(B.shift_point());
        break;
    case BasisKind::Explicit: params["members"] = B.members(); break;
    }
    j = nlohmann::json{{"kind", B.kind_name()}, {"params", params}};
}

BasisFamily basis_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    if (kind == "monomial") return BasisFamily::monomial(p.at("dimension").get<int>());
    if (kind == "faber_segment") return BasisFamily::faber_segment();
    if (kind == "shifted") return shift_basis(basis_from_json(p.at("base")), point_from_json(p.at("z0")));
    if (kind == "explicit") {
        std::vector<TruncatedSeries> members;
        for (const auto& m : p.at("members")) members.push_back(series_from_json(m));
        return BasisFamily::explicit_members(std::move(members));
    }
    throw InvalidInput("unknown basis kind '" + kind + "'");
}

void to_json(nlohmann::json& j, const ExpansionResult& r) {
    j = nlohmann::json{{"coefficients", r.coefficients}, {"residual", r.residual}, {"converged", r.converged}};
}

}  // namespace bohr
