#include "bohr/series.hpp"

#include "bohr/random.hpp"

#include <cmath>
#include <json.hpp>
#include <numeric>
#include <sstream>

namespace bohr {

std::string format_point(const Point& z) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (k) os << ", ";
        os << z[k].real() << (z[k].imag() < 0 ? "-" : "+") << std::abs(z[k].imag()) << 'i';
    }
    os << ')';
    return os.str();
}

MultiIndex::MultiIndex(std::vector<int> e) : exponents(std::move(e)) {
    if (exponents.empty()) throw InvalidInput("multi-index must have length >= 1");
    for (int a : exponents)
        if (a < 0) throw InvalidInput("multi-index exponents must be non-negative");
}

int MultiIndex::total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

namespace {

void enumerate_degree(int d, int remaining, std::vector<int>& cur, std::size_t pos,
                      std::vector<MultiIndex>& out) {
    if (pos + 1 == static_cast<std::size_t>(d)) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int a = remaining; a >= 0; --a) {
        cur[pos] = a;
        enumerate_degree(d, remaining - a, cur, pos + 1, out);
    }
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(int d, int n) {
    if (d < 1) throw InvalidInput("dimension must be >= 1");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    for (int deg = 0; deg <= n; ++deg) enumerate_degree(d, deg, cur, 0, out);
    return out;
}

TruncatedSeries::TruncatedSeries(int dimension, int degree_bound)
    : dimension_(dimension), degree_bound_(degree_bound) {
    if (dimension < 1) throw InvalidInput("series dimension must be >= 1");
    if (degree_bound < 0) throw InvalidInput("degree bound must be >= 0");
}

void TruncatedSeries::check_index(const MultiIndex& alpha) const {
    if (static_cast<int>(alpha.size()) != dimension_)
        throw InvalidInput("multi-index length does not match series dimension");
    if (alpha.total_degree() > degree_bound_)
        throw InvalidInput("multi-index total degree exceeds the degree bound");
}

Complex TruncatedSeries::coefficient(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? Complex{} : it->second;
}

void TruncatedSeries::set(const MultiIndex& alpha, Complex value) {
    check_index(alpha);
    if (value == Complex{})
        coeffs_.erase(alpha);
    else
        coeffs_[alpha] = value;
}

void TruncatedSeries::add(const MultiIndex& alpha, Complex value) {
    set(alpha, coefficient(alpha) + value);
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
    if (other.dimension_ != dimension_) throw InvalidInput("series dimension mismatch");
    degree_bound_ = std::max(degree_bound_, other.degree_bound_);
    for (const auto& [alpha, c] : other.coeffs_) add(alpha, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex s) {
    if (s == Complex{}) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [alpha, c] : coeffs_) c *= s;
    return *this;
}

TruncatedSeries TruncatedSeries::constant(int dimension, Complex value) {
    TruncatedSeries f(dimension, 0);
    f.set(MultiIndex(std::vector<int>(static_cast<std::size_t>(dimension), 0)), value);
    return f;
}

Complex eval(const TruncatedSeries& f, const Point& z) {
    const auto d = static_cast<std::size_t>(f.dimension());
    if (z.size() != d)
        throw InvalidInput("point dimension " + std::to_string(z.size()) +
                           " does not match series dimension " + std::to_string(d));
    const auto n = static_cast<std::size_t>(f.degree_bound());
    // per-coordinate power tables
    std::vector<Complex> powers(d * (n + 1));
    for (std::size_t k = 0; k < d; ++k) {
        Complex p{1.0, 0.0};
        for (std::size_t e = 0; e <= n; ++e) {
            powers[k * (n + 1) + e] = p;
            p *= z[k];
        }
    }
    Complex sum{};
    for (const auto& [alpha, c] : f.coefficients()) {
        Complex term = c;
        for (std::size_t k = 0; k < d; ++k)
            term *= powers[k * (n + 1) + static_cast<std::size_t>(alpha[k])];
        sum += term;
    }
    return sum;
}

TruncatedSeries random_series(int d, int n, double decay, std::uint64_t seed) {
    if (n < 0) throw InvalidInput("degree bound must be >= 0");
    if (decay < 0.0) throw InvalidInput("decay must be non-negative");
    TruncatedSeries f(d, n);
    Rng rng(seed);
    for (const auto& alpha : multi_indices_up_to(d, n)) {
        const Complex u = rng.unit_disc();
        const double scale = std::pow(decay, alpha.total_degree());
        f.set(alpha, u * scale);
    }
    return f;
}

void to_json(nlohmann::json& j, const TruncatedSeries& f) {
    auto coeffs = nlohmann::json::array();
    for (const auto& [alpha, c] : f.coefficients())
        coeffs.push_back(nlohmann::json::array({alpha.exponents, c.real(), c.imag()}));
    j = nlohmann::json{{"dimension", f.dimension()},
                       {"degree_bound", f.degree_bound()},
                       {"coefficients", coeffs}};
}

TruncatedSeries series_from_json(const nlohmann::json& j) {
    TruncatedSeries f(j.at("dimension").get<int>(), j.at("degree_bound").get<int>());
    for (const auto& entry : j.at("coefficients")) {
        if (!entry.is_array() || entry.size() != 3)
            throw InvalidInput("series coefficient entries must be [exponents, re, im]");
        f.add(MultiIndex(entry[0].get<std::vector<int>>()),
              Complex(entry[1].get<double>(), entry[2].get<double>()));
    }
    return f;
}

nlohmann::json point_to_json(const Point& z) {
    auto out = nlohmann::json::array();
    for (const auto& c : z) out.push_back({c.real(), c.imag()});
    return out;
}

Point point_from_json(const nlohmann::json& j) {
    Point z;
    for (const auto& c : j) {
        if (c.is_number())
            z.emplace_back(c.get<double>(), 0.0);
        else
            z.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    }
    return z;
}

}  // namespace bohr
