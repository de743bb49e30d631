#pragma once

#include "bohr/types.hpp"

#include <cstdint>
#include <map>
#include <json.hpp>
#include <vector>

namespace bohr {

/// Exponent vector alpha of z^alpha. Also used as a flat index {n} for
/// one-parameter families.
struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e);
    MultiIndex(std::initializer_list<int> e) : MultiIndex(std::vector<int>(e)) {}

    std::size_t size() const { return exponents.size(); }
    int total_degree() const;
    int operator[](std::size_t k) const { return exponents[k]; }

    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;
};

/// All multi-indices of length d with total degree <= n, graded then
/// reverse-lexicographic (z1 before z2 at equal degree).
std::vector<MultiIndex> multi_indices_up_to(int d, int n);

/// Finitely supported coefficient table c_alpha of an entire function.
/// The same table holds coefficients in any basis indexed by MultiIndex.
class TruncatedSeries {
public:
    TruncatedSeries(int dimension, int degree_bound);

    int dimension() const { return dimension_; }
    int degree_bound() const { return degree_bound_; }
    const std::map<MultiIndex, Complex>& coefficients() const { return coeffs_; }

    /// Coefficient at alpha, zero if absent.
    Complex coefficient(const MultiIndex& alpha) const;
    void set(const MultiIndex& alpha, Complex value);
    void add(const MultiIndex& alpha, Complex value);

    TruncatedSeries& operator+=(const TruncatedSeries& other);
    TruncatedSeries& operator*=(Complex s);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator*(Complex s, TruncatedSeries a) { return a *= s; }

    static TruncatedSeries constant(int dimension, Complex value);

    bool operator==(const TruncatedSeries&) const = default;

private:
    void check_index(const MultiIndex& alpha) const;

    int dimension_;
    int degree_bound_;
    std::map<MultiIndex, Complex> coeffs_;
};

/// Sum of c_alpha z^alpha over the stored indices (monomial basis).
Complex eval(const TruncatedSeries& f, const Point& z);

/// c_alpha = u_alpha * decay^|alpha| with u_alpha uniform in the unit disc.
TruncatedSeries random_series(int d, int n, double decay, std::uint64_t seed);

void to_json(nlohmann::json& j, const TruncatedSeries& f);
TruncatedSeries series_from_json(const nlohmann::json& j);

nlohmann::json point_to_json(const Point& z);
Point point_from_json(const nlohmann::json& j);

}  // namespace bohr
