#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bohr {

/// Column-major dense matrix.
struct DenseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
    const double* column(std::size_t j) const { return data.data() + j * rows; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

struct LpOptions {
    int max_iterations = 20000;
    double tolerance = 1e-9;
    int refactor_every = 64;
};

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;
    std::vector<double> x;      // primal solution
    std::vector<double> duals;  // simplex multipliers, one per row
    int iterations = 0;
};

/// min c^T x subject to A x = b, x >= 0. Two-phase revised simplex with a
/// dense basis inverse, Dantzig pricing and a Bland fallback on stalls.
/// Throws NumericalFailure when the iteration cap is hit.
LpResult solve_standard_form(const DenseMatrix& A, const std::vector<double>& b, const std::vector<double>& c,
                             const LpOptions& options = {});

/// max c^T x subject to A x <= b with x free, solved through its dual
/// min b^T y, A^T y = c, y >= 0. The primal x comes back as the dual's
/// multipliers and `duals` holds y.
LpResult maximize_inequality(const DenseMatrix& A, const std::vector<double>& b, const std::vector<double>& c,
                             const LpOptions& options = {});

}  // namespace bohr
