#include "bohr/lp.hpp"

#include "bohr/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bohr {

std::string to_string(LpStatus s) {
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

class Simplex {
public:
    Simplex(const DenseMatrix& A, const std::vector<double>& b, const LpOptions& opt)
        : A_(A), m_(A.rows), n_(A.cols), opt_(opt), sign_(m_, 1.0), b_(b) {
        for (std::size_t i = 0; i < m_; ++i)
            if (b_[i] < 0.0) {
                sign_[i] = -1.0;
                b_[i] = -b_[i];
            }
        basis_.resize(m_);
        is_basic_.assign(n_ + m_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            is_basic_[n_ + i] = true;
        }
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        xb_ = b_;
    }

    // phase 1 then phase 2; returns the status of the last phase run
    LpStatus run(const std::vector<double>& c) {
        std::vector<double> cost(n_ + m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) cost[n_ + i] = 1.0;
        if (iterate(cost, true) != LpStatus::Optimal)
            throw NumericalFailure("phase 1 reported an unbounded auxiliary problem");
        double infeas = 0.0, bnorm = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) infeas += xb_[i];
            bnorm = std::max(bnorm, b_[i]);
        }
        if (infeas > 1e3 * opt_.tolerance * bnorm) return LpStatus::Infeasible;
        drive_out_artificials();
        std::fill(cost.begin(), cost.end(), 0.0);
        std::copy(c.begin(), c.end(), cost.begin());
        return iterate(cost, false);
    }

    double objective(const std::vector<double>& c) const {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) v += c[basis_[i]] * xb_[i];
        return v;
    }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, xb_[i]);
        return x;
    }

    std::vector<double> duals(const std::vector<double>& c) const {
        std::vector<double> cost(n_ + m_, 0.0);
        std::copy(c.begin(), c.end(), cost.begin());
        auto pi = multipliers(cost);
        for (std::size_t i = 0; i < m_; ++i) pi[i] *= sign_[i];
        return pi;
    }

    int iterations() const { return iterations_; }

private:
    void column(std::size_t j, std::vector<double>& out) const {
        out.assign(m_, 0.0);
        if (j < n_) {
            const double* col = A_.column(j);
            for (std::size_t i = 0; i < m_; ++i) out[i] = sign_[i] * col[i];
        } else {
            out[j - n_] = 1.0;
        }
    }

    double dot_column(const std::vector<double>& pi, std::size_t j) const {
        if (j >= n_) return pi[j - n_];
        const double* col = A_.column(j);
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) s += pi[i] * sign_[i] * col[i];
        return s;
    }

    std::vector<double> multipliers(const std::vector<double>& cost) const {
        std::vector<double> pi(m_, 0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            const double cb = cost[basis_[k]];
            if (cb == 0.0) continue;
            const double* row = binv_.data() + k * m_;
            for (std::size_t i = 0; i < m_; ++i) pi[i] += cb * row[i];
        }
        return pi;
    }

    void apply_binv(const std::vector<double>& v, std::vector<double>& out) const {
        out.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = binv_.data() + i * m_;
            double s = 0.0;
            for (std::size_t k = 0; k < m_; ++k) s += row[k] * v[k];
            out[i] = s;
        }
    }

    void pivot(std::size_t r, std::size_t j, const std::vector<double>& u) {
        const double theta = xb_[r] / u[r];
        for (std::size_t i = 0; i < m_; ++i) xb_[i] -= theta * u[i];
        xb_[r] = theta;
        double* prow = binv_.data() + r * m_;
        const double inv = 1.0 / u[r];
        for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || u[i] == 0.0) continue;
            double* row = binv_.data() + i * m_;
            const double f = u[i];
            for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
        }
        is_basic_[basis_[r]] = false;
        basis_[r] = j;
        is_basic_[j] = true;
    }

    // Gauss-Jordan on the current basis columns
    void refactor() {
        std::vector<double> B(m_ * m_), inv(m_ * m_, 0.0), col;
        for (std::size_t k = 0; k < m_; ++k) {
            column(basis_[k], col);
            for (std::size_t i = 0; i < m_; ++i) B[i * m_ + k] = col[i];
        }
        for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t p = c;
            for (std::size_t i = c + 1; i < m_; ++i)
                if (std::abs(B[i * m_ + c]) > std::abs(B[p * m_ + c])) p = i;
            if (std::abs(B[p * m_ + c]) < 1e-14) throw NumericalFailure("singular basis during refactorization");
            if (p != c)
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(B[p * m_ + k], B[c * m_ + k]);
                    std::swap(inv[p * m_ + k], inv[c * m_ + k]);
                }
            const double d = 1.0 / B[c * m_ + c];
            for (std::size_t k = 0; k < m_; ++k) {
                B[c * m_ + k] *= d;
                inv[c * m_ + k] *= d;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == c) continue;
                const double f = B[i * m_ + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    B[i * m_ + k] -= f * B[c * m_ + k];
                    inv[i * m_ + k] -= f * inv[c * m_ + k];
                }
            }
        }
        binv_ = std::move(inv);
        apply_binv(b_, xb_);
        for (auto& v : xb_)
            if (v < 0.0 && v > -1e-11) v = 0.0;
    }

    LpStatus iterate(const std::vector<double>& cost, bool phase1) {
        std::vector<double> u, col;
        int stall = 0;
        bool bland = false;
        const std::size_t limit = phase1 ? n_ + m_ : n_;
        for (;;) {
            if (iterations_ >= opt_.max_iterations) {
                std::ostringstream os;
                os << "simplex iteration cap " << opt_.max_iterations << " reached (" << (phase1 ? "phase 1" : "phase 2")
                   << ", objective " << objective(cost) << ")";
                throw NumericalFailure(os.str());
            }
            const auto pi = multipliers(cost);
            std::size_t enter = limit;
            double best = -opt_.tolerance;
            for (std::size_t j = 0; j < limit; ++j) {
                if (is_basic_[j]) continue;
                const double d = cost[j] - dot_column(pi, j);
                if (d < best) {
                    best = d;
                    enter = j;
                    if (bland) break;
                }
            }
            if (enter == limit) return LpStatus::Optimal;

            column(enter, col);
            apply_binv(col, u);
            std::size_t leave = m_;
            double ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (u[i] <= 1e-9) continue;
                const double t = std::max(0.0, xb_[i]) / u[i];
                const bool better = leave == m_ || t < ratio - 1e-14 ||
                                    (t <= ratio + 1e-14 && (bland ? basis_[i] < basis_[leave] : u[i] > u[leave]));
                if (better) {
                    leave = i;
                    ratio = t;
                }
            }
            if (leave == m_) return LpStatus::Unbounded;
            xb_[leave] = std::max(0.0, xb_[leave]);
            pivot(leave, enter, u);
            ++iterations_;
            if (ratio <= opt_.tolerance) {
                if (++stall > 50) bland = true;
            } else {
                stall = 0;
                bland = false;
            }
            if (iterations_ % opt_.refactor_every == 0) refactor();
        }
    }

    void drive_out_artificials() {
        std::vector<double> col, u;
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            std::vector<double> row(binv_.begin() + static_cast<std::ptrdiff_t>(r * m_),
                                    binv_.begin() + static_cast<std::ptrdiff_t>((r + 1) * m_));
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j]) continue;
                if (std::abs(dot_column(row, j)) <= 1e-9) continue;
                column(j, col);
                apply_binv(col, u);
                xb_[r] = 0.0;
                pivot(r, j, u);
                break;
            }
        }
    }

    const DenseMatrix& A_;
    std::size_t m_, n_;
    LpOptions opt_;
    std::vector<double> sign_, b_;
    std::vector<std::size_t> basis_;
    std::vector<bool> is_basic_;
    std::vector<double> binv_;  // row-major m x m
    std::vector<double> xb_;
    int iterations_ = 0;
};

}  // namespace

LpResult solve_standard_form(const DenseMatrix& A, const std::vector<double>& b, const std::vector<double>& c,
                             const LpOptions& options) {
    if (b.size() != A.rows) throw InvalidInput("right-hand side length does not match the row count");
    if (c.size() != A.cols) throw InvalidInput("cost length does not match the column count");
    if (A.data.size() != A.rows * A.cols) throw InvalidInput("matrix storage does not match its shape");
    Simplex s(A, b, options);
    LpResult r;
    r.status = s.run(c);
    r.iterations = s.iterations();
    if (r.status == LpStatus::Infeasible) return r;
    r.x = s.primal();
    r.duals = s.duals(c);
    r.objective = s.objective(c);
    return r;
}

LpResult maximize_inequality(const DenseMatrix& A, const std::vector<double>& b, const std::vector<double>& c,
                             const LpOptions& options) {
    if (b.size() != A.rows) throw InvalidInput("right-hand side length does not match the row count");
    if (c.size() != A.cols) throw InvalidInput("objective length does not match the column count");
    DenseMatrix At(A.cols, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) At(j, i) = A(i, j);
    const auto dual = solve_standard_form(At, c, b, options);
    LpResult r;
    r.iterations = dual.iterations;
    if (dual.status == LpStatus::Infeasible) {
        r.status = LpStatus::Unbounded;
        return r;
    }
    if (dual.status == LpStatus::Unbounded) {
        r.status = LpStatus::Infeasible;
        return r;
    }
    r.status = LpStatus::Optimal;
    r.x = dual.duals;
    r.duals = dual.x;
    r.objective = dual.objective;
    return r;
}

}  // namespace bohr
