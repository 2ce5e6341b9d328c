#include "otlab/dense_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "otlab/errors.hpp"

namespace otlab {

ColumnSimplex::ColumnSimplex(int nrows, int ncols, std::vector<double> b,
                             std::vector<double> cost, ColumnFn column)
    : nrows_(nrows), ncols_(ncols), b_(std::move(b)), cost_(std::move(cost)),
      column_(std::move(column)) {
    for (double v : b_)
        if (v < 0.0) throw NumericFailure("ColumnSimplex expects b >= 0");
}

// Columns >= ncols_ are the phase-1 artificials (identity).
void ColumnSimplex::fetch(int col, std::vector<Entry>& out) const {
    out.clear();
    if (col < ncols_)
        column_(col, out);
    else
        out.push_back({col - ncols_, 1.0});
}

std::vector<double> ColumnSimplex::multiply_binv(int col) const {
    std::vector<Entry> entries;
    fetch(col, entries);
    std::vector<double> w(std::size_t(nrows_), 0.0);
    for (const auto& e : entries)
        for (int r = 0; r < nrows_; ++r)
            w[std::size_t(r)] += binv_[std::size_t(r) * nrows_ + e.row] * e.val;
    return w;
}

void ColumnSimplex::refactorize() {
    // Gauss-Jordan inverse of the basis matrix.
    const int n = nrows_;
    std::vector<double> mat(std::size_t(n) * n, 0.0), inv(std::size_t(n) * n, 0.0);
    std::vector<Entry> entries;
    for (int k = 0; k < n; ++k) {
        fetch(basis_[std::size_t(k)], entries);
        for (const auto& e : entries) mat[std::size_t(e.row) * n + k] = e.val;
        inv[std::size_t(k) * n + k] = 1.0;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        double best = 0.0;
        for (int r = col; r < n; ++r) {
            const double v = std::abs(mat[std::size_t(r) * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (piv < 0 || best < 1e-13) throw NumericFailure("singular basis in refactorization");
        if (piv != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(mat[std::size_t(piv) * n + c], mat[std::size_t(col) * n + c]);
                std::swap(inv[std::size_t(piv) * n + c], inv[std::size_t(col) * n + c]);
            }
        }
        const double d = mat[std::size_t(col) * n + col];
        for (int c = 0; c < n; ++c) {
            mat[std::size_t(col) * n + c] /= d;
            inv[std::size_t(col) * n + c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = mat[std::size_t(r) * n + col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                mat[std::size_t(r) * n + c] -= f * mat[std::size_t(col) * n + c];
                inv[std::size_t(r) * n + c] -= f * inv[std::size_t(col) * n + c];
            }
        }
    }
    // Reorder rows of the inverse so that binv * basis-matrix = I with the
    // basis columns in basis order: the Gauss-Jordan above already produces
    // that ordering because column k of `mat` is basis column k.
    binv_ = std::move(inv);
    // Recompute basic values from scratch for stability.
    for (int r = 0; r < n; ++r) {
        double v = 0.0;
        for (int c = 0; c < n; ++c) v += binv_[std::size_t(r) * n + c] * b_[std::size_t(c)];
        xb_[std::size_t(r)] = v;
    }
    pivots_since_refactor_ = 0;
}

bool ColumnSimplex::run_phase(const std::vector<double>& costs, bool phase_one, double tol) {
    const int total_vars = ncols_ + nrows_;
    const std::int64_t max_pivots = 2000LL * (nrows_ + 64) + 4 * std::int64_t(total_vars);
    std::vector<double> y(std::size_t(nrows_));
    std::vector<Entry> entries;

    for (std::int64_t iter = 0;; ++iter) {
        if (iter > max_pivots)
            throw NumericFailure("simplex pivot budget exhausted (" + std::to_string(iter) + ")");

        // duals y = c_B * B^-1
        for (int c = 0; c < nrows_; ++c) {
            double v = 0.0;
            for (int r = 0; r < nrows_; ++r)
                v += costs[std::size_t(basis_[std::size_t(r)])] * binv_[std::size_t(r) * nrows_ + c];
            y[std::size_t(c)] = v;
        }

        // Bland: first variable with negative reduced cost enters. Artificials
        // may not re-enter outside phase 1.
        int entering = -1;
        const int scan_limit = phase_one ? total_vars : ncols_;
        for (int j = 0; j < scan_limit; ++j) {
            if (in_basis_[std::size_t(j)]) continue;
            fetch(j, entries);
            double rc = costs[std::size_t(j)];
            for (const auto& e : entries) rc -= y[std::size_t(e.row)] * e.val;
            if (rc < -tol) {
                entering = j;
                break;
            }
        }
        if (entering < 0) return true;  // phase optimal

        const auto w = multiply_binv(entering);

        // Ratio test with Bland tie-break. In phase 2 a basic artificial must
        // never grow, so a negative direction on one caps the step at zero.
        double delta = std::numeric_limits<double>::infinity();
        int leave_row = -1;
        for (int r = 0; r < nrows_; ++r) {
            const double wr = w[std::size_t(r)];
            const bool artificial = basis_[std::size_t(r)] >= ncols_;
            double ratio = std::numeric_limits<double>::infinity();
            if (wr > tol)
                ratio = std::max(0.0, xb_[std::size_t(r)]) / wr;
            else if (!phase_one && artificial && wr < -tol)
                ratio = 0.0;
            if (ratio < delta - 1e-15 ||
                (ratio < delta + 1e-15 && leave_row >= 0 &&
                 basis_[std::size_t(r)] < basis_[std::size_t(leave_row)])) {
                delta = ratio;
                leave_row = r;
            }
        }
        if (leave_row < 0) throw Unbounded("simplex: improving ray");

        // pivot
        for (int r = 0; r < nrows_; ++r) xb_[std::size_t(r)] -= delta * w[std::size_t(r)];
        xb_[std::size_t(leave_row)] = delta;

        const double piv = w[std::size_t(leave_row)];
        if (std::abs(piv) < 1e-13) throw NumericFailure("vanishing simplex pivot");
        for (int c = 0; c < nrows_; ++c)
            binv_[std::size_t(leave_row) * nrows_ + c] /= piv;
        for (int r = 0; r < nrows_; ++r) {
            if (r == leave_row) continue;
            const double f = w[std::size_t(r)];
            if (f == 0.0) continue;
            for (int c = 0; c < nrows_; ++c)
                binv_[std::size_t(r) * nrows_ + c] -=
                    f * binv_[std::size_t(leave_row) * nrows_ + c];
        }

        in_basis_[std::size_t(basis_[std::size_t(leave_row)])] = 0;
        in_basis_[std::size_t(entering)] = 1;
        basis_[std::size_t(leave_row)] = entering;

        if (++pivots_since_refactor_ >= 64) refactorize();
    }
}

ColumnSimplex::Result ColumnSimplex::solve(double tol) {
    const int total_vars = ncols_ + nrows_;
    basis_.resize(std::size_t(nrows_));
    xb_ = b_;
    binv_.assign(std::size_t(nrows_) * nrows_, 0.0);
    in_basis_.assign(std::size_t(total_vars), 0);
    for (int r = 0; r < nrows_; ++r) {
        basis_[std::size_t(r)] = ncols_ + r;
        in_basis_[std::size_t(ncols_ + r)] = 1;
        binv_[std::size_t(r) * nrows_ + r] = 1.0;
    }
    pivots_since_refactor_ = 0;

    std::vector<double> phase1_cost(std::size_t(total_vars), 0.0);
    for (int j = ncols_; j < total_vars; ++j) phase1_cost[std::size_t(j)] = 1.0;
    run_phase(phase1_cost, true, tol);

    double infeas = 0.0;
    for (int r = 0; r < nrows_; ++r)
        if (basis_[std::size_t(r)] >= ncols_) infeas += std::max(0.0, xb_[std::size_t(r)]);
    Result res;
    if (infeas > 1e-8) {
        res.feasible = false;
        return res;
    }

    std::vector<double> phase2_cost(std::size_t(total_vars), 0.0);
    for (int j = 0; j < ncols_; ++j) phase2_cost[std::size_t(j)] = cost_[std::size_t(j)];
    run_phase(phase2_cost, false, tol);

    res.x.assign(std::size_t(ncols_), 0.0);
    for (int r = 0; r < nrows_; ++r) {
        const int v = basis_[std::size_t(r)];
        if (v < ncols_) res.x[std::size_t(v)] = std::max(0.0, xb_[std::size_t(r)]);
    }
    res.duals.assign(std::size_t(nrows_), 0.0);
    for (int c = 0; c < nrows_; ++c) {
        double v = 0.0;
        for (int r = 0; r < nrows_; ++r)
            v += phase2_cost[std::size_t(basis_[std::size_t(r)])] *
                 binv_[std::size_t(r) * nrows_ + c];
        res.duals[std::size_t(c)] = v;
    }
    double value = 0.0;
    for (int j = 0; j < ncols_; ++j) value += res.x[std::size_t(j)] * cost_[std::size_t(j)];
    res.value = value;
    return res;
}

}  // namespace otlab
