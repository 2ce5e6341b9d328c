#pragma once

#include <functional>
#include <vector>

namespace otlab {

// Small revised primal simplex for equality-form LPs
//
//     min c.x   s.t.   A x = b,  x >= 0,  b >= 0,
//
// with columns supplied by a callback (the matrices handled here are tall
// and very sparse: two or three entries per column). Two phases, Bland's
// rule on entering and leaving ties, dense basis inverse with periodic
// refactorization. Intended for instances up to a few thousand columns and
// a couple hundred rows; the transportation solver proper lives in
// network_simplex.hpp.
class ColumnSimplex {
  public:
    struct Entry {
        int row;
        double val;
    };
    using ColumnFn = std::function<void(int col, std::vector<Entry>& out)>;

    struct Result {
        std::vector<double> x;      // real variables only
        std::vector<double> duals;  // one multiplier per row
        double value = 0.0;
        bool feasible = true;
    };

    ColumnSimplex(int nrows, int ncols, std::vector<double> b, std::vector<double> cost,
                  ColumnFn column);

    Result solve(double tol = 1e-10);

  private:
    void fetch(int col, std::vector<Entry>& out) const;
    void refactorize();
    std::vector<double> multiply_binv(int col) const;
    bool run_phase(const std::vector<double>& costs, bool phase_one, double tol);

    int nrows_, ncols_;
    std::vector<double> b_, cost_;
    ColumnFn column_;

    std::vector<int> basis_;           // variable index per row
    std::vector<double> xb_;           // basic values
    std::vector<double> binv_;         // dense nrows x nrows, row-major
    std::vector<char> in_basis_;
    int pivots_since_refactor_ = 0;
};

}  // namespace otlab
