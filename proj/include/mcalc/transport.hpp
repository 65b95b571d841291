#pragma once

#include <vector>

namespace mcalc {

// Exact solution of the dense balanced transportation problem
//   min sum_ij c_ij x_ij   s.t.  sum_j x_ij = supply_i,  sum_i x_ij = demand_j,  x >= 0.
struct TransportResult {
    std::vector<double> flow;  // row-major n x m plan
    double cost = 0.0;
    int iterations = 0;        // simplex pivots performed
};

// Transportation simplex: northwest-corner start, MODI duals, Bland pivoting
// (first negative reduced cost in row-major order; smallest-index leaving
// cell among ties), so runs are deterministic and cycling-free.  Throws
// input_error for negative masses or imbalance beyond a 1e-9 relative slack,
// std::logic_error if the pivot cap is hit (unreachable for valid inputs).
TransportResult solve_transport(const std::vector<double>& supply,
                                const std::vector<double>& demand,
                                const std::vector<double>& cost);

// Independent cross-check: enumerates every spanning-tree basis (the vertices
// of the transportation polytope), solves each by leaf elimination and takes
// the cheapest feasible one.  Exponential; restricted to n*m <= 16 cells.
double transport_enumerate(const std::vector<double>& supply,
                           const std::vector<double>& demand,
                           const std::vector<double>& cost);

}  // namespace mcalc
