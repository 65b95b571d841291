#include "mcalc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mcalc/errors.hpp"

namespace mcalc {

namespace {

void validate_problem(const std::vector<double>& supply, const std::vector<double>& demand,
                      const std::vector<double>& cost) {
    for (double s : supply)
        if (!std::isfinite(s) || s < 0.0) throw input_error("transport: supplies must be finite and nonnegative");
    for (double d : demand)
        if (!std::isfinite(d) || d < 0.0) throw input_error("transport: demands must be finite and nonnegative");
    if (cost.size() != supply.size() * demand.size())
        throw input_error("transport: cost matrix shape mismatch");
    for (double c : cost)
        if (!std::isfinite(c)) throw input_error("transport: costs must be finite");
    double ts = std::accumulate(supply.begin(), supply.end(), 0.0);
    double td = std::accumulate(demand.begin(), demand.end(), 0.0);
    if (std::abs(ts - td) > 1e-9 * std::max({1.0, ts, td}))
        throw input_error("transport: supplies and demands are not balanced");
}

// Lexicographic next k-combination of {0..limit-1}; false when exhausted.
bool next_combination(std::vector<int>& comb, int limit) {
    int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[i] < limit - k + i) {
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

TransportResult solve_transport(const std::vector<double>& supply,
                                const std::vector<double>& demand,
                                const std::vector<double>& cost) {
    validate_problem(supply, demand, cost);
    const std::size_t n = supply.size(), m = demand.size();
    TransportResult res;
    res.flow.assign(n * m, 0.0);
    if (n == 0 || m == 0) return res;  // balance forces both totals to ~0

    std::vector<char> basic(n * m, 0);
    {
        // Northwest-corner start: the right/down path marks exactly n+m-1
        // basic cells (zero-flow ones keep the basis a spanning tree).
        std::vector<double> srem = supply, drem = demand;
        std::size_t i = 0, j = 0;
        while (true) {
            double f = std::min(srem[i], drem[j]);
            res.flow[i * m + j] = f;
            basic[i * m + j] = 1;
            srem[i] -= f;
            drem[j] -= f;
            if (i == n - 1 && j == m - 1) break;
            if ((srem[i] <= 0.0 || j == m - 1) && i < n - 1)
                ++i;
            else
                ++j;
        }
    }

    double cmax = 0.0;
    for (double c : cost) cmax = std::max(cmax, std::abs(c));
    const double enter_tol = 1e-11 * std::max(1.0, cmax);
    const long pivot_cap = 2000 + 50L * static_cast<long>(n * m) * static_cast<long>(n + m);

    // Node ids: rows 0..n-1, columns n..n+m-1.
    std::vector<double> u(n), v(m);
    std::vector<char> known(n + m);
    std::vector<int> stack_buf, parent(n + m), via(n + m);

    while (true) {
        // MODI duals over the basis tree, rooted at row 0.
        std::fill(known.begin(), known.end(), 0);
        u[0] = 0.0;
        known[0] = 1;
        stack_buf.assign(1, 0);
        while (!stack_buf.empty()) {
            int node = stack_buf.back();
            stack_buf.pop_back();
            if (node < static_cast<int>(n)) {
                for (std::size_t j = 0; j < m; ++j)
                    if (basic[node * m + j] && !known[n + j]) {
                        v[j] = cost[node * m + j] - u[node];
                        known[n + j] = 1;
                        stack_buf.push_back(static_cast<int>(n + j));
                    }
            } else {
                std::size_t j = node - n;
                for (std::size_t i = 0; i < n; ++i)
                    if (basic[i * m + j] && !known[i]) {
                        u[i] = cost[i * m + j] - v[j];
                        known[i] = 1;
                        stack_buf.push_back(static_cast<int>(i));
                    }
            }
        }
        if (std::find(known.begin(), known.end(), 0) != known.end())
            throw std::logic_error("transport: internal error, basis lost connectivity");

        // Bland entering rule: first negative reduced cost in row-major order.
        std::size_t ei = n, ej = m;
        for (std::size_t i = 0; i < n && ei == n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (!basic[i * m + j] && cost[i * m + j] - u[i] - v[j] < -enter_tol) {
                    ei = i;
                    ej = j;
                    break;
                }
        if (ei == n) break;  // optimal

        // Unique tree path from row ei to column ej; together with the
        // entering cell it closes the pivot cycle.
        std::fill(parent.begin(), parent.end(), -2);
        parent[ei] = -1;
        stack_buf.assign(1, static_cast<int>(ei));
        while (!stack_buf.empty() && parent[n + ej] == -2) {
            int node = stack_buf.back();
            stack_buf.pop_back();
            if (node < static_cast<int>(n)) {
                for (std::size_t j = 0; j < m; ++j)
                    if (basic[node * m + j] && parent[n + j] == -2) {
                        parent[n + j] = node;
                        via[n + j] = static_cast<int>(node * m + j);
                        stack_buf.push_back(static_cast<int>(n + j));
                    }
            } else {
                std::size_t j = node - n;
                for (std::size_t i = 0; i < n; ++i)
                    if (basic[i * m + j] && parent[i] == -2) {
                        parent[i] = node;
                        via[i] = static_cast<int>(i * m + j);
                        stack_buf.push_back(static_cast<int>(i));
                    }
            }
        }
        if (parent[n + ej] == -2) throw std::logic_error("transport: internal error, pivot cycle not found");

        std::vector<int> path;  // cells from the column end back to row ei
        for (int cur = static_cast<int>(n + ej); parent[cur] != -1; cur = parent[cur]) path.push_back(via[cur]);

        // Even path positions give up theta units; ties leave the smallest
        // cell index (Bland) to stay cycling-free under degeneracy.
        double theta = std::numeric_limits<double>::infinity();
        int leaving = -1;
        for (std::size_t k = 0; k < path.size(); k += 2) {
            double f = res.flow[path[k]];
            if (f < theta - 1e-15 || (std::abs(f - theta) <= 1e-15 && (leaving < 0 || path[k] < leaving))) {
                theta = std::min(theta, f);
                leaving = path[k];
            }
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            if (k % 2 == 0)
                res.flow[path[k]] = std::max(0.0, res.flow[path[k]] - theta);
            else
                res.flow[path[k]] += theta;
        }
        res.flow[ei * m + ej] = theta;
        res.flow[leaving] = 0.0;
        basic[leaving] = 0;
        basic[ei * m + ej] = 1;
        if (++res.iterations > pivot_cap)
            throw std::logic_error("transport: internal error, pivot cap exceeded");
    }

    res.cost = 0.0;
    for (std::size_t k = 0; k < n * m; ++k) res.cost += res.flow[k] * cost[k];
    return res;
}

double transport_enumerate(const std::vector<double>& supply,
                           const std::vector<double>& demand,
                           const std::vector<double>& cost) {
    validate_problem(supply, demand, cost);
    const int n = static_cast<int>(supply.size()), m = static_cast<int>(demand.size());
    if (n == 0 || m == 0) return 0.0;
    const int cells = n * m;
    if (cells > 16) throw input_error("transport_enumerate: instance too large (n*m must be <= 16)");
    const int k = n + m - 1;

    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> root(n + m), degree(n + m);
    std::vector<std::vector<int>> incident(n + m);

    auto find_root = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };

    do {
        // Acyclic with n+m-1 edges over n+m nodes means spanning tree.
        std::iota(root.begin(), root.end(), 0);
        bool tree = true;
        for (int cell : comb) {
            int a = find_root(cell / m), b = find_root(n + cell % m);
            if (a == b) {
                tree = false;
                break;
            }
            root[a] = b;
        }
        if (!tree) continue;

        // Leaf elimination: a degree-1 node fixes the flow of its only cell.
        std::fill(degree.begin(), degree.end(), 0);
        for (auto& lst : incident) lst.clear();
        for (int cell : comb) {
            incident[cell / m].push_back(cell);
            incident[n + cell % m].push_back(cell);
            ++degree[cell / m];
            ++degree[n + cell % m];
        }
        std::vector<double> srem = supply, drem = demand;
        std::vector<char> active(cells, 0);
        for (int cell : comb) active[cell] = 1;
        std::vector<int> leaves;
        for (int node = 0; node < n + m; ++node)
            if (degree[node] == 1) leaves.push_back(node);
        double vcost = 0.0;
        bool feasible = true;
        int assigned = 0;
        while (!leaves.empty()) {
            int node = leaves.back();
            leaves.pop_back();
            if (degree[node] != 1) continue;
            int cell = -1;
            for (int c : incident[node])
                if (active[c]) {
                    cell = c;
                    break;
                }
            if (cell < 0) break;
            int i = cell / m, j = cell % m;
            double f = node < n ? srem[i] : drem[j];
            if (f < -1e-9) feasible = false;
            srem[i] -= f;
            drem[j] -= f;
            vcost += std::max(0.0, f) * cost[cell];
            active[cell] = 0;
            ++assigned;
            for (int end : {i, n + j}) {
                if (--degree[end] == 1) leaves.push_back(end);
            }
        }
        if (feasible && assigned == k && vcost < best) best = vcost;
    } while (next_combination(comb, cells));

    if (!std::isfinite(best)) throw std::logic_error("transport_enumerate: no feasible vertex found");
    return best;
}

}  // namespace mcalc
