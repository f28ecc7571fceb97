#include "sga/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sga {
namespace oracle {

QuantileProfile QuantileProfile::from_density(const DensityField& mu) {
    if (mu.grid.dim != 1)
        fail(ErrorKind::NotOneDimensional, "quantile oracle needs a 1D density");
    const int n = mu.grid.shape[0];
    const double h = mu.grid.spacing(0);
    QuantileProfile p;
    p.edges.resize(n + 1);
    p.cumulative.resize(n + 1);
    p.edges[0] = 0.0;
    p.cumulative[0] = 0.0;
    for (int k = 0; k < n; ++k) {
        p.edges[k + 1] = (k + 1) * h;
        p.cumulative[k + 1] = p.cumulative[k] + mu.values[k] * h;
    }
    // the discrete integral is 1 within 1e-12; pin the endpoint
    p.cumulative[n] = 1.0;
    return p;
}

double QuantileProfile::inverse(double q) const {
    q = std::clamp(q, 0.0, 1.0);
    // first edge with CDF >= q, then linear interpolation inside that cell
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), q);
    std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    if (k == 0) return edges.front();
    const double mass = cumulative[k] - cumulative[k - 1];
    if (mass <= 0.0) return edges[k];
    const double frac = (q - cumulative[k - 1]) / mass;
    return edges[k - 1] + frac * (edges[k] - edges[k - 1]);
}

double quantile_w2_1d(const DensityField& mu, const DensityField& nu, int K) {
    require_same_grid(mu.grid, nu.grid, "quantile_w2_1d");
    if (mu.grid.dim != 1)
        fail(ErrorKind::NotOneDimensional, "quantile_w2_1d needs 1D densities");
    if (K <= 0) K = 20 * mu.grid.shape[0];
    auto pm = QuantileProfile::from_density(mu);
    auto pn = QuantileProfile::from_density(nu);
    double acc = 0.0;
    for (int k = 0; k < K; ++k) {
        const double q = (k + 0.5) / K;
        const double d = pm.inverse(q) - pn.inverse(q);
        acc += d * d;
    }
    return std::sqrt(acc / K);
}

DensityField quantile_barycenter_1d(const BarycenterProblem& prob, int K) {
    if (prob.grid().dim != 1)
        fail(ErrorKind::NotOneDimensional, "quantile_barycenter_1d needs 1D marginals");
    const int n = prob.grid().shape[0];
    if (K <= 0) K = 20 * n;

    std::vector<QuantileProfile> profiles;
    profiles.reserve(prob.count());
    for (const auto& mu : prob.marginals) profiles.push_back(QuantileProfile::from_density(mu));

    // deposit mass 1/K at each averaged quantile, linearly split between
    // the two nearest cell centers
    std::vector<double> raw(n, 0.0);
    for (int k = 0; k < K; ++k) {
        const double q = (k + 0.5) / K;
        double x = 0.0;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            x += prob.weights.alpha[i] * profiles[i].inverse(q);
        double u = std::clamp(x * n - 0.5, 0.0, static_cast<double>(n - 1));
        const int b = std::min(static_cast<int>(u), n - 2 >= 0 ? n - 2 : 0);
        const double frac = u - b;
        raw[b] += 1.0 - frac;
        raw[b + 1] += frac;
    }
    return normalize_density(raw, prob.grid());
}

namespace {

// O(N^3) assignment on a square cost matrix (potential/auction-free
// Hungarian variant with Dijkstra-style augmentation).
double solve_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0); // match[j]: row assigned to column j, 1-based
    for (int r = 1; r <= n; ++r) {
        match[0] = r;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        std::vector<int> way(n + 1, 0);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost[match[j] - 1][j - 1];
    return total;
}

} // namespace

double assignment_w2(std::span<const std::array<double, 3>> a,
                     std::span<const std::array<double, 3>> b, int dim) {
    if (a.size() != b.size())
        fail(ErrorKind::SizeMismatch, "assignment_w2: point lists differ in length");
    if (a.empty() || a.size() > 256)
        fail(ErrorKind::TooLarge, "assignment_w2: need 1..256 points");
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < dim; ++k) {
                const double d = a[i][k] - b[j][k];
                d2 += d * d;
            }
            cost[i][j] = d2;
        }
    return std::sqrt(solve_assignment(cost) / n);
}

} // namespace oracle
} // namespace sga
