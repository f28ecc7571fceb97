#include "sga/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace sga {

namespace {
std::mutex g_fftw_mutex; // FFTW planning is not thread-safe
} // namespace

struct SpectralPlan::Impl {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    mutable std::vector<double> work;
    mutable std::mutex work_mutex;

    ~Impl() {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
    }
};

SpectralPlan::SpectralPlan(const GridSpec& grid) : grid_(grid), impl_(new Impl) {
    for (int j = 0; j < grid.dim; ++j) {
        const int nj = grid.shape[j];
        const double h = grid.spacing(j);
        lambda_[j].resize(nj);
        for (int k = 0; k < nj; ++k)
            lambda_[j][k] = (2.0 - 2.0 * std::cos(M_PI * k / nj)) / (h * h);
    }

    impl_->work.resize(grid.size());
    int dims[3];
    fftw_r2r_kind fwd[3], inv[3];
    for (int j = 0; j < grid.dim; ++j) {
        dims[j] = grid.shape[j];
        fwd[j] = FFTW_REDFT10;
        inv[j] = FFTW_REDFT01;
    }
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    impl_->forward = fftw_plan_r2r(grid.dim, dims, impl_->work.data(), impl_->work.data(),
                                   fwd, FFTW_ESTIMATE);
    impl_->inverse = fftw_plan_r2r(grid.dim, dims, impl_->work.data(), impl_->work.data(),
                                   inv, FFTW_ESTIMATE);
}

SpectralPlan::~SpectralPlan() = default;

PotentialField SpectralPlan::solve_neumann(std::span<const double> rho) const {
    if (rho.size() != grid_.size())
        fail(ErrorKind::GridMismatch, "solve_neumann: value count does not match grid");
    require_finite(rho, "solve_neumann");
    double mean = 0.0;
    for (double v : rho) mean += v;
    mean *= grid_.cell_volume();
    if (std::abs(mean) > 1e-8)
        fail(ErrorKind::NonZeroMean, "solve_neumann: right-hand side has nonzero mean");

    std::lock_guard<std::mutex> lock(impl_->work_mutex);
    auto& w = impl_->work;
    std::copy(rho.begin(), rho.end(), w.begin());
    fftw_execute(impl_->forward);

    const std::size_t n = grid_.size();
    double scale = 1.0;
    for (int j = 0; j < grid_.dim; ++j) scale *= 2.0 * grid_.shape[j];
    scale = 1.0 / scale;

    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = grid_.multi_index(i);
        double lam = 0.0;
        for (int j = 0; j < grid_.dim; ++j) lam += lambda_[j][idx[j]];
        w[i] = (lam == 0.0) ? 0.0 : w[i] * scale / lam;
    }
    fftw_execute(impl_->inverse);
    return PotentialField(grid_, std::vector<double>(w.begin(), w.end()));
}

double SpectralPlan::h1_norm(const PotentialField& phi) const {
    require_same_grid(phi.grid, grid_, "h1_norm");
    require_finite(phi.values, "h1_norm");

    std::lock_guard<std::mutex> lock(impl_->work_mutex);
    auto& w = impl_->work;
    std::copy(phi.values.begin(), phi.values.end(), w.begin());
    fftw_execute(impl_->forward);

    const std::size_t n = grid_.size();
    const double hd = grid_.cell_volume();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = grid_.multi_index(i);
        double lam = 0.0;
        double weight = 1.0;
        for (int j = 0; j < grid_.dim; ++j) {
            lam += lambda_[j][idx[j]];
            weight *= (idx[j] == 0 ? 0.5 : 1.0) / (2.0 * grid_.shape[j]);
        }
        acc += lam * w[i] * w[i] * weight;
    }
    return std::sqrt(hd * acc);
}

std::shared_ptr<const SpectralPlan> plan_for(const GridSpec& grid) {
    static std::mutex cache_mutex;
    static std::map<std::array<int, 4>, std::shared_ptr<const SpectralPlan>> cache;
    const std::array<int, 4> key{grid.dim, grid.shape[0], grid.shape[1], grid.shape[2]};
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<SpectralPlan>(grid);
    cache.emplace(key, plan);
    return plan;
}

PotentialField solve_neumann(const PotentialField& rho) {
    return plan_for(rho.grid)->solve_neumann(rho.values);
}

double h1_norm(const PotentialField& phi) {
    return plan_for(phi.grid)->h1_norm(phi);
}

double hminus1_norm(const DensityField& mu, const DensityField& nu) {
    require_same_grid(mu.grid, nu.grid, "hminus1_norm");
    std::vector<double> diff(mu.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = mu.values[i] - nu.values[i];
    auto plan = plan_for(mu.grid);
    return plan->h1_norm(plan->solve_neumann(diff));
}

std::vector<double> apply_neumann_stencil(const GridSpec& grid, std::span<const double> phi) {
    const std::size_t n = grid.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = grid.multi_index(i);
        double acc = 0.0;
        for (int j = 0; j < grid.dim; ++j) {
            const double inv_h2 = static_cast<double>(grid.shape[j]) * grid.shape[j];
            std::size_t stride = 1;
            for (int k = j + 1; k < grid.dim; ++k) stride *= grid.shape[k];
            const double c = phi[i];
            // reflected ghost cells: the boundary neighbor mirrors the cell itself
            const double lo = (idx[j] > 0) ? phi[i - stride] : c;
            const double hi = (idx[j] < grid.shape[j] - 1) ? phi[i + stride] : c;
            acc += (2.0 * c - lo - hi) * inv_h2;
        }
        out[i] = acc;
    }
    return out;
}

} // namespace sga
