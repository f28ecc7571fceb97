#include <doctest.h>

#include <cmath>

#include "sga/barycenter.hpp"
#include "sga/oracles.hpp"
#include "sga/poisson.hpp"
#include "test_util.hpp"

using namespace sga;
using namespace sga::testutil;

namespace {

BarycenterProblem bumps_1d(int n, std::vector<double> centers, std::vector<double> w) {
    auto g = GridSpec::make_1d(n);
    std::vector<DensityField> marg;
    for (double c : centers) marg.push_back(gaussian_bump_1d(g, c, 0.07));
    return BarycenterProblem::make(std::move(marg), Weights::make(w));
}

} // namespace

TEST_CASE("the zero dual state scores zero") {
    std::mt19937_64 rng(401);
    auto g = GridSpec::make_2d(12, 12);
    std::vector<DensityField> marg{random_density(g, rng), random_density(g, rng),
                                   random_density(g, rng)};
    auto prob = BarycenterProblem::make(marg, Weights::make({0.2, 0.3, 0.5}));
    auto state = DualState::zeros(prob);
    CHECK(std::abs(dual_value(state, prob)) <= 1e-14);

    auto mix = mix_potential(state, prob.weights, g);
    for (double v : mix.values) CHECK(v == 0.0);
}

TEST_CASE("mix potential closes the weighted sum to zero") {
    std::mt19937_64 rng(403);
    auto g = GridSpec::make_1d(40);
    std::vector<DensityField> marg{random_density(g, rng), random_density(g, rng),
                                   random_density(g, rng)};
    std::vector<double> w{0.5, 0.2, 0.3};
    auto prob = BarycenterProblem::make(marg, Weights::make(w));
    auto state = DualState::zeros(prob);
    for (auto& f : state.potentials)
        f = smooth_random_potential(g, rng, 0.1);
    auto mix = mix_potential(state, prob.weights, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = w[2] * mix.values[i];
        for (std::size_t j = 0; j + 1 < marg.size(); ++j)
            s += w[j] * state.potentials[j].values[i];
        CHECK(std::abs(s) <= 1e-12);
    }
}

TEST_CASE("gradient at zero reduces to the smoothed density mismatch") {
    std::mt19937_64 rng(405);
    auto g = GridSpec::make_2d(16, 16);
    std::vector<DensityField> marg{smooth_random_density(g, rng),
                                   smooth_random_density(g, rng)};
    const double a1 = 0.4;
    auto prob = BarycenterProblem::make(marg, Weights::make({a1, 1.0 - a1}));
    auto state = DualState::zeros(prob);

    auto got = dual_gradient(state, prob, 0);

    std::vector<double> rhs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        rhs[i] = -a1 * (marg[0].values[i] - marg[1].values[i]);
    auto want = zero_mean(solve_neumann(PotentialField(g, rhs)));
    CHECK(linf_diff(got.values, want.values) <= 1e-12);

    CHECK_THROWS_AS(dual_gradient(state, prob, 1), Error);
    CHECK_THROWS_AS(dual_gradient(state, prob, -1), Error);
}

TEST_CASE("directional derivative matches the assembled gradient") {
    std::mt19937_64 rng(407);
    auto g = GridSpec::make_1d(64);
    std::vector<DensityField> marg{gaussian_bump_1d(g, 0.3, 0.08),
                                   gaussian_bump_1d(g, 0.5, 0.1),
                                   gaussian_bump_1d(g, 0.7, 0.08)};
    auto prob = BarycenterProblem::make(marg, Weights::make({0.3, 0.3, 0.4}));
    auto state = DualState::zeros(prob);
    for (auto& f : state.potentials) f = smooth_random_potential(g, rng, 0.01);

    const double eps = 1e-5;
    for (int i = 0; i < 2; ++i) {
        auto grad = dual_gradient(state, prob, i);
        // the plain L2 gradient is the stencil image of the Sobolev one
        auto raw = apply_neumann_stencil(g, grad.values);
        for (int dir = 0; dir < 4; ++dir) {
            auto phi = zero_mean(smooth_random_potential(g, rng, 1.0));
            auto plus = state, minus = state;
            for (std::size_t k = 0; k < g.size(); ++k) {
                plus.potentials[i].values[k] += eps * phi.values[k];
                minus.potentials[i].values[k] -= eps * phi.values[k];
            }
            const double fd =
                (dual_value(plus, prob) - dual_value(minus, prob)) / (2.0 * eps);
            double pairing = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k)
                pairing += phi.values[k] * raw[k];
            pairing *= g.cell_volume();
            CHECK(std::abs(fd - pairing) <= 1e-3 * std::max(std::abs(fd), 1e-3));
        }
    }
}

TEST_CASE("the dual objective is concave along segments") {
    std::mt19937_64 rng(409);
    auto g = GridSpec::make_2d(12, 12);
    std::vector<DensityField> marg{smooth_random_density(g, rng),
                                   smooth_random_density(g, rng),
                                   smooth_random_density(g, rng)};
    auto prob = BarycenterProblem::make(marg, Weights::make({0.25, 0.35, 0.4}));
    for (int trial = 0; trial < 10; ++trial) {
        auto a = DualState::zeros(prob);
        auto b = DualState::zeros(prob);
        for (auto& f : a.potentials) f = smooth_random_potential(g, rng, 0.05);
        for (auto& f : b.potentials) f = smooth_random_potential(g, rng, 0.05);
        auto mid = DualState::zeros(prob);
        for (std::size_t i = 0; i < mid.potentials.size(); ++i)
            for (std::size_t k = 0; k < g.size(); ++k)
                mid.potentials[i].values[k] =
                    0.5 * (a.potentials[i].values[k] + b.potentials[i].values[k]);
        CHECK(dual_value(mid, prob) >=
              0.5 * (dual_value(a, prob) + dual_value(b, prob)) - 1e-12);
    }
}

TEST_CASE("two point masses: dual optimum and midpoint barycenter") {
    auto g = GridSpec::make_1d(8);
    std::vector<DensityField> marg{one_hot(g, 1), one_hot(g, 5)};
    auto prob = BarycenterProblem::make(marg, Weights::make({0.5, 0.5}));
    // optimal value: each marginal travels 0.25, so 2 * 0.5 * 0.25^2/2 = 1/32
    auto res = sga_barycenter(prob, SweepScheme::parallel,
                              StepSchedule::constant(0.1), 2000);
    CHECK(!res.diverged);
    CHECK(rel_err(res.D_best, 1.0 / 32.0) <= 0.01);
    // the barycenter concentrates on the midpoint cell x = 0.4375
    double mean = 0.0;
    for (int k = 0; k < 8; ++k)
        mean += g.center(0, k) * res.barycenter.values[k] * g.cell_volume();
    CHECK(std::abs(mean - 0.4375) <= 2.0 * g.spacing(0));
}

TEST_CASE("identical marginals: zero dual value, input recovered") {
    std::mt19937_64 rng(411);
    auto g = GridSpec::make_2d(16, 16);
    auto mu = smooth_random_density(g, rng);
    std::vector<DensityField> marg{mu, mu, mu};
    auto prob = BarycenterProblem::make(marg, Weights::make({0.2, 0.5, 0.3}));
    for (auto scheme :
         {SweepScheme::parallel, SweepScheme::sequential, SweepScheme::random}) {
        BarycenterOptions opts;
        opts.compute_primal = false;
        auto res = sga_barycenter(prob, scheme, StepSchedule::constant(0.1), 40, 7, opts);
        CHECK(std::abs(res.D_best) <= 1e-10);
        CHECK(linf_diff(res.barycenter.values, mu.values) <= 1e-8);
    }
}

TEST_CASE("all sweep schemes solve a smooth 1d problem") {
    auto prob = bumps_1d(64, {0.25, 0.5, 0.7, 0.8}, {0.25, 0.25, 0.25, 0.25});
    auto truth = oracle::quantile_barycenter_1d(prob);
    const double h = prob.grid().spacing(0);
    for (auto scheme :
         {SweepScheme::parallel, SweepScheme::sequential, SweepScheme::random}) {
        BarycenterOptions opts;
        opts.compute_primal = true;
        auto res = sga_barycenter(prob, scheme, StepSchedule::constant(0.1), 400, 11, opts);
        CHECK(!res.diverged);
        CHECK(oracle::quantile_w2_1d(res.barycenter, truth) <= 2.0 * h);
        // weak duality: the primal cost of the extracted density dominates
        CHECK(res.B_value >= res.D_best - 1e-6);
        CHECK(res.gap == doctest::Approx(res.B_value - res.D_best));
    }
}

TEST_CASE("extraction sources agree after convergence") {
    auto prob = bumps_1d(64, {0.35, 0.65}, {0.5, 0.5});
    BarycenterOptions opts;
    opts.compute_primal = false;
    auto res = sga_barycenter(prob, SweepScheme::parallel,
                              StepSchedule::constant(0.1), 600, 0, opts);
    const double h = prob.grid().spacing(0);
    auto from0 = extract_barycenter(res.f_best, prob, 0);
    auto from1 = extract_barycenter(res.f_best, prob, 1);
    auto avg = extract_barycenter(res.f_best, prob, kExtractAverage);
    CHECK(oracle::quantile_w2_1d(from0, from1) <= 3.0 * h);
    CHECK(oracle::quantile_w2_1d(from0, avg) <= 3.0 * h);
}

TEST_CASE("translation equivariance on the grid") {
    const int n = 64, shift = 8;
    auto g = GridSpec::make_1d(n);
    const double s = static_cast<double>(shift) / n;
    auto prob = bumps_1d(n, {0.2, 0.4}, {0.5, 0.5});
    auto shifted = bumps_1d(n, {0.2 + s, 0.4 + s}, {0.5, 0.5});
    BarycenterOptions opts;
    opts.compute_primal = false;
    auto a = sga_barycenter(prob, SweepScheme::parallel, StepSchedule::constant(0.1),
                            400, 0, opts);
    auto b = sga_barycenter(shifted, SweepScheme::parallel, StepSchedule::constant(0.1),
                            400, 0, opts);
    // shift a's barycenter by s and compare
    DensityField moved(g);
    for (int k = 0; k < n; ++k)
        moved.values[(k + shift) % n] = a.barycenter.values[k];
    moved = normalize_density(moved.values, g);
    CHECK(oracle::quantile_w2_1d(moved, b.barycenter) <= 3.0 * g.spacing(0));
}

TEST_CASE("problem construction sanity") {
    auto g = GridSpec::make_1d(16);
    auto h = GridSpec::make_1d(32);
    std::mt19937_64 rng(413);
    std::vector<DensityField> bad{random_density(g, rng), random_density(h, rng)};
    CHECK_THROWS_AS(BarycenterProblem::make(bad, Weights::make({0.5, 0.5})), Error);
    std::vector<DensityField> one{random_density(g, rng)};
    CHECK_THROWS_AS(BarycenterProblem::make(one, Weights::make({1.0})), Error);
}
