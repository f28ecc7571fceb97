#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sga/oracles.hpp"
#include "sga/transport.hpp"
#include "test_util.hpp"

using namespace sga;
using namespace sga::testutil;

namespace {

double total_mass(const DensityField& d) {
    double s = std::accumulate(d.values.begin(), d.values.end(), 0.0);
    return s * d.grid.cell_volume();
}

} // namespace

TEST_CASE("identity map and zero potential leave densities alone") {
    std::mt19937_64 rng(201);
    auto g = GridSpec::make_2d(10, 14);
    auto nu = random_density(g, rng);

    auto pushed = pushforward(nu, identity_map(g));
    CHECK(linf_diff(pushed.values, nu.values) <= 1e-14);

    auto map0 = transport_map_from_potential(PotentialField(g), MapMode::argmin);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(map0.targets[i] == static_cast<std::int32_t>(i));
}

TEST_CASE("hand-built map moves and merges mass") {
    auto g = GridSpec::make_1d(4);
    auto nu = normalize_density(std::vector<double>{1.0, 1.0, 1.0, 1.0}, g);
    TransportMap map;
    map.grid = g;
    map.mode = MapMode::argmin;
    map.targets = {2, 2, 3, 3}; // two cells each
    auto pushed = pushforward(nu, map);
    CHECK(pushed.values[0] == 0.0);
    CHECK(pushed.values[1] == 0.0);
    CHECK(pushed.values[2] == doctest::Approx(2.0));
    CHECK(pushed.values[3] == doctest::Approx(2.0));
    CHECK(total_mass(pushed) == doctest::Approx(1.0));
}

TEST_CASE("pushforward conserves mass and stays nonnegative") {
    std::mt19937_64 rng(203);
    for (auto g : {GridSpec::make_1d(128), GridSpec::make_2d(16, 16),
                   GridSpec::make_3d(8, 8, 8)}) {
        auto nu = random_density(g, rng);
        auto f = smooth_random_potential(g, rng, 0.05);
        for (auto mode : {MapMode::argmin, MapMode::gradient}) {
            auto map = transport_map_from_potential(f, mode);
            auto pushed = pushforward(nu, map);
            CHECK(rel_err(total_mass(pushed), 1.0) <= 1e-12);
            for (double v : pushed.values) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("dual value of the zero potential vanishes") {
    std::mt19937_64 rng(207);
    auto g = GridSpec::make_2d(12, 12);
    auto mu = random_density(g, rng);
    auto nu = random_density(g, rng);
    CHECK(std::abs(kantorovich_value(PotentialField(g), mu, nu)) <= 1e-15);
    // and it shifts with f -> f + const only through the c-transform cancel
    auto f = smooth_random_potential(g, rng, 0.05);
    auto fs = f;
    for (double& v : fs.values) v += 2.0;
    CHECK(rel_err(kantorovich_value(fs, mu, nu), kantorovich_value(f, mu, nu)) <= 1e-10);
}

TEST_CASE("point-to-point problem solved exactly by a linear potential") {
    // unit masses half a box apart; the squared-distance cost is 0.125
    auto g = GridSpec::make_1d(8);
    auto mu = one_hot(g, 5); // x = 0.6875
    auto nu = one_hot(g, 1); // x = 0.1875
    PotentialField f(g);
    for (int k = 0; k < 8; ++k) f.values[k] = 0.5 * g.center(0, k);

    CHECK(kantorovich_value(f, mu, nu) == doctest::Approx(0.125).epsilon(1e-14));

    auto map = transport_map_from_potential(f, MapMode::argmin);
    auto pushed = pushforward(nu, map);
    CHECK(linf_diff(pushed.values, mu.values) <= 1e-12);
}

TEST_CASE("weak duality against the quantile solution") {
    std::mt19937_64 rng(211);
    auto g = GridSpec::make_1d(256);
    auto mu = gaussian_bump_1d(g, 0.3, 0.06);
    auto nu = gaussian_bump_1d(g, 0.7, 0.09);
    const double half_w2_sq = 0.5 * std::pow(oracle::quantile_w2_1d(mu, nu), 2);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = smooth_random_potential(g, rng, 0.1);
        CHECK(kantorovich_value(f, mu, nu) <= half_w2_sq + 1e-3);
    }
}

TEST_CASE("a c-concave potential prices its own pushforward") {
    // for c-concave f, I(f; T#nu, nu) equals half the squared distance
    // between nu and its image under T = id - grad f^c
    std::mt19937_64 rng(213);
    auto g = GridSpec::make_1d(512);
    auto raw = smooth_random_potential(g, rng, 0.01);
    auto f = double_c_transform(raw); // c-concave
    auto nu = gaussian_bump_1d(g, 0.5, 0.12);
    auto map = transport_map_from_potential(f, MapMode::argmin);
    auto pushed = pushforward(nu, map);
    const double priced = kantorovich_value(f, pushed, nu);
    const double exact = 0.5 * std::pow(oracle::quantile_w2_1d(pushed, nu), 2);
    CHECK(std::abs(priced - exact) <= 0.02 * std::max(exact, 1e-4) + 1e-5);
}

TEST_CASE("argmin and gradient maps agree for smooth potentials") {
    std::mt19937_64 rng(217);
    auto g = GridSpec::make_2d(32, 32);
    auto nu = smooth_random_density(g, rng);
    auto f = double_c_transform(smooth_random_potential(g, rng, 0.01));
    auto pa = pushforward(nu, transport_map_from_potential(f, MapMode::argmin));
    auto pg = pushforward(nu, transport_map_from_potential(f, MapMode::gradient));
    double l1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        l1 += std::abs(pa.values[i] - pg.values[i]);
    l1 *= g.cell_volume();
    CHECK(l1 <= 0.4); // same transport up to one-cell splat differences
}
