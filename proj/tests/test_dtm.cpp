#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dptda/dtm.hpp"
#include "dptda/experiments.hpp"
#include "dptda/rng.hpp"
#include "dptda/sensitivity.hpp"

using namespace dptda;

namespace {

PointCloud random_cloud(std::size_t n, std::size_t dim, Rng& rng) {
    std::vector<double> coords;
    for (std::size_t i = 0; i < n * dim; ++i) coords.push_back(rng.uniform(-1.0, 1.0));
    return PointCloud(dim, std::move(coords));
}

}  // namespace

TEST_CASE("k = ceil(m n) with decimal products snapped") {
    CHECK(DtmParams{0.2, 1.0}.k_for(4000) == 800);
    CHECK(DtmParams{0.1, 1.0}.k_for(10) == 1);
    CHECK(DtmParams{0.05, 1.0}.k_for(20000) == 1000);
    CHECK(DtmParams{0.25, 1.0}.k_for(10) == 3);   // 2.5 -> 3
    CHECK(DtmParams{0.3, 1.0}.k_for(7) == 3);     // 2.1 -> 3
    CHECK(DtmParams{0.4, 1.0}.k_for(10) == 4);
}

TEST_CASE("dtm of stacked copies vanishes at the stack") {
    // 6 copies of a, k = 3: every neighbour distance is zero.
    const PointCloud cloud(2, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    const DtmParams params{0.5, 1.0};
    CHECK(empirical_dtm(cloud, cloud.point(0), params) == 0.0);
}

TEST_CASE("two-mass dtm values from the lower-bound construction") {
    const std::size_t n = 100;
    const double diam = 1.0;
    const DtmParams params{0.2, 1.0};
    const std::size_t k = params.k_for(n);
    const AdjacentPair pair = make_two_mass_pair(n, diam);

    const double mid = diam / 2.0;
    const std::span<const double> c(&mid, 1);
    CHECK(empirical_dtm(pair.d, c, params) == doctest::Approx(diam / 2.0).epsilon(1e-12));
    const double moved = (static_cast<double>(k) - 1.0) / static_cast<double>(k) * diam / 2.0;
    CHECK(empirical_dtm(pair.d_prime, c, params) == doctest::Approx(moved).epsilon(1e-12));
    const double zero = 0.0;
    CHECK(empirical_dtm(pair.d, std::span<const double>(&zero, 1), params) == 0.0);
}

TEST_CASE("dtm parameter errors") {
    const PointCloud cloud(1, {0.0, 1.0});
    const double x = 0.5;
    CHECK_THROWS_AS(empirical_dtm(cloud, std::span<const double>(&x, 1), DtmParams{0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(empirical_dtm(cloud, std::span<const double>(&x, 1), DtmParams{1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(empirical_dtm(cloud, std::span<const double>(&x, 1), DtmParams{0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("field over a single stacked location is the distance function") {
    std::vector<double> coords;
    for (int i = 0; i < 8; ++i) {
        coords.push_back(0.25);
        coords.push_back(-0.5);
    }
    const PointCloud cloud(2, std::move(coords));
    GridSpec grid;
    grid.box.lower = {-1.0, -2.0};
    grid.box.upper = {1.0, 1.0};
    grid.resolution = {9, 11};
    const ScalarField field = dtm_field(cloud, grid, DtmParams{0.3, 2.0});
    for (std::size_t g = 0; g < field.values.size(); ++g) {
        const auto x = grid.point(g);
        CHECK(field.values[g] ==
              doctest::Approx(distance(x, cloud.point(0))).epsilon(1e-12));
    }
}

TEST_CASE("field values agree with pointwise evaluation exactly") {
    Rng rng(21);
    const PointCloud cloud = random_cloud(60, 2, rng);
    const GridSpec grid = default_grid(cloud, 24);
    const DtmParams params{0.15, 1.0};
    const ScalarField field = dtm_field(cloud, grid, params);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t g = static_cast<std::size_t>(rng.below(field.values.size()));
        const auto x = grid.point(g);
        CHECK(field.values[g] == empirical_dtm(cloud, x, params));  // 0 ulps
    }
}

TEST_CASE("two-circle field dips on the circles") {
    Rng rng(22);
    const PointCloud cloud = generate_two_circles(400, rng);
    const GridSpec grid = default_grid(cloud, 48);
    const ScalarField field = dtm_field(cloud, grid, DtmParams{0.05, 2.0});

    // DTM at points on each circle vs at the circle centres.
    const DtmParams params{0.05, 2.0};
    const std::vector<double> on_a{1.5 + 1.5, 1.5};
    const std::vector<double> center_a{1.5, 1.5};
    const std::vector<double> on_b{-1.5 - 1.0, -1.5};
    const std::vector<double> center_b{-1.5, -1.5};
    CHECK(empirical_dtm(cloud, on_a, params) < empirical_dtm(cloud, center_a, params));
    CHECK(empirical_dtm(cloud, on_b, params) < empirical_dtm(cloud, center_b, params));
}

TEST_CASE("grid must cover the cloud") {
    const PointCloud cloud(1, {0.0, 10.0});
    GridSpec grid;
    grid.box.lower = {0.0};
    grid.box.upper = {5.0};
    grid.resolution = {8};
    CHECK_THROWS_AS(dtm_field(cloud, grid, DtmParams{0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("dtm is 1-Lipschitz") {
    Rng rng(23);
    const PointCloud cloud = random_cloud(80, 2, rng);
    for (const double p : {1.0, 2.0, 3.5}) {
        const DtmParams params{0.2, p};
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            std::vector<double> y{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            const double dx = empirical_dtm(cloud, x, params);
            const double dy = empirical_dtm(cloud, y, params);
            CHECK(std::abs(dx - dy) <= distance(x, y) + 1e-9);
        }
    }
}

TEST_CASE("dtm is monotone in p (power means)") {
    Rng rng(24);
    const PointCloud cloud = random_cloud(50, 3, rng);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double d1 = empirical_dtm(cloud, x, DtmParams{0.3, 1.0});
        const double d2 = empirical_dtm(cloud, x, DtmParams{0.3, 2.0});
        CHECK(d1 <= d2 + 1e-12);
    }
}

TEST_CASE("sup-norm stability across Hamming-1 pairs") {
    Rng rng(25);
    for (const double p : {1.0, 2.0}) {
        const DtmParams params{0.25, p};
        for (int rep = 0; rep < 8; ++rep) {
            const std::size_t n = 40;
            PointCloud d = random_cloud(n, 2, rng);
            PointCloud d_prime = d;
            std::vector<double> replacement{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            d_prime.set_point(static_cast<std::size_t>(rng.below(n)), replacement);

            PointCloud both = d;
            for (std::size_t i = 0; i < d_prime.size(); ++i) both.push_back(d_prime.point(i));
            const double diam_e = diameter(both);
            const GridSpec grid = default_grid(both, 24);

            const ScalarField fa = dtm_field(d, grid, params);
            const ScalarField fb = dtm_field(d_prime, grid, params);
            double sup = 0.0;
            for (std::size_t g = 0; g < fa.values.size(); ++g)
                sup = std::max(sup, std::abs(fa.values[g] - fb.values[g]));
            const double bound = diam_e / (std::pow(params.m, 1.0 / p) *
                                           std::pow(static_cast<double>(n), 1.0 / p));
            CHECK(sup <= bound + 1e-9);
        }
    }
}

TEST_CASE("default grid covers and respects the per-dimension resolutions") {
    Rng rng(26);
    const PointCloud c2 = random_cloud(30, 2, rng);
    CHECK(default_grid(c2).resolution == std::vector<std::size_t>{64, 64});
    const PointCloud c3 = random_cloud(30, 3, rng);
    CHECK(default_grid(c3).resolution == std::vector<std::size_t>{32, 32, 32});
    const PointCloud c1 = random_cloud(30, 1, rng);
    CHECK(default_grid(c1).resolution == std::vector<std::size_t>{256});
}
