#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dptda/experiments.hpp"
#include "dptda/rng.hpp"

using namespace dptda;

TEST_CASE("two-circle samples sit exactly on their circles") {
    Rng rng(91);
    const PointCloud cloud = generate_two_circles(400, rng);
    REQUIRE(cloud.size() == 400);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        const double ra = std::hypot(p[0] - 1.5, p[1] - 1.5);
        const double rb = std::hypot(p[0] + 1.5, p[1] + 1.5);
        const bool on_a = std::abs(ra - 1.5) <= 1e-12;
        const bool on_b = std::abs(rb - 1.0) <= 1e-12;
        CHECK((on_a || on_b));
    }
    CHECK_THROWS_AS(generate_two_circles(401, rng), std::invalid_argument);
}

TEST_CASE("circle centers are recoverable from the sample means") {
    Rng rng(92);
    const std::size_t n = 4000;
    const PointCloud cloud = generate_two_circles(n, rng);
    double ax = 0.0, ay = 0.0, bx = 0.0, by = 0.0;
    for (std::size_t i = 0; i < n / 2; ++i) {
        ax += cloud.point(i)[0];
        ay += cloud.point(i)[1];
    }
    for (std::size_t i = n / 2; i < n; ++i) {
        bx += cloud.point(i)[0];
        by += cloud.point(i)[1];
    }
    const double tol = 6.0 / std::sqrt(static_cast<double>(n / 2));
    CHECK(std::abs(ax / (n / 2) - 1.5) <= tol);
    CHECK(std::abs(ay / (n / 2) - 1.5) <= tol);
    CHECK(std::abs(bx / (n / 2) + 1.5) <= tol);
    CHECK(std::abs(by / (n / 2) + 1.5) <= tol);
}

TEST_CASE("midpoint outlier lands at the origin") {
    Rng rng(93);
    const PointCloud with = with_midpoint_outlier(generate_two_circles(10, rng));
    CHECK(with.size() == 11);
    CHECK(with.point(10)[0] == 0.0);
    CHECK(with.point(10)[1] == 0.0);
}

TEST_CASE("corridor walk is 3-d, deterministic, and loops") {
    Rng a(94), b(94);
    const PointCloud walk_a = generate_corridor_walk(500, a);
    const PointCloud walk_b = generate_corridor_walk(500, b);
    CHECK(walk_a.dim() == 3);
    CHECK(walk_a.coords() == walk_b.coords());
    // The circuit spans the full square in both planar axes.
    const BoundingBox box = bounding_box(walk_a);
    CHECK(box.extent(0) > 1.5);
    CHECK(box.extent(1) > 1.5);
    CHECK(box.extent(2) < 1.0);
}

TEST_CASE("sweep with a single replicate has degenerate quantiles") {
    ExperimentConfig config;
    config.axis = SweepAxis::epsilon;
    config.values = {1.0};
    config.replications = 1;
    config.n = 200;
    config.iterations = 100;
    config.grid_points = 16;
    config.seed = 7;
    const SweepResult result = run_sweep(config);
    REQUIRE(result.rows.size() == 1);
    REQUIRE(result.summary.size() == 1);
    CHECK(result.summary[0].q025 == result.rows[0].total);
    CHECK(result.summary[0].median == result.rows[0].total);
    CHECK(result.summary[0].q975 == result.rows[0].total);
}

TEST_CASE("sweep tables are bit-identical under a fixed seed") {
    ExperimentConfig config;
    config.axis = SweepAxis::n;
    config.values = {100, 200};
    config.replications = 4;
    config.epsilon = 1.0;
    config.iterations = 150;
    config.grid_points = 16;
    config.seed = 11;
    const SweepResult a = run_sweep(config);
    const SweepResult b = run_sweep(config);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].axis_value == b.rows[i].axis_value);
        CHECK(a.rows[i].replicate == b.rows[i].replicate);
        CHECK(a.rows[i].total == b.rows[i].total);
        CHECK(a.rows[i].db_per_dim == b.rows[i].db_per_dim);
    }
    CHECK(a.log_log_slope == b.log_log_slope);
}

TEST_CASE("median distance is nonincreasing along the epsilon axis") {
    ExperimentConfig config;
    config.axis = SweepAxis::epsilon;
    config.values = {0.2, 2.0, 20.0};
    config.replications = 12;
    config.n = 300;
    config.iterations = 600;
    config.grid_points = 24;
    config.seed = 13;
    const SweepResult result = run_sweep(config);
    int inversions = 0;
    for (std::size_t i = 1; i < result.summary.size(); ++i)
        inversions += result.summary[i].median > result.summary[i - 1].median;
    CHECK(inversions <= 1);
}

TEST_CASE("sweep config validation") {
    ExperimentConfig config;
    config.values = {};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.values = {2.0, 1.0};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.values = {1.0, 2.0};
    config.replications = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.replications = 3;
    config.axis = SweepAxis::n;
    config.values = {10.5, 20.0};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.dataset = "martian-craters";
    config.values = {16.0, 32.0};
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);
}

TEST_CASE("synthetic walker run is deterministic and complete") {
    Rng rng(95);
    const PointCloud walk = generate_corridor_walk(600, rng);
    WalkerConfig config;
    config.iterations = 400;
    config.grid_points = 12;
    config.subsample = 300;
    config.seed = 17;
    config.m = 0.05;
    const WalkerResult a = run_walker(walk, config);
    const WalkerResult b = run_walker(walk, config);
    CHECK(a.final_db == b.final_db);
    CHECK(a.cap == b.cap);
    REQUIRE(a.trace.rows.size() == 400);
    CHECK(a.final_db.size() == 2);
    // The corridor loop must be visible in the non-private H1 diagram.
    double top_h1 = 0.0;
    for (const auto& p : a.true_tuple.diagrams[1].pairs)
        if (!p.essential()) top_h1 = std::max(top_h1, p.persistence());
    CHECK(top_h1 > 0.2);
}

TEST_CASE("scale-aware sigma default") {
    CHECK(default_sigma(10.0, 1.0, 1.0) == doctest::Approx(10.0 / 50.0));  // coarse wins
    CHECK(default_sigma(10.0, 0.001, 10.0) ==
          doctest::Approx(8.0 * 0.001 / 10.0).epsilon(1e-12));  // fine wins
    CHECK(default_sigma(10.0, 1e-12, 1e6) >= 1e-6 * 10.0 - 1e-18);  // floor
}
