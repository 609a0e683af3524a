#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dptda/geometry.hpp"
#include "dptda/mechanism.hpp"
#include "dptda/pipeline.hpp"
#include "dptda/rng.hpp"

namespace dptda {

// Two circles centered at (1.5, 1.5) and (-1.5, -1.5) with radii 1.5 and 1;
// n/2 points sampled uniformly on each boundary. n must be even.
PointCloud generate_two_circles(std::size_t n, Rng& rng);

// Adds one point at the midpoint of the two circle centers (the origin).
PointCloud with_midpoint_outlier(const PointCloud& cloud);

// Two tight Gaussian blobs at distance `separation`; n/2 points each.
PointCloud generate_two_clusters(std::size_t n, double separation, double spread, Rng& rng);

// Synthetic stand-in for the walker data: a jittered walk around a
// rectangular corridor circuit in 3-D (one prominent loop).
PointCloud generate_corridor_walk(std::size_t n, Rng& rng);

enum class SweepAxis { epsilon, n };

struct ExperimentConfig {
    std::string dataset = "two-circle";  // "two-circle" or "csv:<path>"
    SweepAxis axis = SweepAxis::epsilon;
    std::vector<double> values;          // positive, sorted ascending
    std::size_t replications = 50;
    double epsilon = 1.0;                // fixed value when sweeping n
    std::size_t n = 4000;                // fixed value when sweeping epsilon
    double m = 0.2;
    double dtm_p = 1.0;
    std::size_t max_points = 5;
    int ell = 1;
    std::size_t iterations = 2000;
    double sigma = 0.0;                  // 0 = scale-aware default
    std::size_t grid_points = 0;         // 0 = per-dimension default
    std::uint64_t seed = 1;

    void validate() const;
};

struct SweepRow {
    double axis_value;
    std::size_t replicate;
    std::vector<double> db_per_dim;
    double total;
};

struct SweepSummary {
    double axis_value;
    double q025, median, q975;  // quantiles of the total distance
};

struct SweepResult {
    std::vector<SweepRow> rows;        // sorted by (axis value, replicate)
    std::vector<SweepSummary> summary;
    double log_log_slope = 0.0;        // least squares on (log value, log median)
};

// Per-replicate: fresh sample, DTM pipeline target, privatized run, final
// distance to the target per dimension. Replicates run in parallel on
// independent streams; the table is deterministic for a fixed seed.
SweepResult run_sweep(const ExperimentConfig& config);

struct WalkerConfig {
    double epsilon = 1.0;
    double m = 0.05;
    std::size_t max_points = 5;
    int ell = 1;
    std::size_t iterations = 50000;
    double sigma = 0.0;            // 0 = scale-aware default
    std::size_t grid_points = 32;
    std::size_t subsample = 0;     // 0 = use all rows
    std::uint64_t seed = 1;
};

struct WalkerResult {
    DiagramTuple true_tuple;
    DiagramTuple private_tuple;
    MechanismTrace trace;
    std::vector<double> final_db;
    double cap = 0.0;
};

WalkerResult run_walker(const PointCloud& data, const WalkerConfig& config);
WalkerResult run_walker(const std::string& csv_path, const WalkerConfig& config);

// Proposal step size used when a config leaves sigma at 0: never larger than
// diam/50, and shrunk toward the mechanism's concentration scale Delta/eps so
// high-budget chains can settle within the iteration budget.
double default_sigma(double diam, double delta, double epsilon);

}  // namespace dptda
