#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dptda/geometry.hpp"

namespace dptda {

// Empirical L^p distance-to-measure settings: mass fraction m in (0,1) and
// exponent p >= 1. The neighbour count is k = ceil(m*n).
struct DtmParams {
    double m = 0.2;
    double p = 1.0;

    // ceil(m*n), with products within 1e-9 of an integer snapped first so
    // decimal inputs like m=0.2, n=4000 give k=800 rather than 801.
    std::size_t k_for(std::size_t n) const;

    void validate(std::size_t n) const;
};

// Regular lattice over a box: `resolution[a]` sample points along axis a,
// endpoints included.
struct GridSpec {
    BoundingBox box;
    std::vector<std::size_t> resolution;

    std::size_t dim() const { return resolution.size(); }
    std::size_t point_count() const;
    double spacing(std::size_t axis) const;
    double coordinate(std::size_t axis, std::size_t i) const;
    std::vector<double> point(std::size_t linear) const;
    void point_into(std::size_t linear, std::span<double> out) const;
    void validate() const;
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> values;  // size == grid.point_count(), row-major, axis 0 fastest

    double max_value() const;
    double min_value() const;
};

// DTM value at a single query point: ((1/k) sum of the k nearest distances^p)^(1/p).
double empirical_dtm(const PointCloud& cloud, std::span<const double> x, const DtmParams& params);
double empirical_dtm(const KnnIndex& index, std::size_t n, std::span<const double> x,
                     const DtmParams& params);

// DTM evaluated at every lattice point. Lattice points are processed in
// parallel; values are query-independent so the output does not depend on
// scheduling. Throws if the grid box does not cover the cloud.
ScalarField dtm_field(const PointCloud& cloud, const GridSpec& grid, const DtmParams& params);

// Bounding box padded by `padding_factor * diameter` per side, with the
// per-dimension default resolution (64 points per axis in 2-D, 32 in 3-D,
// 256 in 1-D) unless `points_per_axis` is given.
GridSpec default_grid(const PointCloud& cloud, std::size_t points_per_axis = 0,
                      double padding_factor = 0.1);

}  // namespace dptda
