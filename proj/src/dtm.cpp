#include "dptda/dtm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dptda/parallel.hpp"

namespace dptda {

std::size_t DtmParams::k_for(std::size_t n) const {
    const double product = m * static_cast<double>(n);
    const double nearest = std::nearbyint(product);
    double snapped = product;
    if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, std::abs(product)))
        snapped = nearest;
    const auto k = static_cast<std::size_t>(std::ceil(snapped));
    return std::max<std::size_t>(1, k);
}

void DtmParams::validate(std::size_t n) const {
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("dtm: m must lie in (0, 1)");
    if (!(p >= 1.0)) throw std::invalid_argument("dtm: p must be >= 1");
    if (n == 0) throw std::invalid_argument("dtm: empty cloud");
    if (k_for(n) > n) throw std::invalid_argument("dtm: k exceeds n");
}

std::size_t GridSpec::point_count() const {
    std::size_t total = 1;
    for (const std::size_t r : resolution) total *= r;
    return total;
}

double GridSpec::spacing(std::size_t axis) const {
    return box.extent(axis) / static_cast<double>(resolution[axis] - 1);
}

double GridSpec::coordinate(std::size_t axis, std::size_t i) const {
    if (i + 1 == resolution[axis]) return box.upper[axis];
    return box.lower[axis] + static_cast<double>(i) * spacing(axis);
}

void GridSpec::point_into(std::size_t linear, std::span<double> out) const {
    for (std::size_t a = 0; a < dim(); ++a) {
        const std::size_t i = linear % resolution[a];
        linear /= resolution[a];
        out[a] = coordinate(a, i);
    }
}

std::vector<double> GridSpec::point(std::size_t linear) const {
    std::vector<double> coords(dim());
    point_into(linear, coords);
    return coords;
}

void GridSpec::validate() const {
    if (resolution.empty() || resolution.size() != box.dim())
        throw std::invalid_argument("grid: resolution/box dimension mismatch");
    for (std::size_t a = 0; a < dim(); ++a) {
        if (resolution[a] < 2) throw std::invalid_argument("grid: need >= 2 points per axis");
        if (!(box.upper[a] > box.lower[a]))
            throw std::invalid_argument("grid: degenerate box axis");
    }
}

double ScalarField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

double ScalarField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double empirical_dtm(const KnnIndex& index, std::size_t n, std::span<const double> x,
                     const DtmParams& params) {
    params.validate(n);
    const std::size_t k = params.k_for(n);
    const auto neighbors = index.query(x, k);
    if (params.p == 1.0) {
        double sum = 0.0;
        for (const auto& nb : neighbors) sum += nb.distance;
        return sum / static_cast<double>(k);
    }
    if (params.p == 2.0) {
        double sum = 0.0;
        for (const auto& nb : neighbors) sum += nb.distance * nb.distance;
        return std::sqrt(sum / static_cast<double>(k));
    }
    double sum = 0.0;
    for (const auto& nb : neighbors) sum += std::pow(nb.distance, params.p);
    return std::pow(sum / static_cast<double>(k), 1.0 / params.p);
}

double empirical_dtm(const PointCloud& cloud, std::span<const double> x,
                     const DtmParams& params) {
    return empirical_dtm(KnnIndex(cloud), cloud.size(), x, params);
}

ScalarField dtm_field(const PointCloud& cloud, const GridSpec& grid, const DtmParams& params) {
    grid.validate();
    params.validate(cloud.size());
    if (grid.dim() != cloud.dim())
        throw std::invalid_argument("dtm_field: grid/cloud dimension mismatch");
    const BoundingBox data_box = bounding_box(cloud);
    for (std::size_t a = 0; a < grid.dim(); ++a) {
        if (data_box.lower[a] < grid.box.lower[a] || data_box.upper[a] > grid.box.upper[a])
            throw std::invalid_argument(
                "dtm_field: grid box does not cover the cloud (diagram would truncate)");
    }

    const KnnIndex index(cloud);
    ScalarField field{grid, std::vector<double>(grid.point_count())};
    const std::size_t d = grid.dim();
    const std::size_t total = field.values.size();
    const std::size_t block = 256;  // chunked to amortize per-task overhead
    const std::size_t blocks = (total + block - 1) / block;
    parallel_for(blocks, [&](std::size_t b) {
        std::vector<double> x(d);
        const std::size_t end = std::min(total, (b + 1) * block);
        for (std::size_t g = b * block; g < end; ++g) {
            grid.point_into(g, x);
            field.values[g] = empirical_dtm(index, cloud.size(), x, params);
        }
    });
    return field;
}

GridSpec default_grid(const PointCloud& cloud, std::size_t points_per_axis,
                      double padding_factor) {
    const std::size_t d = cloud.dim();
    if (points_per_axis == 0) {
        if (d == 1)
            points_per_axis = 256;
        else if (d == 2)
            points_per_axis = 64;
        else
            points_per_axis = 32;
    }
    double pad = padding_factor * diameter(cloud);
    if (pad <= 0.0) pad = 1.0;  // degenerate cloud (single location)
    GridSpec grid{bounding_box(cloud, pad), std::vector<std::size_t>(d, points_per_axis)};
    grid.validate();
    return grid;
}

}  // namespace dptda
