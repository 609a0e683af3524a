#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dptda {

// Finite multiset of points in R^d, stored row-major. Duplicates are allowed
// and meaningful: the adversarial constructions stack many copies on one
// location.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(std::size_t dim, std::vector<double> coords);
    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    void push_back(std::span<const double> p);
    void set_point(std::size_t i, std::span<const double> p);

    const std::vector<double>& coords() const { return coords_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

struct BoundingBox {
    std::vector<double> lower;
    std::vector<double> upper;
    double padding = 0.0;  // amount already applied per side

    std::size_t dim() const { return lower.size(); }
    double extent(std::size_t axis) const { return upper[axis] - lower[axis]; }
    double diagonal() const;
    bool contains(std::span<const double> p) const;
};

// Axis-aligned bounding box of the cloud, expanded by `padding` on every side.
BoundingBox bounding_box(const PointCloud& cloud, double padding = 0.0);

struct Neighbor {
    std::size_t index;
    double distance;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

// Reusable nearest-neighbour index. Exhaustive scan for n <= 2000, k-d tree
// above; both paths share one distance routine and the (distance, index)
// ordering, so results are bit-identical.
class KnnIndex {
public:
    explicit KnnIndex(const PointCloud& cloud);
    ~KnnIndex();
    KnnIndex(KnnIndex&&) noexcept;
    KnnIndex& operator=(KnnIndex&&) noexcept;

    // k smallest distances, ties broken toward the lower index, sorted
    // ascending. Throws std::invalid_argument unless 1 <= k <= n.
    std::vector<Neighbor> query(std::span<const double> q, std::size_t k) const;

    struct Tree;

private:
    const PointCloud* cloud_;
    std::unique_ptr<Tree> tree_;  // null when scanning
};

// One-shot k nearest neighbours (builds a throwaway index for large clouds).
std::vector<Neighbor> knn(const PointCloud& cloud, std::span<const double> query, std::size_t k);

// Max pairwise distance; 0 for a single point. Throws on an empty cloud.
double diameter(const PointCloud& cloud);

// Hausdorff distance between supports. Throws on empty inputs or dim mismatch.
double hausdorff(const PointCloud& a, const PointCloud& b);

}  // namespace dptda
