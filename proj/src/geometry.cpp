#include "dptda/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dptda/parallel.hpp"

namespace dptda {

namespace {

constexpr std::size_t kScanThreshold = 2000;  // exhaustive scan up to here
constexpr std::size_t kLeafSize = 24;

}  // namespace

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw std::invalid_argument("PointCloud: dimension must be >= 1");
    if (coords_.size() % dim_ != 0)
        throw std::invalid_argument("PointCloud: coordinate count not a multiple of dim");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("PointCloud: no points");
    const std::size_t d = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * d);
    for (const auto& row : rows) {
        if (row.size() != d)
            throw std::invalid_argument("PointCloud: rows have mixed dimensions");
        coords.insert(coords.end(), row.begin(), row.end());
    }
    return PointCloud(d, std::move(coords));
}

void PointCloud::push_back(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw std::invalid_argument("PointCloud: dimension mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
}

void PointCloud::set_point(std::size_t i, std::span<const double> p) {
    if (p.size() != dim_) throw std::invalid_argument("PointCloud: dimension mismatch");
    std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
}

double BoundingBox::diagonal() const {
    double s = 0.0;
    for (std::size_t a = 0; a < lower.size(); ++a) {
        const double e = upper[a] - lower[a];
        s += e * e;
    }
    return std::sqrt(s);
}

bool BoundingBox::contains(std::span<const double> p) const {
    for (std::size_t a = 0; a < lower.size(); ++a)
        if (p[a] < lower[a] || p[a] > upper[a]) return false;
    return true;
}

BoundingBox bounding_box(const PointCloud& cloud, double padding) {
    if (cloud.empty()) throw std::invalid_argument("bounding_box: empty cloud");
    if (padding < 0.0) throw std::invalid_argument("bounding_box: negative padding");
    const std::size_t d = cloud.dim();
    BoundingBox box;
    box.lower.assign(d, std::numeric_limits<double>::infinity());
    box.upper.assign(d, -std::numeric_limits<double>::infinity());
    box.padding = padding;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t a = 0; a < d; ++a) {
            box.lower[a] = std::min(box.lower[a], p[a]);
            box.upper[a] = std::max(box.upper[a], p[a]);
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        box.lower[a] -= padding;
        box.upper[a] += padding;
    }
    return box;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

// ---------------------------------------------------------------------------
// k-d tree

struct KnnIndex::Tree {
    struct Node {
        std::size_t begin, end;     // range into `order`
        std::size_t axis = 0;
        double split = 0.0;
        std::ptrdiff_t left = -1, right = -1;
        std::vector<double> lo, hi;  // node bounding box
    };

    std::vector<std::size_t> order;
    std::vector<Node> nodes;
    const PointCloud* cloud = nullptr;

    std::ptrdiff_t build(std::size_t begin, std::size_t end) {
        const std::size_t d = cloud->dim();
        Node node;
        node.begin = begin;
        node.end = end;
        node.lo.assign(d, std::numeric_limits<double>::infinity());
        node.hi.assign(d, -std::numeric_limits<double>::infinity());
        for (std::size_t i = begin; i < end; ++i) {
            const auto p = cloud->point(order[i]);
            for (std::size_t a = 0; a < d; ++a) {
                node.lo[a] = std::min(node.lo[a], p[a]);
                node.hi[a] = std::max(node.hi[a], p[a]);
            }
        }
        const std::ptrdiff_t self = static_cast<std::ptrdiff_t>(nodes.size());
        nodes.push_back(node);
        if (end - begin <= kLeafSize) return self;

        std::size_t axis = 0;
        double widest = -1.0;
        for (std::size_t a = 0; a < d; ++a) {
            const double w = node.hi[a] - node.lo[a];
            if (w > widest) {
                widest = w;
                axis = a;
            }
        }
        if (widest <= 0.0) return self;  // all points coincide

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(mid),
                         order.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t lhs, std::size_t rhs) {
                             const double lv = cloud->point(lhs)[axis];
                             const double rv = cloud->point(rhs)[axis];
                             return lv < rv || (lv == rv && lhs < rhs);
                         });
        const std::ptrdiff_t left = build(begin, mid);
        const std::ptrdiff_t right = build(mid, end);
        nodes[static_cast<std::size_t>(self)].axis = axis;
        nodes[static_cast<std::size_t>(self)].split = cloud->point(order[mid])[axis];
        nodes[static_cast<std::size_t>(self)].left = left;
        nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    // Squared distance from q to the node box; 0 when inside.
    double box_distance2(const Node& node, std::span<const double> q) const {
        double s = 0.0;
        for (std::size_t a = 0; a < q.size(); ++a) {
            double diff = 0.0;
            if (q[a] < node.lo[a])
                diff = node.lo[a] - q[a];
            else if (q[a] > node.hi[a])
                diff = q[a] - node.hi[a];
            s += diff * diff;
        }
        return s;
    }
};

namespace {

using Best = std::pair<double, std::size_t>;  // (squared distance, index)

// Max-heap of the k best candidates under lexicographic (d2, index) order, so
// ties resolve toward the lower index exactly like the exhaustive scan.
struct BestHeap {
    std::size_t k;
    std::vector<Best> heap;

    bool full() const { return heap.size() == k; }
    const Best& worst() const { return heap.front(); }

    void offer(double d2, std::size_t idx) {
        const Best cand{d2, idx};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end());
        } else if (cand < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end());
        }
    }
};

void search(const KnnIndex::Tree& tree, std::ptrdiff_t node_id, std::span<const double> q,
            BestHeap& best) {
    const auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
    if (best.full() && tree.box_distance2(node, q) > best.worst().first) return;
    if (node.left < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = tree.order[i];
            best.offer(squared_distance(q, tree.cloud->point(idx)), idx);
        }
        return;
    }
    // Visit the side containing the query first.
    const bool left_first = q[node.axis] < node.split;
    search(tree, left_first ? node.left : node.right, q, best);
    search(tree, left_first ? node.right : node.left, q, best);
}

std::vector<Neighbor> finish(std::vector<Best> selected) {
    std::sort(selected.begin(), selected.end());
    std::vector<Neighbor> result;
    result.reserve(selected.size());
    for (const auto& [d2, idx] : selected) result.push_back({idx, std::sqrt(d2)});
    return result;
}

std::vector<Neighbor> knn_scan(const PointCloud& cloud, std::span<const double> q,
                               std::size_t k) {
    std::vector<Best> all(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        all[i] = {squared_distance(q, cloud.point(i)), i};
    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k - 1), all.end());
    all.resize(k);
    return finish(std::move(all));
}

}  // namespace

KnnIndex::KnnIndex(const PointCloud& cloud) : cloud_(&cloud) {
    if (cloud.empty()) throw std::invalid_argument("KnnIndex: empty cloud");
    if (cloud.size() > kScanThreshold) {
        tree_ = std::make_unique<Tree>();
        tree_->cloud = cloud_;
        tree_->order.resize(cloud.size());
        std::iota(tree_->order.begin(), tree_->order.end(), std::size_t{0});
        tree_->nodes.reserve(2 * cloud.size() / kLeafSize + 4);
        tree_->build(0, cloud.size());
    }
}

KnnIndex::~KnnIndex() = default;
KnnIndex::KnnIndex(KnnIndex&&) noexcept = default;
KnnIndex& KnnIndex::operator=(KnnIndex&&) noexcept = default;

std::vector<Neighbor> KnnIndex::query(std::span<const double> q, std::size_t k) const {
    const std::size_t n = cloud_->size();
    if (k == 0 || k > n) throw std::invalid_argument("knn: k must satisfy 1 <= k <= n");
    if (q.size() != cloud_->dim()) throw std::invalid_argument("knn: query dimension mismatch");
    if (!tree_) return knn_scan(*cloud_, q, k);
    BestHeap best{k, {}};
    best.heap.reserve(k);
    search(*tree_, 0, q, best);
    return finish(std::move(best.heap));
}

std::vector<Neighbor> knn(const PointCloud& cloud, std::span<const double> query,
                          std::size_t k) {
    return KnnIndex(cloud).query(query, k);
}

double diameter(const PointCloud& cloud) {
    if (cloud.empty()) throw std::invalid_argument("diameter: empty cloud");
    const std::size_t n = cloud.size();
    if (n == 1) return 0.0;
    std::vector<double> row_max(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double best = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::max(best, squared_distance(cloud.point(i), cloud.point(j)));
        row_max[i] = best;
    });
    return std::sqrt(*std::max_element(row_max.begin(), row_max.end()));
}

double hausdorff(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty cloud");
    if (a.dim() != b.dim()) throw std::invalid_argument("hausdorff: dimension mismatch");
    const auto directed = [](const PointCloud& from, const PointCloud& to) {
        double worst = 0.0;
        for (std::size_t i = 0; i < from.size(); ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < to.size(); ++j)
                nearest = std::min(nearest, squared_distance(from.point(i), to.point(j)));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::sqrt(std::max(directed(a, b), directed(b, a)));
}

}  // namespace dptda
