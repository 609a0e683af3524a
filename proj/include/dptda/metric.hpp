#pragma once

#include <cstddef>
#include <vector>

#include "dptda/diagram.hpp"
#include "dptda/geometry.hpp"

namespace dptda {

// One edge of a witness matching; -1 denotes the diagonal.
struct MatchEdge {
    std::ptrdiff_t from;
    std::ptrdiff_t to;
};

struct MatchResult {
    double distance = 0.0;
    std::vector<MatchEdge> matching;
};

// Exact bottleneck distance. Infinite deaths are capped at `cap` before
// matching; with cap == +inf the essential points of the two diagrams are
// matched among themselves (mismatched counts give an infinite distance).
// Binary search over the candidate costs (cross l-inf distances and diagonal
// gaps) with a bipartite-matching feasibility test at each candidate.
MatchResult bottleneck(const Diagram& p, const Diagram& q, double cap);

// Exhaustive minimum over all bijections of the diagonal-augmented diagrams.
// Oracle for bottleneck(); at most 7 points per side.
double bottleneck_bruteforce(const Diagram& p, const Diagram& q, double cap);

// Sum of per-dimension bottleneck distances. Throws on an ell mismatch.
double tuple_bottleneck(const DiagramTuple& p, const DiagramTuple& q, double cap);
double tuple_bottleneck(const DiagramTuple& p, const DiagramTuple& q, double cap,
                        std::vector<double>& per_dim);

// p-Wasserstein distance between the empirical measures of two equal-size
// clouds: ((1/n) * optimal assignment of pairwise costs^p)^(1/p).
double wasserstein_p_empirical(const PointCloud& a, const PointCloud& b, double p);

}  // namespace dptda
