#include "dptda/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dptda/metric.hpp"
#include "dptda/parallel.hpp"

namespace dptda {

namespace {

PointCloud two_mass_cloud(std::size_t n, double diam_e) {
    // floor(n/2) a's then ceil(n/2) b's, per the odd-n convention.
    const std::size_t na = n / 2;
    std::vector<double> coords(n, diam_e);
    for (std::size_t i = 0; i < na; ++i) coords[i] = 0.0;
    return PointCloud(1, std::move(coords));
}

}  // namespace

AdjacentPair make_two_mass_pair(std::size_t n, double diam_e) {
    if (n < 2) throw std::invalid_argument("two_mass: n must be >= 2");
    if (!(diam_e > 0.0)) throw std::invalid_argument("two_mass: diam E must be positive");
    AdjacentPair pair;
    pair.d = two_mass_cloud(n, diam_e);
    pair.d_prime = pair.d;
    const double mid = diam_e / 2.0;
    pair.d_prime.set_point(0, std::span<const double>(&mid, 1));
    pair.hamming = 1;
    return pair;
}

AdjacentPair make_prop5_pair(std::size_t n, double m, double diam_e) {
    if (!(m < 0.5))
        throw std::invalid_argument("prop5: hypothesis m < 1/2 violated");
    if (!(m > 0.0)) throw std::invalid_argument("prop5: m must be positive");
    return make_two_mass_pair(n, diam_e);
}

AdjacentPair make_lemma1_perturbation(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n < 2) throw std::invalid_argument("lemma1: need at least two points");

    // Kruskal-style sweep over edges by length; each merge is an H0 death at
    // half the edge length. Track the edge realizing each merge.
    struct Edge {
        double dist;
        std::size_t u, v;
    };
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            edges.push_back({distance(cloud.point(i), cloud.point(j)), i, j});
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.dist < b.dist; });

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    double d_max = 0.0;
    std::size_t witness_u = 0, witness_v = 0;
    std::vector<double> deaths;
    for (const auto& edge : edges) {
        const std::size_t ru = find(edge.u), rv = find(edge.v);
        if (ru == rv) continue;
        parent[ru] = rv;
        const double death = edge.dist / 2.0;
        if (death > 0.0) deaths.push_back(death);
        if (death >= d_max) {
            d_max = death;
            witness_u = edge.u;
            witness_v = edge.v;
        }
    }
    if (deaths.empty())
        throw std::invalid_argument("lemma1: construction not applicable (no finite death)");

    // A duplicated point (outside the witness pair) donates its slot to the
    // midpoint so that |D| = |D'|; duplicates only carry zero-persistence
    // classes, so the diagram bound is unaffected.
    std::map<std::vector<double>, std::vector<std::size_t>> occurrences;
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = cloud.point(i);
        occurrences[std::vector<double>(p.begin(), p.end())].push_back(i);
    }
    std::size_t donor = n;
    for (const auto& [_, indices] : occurrences) {
        if (indices.size() < 2) continue;
        for (const std::size_t idx : indices) {
            if (idx != witness_u && idx != witness_v) {
                donor = idx;
                break;
            }
        }
        if (donor < n) break;
    }
    if (donor == n)
        throw std::invalid_argument(
            "lemma1: construction not applicable (needs a duplicated point to replace)");

    std::vector<double> mid(cloud.dim());
    for (std::size_t a = 0; a < cloud.dim(); ++a)
        mid[a] = (cloud.point(witness_u)[a] + cloud.point(witness_v)[a]) / 2.0;

    AdjacentPair pair;
    pair.d = cloud;
    pair.d_prime = cloud;
    pair.d_prime.set_point(donor, mid);
    pair.hamming = 1;
    return pair;
}

AdjacentPair make_group_pair(std::size_t n, std::size_t k_hamming, double m, double diam_e) {
    if (n < 2) throw std::invalid_argument("group: n must be >= 2");
    if (k_hamming < 1 || k_hamming > n)
        throw std::invalid_argument("group: K must satisfy 1 <= K <= n");
    if (!(m > 0.0 && m <= 0.5))
        throw std::invalid_argument("group: hypothesis m <= 1/2 violated");
    if (k_hamming > n / 2)
        throw std::invalid_argument("group: K exceeds the number of a's (n/2)");
    AdjacentPair pair;
    pair.d = two_mass_cloud(n, diam_e);
    pair.d_prime = pair.d;
    const double mid = diam_e / 2.0;
    for (std::size_t i = 0; i < k_hamming; ++i)
        pair.d_prime.set_point(i, std::span<const double>(&mid, 1));
    pair.hamming = k_hamming;
    return pair;
}

GridSpec construction_grid(double diam_e) {
    if (!(diam_e > 0.0)) throw std::invalid_argument("construction_grid: diam E > 0 required");
    GridSpec grid;
    grid.box.lower = {-diam_e / 8.0};
    grid.box.upper = {diam_e + diam_e / 8.0};
    grid.box.padding = diam_e / 8.0;
    grid.resolution = {21};
    return grid;
}

namespace {

DiagramTuple run_lab_pipeline(const PointCloud& cloud, const LabPipeline& pipeline,
                              const GridSpec& shared_grid) {
    if (pipeline.kind == LabPipeline::Kind::rips_h0) {
        RipsPipelineOptions options;
        options.ell = 0;
        return rips_pipeline(cloud, options).diagrams;
    }
    DtmPipelineOptions options;
    options.dtm = pipeline.dtm;
    options.ell = pipeline.ell;
    options.grid = shared_grid;  // both clouds on one grid so (2.2) applies
    return dtm_pipeline(cloud, options).diagrams;
}

}  // namespace

BaseSensitivityResult empirical_base_sensitivity(const PointCloud& base, std::size_t trials,
                                                 const LabPipeline& pipeline, Rng& rng) {
    if (trials == 0) throw std::invalid_argument("base_sensitivity: trials must be >= 1");
    const std::size_t n = base.size();
    const std::size_t d = base.dim();
    const BoundingBox box = bounding_box(base, 0.1 * diameter(base));
    GridSpec shared_grid;
    if (pipeline.kind == LabPipeline::Kind::dtm) {
        shared_grid = default_grid(base, 0, 0.1);
    }

    const DiagramTuple base_diagrams = run_lab_pipeline(base, pipeline, shared_grid);
    const std::uint64_t seed = rng.next_u64();

    const auto make_prime = [&](std::size_t trial) {
        Rng stream = Rng::stream(seed, trial);
        const std::size_t idx = static_cast<std::size_t>(stream.below(n));
        std::vector<double> replacement(d);
        for (std::size_t a = 0; a < d; ++a)
            replacement[a] = stream.uniform(box.lower[a], box.upper[a]);
        PointCloud prime = base;
        prime.set_point(idx, replacement);
        return prime;
    };

    std::vector<double> per_trial(trials, 0.0);
    parallel_for(trials, [&](std::size_t trial) {
        const PointCloud prime = make_prime(trial);
        const DiagramTuple prime_diagrams = run_lab_pipeline(prime, pipeline, shared_grid);
        std::vector<double> per_dim;
        tuple_bottleneck(drop_h0_essential(base_diagrams), drop_h0_essential(prime_diagrams),
                         kInfiniteDeath, per_dim);
        per_trial[trial] = *std::max_element(per_dim.begin(), per_dim.end());
    });

    std::size_t best_trial = 0;
    for (std::size_t t = 1; t < trials; ++t)
        if (per_trial[t] > per_trial[best_trial]) best_trial = t;

    BaseSensitivityResult result;
    result.max_db = per_trial[best_trial];
    result.argmax = {base, make_prime(best_trial), 1};
    result.diam_e = box.diagonal();
    return result;
}

}  // namespace dptda
