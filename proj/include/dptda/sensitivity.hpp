#pragma once

#include <cstdint>

#include "dptda/geometry.hpp"
#include "dptda/pipeline.hpp"
#include "dptda/rng.hpp"

namespace dptda {

// A pair of equal-size clouds differing in exactly `hamming` ordered entries.
struct AdjacentPair {
    PointCloud d;
    PointCloud d_prime;
    std::size_t hamming = 0;
};

// Two point masses at distance diam_e on a line (floor(n/2) at a, the rest at
// b); the primed cloud moves one a to the midpoint. The worst case behind the
// Cech non-decay bound.
AdjacentPair make_two_mass_pair(std::size_t n, double diam_e);

// Same construction, guarded by the m < 1/2 hypothesis of the exact L^1-DTM
// lower bound d_B = diam_e / (2 ceil(m n)).
AdjacentPair make_prop5_pair(std::size_t n, double m, double diam_e);

// Finds the merge realizing the largest finite Rips H0 death d_m and inserts
// the midpoint of the witnessing pair, replacing a duplicated point elsewhere
// to preserve cardinality. Guarantees d_B >= min{gap to the next death, d_m/2}.
// Throws when the cloud has no finite death or no duplicated point.
AdjacentPair make_lemma1_perturbation(const PointCloud& cloud);

// Group-privacy variant: moves k_hamming of the a's to the midpoint.
AdjacentPair make_group_pair(std::size_t n, std::size_t k_hamming, double m, double diam_e);

// 1-D grid for the segment constructions: box [-diam/8, diam + diam/8] with
// spacing diam/16, so the construction points a = 0, c = diam/2, b = diam are
// lattice points and the DTM merge values are sampled exactly.
GridSpec construction_grid(double diam_e);

struct LabPipeline {
    enum class Kind { rips_h0, dtm };
    Kind kind = Kind::dtm;
    DtmParams dtm;  // used by the dtm route
    int ell = 1;    // dimensions carried by the dtm route
};

struct BaseSensitivityResult {
    double max_db = 0.0;    // largest per-dimension bottleneck distance seen
    AdjacentPair argmax;    // pair realizing it
    double diam_e = 0.0;    // diameter of the padded sampling box (the ambient E)
};

// Random single-point replacements inside the padded bounding box; trials run
// in parallel on independent streams and the max is order-independent.
BaseSensitivityResult empirical_base_sensitivity(const PointCloud& base, std::size_t trials,
                                                 const LabPipeline& pipeline, Rng& rng);

}  // namespace dptda
