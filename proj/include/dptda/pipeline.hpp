#pragma once

#include <limits>
#include <optional>

#include "dptda/dtm.hpp"
#include "dptda/filtration.hpp"
#include "dptda/persistence.hpp"

namespace dptda {

// Shared cloud-to-diagram pipelines used by the sensitivity lab, the
// experiment harness, and the CLI.

struct DtmPipelineOptions {
    DtmParams dtm;
    int ell = 1;
    std::size_t grid_points = 0;        // 0 = per-dimension default
    double padding_factor = 0.1;
    std::optional<GridSpec> grid;       // explicit grid wins over the defaults
};

struct RipsPipelineOptions {
    double max_scale = std::numeric_limits<double>::infinity();
    int ell = 0;
};

struct PipelineOutput {
    DiagramTuple diagrams;
    double cap = 0.0;     // filtration cap bounding every finite death
    GridSpec grid;        // populated by the DTM route
    ScalarField field;    // populated by the DTM route
};

// Cloud -> DTM field -> cubical lower-star -> persistence (dims 0..ell).
PipelineOutput dtm_pipeline(const PointCloud& cloud, const DtmPipelineOptions& options);

// Cloud -> Vietoris-Rips -> persistence. Dimension 0 runs through the
// union-find fast path; ell >= 1 through matrix reduction.
PipelineOutput rips_pipeline(const PointCloud& cloud, const RipsPipelineOptions& options);

}  // namespace dptda
