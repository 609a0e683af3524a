#include "dptda/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace dptda {

PipelineOutput dtm_pipeline(const PointCloud& cloud, const DtmPipelineOptions& options) {
    if (options.ell < 0) throw std::invalid_argument("pipeline: ell must be >= 0");
    PipelineOutput out;
    out.grid = options.grid ? *options.grid
                            : default_grid(cloud, options.grid_points, options.padding_factor);
    out.field = dtm_field(cloud, out.grid, options.dtm);
    const Filtration filtration = lower_star_filtration(out.field);
    out.cap = filtration.max_value();
    out.diagrams = compute_persistence(filtration, options.ell);
    return out;
}

PipelineOutput rips_pipeline(const PointCloud& cloud, const RipsPipelineOptions& options) {
    if (options.ell < 0 || options.ell > 1)
        throw std::invalid_argument("pipeline: rips supports ell 0 or 1");
    PipelineOutput out;
    const int max_dim = options.ell + 1;  // need (q+1)-cells to kill q-classes
    const Filtration filtration = rips_filtration(cloud, options.max_scale, max_dim);
    out.cap = std::isfinite(options.max_scale) ? options.max_scale : filtration.max_value();
    if (options.ell == 0) {
        out.diagrams = make_empty_tuple(0);
        out.diagrams.diagrams[0] = h0_union_find(filtration);
    } else {
        out.diagrams = compute_persistence(filtration, options.ell);
    }
    return out;
}

}  // namespace dptda
