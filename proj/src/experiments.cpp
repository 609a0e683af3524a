#include "dptda/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dptda/io.hpp"
#include "dptda/parallel.hpp"

namespace dptda {

PointCloud generate_two_circles(std::size_t n, Rng& rng) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("two_circles: n must be even and positive");
    const double centers[2][2] = {{1.5, 1.5}, {-1.5, -1.5}};
    const double radii[2] = {1.5, 1.0};
    std::vector<double> coords;
    coords.reserve(2 * n);
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double theta = rng.uniform(0.0, 2.0 * M_PI);
            coords.push_back(centers[c][0] + radii[c] * std::cos(theta));
            coords.push_back(centers[c][1] + radii[c] * std::sin(theta));
        }
    }
    return PointCloud(2, std::move(coords));
}

PointCloud with_midpoint_outlier(const PointCloud& cloud) {
    PointCloud out = cloud;
    const std::vector<double> origin(cloud.dim(), 0.0);
    out.push_back(origin);
    return out;
}

PointCloud generate_two_clusters(std::size_t n, double separation, double spread, Rng& rng) {
    if (n < 2) throw std::invalid_argument("two_clusters: n must be >= 2");
    std::vector<double> coords;
    coords.reserve(2 * n);
    const std::size_t first = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = i < first ? 0.0 : separation;
        coords.push_back(cx + spread * rng.normal());
        coords.push_back(spread * rng.normal());
    }
    return PointCloud(2, std::move(coords));
}

PointCloud generate_corridor_walk(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("corridor_walk: n must be positive");
    // Rectangular circuit of side 2, walked in order with positional jitter.
    const double side = 2.0;
    const double perimeter = 4.0 * side;
    std::vector<double> coords;
    coords.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::fmod(static_cast<double>(i) * perimeter / static_cast<double>(n) +
                                 0.05 * rng.normal(),
                             perimeter);
        if (s < 0.0) s += perimeter;
        double x = 0.0, y = 0.0;
        if (s < side) {
            x = s;
        } else if (s < 2 * side) {
            x = side;
            y = s - side;
        } else if (s < 3 * side) {
            x = 3 * side - s;
            y = side;
        } else {
            y = 4 * side - s;
        }
        coords.push_back(x + 0.03 * rng.normal());
        coords.push_back(y + 0.03 * rng.normal());
        coords.push_back(0.15 * rng.uniform());
    }
    return PointCloud(3, std::move(coords));
}

double default_sigma(double diam, double delta, double epsilon) {
    const double coarse = diam / 50.0;
    const double fine = 8.0 * delta / epsilon;
    return std::max(std::min(coarse, fine), 1e-6 * diam);
}

void ExperimentConfig::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep: no axis values");
    if (!std::is_sorted(values.begin(), values.end()))
        throw std::invalid_argument("sweep: axis values must be sorted ascending");
    for (const double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("sweep: axis values must be positive");
    if (replications == 0) throw std::invalid_argument("sweep: replications must be >= 1");
    if (iterations == 0) throw std::invalid_argument("sweep: iterations must be >= 1");
    if (axis == SweepAxis::n) {
        for (const double v : values) {
            const double rounded = std::round(v);
            if (std::abs(v - rounded) > 1e-9 || rounded < 2.0)
                throw std::invalid_argument("sweep: n values must be integers >= 2");
        }
    }
}

namespace {

double quantile(std::vector<double> sorted, double q) {
    // Linear interpolation between order statistics (R type 7).
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct ReplicateOutcome {
    std::vector<double> db_per_dim;
    double total;
};

ReplicateOutcome run_replicate(const ExperimentConfig& config, const PointCloud* fixed_data,
                               double axis_value, std::uint64_t stream) {
    Rng rng = Rng::stream(config.seed, stream);

    const double eps = config.axis == SweepAxis::epsilon ? axis_value : config.epsilon;
    const std::size_t n = config.axis == SweepAxis::n
                              ? static_cast<std::size_t>(std::llround(axis_value))
                              : config.n;

    PointCloud data = fixed_data ? *fixed_data : generate_two_circles(n, rng);

    DtmPipelineOptions pipeline;
    pipeline.dtm = DtmParams{config.m, config.dtm_p};
    pipeline.ell = config.ell;
    pipeline.grid_points = config.grid_points;
    const PipelineOutput target = dtm_pipeline(data, pipeline);

    PrivacyParams params;
    params.epsilon = eps;
    params.m = config.m;
    params.n = data.size();
    params.max_points = config.max_points;
    params.ell = config.ell;
    params.diam_e = diameter(data);

    const double sigma = config.sigma > 0.0
                             ? config.sigma
                             : default_sigma(params.diam_e, params.delta(), eps);
    MechanismOptions options;
    options.single_point_fraction = 0.5;
    options.single_point_sigma = target.cap / 8.0;
    auto [final_state, trace] =
        privatize(target.diagrams, params, config.iterations, sigma, target.cap, rng, options);
    (void)final_state;

    ReplicateOutcome outcome;
    outcome.db_per_dim = trace.rows.back().db_per_dim;
    outcome.total =
        std::accumulate(outcome.db_per_dim.begin(), outcome.db_per_dim.end(), 0.0);
    return outcome;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();

    PointCloud csv_data;
    const PointCloud* fixed_data = nullptr;
    if (config.dataset.rfind("csv:", 0) == 0) {
        csv_data = read_points_csv(config.dataset.substr(4));
        fixed_data = &csv_data;
    } else if (config.dataset != "two-circle") {
        throw std::invalid_argument("sweep: unknown dataset '" + config.dataset + "'");
    }

    const std::size_t total = config.values.size() * config.replications;
    std::vector<ReplicateOutcome> outcomes(total);
    parallel_for(total, [&](std::size_t job) {
        const std::size_t value_idx = job / config.replications;
        outcomes[job] = run_replicate(config, fixed_data, config.values[value_idx],
                                      static_cast<std::uint64_t>(job));
    });

    SweepResult result;
    result.rows.reserve(total);
    for (std::size_t job = 0; job < total; ++job) {
        const std::size_t value_idx = job / config.replications;
        const std::size_t replicate = job % config.replications;
        result.rows.push_back({config.values[value_idx], replicate,
                               outcomes[job].db_per_dim, outcomes[job].total});
    }

    std::vector<double> log_axis, log_median;
    for (std::size_t v = 0; v < config.values.size(); ++v) {
        std::vector<double> totals;
        totals.reserve(config.replications);
        for (std::size_t r = 0; r < config.replications; ++r)
            totals.push_back(outcomes[v * config.replications + r].total);
        std::sort(totals.begin(), totals.end());
        SweepSummary summary;
        summary.axis_value = config.values[v];
        summary.q025 = quantile(totals, 0.025);
        summary.median = quantile(totals, 0.5);
        summary.q975 = quantile(totals, 0.975);
        result.summary.push_back(summary);
        log_axis.push_back(std::log(config.values[v]));
        log_median.push_back(std::log(std::max(summary.median, 1e-300)));
    }

    // Least-squares slope of log median against the log axis.
    const double k = static_cast<double>(log_axis.size());
    const double mean_x = std::accumulate(log_axis.begin(), log_axis.end(), 0.0) / k;
    const double mean_y = std::accumulate(log_median.begin(), log_median.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_axis.size(); ++i) {
        sxx += (log_axis[i] - mean_x) * (log_axis[i] - mean_x);
        sxy += (log_axis[i] - mean_x) * (log_median[i] - mean_y);
    }
    result.log_log_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return result;
}

WalkerResult run_walker(const PointCloud& data, const WalkerConfig& config) {
    Rng rng(config.seed);
    PointCloud working = data;
    if (config.subsample > 0 && config.subsample < data.size()) {
        // Uniform subsample without replacement (partial Fisher-Yates).
        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i < config.subsample; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
            std::swap(order[i], order[j]);
        }
        std::vector<double> coords;
        coords.reserve(config.subsample * data.dim());
        for (std::size_t i = 0; i < config.subsample; ++i) {
            const auto p = data.point(order[i]);
            coords.insert(coords.end(), p.begin(), p.end());
        }
        working = PointCloud(data.dim(), std::move(coords));
    }

    DtmPipelineOptions pipeline;
    pipeline.dtm = DtmParams{config.m, 1.0};
    pipeline.ell = config.ell;
    pipeline.grid_points = config.grid_points;
    const PipelineOutput target = dtm_pipeline(working, pipeline);

    PrivacyParams params;
    params.epsilon = config.epsilon;
    params.m = config.m;
    params.n = working.size();
    params.max_points = config.max_points;
    params.ell = config.ell;
    params.diam_e = diameter(working);

    const double sigma = config.sigma > 0.0
                             ? config.sigma
                             : default_sigma(params.diam_e, params.delta(), config.epsilon);
    auto [final_state, trace] =
        privatize(target.diagrams, params, config.iterations, sigma, target.cap, rng);

    WalkerResult result;
    result.true_tuple = target.diagrams;
    result.private_tuple = std::move(final_state);
    result.final_db = trace.rows.back().db_per_dim;
    result.trace = std::move(trace);
    result.cap = target.cap;
    return result;
}

WalkerResult run_walker(const std::string& csv_path, const WalkerConfig& config) {
    return run_walker(read_points_csv(csv_path), config);
}

}  // namespace dptda
