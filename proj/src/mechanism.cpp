#include "dptda/mechanism.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dptda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snap_step(std::size_t snap_grid, double S) {
    const auto levels =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(
                                     std::sqrt(static_cast<double>(snap_grid)))));
    return S / static_cast<double>(levels - 1);
}

double snap(double c, double step) { return step * std::round(c / step); }

bool in_support(const DiagramTuple& tuple, double S) {
    for (const auto& diagram : tuple.diagrams)
        for (const auto& pair : diagram.pairs)
            if (!(0.0 <= pair.birth && pair.birth <= pair.death && pair.death <= S))
                return false;
    return true;
}

}  // namespace

double PrivacyParams::delta() const {
    if (delta_override) return *delta_override;
    return (static_cast<double>(ell) + 1.0) * diam_e / (m * static_cast<double>(n));
}

void PrivacyParams::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("privacy: epsilon must be positive");
    if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("privacy: m must lie in (0,1)");
    if (n == 0) throw std::invalid_argument("privacy: n must be positive");
    if (max_points == 0) throw std::invalid_argument("privacy: M must be positive");
    if (ell < 0) throw std::invalid_argument("privacy: ell must be >= 0");
    if (!(diam_e > 0.0)) throw std::invalid_argument("privacy: diam E must be positive");
    if (delta_override && !(*delta_override > 0.0))
        throw std::invalid_argument("privacy: delta override must be positive");
}

double utility(const DiagramTuple& target, const DiagramTuple& candidate,
               const PrivacyParams& params, double cap, std::vector<double>* per_dim) {
    if (target.ell() != params.ell || candidate.ell() != params.ell)
        throw std::invalid_argument("utility: tuple length does not match ell");
    for (const auto& diagram : candidate.diagrams)
        if (diagram.pairs.size() > params.max_points)
            throw std::invalid_argument("utility: candidate exceeds M points per dimension");
    std::vector<double> distances;
    const double total = tuple_bottleneck(drop_h0_essential(target), candidate, cap, distances);
    if (per_dim) *per_dim = distances;
    return -total;
}

DiagramTuple init_diagram_tuple(std::size_t max_points, double S, int ell, Rng& rng,
                                const MechanismOptions& options) {
    if (max_points == 0) throw std::invalid_argument("init: M must be >= 1");
    if (!(S > 0.0)) throw std::invalid_argument("init: S must be positive");
    const double step = options.snap_grid ? snap_step(options.snap_grid, S) : 0.0;
    DiagramTuple tuple = make_empty_tuple(ell);
    for (auto& diagram : tuple.diagrams) {
        diagram.pairs.reserve(max_points);
        for (std::size_t i = 0; i < max_points; ++i) {
            double x = rng.uniform(0.0, S);
            double y = x + (S - x) * rng.uniform();
            if (step > 0.0) {
                x = snap(x, step);
                y = snap(y, step);
            }
            diagram.pairs.push_back({x, y});
        }
    }
    return tuple;
}

std::optional<DiagramTuple> propose(const DiagramTuple& current, double sigma, double S,
                                    Rng& rng, const MechanismOptions& options) {
    if (!(sigma > 0.0)) throw std::invalid_argument("propose: sigma must be positive");
    const double step = options.snap_grid ? snap_step(options.snap_grid, S) : 0.0;
    DiagramTuple next = current;

    bool single = false;
    if (options.single_point_fraction > 0.0)
        single = rng.uniform() < options.single_point_fraction;
    if (single) {
        std::size_t total = 0;
        for (const auto& diagram : next.diagrams) total += diagram.pairs.size();
        if (total > 0) {
            std::size_t chosen = static_cast<std::size_t>(rng.below(total));
            const double s =
                options.single_point_sigma > 0.0 ? options.single_point_sigma : sigma;
            for (auto& diagram : next.diagrams) {
                if (chosen >= diagram.pairs.size()) {
                    chosen -= diagram.pairs.size();
                    continue;
                }
                auto& pair = diagram.pairs[chosen];
                pair.birth += s * rng.normal();
                pair.death += s * rng.normal();
                if (step > 0.0) {
                    pair.birth = snap(pair.birth, step);
                    pair.death = snap(pair.death, step);
                }
                break;
            }
        }
    } else {
        for (auto& diagram : next.diagrams) {
            for (auto& pair : diagram.pairs) {
                pair.birth += sigma * rng.normal();
                pair.death += sigma * rng.normal();
                if (step > 0.0) {
                    pair.birth = snap(pair.birth, step);
                    pair.death = snap(pair.death, step);
                }
            }
        }
    }
    if (!in_support(next, S)) return std::nullopt;
    return next;
}

namespace {

struct StepOutcome {
    DiagramTuple state;
    bool accepted;
    double log_accept;
    double utility_value;
    std::vector<double> per_dim;
};

// Shared step used by both mh_step and privatize so their draw sequences are
// identical for the same seed.
StepOutcome step_from(const DiagramTuple& dropped_target, const DiagramTuple& current,
                      double current_utility, const std::vector<double>& current_per_dim,
                      const PrivacyParams& params, double sigma, double cap, Rng& rng,
                      const MechanismOptions& options) {
    auto proposal = propose(current, sigma, cap, rng, options);
    if (!proposal) {
        return {current, false, -kInf, current_utility, current_per_dim};
    }
    std::vector<double> per_dim;
    const double proposal_utility =
        -tuple_bottleneck(dropped_target, *proposal, cap, per_dim);
    const double scale = params.epsilon / (2.0 * params.delta());
    const double log_accept = std::min(0.0, scale * (proposal_utility - current_utility));
    const double u = rng.uniform();
    if (std::log(u) <= log_accept)
        return {std::move(*proposal), true, log_accept, proposal_utility, std::move(per_dim)};
    return {current, false, log_accept, current_utility, current_per_dim};
}

DiagramTuple normalized_target(const DiagramTuple& target, const MechanismOptions& options,
                               double cap) {
    DiagramTuple prepared = options.keep_essential ? target : drop_h0_essential(target);
    for (auto& diagram : prepared.diagrams) diagram = cap_deaths(diagram, cap);
    return prepared;
}

}  // namespace

MhStep mh_step(const DiagramTuple& target, const DiagramTuple& current,
               const PrivacyParams& params, double sigma, double cap, Rng& rng,
               const MechanismOptions& options) {
    const DiagramTuple prepared = normalized_target(target, options, cap);
    std::vector<double> per_dim;
    const double current_utility = -tuple_bottleneck(prepared, current, cap, per_dim);
    auto outcome = step_from(prepared, current, current_utility, per_dim, params, sigma, cap,
                             rng, options);
    return {std::move(outcome.state), outcome.accepted, outcome.log_accept};
}

std::pair<DiagramTuple, MechanismTrace> privatize(const DiagramTuple& target,
                                                  const PrivacyParams& params,
                                                  std::size_t iterations, double sigma,
                                                  double cap, Rng& rng,
                                                  const MechanismOptions& options) {
    params.validate();
    if (iterations == 0) throw std::invalid_argument("privatize: T must be >= 1");
    if (!(cap > 0.0) || !std::isfinite(cap))
        throw std::invalid_argument("privatize: cap must be positive and finite");
    if (target.ell() != params.ell)
        throw std::invalid_argument("privatize: target tuple does not match ell");

    const DiagramTuple prepared = normalized_target(target, options, cap);
    DiagramTuple state = init_diagram_tuple(params.max_points, cap, params.ell, rng, options);
    std::vector<double> per_dim;
    double state_utility = -tuple_bottleneck(prepared, state, cap, per_dim);

    MechanismTrace trace;
    trace.rows.reserve(iterations);
    for (std::size_t t = 1; t <= iterations; ++t) {
        auto outcome = step_from(prepared, state, state_utility, per_dim, params, sigma, cap,
                                 rng, options);
        state = std::move(outcome.state);
        state_utility = outcome.utility_value;
        per_dim = std::move(outcome.per_dim);
        trace.rows.push_back({t, state_utility, outcome.accepted, per_dim});
    }
    trace.final = state;
    return {std::move(state), std::move(trace)};
}

}  // namespace dptda
