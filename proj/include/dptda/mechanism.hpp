#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dptda/diagram.hpp"
#include "dptda/metric.hpp"
#include "dptda/rng.hpp"

namespace dptda {

// Exponential-mechanism settings. The utility sensitivity defaults to
// Delta = (ell+1) * diam_e / (m * n); delta_override substitutes a literal
// value (e.g. 2*sqrt(2)/(m*n)).
struct PrivacyParams {
    double epsilon = 1.0;
    double m = 0.2;
    std::size_t n = 0;
    std::size_t max_points = 5;  // M: points per diagram dimension
    int ell = 1;
    double diam_e = 0.0;
    std::optional<double> delta_override;

    double delta() const;
    void validate() const;
};

struct TraceRow {
    std::size_t iteration;
    double utility;
    bool accepted;
    std::vector<double> db_per_dim;  // distance to the target, dims 0..ell
};

struct MechanismTrace {
    std::vector<TraceRow> rows;
    DiagramTuple final;
};

struct MechanismOptions {
    // 0 = run on the continuous triangle. Otherwise the state space is the
    // N-point discretization of the triangle (N ~ snap_grid equally spaced
    // points, realized as a lattice with ~sqrt(N) levels per coordinate).
    std::size_t snap_grid = 0;
    // Keep the dim-0 essential class (capped) inside the utility instead of
    // dropping it from both diagrams.
    bool keep_essential = false;
    // Mixture proposal: with this probability perturb one uniformly chosen
    // point by single_point_sigma instead of perturbing every point. Each
    // mixture component is symmetric, so the chain's stationary density is
    // unchanged; single-point moves let spare points travel without jittering
    // the currently matched pairs. 0 restores the plain all-points kernel.
    double single_point_fraction = 0.0;
    double single_point_sigma = 0.0;
};

// u_D(candidate) = -sum_q d_B(target_q, candidate_q). Nonpositive; 0 iff the
// candidate matches the target. Throws if a candidate diagram holds more than
// max_points pairs or the tuple lengths differ.
double utility(const DiagramTuple& target, const DiagramTuple& candidate,
               const PrivacyParams& params, double cap,
               std::vector<double>* per_dim = nullptr);

// Initial state: per dimension, max_points points with x ~ U[0,S] and
// y ~ U[x,S] (the triangle-filling rule y = x + (S-x) z).
DiagramTuple init_diagram_tuple(std::size_t max_points, double S, int ell, Rng& rng,
                                const MechanismOptions& options = {});

// Gaussian perturbation of every birth-death point; returns nullopt when any
// point leaves the support {0 <= x <= y <= S}. All noise is drawn before the
// support check, so the stream advances by the same amount either way.
std::optional<DiagramTuple> propose(const DiagramTuple& current, double sigma, double S,
                                    Rng& rng, const MechanismOptions& options = {});

struct MhStep {
    DiagramTuple state;
    bool accepted;
    double log_accept;  // min{0, (eps/2 Delta)(u' - u)}; -inf when out of support
};

// One Metropolis-Hastings step: accept iff log U <= log_accept. Out-of-support
// proposals are rejected without consuming the acceptance uniform.
MhStep mh_step(const DiagramTuple& target, const DiagramTuple& current,
               const PrivacyParams& params, double sigma, double cap, Rng& rng,
               const MechanismOptions& options = {});

// Full sampler: uniform triangle init followed by `iterations` MH steps; the
// support bound S is the supplied cap. Returns the last iterate and the full
// per-iteration trace. Stationary density prop. to exp((eps/2 Delta) u_D).
std::pair<DiagramTuple, MechanismTrace> privatize(const DiagramTuple& target,
                                                  const PrivacyParams& params,
                                                  std::size_t iterations, double sigma,
                                                  double cap, Rng& rng,
                                                  const MechanismOptions& options = {});

}  // namespace dptda
