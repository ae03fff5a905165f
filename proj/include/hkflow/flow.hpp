#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hkflow/entropy.hpp"
#include "hkflow/mesh.hpp"
#include "hkflow/profiles.hpp"

namespace hk {

enum class FlowMode { full, wasserstein, hellinger };

// Right-hand side of the evolution at the given state:
//   full:        Div(steady * grad G(r)) - steady * sg(r)
//   wasserstein: the conservative flux divergence alone
//   hellinger:   the pointwise reaction alone
// Fluxes are finite-volume face differences of G(r) weighted by the
// arithmetic face mean of the steady density; no-flux boundary faces carry
// zero flux.
Field rhs(const Field& rho, const Field& steady, const GSpec& g, FlowMode mode);

// Explicit-step bound: cfl * min(h^2 / (2 d a_max), 1 / b_max) over the terms
// active in `mode`, where a_max is the largest face diffusivity (chord slope
// of G, replaced by s g'(s) at the face mean when the r-jump is negligible)
// and b_max the largest reaction slope |d(s g(s))/ds| over the cells. Cells
// with r = 0 contribute a one-sided slope probed just inside the domain.
// Returns 1e-12 when every active rate vanishes.
double stable_dt(const Field& rho, const Field& steady, const GSpec& g, FlowMode mode,
                 double cfl);

struct FlowConfig {
    FlowMode mode = FlowMode::full;
    GSpec g{};
    std::vector<PsiSpec> monitors;  // entropies tracked along the run
    Grid grid{};
    Field steady{};   // strictly positive, unit mass
    Field initial{};  // nonnegative
    double t_end = 1.0;
    double cfl = 0.45;        // in (0, 1]
    int snapshot_every = 1;   // monitor/record cadence in steps
    bool store_snapshots = true;
    long max_steps = 100'000'000;
};

struct Trajectory {
    std::vector<double> times;        // monitor times, starting at 0, ending at t_end
    std::vector<double> mass_series;  // L1 norm at each monitor time
    std::vector<std::vector<double>> entropy_series;          // [monitor][sample]
    std::vector<std::vector<EntropyReport>> production_series;  // [monitor][sample]
    std::vector<std::pair<long, Field>> snapshots;  // (step, state) at monitor times
    long steps = 0;
    long clamp_events = 0;          // cells clipped to zero over the whole run
    double clamped_mass_total = 0;  // mass removed by the clamp over the run
};

// Forward Euler with adaptive dt, positivity clamp and entropy monitors.
// Monitors are evaluated at t = 0, every snapshot_every steps, and at t_end.
// Aborts (SolverAbort) when a monitor turns non-finite or the clamp removes
// more than 1e-6 of the current mass in a single step.
Trajectory simulate(const FlowConfig& config);

std::string to_string(FlowMode mode);
FlowMode flow_mode_from_string(const std::string& name);

}  // namespace hk
