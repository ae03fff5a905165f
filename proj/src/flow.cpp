#include "hkflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hk {

namespace {

// One-sided probe for reaction slopes at r = 0 where d(sg)/ds diverges
// (log and arctangential profiles, power with alpha < 1).
constexpr double kZeroSlopeProbe = 1e-3;

void check_state(const Field& rho, const Field& steady) {
    require_same_grid(rho, steady);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!(steady[i] > 0.0))
            throw DomainError("steady density must be strictly positive in every cell");
        if (!(rho[i] >= 0.0)) throw DomainError("density must be nonnegative");
    }
}

struct Workspace {
    Field r;      // rho / steady
    Field pot;    // G(r)
    Field out;    // rhs accumulator
};

void compute_rhs(const Field& rho, const Field& steady, const GSpec& g, FlowMode mode,
                 Workspace& ws) {
    const Grid& grid = rho.grid;
    const int n = grid.n;
    const double h = grid.h;

    for (std::size_t i = 0; i < rho.size(); ++i) ws.r[i] = rho[i] / steady[i];
    std::fill(ws.out.values.begin(), ws.out.values.end(), 0.0);

    if (mode != FlowMode::hellinger) {
        for (std::size_t i = 0; i < rho.size(); ++i) ws.pot[i] = g.G(ws.r[i]);

        // Face (a,b): flux F = mean(steady) * (G(r_b) - G(r_a)) / h enters the
        // divergence of a with +F/h and of b with -F/h.
        auto face = [&](std::size_t a, std::size_t b) {
            const double flux = 0.5 * (steady[a] + steady[b]) * (ws.pot[b] - ws.pot[a]) / h;
            ws.out[a] += flux / h;
            ws.out[b] -= flux / h;
        };

        switch (grid.kind) {
            case DomainKind::interval_noflux:
                for (int i = 0; i + 1 < n; ++i)
                    face(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1));
                break;
            case DomainKind::torus1d:
                for (int i = 0; i < n; ++i)
                    face(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n));
                break;
            case DomainKind::torus2d:
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < n; ++i) {
                        const std::size_t me = static_cast<std::size_t>(j) * n + i;
                        face(me, static_cast<std::size_t>(j) * n + (i + 1) % n);
                        face(me, static_cast<std::size_t>((j + 1) % n) * n + i);
                    }
                break;
        }
    }

    if (mode != FlowMode::wasserstein) {
        for (std::size_t i = 0; i < rho.size(); ++i) ws.out[i] -= steady[i] * g.sg(ws.r[i]);
    }
}

}  // namespace

Field rhs(const Field& rho, const Field& steady, const GSpec& g, FlowMode mode) {
    check_state(rho, steady);
    Workspace ws{Field(rho.grid), Field(rho.grid), Field(rho.grid)};
    compute_rhs(rho, steady, g, mode, ws);
    return std::move(ws.out);
}

double stable_dt(const Field& rho, const Field& steady, const GSpec& g, FlowMode mode,
                 double cfl) {
    check_state(rho, steady);
    if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");

    const Grid& grid = rho.grid;
    const int n = grid.n;
    Field r(grid);
    double max_r = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        r[i] = rho[i] / steady[i];
        max_r = std::max(max_r, r[i]);
    }

    double a_max = 0.0;
    if (mode != FlowMode::hellinger) {
        const double jump_floor = 1e-12 * max_r;
        auto face = [&](std::size_t a, std::size_t b) {
            const double dr = r[b] - r[a];
            double diff;
            if (std::abs(dr) <= jump_floor) {
                const double mid = 0.5 * (r[a] + r[b]);
                if (mid == 0.0) return;  // dry face, carries no flux
                diff = g.sgprime(mid);
            } else {
                diff = std::abs((g.G(r[b]) - g.G(r[a])) / dr);
            }
            a_max = std::max(a_max, diff);
        };
        switch (grid.kind) {
            case DomainKind::interval_noflux:
                for (int i = 0; i + 1 < n; ++i)
                    face(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1));
                break;
            case DomainKind::torus1d:
                for (int i = 0; i < n; ++i)
                    face(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n));
                break;
            case DomainKind::torus2d:
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < n; ++i) {
                        const std::size_t me = static_cast<std::size_t>(j) * n + i;
                        face(me, static_cast<std::size_t>(j) * n + (i + 1) % n);
                        face(me, static_cast<std::size_t>((j + 1) % n) * n + i);
                    }
                break;
        }
    }

    double b_max = 0.0;
    if (mode != FlowMode::wasserstein) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double s = r[i] > 0.0 ? r[i] : kZeroSlopeProbe;
            b_max = std::max(b_max, std::abs(g.dsg(s)));
        }
    }

    double bound = std::numeric_limits<double>::infinity();
    if (mode != FlowMode::hellinger && a_max > 0.0)
        bound = std::min(bound, grid.h * grid.h / (2.0 * grid.dim() * a_max));
    if (mode != FlowMode::wasserstein && b_max > 0.0) bound = std::min(bound, 1.0 / b_max);

    if (!std::isfinite(bound)) return 1e-12;  // every active rate vanished
    return cfl * bound;
}

Trajectory simulate(const FlowConfig& config) {
    if (!(config.t_end > 0.0)) throw DomainError("t_end must be positive");
    if (!(config.cfl > 0.0 && config.cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
    if (config.snapshot_every < 1) throw DomainError("snapshot_every must be >= 1");
    if (config.monitors.empty()) throw DomainError("at least one entropy monitor is required");
    check_state(config.initial, config.steady);
    if (std::abs(integrate(config.steady) - 1.0) > 1e-6)
        throw DomainError("steady density must have unit mass");

    const Field& steady = config.steady;
    Field rho = config.initial;
    Workspace ws{Field(rho.grid), Field(rho.grid), Field(rho.grid)};

    Trajectory traj;
    traj.entropy_series.resize(config.monitors.size());
    traj.production_series.resize(config.monitors.size());

    auto record = [&](double t, long step) {
        traj.times.push_back(t);
        double mass = integrate(rho);
        traj.mass_series.push_back(mass);
        if (!std::isfinite(mass)) throw SolverAbort("mass became non-finite at t = " + std::to_string(t));
        for (std::size_t m = 0; m < config.monitors.size(); ++m) {
            EntropyReport rep = production(rho, steady, config.g, config.monitors[m]);
            if (!std::isfinite(rep.entropy) || !std::isfinite(rep.production_total))
                throw SolverAbort("monitor " + std::to_string(m) + " became non-finite at t = " +
                                  std::to_string(t));
            traj.entropy_series[m].push_back(rep.entropy);
            traj.production_series[m].push_back(rep);
        }
        if (config.store_snapshots) traj.snapshots.emplace_back(step, rho);
    };

    record(0.0, 0);

    double t = 0.0;
    long step = 0;
    while (t < config.t_end) {
        if (step >= config.max_steps)
            throw SolverAbort("step budget exhausted before reaching t_end");

        double dt = stable_dt(rho, steady, config.g, config.mode, config.cfl);
        compute_rhs(rho, steady, config.g, config.mode, ws);

        // A vanished rate bound means the state is an exact fixed point; the
        // trajectory is constant, so jump straight to the final time.
        if (dt <= 1e-12) {
            bool quiescent = true;
            for (double v : ws.out.values)
                if (v != 0.0) { quiescent = false; break; }
            if (quiescent) {
                ++step;
                t = config.t_end;
                record(t, step);
                break;
            }
        }

        const bool last = t + dt >= config.t_end;
        if (last) dt = config.t_end - t;

        double removed = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            double v = rho[i] + dt * ws.out[i];
            if (v < 0.0) {
                removed -= v;
                v = 0.0;
                ++traj.clamp_events;
            }
            rho[i] = v;
        }
        const double removed_mass = removed * rho.grid.cell_measure();
        traj.clamped_mass_total += removed_mass;

        ++step;
        t = last ? config.t_end : t + dt;

        const double current_mass = integrate(rho);
        if (removed_mass > 1e-6 * current_mass)
            throw SolverAbort("positivity clamp removed " + std::to_string(removed_mass) +
                              " mass in one step at t = " + std::to_string(t));

        if (last || step % config.snapshot_every == 0) record(t, step);
    }

    traj.steps = step;
    return traj;
}

std::string to_string(FlowMode mode) {
    switch (mode) {
        case FlowMode::full: return "full";
        case FlowMode::wasserstein: return "wasserstein";
        case FlowMode::hellinger: return "hellinger";
    }
    return "?";
}

FlowMode flow_mode_from_string(const std::string& name) {
    if (name == "full") return FlowMode::full;
    if (name == "wasserstein") return FlowMode::wasserstein;
    if (name == "hellinger") return FlowMode::hellinger;
    throw ConfigError("unknown flow mode: " + name);
}

}  // namespace hk
