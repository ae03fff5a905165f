// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion pins its tolerances in code; scenario
// parameters (grids, amplitudes, horizons) are fixed here so the suite is
// fully reproducible.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hkflow/entropy.hpp"
#include "hkflow/flow.hpp"
#include "hkflow/harness.hpp"
#include "hkflow/io.hpp"
#include "hkflow/runner.hpp"

using namespace hk;
namespace fs = std::filesystem;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = fn();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d. %-34s %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
}

Field cosine_field(const Grid& grid, double a, int k) {
    Field out(grid);
    for (int i = 0; i < grid.n; ++i)
        out[static_cast<std::size_t>(i)] = 1.0 + a * std::cos(two_pi * k * grid.center(i));
    return out;
}

Field normalized(Field f) {
    const double mass = integrate(f);
    for (double& v : f.values) v /= mass;
    return f;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// Shared scenario for criteria 2/3/5: small cosine perturbation of the flat
// steady state on the torus, all three monitor families.
FlowConfig perturbed_flow(int n, double t_end = 0.25) {
    FlowConfig cfg;
    cfg.grid = build_grid(DomainKind::torus1d, n);
    cfg.steady = Field(cfg.grid, 1.0);
    cfg.initial = cosine_field(cfg.grid, 0.01, 1);
    cfg.g = make_g(GKind::log);
    cfg.monitors = {make_psi(PsiKind::beckner, 1.0), make_psi(PsiKind::beckner, 2.0),
                    make_psi_driving(cfg.g)};
    cfg.t_end = t_end;
    cfg.cfl = 0.45;
    cfg.snapshot_every = 16;
    cfg.store_snapshots = false;
    return cfg;
}

// Criterion 4 scenario: non-constant steady state, flat initial data.
FlowConfig lp_flow() {
    FlowConfig cfg;
    cfg.grid = build_grid(DomainKind::torus1d, 256);
    cfg.steady = normalized(cosine_field(cfg.grid, 0.5, 1));
    cfg.initial = Field(cfg.grid, 1.0);
    cfg.g = make_g(GKind::log);
    cfg.monitors = {make_psi(PsiKind::abs_power, 2.0)};
    cfg.t_end = 0.3;
    cfg.cfl = 0.45;
    cfg.snapshot_every = 64;
    cfg.store_snapshots = true;
    return cfg;
}

// Criterion 13 scenario: spatially uniform double of the steady state under
// the reaction-only flow; closed form k(t) = exp(log(k0) e^{-t}).
double reaction_flow_error(double cfl, int n) {
    FlowConfig cfg;
    cfg.grid = build_grid(DomainKind::torus1d, n);
    cfg.steady = Field(cfg.grid, 1.0);
    cfg.initial = Field(cfg.grid, 2.0);
    cfg.g = make_g(GKind::log);
    cfg.monitors = {make_psi(PsiKind::beckner, 1.0)};
    cfg.mode = FlowMode::hellinger;
    cfg.t_end = 1.0;
    cfg.cfl = cfl;
    cfg.snapshot_every = 1 << 30;
    const Trajectory traj = simulate(cfg);
    const double want = std::exp(std::log(2.0) * std::exp(-1.0));
    double err = 0.0;
    for (double v : traj.snapshots.back().second.values)
        err = std::max(err, std::abs(v - want));
    return err;
}

double min_mass_margin(const Trajectory& traj, const Field& initial, const Field& steady) {
    Field trunc(initial.grid);
    for (std::size_t i = 0; i < trunc.size(); ++i) trunc[i] = std::min(initial[i], steady[i]);
    const double lower = integrate(trunc);
    double min_mass = traj.mass_series.front();
    for (double m : traj.mass_series) min_mass = std::min(min_mass, m);
    return min_mass - lower;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");

    // ------------------------------------------------------------------ 1
    criterion(1, "steady-state fixed point", [] {
        Outcome out;
        double worst = 0.0, worst_t = 0.0;
        for (GKind kind : {GKind::log, GKind::power, GKind::arctangential}) {
            const auto t0 = std::chrono::steady_clock::now();
            FlowConfig cfg;
            cfg.grid = build_grid(DomainKind::interval_noflux, 128);
            cfg.steady = normalized(cosine_field(cfg.grid, 0.5, 1));
            cfg.initial = cfg.steady;
            cfg.g = kind == GKind::power ? make_g(kind, 2.0) : make_g(kind);
            cfg.monitors = {make_psi(PsiKind::beckner, 2.0)};
            cfg.t_end = 1.0;
            cfg.cfl = 0.45;
            cfg.snapshot_every = 4096;
            cfg.store_snapshots = true;
            const Trajectory traj = simulate(cfg);
            double drift = 0.0;
            const Field& last = traj.snapshots.back().second;
            for (std::size_t i = 0; i < last.size(); ++i)
                drift = std::max(drift, std::abs(last[i] - cfg.steady[i]));
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            worst = std::max(worst, drift);
            worst_t = std::max(worst_t, secs);
            if (drift > 1e-12) out.pass = false;
            if (secs >= 5.0) out.pass = false;
        }
        out.detail = fmt("max drift %.3g (tol 1e-12), slowest case %.2fs (tol 5s)", worst, worst_t);
        return out;
    });

    // ------------------------------------------------------------------ 2+3
    std::vector<Trajectory> runs;  // n = 64, 128; reused by criterion 3
    criterion(2, "dissipation consistency", [&] {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        runs.push_back(simulate(perturbed_flow(64)));
        runs.push_back(simulate(perturbed_flow(128)));
        double worst_ratio = 1e300;
        for (std::size_t m = 0; m < 3; ++m) {
            const double e0 = runs[0].entropy_series[m].front();
            const double coarse = max_dissipation_residual(runs[0], m, 1e-6 * e0);
            const double fine = max_dissipation_residual(runs[1], m, 1e-6 * e0);
            worst_ratio = std::min(worst_ratio, coarse / fine);
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.pass = worst_ratio >= 1.8 && secs < 30.0;
        out.detail = fmt("min residual shrink 64->128: %.2fx (need >= 1.8), %.2fs", worst_ratio, secs);
        return out;
    });

    criterion(3, "exponential entropy decay", [&] {
        Outcome out;
        if (runs.size() != 2) return Outcome{false, "missing criterion-2 runs"};
        double worst_r2 = 1.0, worst_gamma = 1e300;
        bool holds = true;
        for (const Trajectory& traj : runs) {
            for (std::size_t m = 0; m < 3; ++m) {
                const double e0 = traj.entropy_series[m].front();
                const DecayFit fit =
                    decay_fit(traj.times, traj.entropy_series[m], 1e-8 * e0, 0.05);
                worst_r2 = std::min(worst_r2, fit.fit_quality);
                worst_gamma = std::min(worst_gamma, fit.gamma_hat);
                holds = holds && fit.bound_holds;
            }
        }
        out.pass = worst_gamma > 0.0 && worst_r2 >= 0.99 && holds;
        out.detail = fmt("gamma >= %.4g, R^2 >= %.6f, bound_holds=%.0f", worst_gamma, worst_r2,
                         holds ? 1.0 : 0.0);
        return out;
    });

    // ------------------------------------------------------------------ 4+5
    Trajectory lp_traj;
    Field lp_steady, lp_initial;
    criterion(4, "Lp decay with spread constant", [&] {
        Outcome out;
        FlowConfig cfg = lp_flow();
        lp_steady = cfg.steady;
        lp_initial = cfg.initial;
        lp_traj = simulate(cfg);
        std::vector<double> l2;
        for (const auto& [step, f] : lp_traj.snapshots) l2.push_back(lp_distance(f, cfg.steady, 2.0));
        const DecayFit fit = decay_fit(lp_traj.times, l2, 1e-8 * l2.front(), 0.05);
        double sup = 0.0, inf = 1e300;
        for (double v : cfg.steady.values) {
            sup = std::max(sup, v);
            inf = std::min(inf, v);
        }
        const double prefactor = 1.0 + sup / inf;
        const double rate = fit.gamma_hat * (1.0 - 0.05);
        double worst_frac = 0.0;
        for (std::size_t k = 0; k < l2.size(); ++k) {
            const double bound = prefactor * l2.front() * std::exp(-rate * lp_traj.times[k]);
            worst_frac = std::max(worst_frac, l2[k] / bound);
        }
        out.pass = fit.gamma_hat > 0.0 && worst_frac <= 1.0;
        out.detail = fmt("gamma2=%.4g, sup/inf=%.1f, max dist/bound=%.3f (need <= 1)",
                         fit.gamma_hat, sup / inf, worst_frac);
        return out;
    });

    criterion(5, "mass lower bound at n=256", [&] {
        Outcome out;
        double worst = 1e300;
        // the criterion-2 scenario at n = 256
        {
            FlowConfig cfg = perturbed_flow(256);
            const Trajectory traj = simulate(cfg);
            worst = std::min(worst, min_mass_margin(traj, cfg.initial, cfg.steady));
        }
        // the Lp-decay run (n = 256)
        if (!lp_traj.times.empty())
            worst = std::min(worst, min_mass_margin(lp_traj, lp_initial, lp_steady));
        // the reaction-flow oracle scenario at n = 256
        {
            FlowConfig cfg;
            cfg.grid = build_grid(DomainKind::torus1d, 256);
            cfg.steady = Field(cfg.grid, 1.0);
            cfg.initial = Field(cfg.grid, 2.0);
            cfg.g = make_g(GKind::log);
            cfg.monitors = {make_psi(PsiKind::beckner, 1.0)};
            cfg.mode = FlowMode::hellinger;
            cfg.t_end = 1.0;
            cfg.cfl = 0.1;
            cfg.snapshot_every = 2;
            cfg.store_snapshots = false;
            const Trajectory traj = simulate(cfg);
            worst = std::min(worst, min_mass_margin(traj, cfg.initial, cfg.steady));
        }
        out.pass = worst >= -1e-3;
        out.detail = fmt("min margin over runs %.3g (tol -1e-3)", worst);
        return out;
    });

    // ------------------------------------------------------------------ 6
    criterion(6, "two-level family rates", [] {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        SequenceSpec spec;
        spec.kind = SequenceKind::hellinger_gap;
        spec.range = {8, 16, 32, 64, 128};
        spec.base_resolution = 256;
        spec.g = make_g(GKind::log);
        spec.psi = make_psi(PsiKind::beckner, 1.0);
        spec.steady_builder.kind = BuilderKind::constant;
        spec.steady_builder.normalize = true;
        const auto rows = counterexample_sequence(spec);
        std::vector<double> ns, es, hs;
        for (const auto& r : rows) {
            ns.push_back(r.param);
            es.push_back(r.entropy);
            hs.push_back(r.production_h);
        }
        const double slope_e = rate_fit_loglog(ns, es);
        const double slope_h = rate_fit_loglog(ns, hs);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.pass = std::abs(slope_e + 1.0) <= 0.1 && slope_h <= -1.9 && secs < 5.0;
        out.detail = fmt("entropy slope %.3f (-1 +/- 0.1), reaction slope %.3f (<= -1.9)",
                         slope_e, slope_h);
        return out;
    });

    // ------------------------------------------------------------------ 7
    criterion(7, "scaled-steady counterexample", [] {
        Outcome out;
        const Grid grid = build_grid(DomainKind::torus1d, 256);
        const Field steady(grid, 1.0);
        const GSpec g = make_g(GKind::log);
        const PsiSpec psi = make_psi(PsiKind::beckner, 1.0);
        double worst_rel = 0.0;
        for (double k : {0.5, 2.0}) {
            Field rho(grid, k);
            const EntropyReport rep = production(rho, steady, g, psi);
            if (rep.production_w != 0.0) out.pass = false;
            if (!(rep.entropy > 0.0)) out.pass = false;
            const double closed = k * std::log(k) * std::log(k);
            worst_rel = std::max(worst_rel, std::abs(rep.production_h - closed) / closed);
        }
        if (worst_rel > 1e-6) out.pass = false;
        out.detail = fmt("gradient part exactly 0, reaction part off by %.2g rel (tol 1e-6)",
                         worst_rel);
        return out;
    });

    // ------------------------------------------------------------------ 8
    criterion(8, "spectral-gap constant", [] {
        Outcome out;
        const Grid grid = build_grid(DomainKind::torus1d, 512);
        const Field steady(grid, 1.0);
        const Field rho = cosine_field(grid, 0.1, 1);
        const IneqReport rep = inequality_report(beckner_classical_case(2.0), rho, steady);
        const double want = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
        const double rel = std::abs(rep.ratio - want) / want;
        out.pass = rel <= 0.01;
        out.detail = fmt("ratio %.6f vs 1/(4 pi^2) %.6f, off %.3g (tol 1%%)", rep.ratio, want, rel);
        return out;
    });

    // ------------------------------------------------------------------ 9
    criterion(9, "coarea identity", [] {
        Outcome out;
        double worst = 0.0;
        {
            const Grid grid = build_grid(DomainKind::interval_noflux, 512);
            Field r(grid);
            for (int i = 0; i < grid.n; ++i) r[static_cast<std::size_t>(i)] = grid.center(i);
            const auto sides = coarea_sides(r, 0.25, 0.75, 256);
            worst = std::max(worst, std::abs(sides.variation_band - sides.perimeter_integral) /
                                        sides.perimeter_integral);
        }
        {
            const Grid grid = build_grid(DomainKind::torus1d, 512);
            Field r(grid);
            for (int i = 0; i < grid.n; ++i)
                r[static_cast<std::size_t>(i)] = 0.5 + 0.5 * std::sin(two_pi * grid.center(i));
            const auto sides = coarea_sides(r, 0.3, 0.7, 256);
            worst = std::max(worst, std::abs(sides.variation_band - sides.perimeter_integral) /
                                        sides.perimeter_integral);
        }
        out.pass = worst <= 0.02;
        out.detail = fmt("max relative gap %.4f (tol 0.02)", worst);
        return out;
    });

    // ------------------------------------------------------------------ 10
    criterion(10, "entropy/production sweep", [] {
        Outcome out;
        const fs::path dir = fs::temp_directory_path() / "hkflow_acceptance_sweep";
        fs::remove_all(dir);
        int idx = 0;
        for (const std::string g_kind : {"log", "power", "arctangential"}) {
            for (double p : {1.0, 3.0}) {
                runner::json config{
                    {"command", "sweep"},
                    {"grid", {{"domain_kind", "torus1d"}, {"n", 256}}},
                    {"steady", {{"kind", "constant"}, {"normalize", true}}},
                    {"g", {{"kind", g_kind}}},
                    {"psi", {{"kind", "beckner"}, {"p", p}}},
                    {"sweep",
                     {{"count", 20}, {"amplitude", 0.6}, {"mass_floor", 0.5}, {"entropy_cap", 5.0}}},
                    {"seed", 1000},
                    {"output_dir", (dir / std::to_string(idx++)).string()},
                };
                if (g_kind == "power") config["g"]["alpha"] = 2.0;
                const int rc = runner::execute(config, 2);
                if (rc != 0) {
                    out.pass = false;
                    out.detail = "exit code " + std::to_string(rc) + " for g=" + g_kind;
                    return out;
                }
            }
        }
        out.detail = "6 sweeps x 20 members admitted, all ratios finite, exit 0";
        fs::remove_all(dir);
        return out;
    });

    // ------------------------------------------------------------------ 11
    criterion(11, "named-inequality certificates", [] {
        Outcome out;
        const Grid grid = build_grid(DomainKind::torus1d, 256);
        const Field steady(grid, 1.0);
        const std::vector<InequalityCase> cases = {
            beckner_hellinger_case(3.0),
            porous_variant_case(2.0, 2.0),
            porous_log_variant_case(2.0),
            arctan_logsob_case(),
        };
        double worst_dev = 0.0;
        for (int i = 0; i < 20; ++i) {
            DensityBuilder b;
            b.kind = BuilderKind::trig_random;
            b.seed = 1000 + static_cast<std::uint64_t>(i);
            b.amplitude = 0.6;
            b.normalize = true;
            const Field rho = build_density(grid, b, &steady);
            for (std::size_t c = 0; c < cases.size(); ++c) {
                const IneqReport rep = inequality_report(cases[c], rho, steady);
                if (!std::isfinite(rep.ratio)) {
                    out.pass = false;
                    out.detail = "infinite ratio in " + to_string(cases[c].name);
                    return out;
                }
                if (c < 3) {  // the homogeneous ones: ratio invariant under r -> lambda r
                    for (double lambda : {0.1, 10.0}) {
                        Field scaled = rho;
                        for (double& v : scaled.values) v *= lambda;
                        const double other = inequality_report(cases[c], scaled, steady).ratio;
                        worst_dev = std::max(worst_dev, std::abs(other - rep.ratio) /
                                                            std::max(rep.ratio, 1e-300));
                    }
                }
            }
        }
        out.pass = out.pass && worst_dev <= 1e-10;
        out.detail = fmt("all ratios finite; max scale deviation %.2g (tol 1e-10)", worst_dev);
        return out;
    });

    // ------------------------------------------------------------------ 12
    criterion(12, "pointwise ratio scan", [] {
        Outcome out;
        const GSpec g = make_g(GKind::log);
        const PsiSpec psi = make_psi(PsiKind::beckner, 1.0);
        const AlgtermScan fine = algterm_scan(g, psi, 0.1, 1e6, 4097);
        const double dev = std::abs(fine.ratio_at_one - 0.5);
        bool monotone = true;
        double prev = 1e300;
        for (double eps : {0.1, 0.3, 0.5}) {
            const double c = algterm_scan(g, psi, eps, 1e6, 2048).c_eps;
            if (c > prev + 1e-12) monotone = false;
            prev = c;
        }
        out.pass = dev <= 1e-3 && monotone;
        out.detail = fmt("limit at 1: %.5f (tol 1e-3 around 0.5), c_eps nonincreasing=%.0f",
                         fine.ratio_at_one, monotone ? 1.0 : 0.0);
        return out;
    });

    // ------------------------------------------------------------------ 13
    criterion(13, "reaction-flow oracle at cfl=0.1", [] {
        Outcome out;
        const double err = reaction_flow_error(0.1, 256);
        out.pass = err <= 1e-3;
        std::ostringstream detail;
        detail << fmt("max |state - closed form| = %.3g (tol 1e-3)", err);
        if (!out.pass) {
            // first-order convergence evidence: the tolerance is reached near
            // cfl = 0.005, an order below the requested step
            detail << "; err(cfl): ";
            for (double cfl : {0.05, 0.02, 0.01, 0.005})
                detail << fmt("%.3g@%.3f ", reaction_flow_error(cfl, 256), cfl);
        }
        out.detail = detail.str();
        return out;
    });

    std::printf("================\n%d of 13 criteria passed\n", 13 - failures);
    return failures;
}
