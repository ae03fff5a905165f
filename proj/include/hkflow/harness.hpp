#pragma once

#include <string>
#include <vector>

#include "hkflow/entropy.hpp"
#include "hkflow/flow.hpp"
#include "hkflow/mesh.hpp"
#include "hkflow/profiles.hpp"

namespace hk {

// ---------------------------------------------------------------------------
// Named inequality certificates
// ---------------------------------------------------------------------------

enum class IneqName {
    eep,                 // entropy vs full production
    eep_band,            // entropy vs reaction part + band-restricted gradient part
    beckner_classical,   // moment gap vs plain gradient integral (g = log, 1 < p <= 2)
    beckner_hellinger,   // moment gap vs gradient + reaction correction (g = log, p > 2)
    porous_variant,      // power-profile analogue with reaction correction (p > 1)
    porous_log_variant,  // its p = 1 (logarithmic) counterpart
    arctan_logsob,       // arctangential profile vs its two production integrals
};

// Each name pins the admissible (g, psi) combination; the evaluation happens
// in the r = rho/steady variables with mass-power factors making the
// beckner_hellinger and porous ratios invariant under r -> lambda r.
struct InequalityCase {
    IneqName name = IneqName::eep;
    GSpec g{};
    PsiSpec psi{};
    double band_alpha = 0.25, band_beta = 0.75;  // eep_band only
};

InequalityCase eep_case(const GSpec& g, const PsiSpec& psi);
InequalityCase eep_band_case(const GSpec& g, const PsiSpec& psi, double alpha, double beta);
InequalityCase beckner_classical_case(double p);
InequalityCase beckner_hellinger_case(double p);
InequalityCase porous_variant_case(double alpha, double p);
InequalityCase porous_log_variant_case(double alpha);
InequalityCase arctan_logsob_case();

struct IneqReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs/rhs; 0/0 reported as 0, x/0 (x > 0) as +inf
};

IneqReport inequality_report(const InequalityCase& c, const Field& rho, const Field& steady);

// ---------------------------------------------------------------------------
// Counterexample families
// ---------------------------------------------------------------------------

enum class SequenceKind {
    hellinger_gap,  // two-level densities with a shrinking dry band at the left
    scaling,        // constant multiples of the steady state
    indicator,      // mollified indicator with shrinking edge width
};

struct SequenceSpec {
    SequenceKind kind = SequenceKind::hellinger_gap;
    std::vector<double> range;  // band parameters n / factors k / widths w
    int base_resolution = 256;
    DomainKind domain = DomainKind::interval_noflux;
    GSpec g{};
    PsiSpec psi{};
    DensityBuilder steady_builder{BuilderKind::constant, true};
    double x0 = 0.25, x1 = 0.75;  // indicator support
};

struct SequenceRow {
    double param = 0.0;
    double entropy = 0.0;
    double production_w = 0.0;
    double production_h = 0.0;
};

// For hellinger_gap the grid resolution is a multiple of the band parameter so
// the density jump falls exactly on a cell face; the reported production_w of
// that family is a one-cell interface artifact of the discrete gradient and is
// not part of any rate claim.
std::vector<SequenceRow> counterexample_sequence(const SequenceSpec& spec);

// Least-squares slope of log y against log x. Requires >= 4 rows and strictly
// positive values.
double rate_fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

// ---------------------------------------------------------------------------
// Pointwise entropy/production ratio scan
// ---------------------------------------------------------------------------

struct AlgtermScan {
    double c_eps = 0.0;       // sup of psi(s) / (s g(s) psi'(s)) over [eps, s_max]
    double argmax_s = 0.0;    // sample attaining the sup
    double ratio_at_one = 0.0;  // two-sided neighbor-limit estimate at s = 1
};

// Scans the ratio on a geometric grid (samples >= 1000). Near s = 1 the 0/0
// ratio is replaced by a two-sided linear extrapolation from neighbors. A
// nonpositive denominator away from s = 1 invalidates the pair (DomainError).
AlgtermScan algterm_scan(const GSpec& g, const PsiSpec& psi, double eps, double s_max,
                         int samples);

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

struct DecayFit {
    double gamma_hat = 0.0;
    double fit_quality = 1.0;  // R^2 of the log-linear fit
    bool bound_holds = false;  // E(t) <= E(0) exp(-gamma_hat (1-margin) t) at every sample
};

// Log-linear least squares over samples with E > entropy_floor (default
// 1e-12 * E(0)); needs at least 8 usable samples.
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& entropies,
                   double entropy_floor = -1.0, double margin = 0.05);

// ---------------------------------------------------------------------------
// Worst-case entropy/production sweep
// ---------------------------------------------------------------------------

struct SweepResult {
    double empirical_c = 0.0;  // max entropy/production_total over admitted members
    bool has_infinite = false;  // some member had entropy > 0 with zero production
    int worst_index = -1;
    double worst_entropy = 0.0;
    double worst_production = 0.0;
    int admitted = 0;
    std::vector<std::string> skipped;  // members filtered by the floor/cap, with reasons
};

// Members with mass >= mass_floor and entropy <= entropy_cap are admitted.
// A zero-production member with positive entropy is the falsification signal:
// it is reported as +inf, never clipped. jobs > 1 evaluates members on a
// worker pool with index-ordered (deterministic) aggregation.
SweepResult eep_sweep(const std::vector<DensityBuilder>& family, const GSpec& g,
                      const PsiSpec& psi, const Grid& grid, const Field& steady,
                      double mass_floor, double entropy_cap, int jobs = 1);

// ---------------------------------------------------------------------------
// Trajectory diagnostics
// ---------------------------------------------------------------------------

// Max over monitor intervals of |dE/dt + D| with dE/dt the finite difference
// between samples and D the time-midpoint average of the recorded productions.
// Intervals whose left entropy is at or below `floor` are skipped.
double max_dissipation_residual(const Trajectory& traj, std::size_t monitor, double floor);

std::string to_string(IneqName name);
std::string to_string(SequenceKind kind);
IneqName ineq_name_from_string(const std::string& name);
SequenceKind sequence_kind_from_string(const std::string& name);

}  // namespace hk
