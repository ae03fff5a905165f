#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hkflow/errors.hpp"

namespace hk {

// ---------------------------------------------------------------------------
// Reaction profiles g
// ---------------------------------------------------------------------------

enum class GKind { log, power, arctangential };

// A reaction/fitness profile g on (0, inf) with g(1) = 0 and g' > 0, together
// with the derived quantities the solver and the entropy functionals consume:
//   G(s)  = integral_0^s xi g'(xi) dxi   (nonlinear diffusion potential)
//   sg(s) = continuous extension of s*g(s) to s = 0 (reaction intensity)
// All evaluations are pure; a GSpec is immutable after construction.
struct GSpec {
    GKind kind = GKind::log;
    double alpha = 0.0;  // power kind only; alpha > 0, alpha != 1

    double g(double s) const;        // s > 0
    double gprime(double s) const;   // s > 0
    double G(double s) const;        // s >= 0, G(0) = 0
    double sg(double s) const;       // s >= 0, sg(0) = 0
    double sgprime(double s) const;  // G'(s) = s g'(s)
    double dsg(double s) const;      // d/ds [s g(s)], s > 0
};

GSpec make_g(GKind kind, double alpha = 0.0);

struct GValues {
    std::optional<double> g;       // absent at s = 0
    std::optional<double> gprime;  // absent at s = 0
    double G = 0.0;
    double sg = 0.0;
};

// Rejects negative s. At s = 0 the singular members are reported as absent
// while G and sg take their finite limit values.
GValues eval_g(const GSpec& spec, double s);

// ---------------------------------------------------------------------------
// Entropy densities psi
// ---------------------------------------------------------------------------

enum class PsiKind { beckner, abs_power, driving };

// A convex entropy density with psi(1) = psi'(1) = 0.
//   beckner:   (s^p - ps + p - 1)/(p(p-1)) for p > 1, s log s - s + 1 for p = 1
//   abs_power: |s - 1|^p, p >= 2
//   driving:   integral_1^s g, evaluated through sg(s) - G(s) + G(1)
struct PsiSpec {
    PsiKind kind = PsiKind::beckner;
    double p = 1.0;      // beckner / abs_power parameter
    GSpec base{};        // driving kind only
    double base_G1 = 0;  // cached G(1) of the base profile

    double psi(double s) const;     // s >= 0
    double prime(double s) const;   // s > 0
    double pprime(double s) const;  // s > 0

    // Whether psi'(s) stays finite as s -> 0+; when it does, its limit.
    bool prime_finite_at_zero() const;
    double prime_at_zero() const;
};

PsiSpec make_psi(PsiKind kind, double p = 1.0);
PsiSpec make_psi_driving(const GSpec& base);

struct PsiValues {
    double psi = 0.0;
    std::optional<double> psiprime;        // absent at s = 0 when the limit is -inf
    std::optional<double> psidoubleprime;  // absent at s = 0
};

PsiValues eval_psi(const PsiSpec& spec, double s);

// ---------------------------------------------------------------------------
// Assumption validation
// ---------------------------------------------------------------------------

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double worst_s = 0.0;      // sample point witnessing the worst margin
    double worst_value = 0.0;  // the margin/value observed there
    std::string note;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
};

// Geometric grid of `count` points covering [s_min, s_max].
std::vector<double> geometric_samples(double s_min, double s_max, int count);

// Default sampling grid for validate_pair: [1e-6, 1e6], 1201 points.
std::vector<double> default_validation_sample();

// Numerically screens a (g, psi) pair against the admissibility conditions
// (g(1) = 0, monotonicity, continuity of sg at 0, convexity and positivity of
// psi, unbounded psi', sign coincidence, local boundedness of |g| + s|g'|).
// Failures become report entries, never exceptions. The sample must cover
// [1e-6, 1e6] with at least 1000 points.
ValidationReport validate_pair(const GSpec& g, const PsiSpec& psi,
                               const std::vector<double>& sample);

// Name <-> enum helpers shared by the JSON layer.
std::string to_string(GKind kind);
std::string to_string(PsiKind kind);
GKind g_kind_from_string(const std::string& name);
PsiKind psi_kind_from_string(const std::string& name);

}  // namespace hk
