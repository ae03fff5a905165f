#pragma once

#include "hkflow/mesh.hpp"
#include "hkflow/profiles.hpp"

namespace hk {

// Relative entropy of rho against the steady density plus the split of its
// production into the gradient (Wasserstein) and reaction (Hellinger) parts.
// production_total is defined as production_w + production_h with both parts
// accumulated in cell order, so the additivity is bit-exact.
struct EntropyReport {
    double entropy = 0.0;
    double production_total = 0.0;
    double production_w = 0.0;
    double production_h = 0.0;
    double mass = 0.0;
};

// integral psi(rho/steady) d(steady). Requires steady > 0 in every cell and
// rho >= 0; cells with rho = 0 contribute psi(0).
double relative_entropy(const Field& rho, const Field& steady, const PsiSpec& psi);

// Reaction-part integrand sg(s) psi'(s) through its continuous extension at
// s = 0: the limit of s g(s) psi'(s), which is 0 for every pair except a
// power profile with alpha < 1 against a driving entropy of power type with
// alpha + beta <= 1, where the limit is 1/((alpha-1)(beta-1)) or +inf.
double hellinger_integrand(const GSpec& g, const PsiSpec& psi, double s);

// Entropy, mass and the three productions in one pass. The gradient part
// sums r g'(r) psi''(r) |grad r|^2 d(steady) over cells with r > 0 only.
EntropyReport production(const Field& rho, const Field& steady, const GSpec& g,
                         const PsiSpec& psi);

// Gradient-part production restricted to cells with alpha < r < beta.
double production_band(const Field& rho, const Field& steady, const GSpec& g,
                       const PsiSpec& psi, double alpha, double beta);

}  // namespace hk
