#include "hkflow/entropy.hpp"

#include <cmath>
#include <limits>

namespace hk {

namespace {

void check_densities(const Field& rho, const Field& steady) {
    require_same_grid(rho, steady);
    for (std::size_t i = 0; i < steady.size(); ++i) {
        if (!(steady[i] > 0.0))
            throw DomainError("steady density must be strictly positive in every cell");
        if (!(rho[i] >= 0.0)) throw DomainError("density must be nonnegative");
    }
}

}  // namespace

double relative_entropy(const Field& rho, const Field& steady, const PsiSpec& psi) {
    check_densities(rho, steady);
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) acc += psi.psi(rho[i] / steady[i]) * steady[i];
    return acc * rho.grid.cell_measure();
}

double hellinger_integrand(const GSpec& g, const PsiSpec& psi, double s) {
    if (s == 0.0) {
        // Continuous extension: lim_{s->0+} sg(s) psi'(s). With psi'(0) finite
        // the limit is 0; against a logarithmic divergence of psi' the decay
        // of sg still wins. The one exception is a power profile with
        // alpha < 1 paired with a driving entropy of power type, where
        // sg ~ s^alpha and psi' ~ s^(beta-1) balance each other.
        if (g.kind == GKind::power && g.alpha < 1.0 && psi.kind == PsiKind::driving &&
            psi.base.kind == GKind::power && psi.base.alpha < 1.0) {
            const double a = g.alpha, b = psi.base.alpha;
            if (a + b > 1.0) return 0.0;
            if (a + b == 1.0) return 1.0 / ((a - 1.0) * (b - 1.0));
            return std::numeric_limits<double>::infinity();
        }
        return 0.0;
    }
    return g.sg(s) * psi.prime(s);
}

EntropyReport production(const Field& rho, const Field& steady, const GSpec& g,
                         const PsiSpec& psi) {
    check_densities(rho, steady);
    const double mu = rho.grid.cell_measure();

    Field r(rho.grid);
    for (std::size_t i = 0; i < rho.size(); ++i) r[i] = rho[i] / steady[i];
    const Field grad2 = gradient_sq(r);

    double entropy_acc = 0.0, w_acc = 0.0, h_acc = 0.0, mass_acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double s = r[i];
        entropy_acc += psi.psi(s) * steady[i];
        h_acc += hellinger_integrand(g, psi, s) * steady[i];
        if (s > 0.0) w_acc += s * g.gprime(s) * psi.pprime(s) * grad2[i] * steady[i];
        mass_acc += rho[i];
    }

    EntropyReport out;
    out.entropy = entropy_acc * mu;
    out.production_w = w_acc * mu;
    out.production_h = h_acc * mu;
    out.production_total = out.production_w + out.production_h;
    out.mass = mass_acc * mu;
    return out;
}

double production_band(const Field& rho, const Field& steady, const GSpec& g,
                       const PsiSpec& psi, double alpha, double beta) {
    if (!(0.0 < alpha && alpha < beta))
        throw DomainError("production_band requires 0 < alpha < beta");
    check_densities(rho, steady);

    Field r(rho.grid);
    for (std::size_t i = 0; i < rho.size(); ++i) r[i] = rho[i] / steady[i];
    const Field grad2 = gradient_sq(r);

    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double s = r[i];
        if (alpha < s && s < beta) acc += s * g.gprime(s) * psi.pprime(s) * grad2[i] * steady[i];
    }
    return acc * rho.grid.cell_measure();
}

}  // namespace hk
