#include "hkflow/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hk {

namespace {

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// GSpec
// ---------------------------------------------------------------------------

double GSpec::g(double s) const {
    switch (kind) {
        case GKind::log:
            return std::log(s);
        case GKind::power:
            return (std::pow(s, alpha - 1.0) - 1.0) / (alpha - 1.0);
        case GKind::arctangential:
            return 0.5 * std::log(2.0 * s * s / (1.0 + s * s));
    }
    return 0.0;
}

double GSpec::gprime(double s) const {
    switch (kind) {
        case GKind::log:
            return 1.0 / s;
        case GKind::power:
            return std::pow(s, alpha - 2.0);
        case GKind::arctangential:
            return 1.0 / (s * (1.0 + s * s));
    }
    return 0.0;
}

double GSpec::G(double s) const {
    switch (kind) {
        case GKind::log:
            return s;
        case GKind::power:
            return std::pow(s, alpha) / alpha;
        case GKind::arctangential:
            return std::atan(s);
    }
    return 0.0;
}

double GSpec::sg(double s) const {
    if (s == 0.0) return 0.0;
    switch (kind) {
        case GKind::log:
            return s * std::log(s);
        case GKind::power:
            // s*(s^(a-1) - 1)/(a-1) written through s^a so the s -> 0 limit
            // is reached without an intermediate infinity when alpha < 1.
            return (std::pow(s, alpha) - s) / (alpha - 1.0);
        case GKind::arctangential:
            return s * g(s);
    }
    return 0.0;
}

double GSpec::sgprime(double s) const {
    switch (kind) {
        case GKind::log:
            return 1.0;
        case GKind::power:
            return std::pow(s, alpha - 1.0);
        case GKind::arctangential:
            return 1.0 / (1.0 + s * s);
    }
    return 0.0;
}

double GSpec::dsg(double s) const {
    switch (kind) {
        case GKind::log:
            return std::log(s) + 1.0;
        case GKind::power:
            return (alpha * std::pow(s, alpha - 1.0) - 1.0) / (alpha - 1.0);
        case GKind::arctangential:
            return g(s) + 1.0 / (1.0 + s * s);
    }
    return 0.0;
}

GSpec make_g(GKind kind, double alpha) {
    if (kind == GKind::power) {
        if (!(alpha > 0.0))
            throw DomainError("power profile requires alpha > 0, got " + std::to_string(alpha));
        if (alpha == 1.0)
            throw DomainError("power profile requires alpha != 1");
        return GSpec{kind, alpha};
    }
    return GSpec{kind, 0.0};
}

GValues eval_g(const GSpec& spec, double s) {
    if (s < 0.0) throw DomainError("profile evaluation requires s >= 0");
    GValues out;
    out.G = spec.G(s);
    out.sg = spec.sg(s);
    if (s > 0.0) {
        out.g = spec.g(s);
        out.gprime = spec.gprime(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// PsiSpec
// ---------------------------------------------------------------------------

double PsiSpec::psi(double s) const {
    switch (kind) {
        case PsiKind::beckner:
            if (p == 1.0) {
                if (s == 0.0) return 1.0;
                return s * std::log(s) - (s - 1.0);
            }
            return ((std::pow(s, p) - 1.0) - p * (s - 1.0)) / (p * (p - 1.0));
        case PsiKind::abs_power:
            return std::pow(std::abs(s - 1.0), p);
        case PsiKind::driving:
            return base.sg(s) - base.G(s) + base_G1;
    }
    return 0.0;
}

double PsiSpec::prime(double s) const {
    switch (kind) {
        case PsiKind::beckner:
            if (p == 1.0) return std::log(s);
            return (std::pow(s, p - 1.0) - 1.0) / (p - 1.0);
        case PsiKind::abs_power:
            return p * std::pow(std::abs(s - 1.0), p - 1.0) * sign_of(s - 1.0);
        case PsiKind::driving:
            return base.g(s);
    }
    return 0.0;
}

double PsiSpec::pprime(double s) const {
    switch (kind) {
        case PsiKind::beckner:
            if (p == 1.0) return 1.0 / s;
            return std::pow(s, p - 2.0);
        case PsiKind::abs_power:
            return p * (p - 1.0) * std::pow(std::abs(s - 1.0), p - 2.0);
        case PsiKind::driving:
            return base.gprime(s);
    }
    return 0.0;
}

bool PsiSpec::prime_finite_at_zero() const {
    switch (kind) {
        case PsiKind::beckner:
            return p > 1.0;
        case PsiKind::abs_power:
            return true;
        case PsiKind::driving:
            return base.kind == GKind::power && base.alpha > 1.0;
    }
    return false;
}

double PsiSpec::prime_at_zero() const {
    switch (kind) {
        case PsiKind::beckner:
            return -1.0 / (p - 1.0);
        case PsiKind::abs_power:
            return -p;
        case PsiKind::driving:
            return -1.0 / (base.alpha - 1.0);
    }
    return 0.0;
}

PsiSpec make_psi(PsiKind kind, double p) {
    PsiSpec out;
    out.kind = kind;
    out.p = p;
    switch (kind) {
        case PsiKind::beckner:
            if (!(p >= 1.0))
                throw DomainError("beckner entropy requires p >= 1, got " + std::to_string(p));
            break;
        case PsiKind::abs_power:
            if (!(p >= 2.0))
                throw DomainError("abs_power entropy requires p >= 2, got " + std::to_string(p));
            break;
        case PsiKind::driving:
            throw DomainError("driving entropy requires a base profile; use make_psi_driving");
    }
    return out;
}

PsiSpec make_psi_driving(const GSpec& base) {
    PsiSpec out;
    out.kind = PsiKind::driving;
    out.p = 0.0;
    out.base = base;
    out.base_G1 = base.G(1.0);
    return out;
}

PsiValues eval_psi(const PsiSpec& spec, double s) {
    if (s < 0.0) throw DomainError("entropy evaluation requires s >= 0");
    PsiValues out;
    out.psi = spec.psi(s);
    if (s > 0.0) {
        out.psiprime = spec.prime(s);
        out.psidoubleprime = spec.pprime(s);
    } else if (spec.prime_finite_at_zero()) {
        out.psiprime = spec.prime_at_zero();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::vector<double> geometric_samples(double s_min, double s_max, int count) {
    if (!(s_min > 0.0) || !(s_max > s_min) || count < 2)
        throw DomainError("geometric_samples requires 0 < s_min < s_max and count >= 2");
    std::vector<double> out(static_cast<std::size_t>(count));
    const double log_ratio = std::log(s_max / s_min);
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] =
            s_min * std::exp(log_ratio * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = s_min;
    out.back() = s_max;
    return out;
}

std::vector<double> default_validation_sample() { return geometric_samples(1e-6, 1e6, 1201); }

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
}

ValidationReport validate_pair(const GSpec& g, const PsiSpec& psi,
                               const std::vector<double>& sample) {
    if (sample.size() < 1000 || !(sample.front() <= 1e-6) || !(sample.back() >= 1e6))
        throw DomainError("validation sample must cover [1e-6, 1e6] with >= 1000 points");

    ValidationReport report;
    auto add = [&](std::string name, bool pass, double worst_s, double worst_value,
                   std::string note = {}) {
        report.checks.push_back({std::move(name), pass, worst_s, worst_value, std::move(note)});
    };

    // g(1) = 0
    {
        const double v = g.g(1.0);
        add("g_vanishes_at_one", std::abs(v) <= 1e-12, 1.0, v);
    }

    // g' > 0 on the sample
    {
        double worst = std::numeric_limits<double>::infinity();
        double worst_s = sample.front();
        for (double s : sample) {
            const double gp = g.gprime(s);
            if (gp < worst) {
                worst = gp;
                worst_s = s;
            }
        }
        add("g_strictly_increasing", worst > 0.0 && std::isfinite(worst), worst_s, worst);
    }

    // s g(s) continuous at 0: |sg| shrinks monotonically along the lowest
    // decades and the extension value at 0 is 0.
    {
        bool pass = g.sg(0.0) == 0.0;
        double worst_s = 0.0, worst_v = 0.0;
        double prev = std::abs(g.sg(sample.front()));
        for (std::size_t i = 1; i < sample.size() && sample[i] <= 1e-3; ++i) {
            const double cur = std::abs(g.sg(sample[i]));
            if (prev > cur + 1e-12) {  // |sg| must not grow as s decreases
                pass = false;
                if (prev - cur > worst_v) {
                    worst_v = prev - cur;
                    worst_s = sample[i];
                }
            }
            prev = cur;
        }
        add("sg_continuous_at_zero", pass, worst_s, worst_v);
    }

    // psi(1) = 0 and psi > 0 off 1
    {
        const double at_one = psi.psi(1.0);
        bool pass = std::abs(at_one) <= 1e-12;
        double worst_s = 1.0, worst_v = at_one;
        for (double s : sample) {
            if (std::abs(s - 1.0) <= 1e-12) continue;
            const double v = psi.psi(s);
            if (!(v > 0.0)) {
                pass = false;
                worst_s = s;
                worst_v = v;
            }
        }
        add("psi_positive_off_one", pass, worst_s, worst_v);
    }

    // psi'' > 0 for s > 0, s != 1
    {
        bool pass = true;
        double worst = std::numeric_limits<double>::infinity();
        double worst_s = sample.front();
        for (double s : sample) {
            if (std::abs(s - 1.0) <= 1e-9) continue;  // convexity not required at s = 1
            const double v = psi.pprime(s);
            if (v < worst) {
                worst = v;
                worst_s = s;
            }
            if (!(v > 0.0)) pass = false;
        }
        std::string note;
        if (psi.pprime(1.0) <= 0.0) note = "psi'' vanishes at s = 1 (allowed; needed only for s != 1)";
        add("psi_convex_off_one", pass, worst_s, worst, note);
    }

    // psi'(s) -> inf, screened as strict monotone growth of psi' along the
    // tail sample (a finite grid cannot certify divergence)
    {
        bool pass = true;
        double worst_s = 1.0, worst_v = 0.0;
        double prev = -std::numeric_limits<double>::infinity();
        for (double s : sample) {
            if (s < 1.0) continue;
            const double v = psi.prime(s);
            if (v <= prev) {
                pass = false;
                worst_s = s;
                worst_v = v - prev;
            }
            prev = v;
        }
        add("psi_prime_growth", pass, worst_s, worst_v);
    }

    // sign(g(s)) = sign(psi'(s)) = sign(s - 1)
    {
        bool pass = true;
        double worst_s = 1.0, worst_v = 0.0;
        for (double s : sample) {
            if (std::abs(s - 1.0) <= 1e-12) continue;
            const double want = s > 1.0 ? 1.0 : -1.0;
            const double gs = g.g(s);
            const double ps = psi.prime(s);
            if (sign_of(gs) != want || sign_of(ps) != want) {
                pass = false;
                worst_s = s;
                worst_v = std::min(want * gs, want * ps);
            }
        }
        add("sign_coincidence", pass, worst_s, worst_v);
    }

    // |g| + s|g'| finite and bounded on the sample grid
    {
        bool pass = true;
        double worst_s = sample.front(), worst_v = 0.0;
        for (double s : sample) {
            const double v = std::abs(g.g(s)) + s * std::abs(g.gprime(s));
            if (!std::isfinite(v)) pass = false;
            if (!(v <= worst_v)) {
                worst_v = v;
                worst_s = s;
            }
        }
        add("locally_dominated", pass, worst_s, worst_v);
    }

    return report;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string to_string(GKind kind) {
    switch (kind) {
        case GKind::log: return "log";
        case GKind::power: return "power";
        case GKind::arctangential: return "arctangential";
    }
    return "?";
}

std::string to_string(PsiKind kind) {
    switch (kind) {
        case PsiKind::beckner: return "beckner";
        case PsiKind::abs_power: return "abs_power";
        case PsiKind::driving: return "driving";
    }
    return "?";
}

GKind g_kind_from_string(const std::string& name) {
    if (name == "log") return GKind::log;
    if (name == "power") return GKind::power;
    if (name == "arctangential") return GKind::arctangential;
    throw ConfigError("unknown reaction profile kind: " + name);
}

PsiKind psi_kind_from_string(const std::string& name) {
    if (name == "beckner") return PsiKind::beckner;
    if (name == "abs_power") return PsiKind::abs_power;
    if (name == "driving") return PsiKind::driving;
    throw ConfigError("unknown entropy kind: " + name);
}

}  // namespace hk
