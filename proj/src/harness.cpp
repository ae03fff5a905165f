#include "hkflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace hk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_ratio(double lhs, double rhs) {
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    if (rhs == 0.0) return kInf;
    return lhs / rhs;
}

struct RVars {
    Field r;
    Field grad2;
    double mass = 0.0;  // integral of r d(steady) = mass of rho
    double mu = 0.0;
};

RVars r_variables(const Field& rho, const Field& steady) {
    require_same_grid(rho, steady);
    RVars v;
    v.r = Field(rho.grid);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!(steady[i] > 0.0)) throw DomainError("steady density must be strictly positive");
        if (!(rho[i] >= 0.0)) throw DomainError("density must be nonnegative");
        v.r[i] = rho[i] / steady[i];
    }
    v.grad2 = gradient_sq(v.r);
    v.mass = integrate(rho);
    v.mu = rho.grid.cell_measure();
    return v;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Case constructors
// ---------------------------------------------------------------------------

InequalityCase eep_case(const GSpec& g, const PsiSpec& psi) {
    return InequalityCase{IneqName::eep, g, psi, 0, 0};
}

InequalityCase eep_band_case(const GSpec& g, const PsiSpec& psi, double alpha, double beta) {
    require(0.0 < alpha && alpha < beta, "eep_band requires 0 < alpha < beta");
    return InequalityCase{IneqName::eep_band, g, psi, alpha, beta};
}

InequalityCase beckner_classical_case(double p) {
    require(p > 1.0 && p <= 2.0, "beckner_classical requires 1 < p <= 2");
    return InequalityCase{IneqName::beckner_classical, make_g(GKind::log),
                          make_psi(PsiKind::beckner, p), 0, 0};
}

InequalityCase beckner_hellinger_case(double p) {
    require(p > 2.0, "beckner_hellinger requires p > 2");
    return InequalityCase{IneqName::beckner_hellinger, make_g(GKind::log),
                          make_psi(PsiKind::beckner, p), 0, 0};
}

InequalityCase porous_variant_case(double alpha, double p) {
    require(p > 1.0, "porous_variant requires p > 1");
    return InequalityCase{IneqName::porous_variant, make_g(GKind::power, alpha),
                          make_psi(PsiKind::beckner, p), 0, 0};
}

InequalityCase porous_log_variant_case(double alpha) {
    return InequalityCase{IneqName::porous_log_variant, make_g(GKind::power, alpha),
                          make_psi(PsiKind::beckner, 1.0), 0, 0};
}

InequalityCase arctan_logsob_case() {
    return InequalityCase{IneqName::arctan_logsob, make_g(GKind::arctangential),
                          make_psi(PsiKind::beckner, 1.0), 0, 0};
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

IneqReport inequality_report(const InequalityCase& c, const Field& rho, const Field& steady) {
    IneqReport out;

    switch (c.name) {
        case IneqName::eep: {
            EntropyReport rep = production(rho, steady, c.g, c.psi);
            out.lhs = rep.entropy;
            out.rhs = rep.production_total;
            break;
        }
        case IneqName::eep_band: {
            require(0.0 < c.band_alpha && c.band_alpha < c.band_beta,
                    "eep_band requires 0 < alpha < beta");
            EntropyReport rep = production(rho, steady, c.g, c.psi);
            out.lhs = rep.entropy;
            out.rhs = rep.production_h +
                      production_band(rho, steady, c.g, c.psi, c.band_alpha, c.band_beta);
            break;
        }
        case IneqName::beckner_classical:
        case IneqName::beckner_hellinger: {
            require(c.g.kind == GKind::log, "beckner cases require the log profile");
            require(c.psi.kind == PsiKind::beckner, "beckner cases require a beckner entropy");
            const double p = c.psi.p;
            if (c.name == IneqName::beckner_classical)
                require(p > 1.0 && p <= 2.0, "beckner_classical requires 1 < p <= 2");
            else
                require(p > 2.0, "beckner_hellinger requires p > 2");

            RVars v = r_variables(rho, steady);
            const double m = v.mass;
            double moment = 0.0, grad = 0.0, corr = 0.0;
            for (std::size_t i = 0; i < v.r.size(); ++i) {
                const double s = v.r[i];
                const double w = steady[i];
                moment += std::pow(s, p) * w;
                if (s > 0.0) {
                    grad += std::pow(s, p - 2.0) * v.grad2[i] * w;
                    if (c.name == IneqName::beckner_hellinger)
                        corr += s * std::log(s / m) * (std::pow(s, p - 1.0) - std::pow(m, p - 1.0)) * w;
                }
            }
            out.lhs = moment * v.mu - std::pow(m, p);
            out.rhs = grad * v.mu + corr * v.mu;
            break;
        }
        case IneqName::porous_variant: {
            require(c.g.kind == GKind::power, "porous_variant requires the power profile");
            require(c.psi.kind == PsiKind::beckner && c.psi.p > 1.0,
                    "porous_variant requires a beckner entropy with p > 1");
            const double a = c.g.alpha;
            const double p = c.psi.p;

            RVars v = r_variables(rho, steady);
            const double m = v.mass;
            const double m_am1 = std::pow(m, a - 1.0);
            const double m_pm1 = std::pow(m, p - 1.0);
            double moment = 0.0, grad = 0.0, corr = 0.0;
            for (std::size_t i = 0; i < v.r.size(); ++i) {
                const double s = v.r[i];
                const double w = steady[i];
                moment += std::pow(s, p) * w;
                if (s > 0.0) grad += std::pow(s, p + a - 3.0) * v.grad2[i] * w;
                // s*(s^(a-1) - m^(a-1)) written through s^a: finite at s = 0
                // for every a > 0.
                corr += (std::pow(s, a) - s * m_am1) / (a - 1.0) *
                        (std::pow(s, p - 1.0) - m_pm1) * w;
            }
            out.lhs = moment * v.mu - std::pow(m, p);
            out.rhs = std::pow(m, 1.0 - a) * (grad + corr) * v.mu;
            break;
        }
        case IneqName::porous_log_variant: {
            require(c.g.kind == GKind::power, "porous_log_variant requires the power profile");
            require(c.psi.kind == PsiKind::beckner && c.psi.p == 1.0,
                    "porous_log_variant requires the beckner entropy with p = 1");
            const double a = c.g.alpha;

            RVars v = r_variables(rho, steady);
            const double m = v.mass;
            const double m_am1 = std::pow(m, a - 1.0);
            double lhs_acc = 0.0, grad = 0.0, corr = 0.0;
            for (std::size_t i = 0; i < v.r.size(); ++i) {
                const double s = v.r[i];
                if (s == 0.0) continue;  // s log(s/m) and the correction vanish in the limit
                const double w = steady[i];
                const double slog = s * std::log(s / m);
                lhs_acc += slog * w;
                grad += std::pow(s, a - 2.0) * v.grad2[i] * w;
                corr += slog * (std::pow(s, a - 1.0) - m_am1) / (a - 1.0) * w;
            }
            out.lhs = lhs_acc * v.mu;
            out.rhs = std::pow(m, 1.0 - a) * (grad + corr) * v.mu;
            break;
        }
        case IneqName::arctan_logsob: {
            require(c.g.kind == GKind::arctangential,
                    "arctan_logsob requires the arctangential profile");
            require(c.psi.kind == PsiKind::beckner && c.psi.p == 1.0,
                    "arctan_logsob requires the beckner entropy with p = 1");

            RVars v = r_variables(rho, steady);
            double lhs_acc = 0.0, grad = 0.0, corr = 0.0;
            for (std::size_t i = 0; i < v.r.size(); ++i) {
                const double s = v.r[i];
                const double w = steady[i];
                lhs_acc += c.psi.psi(s) * w;
                if (s > 0.0) {
                    grad += v.grad2[i] / (s * (1.0 + s * s)) * w;
                    corr += s * std::log(s) * std::log(2.0 * s * s / (1.0 + s * s)) * w;
                }
            }
            out.lhs = lhs_acc * v.mu;
            out.rhs = (grad + corr) * v.mu;
            break;
        }
    }

    out.ratio = safe_ratio(out.lhs, out.rhs);
    return out;
}

// ---------------------------------------------------------------------------
// Counterexample sequences
// ---------------------------------------------------------------------------

std::vector<SequenceRow> counterexample_sequence(const SequenceSpec& spec) {
    std::vector<SequenceRow> rows;
    rows.reserve(spec.range.size());

    auto evaluate = [&](const Field& steady, const Field& rho, double param) {
        EntropyReport rep = production(rho, steady, spec.g, spec.psi);
        rows.push_back(SequenceRow{param, rep.entropy, rep.production_w, rep.production_h});
    };

    switch (spec.kind) {
        case SequenceKind::hellinger_gap: {
            for (double param : spec.range) {
                const double iparam = std::floor(param);
                require(param == iparam && param >= 4.0,
                        "hellinger_gap range entries must be integers >= 4");
                const int band = static_cast<int>(iparam);
                const int mult = std::max(2, (spec.base_resolution + band - 1) / band);
                Grid grid = build_grid(spec.domain, band * mult);
                Field steady = build_density(grid, spec.steady_builder);
                DensityBuilder b;
                b.kind = BuilderKind::indicator_band;
                b.band_n = band;
                Field rho = build_density(grid, b, &steady);
                evaluate(steady, rho, param);
            }
            break;
        }
        case SequenceKind::scaling: {
            Grid grid = build_grid(spec.domain, spec.base_resolution);
            Field steady = build_density(grid, spec.steady_builder);
            for (double k : spec.range) {
                require(k >= 0.0 && k != 1.0, "scaling range entries must be nonnegative and != 1");
                DensityBuilder b;
                b.kind = BuilderKind::scaled_steady;
                b.scale = k;
                Field rho = build_density(grid, b, &steady);
                evaluate(steady, rho, k);
            }
            break;
        }
        case SequenceKind::indicator: {
            Grid grid = build_grid(spec.domain, spec.base_resolution);
            Field steady = build_density(grid, spec.steady_builder);
            for (double w : spec.range) {
                require(w > 0.0, "indicator widths must be positive");
                DensityBuilder b;
                b.kind = BuilderKind::mollified_indicator;
                b.x0 = spec.x0;
                b.x1 = spec.x1;
                b.width = w;
                Field rho = build_density(grid, b, &steady);
                evaluate(steady, rho, w);
            }
            break;
        }
    }
    return rows;
}

double rate_fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    require(xs.size() == ys.size(), "rate fit needs matching columns");
    require(xs.size() >= 4, "rate fit needs at least 4 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(xs[i] > 0.0 && ys[i] > 0.0, "rate fit needs strictly positive values");
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    require(denom != 0.0, "rate fit needs at least two distinct x values");
    return (n * sxy - sx * sy) / denom;
}

// ---------------------------------------------------------------------------
// Ratio scan
// ---------------------------------------------------------------------------

AlgtermScan algterm_scan(const GSpec& g, const PsiSpec& psi, double eps, double s_max,
                         int samples) {
    require(0.0 < eps && eps < 1.0 && s_max > 1.0, "scan requires 0 < eps < 1 < s_max");
    require(samples >= 1000, "scan requires at least 1000 samples");

    const std::vector<double> grid = geometric_samples(eps, s_max, samples);
    const double window = 1e-3;  // |s-1| below this is 0/0-ill-conditioned

    auto ratio_at = [&](double s) {
        const double denom = g.sg(s) * psi.prime(s);
        if (!(denom > 0.0))
            throw DomainError("nonpositive production denominator at s = " + std::to_string(s) +
                              "; pair fails the sign conditions");
        return psi.psi(s) / denom;
    };

    AlgtermScan out;
    out.c_eps = -kInf;
    std::vector<std::pair<double, double>> below, above;  // (s, ratio) flanking s = 1
    for (double s : grid) {
        if (std::abs(s - 1.0) < window) continue;
        const double r = ratio_at(s);
        if (r > out.c_eps) {
            out.c_eps = r;
            out.argmax_s = s;
        }
        if (s < 1.0) {
            below.emplace_back(s, r);
        } else if (above.size() < 2) {
            above.emplace_back(s, r);
        }
    }
    require(below.size() >= 2 && above.size() >= 2,
            "scan grid leaves too few samples around s = 1");

    // Linear extrapolation to s = 1 from each side, then the two-sided mean.
    auto extrapolate = [](std::pair<double, double> near, std::pair<double, double> far) {
        const double slope = (near.second - far.second) / (near.first - far.first);
        return near.second + slope * (1.0 - near.first);
    };
    const double from_below =
        extrapolate(below[below.size() - 1], below[below.size() - 2]);
    const double from_above = extrapolate(above[0], above[1]);
    out.ratio_at_one = 0.5 * (from_below + from_above);

    if (out.ratio_at_one > out.c_eps) {
        out.c_eps = out.ratio_at_one;
        out.argmax_s = 1.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& entropies,
                   double entropy_floor, double margin) {
    require(times.size() == entropies.size(), "decay fit needs matching series");
    require(!times.empty(), "decay fit needs samples");
    const double e0 = entropies.front();
    const double floor = entropy_floor >= 0.0 ? entropy_floor : 1e-12 * e0;

    std::vector<double> ts, ls;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (entropies[i] > floor && entropies[i] > 0.0) {
            ts.push_back(times[i]);
            ls.push_back(std::log(entropies[i]));
        }
    }
    require(ts.size() >= 8, "decay fit needs at least 8 samples above the entropy floor");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sx += ts[i];
        sy += ls[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * ls[i];
    }
    const double denom = n * sxx - sx * sx;
    require(denom != 0.0, "decay fit needs distinct sample times");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    DecayFit out;
    out.gamma_hat = -slope;

    double ss_res = 0.0, ss_tot = 0.0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double fit = intercept + slope * ts[i];
        ss_res += (ls[i] - fit) * (ls[i] - fit);
        ss_tot += (ls[i] - mean) * (ls[i] - mean);
    }
    out.fit_quality = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    const double rate = out.gamma_hat * (1.0 - margin);
    const double t0 = times.front();
    out.bound_holds = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double bound = e0 * std::exp(-rate * (times[i] - t0));
        if (entropies[i] > bound * (1.0 + 1e-12)) {
            out.bound_holds = false;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

SweepResult eep_sweep(const std::vector<DensityBuilder>& family, const GSpec& g,
                      const PsiSpec& psi, const Grid& grid, const Field& steady,
                      double mass_floor, double entropy_cap, int jobs) {
    require(!family.empty(), "sweep needs a nonempty family");
    require(jobs >= 1, "sweep needs jobs >= 1");

    std::vector<EntropyReport> reports(family.size());
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Field rho = build_density(grid, family[i], &steady);
            reports[i] = production(rho, steady, g, psi);
        }
    };
    if (jobs == 1 || family.size() < 2) {
        worker(0, family.size());
    } else {
        const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(jobs), family.size());
        std::vector<std::thread> pool;
        const std::size_t chunk = (family.size() + nw - 1) / nw;
        for (std::size_t w = 0; w < nw; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(family.size(), begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    SweepResult out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const EntropyReport& rep = reports[i];
        if (rep.mass < mass_floor) {
            out.skipped.push_back("member " + std::to_string(i) + ": mass " +
                                  std::to_string(rep.mass) + " below floor");
            continue;
        }
        if (rep.entropy > entropy_cap) {
            out.skipped.push_back("member " + std::to_string(i) + ": entropy " +
                                  std::to_string(rep.entropy) + " above cap");
            continue;
        }
        ++out.admitted;
        const double ratio = safe_ratio(rep.entropy, rep.production_total);
        if (std::isinf(ratio)) out.has_infinite = true;
        if (ratio > out.empirical_c || out.worst_index < 0) {
            out.empirical_c = ratio;
            out.worst_index = static_cast<int>(i);
            out.worst_entropy = rep.entropy;
            out.worst_production = rep.production_total;
        }
    }
    require(out.admitted > 0, "sweep admitted no family member");
    return out;
}

double max_dissipation_residual(const Trajectory& traj, std::size_t monitor, double floor) {
    require(monitor < traj.entropy_series.size(), "monitor index out of range");
    const auto& e = traj.entropy_series[monitor];
    const auto& d = traj.production_series[monitor];
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
        if (!(e[k] > floor)) continue;
        const double dt = traj.times[k + 1] - traj.times[k];
        if (!(dt > 0.0)) continue;
        const double slope = (e[k + 1] - e[k]) / dt;
        const double mid = 0.5 * (d[k].production_total + d[k + 1].production_total);
        worst = std::max(worst, std::abs(slope + mid));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string to_string(IneqName name) {
    switch (name) {
        case IneqName::eep: return "eep";
        case IneqName::eep_band: return "eep_band";
        case IneqName::beckner_classical: return "beckner_classical";
        case IneqName::beckner_hellinger: return "beckner_hellinger";
        case IneqName::porous_variant: return "porous_variant";
        case IneqName::porous_log_variant: return "porous_log_variant";
        case IneqName::arctan_logsob: return "arctan_logsob";
    }
    return "?";
}

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::hellinger_gap: return "hellinger_gap";
        case SequenceKind::scaling: return "scaling";
        case SequenceKind::indicator: return "indicator";
    }
    return "?";
}

IneqName ineq_name_from_string(const std::string& name) {
    if (name == "eep") return IneqName::eep;
    if (name == "eep_band") return IneqName::eep_band;
    if (name == "beckner_classical") return IneqName::beckner_classical;
    if (name == "beckner_hellinger") return IneqName::beckner_hellinger;
    if (name == "porous_variant") return IneqName::porous_variant;
    if (name == "porous_log_variant") return IneqName::porous_log_variant;
    if (name == "arctan_logsob") return IneqName::arctan_logsob;
    throw ConfigError("unknown inequality name: " + name);
}

SequenceKind sequence_kind_from_string(const std::string& name) {
    if (name == "hellinger_gap") return SequenceKind::hellinger_gap;
    if (name == "scaling") return SequenceKind::scaling;
    if (name == "indicator") return SequenceKind::indicator;
    throw ConfigError("unknown counterexample kind: " + name);
}

}  // namespace hk
