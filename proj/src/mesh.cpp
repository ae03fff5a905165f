#include "hkflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Engine-native uniform double in [-1, 1]; avoids the implementation-defined
// std::uniform_real_distribution so seeded outputs are portable.
class CoefStream {
public:
    explicit CoefStream(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    double next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;  // [0,1)
        return 2.0 * u - 1.0;
    }

private:
    std::uint64_t state_;
};

double smoothstep01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

}  // namespace

Grid build_grid(DomainKind kind, int n, std::size_t cell_cap) {
    if (n < 4) throw DomainError("grid requires n >= 4, got " + std::to_string(n));
    if (kind == DomainKind::torus2d) {
        const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        if (cells > cell_cap)
            throw DomainError("2D grid exceeds the cell cap: " + std::to_string(cells) + " > " +
                              std::to_string(cell_cap));
    }
    return Grid{kind, n, 1.0 / static_cast<double>(n)};
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw DomainError("fields live on different grids");
}

Field build_density(const Grid& grid, const DensityBuilder& b, const Field* steady) {
    const bool needs_steady = b.kind == BuilderKind::scaled_steady ||
                              b.kind == BuilderKind::indicator_band ||
                              b.kind == BuilderKind::mollified_indicator;
    if (needs_steady) {
        if (steady == nullptr) throw DomainError("builder requires the steady density");
        require_same_grid(Field(grid), *steady);
    }

    Field out(grid);
    const int n = grid.n;
    switch (b.kind) {
        case BuilderKind::constant:
            if (!(b.value >= 0.0)) throw DomainError("constant builder requires value >= 0");
            std::fill(out.values.begin(), out.values.end(), b.value);
            break;
        case BuilderKind::cosine: {
            if (!(std::abs(b.a) < 1.0))
                throw DomainError("cosine builder requires |a| < 1 (field would be nonpositive)");
            for (std::size_t idx = 0; idx < out.size(); ++idx) {
                const int i = static_cast<int>(idx % static_cast<std::size_t>(n));
                out[idx] = 1.0 + b.a * std::cos(two_pi * b.k * grid.center(i));
            }
            break;
        }
        case BuilderKind::scaled_steady:
            if (!(b.scale >= 0.0)) throw DomainError("scaled_steady requires a nonnegative factor");
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = b.scale * (*steady)[i];
            break;
        case BuilderKind::indicator_band: {
            if (grid.kind == DomainKind::torus2d)
                throw DomainError("indicator_band is a 1D family");
            if (b.band_n < 2) throw DomainError("indicator_band requires n >= 2");
            const double jump = 1.0 / static_cast<double>(b.band_n);
            const double level = static_cast<double>(b.band_n) / static_cast<double>(b.band_n - 1);
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    grid.center(i) > jump ? level * (*steady)[static_cast<std::size_t>(i)] : 0.0;
            break;
        }
        case BuilderKind::mollified_indicator: {
            if (grid.kind == DomainKind::torus2d)
                throw DomainError("mollified_indicator is a 1D family");
            if (!(b.width > 0.0) || !(b.x0 < b.x1))
                throw DomainError("mollified_indicator requires width > 0 and x0 < x1");
            for (int i = 0; i < n; ++i) {
                const double x = grid.center(i);
                const double m = smoothstep01((x - b.x0) / b.width) *
                                 smoothstep01((b.x1 - x) / b.width);
                out[static_cast<std::size_t>(i)] = m * (*steady)[static_cast<std::size_t>(i)];
            }
            break;
        }
        case BuilderKind::trig_random: {
            if (!(b.amplitude >= 0.0 && b.amplitude < 1.0))
                throw DomainError("trig_random requires amplitude in [0, 1)");
            if (b.modes < 1) throw DomainError("trig_random requires modes >= 1");
            CoefStream rng(b.seed);
            const int axes = grid.dim();
            std::vector<double> ac(static_cast<std::size_t>(b.modes) * axes),
                bc(static_cast<std::size_t>(b.modes) * axes);
            double total = 0.0;
            for (std::size_t m = 0; m < ac.size(); ++m) {
                ac[m] = rng.next();
                bc[m] = rng.next();
                total += std::abs(ac[m]) + std::abs(bc[m]);
            }
            const double scale = total > 0.0 ? b.amplitude / total : 0.0;
            for (std::size_t idx = 0; idx < out.size(); ++idx) {
                const int i = static_cast<int>(idx % static_cast<std::size_t>(n));
                const int j = static_cast<int>(idx / static_cast<std::size_t>(n));
                double v = 1.0;
                for (int m = 0; m < b.modes; ++m) {
                    const double wx = two_pi * (m + 1) * grid.center(i);
                    v += scale * (ac[static_cast<std::size_t>(m)] * std::cos(wx) +
                                  bc[static_cast<std::size_t>(m)] * std::sin(wx));
                    if (axes == 2) {
                        const double wy = two_pi * (m + 1) * grid.center(j);
                        const std::size_t my = static_cast<std::size_t>(b.modes + m);
                        v += scale * (ac[my] * std::cos(wy) + bc[my] * std::sin(wy));
                    }
                }
                out[idx] = v;
            }
            break;
        }
    }

    if (b.normalize) {
        const double mass = integrate(out);
        if (!(mass > 0.0)) throw DomainError("cannot normalize a density with nonpositive mass");
        for (double& v : out.values) v /= mass;
    }
    for (double v : out.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("built density has a negative or non-finite cell");
    return out;
}

double integrate(const Field& field) {
    double acc = 0.0;
    for (double v : field.values) acc += v;
    return acc * field.grid.cell_measure();
}

Field gradient_sq(const Field& field) {
    const Grid& grid = field.grid;
    const int n = grid.n;
    const double h = grid.h;
    Field out(grid);

    auto central = [&](double left, double right) {
        const double d = (right - left) / (2.0 * h);
        return d * d;
    };

    switch (grid.kind) {
        case DomainKind::interval_noflux: {
            if (n == 1) return out;
            for (int i = 1; i + 1 < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    central(field[static_cast<std::size_t>(i - 1)], field[static_cast<std::size_t>(i + 1)]);
            const double d0 = (field[1] - field[0]) / h;
            const double dn = (field[static_cast<std::size_t>(n - 1)] - field[static_cast<std::size_t>(n - 2)]) / h;
            out[0] = d0 * d0;
            out[static_cast<std::size_t>(n - 1)] = dn * dn;
            break;
        }
        case DomainKind::torus1d:
            for (int i = 0; i < n; ++i) {
                const int im = (i + n - 1) % n;
                const int ip = (i + 1) % n;
                out[static_cast<std::size_t>(i)] =
                    central(field[static_cast<std::size_t>(im)], field[static_cast<std::size_t>(ip)]);
            }
            break;
        case DomainKind::torus2d:
            for (int j = 0; j < n; ++j) {
                const int jm = (j + n - 1) % n, jp = (j + 1) % n;
                for (int i = 0; i < n; ++i) {
                    const int im = (i + n - 1) % n, ip = (i + 1) % n;
                    out.at2(i, j) = central(field.at2(im, j), field.at2(ip, j)) +
                                    central(field.at2(i, jm), field.at2(i, jp));
                }
            }
            break;
    }
    return out;
}

LevelMeasures level_measures(const Field& r, double alpha, double beta) {
    if (!(0.0 < alpha && alpha < beta))
        throw DomainError("level_measures requires 0 < alpha < beta");
    std::size_t lo = 0, mid = 0, hi = 0;
    for (double v : r.values) {
        if (v <= alpha)
            ++lo;
        else if (v < beta)
            ++mid;
        else
            ++hi;
    }
    const double mu = r.grid.cell_measure();
    return LevelMeasures{static_cast<double>(lo) * mu, static_cast<double>(mid) * mu,
                         static_cast<double>(hi) * mu};
}

double relative_perimeter(const Field& r, double t) {
    const Grid& grid = r.grid;
    const int n = grid.n;
    std::size_t cut = 0;
    auto differs = [&](double a, double b) { return (a < t) != (b < t); };

    switch (grid.kind) {
        case DomainKind::interval_noflux:
            for (int i = 0; i + 1 < n; ++i)
                cut += differs(r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(i + 1)]);
            return static_cast<double>(cut);  // points in 1D: measure 1 each
        case DomainKind::torus1d:
            for (int i = 0; i < n; ++i)
                cut += differs(r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>((i + 1) % n)]);
            return static_cast<double>(cut);
        case DomainKind::torus2d:
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    cut += differs(r.at2(i, j), r.at2((i + 1) % n, j));
                    cut += differs(r.at2(i, j), r.at2(i, (j + 1) % n));
                }
            return static_cast<double>(cut) * grid.h;  // faces have length h in 2D
    }
    return 0.0;
}

CoareaSides coarea_sides(const Field& r, double alpha, double beta, int t_samples) {
    if (!(0.0 < alpha && alpha < beta))
        throw DomainError("coarea_sides requires 0 < alpha < beta");
    if (t_samples < 16) throw DomainError("coarea_sides requires t_samples >= 16");

    CoareaSides out;
    const Field grad2 = gradient_sq(r);
    const double mu = r.grid.cell_measure();
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (alpha < r[i] && r[i] < beta) acc += std::sqrt(grad2[i]);
    out.variation_band = acc * mu;

    const double dt = (beta - alpha) / static_cast<double>(t_samples);
    double per = 0.0;
    for (int j = 0; j < t_samples; ++j) per += relative_perimeter(r, alpha + (j + 0.5) * dt);
    out.perimeter_integral = per * dt;
    return out;
}

double lp_distance(const Field& a, const Field& b, double p) {
    require_same_grid(a, b);
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_distance requires p in [1, inf)");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(acc * a.grid.cell_measure(), 1.0 / p);
}

std::string to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::interval_noflux: return "interval_noflux";
        case DomainKind::torus1d: return "torus1d";
        case DomainKind::torus2d: return "torus2d";
    }
    return "?";
}

std::string to_string(BuilderKind kind) {
    switch (kind) {
        case BuilderKind::constant: return "constant";
        case BuilderKind::cosine: return "cosine";
        case BuilderKind::scaled_steady: return "scaled_steady";
        case BuilderKind::indicator_band: return "indicator_band";
        case BuilderKind::mollified_indicator: return "mollified_indicator";
        case BuilderKind::trig_random: return "trig_random";
    }
    return "?";
}

DomainKind domain_kind_from_string(const std::string& name) {
    if (name == "interval_noflux") return DomainKind::interval_noflux;
    if (name == "torus1d") return DomainKind::torus1d;
    if (name == "torus2d") return DomainKind::torus2d;
    throw ConfigError("unknown domain kind: " + name);
}

BuilderKind builder_kind_from_string(const std::string& name) {
    if (name == "constant") return BuilderKind::constant;
    if (name == "cosine") return BuilderKind::cosine;
    if (name == "scaled_steady") return BuilderKind::scaled_steady;
    if (name == "indicator_band") return BuilderKind::indicator_band;
    if (name == "mollified_indicator") return BuilderKind::mollified_indicator;
    if (name == "trig_random") return BuilderKind::trig_random;
    throw ConfigError("unknown density builder kind: " + name);
}

}  // namespace hk
