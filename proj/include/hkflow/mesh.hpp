#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hkflow/errors.hpp"

namespace hk {

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

enum class DomainKind { interval_noflux, torus1d, torus2d };

// Uniform cell-centered grid on the unit interval or unit torus (1D/2D).
// Total measure is always 1; cell centers sit at (i + 1/2) h.
struct Grid {
    DomainKind kind = DomainKind::interval_noflux;
    int n = 0;       // cells per axis
    double h = 0.0;  // 1/n

    int dim() const { return kind == DomainKind::torus2d ? 2 : 1; }
    std::size_t cell_count() const {
        return kind == DomainKind::torus2d ? static_cast<std::size_t>(n) * static_cast<std::size_t>(n)
                                           : static_cast<std::size_t>(n);
    }
    double cell_measure() const { return dim() == 2 ? h * h : h; }
    double center(int i) const { return (i + 0.5) * h; }

    bool operator==(const Grid&) const = default;
};

// n >= 4 required; 2D grids are capped at cell_cap total cells.
Grid build_grid(DomainKind kind, int n, std::size_t cell_cap = 1'000'000);

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

// Cell-centered scalar field. Row-major in 2D: index = j*n + i.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.cell_count(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
    double& at2(int i, int j) { return values[static_cast<std::size_t>(j) * grid.n + i]; }
    double at2(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.n + i]; }
};

// ---------------------------------------------------------------------------
// Density builders
// ---------------------------------------------------------------------------

enum class BuilderKind { constant, cosine, scaled_steady, indicator_band, mollified_indicator, trig_random };

struct DensityBuilder {
    BuilderKind kind = BuilderKind::constant;
    bool normalize = false;  // rescale to unit mass

    double value = 1.0;                 // constant
    double a = 0.0;                     // cosine amplitude, |a| < 1
    int k = 1;                          // cosine mode
    double scale = 1.0;                 // scaled_steady factor
    int band_n = 2;                     // indicator_band parameter (jump at 1/band_n)
    double x0 = 0.25, x1 = 0.75;        // mollified_indicator support
    double width = 0.1;                 // mollified_indicator edge width
    std::uint64_t seed = 0;             // trig_random
    int modes = 3;                      // trig_random mode count per axis
    double amplitude = 0.5;             // trig_random total amplitude, < 1
};

// Builds a nonnegative density on the grid. Builders that reference the
// steady state (scaled_steady, indicator_band, mollified_indicator) require
// `steady`; the others ignore it.
Field build_density(const Grid& grid, const DensityBuilder& builder, const Field* steady = nullptr);

// ---------------------------------------------------------------------------
// Quadrature, derivatives, level sets
// ---------------------------------------------------------------------------

// Midpoint quadrature: sum of cell values times cell measure. Exact on
// linear data.
double integrate(const Field& field);

// Cell-centered |grad field|^2: central differences in periodic/interior
// directions, one-sided at no-flux boundaries; axis contributions summed in 2D.
Field gradient_sq(const Field& field);

struct LevelMeasures {
    double sigma = 0.0;  // |[r <= alpha]|
    double tau = 0.0;    // |[alpha < r < beta]|
    double high = 0.0;   // |[r >= beta]|
};

// Lebesgue measures of the three level bands, cell count times cell measure.
// Requires 0 < alpha < beta.
LevelMeasures level_measures(const Field& r, double alpha, double beta);

// Discrete relative perimeter of [r < t]: interior cell faces separating
// cells below t from cells at or above t, times face measure.
double relative_perimeter(const Field& r, double t);

struct CoareaSides {
    double variation_band = 0.0;      // integral of |grad r| over [alpha < r < beta]
    double perimeter_integral = 0.0;  // integral over t in (alpha, beta) of P([r < t])
};

// The two sides of the coarea identity on the band (alpha, beta); the level
// integral uses the midpoint rule on t_samples levels (t_samples >= 16).
CoareaSides coarea_sides(const Field& r, double alpha, double beta, int t_samples);

// (integral |a-b|^p)^(1/p) by midpoint quadrature; p in [1, inf).
double lp_distance(const Field& a, const Field& b, double p);

// Throws DomainError unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

std::string to_string(DomainKind kind);
std::string to_string(BuilderKind kind);
DomainKind domain_kind_from_string(const std::string& name);
BuilderKind builder_kind_from_string(const std::string& name);

}  // namespace hk
