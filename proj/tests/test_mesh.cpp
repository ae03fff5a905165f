#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hkflow/io.hpp"
#include "hkflow/mesh.hpp"
#include "oracles.hpp"

using namespace hk;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Field sampled(const Grid& grid, double (*f)(double)) {
    Field out(grid);
    for (int i = 0; i < grid.n; ++i) out[static_cast<std::size_t>(i)] = f(grid.center(i));
    return out;
}

}  // namespace

TEST_CASE("grid construction") {
    const Grid g = build_grid(DomainKind::interval_noflux, 128);
    CHECK(g.h == doctest::Approx(1.0 / 128).epsilon(1e-16));
    CHECK(g.cell_count() == 128);
    CHECK(build_grid(DomainKind::torus2d, 64).cell_count() == 4096);
    CHECK(build_grid(DomainKind::torus1d, 4).cell_count() == 4);
    CHECK_THROWS_AS(build_grid(DomainKind::torus1d, 3), DomainError);
    CHECK_THROWS_AS(build_grid(DomainKind::torus2d, 2000), DomainError);  // over the cell cap
    CHECK(build_grid(DomainKind::torus2d, 2000, 8'000'000).cell_count() == 4'000'000);
}

TEST_CASE("density builders") {
    const Grid grid = build_grid(DomainKind::interval_noflux, 10);
    Field steady(grid, 1.0);

    SUBCASE("constant normalizes to 1") {
        DensityBuilder b;
        b.kind = BuilderKind::constant;
        b.value = 7.0;
        b.normalize = true;
        const Field f = build_density(grid, b);
        for (double v : f.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("cosine has unit mass") {
        const Grid fine = build_grid(DomainKind::torus1d, 128);
        DensityBuilder b;
        b.kind = BuilderKind::cosine;
        b.a = 0.5;
        b.k = 1;
        b.normalize = true;
        CHECK(integrate(build_density(fine, b)) == doctest::Approx(1.0).epsilon(1e-12));
        b.a = 1.0;
        CHECK_THROWS_AS(build_density(fine, b), DomainError);
    }
    SUBCASE("two-level band density") {
        DensityBuilder b;
        b.kind = BuilderKind::indicator_band;
        b.band_n = 10;
        const Field f = build_density(grid, b, &steady);
        for (int i = 0; i < grid.n; ++i) {
            const double want = grid.center(i) > 0.1 ? 10.0 / 9.0 : 0.0;
            CHECK(f[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-14));
        }
        CHECK(integrate(f) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_THROWS_AS(build_density(grid, b), DomainError);  // steady reference required
    }
    SUBCASE("mollified indicator converges to the sharp one") {
        const Grid fine = build_grid(DomainKind::interval_noflux, 512);
        Field ones(fine, 1.0);
        DensityBuilder b;
        b.kind = BuilderKind::mollified_indicator;
        b.x0 = 0.25;
        b.x1 = 0.75;
        double prev_mass = 0.0;
        for (double w : {0.1, 0.05, 0.025}) {
            b.width = w;
            const Field f = build_density(fine, b, &ones);
            for (double v : f.values) CHECK(v >= 0.0);
            const double mass = integrate(f);
            CHECK(mass > prev_mass);  // sharper edges leave more of the plateau
            prev_mass = mass;
        }
        CHECK(prev_mass == doctest::Approx(0.5).epsilon(0.1));
    }
    SUBCASE("trig_random is positive, seeded, reproducible") {
        const Grid fine = build_grid(DomainKind::torus1d, 256);
        DensityBuilder b;
        b.kind = BuilderKind::trig_random;
        b.seed = 42;
        b.amplitude = 0.8;
        const Field f1 = build_density(fine, b);
        const Field f2 = build_density(fine, b);
        CHECK(f1.values == f2.values);
        for (double v : f1.values) CHECK(v >= 1.0 - 0.8 - 1e-12);
        b.seed = 43;
        CHECK(build_density(fine, b).values != f1.values);
        b.amplitude = 1.0;
        CHECK_THROWS_AS(build_density(fine, b), DomainError);
    }
    SUBCASE("2D trig_random") {
        const Grid g2 = build_grid(DomainKind::torus2d, 32);
        DensityBuilder b;
        b.kind = BuilderKind::trig_random;
        b.seed = 7;
        b.normalize = true;
        const Field f = build_density(g2, b);
        CHECK(integrate(f) == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : f.values) CHECK(v >= 0.0);
    }
}

TEST_CASE("midpoint quadrature") {
    SUBCASE("constants and symmetry") {
        const Grid grid = build_grid(DomainKind::torus1d, 128);
        CHECK(integrate(Field(grid, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
        const Field c = sampled(grid, [](double x) { return std::cos(two_pi * x); });
        CHECK(std::abs(integrate(c)) <= 1e-12);
    }
    SUBCASE("exact on linear data") {
        const Grid grid = build_grid(DomainKind::interval_noflux, 100);
        const Field x = sampled(grid, [](double v) { return v; });
        CHECK(integrate(x) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("linearity and monotonicity") {
        const Grid grid = build_grid(DomainKind::interval_noflux, 64);
        oracle::ValueStream vs(1);
        Field a(grid), b(grid);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = vs.uniform(0.0, 2.0);
            b[i] = a[i] + vs.uniform(0.0, 1.0);  // b >= a pointwise
        }
        Field combo(grid);
        for (std::size_t i = 0; i < a.size(); ++i) combo[i] = 2.5 * a[i] - 0.5 * b[i];
        CHECK(integrate(combo) ==
              doctest::Approx(2.5 * integrate(a) - 0.5 * integrate(b)).epsilon(1e-12));
        CHECK(integrate(a) <= integrate(b));
    }
}

TEST_CASE("squared gradients") {
    SUBCASE("constant fields have zero gradient") {
        for (DomainKind kind : {DomainKind::interval_noflux, DomainKind::torus1d, DomainKind::torus2d}) {
            const Grid grid = build_grid(kind, 16);
            const Field g2 = gradient_sq(Field(grid, 3.7));
            for (double v : g2.values) CHECK(v == 0.0);
        }
    }
    SUBCASE("exact on linear data including the one-sided boundary") {
        const Grid grid = build_grid(DomainKind::interval_noflux, 64);
        const Field g2 = gradient_sq(sampled(grid, [](double x) { return x; }));
        for (double v : g2.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("second-order on smooth periodic data") {
        // Taylor bound for the squared central difference of sin(2 pi x):
        // 2 |grad| * |grad| (2 pi h)^2 / 6, about 2.0e-3 at n = 512
        auto worst_err = [](int n) {
            const Grid grid = build_grid(DomainKind::torus1d, n);
            const Field g2 =
                gradient_sq(sampled(grid, [](double x) { return std::sin(two_pi * x); }));
            double worst = 0.0;
            for (int i = 0; i < grid.n; ++i) {
                const double exact = std::pow(two_pi * std::cos(two_pi * grid.center(i)), 2);
                worst = std::max(worst, std::abs(g2[static_cast<std::size_t>(i)] - exact));
            }
            return worst;
        };
        const double e512 = worst_err(512);
        const double taylor = 2.0 * two_pi * two_pi * std::pow(two_pi / 512.0, 2) / 6.0;
        CHECK(e512 < 2.5e-3);
        CHECK(e512 == doctest::Approx(taylor).epsilon(0.3));
        const double e1024 = worst_err(1024);
        CHECK(e512 / e1024 == doctest::Approx(4.0).epsilon(0.15));  // O(h^2)
    }
    SUBCASE("2D sums axis contributions") {
        auto worst_err = [](int n) {
            const Grid grid = build_grid(DomainKind::torus2d, n);
            Field f(grid);
            for (int j = 0; j < grid.n; ++j)
                for (int i = 0; i < grid.n; ++i)
                    f.at2(i, j) =
                        std::sin(two_pi * grid.center(i)) + std::cos(two_pi * grid.center(j));
            const Field g2 = gradient_sq(f);
            double worst = 0.0;
            for (int j = 0; j < grid.n; ++j)
                for (int i = 0; i < grid.n; ++i) {
                    const double gx = two_pi * std::cos(two_pi * grid.center(i));
                    const double gy = -two_pi * std::sin(two_pi * grid.center(j));
                    worst = std::max(worst, std::abs(g2.at2(i, j) - gx * gx - gy * gy));
                }
            return worst;
        };
        const double e128 = worst_err(128);
        CHECK(e128 < 0.08);
        CHECK(e128 / worst_err(256) == doctest::Approx(4.0).epsilon(0.15));
    }
}

TEST_CASE("level-set measures") {
    const Grid grid = build_grid(DomainKind::interval_noflux, 256);
    SUBCASE("linear ramp") {
        const auto lm = level_measures(sampled(grid, [](double x) { return x; }), 0.25, 0.75);
        CHECK(lm.sigma == doctest::Approx(0.25).epsilon(grid.h));
        CHECK(lm.tau == doctest::Approx(0.5).epsilon(grid.h));
        CHECK(lm.high == doctest::Approx(0.25).epsilon(grid.h));
    }
    SUBCASE("constant one") {
        const auto lm = level_measures(Field(grid, 1.0), 0.25, 0.75);
        CHECK(lm.sigma == 0.0);
        CHECK(lm.tau == 0.0);
        CHECK(lm.high == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("two-level band") {
        const Grid g10 = build_grid(DomainKind::interval_noflux, 250);
        Field r(g10);
        for (int i = 0; i < g10.n; ++i)
            r[static_cast<std::size_t>(i)] = g10.center(i) > 0.1 ? 10.0 / 9.0 : 0.0;
        const auto lm = level_measures(r, 0.05, 1.05);
        CHECK(lm.sigma == doctest::Approx(0.1).epsilon(g10.h));
        CHECK(lm.tau == 0.0);
        CHECK(lm.high == doctest::Approx(0.9).epsilon(g10.h));
    }
    SUBCASE("partition is exact on power-of-two grids") {
        const Grid g2 = build_grid(DomainKind::torus1d, 128);
        oracle::ValueStream vs(5);
        Field r(g2);
        for (double& v : r.values) v = vs.uniform(0.0, 2.0);
        const auto lm = level_measures(r, 0.5, 1.5);
        CHECK(lm.sigma + lm.tau + lm.high == 1.0);
    }
    SUBCASE("bad band rejected") {
        CHECK_THROWS_AS(level_measures(Field(grid, 1.0), 0.75, 0.25), DomainError);
        CHECK_THROWS_AS(level_measures(Field(grid, 1.0), 0.0, 0.25), DomainError);
    }
}

TEST_CASE("coarea identity") {
    SUBCASE("constant field gives zero on both sides") {
        const Grid grid = build_grid(DomainKind::torus1d, 64);
        const auto sides = coarea_sides(Field(grid, 0.5), 0.25, 0.75, 64);
        CHECK(sides.variation_band == 0.0);
        CHECK(sides.perimeter_integral == 0.0);
    }
    SUBCASE("linear ramp") {
        const Grid grid = build_grid(DomainKind::interval_noflux, 512);
        const auto sides = coarea_sides(sampled(grid, [](double x) { return x; }), 0.25, 0.75, 256);
        CHECK(sides.variation_band == doctest::Approx(0.5).epsilon(0.02));
        CHECK(sides.perimeter_integral == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("sine wave crosses every level twice") {
        const Grid grid = build_grid(DomainKind::torus1d, 512);
        const Field r = sampled(grid, [](double x) { return 0.5 + 0.5 * std::sin(two_pi * x); });
        const auto sides = coarea_sides(r, 0.3, 0.7, 256);
        CHECK(sides.perimeter_integral == doctest::Approx(0.8).epsilon(0.02));
        CHECK(sides.variation_band ==
              doctest::Approx(sides.perimeter_integral).epsilon(0.02));
    }
    SUBCASE("t_samples floor enforced") {
        const Grid grid = build_grid(DomainKind::torus1d, 64);
        CHECK_THROWS_AS(coarea_sides(Field(grid, 1.0), 0.3, 0.7, 8), DomainError);
    }
}

TEST_CASE("lp distances") {
    const Grid grid = build_grid(DomainKind::interval_noflux, 512);
    const Field x = sampled(grid, [](double v) { return v; });
    CHECK(lp_distance(x, x, 2.0) == 0.0);
    CHECK(lp_distance(Field(grid, 2.0), Field(grid, 1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lp_distance(x, Field(grid, 0.0), 2.0) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
    const Grid other = build_grid(DomainKind::interval_noflux, 256);
    CHECK_THROWS_AS(lp_distance(x, Field(other, 0.0), 2.0), DomainError);
    CHECK_THROWS_AS(lp_distance(x, x, 0.5), DomainError);
}

TEST_CASE("torus operations are translation equivariant") {
    const Grid grid = build_grid(DomainKind::torus1d, 64);
    oracle::ValueStream vs(11);
    Field f(grid);
    for (double& v : f.values) v = vs.uniform(0.1, 2.0);
    Field shifted(grid);
    for (int i = 0; i < grid.n; ++i)
        shifted[static_cast<std::size_t>((i + 1) % grid.n)] = f[static_cast<std::size_t>(i)];

    const Field g2 = gradient_sq(f);
    const Field g2s = gradient_sq(shifted);
    for (int i = 0; i < grid.n; ++i)
        CHECK(g2s[static_cast<std::size_t>((i + 1) % grid.n)] == g2[static_cast<std::size_t>(i)]);

    const auto lm = level_measures(f, 0.5, 1.5);
    const auto lms = level_measures(shifted, 0.5, 1.5);
    CHECK(lm.sigma == lms.sigma);
    CHECK(lm.tau == lms.tau);
    CHECK(lm.high == lms.high);
    CHECK(relative_perimeter(f, 0.9) == relative_perimeter(shifted, 0.9));
    CHECK(integrate(f) == doctest::Approx(integrate(shifted)).epsilon(1e-14));
}

TEST_CASE("field CSV round trip") {
    SUBCASE("1D") {
        const Grid grid = build_grid(DomainKind::torus1d, 32);
        oracle::ValueStream vs(3);
        Field f(grid);
        for (double& v : f.values) v = vs.uniform(0.0, 5.0);
        std::stringstream ss;
        write_field_csv(f, ss);
        const Field back = read_field_csv(ss, grid);
        CHECK(back.values == f.values);  // 17 digits round-trip bit-exactly
    }
    SUBCASE("2D") {
        const Grid grid = build_grid(DomainKind::torus2d, 8);
        oracle::ValueStream vs(4);
        Field f(grid);
        for (double& v : f.values) v = vs.uniform(-1.0, 1.0);
        std::stringstream ss;
        write_field_csv(f, ss);
        CHECK(read_field_csv(ss, grid).values == f.values);
    }
    SUBCASE("grid mismatch detected") {
        const Grid grid = build_grid(DomainKind::torus1d, 32);
        std::stringstream ss;
        write_field_csv(Field(grid, 1.0), ss);
        const Grid other = build_grid(DomainKind::torus1d, 16);
        CHECK_THROWS_AS(read_field_csv(ss, other), ConfigError);
    }
}

TEST_CASE("grid JSON round trip") {
    const Grid grid = build_grid(DomainKind::torus2d, 64);
    const Grid back = grid_from_json(to_json(grid));
    CHECK(back == grid);
}
