#include "aggdiff/characteristics.hpp"
#include "aggdiff/error.hpp"
#include "aggdiff/initial_condition.hpp"
#include "aggdiff/solver.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace aggdiff;

TEST_SUITE("characteristics") {

TEST_CASE("seed_uniform spaces labels evenly and inclusively") {
    const auto c = CharacteristicSet::seed_uniform(-1.0, 1.0, 5);
    REQUIRE(c.labels.size() == 5);
    CHECK(c.labels.front() == -1.0);
    CHECK(c.labels.back() == 1.0);
    CHECK(c.labels[2] == doctest::Approx(0.0));
    CHECK(c.positions == c.labels);
    CHECK(c.strictly_ordered());
    CHECK(c.t == 0.0);
}

TEST_CASE("strictly_ordered detects ties") {
    auto c = CharacteristicSet::seed_uniform(-1.0, 1.0, 4);
    c.positions[2] = c.positions[1];
    CHECK_FALSE(c.strictly_ordered());
}

TEST_CASE("zero velocity leaves particles in place") {
    const Grid g(2.0, 65);
    const Field z(g);
    const auto c0 = CharacteristicSet::seed_uniform(-1.0, 1.0, 9);
    const auto c1 = advect(c0, z, z, 0.1, KernelSpec::exponential(g));
    CHECK(c1.positions == c0.positions);
}

TEST_CASE("the origin is fixed under even data") {
    const Grid g(2.0, 129);
    const Field u = InitialCondition{}.sample(g);
    const auto c0 = CharacteristicSet::seed_uniform(-1.0, 1.0, 3);
    const auto c1 = advect(c0, u, u, 0.05, KernelSpec::exponential(g));
    CHECK(std::abs(c1.positions[1]) <= 1e-12);
}

TEST_CASE("constant velocity gives straight lines") {
    const Grid g(3.0, 33);
    const double c = 0.37;
    const Field v = Field::sample(g, [=](double) { return c; });
    auto chars = CharacteristicSet::seed_uniform(-1.0, 1.0, 7);
    const auto labels = chars.labels;
    for (int k = 0; k < 10; ++k) {
        chars = advect_with_velocity(chars, v, v, 0.1);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        CHECK(std::abs(chars.positions[i] - (labels[i] + c * 1.0)) <= 1e-12);
    }
}

TEST_CASE("advect rejects nonpositive dt and escaping particles") {
    const Grid g(1.0, 33);
    const Field v = Field::sample(g, [](double) { return 1.0; });
    const auto chars = CharacteristicSet::seed_uniform(-0.5, 0.9, 4);
    CHECK_THROWS_AS(advect_with_velocity(chars, v, v, 0.0), Error);
    CHECK_THROWS_WITH_AS(advect_with_velocity(chars, v, v, 0.5),
                         "characteristic escaped truncated domain", Error);
}

TEST_CASE("boundary speed for the standard bump") {
    const Grid g(2.0, 513);
    const Field u = InitialCondition{}.sample(g);
    const BoundarySpeed s = boundary_speed_check(u, -1.0, 1.0, KernelSpec::exponential(g));
    CHECK(s.lower_bound == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(s.observed_speed >= 0.95 * s.lower_bound);
}

TEST_CASE("boundary speed of zero is zero") {
    const Grid g(2.0, 65);
    const BoundarySpeed s = boundary_speed_check(Field(g), -1.0, 1.0, KernelSpec::exponential(g));
    CHECK(s.observed_speed == 0.0);
    CHECK(s.lower_bound == 0.0);
}

TEST_CASE("boundary speed of a spike is m exp(-d)") {
    const Grid g(2.0, 81);
    const KernelSpec k = KernelSpec::exponential(g);
    const double L = 1.0;
    const double m = 0.7;
    const double x_left = -1.0;
    for (std::size_t j0 : {22u, 30u, 45u, 58u}) {
        Field u(g);
        u[j0] = m / g.spacing();
        const double d = g.x(j0) - x_left;
        REQUIRE(d > 0.0);
        REQUIRE(d < 2.0 * L);
        const BoundarySpeed s = boundary_speed_check(u, x_left, L, k);
        CHECK(s.observed_speed == doctest::Approx(m * std::exp(-d)).epsilon(1e-12));
        CHECK(s.observed_speed >= s.lower_bound);
        CHECK(s.lower_bound == doctest::Approx(m * std::exp(-2.0 * L)).epsilon(1e-12));
    }
}

TEST_CASE("boundary speed rejects negative data") {
    const Grid g(2.0, 65);
    const Field u = Field::sample(g, [](double x) { return std::abs(x) < 0.5 ? -1.0 : 0.0; });
    CHECK_THROWS_AS(boundary_speed_check(u, -1.0, 1.0, KernelSpec::exponential(g)), Error);
}

TEST_CASE("blowup bound") {
    CHECK(blowup_bound(1.0, 1.0) == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-15));
    CHECK(blowup_bound(1.0, 1.0) == doctest::Approx(14.778).epsilon(1e-4));
    CHECK(blowup_bound(0.5, 2.0) == doctest::Approx(0.5 * std::exp(1.0)).epsilon(1e-15));
    CHECK(blowup_bound(0.5, 2.0) == doctest::Approx(1.3591).epsilon(1e-4));
    testgen::Gen gen(41);
    for (int trial = 0; trial < 50; ++trial) {
        const double L = gen.uniform(0.1, 3.0), m = gen.uniform(0.01, 10.0);
        CHECK(blowup_bound(L, 2.0 * m) == 0.5 * blowup_bound(L, m));
    }
    CHECK_THROWS_AS(blowup_bound(0.0, 1.0), Error);
    CHECK_THROWS_AS(blowup_bound(1.0, 0.0), Error);
    CHECK_THROWS_AS(blowup_bound(-1.0, 1.0), Error);
}

TEST_CASE("blowup report ties the bound to the boundary speed") {
    const BlowupReport b = BlowupReport::from_bound(1.0, 1.0);
    CHECK(b.boundary_speed_lower_bound == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(b.blowup_time_upper_bound == 2.0 * b.support_half_width / b.boundary_speed_lower_bound);
    CHECK_FALSE(b.observed_blowup_time.has_value());
}

TEST_CASE("support edges") {
    const Grid g(2.0, 161);
    CHECK(support_edges(Field(g)).empty);
    const SupportEdges e = support_edges(testgen::sampled_indicator(g, -1.0, 1.0));
    CHECK_FALSE(e.empty);
    CHECK(std::abs(e.left + 1.0) <= g.spacing());
    CHECK(std::abs(e.right - 1.0) <= g.spacing());
}

TEST_CASE("property: support and tracked particles stay confined during a bump run") {
    SolverConfig cfg{Grid(2.0, 257)};
    cfg.t_end = 1.0;
    const Field u0 = InitialCondition{}.sample(cfg.grid);
    const double dx = cfg.grid.spacing();
    auto chars = CharacteristicSet::seed_uniform(-1.0, 1.0, 33);
    bool ordered = true;
    double worst_center = 0.0;
    RunHooks hooks;
    hooks.on_step = [&](const Field& a, const Field& b, double, double dt) {
        chars = advect(chars, a, b, dt, cfg.kernel);
        ordered = ordered && chars.strictly_ordered();
        worst_center = std::max(worst_center, std::abs(chars.positions[16]));
    };
    const RunReport rep = run(u0, cfg, hooks);
    CHECK(ordered);
    CHECK(worst_center <= 1e-9);
    for (const auto& r : rep.records) {
        CHECK(r.support_left >= -1.0 - dx);
        CHECK(r.support_right <= 1.0 + dx);
    }
    CHECK(chars.positions.front() >= -1.0 - dx);
    CHECK(chars.positions.back() <= 1.0 + dx);
}

}
