#include "aggdiff/config.hpp"
#include "aggdiff/error.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace aggdiff;

namespace {

const char* kMinimal = "n_nodes = 129\nhalf_width = 2\nt_end = 0.5\n";

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("minimal document takes the defaults") {
    const RunConfigFile c = parse_config(kMinimal);
    CHECK(c.n_nodes == 129);
    CHECK(c.half_width == 2.0);
    CHECK(c.t_end == 0.5);
    CHECK(c.epsilon == 0.0);
    CHECK(c.r_coeff == 1.0);
    CHECK(c.cfl == 0.4);
    CHECK(c.dt_min == 1e-12);
    CHECK(c.grad_blowup_factor == 1e4);
    CHECK(c.experiment == Experiment::single);
    CHECK(c.ic.kind == InitialKind::bump);
    const std::string echo = c.echo();
    for (const char* key : {"epsilon = 0", "r_coeff = 1", "cfl = 0.4", "dt_min = 1e-12",
                            "grad_blowup_factor = 10000", "output_stride = 100",
                            "experiment = single", "ic_kind = bump"}) {
        CHECK_MESSAGE(echo.find(key) != std::string::npos, key);
    }
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfigFile c = parse_config("# header\n\nn_nodes = 65   # trailing\nhalf_width=3\n  t_end = 1\n");
    CHECK(c.n_nodes == 65);
    CHECK(c.half_width == 3.0);
}

TEST_CASE("negative epsilon") {
    const std::string doc = std::string(kMinimal) + "epsilon = -1\n";
    CHECK(error_text(doc).find("epsilon must be ≥ 0") != std::string::npos);
    CHECK(error_line(doc) == 4);
}

TEST_CASE("blowup preset echoes the derived bound") {
    const RunConfigFile c = parse_config(
        "n_nodes = 513\nhalf_width = 2\nt_end = 15\nexperiment = blowup\nic_kind = bump\nic_L = 1\nic_mass = 1\n");
    REQUIRE(c.derived_blowup_bound().has_value());
    CHECK(*c.derived_blowup_bound() == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-12));
    CHECK(c.echo().find("# derived blowup_time_upper_bound = 14.77") != std::string::npos);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK(error_line(std::string(kMinimal) + "bogus = 1\n") == 4);
    CHECK(error_line("n_nodes = 129\nn_nodes = 257\nhalf_width = 2\nt_end = 1\n") == 2);
    CHECK(error_line("n_nodes = many\nhalf_width = 2\nt_end = 1\n") == 1);
    CHECK(error_line("n_nodes = 129\nhalf_width = 2\nt_end = 1\njust words\n") == 4);
    CHECK(error_line("n_nodes = 7\nhalf_width = 2\nt_end = 1\n") == 1);
    CHECK(error_line(std::string(kMinimal) + "ic_L = 2\n") == 4);
    CHECK(error_line(std::string(kMinimal) + "experiment = party\n") == 4);
    CHECK(error_line(std::string(kMinimal) + "cfl = 0\n") == 4);
}

TEST_CASE("missing required keys") {
    CHECK(error_text("half_width = 2\nt_end = 1\n").find("n_nodes") != std::string::npos);
    CHECK(error_text("n_nodes = 65\nt_end = 1\n").find("half_width") != std::string::npos);
    CHECK(error_text("n_nodes = 65\nhalf_width = 1\n").find("t_end") != std::string::npos);
}

TEST_CASE("support parameter must be inside the domain") {
    CHECK_THROWS_AS(parse_config("n_nodes = 65\nhalf_width = 1\nt_end = 1\nic_L = 1\n"), ParseError);
    CHECK_NOTHROW(parse_config("n_nodes = 65\nhalf_width = 1\nt_end = 1\nic_L = 0.99\n"));
}

TEST_CASE("lists, presets and mass") {
    const RunConfigFile c = parse_config(
        std::string(kMinimal) +
        "snapshot_times = 0.1, 0.2,0.3\nic_kind = gaussian_truncated\nic_sigma = 0.3\nic_mass = none\n"
        "sweep_epsilons = 0.02, 0.01\nseed = 99\n");
    CHECK(c.snapshot_times == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(c.ic.kind == InitialKind::gaussian_truncated);
    CHECK(c.ic.sigma == 0.3);
    CHECK_FALSE(c.ic.mass.has_value());
    CHECK(c.sweep_epsilons == std::vector<double>{0.02, 0.01});
    CHECK(c.seed == 99);
}

TEST_CASE("convergence presets are limited to short horizons") {
    CHECK_THROWS_AS(parse_config("n_nodes = 129\nhalf_width = 2\nt_end = 1\nexperiment = convergence\n"),
                    ParseError);
    CHECK_NOTHROW(parse_config("n_nodes = 129\nhalf_width = 2\nt_end = 0.25\nexperiment = convergence\n"));
}

TEST_CASE("property: echo round-trips") {
    testgen::Gen gen(61);
    const char* kinds[] = {"zero", "bump", "gaussian_truncated", "indicator_smoothed"};
    const char* experiments[] = {"single", "eps_sweep", "blowup", "convcheck"};
    for (int trial = 0; trial < 100; ++trial) {
        std::ostringstream doc;
        const double A = gen.uniform(1.0, 6.0);
        const double L = gen.uniform(0.2, 0.95) * A;
        doc << "n_nodes = " << gen.index(8, 5000) << '\n'
            << "half_width = " << A << '\n'
            << "t_end = " << gen.uniform(0.01, 20.0) << '\n'
            << "epsilon = " << gen.uniform(0.0, 0.1) << '\n'
            << "cfl = " << gen.uniform(0.05, 1.0) << '\n'
            << "experiment = " << experiments[gen.index(0, 3)] << '\n'
            << "ic_kind = " << kinds[gen.index(0, 3)] << '\n'
            << "ic_L = " << L << '\n'
            << "ic_ramp = " << gen.uniform(0.05, 1.0) * L << '\n'
            << "ic_amplitude = " << gen.uniform(0.1, 3.0) << '\n'
            << "seed = " << gen.index(0, 1000000) << '\n';
        const RunConfigFile a = parse_config(doc.str());
        const RunConfigFile b = parse_config(a.echo());
        CHECK(b.echo() == a.echo());
        CHECK(b.n_nodes == a.n_nodes);
        CHECK(b.t_end == a.t_end);
        CHECK(b.epsilon == a.epsilon);
        CHECK(b.ic.L == a.ic.L);
    }
}

TEST_CASE("load_config reports unreadable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/config.cfg"), Error);
}

}
