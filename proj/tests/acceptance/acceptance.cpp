// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 2 5 7      run a subset

#include "aggdiff/config.hpp"
#include "aggdiff/experiment.hpp"
#include "aggdiff/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace aggdiff;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::string kBump = "ic_kind = bump\nic_L = 1\nic_amplitude = 1\nic_mass = 1\n";

RunConfigFile doc(const std::string& body) {
    return parse_config(body);
}

// ---------------------------------------------------------------------------

Outcome convolution_oracles() {
    const auto start = Clock::now();
    RunConfigFile cfg = doc("n_nodes = 65\nhalf_width = 2\nt_end = 1\nexperiment = convcheck\n"
                            "convcheck_fields = 100\nseed = 1\n");
    const ConvcheckResult r = run_convcheck(cfg);
    const double elapsed = seconds_since(start);
    std::string detail;
    for (const auto& s : r.sizes) {
        detail += "N=" + std::to_string(s.n_nodes) + " k " + fmt("%.2e", s.max_rel_err_k) + " dk " +
                  fmt("%.2e", s.max_rel_err_dk) + "; ";
    }
    for (const auto& q : r.quadrature) {
        detail += q.label + " err " + fmt("%.2e", std::abs(q.measured - q.expected)) + " (tol " +
                  fmt("%.0e", q.tolerance) + "); ";
    }
    detail += fmt("%.1f s", elapsed);
    return {r.passed() && elapsed < 10.0, detail};
}

struct StandardRun {
    RunReport report;
    double elapsed = 0.0;
    double initial_norm_2 = 0.0;
    double initial_sup = 0.0;
};

const StandardRun& standard_run() {
    static std::optional<StandardRun> cached;
    if (!cached) {
        const auto start = Clock::now();
        const RunConfigFile cfg =
            doc("n_nodes = 513\nhalf_width = 2\nepsilon = 0\nt_end = 1\noutput_stride = 1\n" + kBump);
        SingleResult r = run_single(cfg);
        StandardRun s{std::move(r.report), seconds_since(start), 0.0, 0.0};
        s.initial_norm_2 = s.report.records.front().norm_2;
        s.initial_sup = s.report.records.front().norm_inf;
        cached = std::move(s);
    }
    return *cached;
}

Outcome mass_conservation() {
    const StandardRun& s = standard_run();
    double worst = 0.0;
    for (const auto& r : s.report.records) {
        worst = std::max(worst, std::abs(r.mass - 1.0));
    }
    const bool ok = worst <= 1e-10 && s.report.status == RunStatus::completed && s.elapsed < 30.0;
    return {ok, "max |mass - 1| = " + fmt("%.2e", worst) + " over " +
                    std::to_string(s.report.records.size()) + " records, " + fmt("%.1f s", s.elapsed)};
}

Outcome l2_gronwall() {
    const StandardRun& s = standard_run();
    double worst = 0.0;
    bool ok = s.report.status == RunStatus::completed;
    for (const auto& r : s.report.records) {
        const double ratio = r.norm_2 / (s.initial_norm_2 * std::exp(r.t));
        worst = std::max(worst, ratio);
        ok = ok && r.norm_2 <= s.initial_norm_2 * std::exp(r.t) * 1.05;
    }
    return {ok, "max ||u||_2 / (||u0||_2 e^t) = " + fmt("%.6f", worst) + " (allowed 1.05)"};
}

Outcome positivity() {
    const StandardRun& s = standard_run();
    double worst = HUGE_VAL;
    for (const auto& r : s.report.records) {
        worst = std::min(worst, r.min_u);
    }
    const double floor = -1e-10 * s.initial_sup;
    return {worst >= floor && s.report.status == RunStatus::completed,
            "min u = " + fmt("%.3e", worst) + " (floor " + fmt("%.3e", floor) + ")"};
}

// ---------------------------------------------------------------------------

struct BlowupRun {
    BlowupResult result;
    double elapsed = 0.0;
    double bound = 0.0;
};

const BlowupRun& blowup_run(std::size_t n_nodes) {
    static std::map<std::size_t, BlowupRun> cache;
    auto it = cache.find(n_nodes);
    if (it == cache.end()) {
        const auto start = Clock::now();
        RunConfigFile cfg = doc("n_nodes = " + std::to_string(n_nodes) +
                                "\nhalf_width = 2\nepsilon = 0\nt_end = 1\nexperiment = blowup\n"
                                "grad_blowup_factor = 1e4\ntracked_particles = 64\n" + kBump);
        const double bound = cfg.derived_blowup_bound().value();
        cfg.t_end = bound;
        BlowupResult r = run_blowup(cfg);
        it = cache.emplace(n_nodes, BlowupRun{std::move(r), seconds_since(start), bound}).first;
    }
    return it->second;
}

Outcome gradient_blowup() {
    bool ok = true;
    std::string detail;
    double total = 0.0;
    std::vector<double> times;
    for (std::size_t n : {257u, 513u}) {
        const BlowupRun& b = blowup_run(n);
        const RunReport& rep = b.result.report;
        total += b.elapsed;
        const double sup_max = rep.blowup ? rep.blowup->observed_sup_norm_max : HUGE_VAL;
        const double grad_final = rep.records.empty() ? 0.0 : rep.records.back().grad_inf;
        const double threshold =
            rep.config_echo.grad_blowup_factor * (rep.records.front().grad_inf + 1.0);
        detail += "N=" + std::to_string(n) + ": status " + std::string(to_string(rep.status));
        if (b.result.blowup_observed) {
            times.push_back(*rep.blowup->observed_blowup_time);
            detail += fmt(", t_b %.4f", times.back());
        } else {
            detail += fmt(", no threshold crossing by t = %.4f", rep.records.back().t);
        }
        detail += fmt(" (bound %.4f)", b.bound) + fmt(", final grad %.3g", grad_final) +
                  fmt(" vs threshold %.3g", threshold) +
                  fmt(", max sup %.4f", sup_max) + fmt(" vs 10 x %.4f", b.result.initial_sup_norm) +
                  ", bound violations " + std::to_string(rep.bound_violations.size()) + "; ";
        ok = ok && b.result.within_bound && b.result.norms_bounded;
    }
    if (times.size() == 2) {
        const double rel = std::abs(times[0] - times[1]) / std::max(times[0], times[1]);
        detail += fmt("resolution agreement %.3f (allowed 0.25); ", rel);
        ok = ok && rel <= 0.25;
    } else {
        ok = false;
    }
    detail += fmt("%.1f s", total);
    return {ok && total < 300.0, detail};
}

Outcome characteristics() {
    const BlowupRun& b = blowup_run(513);
    const CharacteristicsCheck& c = b.result.characteristics;
    const double dx = b.result.report.config_echo.grid.spacing();
    std::string detail = std::string("ordered ") + (c.ordered ? "yes" : "no") +
                         fmt(", max left retreat %.2e", c.max_left_retreat) +
                         fmt(", max right advance %.2e", c.max_right_advance) +
                         fmt(" (slack %.0e per step)", kEdgeStepSlack) +
                         fmt(", max excursion %.2e", c.max_excursion) + fmt(" (dx %.2e)", dx) +
                         fmt(", left-edge speed %.5f", c.initial_speed.observed_speed) +
                         fmt(" vs 0.95 x %.5f", c.initial_speed.lower_bound) + ", frames " +
                         std::to_string(c.frames.size());
    for (const auto& f : c.failures) {
        detail += "; " + f;
    }
    return {c.passed() && c.frames.size() == b.result.report.records.size(), detail};
}

// ---------------------------------------------------------------------------

Outcome eps_contraction() {
    const auto start = Clock::now();
    const RunConfigFile cfg = doc("n_nodes = 513\nhalf_width = 2\nt_end = 0.5\nexperiment = eps_sweep\n"
                                  "sweep_epsilons = 1e-2, 5e-3, 2.5e-3\n" + kBump);
    const SweepResult s = run_eps_sweep(cfg);
    const double elapsed = seconds_since(start);
    const double ratio = s.ratios.at(0);
    return {ratio >= 0.3 && ratio <= 0.8 && elapsed < 120.0,
            fmt("D(1e-2) = %.4e", s.distances[0]) + fmt(", D(5e-3) = %.4e", s.distances[1]) +
                fmt(", ratio %.4f (allowed [0.3, 0.8]), ", ratio) + fmt("%.1f s", elapsed)};
}

Outcome cross_scheme() {
    const auto start = Clock::now();
    const RunConfigFile cfg = doc("n_nodes = 129\nhalf_width = 2\nepsilon = 0.01\nt_end = 0.25\n"
                                  "experiment = convergence\nconvergence_levels = 3\n"
                                  "reference_n_nodes = 4097\nreference_cfl = 0.1\n" + kBump);
    const ConvergenceResult c = run_convergence(cfg);
    const double elapsed = seconds_since(start);
    bool ok = c.levels.size() == 3 && c.levels.back().relative_error <= 5e-3 && elapsed < 180.0;
    std::string detail;
    for (const auto& lv : c.levels) {
        detail += "N=" + std::to_string(lv.n_nodes) + fmt(" err/||u0||_2 %.4e", lv.relative_error);
        if (lv.ratio) {
            detail += fmt(" ratio %.4f", *lv.ratio);
            ok = ok && *lv.ratio >= 0.2 && *lv.ratio <= 0.35;
        }
        detail += "; ";
    }
    detail += "allowed err 5e-3, ratios [0.2, 0.35]; " + fmt("%.1f s", elapsed);
    return {ok, detail};
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            out[fs::relative(e.path(), root).string()] = s.str();
        }
    }
    return out;
}

Outcome determinism() {
    const fs::path root = fs::current_path() / "acceptance_determinism";
    const std::vector<std::pair<std::string, std::string>> configs = {
        {"single", "n_nodes = 257\nhalf_width = 2\nt_end = 0.5\nsnapshot_times = 0.1, 0.25\n" + kBump},
        {"eps_sweep", "n_nodes = 129\nhalf_width = 2\nt_end = 0.1\nexperiment = eps_sweep\n" + kBump},
        {"blowup", "n_nodes = 129\nhalf_width = 2\nt_end = 1\nexperiment = blowup\n" + kBump},
        {"convergence", "n_nodes = 33\nhalf_width = 2\nt_end = 0.02\nepsilon = 0.01\n"
                        "experiment = convergence\nconvergence_levels = 2\nreference_n_nodes = 257\n" + kBump},
        {"convcheck", "n_nodes = 65\nhalf_width = 2\nt_end = 1\nexperiment = convcheck\n"
                      "convcheck_fields = 5\nseed = 7\n"},
    };
    bool ok = true;
    std::string detail;
    std::size_t files = 0;
    for (const auto& [name, body] : configs) {
        const fs::path out = root / name;
        fs::remove_all(out);
        const RunConfigFile cfg = parse_config(body + "output_dir = " + out.string() + "\n");
        const int code1 = run_experiment(cfg);
        const auto first = read_tree(out);
        fs::remove_all(out);
        const RunConfigFile replay = parse_config(first.at("config_echo.cfg"));
        const int code2 = run_experiment(replay);
        const auto second = read_tree(out);
        const bool same = code1 == code2 && first == second;
        files += first.size();
        if (!same) {
            detail += name + " differs; ";
        }
        ok = ok && same;
    }
    fs::remove_all(root);
    detail += std::to_string(configs.size()) + " configs, " + std::to_string(files) +
              " files compared after replaying config_echo";
    return {ok, detail};
}

// ---------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> selected;
    app.add_option("criteria", selected, "criterion numbers (default: all)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {1, "convolution oracle equivalence", convolution_oracles},
        {2, "mass conservation", mass_conservation},
        {3, "L2 Gronwall bound", l2_gronwall},
        {4, "positivity", positivity},
        {5, "finite-time gradient blowup with bounded norms", gradient_blowup},
        {6, "epsilon contraction", eps_contraction},
        {7, "characteristics", characteristics},
        {8, "cross-scheme consistency", cross_scheme},
        {9, "determinism", determinism},
    };

    int failures = 0;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
