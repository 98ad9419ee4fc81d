#include "aggdiff/experiment.hpp"

#include "aggdiff/error.hpp"
#include "aggdiff/initial_condition.hpp"
#include "aggdiff/kernel.hpp"
#include "aggdiff/oracle.hpp"
#include "aggdiff/report_io.hpp"
#include "aggdiff/solver.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace aggdiff {

using detail::format_double;
using detail::format_fixed;
namespace fs = std::filesystem;

std::string_view version() noexcept {
    return AGGDIFF_VERSION_STRING;
}

namespace {

std::vector<double> sorted_snapshot_times(const RunConfigFile& cfg) {
    std::vector<double> times;
    for (double t : cfg.snapshot_times) {
        if (t >= 0.0 && t <= cfg.t_end) {
            times.push_back(t);
        }
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

RunHooks snapshot_hooks(const RunConfigFile& cfg, std::vector<std::pair<double, Field>>& out) {
    RunHooks hooks;
    hooks.landing_times = sorted_snapshot_times(cfg);
    auto times = hooks.landing_times;
    hooks.on_landing = [&out, times, next = std::size_t{0}](double, const Field& u) mutable {
        out.emplace_back(times.at(next++), u);
    };
    return hooks;
}

std::string timeseries(const RunReport& report) {
    std::string out;
    for (const auto& r : report.records) {
        out += to_ndjson(r);
        out += '\n';
    }
    return out;
}

std::string snapshot_name(double t) {
    return "snapshot_t" + format_fixed(t) + ".csv";
}

double l2_distance(const Field& a, const Field& b) {
    return lp_norm(a - b, 2.0);
}

void log_line(const ExperimentOptions& options, const std::string& line) {
    if (options.log) {
        *options.log << line << '\n';
    }
}

bool is_numerical_failure(const RunReport& report) {
    return report.status == RunStatus::dt_underflow;
}

std::string violations_text(const RunReport& report) {
    std::string out;
    for (const auto& v : report.bound_violations) {
        out += "  " + v.bound + " at t = " + format_double(v.t) + ": measured " +
               format_double(v.measured) + ", allowed " + format_double(v.allowed) + '\n';
    }
    return out;
}

void write_run_files(const fs::path& dir, const RunReport& report, const RunConfigFile& cfg,
                     const Field& final_field,
                     const std::vector<std::pair<double, Field>>& snapshots) {
    write_file(dir / "timeseries.ndjson", timeseries(report));
    write_file(dir / "report.json", report_json(report, &cfg));
    write_file(dir / "final.csv", snapshot_csv(final_field));
    for (const auto& [t, u] : snapshots) {
        write_file(dir / snapshot_name(t), snapshot_csv(u));
    }
}

} // namespace

SingleResult run_single(const RunConfigFile& cfg) {
    const SolverConfig sc = cfg.solver_config();
    const Field u0 = cfg.ic.sample(sc.grid);
    std::vector<std::pair<double, Field>> snapshots;
    Field final_field = u0;
    RunHooks hooks = snapshot_hooks(cfg, snapshots);
    hooks.on_step = [&final_field](const Field&, const Field& after, double, double) {
        final_field = after;
    };
    RunReport report = run(u0, sc, hooks);
    return SingleResult{std::move(report), std::move(final_field), std::move(snapshots)};
}

bool SweepResult::ratios_in_range() const {
    return std::all_of(ratios.begin(), ratios.end(),
                       [this](double q) { return q >= ratio_low && q <= ratio_high; });
}

SweepResult run_eps_sweep(const RunConfigFile& cfg) {
    if (cfg.sweep_epsilons.size() < 2) {
        throw Error("eps_sweep needs at least two epsilons");
    }
    SweepResult result;
    for (double eps : cfg.sweep_epsilons) {
        RunConfigFile sub = cfg;
        sub.epsilon = eps;
        SingleResult run = run_single(sub);
        result.epsilons.push_back(eps);
        result.reports.push_back(std::move(run.report));
        result.finals.push_back(std::move(run.final_field));
    }
    for (std::size_t i = 0; i + 1 < result.finals.size(); ++i) {
        result.distances.push_back(l2_distance(result.finals[i], result.finals[i + 1]));
    }
    for (std::size_t i = 0; i + 1 < result.distances.size(); ++i) {
        result.ratios.push_back(result.distances[i] > 0.0
                                    ? result.distances[i + 1] / result.distances[i]
                                    : HUGE_VAL);
    }
    return result;
}

bool CharacteristicsCheck::passed() const {
    return ordered && edges_monotone && confined &&
           initial_speed.observed_speed >= speed_slack * initial_speed.lower_bound;
}

BlowupResult run_blowup(const RunConfigFile& cfg) {
    const SolverConfig sc = cfg.solver_config();
    const Field u0 = cfg.ic.sample(sc.grid);
    const double L = cfg.ic.L;
    const double dx = sc.grid.spacing();

    std::vector<std::pair<double, Field>> snapshots;
    Field final_field = u0;
    CharacteristicsCheck check;
    CharacteristicSet chars = CharacteristicSet::seed_uniform(-L, L, cfg.tracked_particles);
    check.initial_speed = boundary_speed_check(u0, -L, L, sc.kernel);
    if (!(check.initial_speed.observed_speed >= check.speed_slack * check.initial_speed.lower_bound)) {
        check.failures.push_back("left-edge speed " +
                                 format_double(check.initial_speed.observed_speed) +
                                 " below 0.95 x " + format_double(check.initial_speed.lower_bound));
    }

    auto note_failure = [&check](bool& flag, const std::string& what) {
        if (flag) {
            check.failures.push_back(what);
        }
        flag = false;
    };

    RunHooks hooks = snapshot_hooks(cfg, snapshots);
    bool tracking = true;
    hooks.on_step = [&](const Field& before, const Field& after, double t_after, double dt) {
        final_field = after;
        if (!tracking) {
            return;
        }
        const double left_before = chars.positions.front();
        const double right_before = chars.positions.back();
        try {
            chars = advect(chars, before, after, dt, sc.kernel);
        } catch (const Error& e) {
            tracking = false;
            note_failure(check.confined, std::string(e.what()) + " at t = " + format_double(t_after));
            return;
        }
        chars.t = t_after;
        const double retreat = left_before - chars.positions.front();
        const double advance = chars.positions.back() - right_before;
        check.max_left_retreat = std::max(check.max_left_retreat, retreat);
        check.max_right_advance = std::max(check.max_right_advance, advance);
        if (retreat > kEdgeStepSlack || advance > kEdgeStepSlack) {
            note_failure(check.edges_monotone,
                         "edge particle moved outward at t = " + format_double(t_after));
        }
        if (!chars.strictly_ordered()) {
            note_failure(check.ordered, "particle order lost at t = " + format_double(t_after));
        }
        const double excursion = std::max(-L - chars.positions.front(), chars.positions.back() - L);
        check.max_excursion = std::max(check.max_excursion, excursion);
        if (excursion > dx) {
            note_failure(check.confined, "particle left [-L - dx, L + dx] at t = " +
                                             format_double(t_after));
        }
    };
    hooks.on_record = [&](const DiagnosticsRecord& rec) {
        check.frames.push_back(CharacteristicFrame{rec.t, chars.positions});
    };

    RunReport report = run(u0, sc, hooks);

    BlowupResult result{std::move(report), std::move(final_field), std::move(snapshots),
                        std::move(check)};
    RunReport& rep = result.report;
    result.initial_sup_norm = lp_norm(u0, kInfNorm);

    if (!(integral(u0) > 0.0) || !(L > 0.0)) {
        rep.notes.emplace_back("no positive mass; blowup bound not applicable");
        return result;
    }
    BlowupReport b = BlowupReport::from_bound(L, integral(u0));
    double sup_max = 0.0;
    for (const auto& r : rep.records) {
        sup_max = std::max(sup_max, r.norm_inf);
    }
    b.observed_sup_norm_max = sup_max;
    b.observed_final_grad_inf = rep.records.empty() ? 0.0 : rep.records.back().grad_inf;
    if (rep.status == RunStatus::blowup_detected && rep.first_threshold_time) {
        b.observed_blowup_time = rep.first_threshold_time;
    } else if (rep.status == RunStatus::dt_underflow && !rep.records.empty()) {
        b.observed_blowup_time = rep.records.back().t;
        rep.notes.emplace_back("step-size underflow counted as numerical blowup at the last record");
    }
    result.blowup_observed = b.observed_blowup_time.has_value();
    result.within_bound = result.blowup_observed && *b.observed_blowup_time < b.blowup_time_upper_bound;
    result.norms_bounded = std::isfinite(sup_max) &&
                           sup_max < kNormGrowthGuard * result.initial_sup_norm &&
                           rep.bound_violations.empty();
    if (!result.blowup_observed) {
        rep.notes.emplace_back("gradient threshold not reached by t = " +
                               format_double(rep.records.empty() ? 0.0 : rep.records.back().t));
    }
    rep.blowup = b;
    return result;
}

ConvergenceResult run_convergence(const RunConfigFile& cfg) {
    if (cfg.convergence_levels < 1) {
        throw Error("convergence needs at least one level");
    }
    const std::size_t finest_factor = std::size_t{1} << (cfg.convergence_levels - 1);
    const std::size_t finest_n = (cfg.n_nodes - 1) * finest_factor + 1;

    RunConfigFile fine_cfg = cfg;
    fine_cfg.n_nodes = finest_n;
    const SolverConfig fine_sc = fine_cfg.solver_config();
    const Field reference =
        reference_solve(cfg.ic.scaled_profile(fine_sc.grid), fine_sc, cfg.oracle);

    ConvergenceResult result;
    result.reference_n_nodes = cfg.oracle.reference_n_nodes;
    for (std::size_t level = 0; level < cfg.convergence_levels; ++level) {
        const std::size_t factor = std::size_t{1} << level;
        RunConfigFile sub = cfg;
        sub.n_nodes = (cfg.n_nodes - 1) * factor + 1;
        const SolverConfig sc = sub.solver_config();
        const Field u0 = cfg.ic.sample(sc.grid);
        Field final_field = u0;
        RunHooks hooks;
        hooks.on_step = [&final_field](const Field&, const Field& after, double, double) {
            final_field = after;
        };
        const RunReport report = run(u0, sc, hooks);
        if (report.status != RunStatus::completed) {
            throw Error("convergence run at N = " + std::to_string(sub.n_nodes) +
                        " ended with status " + std::string(to_string(report.status)));
        }
        const std::size_t stride = finest_factor / factor;
        Field restricted(sc.grid);
        for (std::size_t j = 0; j < restricted.size(); ++j) {
            restricted[j] = reference[j * stride];
        }
        ConvergenceLevel lv;
        lv.n_nodes = sub.n_nodes;
        lv.spacing = sc.grid.spacing();
        lv.error_l2 = l2_distance(final_field, restricted);
        const double norm0 = lp_norm(u0, 2.0);
        lv.relative_error = norm0 > 0.0 ? lv.error_l2 / norm0 : lv.error_l2;
        if (!result.levels.empty() && result.levels.back().relative_error > 0.0) {
            lv.ratio = lv.relative_error / result.levels.back().relative_error;
        }
        result.levels.push_back(lv);
    }
    return result;
}

double max_relative_error(const Field& a, const Field& b) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        diff = std::max(diff, std::abs(a[j] - b[j]));
        scale = std::max(scale, std::abs(b[j]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

bool QuadratureCheck::passed() const {
    return std::abs(measured - expected) <= tolerance;
}

bool ConvcheckResult::passed() const {
    for (const auto& s : sizes) {
        if (!(s.max_rel_err_k <= sweep_tolerance && s.max_rel_err_dk <= sweep_tolerance)) {
            return false;
        }
    }
    return std::all_of(quadrature.begin(), quadrature.end(),
                       [](const QuadratureCheck& q) { return q.passed(); });
}

ConvcheckResult run_convcheck(const RunConfigFile& cfg) {
    ConvcheckResult result;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (std::size_t n : {std::size_t{65}, std::size_t{257}, std::size_t{1025}}) {
        const Grid grid(cfg.half_width, n);
        const KernelSpec spec = KernelSpec::exponential(grid);
        ConvcheckSize size;
        size.n_nodes = n;
        size.fields = cfg.convcheck_fields;
        for (std::size_t f = 0; f < cfg.convcheck_fields; ++f) {
            Field u(grid);
            for (std::size_t j = 0; j < n; ++j) {
                u[j] = value(rng);
            }
            size.max_rel_err_k =
                std::max(size.max_rel_err_k, max_relative_error(conv_k(u, spec), conv_k_direct(u, spec)));
            size.max_rel_err_dk = std::max(size.max_rel_err_dk,
                                           max_relative_error(conv_dk(u, spec), conv_dk_direct(u, spec)));
        }
        result.sizes.push_back(size);
    }

    const double closed_form = 2.0 * (1.0 - std::exp(-1.0));
    const AnalyticProfile indicator = AnalyticProfile::indicator(-1.0, 1.0);
    result.quadrature.push_back(QuadratureCheck{"quadrature indicator(-1,1) K*u(0)", closed_form,
                                                quadrature_conv(indicator, 0.0, 0, cfg.oracle),
                                                1e-10});
    result.quadrature.push_back(QuadratureCheck{"quadrature indicator(-1,1) dK*u(0)", 0.0,
                                                quadrature_conv(indicator, 0.0, 1, cfg.oracle),
                                                1e-10});

    const Grid grid401(2.0, 401);
    const Field ind = Field::sample(grid401, [](double x) {
        const double d = std::abs(x) - 1.0;
        if (std::abs(d) < 1e-12) {
            return 0.5;
        }
        return d < 0.0 ? 1.0 : 0.0;
    });
    const Field k401 = conv_k(ind, KernelSpec::exponential(grid401));
    result.quadrature.push_back(
        QuadratureCheck{"sweep indicator(-1,1) K*u(0) at N = 401", closed_form, k401[200], 5e-3});
    return result;
}

namespace {

std::string sweep_table(const SweepResult& s) {
    std::ostringstream out;
    out << "epsilon,epsilon_next,distance_l2,ratio\n";
    for (std::size_t i = 0; i < s.distances.size(); ++i) {
        out << format_double(s.epsilons[i]) << ',' << format_double(s.epsilons[i + 1]) << ','
            << detail::format_g17(s.distances[i]) << ',';
        if (i > 0) {
            out << detail::format_g17(s.ratios[i - 1]);
        }
        out << '\n';
    }
    return out.str();
}

std::string characteristics_ndjson(const CharacteristicsCheck& c) {
    std::string out;
    for (const auto& frame : c.frames) {
        out += "{\"t\":" + format_fixed(frame.t) + ",\"positions\":[";
        for (std::size_t i = 0; i < frame.positions.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += format_double(frame.positions[i]);
        }
        out += "]}\n";
    }
    return out;
}

std::string convergence_table(const ConvergenceResult& c) {
    std::ostringstream out;
    out << "n_nodes,spacing,error_l2,relative_error,ratio\n";
    for (const auto& lv : c.levels) {
        out << lv.n_nodes << ',' << format_double(lv.spacing) << ',' << detail::format_g17(lv.error_l2)
            << ',' << detail::format_g17(lv.relative_error) << ',';
        if (lv.ratio) {
            out << detail::format_g17(*lv.ratio);
        }
        out << '\n';
    }
    return out.str();
}

std::string convcheck_table(const ConvcheckResult& c) {
    std::ostringstream out;
    out << "check,measured,expected,tolerance,pass\n";
    for (const auto& s : c.sizes) {
        out << "sweep_vs_direct_k_N" << s.n_nodes << ',' << detail::format_g17(s.max_rel_err_k)
            << ",0," << format_double(c.sweep_tolerance) << ','
            << (s.max_rel_err_k <= c.sweep_tolerance ? "true" : "false") << '\n';
        out << "sweep_vs_direct_dk_N" << s.n_nodes << ',' << detail::format_g17(s.max_rel_err_dk)
            << ",0," << format_double(c.sweep_tolerance) << ','
            << (s.max_rel_err_dk <= c.sweep_tolerance ? "true" : "false") << '\n';
    }
    for (const auto& q : c.quadrature) {
        out << '"' << q.label << "\"," << detail::format_g17(q.measured) << ','
            << detail::format_g17(q.expected) << ',' << format_double(q.tolerance) << ','
            << (q.passed() ? "true" : "false") << '\n';
    }
    return out.str();
}

int single_exit(const RunReport& report, const ExperimentOptions& options) {
    if (is_numerical_failure(report)) {
        for (const auto& n : report.notes) {
            log_line(options, "note: " + n);
        }
        return kExitNumericalFailure;
    }
    if (!report.bound_violations.empty()) {
        log_line(options, "bound violations:\n" + violations_text(report));
        return kExitBoundViolation;
    }
    return kExitOk;
}

int dispatch(const RunConfigFile& cfg, const ExperimentOptions& options) {
    const fs::path dir = cfg.output_dir;
    const bool write = options.write_outputs;
    if (write) {
        write_file(dir / "config_echo.cfg", cfg.echo());
    }

    switch (cfg.experiment) {
    case Experiment::single: {
        const SingleResult r = run_single(cfg);
        if (write) {
            write_run_files(dir, r.report, cfg, r.final_field, r.snapshots);
        }
        log_line(options, "single: status " + std::string(to_string(r.report.status)) + ", " +
                              std::to_string(r.report.records.size()) + " records");
        return single_exit(r.report, options);
    }
    case Experiment::eps_sweep: {
        const SweepResult s = run_eps_sweep(cfg);
        int code = kExitOk;
        for (std::size_t i = 0; i < s.reports.size(); ++i) {
            const fs::path sub = dir / ("eps_" + std::to_string(i));
            if (write) {
                write_run_files(sub, s.reports[i], cfg, s.finals[i], {});
            }
            code = std::max(code, single_exit(s.reports[i], options));
        }
        if (write) {
            write_file(dir / "sweep_summary.csv", sweep_table(s));
        }
        log_line(options, sweep_table(s));
        if (!s.ratios_in_range()) {
            log_line(options, "contraction ratio outside [0.3, 0.8]");
            code = std::max(code, kExitBoundViolation);
        }
        return code;
    }
    case Experiment::blowup: {
        const BlowupResult b = run_blowup(cfg);
        if (write) {
            write_run_files(dir, b.report, cfg, b.final_field, b.snapshots);
            write_file(dir / "characteristics.ndjson", characteristics_ndjson(b.characteristics));
        }
        std::string summary = "blowup: status " + std::string(to_string(b.report.status));
        if (b.report.blowup) {
            summary += ", upper bound " + format_double(b.report.blowup->blowup_time_upper_bound);
            if (b.report.blowup->observed_blowup_time) {
                summary += ", observed " + format_double(*b.report.blowup->observed_blowup_time);
            }
        }
        log_line(options, summary);
        for (const auto& f : b.characteristics.failures) {
            log_line(options, "characteristics: " + f);
        }
        if (!b.report.bound_violations.empty()) {
            log_line(options, "bound violations:\n" + violations_text(b.report));
        }
        const bool ok = b.within_bound && b.norms_bounded && b.characteristics.passed();
        return ok ? kExitOk : kExitBoundViolation;
    }
    case Experiment::convergence: {
        const ConvergenceResult c = run_convergence(cfg);
        if (write) {
            write_file(dir / "convergence.csv", convergence_table(c));
        }
        log_line(options, convergence_table(c));
        return kExitOk;
    }
    case Experiment::convcheck: {
        const ConvcheckResult c = run_convcheck(cfg);
        if (write) {
            write_file(dir / "convcheck.csv", convcheck_table(c));
        }
        log_line(options, convcheck_table(c));
        return c.passed() ? kExitOk : kExitBoundViolation;
    }
    }
    return kExitOk;
}

} // namespace

int run_experiment(const RunConfigFile& cfg, const ExperimentOptions& options) {
    try {
        return dispatch(cfg, options);
    } catch (const IoError& e) {
        log_line(options, std::string("error: ") + e.what());
        return kExitIoFailure;
    } catch (const Error& e) {
        log_line(options, std::string("error: ") + e.what());
        return kExitNumericalFailure;
    }
}

} // namespace aggdiff
