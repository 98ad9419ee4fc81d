#include "aggdiff/config.hpp"

#include "aggdiff/characteristics.hpp"
#include "aggdiff/error.hpp"
#include "format.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace aggdiff {

std::string_view to_string(Experiment e) noexcept {
    switch (e) {
    case Experiment::single: return "single";
    case Experiment::eps_sweep: return "eps_sweep";
    case Experiment::blowup: return "blowup";
    case Experiment::convergence: return "convergence";
    case Experiment::convcheck: return "convcheck";
    }
    return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

double to_double(const std::string& key, const Entry& e) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError(key + " expects a real number, got '" + e.value + "'", e.line);
    }
    return v;
}

std::uint64_t to_unsigned(const std::string& key, const Entry& e) {
    std::uint64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(key + " expects a nonnegative integer, got '" + e.value + "'", e.line);
    }
    return v;
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
    std::vector<double> out;
    if (trim(e.value).empty()) {
        return out;
    }
    std::string_view rest = e.value;
    while (true) {
        const auto comma = rest.find(',');
        const std::string item(trim(rest.substr(0, comma)));
        out.push_back(to_double(key, Entry{item, e.line}));
        if (comma == std::string_view::npos) {
            break;
        }
        rest = rest.substr(comma + 1);
    }
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += detail::format_double(xs[i]);
    }
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "n_nodes",       "half_width",       "epsilon",          "r_coeff",
        "cfl",           "t_end",            "dt_min",           "grad_blowup_factor",
        "output_stride", "experiment",       "ic_kind",          "ic_L",
        "ic_amplitude",  "ic_mass",          "ic_sigma",         "ic_ramp",
        "ic_path",       "snapshot_times",   "output_dir",       "seed",
        "sweep_epsilons", "tracked_particles", "reference_n_nodes", "reference_cfl",
        "convergence_levels", "convcheck_fields"};
    return keys;
}

} // namespace

RunConfigFile parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected 'key = value'", lineno);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ParseError("empty key", lineno);
        }
        bool known = false;
        for (const auto& k : known_keys()) {
            known = known || k == key;
        }
        if (!known) {
            throw ParseError("unknown key '" + key + "'", lineno);
        }
        if (entries.count(key)) {
            throw ParseError("duplicate key '" + key + "'", lineno);
        }
        entries[key] = Entry{value, lineno};
    }

    RunConfigFile cfg;
    auto line_of = [&](const std::string& key) {
        const auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    };
    auto require = [&](const std::string& key) -> const Entry& {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            throw ParseError("missing required key '" + key + "'", 0);
        }
        return it->second;
    };
    auto real = [&](const std::string& key, double& out) {
        if (const auto it = entries.find(key); it != entries.end()) {
            out = to_double(key, it->second);
        }
    };
    auto count = [&](const std::string& key, std::size_t& out) {
        if (const auto it = entries.find(key); it != entries.end()) {
            out = static_cast<std::size_t>(to_unsigned(key, it->second));
        }
    };

    cfg.n_nodes = static_cast<std::size_t>(to_unsigned("n_nodes", require("n_nodes")));
    cfg.half_width = to_double("half_width", require("half_width"));
    cfg.t_end = to_double("t_end", require("t_end"));
    real("epsilon", cfg.epsilon);
    real("r_coeff", cfg.r_coeff);
    real("cfl", cfg.cfl);
    real("dt_min", cfg.dt_min);
    real("grad_blowup_factor", cfg.grad_blowup_factor);
    count("output_stride", cfg.output_stride);

    if (const auto it = entries.find("experiment"); it != entries.end()) {
        bool found = false;
        for (auto e : {Experiment::single, Experiment::eps_sweep, Experiment::blowup,
                       Experiment::convergence, Experiment::convcheck}) {
            if (to_string(e) == it->second.value) {
                cfg.experiment = e;
                found = true;
            }
        }
        if (!found) {
            throw ParseError("unknown experiment '" + it->second.value + "'", it->second.line);
        }
    }

    if (const auto it = entries.find("ic_kind"); it != entries.end()) {
        const auto kind = initial_kind_from(it->second.value);
        if (!kind) {
            throw ParseError("unknown ic_kind '" + it->second.value + "'", it->second.line);
        }
        cfg.ic.kind = *kind;
    }
    real("ic_L", cfg.ic.L);
    real("ic_amplitude", cfg.ic.amplitude);
    if (const auto it = entries.find("ic_mass"); it != entries.end()) {
        if (it->second.value == "none") {
            cfg.ic.mass.reset();
        } else {
            cfg.ic.mass = to_double("ic_mass", it->second);
        }
    }
    real("ic_sigma", cfg.ic.sigma);
    real("ic_ramp", cfg.ic.ramp);
    if (const auto it = entries.find("ic_path"); it != entries.end()) {
        cfg.ic.path = it->second.value;
    }
    if (const auto it = entries.find("snapshot_times"); it != entries.end()) {
        cfg.snapshot_times = to_list("snapshot_times", it->second);
    }
    if (const auto it = entries.find("output_dir"); it != entries.end()) {
        cfg.output_dir = it->second.value;
    }
    if (const auto it = entries.find("seed"); it != entries.end()) {
        cfg.seed = to_unsigned("seed", it->second);
    }
    if (const auto it = entries.find("sweep_epsilons"); it != entries.end()) {
        cfg.sweep_epsilons = to_list("sweep_epsilons", it->second);
    }
    count("tracked_particles", cfg.tracked_particles);
    count("reference_n_nodes", cfg.oracle.reference_n_nodes);
    real("reference_cfl", cfg.oracle.reference_cfl);
    count("convergence_levels", cfg.convergence_levels);
    count("convcheck_fields", cfg.convcheck_fields);

    // validation
    if (cfg.n_nodes < kMinNodes) {
        throw ParseError("n_nodes must be ≥ 8", line_of("n_nodes"));
    }
    if (!(cfg.half_width > 0.0)) {
        throw ParseError("half_width must be > 0", line_of("half_width"));
    }
    if (!(cfg.t_end > 0.0)) {
        throw ParseError("t_end must be > 0", line_of("t_end"));
    }
    if (cfg.epsilon < 0.0) {
        throw ParseError("epsilon must be ≥ 0", line_of("epsilon"));
    }
    if (!(cfg.r_coeff > 0.0)) {
        throw ParseError("r_coeff must be > 0", line_of("r_coeff"));
    }
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) {
        throw ParseError("cfl must lie in (0, 1]", line_of("cfl"));
    }
    if (!(cfg.dt_min > 0.0)) {
        throw ParseError("dt_min must be > 0", line_of("dt_min"));
    }
    if (!(cfg.grad_blowup_factor > 0.0)) {
        throw ParseError("grad_blowup_factor must be > 0", line_of("grad_blowup_factor"));
    }
    if (cfg.output_stride == 0) {
        throw ParseError("output_stride must be ≥ 1", line_of("output_stride"));
    }
    if (!(cfg.ic.L > 0.0)) {
        throw ParseError("ic_L must be > 0", line_of("ic_L"));
    }
    if (!(cfg.ic.L < cfg.half_width)) {
        throw ParseError("ic_L must be < half_width", line_of("ic_L"));
    }
    if (!(cfg.ic.sigma > 0.0)) {
        throw ParseError("ic_sigma must be > 0", line_of("ic_sigma"));
    }
    if (cfg.ic.kind == InitialKind::indicator_smoothed &&
        !(cfg.ic.ramp > 0.0 && cfg.ic.ramp <= cfg.ic.L)) {
        throw ParseError("ic_ramp must lie in (0, ic_L]", line_of("ic_ramp"));
    }
    if (cfg.ic.kind == InitialKind::custom_csv && cfg.ic.path.empty()) {
        throw ParseError("ic_kind = custom_csv needs ic_path", line_of("ic_kind"));
    }
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        const double t = cfg.snapshot_times[i];
        if (t < 0.0 || (i > 0 && !(t > cfg.snapshot_times[i - 1]))) {
            throw ParseError("snapshot_times must be nonnegative and increasing",
                             line_of("snapshot_times"));
        }
    }
    if (cfg.output_dir.empty()) {
        throw ParseError("output_dir must not be empty", line_of("output_dir"));
    }
    if (cfg.experiment == Experiment::eps_sweep) {
        if (cfg.sweep_epsilons.size() < 2) {
            throw ParseError("sweep_epsilons needs at least two values", line_of("sweep_epsilons"));
        }
        for (double e : cfg.sweep_epsilons) {
            if (!(e > 0.0)) {
                throw ParseError("sweep_epsilons must be > 0", line_of("sweep_epsilons"));
            }
        }
    }
    if (cfg.experiment == Experiment::blowup && cfg.tracked_particles < 2) {
        throw ParseError("tracked_particles must be ≥ 2", line_of("tracked_particles"));
    }
    if (cfg.experiment == Experiment::convergence) {
        if (cfg.t_end > 0.5) {
            throw ParseError("convergence runs need t_end ≤ 0.5", line_of("t_end"));
        }
        if (cfg.convergence_levels < 2) {
            throw ParseError("convergence_levels must be ≥ 2", line_of("convergence_levels"));
        }
        const std::size_t finest = (cfg.n_nodes - 1) * (std::size_t{1} << (cfg.convergence_levels - 1)) + 1;
        if (cfg.oracle.reference_n_nodes <= finest) {
            throw ParseError("reference_n_nodes must exceed the finest convergence grid",
                             line_of("reference_n_nodes"));
        }
    }
    if (!(cfg.oracle.reference_cfl > 0.0 && cfg.oracle.reference_cfl <= 0.5)) {
        throw ParseError("reference_cfl must lie in (0, 0.5]", line_of("reference_cfl"));
    }
    if (cfg.convcheck_fields == 0) {
        throw ParseError("convcheck_fields must be ≥ 1", line_of("convcheck_fields"));
    }
    return cfg;
}

RunConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open config '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SolverConfig RunConfigFile::solver_config() const {
    SolverConfig sc(Grid(half_width, n_nodes));
    sc.epsilon = epsilon;
    sc.r_coeff = r_coeff;
    sc.cfl = cfl;
    sc.t_end = t_end;
    sc.dt_min = dt_min;
    sc.grad_blowup_factor = grad_blowup_factor;
    sc.output_stride = output_stride;
    return sc;
}

std::optional<double> RunConfigFile::derived_blowup_bound() const {
    if (ic.kind == InitialKind::zero || !ic.compactly_supported_nonnegative()) {
        return std::nullopt;
    }
    const double mass = integral(ic.sample(Grid(half_width, n_nodes)));
    if (!(mass > 0.0)) {
        return std::nullopt;
    }
    return blowup_bound(ic.L, mass);
}

std::string RunConfigFile::echo() const {
    using detail::format_double;
    std::ostringstream out;
    out << "n_nodes = " << n_nodes << '\n'
        << "half_width = " << format_double(half_width) << '\n'
        << "epsilon = " << format_double(epsilon) << '\n'
        << "r_coeff = " << format_double(r_coeff) << '\n'
        << "cfl = " << format_double(cfl) << '\n'
        << "t_end = " << format_double(t_end) << '\n'
        << "dt_min = " << format_double(dt_min) << '\n'
        << "grad_blowup_factor = " << format_double(grad_blowup_factor) << '\n'
        << "output_stride = " << output_stride << '\n'
        << "experiment = " << to_string(experiment) << '\n'
        << "ic_kind = " << to_string(ic.kind) << '\n'
        << "ic_L = " << format_double(ic.L) << '\n'
        << "ic_amplitude = " << format_double(ic.amplitude) << '\n'
        << "ic_mass = " << (ic.mass ? format_double(*ic.mass) : std::string("none")) << '\n'
        << "ic_sigma = " << format_double(ic.sigma) << '\n'
        << "ic_ramp = " << format_double(ic.ramp) << '\n';
    if (!ic.path.empty()) {
        out << "ic_path = " << ic.path << '\n';
    }
    out << "snapshot_times = " << join(snapshot_times) << '\n'
        << "output_dir = " << output_dir << '\n'
        << "seed = " << seed << '\n'
        << "sweep_epsilons = " << join(sweep_epsilons) << '\n'
        << "tracked_particles = " << tracked_particles << '\n'
        << "reference_n_nodes = " << oracle.reference_n_nodes << '\n'
        << "reference_cfl = " << format_double(oracle.reference_cfl) << '\n'
        << "convergence_levels = " << convergence_levels << '\n'
        << "convcheck_fields = " << convcheck_fields << '\n';
    if (experiment == Experiment::blowup) {
        if (const auto bound = derived_blowup_bound()) {
            out << "# derived blowup_time_upper_bound = " << format_double(*bound) << '\n';
        }
    }
    return out.str();
}

} // namespace aggdiff
