#include "aggdiff/report_io.hpp"

#include "aggdiff/error.hpp"
#include "format.hpp"

#include <json.hpp>

#include <fstream>

namespace aggdiff {

using detail::format_double;
using detail::format_fixed;
using json = nlohmann::ordered_json;

std::string to_ndjson(const DiagnosticsRecord& r) {
    std::string out;
    out.reserve(320);
    auto field = [&out](const char* name, const std::string& value, bool first = false) {
        if (!first) {
            out += ',';
        }
        out += '"';
        out += name;
        out += "\":";
        out += value;
    };
    out += '{';
    field("t", format_fixed(r.t), true);
    field("dt", format_fixed(r.dt));
    field("mass", format_double(r.mass));
    field("norm_1", format_double(r.norm_1));
    field("norm_2", format_double(r.norm_2));
    field("norm_inf", format_double(r.norm_inf));
    field("grad_inf", format_double(r.grad_inf));
    field("min_u", format_double(r.min_u));
    field("support_left", format_double(r.support_left));
    field("support_right", format_double(r.support_right));
    field("l2_bound_ratio", format_double(r.l2_bound_ratio));
    field("va_inf", format_double(r.va_inf));
    out += '}';
    return out;
}

DiagnosticsRecord parse_ndjson(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(std::string("bad NDJSON record: ") + e.what());
    }
    DiagnosticsRecord r;
    try {
        r.t = j.at("t").get<double>();
        r.dt = j.at("dt").get<double>();
        r.mass = j.at("mass").get<double>();
        r.norm_1 = j.at("norm_1").get<double>();
        r.norm_2 = j.at("norm_2").get<double>();
        r.norm_inf = j.at("norm_inf").get<double>();
        r.grad_inf = j.at("grad_inf").get<double>();
        r.min_u = j.at("min_u").get<double>();
        r.support_left = j.at("support_left").get<double>();
        r.support_right = j.at("support_right").get<double>();
        r.l2_bound_ratio = j.at("l2_bound_ratio").get<double>();
        r.va_inf = j.at("va_inf").get<double>();
    } catch (const json::exception& e) {
        throw Error(std::string("bad NDJSON record: ") + e.what());
    }
    return r;
}

std::string snapshot_csv(const Field& u) {
    std::string out = "x,u\n";
    for (std::size_t j = 0; j < u.size(); ++j) {
        out += detail::format_g17(u.grid().x(j));
        out += ',';
        out += detail::format_g17(u[j]);
        out += '\n';
    }
    return out;
}

namespace {

json to_json(const DiagnosticsRecord& r) {
    return json::parse(to_ndjson(r));
}

json to_json(const SolverConfig& c) {
    json j;
    j["n_nodes"] = c.grid.size();
    j["half_width"] = c.grid.half_width();
    j["spacing"] = c.grid.spacing();
    j["kernel"] = "exponential";
    j["decay_per_cell"] = c.kernel.decay_per_cell;
    j["epsilon"] = c.epsilon;
    j["r_coeff"] = c.r_coeff;
    j["cfl"] = c.cfl;
    j["t_end"] = c.t_end;
    j["dt_min"] = c.dt_min;
    j["grad_blowup_factor"] = c.grad_blowup_factor;
    j["output_stride"] = c.output_stride;
    return j;
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

std::string report_json(const RunReport& report, const RunConfigFile* run_config) {
    json j;
    j["status"] = std::string(to_string(report.status));
    j["config_echo"] = to_json(report.config_echo);
    if (run_config) {
        j["config_document"] = run_config->echo();
        j["experiment"] = std::string(to_string(run_config->experiment));
        j["initial_condition"] = std::string(to_string(run_config->ic.kind));
    }
    json records = json::array();
    for (const auto& r : report.records) {
        records.push_back(to_json(r));
    }
    j["records"] = std::move(records);

    json violations = json::array();
    for (const auto& v : report.bound_violations) {
        violations.push_back({{"bound", v.bound}, {"t", v.t}, {"measured", v.measured},
                              {"allowed", v.allowed}});
    }
    j["bound_violations"] = std::move(violations);

    json fits = json::array();
    for (const auto& f : report.growth_fits) {
        fits.push_back({{"p", std::isinf(f.p) ? json("inf") : json(f.p)}, {"fitted_c", f.constant}});
    }
    j["growth_fits"] = std::move(fits);

    j["first_threshold_time"] = optional_number(report.first_threshold_time);
    j["fitted_blowup_time"] = optional_number(report.fitted_blowup_time);
    j["unreliable"] = report.unreliable;
    if (report.blowup) {
        const BlowupReport& b = *report.blowup;
        j["blowup"] = {
            {"support_half_width", b.support_half_width},
            {"initial_mass", b.initial_mass},
            {"boundary_speed_lower_bound", b.boundary_speed_lower_bound},
            {"blowup_time_upper_bound", b.blowup_time_upper_bound},
            {"blowup_time_upper_bound_kind", "derived bound"},
            {"observed_blowup_time", optional_number(b.observed_blowup_time)},
            {"observed_final_grad_inf", b.observed_final_grad_inf},
            {"observed_sup_norm_max", b.observed_sup_norm_max},
        };
    } else {
        j["blowup"] = nullptr;
    }
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory '" + path.parent_path().string() +
                          "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

} // namespace aggdiff
