#pragma once

#include "aggdiff/config.hpp"
#include "aggdiff/diagnostics.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace aggdiff {

/// One NDJSON line (no trailing newline) with the record's field names.
std::string to_ndjson(const DiagnosticsRecord& record);

/// Reads a line produced by to_ndjson.
DiagnosticsRecord parse_ndjson(std::string_view line);

/// "x,u" header followed by one row per node, 17 significant digits.
std::string snapshot_csv(const Field& u);

/// JSON document mirroring RunReport; `run_config` adds the originating
/// configuration and derived quantities when given.
std::string report_json(const RunReport& report, const RunConfigFile* run_config = nullptr);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace aggdiff
