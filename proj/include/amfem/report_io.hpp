#pragma once

#include "amfem/adaptivity.hpp"
#include "amfem/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>

namespace amfem {

nlohmann::json to_json(const AfemConfig& cfg);
nlohmann::json to_json(const RunReport& run);
nlohmann::json to_json(const CheckReport& rep);

/// One row per level; header line starts with '#' so gnuplot skips it.
void write_convergence_csv(std::ostream& out, const RunReport& run);

/// report.json, convergence.csv, indicators_<l>.csv, mesh_<l>.txt and, with
/// svg, mesh_<l>.svg (marked elements highlighted). `checks` is embedded in
/// report.json when given.
void write_run_artifacts(const std::filesystem::path& dir, const RunReport& run, bool svg,
                         const CheckReport* checks = nullptr);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace amfem
