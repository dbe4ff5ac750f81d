#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbm/imethod.hpp"
#include "bbm/solver.hpp"
#include "bbm/spectral.hpp"

namespace bbm {

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double x);

// {"M": M, "re": [...], "im": [...]} for n = 0..M.
nlohmann::json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

nlohmann::json solver_config_to_json(const SolverConfig& c);
SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base = {});

// Field schema per state plus a times array and the config echo.
nlohmann::json trajectory_to_json(const Trajectory& tr);
Trajectory trajectory_from_json(const nlohmann::json& j);

using CsvTable = std::vector<std::vector<std::string>>;

std::string to_csv(const std::vector<std::string>& header, const CsvTable& rows);
void write_text_file(const std::string& path, const std::string& content);

// Columns t, ||u||_{H^s} for each s in s_list, E, and E(Iv) when p is given.
CsvTable norm_series(const Trajectory& tr, const std::vector<double>& s_list, const IParams* p,
                     std::vector<std::string>* header);
// Columns t, E, term_I, term_II, term_III, residual.
CsvTable energy_trace_table(const EnergyTrace& tr, std::vector<std::string>* header);

}  // namespace bbm
