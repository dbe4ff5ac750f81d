#include "bbm/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace bbm {

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

nlohmann::json field_to_json(const SpectralField& f) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& c : f.coeffs()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return {{"M", f.M()}, {"re", re}, {"im", im}};
}

SpectralField field_from_json(const nlohmann::json& j) {
  int M = j.at("M").get<int>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != M + 1 || static_cast<int>(im.size()) != M + 1)
    throw std::invalid_argument("field json: coefficient arrays must have M+1 entries");
  std::vector<cplx> c(M + 1);
  for (int n = 0; n <= M; ++n) c[n] = cplx(re[n].get<double>(), im[n].get<double>());
  return SpectralField(std::move(c));
}

nlohmann::json solver_config_to_json(const SolverConfig& c) {
  return {{"dt", c.dt},
          {"T_final", c.T_final},
          {"M_grid", c.M_grid},
          {"scheme", to_string(c.scheme)},
          {"picard_tol", c.picard_tol},
          {"picard_max_iter", c.picard_max_iter},
          {"save_every", c.save_every}};
}

SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig c) {
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("T_final")) c.T_final = j["T_final"].get<double>();
  if (j.contains("M_grid")) c.M_grid = j["M_grid"].get<int>();
  if (j.contains("scheme")) c.scheme = scheme_from_string(j["scheme"].get<std::string>());
  if (j.contains("picard_tol")) c.picard_tol = j["picard_tol"].get<double>();
  if (j.contains("picard_max_iter")) c.picard_max_iter = j["picard_max_iter"].get<int>();
  if (j.contains("save_every")) c.save_every = j["save_every"].get<int>();
  return c;
}

nlohmann::json trajectory_to_json(const Trajectory& tr) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : tr.states) states.push_back(field_to_json(s));
  nlohmann::json j{{"times", tr.times}, {"states", states}, {"config", solver_config_to_json(tr.config)},
                   {"blowup", tr.blowup}};
  if (tr.has_z) {
    j["z_source"] = tr.z_source.describe();
    j["z0"] = field_to_json(tr.z0);
  }
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory tr;
  tr.times = j.at("times").get<std::vector<double>>();
  for (const auto& s : j.at("states")) tr.states.push_back(field_from_json(s));
  tr.config = solver_config_from_json(j.at("config"));
  tr.blowup = j.value("blowup", false);
  if (tr.times.size() != tr.states.size()) throw std::invalid_argument("trajectory json: times/states size mismatch");
  if (j.contains("z0")) {
    tr.has_z = true;
    tr.z0 = field_from_json(j["z0"]);
    std::string src = j.value("z_source", std::string("exact-linear"));
    if (src != "exact-linear") {
      auto colon = src.find(':');
      tr.z_source = ZSource::mollified(kernel_from_string(src.substr(0, colon)), std::stod(src.substr(colon + 1)));
    }
  }
  return tr;
}

std::string to_csv(const std::vector<std::string>& header, const CsvTable& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

CsvTable norm_series(const Trajectory& tr, const std::vector<double>& s_list, const IParams* p,
                     std::vector<std::string>* header) {
  if (header) {
    *header = {"t"};
    for (double s : s_list) header->push_back("H^" + format_double(s));
    header->push_back("E");
    if (p) header->push_back("E(Iv)");
  }
  CsvTable rows;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const SpectralField& u = tr.states[k];
    std::vector<std::string> r{format_double(tr.times[k])};
    for (double s : s_list) r.push_back(format_double(sobolev_norm(u, s)));
    r.push_back(format_double(energy(u)));
    if (p) r.push_back(format_double(modified_energy(u, *p)));
    rows.push_back(std::move(r));
  }
  return rows;
}

CsvTable energy_trace_table(const EnergyTrace& tr, std::vector<std::string>* header) {
  if (header) *header = {"t", "E", "term_I", "term_II", "term_III", "residual"};
  CsvTable rows;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    rows.push_back({format_double(tr.times[k]), format_double(tr.E_values[k]), format_double(tr.term_I[k]),
                    format_double(tr.term_II[k]), format_double(tr.term_III[k]), format_double(tr.residual[k])});
  return rows;
}

}  // namespace bbm
