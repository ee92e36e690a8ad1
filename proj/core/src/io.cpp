#include "nonrad/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nonrad/errors.hpp"

namespace nonrad {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::vector<double>> parse_csv(const std::string& path,
                                           const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw InputError(path + ": expected header '" + expected_header + "', got '" + line + "'");
  std::vector<std::vector<double>> rows;
  std::size_t ncols = 0;
  for (std::size_t c = 0; c < expected_header.size(); ++c)
    if (expected_header[c] == ',') ++ncols;
  ++ncols;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != ncols)
      throw InputError(path + ":" + std::to_string(lineno) + ": wrong column count");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw InputError(path + ": too few rows");
  return rows;
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

std::string profile_csv(const RadialProfile& G) {
  std::ostringstream os;
  os << "s,value\n";
  for (std::size_t i = 0; i < G.size(); ++i)
    os << fmt(G.grid.node(i)) << ',' << fmt(G.values[i]) << '\n';
  return os.str();
}

void write_profile_csv(const std::string& path, const RadialProfile& G) {
  atomic_write_text(path, profile_csv(G));
}

RadialProfile read_profile_csv(const std::string& path) {
  const auto rows = parse_csv(path, "s,value");
  const double s0 = rows[0][0];
  const double h = rows[1][0] - rows[0][0];
  if (!(h > 0.0)) throw InputError(path + ": s must be strictly increasing");
  std::vector<double> vals(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double expect = s0 + static_cast<double>(i) * h;
    if (std::abs(rows[i][0] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw InputError(path + ": non-uniform s grid at row " + std::to_string(i + 2));
    vals[i] = rows[i][1];
  }
  GridSpec g(s0, s0 + h * static_cast<double>(rows.size() - 1), h);
  return RadialProfile(g, std::move(vals));
}

std::string data_csv(const RadialData& d) {
  std::ostringstream os;
  os << "r,u0,u1\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    os << fmt(d.grid.node(i)) << ',' << fmt(d.u0[i]) << ',' << fmt(d.u1[i]) << '\n';
  return os.str();
}

void write_data_csv(const std::string& path, const RadialData& d) {
  atomic_write_text(path, data_csv(d));
}

RadialData read_data_csv(const std::string& path) {
  const auto rows = parse_csv(path, "r,u0,u1");
  const double h = rows[0][0];
  if (!(h > 0.0)) throw InputError(path + ": first node must sit at r = step > 0");
  std::vector<double> u0(rows.size()), u1(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double expect = static_cast<double>(i + 1) * h;
    if (std::abs(rows[i][0] - expect) > 1e-9 * std::max(1.0, expect))
      throw InputError(path + ": radial grid must be uniform starting at step");
    u0[i] = rows[i][1];
    u1[i] = rows[i][2];
  }
  RadialGrid g(h * static_cast<double>(rows.size()), h);
  return RadialData(g, std::move(u0), std::move(u1));
}

std::string snapshots_csv(const ExteriorSolution& sol) {
  std::ostringstream os;
  os << "t,r,u,ut\n";
  for (const auto& s : sol.snaps)
    for (std::size_t i = s.first_active; i < s.u.size(); ++i)
      os << fmt(s.t) << ',' << fmt(sol.rgrid.node(i)) << ',' << fmt(s.u[i]) << ','
         << fmt(s.ut[i]) << '\n';
  return os.str();
}

void write_snapshots_csv(const std::string& path, const ExteriorSolution& sol) {
  atomic_write_text(path, snapshots_csv(sol));
}

std::string eval_csv(const ExteriorSolution& sol) {
  std::ostringstream os;
  os << "r,t,u\n";
  for (const auto& s : sol.snaps)
    for (std::size_t i = s.first_active; i < s.u.size(); ++i)
      os << fmt(sol.rgrid.node(i)) << ',' << fmt(s.t) << ',' << fmt(s.u[i]) << '\n';
  return os.str();
}

void write_eval_csv(const std::string& path, const ExteriorSolution& sol) {
  atomic_write_text(path, eval_csv(sol));
}

std::string heatmap_csv(const OverlapReport& rep) {
  std::ostringstream os;
  os << "t,r,diff\n";
  for (const auto& [t, r, diff] : rep.heatmap)
    os << fmt(t) << ',' << fmt(r) << ',' << fmt(diff) << '\n';
  return os.str();
}

std::string run_record_json(const FixpointResult& r, const std::string& resolved_config_json) {
  json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["order"] = (r.order == ConstructionOrder::first) ? "first" : "second";
  j["R"] = r.R;
  j["c"] = r.c;
  j["iters"] = r.iters;
  j["converged"] = r.converged;
  j["ratios"] = r.ratios;
  j["distances"] = r.distances;
  j["tail_norms"] = r.tail_norms;
  json trace = json::array();
  for (const auto& [t, e] : r.energy_trace) trace.push_back({{"t", t}, {"energy", e}});
  j["energy_trace"] = trace;
  j["recovered_alpha"] = r.recovered_alpha;
  j["recovered_beta"] = r.recovered_beta;
  j["picard_contraction_max"] = r.picard_contraction_max;
  j["extract_crosscheck_rel"] = r.extract_crosscheck_rel;
  j["reference_tag"] = r.reference_tag;
  j["tag"] = r.tag();
  j["linear_y_norm"] = r.sol.linear_y_norm;
  j["small_data_warning"] = r.sol.small_data_warning;
  if (!resolved_config_json.empty()) j["config"] = json::parse(resolved_config_json);
  return j.dump(2) + "\n";
}

std::string charnumbers_json(const CharNumbers& cn) {
  json j;
  j["alpha"] = cn.alpha;
  j["beta"] = cn.beta;
  switch (cn.method) {
    case CharNumbers::Method::integral: j["method"] = "integral"; break;
    case CharNumbers::Method::principal_value: j["method"] = "principal_value"; break;
    case CharNumbers::Method::asymptotic_fit: j["method"] = "asymptotic_fit"; break;
  }
  j["window"] = {cn.fit_window.first, cn.fit_window.second};
  j["residual"] = cn.residual;
  if (!cn.reference_tag.empty()) j["reference_tag"] = cn.reference_tag;
  return j.dump(2) + "\n";
}

std::string translation_report_json(const TranslationReport& rep) {
  json j;
  j["t0"] = rep.t0;
  j["alpha_before"] = rep.alpha_before;
  j["alpha_after"] = rep.alpha_after;
  j["beta_before"] = rep.beta_before;
  j["beta_after"] = rep.beta_after;
  j["predicted_beta"] = rep.predicted_beta;
  j["defect"] = rep.defect;
  j["alpha_drift"] = rep.alpha_drift;
  j["window"] = {rep.fit_window.first, rep.fit_window.second};
  if (!rep.reference_tag.empty()) j["reference_tag"] = rep.reference_tag;
  return j.dump(2) + "\n";
}

}  // namespace nonrad
