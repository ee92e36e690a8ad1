#pragma once

#include <string>

#include "nonrad/charnum.hpp"
#include "nonrad/dynamics.hpp"
#include "nonrad/extsolve.hpp"
#include "nonrad/fixpoint.hpp"
#include "nonrad/freewave.hpp"
#include "nonrad/profile.hpp"

namespace nonrad {

// Atomically writes `content` (temp file + rename). Creates parent directories.
void atomic_write_text(const std::string& path, const std::string& content);

// Profile files: header `s,value`, one node per row, strictly increasing s.
std::string profile_csv(const RadialProfile& G);
void write_profile_csv(const std::string& path, const RadialProfile& G);
RadialProfile read_profile_csv(const std::string& path);

// Data files: header `r,u0,u1` on the uniform radial grid.
std::string data_csv(const RadialData& d);
void write_data_csv(const std::string& path, const RadialData& d);
RadialData read_data_csv(const std::string& path);

// Snapshot dumps: `t,r,u,ut` over the active region.
std::string snapshots_csv(const ExteriorSolution& sol);
void write_snapshots_csv(const std::string& path, const ExteriorSolution& sol);

// Free-wave evaluation dumps: `r,t,u`.
std::string eval_csv(const ExteriorSolution& sol);
void write_eval_csv(const std::string& path, const ExteriorSolution& sol);

// Overlap heatmap: `t,r,diff`.
std::string heatmap_csv(const OverlapReport& rep);

// JSON records (strings; callers decide where they land).
std::string run_record_json(const FixpointResult& r, const std::string& resolved_config_json);
std::string charnumbers_json(const CharNumbers& cn);
std::string translation_report_json(const TranslationReport& rep);

}  // namespace nonrad
