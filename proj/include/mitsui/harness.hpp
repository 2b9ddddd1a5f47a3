#pragma once

#include <iosfwd>

#include "mitsui/fourier.hpp"
#include "mitsui/sieve.hpp"

#include "json.hpp"

namespace mitsui {

using json = nlohmann::json;

struct RegionDesc {
  std::string kind;  // box | ball | polytope | sector | thin-cone
  json raw;
};

struct ExperimentConfig {
  std::string field_path;
  std::string kind;  // pit | mitsui | siegel-walfisz-q | proof-path | properties
  std::vector<std::vector<i64>> modulus_gens;  // empty => unit ideal
  int ambient_class = 0;
  std::optional<std::vector<i64>> alpha;
  RegionDesc region;
  std::vector<u64> bounds;  // strictly increasing N schedule
  // character selection for pit
  std::string character_type = "trivial";  // trivial | finite
  int character_label = 0;
  // synthetic Siegel data
  std::optional<double> siegel_beta;
  int siegel_label = -1;
  double qbudget_c = 1.0;
  // siegel-walfisz-q
  i64 sw_q = 1, sw_a = 1;
  // proof-path
  int y2 = 8;
  std::string out_path, format = "csv";
  json check;  // optional thresholds
  json raw;
};

ExperimentConfig parse_experiment_json(const std::string& text);
ExperimentConfig load_experiment_file(const std::string& path);

struct ReportRow {
  double N = 0, empirical = 0, predicted_main = 0, predicted_secondary = 0;
  double abs_error = 0, rel_error = 0, wall_ms = 0;
};

struct Report {
  std::vector<ReportRow> rows;
  json metadata;
  std::vector<json> extra;  // per-cube / per-class tables
  bool check_passed = true;
  std::vector<std::string> check_messages;
};

Report run_pit(const ExperimentConfig& cfg);
Report run_mitsui(const ExperimentConfig& cfg);
Report run_siegel_walfisz_q(const ExperimentConfig& cfg);
Report run_proof_path(const ExperimentConfig& cfg);
Report run_properties(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

void emit_report(const Report& r, std::ostream& os, const std::string& format);
Report parse_report_json(const std::string& text);

// region construction from a config descriptor; scale rescales all linear
// dimensions (norm level scales by scale^n)
Region region_from_desc(const NumberField& K, const RegionDesc& d, double scale = 1.0);
// least norm ceiling that the sieve table must reach for this region
u64 region_norm_ceiling(const NumberField& K, const Region& r);

std::string format_double(double v);  // 12 significant digits

}  // namespace mitsui
