#pragma once
// Experiment harness: one record per (n, s, beta, seed) cell, stages toggled
// independently, deterministic scan seeds derived from the run seed, and
// loss-free CSV/JSONL round-trips (floats at 17 significant digits).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

enum class Stage { mix, spectral, flow, cheeger, hit };

std::vector<Stage> parse_stages(const std::string& spec);  // "mix,flow" or "all"
std::string stages_to_string(const std::vector<Stage>& stages);

struct RunConfig {
  ModelParams model;
  double alpha = 4.0;
  std::vector<Stage> stages = parse_stages("all");
  long t_max = 0;  // 0 -> 64 n^2
  double eps = 0.25;
  int u = -1;                  // hitting probe override, -1 -> 7n/8
  bool strict_mod8 = false;    // reject n not divisible by 8 in the hit stage
  std::string starts = "auto";  // auto | all | subset
  int max_n = kDefaultMaxN;
  std::vector<int> n_list;  // scan sizes
  int replicates = 1;
  int jobs = 1;
  std::string out_path;        // empty -> stdout
  std::string format = "csv";  // csv | jsonl
};

// flat "key = value" text; '#' comments; unknown keys rejected
RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);
// effective config rendering; a valid config file (the manifest body)
std::string render_config(const RunConfig& cfg);

struct ExperimentRecord {
  // identity
  int n = 0;
  double s = 0, beta = 0;
  std::uint64_t seed = 0;
  double alpha = 0;
  // model summary
  std::optional<std::int64_t> oriented_edges;
  std::optional<int> max_degree;
  std::optional<std::int64_t> degree2_count;
  // mixing
  std::optional<long> tau;
  std::optional<int> truncated;
  std::optional<int> n_starts;
  // spectral
  std::optional<double> lambda2, gap, ds_bound;
  // flow
  std::optional<double> rho;
  std::optional<int> delta_max, gamma_prime_max_degree, flow_L, flow_k, degraded;
  // arc cuts
  std::optional<std::int64_t> cheeger_boundary;
  std::optional<int> cheeger_start, cheeger_length;
  std::optional<double> cheeger_ratio, cheeger_conductance, tau_lower;
  // hitting
  std::optional<double> hitting_t, hitting_t_direct, pi_ground;
  std::optional<int> u_used;
  std::optional<std::int64_t> hit_degree2_total;
  // wall-clock seconds per stage (excluded from record equality)
  double wall_model = 0, wall_mix = 0, wall_spectral = 0, wall_flow = 0,
         wall_cheeger = 0, wall_hit = 0;
  std::string errors;  // "stage:message" entries joined by ';'
};

// runs the configured stages on one sampled graph; failures land in .errors
ExperimentRecord run_cell(const RunConfig& cfg);

// n-major, replicate-minor cell list with derived seeds; jobs > 1 runs cells
// on a worker pool (records keep the deterministic cell order)
std::vector<ExperimentRecord> run_scan(const RunConfig& cfg);

std::uint64_t derive_cell_seed(std::uint64_t run_seed, int n, int s_index,
                               int beta_index, int replicate);

// serialization (CSV column order = field declaration order)
std::string records_to_csv(const std::vector<ExperimentRecord>& recs);
std::vector<ExperimentRecord> records_from_csv(std::istream& in);
std::string records_to_jsonl(const std::vector<ExperimentRecord>& recs);
std::vector<ExperimentRecord> records_from_jsonl(std::istream& in);
void write_records(const std::vector<ExperimentRecord>& recs, const std::string& path,
                   const std::string& format);
std::vector<ExperimentRecord> read_records(const std::string& path);

// true when all non-wall-clock fields agree exactly
bool equal_modulo_wall(const ExperimentRecord& a, const ExperimentRecord& b);

// manifest = effective config + version + derived seeds (as comments)
std::string render_manifest(const RunConfig& cfg);

struct FitResult {
  double slope = 0, intercept = 0, r2 = 0;
  std::vector<int> sizes;
  std::vector<double> medians;
  long used = 0, excluded = 0;
};

// OLS of ln(median metric per size) on ln(size); excludes truncated or
// degraded records; requires >= 3 sizes with >= 3 records each
FitResult fit_exponent(const std::vector<ExperimentRecord>& recs,
                       const std::string& metric);
double record_metric(const ExperimentRecord& rec, const std::string& metric,
                     bool& present);

struct DegreeTailReport {
  int n = 0;
  int samples = 0;
  double threshold = 0;  // 2 ln n
  int violations = 0;
  double fraction_ok = 0;
};

DegreeTailReport degree_tail_check(int n, double s, double beta, int samples,
                                   std::uint64_t seed);

extern const char* kVersion;

}  // namespace lrp
