#include "lrp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "lrp/chain.hpp"
#include "lrp/cut.hpp"
#include "lrp/electric.hpp"
#include "lrp/flow.hpp"
#include "lrp/rng.hpp"
#include "lrp/spectral.hpp"

namespace lrp {

const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- stages

std::vector<Stage> parse_stages(const std::string& spec) {
  static const std::map<std::string, Stage> names = {{"mix", Stage::mix},
                                                     {"spectral", Stage::spectral},
                                                     {"flow", Stage::flow},
                                                     {"cheeger", Stage::cheeger},
                                                     {"hit", Stage::hit}};
  if (spec == "all")
    return {Stage::mix, Stage::spectral, Stage::flow, Stage::cheeger, Stage::hit};
  std::vector<Stage> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto it = names.find(tok);
    if (it == names.end()) throw std::invalid_argument("unknown stage '" + tok + "'");
    if (std::find(out.begin(), out.end(), it->second) == out.end())
      out.push_back(it->second);
  }
  if (out.empty()) throw std::invalid_argument("empty stage list");
  return out;
}

std::string stages_to_string(const std::vector<Stage>& stages) {
  static const char* names[] = {"mix", "spectral", "flow", "cheeger", "hit"};
  std::string out;
  for (Stage s : stages) {
    if (!out.empty()) out += ',';
    out += names[static_cast<int>(s)];
  }
  return out;
}

static bool has_stage(const RunConfig& cfg, Stage s) {
  return std::find(cfg.stages.begin(), cfg.stages.end(), s) != cfg.stages.end();
}

// ---------------------------------------------------------------- config

static std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

static std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model.n") cfg.model.n = std::stoi(value);
  else if (key == "model.s") cfg.model.s = std::stod(value);
  else if (key == "model.beta") cfg.model.beta = std::stod(value);
  else if (key == "model.seed") cfg.model.seed = std::stoull(value);
  else if (key == "model.simple") cfg.model.simple_graph = std::stoi(value) != 0;
  else if (key == "flow.alpha") cfg.alpha = std::stod(value);
  else if (key == "run.stages") cfg.stages = parse_stages(value);
  else if (key == "run.t_max") cfg.t_max = std::stol(value);
  else if (key == "run.eps") cfg.eps = std::stod(value);
  else if (key == "run.u") cfg.u = std::stoi(value);
  else if (key == "run.strict_mod8") cfg.strict_mod8 = std::stoi(value) != 0;
  else if (key == "run.starts") cfg.starts = value;
  else if (key == "run.max_n") cfg.max_n = std::stoi(value);
  else if (key == "scan.n_list") cfg.n_list = parse_int_list(value);
  else if (key == "scan.replicates") cfg.replicates = std::stoi(value);
  else if (key == "scan.jobs") cfg.jobs = std::stoi(value);
  else if (key == "output.path") cfg.out_path = value;
  else if (key == "output.format") cfg.format = value;
  else if (key == "version") {}  // manifests carry it; accepted, not interpreted
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  RunConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "model.n = " << cfg.model.n << '\n';
  os << "model.s = " << format_double(cfg.model.s) << '\n';
  os << "model.beta = " << format_double(cfg.model.beta) << '\n';
  os << "model.seed = " << cfg.model.seed << '\n';
  os << "model.simple = " << (cfg.model.simple_graph ? 1 : 0) << '\n';
  os << "flow.alpha = " << format_double(cfg.alpha) << '\n';
  os << "run.stages = " << stages_to_string(cfg.stages) << '\n';
  os << "run.t_max = " << cfg.t_max << '\n';
  os << "run.eps = " << format_double(cfg.eps) << '\n';
  os << "run.u = " << cfg.u << '\n';
  os << "run.strict_mod8 = " << (cfg.strict_mod8 ? 1 : 0) << '\n';
  os << "run.starts = " << cfg.starts << '\n';
  os << "run.max_n = " << cfg.max_n << '\n';
  if (!cfg.n_list.empty()) {
    os << "scan.n_list = ";
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
      os << (i ? "," : "") << cfg.n_list[i];
    os << '\n';
  }
  os << "scan.replicates = " << cfg.replicates << '\n';
  os << "scan.jobs = " << cfg.jobs << '\n';
  if (!cfg.out_path.empty()) os << "output.path = " << cfg.out_path << '\n';
  os << "output.format = " << cfg.format << '\n';
  return os.str();
}

// ---------------------------------------------------------------- fields

namespace {

struct Field {
  enum Kind { kI64, kU64, kF64, kStr };
  const char* name;
  Kind kind;
  bool wall;
  std::function<std::string(const ExperimentRecord&)> get;  // "" = absent
  std::function<void(ExperimentRecord&, const std::string&)> set;
};

template <class T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) return format_double(*v);
  else return std::to_string(*v);
}

const std::vector<Field>& record_fields() {
  using R = ExperimentRecord;
  static const std::vector<Field> fields = {
      {"n", Field::kI64, false, [](const R& r) { return std::to_string(r.n); },
       [](R& r, const std::string& v) { r.n = std::stoi(v); }},
      {"s", Field::kF64, false, [](const R& r) { return format_double(r.s); },
       [](R& r, const std::string& v) { r.s = std::stod(v); }},
      {"beta", Field::kF64, false, [](const R& r) { return format_double(r.beta); },
       [](R& r, const std::string& v) { r.beta = std::stod(v); }},
      {"seed", Field::kU64, false, [](const R& r) { return std::to_string(r.seed); },
       [](R& r, const std::string& v) { r.seed = std::stoull(v); }},
      {"alpha", Field::kF64, false, [](const R& r) { return format_double(r.alpha); },
       [](R& r, const std::string& v) { r.alpha = std::stod(v); }},
      {"oriented_edges", Field::kI64, false,
       [](const R& r) { return opt_str(r.oriented_edges); },
       [](R& r, const std::string& v) { r.oriented_edges = std::stoll(v); }},
      {"max_degree", Field::kI64, false,
       [](const R& r) { return opt_str(r.max_degree); },
       [](R& r, const std::string& v) { r.max_degree = std::stoi(v); }},
      {"degree2_count", Field::kI64, false,
       [](const R& r) { return opt_str(r.degree2_count); },
       [](R& r, const std::string& v) { r.degree2_count = std::stoll(v); }},
      {"tau", Field::kI64, false, [](const R& r) { return opt_str(r.tau); },
       [](R& r, const std::string& v) { r.tau = std::stol(v); }},
      {"truncated", Field::kI64, false,
       [](const R& r) { return opt_str(r.truncated); },
       [](R& r, const std::string& v) { r.truncated = std::stoi(v); }},
      {"n_starts", Field::kI64, false, [](const R& r) { return opt_str(r.n_starts); },
       [](R& r, const std::string& v) { r.n_starts = std::stoi(v); }},
      {"lambda2", Field::kF64, false, [](const R& r) { return opt_str(r.lambda2); },
       [](R& r, const std::string& v) { r.lambda2 = std::stod(v); }},
      {"gap", Field::kF64, false, [](const R& r) { return opt_str(r.gap); },
       [](R& r, const std::string& v) { r.gap = std::stod(v); }},
      {"ds_bound", Field::kF64, false, [](const R& r) { return opt_str(r.ds_bound); },
       [](R& r, const std::string& v) { r.ds_bound = std::stod(v); }},
      {"rho", Field::kF64, false, [](const R& r) { return opt_str(r.rho); },
       [](R& r, const std::string& v) { r.rho = std::stod(v); }},
      {"delta_max", Field::kI64, false, [](const R& r) { return opt_str(r.delta_max); },
       [](R& r, const std::string& v) { r.delta_max = std::stoi(v); }},
      {"gamma_prime_max_degree", Field::kI64, false,
       [](const R& r) { return opt_str(r.gamma_prime_max_degree); },
       [](R& r, const std::string& v) { r.gamma_prime_max_degree = std::stoi(v); }},
      {"flow_L", Field::kI64, false, [](const R& r) { return opt_str(r.flow_L); },
       [](R& r, const std::string& v) { r.flow_L = std::stoi(v); }},
      {"flow_k", Field::kI64, false, [](const R& r) { return opt_str(r.flow_k); },
       [](R& r, const std::string& v) { r.flow_k = std::stoi(v); }},
      {"degraded", Field::kI64, false, [](const R& r) { return opt_str(r.degraded); },
       [](R& r, const std::string& v) { r.degraded = std::stoi(v); }},
      {"cheeger_boundary", Field::kI64, false,
       [](const R& r) { return opt_str(r.cheeger_boundary); },
       [](R& r, const std::string& v) { r.cheeger_boundary = std::stoll(v); }},
      {"cheeger_start", Field::kI64, false,
       [](const R& r) { return opt_str(r.cheeger_start); },
       [](R& r, const std::string& v) { r.cheeger_start = std::stoi(v); }},
      {"cheeger_length", Field::kI64, false,
       [](const R& r) { return opt_str(r.cheeger_length); },
       [](R& r, const std::string& v) { r.cheeger_length = std::stoi(v); }},
      {"cheeger_ratio", Field::kF64, false,
       [](const R& r) { return opt_str(r.cheeger_ratio); },
       [](R& r, const std::string& v) { r.cheeger_ratio = std::stod(v); }},
      {"cheeger_conductance", Field::kF64, false,
       [](const R& r) { return opt_str(r.cheeger_conductance); },
       [](R& r, const std::string& v) { r.cheeger_conductance = std::stod(v); }},
      {"tau_lower", Field::kF64, false, [](const R& r) { return opt_str(r.tau_lower); },
       [](R& r, const std::string& v) { r.tau_lower = std::stod(v); }},
      {"hitting_t", Field::kF64, false, [](const R& r) { return opt_str(r.hitting_t); },
       [](R& r, const std::string& v) { r.hitting_t = std::stod(v); }},
      {"hitting_t_direct", Field::kF64, false,
       [](const R& r) { return opt_str(r.hitting_t_direct); },
       [](R& r, const std::string& v) { r.hitting_t_direct = std::stod(v); }},
      {"pi_ground", Field::kF64, false, [](const R& r) { return opt_str(r.pi_ground); },
       [](R& r, const std::string& v) { r.pi_ground = std::stod(v); }},
      {"u_used", Field::kI64, false, [](const R& r) { return opt_str(r.u_used); },
       [](R& r, const std::string& v) { r.u_used = std::stoi(v); }},
      {"hit_degree2_total", Field::kI64, false,
       [](const R& r) { return opt_str(r.hit_degree2_total); },
       [](R& r, const std::string& v) { r.hit_degree2_total = std::stoll(v); }},
      {"wall_model", Field::kF64, true,
       [](const R& r) { return format_double(r.wall_model); },
       [](R& r, const std::string& v) { r.wall_model = std::stod(v); }},
      {"wall_mix", Field::kF64, true,
       [](const R& r) { return format_double(r.wall_mix); },
       [](R& r, const std::string& v) { r.wall_mix = std::stod(v); }},
      {"wall_spectral", Field::kF64, true,
       [](const R& r) { return format_double(r.wall_spectral); },
       [](R& r, const std::string& v) { r.wall_spectral = std::stod(v); }},
      {"wall_flow", Field::kF64, true,
       [](const R& r) { return format_double(r.wall_flow); },
       [](R& r, const std::string& v) { r.wall_flow = std::stod(v); }},
      {"wall_cheeger", Field::kF64, true,
       [](const R& r) { return format_double(r.wall_cheeger); },
       [](R& r, const std::string& v) { r.wall_cheeger = std::stod(v); }},
      {"wall_hit", Field::kF64, true,
       [](const R& r) { return format_double(r.wall_hit); },
       [](R& r, const std::string& v) { r.wall_hit = std::stod(v); }},
      {"errors", Field::kStr, false, [](const R& r) { return r.errors; },
       [](R& r, const std::string& v) { r.errors = v; }},
  };
  return fields;
}

}  // namespace

std::string records_to_csv(const std::vector<ExperimentRecord>& recs) {
  const auto& fields = record_fields();
  std::ostringstream os;
  for (std::size_t i = 0; i < fields.size(); ++i)
    os << (i ? "," : "") << fields[i].name;
  os << '\n';
  for (const auto& r : recs) {
    for (std::size_t i = 0; i < fields.size(); ++i)
      os << (i ? "," : "") << fields[i].get(r);
    os << '\n';
  }
  return os.str();
}

std::vector<ExperimentRecord> records_from_csv(std::istream& in) {
  const auto& fields = record_fields();
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records_from_csv: empty input");
  {
    std::ostringstream expect;
    for (std::size_t i = 0; i < fields.size(); ++i)
      expect << (i ? "," : "") << fields[i].name;
    if (trim(line) != expect.str())
      throw std::runtime_error("records_from_csv: unexpected header");
  }
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(fields.size());  // trailing empties drop off the stream
    ExperimentRecord r;
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (!cells[i].empty()) fields[i].set(r, cells[i]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_to_jsonl(const std::vector<ExperimentRecord>& recs) {
  const auto& fields = record_fields();
  std::ostringstream os;
  for (const auto& r : recs) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& f : fields) {
      const std::string v = f.get(r);
      if (v.empty() && f.kind != Field::kStr) continue;
      switch (f.kind) {
        case Field::kI64: obj[f.name] = std::stoll(v); break;
        case Field::kU64: obj[f.name] = std::stoull(v); break;
        case Field::kF64: obj[f.name] = std::stod(v); break;
        case Field::kStr: obj[f.name] = v; break;
      }
    }
    os << obj.dump() << '\n';
  }
  return os.str();
}

std::vector<ExperimentRecord> records_from_jsonl(std::istream& in) {
  const auto& fields = record_fields();
  std::vector<ExperimentRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const nlohmann::json obj = nlohmann::json::parse(line);
    ExperimentRecord r;
    for (const auto& f : fields) {
      if (!obj.contains(f.name)) continue;
      switch (f.kind) {
        case Field::kI64:
          f.set(r, std::to_string(obj[f.name].get<long long>()));
          break;
        case Field::kU64:
          f.set(r, std::to_string(obj[f.name].get<unsigned long long>()));
          break;
        case Field::kF64:
          f.set(r, format_double(obj[f.name].get<double>()));
          break;
        case Field::kStr:
          f.set(r, obj[f.name].get<std::string>());
          break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_records(const std::vector<ExperimentRecord>& recs, const std::string& path,
                   const std::string& format) {
  std::string body;
  if (format == "csv") body = records_to_csv(recs);
  else if (format == "jsonl") body = records_to_jsonl(recs);
  else throw std::invalid_argument("unknown output format '" + format + "'");
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << body;
}

std::vector<ExperimentRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl")
    return records_from_jsonl(in);
  return records_from_csv(in);
}

bool equal_modulo_wall(const ExperimentRecord& a, const ExperimentRecord& b) {
  for (const auto& f : record_fields())
    if (!f.wall && f.get(a) != f.get(b)) return false;
  return true;
}

// ---------------------------------------------------------------- runner

namespace {

struct StageTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double stop() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void note_error(ExperimentRecord& rec, const std::string& stage, const std::string& what) {
  std::string msg = stage + ":" + what;
  for (char& c : msg)
    if (c == ',' || c == ';' || c == '\n') c = ' ';
  if (!rec.errors.empty()) rec.errors += ';';
  rec.errors += msg;
}

}  // namespace

ExperimentRecord run_cell(const RunConfig& cfg) {
  ExperimentRecord rec;
  rec.n = cfg.model.n;
  rec.s = cfg.model.s;
  rec.beta = cfg.model.beta;
  rec.seed = cfg.model.seed;
  rec.alpha = cfg.alpha;

  LrpGraph g;
  {
    StageTimer t;
    try {
      g = sample_graph(cfg.model, cfg.max_n);
    } catch (const std::exception& e) {
      note_error(rec, "model", e.what());
      rec.wall_model = t.stop();
      return rec;
    }
    rec.wall_model = t.stop();
  }
  rec.oriented_edges = g.oriented_edge_count;
  rec.max_degree = g.max_degree();
  rec.degree2_count = static_cast<std::int64_t>(degree2_vertices(g).size());

  ChainView chain;
  const bool needs_chain = has_stage(cfg, Stage::mix) || has_stage(cfg, Stage::spectral);
  if (needs_chain) chain = make_chain(g);

  if (has_stage(cfg, Stage::mix)) {
    StageTimer t;
    try {
      std::vector<int> starts;
      if (cfg.starts == "all") starts = all_starts(g);
      else if (cfg.starts == "subset") starts = subset_starts(g);
      else if (cfg.starts == "auto") starts = default_starts(g);
      else throw std::invalid_argument("unknown starts policy '" + cfg.starts + "'");
      const long t_max = cfg.t_max > 0 ? cfg.t_max : default_t_max(g.n());
      const MixingEstimate est = mixing_time(chain, starts, t_max, cfg.eps);
      rec.tau = est.tau;
      rec.truncated = est.truncated ? 1 : 0;
      rec.n_starts = static_cast<int>(est.per_start.size());
    } catch (const std::exception& e) {
      note_error(rec, "mix", e.what());
    }
    rec.wall_mix = t.stop();
  }
  if (has_stage(cfg, Stage::spectral)) {
    StageTimer t;
    try {
      const SpectralResult sr = second_eigenvalue(chain);
      rec.lambda2 = sr.lambda2;
      rec.gap = sr.gap;
      rec.ds_bound = sr.ds_bound;
    } catch (const std::exception& e) {
      note_error(rec, "spectral", e.what());
    }
    rec.wall_spectral = t.stop();
  }
  if (has_stage(cfg, Stage::flow)) {
    StageTimer t;
    try {
      const IntervalPartition part = make_partition(cfg.model, cfg.alpha);
      const ContractedGraph gamma = contract(g, part);
      const double p = er_edge_probability(cfg.alpha, part.k);
      const ErCoupling er =
          couple_er(gamma, p, hash_combine(mix64(cfg.model.seed), 0xf10cull));
      const FlowPlan plan = build_flow(g, part, gamma, er);
      rec.rho = congestion(plan);
      rec.delta_max = plan.delta_max;
      rec.gamma_prime_max_degree = er.max_degree();
      rec.flow_L = part.L;
      rec.flow_k = part.k;
      rec.degraded = plan.degraded ? 1 : 0;
    } catch (const std::exception& e) {
      note_error(rec, "flow", e.what());
    }
    rec.wall_flow = t.stop();
  }
  if (has_stage(cfg, Stage::cheeger)) {
    StageTimer t;
    try {
      const CutReport cut = cheeger_arcs(g);
      rec.cheeger_boundary = cut.boundary;
      rec.cheeger_start = cut.start;
      rec.cheeger_length = cut.length;
      rec.cheeger_ratio = cut.ratio;
      rec.cheeger_conductance = cut.conductance;
      rec.tau_lower = cut.tau_lower;
    } catch (const std::exception& e) {
      note_error(rec, "cheeger", e.what());
    }
    rec.wall_cheeger = t.stop();
  }
  if (has_stage(cfg, Stage::hit)) {
    StageTimer t;
    try {
      const RegionSplit split = region_split(g.n(), cfg.strict_mod8, cfg.u);
      const HittingReport hit = hitting_time(g, split);
      rec.hitting_t = hit.t_visits;
      rec.hitting_t_direct = hit.t_direct;
      rec.pi_ground = hit.pi_ground;
      rec.u_used = split.u;
      rec.hit_degree2_total = hit.degree2_total;
    } catch (const std::exception& e) {
      note_error(rec, "hit", e.what());
    }
    rec.wall_hit = t.stop();
  }
  return rec;
}

std::uint64_t derive_cell_seed(std::uint64_t run_seed, int n, int s_index,
                               int beta_index, int replicate) {
  std::uint64_t h = mix64(run_seed);
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  h = hash_combine(h, static_cast<std::uint64_t>(s_index));
  h = hash_combine(h, static_cast<std::uint64_t>(beta_index));
  h = hash_combine(h, static_cast<std::uint64_t>(replicate));
  return h;
}

std::vector<ExperimentRecord> run_scan(const RunConfig& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("run_scan: scan.n_list is empty");
  if (cfg.replicates < 1) throw std::invalid_argument("run_scan: replicates must be >= 1");
  std::vector<RunConfig> cells;
  for (int n : cfg.n_list)
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      RunConfig c = cfg;
      c.model.n = n;
      c.model.seed = derive_cell_seed(cfg.model.seed, n, 0, 0, rep);
      cells.push_back(std::move(c));
    }
  std::vector<ExperimentRecord> records(cells.size());
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) records[i] = run_cell(cells[i]);
    return records;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      records[i] = run_cell(cells[i]);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n_workers = std::min(static_cast<std::size_t>(jobs), cells.size());
  for (std::size_t j = 0; j < n_workers; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return records;
}

std::string render_manifest(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# run manifest (valid config; re-running reproduces the records)\n";
  os << "version = " << kVersion << '\n';
  os << render_config(cfg);
  if (!cfg.n_list.empty()) {
    os << "# derived cell seeds\n";
    int idx = 0;
    for (int n : cfg.n_list)
      for (int rep = 0; rep < cfg.replicates; ++rep, ++idx)
        os << "# cell " << idx << ": n=" << n << " replicate=" << rep
           << " seed=" << derive_cell_seed(cfg.model.seed, n, 0, 0, rep) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- fits

double record_metric(const ExperimentRecord& rec, const std::string& metric,
                     bool& present) {
  present = true;
  if (metric == "tau" && rec.tau) return static_cast<double>(*rec.tau);
  if (metric == "rho" && rec.rho) return *rec.rho;
  if (metric == "hitting_t" && rec.hitting_t) return *rec.hitting_t;
  if (metric == "ds_bound" && rec.ds_bound) return *rec.ds_bound;
  if (metric == "cheeger_boundary" && rec.cheeger_boundary)
    return static_cast<double>(*rec.cheeger_boundary);
  if (metric == "gap" && rec.gap) return *rec.gap;
  static const char* known[] = {"tau", "rho", "hitting_t", "ds_bound",
                                "cheeger_boundary", "gap"};
  bool ok = false;
  for (const char* k : known) ok = ok || metric == k;
  if (!ok) throw std::invalid_argument("unknown metric '" + metric + "'");
  present = false;
  return 0;
}

FitResult fit_exponent(const std::vector<ExperimentRecord>& recs,
                       const std::string& metric) {
  std::map<int, std::vector<double>> by_n;
  FitResult fit;
  for (const auto& r : recs) {
    bool present = false;
    const double v = record_metric(r, metric, present);
    const bool truncated = r.truncated && *r.truncated != 0;
    const bool degraded = r.degraded && *r.degraded != 0;
    if (!present || truncated || degraded) {
      ++fit.excluded;
      continue;
    }
    by_n[r.n].push_back(v);
    ++fit.used;
  }
  if (by_n.size() < 3)
    throw std::invalid_argument("fit_exponent: need at least 3 distinct sizes, have " +
                                std::to_string(by_n.size()));
  for (auto& [n, vals] : by_n) {
    if (vals.size() < 3)
      throw std::invalid_argument("fit_exponent: size " + std::to_string(n) +
                                  " has fewer than 3 usable records");
    std::sort(vals.begin(), vals.end());
    const std::size_t h = vals.size() / 2;
    const double med =
        vals.size() % 2 ? vals[h] : 0.5 * (vals[h - 1] + vals[h]);
    if (!(med > 0))
      throw std::invalid_argument("fit_exponent: non-positive median at size " +
                                  std::to_string(n));
    fit.sizes.push_back(n);
    fit.medians.push_back(med);
  }
  // OLS of ln(median) on ln(n)
  const std::size_t m = fit.sizes.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(fit.sizes[i]));
    const double y = std::log(fit.medians[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  const double ss_tot = syy - sy * sy / m;
  double ss_res = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(fit.sizes[i]));
    const double y = std::log(fit.medians[i]);
    const double e = y - (fit.intercept + fit.slope * x);
    ss_res += e * e;
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

DegreeTailReport degree_tail_check(int n, double s, double beta, int samples,
                                   std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("degree_tail_check: samples >= 1");
  DegreeTailReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.threshold = 2.0 * std::log(static_cast<double>(n));
  for (int i = 0; i < samples; ++i) {
    ModelParams p;
    p.n = n;
    p.s = s;
    p.beta = beta;
    p.seed = hash_combine(mix64(seed), static_cast<std::uint64_t>(i));
    const LrpGraph g = sample_graph(p);
    if (g.max_degree() > rep.threshold) ++rep.violations;
  }
  rep.fraction_ok = 1.0 - static_cast<double>(rep.violations) / samples;
  return rep;
}

}  // namespace lrp
