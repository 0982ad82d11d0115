// Execution of parsed experiments: one function per subcommand, each
// producing a table (CSV) and a document (JSON); run() picks the format,
// adds the metadata header and writes the artifact.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "rnet/error.hpp"
#include "rnet/gasket.hpp"
#include "rnet/io.hpp"
#include "rnet/metric.hpp"
#include "rnet/random.hpp"
#include "rnet/resistance.hpp"
#include "rnet/trace.hpp"
#include "rnet/walk.hpp"
#include "rnet/walk_reports.hpp"

namespace rnet::cli {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// JSON has no infinity; encode it as null.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + field(cells[i]);
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

struct Artifact {
  Format preferred = Format::Json;
  Table table;
  json doc = json::object();
  std::vector<std::pair<std::string, std::string>> notes;  // extra CSV header lines
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<std::string> names_of(const Network& net, const VertexSet& set) {
  std::vector<std::string> out;
  for (VertexId v : set) out.push_back(net.name(v));
  return out;
}

struct ModeSpec {
  GasketMode mode = GasketMode::Deterministic;
  double lo = 1.0, hi = 1.0;
};

ModeSpec parse_mode(const std::string& mode) {
  if (mode == "det") return {};
  const auto parts = split(mode.substr(5), ',');
  return {GasketMode::Random, std::stod(parts.at(0)), std::stod(parts.at(1))};
}

GasketSpec gasket_spec(int level, int window, const std::string& mode, std::uint64_t seed) {
  const ModeSpec m = parse_mode(mode);
  GasketSpec spec;
  spec.level = level;
  spec.window = window;
  spec.mode = m.mode;
  spec.lo = m.lo;
  spec.hi = m.hi;
  spec.seed = seed;
  return spec;
}

// ---------------------------------------------------------------- resistance

Artifact run_resistance(const ResistanceParams& p) {
  const Network net = load_network(p.net);
  const Matrix R = resistance_values(net);

  std::vector<std::pair<VertexId, VertexId>> pairs;
  VertexSet b;
  if (!p.fuse.empty()) b = normalize_subset(net, net.indices(p.fuse));
  if (p.all) {
    const VertexSet& pool = b.empty() ? complement(net.size(), {}) : b;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) pairs.emplace_back(pool[i], pool[j]);
    }
  } else {
    for (const auto& pair : p.pairs) {
      const auto ends = split(pair, ',');
      pairs.emplace_back(net.index(ends.at(0)), net.index(ends.at(1)));
    }
  }

  Artifact a;
  a.preferred = Format::Csv;
  a.table.header = {"x", "y", "R"};
  if (!b.empty()) {
    a.table.header.insert(a.table.header.end(), {"R_fused", "bound"});
    const auto rows = fused_metric_error_report(net, b, pairs);
    json jrows = json::array();
    for (const auto& row : rows) {
      a.table.rows.push_back({net.name(row.x), net.name(row.y), num(row.resistance), num(row.fused), num(row.bound)});
      jrows.push_back({{"x", net.name(row.x)},
                       {"y", net.name(row.y)},
                       {"R", row.resistance},
                       {"R_fused", row.fused},
                       {"bound", jnum(row.bound)},
                       {"R_to_complement", row.to_complement}});
    }
    a.doc["rows"] = std::move(jrows);
    a.doc["fuse"] = names_of(net, b);
  } else {
    json jrows = json::array();
    for (auto [x, y] : pairs) {
      const double r = R(Index(x), Index(y));
      a.table.rows.push_back({net.name(x), net.name(y), num(r)});
      jrows.push_back({{"x", net.name(x)}, {"y", net.name(y)}, {"R", r}});
    }
    a.doc["rows"] = std::move(jrows);
  }
  // The document is also a space file: the resistance metric with the
  // associated measure.
  a.doc.update(space_to_json(space_from_network(net)));
  return a;
}

// --------------------------------------------------------------------- trace

Artifact run_trace(const TraceParams& p) {
  const Network net = load_network(p.net);
  const VertexSet b = p.ball ? resistance_ball(net, *p.ball) : normalize_subset(net, net.indices(p.subset));
  const TraceMethod primary = p.method == "hitting" ? TraceMethod::Hitting : TraceMethod::Schur;
  const TraceResult result = trace_network(net, b, primary);

  Artifact a;
  a.preferred = Format::Json;
  a.doc = network_to_json(result.reduced);
  a.doc["subset"] = names_of(net, result.subset);
  a.doc["method"] = std::string(to_string(primary));
  json defect = json::object();
  for (std::size_t i = 0; i < result.subset.size(); ++i) {
    defect[net.name(result.subset[i])] = result.defect[Index(i)];
  }
  a.doc["defect"] = std::move(defect);
  a.doc["crossing"] = result.crossing;
  if (p.method == "both") {
    const Matrix schur = trace_conductances(net, result.subset, TraceMethod::Schur);
    const Matrix hitting = trace_conductances(net, result.subset, TraceMethod::Hitting);
    a.doc["max_abs_difference"] = (schur - hitting).cwiseAbs().maxCoeff();
    a.notes.emplace_back("max_abs_difference", num((schur - hitting).cwiseAbs().maxCoeff()));
  }
  a.notes.emplace_back("crossing", num(result.crossing));

  a.table.header = {"u", "v", "conductance"};
  for (const Edge& e : result.reduced.edges()) {
    a.table.rows.push_back({result.reduced.name(e.u), result.reduced.name(e.v), num(e.conductance)});
  }
  return a;
}

// ---------------------------------------------------------------------- walk

Artifact run_walk(const WalkParams& p, std::uint64_t seed, unsigned workers) {
  const Network net = load_network(p.net);
  const double length = p.steps ? *p.steps : *p.horizon;
  Artifact a;
  a.preferred = Format::Csv;

  if (p.report.empty()) {
    const WalkKind kind = p.kind == "csrw" ? WalkKind::Csrw : WalkKind::Discrete;
    const VertexSet b = p.trace_subset.empty() ? VertexSet{} : normalize_subset(net, net.indices(p.trace_subset));
    a.table.header = {"sample", "step", "time", "vertex"};
    json paths = json::array();
    for (std::size_t s = 0; s < p.samples; ++s) {
      WalkPath path = simulate(net, net.root(), kind, length, derive_seed(seed, s));
      if (!b.empty()) path = trace_path(path, b);
      json states = json::array(), times = json::array();
      for (std::size_t k = 0; k < path.states.size(); ++k) {
        const double t = path.jump_time(k);
        a.table.rows.push_back({std::to_string(s), std::to_string(k), num(t), net.name(path.states[k])});
        states.push_back(net.name(path.states[k]));
        times.push_back(t);
      }
      paths.push_back({{"sample", s}, {"horizon", path.horizon}, {"states", states}, {"times", times}});
    }
    a.doc["paths"] = std::move(paths);
    return a;
  }

  if (p.report == "coupling") {
    const VertexSet b = normalize_subset(net, net.indices(p.trace_subset));
    const auto steps = static_cast<std::size_t>(std::floor(length));
    const CouplingReport r = verify_trace_coupling(net, b, steps, p.samples, seed, workers);
    a.table.header = {"steps", "samples", "vertex", "expected", "empirical", "stderr"};
    json rows = json::array();
    const double n = static_cast<double>(r.samples);
    for (std::size_t i = 0; i < r.subset.size(); ++i) {
      const double e = r.expected[i];
      const double emp = static_cast<double>(r.observed[i]) / n;
      const double se = std::sqrt(e * (1.0 - e) / n);
      a.table.rows.push_back({std::to_string(steps), std::to_string(r.samples), net.name(r.subset[i]), num(e),
                              num(emp), num(se)});
      rows.push_back({{"vertex", net.name(r.subset[i])}, {"expected", e}, {"empirical", emp}, {"stderr", se},
                      {"observed", r.observed[i]}});
    }
    a.doc["rows"] = std::move(rows);
    a.doc["chi_square"] = jnum(r.chi_square);
    a.doc["degrees_of_freedom"] = r.degrees_of_freedom;
    a.doc["p_value"] = r.p_value;
    a.notes.emplace_back("chi_square", num(r.chi_square));
    a.notes.emplace_back("degrees_of_freedom", std::to_string(r.degrees_of_freedom));
    a.notes.emplace_back("p_value", num(r.p_value));
    return a;
  }

  if (p.report == "exit") {
    a.table.header = {"radius", "delta",  "lambda", "time",   "resistance_to_complement",
                      "ball_mass", "empirical", "bound", "stderr", "within_bound"};
    json rows = json::array();
    for (double delta : p.deltas) {
      for (double lambda : p.lambdas) {
        const ExitTimeReport r = exit_time_report(net, *p.radius, delta, lambda, length, p.samples, seed, workers);
        a.table.rows.push_back({num(r.radius), num(r.delta), num(r.lambda), num(r.time),
                                num(r.resistance_to_complement), num(r.ball_mass), num(r.empirical), num(r.bound),
                                num(r.standard_error), r.within_bound() ? "1" : "0"});
        rows.push_back({{"radius", r.radius},
                        {"delta", r.delta},
                        {"lambda", r.lambda},
                        {"time", r.time},
                        {"resistance_to_complement", jnum(r.resistance_to_complement)},
                        {"ball_mass", r.ball_mass},
                        {"empirical", r.empirical},
                        {"bound", r.bound},
                        {"stderr", r.standard_error},
                        {"within_bound", r.within_bound()}});
      }
    }
    a.doc["rows"] = std::move(rows);
    return a;
  }

  // modulus
  const DiagnosticsReport r = local_time_modulus_report(net, length, p.alpha, p.samples, seed, workers, p.lambda_points);
  a.table.header = {"T", "alpha", "scale", "pairs", "lambda", "frequency", "threshold", "slope"};
  json rows = json::array();
  for (const ModulusEntry& e : r.entries) {
    const ModulusScale& sc = r.scales.at(std::size_t(e.scale));
    a.table.rows.push_back({num(r.T), num(r.alpha), std::to_string(e.scale), std::to_string(sc.pairs), num(e.lambda),
                            num(e.frequency), num(e.threshold), num(sc.slope)});
    rows.push_back({{"scale", e.scale}, {"lambda", e.lambda}, {"frequency", e.frequency}, {"threshold", e.threshold}});
  }
  json scales = json::array();
  for (const ModulusScale& sc : r.scales) {
    scales.push_back({{"scale", sc.scale}, {"pairs", sc.pairs}, {"slope", jnum(sc.slope)}});
  }
  a.doc["rows"] = std::move(rows);
  a.doc["scales"] = std::move(scales);
  a.doc["r_diam"] = r.r_diam;
  a.doc["m_total"] = r.m_total;
  a.doc["horizon"] = r.horizon;
  a.notes.emplace_back("r_diam", num(r.r_diam));
  a.notes.emplace_back("m_total", num(r.m_total));
  a.notes.emplace_back("horizon", num(r.horizon));
  return a;
}

// -------------------------------------------------------------------- metric

Artifact run_metric(const MetricParams& p) {
  FiniteMetricMeasureSpace space = load_space(p.space);
  if (p.restrict_radius) space = restrict_space(space, *p.restrict_radius);
  const CoverMode mode = p.cover_mode == "greedy" ? CoverMode::Greedy : CoverMode::Exact;

  Artifact a;
  a.preferred = Format::Json;
  a.doc = space_to_json(space);
  a.table.header = {"quantity", "value"};
  auto add = [&](const std::string& key, double value) {
    a.table.rows.push_back({key, num(value)});
  };

  const double diameter = space.d.maxCoeff();
  a.doc["summary"] = {{"points", space.size()}, {"diameter", diameter}, {"total_mass", space.mass.sum()}};
  add("points", double(space.size()));
  add("diameter", diameter);
  add("total_mass", space.mass.sum());

  if (p.cover) {
    const CoveringReport c = covering_number(space, *p.cover, mode);
    std::vector<std::string> centers;
    for (std::size_t i : c.centers) centers.push_back(space.points[i]);
    a.doc["cover"] = {{"epsilon", c.epsilon}, {"count", c.count}, {"centers", centers},
                      {"mode", std::string(to_string(c.mode))}};
    add("cover_count", double(c.count));
  }
  if (!p.entropy.empty()) {
    const double alpha = p.entropy[0];
    const int m = static_cast<int>(p.entropy[1]);
    if (double(m) != p.entropy[1]) throw Error(ErrorKind::Config, "entropy index M must be an integer");
    const double value = entropy_tail(space, alpha, m, p.scale, mode);
    a.doc["entropy"] = {{"alpha", alpha}, {"m", m}, {"scale", p.scale}, {"value", value},
                        {"mode", std::string(to_string(mode))}};
    add("entropy_tail", value);
  }
  if (p.prohorov) {
    const FiniteMetricMeasureSpace other = load_space(*p.prohorov);
    if (other.size() != space.size()) throw Error(ErrorKind::DomainMismatch, "Prohorov spaces differ in points");
    Vector nu = Vector::Zero(Index(space.size()));
    for (std::size_t i = 0; i < other.size(); ++i) {
      const auto it = std::find(space.points.begin(), space.points.end(), other.points[i]);
      if (it == space.points.end()) {
        throw Error(ErrorKind::DomainMismatch, "point '" + other.points[i] + "' not in the first space");
      }
      nu[it - space.points.begin()] = other.mass[Index(i)];
    }
    const double value = prohorov_distance(space.d, space.mass, nu);
    a.doc["prohorov"] = {{"other", p.prohorov->string()}, {"distance", value}};
    add("prohorov", value);
  }
  if (p.ghp) {
    const FiniteMetricMeasureSpace other = load_space(*p.ghp);
    const GhpBounds g = ghp_distance_bounds(space, other);
    a.doc["ghp"] = {{"other", p.ghp->string()}, {"lower", g.lower}, {"upper", g.upper},
                    {"exhaustive", g.exhaustive}, {"candidates", g.candidates}};
    add("ghp_lower", g.lower);
    add("ghp_upper", g.upper);
  }
  return a;
}

// -------------------------------------------------------------------- gasket

Artifact run_gasket(const GasketParams& p, std::uint64_t seed, unsigned workers) {
  const GasketSpec spec = gasket_spec(p.level, p.window, p.mode, seed);
  Artifact a;
  if (!p.convergence.empty()) {
    const int m = p.convergence[0], N0 = p.convergence[1];
    const std::vector<int> levels(p.convergence.begin() + 2, p.convergence.end());
    const auto rows = convergence_report(levels, m, N0, spec, p.seeds, workers);
    a.preferred = Format::Csv;
    a.table.header = {"level", "m", "N0", "sup_deviation", "seed_spread", "seeds"};
    json jrows = json::array();
    for (const auto& r : rows) {
      a.table.rows.push_back({std::to_string(r.level), std::to_string(m), std::to_string(N0), num(r.sup_deviation),
                              num(r.seed_spread), std::to_string(r.seeds)});
      jrows.push_back({{"level", r.level}, {"sup_deviation", r.sup_deviation}, {"seed_spread", r.seed_spread},
                       {"seeds", r.seeds}});
    }
    a.doc["rows"] = std::move(jrows);
    a.doc["m"] = m;
    a.doc["N0"] = N0;
    return a;
  }

  const Gasket g = build_gasket(spec);
  a.preferred = Format::Json;
  a.doc = network_to_json(g.network);
  a.doc["gasket"] = {{"level", spec.level}, {"window", spec.window},
                     {"mode", spec.mode == GasketMode::Deterministic ? "det" : "rand"},
                     {"lo", spec.lo}, {"hi", spec.hi}, {"c0", spec.c0}, {"a_n", spec.a_n()}, {"b_n", spec.b_n()},
                     {"vertices", g.network.size()}, {"edges", g.network.edges().size()}};
  a.notes.emplace_back("c0", num(spec.c0));
  a.notes.emplace_back("a_n", num(spec.a_n()));
  a.notes.emplace_back("b_n", num(spec.b_n()));
  a.table.header = {"u", "v", "conductance"};
  for (const Edge& e : g.network.edges()) {
    a.table.rows.push_back({g.network.name(e.u), g.network.name(e.v), num(e.conductance)});
  }
  return a;
}

// ------------------------------------------------------------------ converge

Artifact run_converge(const ConvergeParams& p, std::uint64_t seed) {
  Artifact a;
  a.preferred = Format::Csv;
  a.table.header = {"level", "radius", "ball_points", "resistance_to_complement", "crossing_conductance",
                    "entropy_tail", "cover_mode"};
  json rows = json::array();
  for (int n : p.levels) {
    const GasketSpec spec = gasket_spec(n, p.window, p.mode, seed);
    const Gasket g = build_gasket(spec);
    const FiniteMetricMeasureSpace space = space_from_network(g.network);
    for (double r : p.radii) {
      const VertexSet ball = resistance_ball(g.network, r);
      const VertexSet outside = complement(g.network.size(), ball);
      const double to_complement = outside.empty() ? kInfinite
                                                   : resistance_between_sets(g.network, {g.network.root()}, outside);
      const double crossing = crossing_conductance(g.network, ball, spec.b_n());
      const FiniteMetricMeasureSpace sub = restrict_space(space, r);
      const CoverMode mode = sub.size() <= kMaxExactCoverPoints ? CoverMode::Exact : CoverMode::Greedy;
      const double tail = entropy_tail(sub, p.alpha, p.m, 1.0, mode);
      a.table.rows.push_back({std::to_string(n), num(r), std::to_string(ball.size()), num(to_complement),
                              num(crossing), num(tail), std::string(to_string(mode))});
      rows.push_back({{"level", n}, {"radius", r}, {"ball_points", ball.size()},
                      {"resistance_to_complement", jnum(to_complement)}, {"crossing_conductance", crossing},
                      {"entropy_tail", tail}, {"cover_mode", std::string(to_string(mode))}});
    }
  }
  a.doc["rows"] = std::move(rows);
  return a;
}

// -------------------------------------------------------------------- output

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render(const ExperimentConfig& config, Artifact& a, Format format) {
  const std::string hash = config_hash(config);
  if (format == Format::Csv) {
    std::string out;
    out += std::string("# tool: ") + kToolName + " " + kToolVersion + "\n";
    out += "# command: " + to_string(config.command) + "\n";
    out += "# config_hash: " + hash + "\n";
    out += "# seed: " + std::to_string(config.seed) + "\n";
    for (const auto& [k, v] : a.notes) out += "# " + k + ": " + v + "\n";
    out += "# timestamp: " + timestamp() + "\n";
    return out + a.table.render();
  }
  a.doc["meta"] = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"command", to_string(config.command)},
                   {"config_hash", hash},
                   {"seed", config.seed},
                   {"config", config_to_json(config)},
                   {"timestamp", timestamp()}};
  return a.doc.dump(2) + "\n";
}

Format resolve_format(const ExperimentConfig& config, Format preferred) {
  if (config.format) return *config.format;
  const auto ext = config.output.extension();
  if (ext == ".json") return Format::Json;
  if (ext == ".csv") return Format::Csv;
  return preferred;
}

std::filesystem::path resolve_output(const ExperimentConfig& config, Format format) {
  if (!config.output.empty()) return config.output;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / (to_string(config.command) + (format == Format::Csv ? ".csv" : ".json"));
  }
  return {};
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Parse: return kExitIo;
    case ErrorKind::Config: return kExitConfig;
    default: return kExitComputation;
  }
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Artifact a = std::visit(
        [&](const auto& p) -> Artifact {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, ResistanceParams>) return run_resistance(p);
          else if constexpr (std::is_same_v<P, TraceParams>) return run_trace(p);
          else if constexpr (std::is_same_v<P, WalkParams>) return run_walk(p, config.seed, config.workers);
          else if constexpr (std::is_same_v<P, MetricParams>) return run_metric(p);
          else if constexpr (std::is_same_v<P, GasketParams>) return run_gasket(p, config.seed, config.workers);
          else return run_converge(p, config.seed);
        },
        config.params);
    const Format format = resolve_format(config, a.preferred);
    const std::string text = render(config, a, format);
    const std::filesystem::path path = resolve_output(config, format);
    if (path.empty()) {
      out << text;
    } else {
      write_text_file(path, text);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "Error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace rnet::cli
