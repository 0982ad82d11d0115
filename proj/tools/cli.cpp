#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rnet/error.hpp"
#include "rnet/random.hpp"

namespace rnet::cli {

namespace {

using json = nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorKind::Config, message); }

void check_mode(const std::string& mode) {
  if (mode == "det") return;
  if (mode.rfind("rand:", 0) == 0) {
    const auto parts = split(mode.substr(5), ',');
    if (parts.size() == 2) {
      try {
        const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
        if (lo > 0.0 && lo <= hi) return;
      } catch (const std::exception&) {
      }
    }
  }
  config_error("--mode must be det or rand:lo,hi with 0 < lo <= hi, got '" + mode + "'");
}

void validate(ExperimentConfig& config) {
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ResistanceParams>) {
          for (const auto& pair : p.pairs) {
            if (split(pair, ',').size() != 2) config_error("--pairs expects x,y, got '" + pair + "'");
          }
          if (p.pairs.empty()) p.all = true;
        } else if constexpr (std::is_same_v<P, TraceParams>) {
          if (p.subset.empty() == !p.ball.has_value()) config_error("trace needs exactly one of --subset and --ball");
          if (p.method != "schur" && p.method != "hitting" && p.method != "both") {
            config_error("--method must be schur, hitting or both");
          }
        } else if constexpr (std::is_same_v<P, WalkParams>) {
          if (p.kind != "discrete" && p.kind != "csrw") config_error("--kind must be discrete or csrw");
          if (p.steps && p.horizon) config_error("give --steps or --horizon, not both");
          if (!p.steps && !p.horizon) config_error("walk needs --steps or --horizon");
          if (p.samples == 0) config_error("--samples must be positive");
          if (!p.report.empty() && p.report != "modulus" && p.report != "exit" && p.report != "coupling") {
            config_error("--report must be modulus, exit or coupling");
          }
          if (p.report == "exit" && (!p.radius || p.deltas.empty() || p.lambdas.empty())) {
            config_error("exit report needs --radius, --delta and --lambda");
          }
          if (p.report == "coupling" && p.trace_subset.empty()) config_error("coupling report needs --trace-subset");
          if ((p.report == "exit" || p.report == "coupling") && p.kind != "discrete") {
            config_error("exit and coupling reports use the discrete walk");
          }
        } else if constexpr (std::is_same_v<P, MetricParams>) {
          if (p.cover_mode != "exact" && p.cover_mode != "greedy") config_error("--cover-mode must be exact or greedy");
          if (!p.entropy.empty() && p.entropy.size() != 2) config_error("--entropy expects ALPHA,M");
        } else if constexpr (std::is_same_v<P, GasketParams>) {
          check_mode(p.mode);
          if (p.level < 0 || p.window < 0) config_error("--level and --window must be >= 0");
          if (!p.convergence.empty() && p.convergence.size() < 3) config_error("convergence report expects m,N0,n...");
        } else if constexpr (std::is_same_v<P, ConvergeParams>) {
          check_mode(p.mode);
          if (p.levels.empty()) config_error("converge needs --levels");
          if (p.radii.empty()) config_error("converge needs --radii");
        }
      },
      config.params);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string path_string(const std::optional<std::filesystem::path>& p) { return p ? p->string() : std::string(); }

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::Resistance: return "resistance";
    case Command::Trace: return "trace";
    case Command::Walk: return "walk";
    case Command::Metric: return "metric";
    case Command::Gasket: return "gasket";
    case Command::Converge: return "converge";
  }
  return "unknown";
}

json config_to_json(const ExperimentConfig& config) {
  json params = std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ResistanceParams>) {
          return {{"net", p.net.string()}, {"pairs", p.pairs}, {"all", p.all}, {"fuse", p.fuse}};
        } else if constexpr (std::is_same_v<P, TraceParams>) {
          return {{"net", p.net.string()}, {"subset", p.subset}, {"ball", p.ball ? json(*p.ball) : json()},
                  {"method", p.method}};
        } else if constexpr (std::is_same_v<P, WalkParams>) {
          return {{"net", p.net.string()},
                  {"kind", p.kind},
                  {"steps", p.steps ? json(*p.steps) : json()},
                  {"horizon", p.horizon ? json(*p.horizon) : json()},
                  {"samples", p.samples},
                  {"trace_subset", p.trace_subset},
                  {"report", p.report},
                  {"radius", p.radius ? json(*p.radius) : json()},
                  {"delta", p.deltas},
                  {"lambda", p.lambdas},
                  {"alpha", p.alpha},
                  {"lambda_points", p.lambda_points}};
        } else if constexpr (std::is_same_v<P, MetricParams>) {
          return {{"space", p.space.string()},
                  {"restrict", p.restrict_radius ? json(*p.restrict_radius) : json()},
                  {"cover", p.cover ? json(*p.cover) : json()},
                  {"cover_mode", p.cover_mode},
                  {"entropy", p.entropy},
                  {"scale", p.scale},
                  {"prohorov", path_string(p.prohorov)},
                  {"ghp", path_string(p.ghp)}};
        } else if constexpr (std::is_same_v<P, GasketParams>) {
          return {{"level", p.level}, {"window", p.window}, {"mode", p.mode}, {"convergence", p.convergence},
                  {"seeds", p.seeds}};
        } else {
          return {{"levels", p.levels}, {"window", p.window}, {"mode", p.mode}, {"radii", p.radii},
                  {"alpha", p.alpha}, {"m", p.m}};
        }
      },
      config.params);
  return {{"command", to_string(config.command)}, {"seed", config.seed}, {"params", std::move(params)}};
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_to_json(config).dump())));
  return buf;
}

ParseOutcome parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Electrical networks, traces, random walks and resistance metrics", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ExperimentConfig config;
  config.workers = default_workers();
  ResistanceParams resistance;
  TraceParams trace;
  WalkParams walk;
  MetricParams metric;
  GasketParams gasket;
  ConvergeParams converge;
  std::string format;
  std::vector<std::string> gasket_report;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--out", config.output, "output file (.csv or .json)");
    sub->add_option("--format", format, "csv or json (default: from --out, else per command)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", config.workers, "worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
  };

  auto* r = app.add_subcommand("resistance", "effective resistances");
  r->add_option("--net", resistance.net, "network file")->required();
  r->add_option("--pairs", resistance.pairs, "vertex pairs x,y");
  r->add_flag("--all", resistance.all, "all pairs (default without --pairs)");
  r->add_option("--fuse", resistance.fuse, "subset B: add R^(B) and the error bound")->delimiter(',');
  common(r);

  auto* t = app.add_subcommand("trace", "trace network onto a subset");
  t->add_option("--net", trace.net, "network file")->required();
  t->add_option("--subset", trace.subset, "vertices of B (must contain the root)")->delimiter(',');
  t->add_option("--ball", trace.ball, "use B = open resistance ball of this radius");
  t->add_option("--method", trace.method, "schur, hitting or both");
  common(t);

  auto* w = app.add_subcommand("walk", "random walk simulation and reports");
  w->add_option("--net", walk.net, "network file")->required();
  w->add_option("--kind", walk.kind, "discrete or csrw");
  w->add_option("--steps", walk.steps, "number of steps (discrete) or trace moves (coupling)");
  w->add_option("--horizon", walk.horizon, "time horizon; the T parameter of the modulus report");
  w->add_option("--samples", walk.samples, "number of sample paths");
  w->add_option("--trace-subset", walk.trace_subset, "observe the walk on this subset")->delimiter(',');
  w->add_option("--report", walk.report, "modulus, exit or coupling");
  w->add_option("--radius", walk.radius, "exit report: ball radius");
  w->add_option("--delta", walk.deltas, "exit report: delta values")->delimiter(',');
  w->add_option("--lambda", walk.lambdas, "exit report: lambda values")->delimiter(',');
  w->add_option("--alpha", walk.alpha, "modulus report: alpha in (0, 1/2)");
  w->add_option("--lambda-points", walk.lambda_points, "modulus report: grid size");
  common(w);

  auto* m = app.add_subcommand("metric", "covering numbers, entropy, Prohorov and GHP");
  m->add_option("--space", metric.space, "space or network file")->required();
  m->add_option("--restrict", metric.restrict_radius, "restrict to the open ball of this radius first");
  m->add_option("--cover", metric.cover, "covering radius");
  m->add_option("--cover-mode", metric.cover_mode, "exact or greedy");
  m->add_option("--entropy", metric.entropy, "ALPHA,M for the entropy tail")->delimiter(',');
  m->add_option("--scale", metric.scale, "divide distances by this before the entropy tail");
  m->add_option("--prohorov", metric.prohorov, "space file with a second measure on the same points");
  m->add_option("--ghp", metric.ghp, "second space for GHP bounds");
  common(m);

  auto* g = app.add_subcommand("gasket", "Sierpinski gasket networks");
  g->add_option("--level", gasket.level, "refinement level n")->required();
  g->add_option("--window", gasket.window, "window exponent N")->required();
  g->add_option("--mode", gasket.mode, "det or rand:lo,hi");
  g->add_option("--report", gasket_report, "convergence m,N0,n1,n2,...")->expected(2);
  g->add_option("--seeds", gasket.seeds, "random mode: builds per level");
  common(g);

  auto* c = app.add_subcommand("converge", "non-explosion and entropy diagnostics over gasket levels");
  c->add_option("--levels", converge.levels, "levels n")->delimiter(',')->required();
  c->add_option("--window", converge.window, "window exponent N");
  c->add_option("--mode", converge.mode, "det or rand:lo,hi");
  c->add_option("--radii", converge.radii, "ball radii")->delimiter(',')->required();
  c->add_option("--alpha", converge.alpha, "entropy exponent");
  c->add_option("--m", converge.m, "first entropy index");
  common(c);

  ParseOutcome outcome;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    outcome.message = app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp&) {
    outcome.message = app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::CallForVersion&) {
    outcome.message = std::string(kToolName) + " " + kToolVersion + "\n";
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = std::string("ConfigError: ") + e.what() + "\n";
    return outcome;
  }

  if (r->parsed()) {
    config.command = Command::Resistance;
    config.params = resistance;
  } else if (t->parsed()) {
    config.command = Command::Trace;
    config.params = trace;
  } else if (w->parsed()) {
    config.command = Command::Walk;
    config.params = walk;
  } else if (m->parsed()) {
    config.command = Command::Metric;
    config.params = metric;
  } else if (g->parsed()) {
    config.command = Command::Gasket;
    if (!gasket_report.empty()) {
      if (gasket_report[0] != "convergence") {
        outcome.exit_code = kExitConfig;
        outcome.message = "ConfigError: --report must be 'convergence m,N0,n...'\n";
        return outcome;
      }
      try {
        for (const auto& v : split(gasket_report[1], ',')) gasket.convergence.push_back(std::stoi(v));
      } catch (const std::exception&) {
        outcome.exit_code = kExitConfig;
        outcome.message = "ConfigError: convergence report expects integers m,N0,n...\n";
        return outcome;
      }
    }
    config.params = gasket;
  } else {
    config.command = Command::Converge;
    config.params = converge;
  }
  if (format == "csv") config.format = Format::Csv;
  if (format == "json") config.format = Format::Json;

  try {
    validate(config);
  } catch (const Error& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = std::string(e.what()) + "\n";
    return outcome;
  }
  outcome.config = std::move(config);
  return outcome;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParseOutcome parsed = parse_args(args);
  if (!parsed.config) {
    (parsed.exit_code == kExitOk ? out : err) << parsed.message;
    return parsed.exit_code;
  }
  return run(*parsed.config, out, err);
}

}  // namespace rnet::cli
