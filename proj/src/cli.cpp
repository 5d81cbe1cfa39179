#include "acipmaps/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "acipmaps/construct.hpp"
#include "acipmaps/numerics.hpp"

namespace acipmaps::cli {

namespace {

const std::vector<std::string> kCommands{"construct", "verify", "distortion", "dini"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Check {
  std::string name;
  double value = 0.0;
  std::optional<double> tol;  // value <= tol unless pass is set directly
  bool pass = false;
  std::string note;
};

Check bounded(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol, {}};
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    json j{{"name", c.name}, {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
           {"pass", c.pass}};
    j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    out.push_back(std::move(j));
  }
  return out;
}

const Check* first_failure(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

json config_json(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"mode", cfg.mode},   {"modulus", cfg.modulus},
          {"seed", cfg.seed},       {"grid", cfg.grid},   {"kmax", cfg.effective_k_max()},
          {"tol", cfg.tol}};
}

struct Built {
  Modulus omega;
  std::optional<DensityProfile> rho;
  std::optional<ExpandingCircleMap> f;
};

Built build(const RunConfig& cfg) {
  Built b{parse_modulus(cfg.modulus), std::nullopt, std::nullopt};
  if (cfg.mode == "acip") {
    b.rho = build_density(b.omega);
    b.f = build_frho(*b.rho);
  } else {
    b.f = build_F_omega_member(b.omega, cfg.seed);
  }
  return b;
}

json map_json(const ExpandingCircleMap& f) {
  return {{"provenance", to_json(f.provenance())},
          {"breakpoint", f.breakpoint()},
          {"lambda", f.lambda()},
          {"sigma", f.sigma()}};
}

Check invariance_check(const Built& b, const RunConfig& cfg) {
  const double r = b.rho ? invariance_residual(*b.f, *b.rho, cfg.grid)
                         : invariance_residual(*b.f, [](double) { return 1.0; }, cfg.grid);
  Check c = bounded("invariance", r, cfg.tol);
  c.note = b.rho ? "sup |P rho - rho| on grid" : "sup |P1 - 1| on grid";
  return c;
}

Check gluing_check(const ExpandingCircleMap& f) {
  const GluingReport g = check_c1_circle(f, 1e-8);
  Check c{"gluing", std::max(g.interior_residual, g.endpoint_residual), 1e-8, g.passed, {}};
  return c;
}

std::string prepare_dir(const RunConfig& cfg) {
  const std::filesystem::path dir = std::filesystem::path(cfg.out) / cfg.run_name();
  std::filesystem::create_directories(dir);
  return dir.string();
}

CommandResult finish(const RunConfig& cfg, const std::string& dir, const std::string& file,
                     json report, const std::vector<Check>& checks) {
  CommandResult r;
  r.directory = dir;
  report["command"] = cfg.command;
  report["config"] = config_json(cfg);
  report["timestamp"] = utc_timestamp();
  report["checks"] = checks_json(checks);
  const Check* bad = first_failure(checks);
  report["passed"] = bad == nullptr;
  if (bad) {
    r.exit_code = 1;
    r.failure = bad->name + " (value " + fmt(bad->value) +
                (bad->tol ? ", tol " + fmt(*bad->tol) : std::string()) + ")";
  }
  write_file((std::filesystem::path(dir) / file).string(), report.dump(2) + "\n");
  r.report = std::move(report);
  return r;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw UsageError("unknown command '" + command + "'");
  if (mode != "acip" && mode != "lebesgue")
    throw UsageError("--mode must be acip or lebesgue, got '" + mode + "'");
  if (grid < 16 || grid > (1 << 20) || (grid & (grid - 1)) != 0)
    throw UsageError("--grid must be a power of two in [16, 2^20]");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("--tol must be positive");
  if (k_max < 0) throw UsageError("--kmax must be nonnegative");
  if (command == "distortion" && effective_k_max() < 20)
    throw UsageError("--kmax must be >= 20 for distortion");
  if (command == "dini" && effective_k_max() < 10)
    throw UsageError("--kmax must be >= 10 for dini");
  if (modulus.empty()) throw UsageError("--modulus is required");
}

int RunConfig::effective_k_max() const {
  if (k_max > 0) return k_max;
  return command == "dini" ? 10000 : 20;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  char tol_buf[32];
  std::snprintf(tol_buf, sizeof tol_buf, "%.17g", tol);
  os << "command=" << command << ";mode=" << mode << ";modulus=" << modulus << ";seed=" << seed
     << ";grid=" << grid << ";kmax=" << effective_k_max() << ";tol=" << tol_buf;
  return os.str();
}

std::string RunConfig::run_name() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return command + "-" + buf;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto parse_int = [&](auto& target) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(value, &used);
    } catch (const std::exception&) {
      throw UsageError("bad integer for " + key + ": '" + value + "'");
    }
    if (used != value.size() || v < 0) throw UsageError("bad integer for " + key + ": '" + value + "'");
    target = static_cast<std::remove_reference_t<decltype(target)>>(v);
  };
  if (key == "mode") cfg.mode = value;
  else if (key == "modulus") cfg.modulus = value;
  else if (key == "seed") parse_int(cfg.seed);
  else if (key == "grid") parse_int(cfg.grid);
  else if (key == "kmax") parse_int(cfg.k_max);
  else if (key == "out") cfg.out = value;
  else if (key == "tol") {
    std::size_t used = 0;
    try {
      cfg.tol = std::stod(value, &used);
    } catch (const std::exception&) {
      throw UsageError("bad number for tol: '" + value + "'");
    }
    if (used != value.size()) throw UsageError("bad number for tol: '" + value + "'");
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

CommandResult cmd_construct(const RunConfig& cfg) {
  const Built b = build(cfg);
  const ExpandingCircleMap& f = *b.f;
  const MapCertificate mc = certify_map(f);
  std::vector<Check> checks;
  json report;
  if (b.rho) {
    const auto& dc = b.rho->certification();
    checks.push_back({"density",
                      std::max({dc.p1_left_residual, dc.p1_right_residual, dc.p3_residual}),
                      std::nullopt, dc.passed(), "largest of the (P1) and (P3) residuals"});
    report["density"] = to_json(dc);
    report["density"]["level"] = b.rho->left_level.value_or(std::nan(""));
  }
  checks.push_back({"full_branch", mc.full_branch_residual, std::nullopt, mc.full_branch, {}});
  checks.push_back({"monotone", mc.lambda, std::nullopt, mc.monotone, {}});
  checks.push_back({"expanding", mc.lambda, std::nullopt, mc.expanding, "sampled min f'"});
  checks.push_back(
      {"inverse_consistency", mc.inverse_residual, std::nullopt, mc.inverse_consistent, {}});
  if (!b.rho) {
    const double a = f.breakpoint();
    checks.push_back(bounded(
        "extension_condition",
        check_extension_condition(f.branch_deriv(1, 0.0), f.branch_deriv(1, a)), 1e-10));
  }
  checks.push_back(gluing_check(f));
  checks.push_back(invariance_check(b, cfg));

  report["map"] = map_json(f);
  report["map"]["certificate"] = to_json(mc);
  const std::string dir = prepare_dir(cfg);
  {
    std::ostringstream os;
    write_map_csv(os, f, cfg.grid);
    write_file((std::filesystem::path(dir) / "map.csv").string(), os.str());
  }
  if (b.rho) {
    std::ostringstream os;
    write_density_csv(os, *b.rho, cfg.grid);
    write_file((std::filesystem::path(dir) / "density.csv").string(), os.str());
  }
  return finish(cfg, dir, "certificate.json", std::move(report), checks);
}

CommandResult cmd_verify(const RunConfig& cfg) {
  const Built b = build(cfg);
  const ExpandingCircleMap& f = *b.f;
  std::vector<Check> checks;
  checks.push_back(invariance_check(b, cfg));
  checks.push_back(gluing_check(f));

  const double t_omega = b.omega.t_omega();
  const auto scales = dyadic_scales(1e-5, t_omega);
  const ModulusEstimate e1 = branch_derivative_modulus(f, 1, scales);
  const ModulusEstimate e2 = branch_derivative_modulus(f, 2, scales);
  double lo = INFINITY, hi = 0.0;
  bool vanishing = false;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double w = b.omega(scales[i]);
    if (!(w > 0.0)) {
      vanishing = true;
      break;
    }
    for (const auto* e : {&e1, &e2}) {
      lo = std::min(lo, e->values[i] / w);
      hi = std::max(hi, e->values[i] / w);
    }
  }
  Check ratio{"modulus_ratio", hi, std::nullopt, false, {}};
  if (vanishing) {
    ratio.value = NAN;
    ratio.pass = true;
    ratio.note = "omega vanishes; ratio undefined";
  } else {
    ratio.pass = lo >= 0.1 && hi <= 10.0;
    ratio.note = "ratio range [" + fmt(lo) + ", " + fmt(hi) + "] must lie in [0.1, 10]";
  }
  checks.push_back(ratio);

  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    BirkhoffOptions opts;
    opts.seed = cfg.seed + static_cast<std::uint64_t>(s);
    std::mt19937_64 rng(opts.seed);
    const double x0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double avg = birkhoff_average(
        f, [](double x) { return x <= 0.5 ? 1.0 : 0.0; }, x0, 100000, opts);
    worst = std::max(worst, std::fabs(avg - 0.5));
  }
  Check birk = bounded("birkhoff", worst, 0.05);
  birk.note = "worst |average of 1_[0,1/2] - 1/2| over 10 orbits of 1e5 steps";
  checks.push_back(birk);

  json report;
  report["map"] = map_json(f);
  report["modulus_ratio"] = {{"lo", std::isfinite(lo) ? json(lo) : json(nullptr)},
                             {"hi", hi},
                             {"t_min", 1e-5},
                             {"t_omega", t_omega},
                             {"scales", scales.size()}};
  const std::string dir = prepare_dir(cfg);
  {
    std::ostringstream os;
    write_modulus_csv(os, e1, e2, b.omega);
    write_file((std::filesystem::path(dir) / "modulus.csv").string(), os.str());
  }
  return finish(cfg, dir, "report.json", std::move(report), checks);
}

CommandResult cmd_distortion(const RunConfig& cfg) {
  const Built b = build(cfg);
  const DistortionReport dr = classify_distortion(*b.f, b.omega, cfg.effective_k_max());
  const bool agrees = (dr.verdict == DistortionVerdict::bounded && dr.dini == DiniVerdict::dini) ||
                      (dr.verdict == DistortionVerdict::unbounded &&
                       dr.dini == DiniVerdict::non_dini);
  std::vector<Check> checks;
  checks.push_back({"verdict_matches_dini", dr.plateau_increase, std::nullopt, agrees,
                    to_string(dr.verdict) + " vs " + to_string(dr.dini)});
  json report;
  report["map"] = map_json(*b.f);
  report["distortion"] = to_json(dr);
  const std::string dir = prepare_dir(cfg);
  {
    std::ostringstream os;
    write_distortion_csv(os, dr);
    write_file((std::filesystem::path(dir) / "distortion.csv").string(), os.str());
  }
  return finish(cfg, dir, "distortion.json", std::move(report), checks);
}

CommandResult cmd_dini(const RunConfig& cfg) {
  const Modulus omega = parse_modulus(cfg.modulus);
  DiniOptions opts;
  opts.k_max = cfg.effective_k_max();
  const DiniResult r = dini_classify(omega, opts);
  std::vector<Check> checks;
  checks.push_back({"classified", r.integral, std::nullopt,
                    r.verdict != DiniVerdict::inconclusive, to_string(r.verdict)});
  json report;
  report["modulus"] = {{"descriptor", omega.descriptor()},
                       {"family", to_string(omega.family())},
                       {"t_omega", omega.t_omega()}};
  report["dini"] = to_json(r);
  const std::string dir = prepare_dir(cfg);
  return finish(cfg, dir, "dini.json", std::move(report), checks);
}

CommandResult run(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "construct") return cmd_construct(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "distortion") return cmd_distortion(cfg);
  return cmd_dini(cfg);
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expanding circle maps with prescribed invariant densities"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> flag_help{
      {"mode", "acip (rho-preserving) or lebesgue"},
      {"modulus", "modulus descriptor, e.g. holder:alpha=0.5,C=1"},
      {"seed", "seed for the lebesgue-family member and spot checks"},
      {"grid", "grid size, a power of two"},
      {"kmax", "largest level (distortion) or partial sum (dini)"},
      {"tol", "invariance tolerance"},
      {"out", "output root directory"}};
  const std::map<std::string, std::string> about{
      {"construct", "build a map and write its certificate, map and density tables"},
      {"verify", "re-check invariance, gluing, modulus and Birkhoff averages"},
      {"distortion", "sweep the distortion sequence D_k and classify it"},
      {"dini", "classify the modulus by dyadic sums and quadrature"}};
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "flat key=value config file");
    for (const auto& [flag, help] : flag_help)
      sub->add_option_function<std::string>(
          "--" + flag, [&flags, flag = flag](const std::string& v) { flags[flag] = v; }, help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  RunConfig cfg;
  try {
    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
    cfg.validate();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const CommandResult r = run(cfg);
    out << r.directory << "\n";
    if (r.exit_code != 0) err << "certification failed: " << r.failure << "\n";
    return r.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    if (what.find("not in K") != std::string::npos) {
      err << "certification failed: " << what << "\n";
      return 1;
    }
    err << "usage error: " << what << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "certification failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace acipmaps::cli
