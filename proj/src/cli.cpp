#include "qlnls/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlnls/analysis.hpp"

namespace qlnls::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

}  // namespace

// ---- Config ---------------------------------------------------------------

Config Config::parse(std::string_view text) {
  Config c;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError("config line " + std::to_string(line_no) + ": bad section name");
      c.values_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": key outside any [section]");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (!valid_name(key)) throw ConfigError("config line " + std::to_string(line_no) + ": bad key");
    c.values_[section][key] = trim(std::string_view(line).substr(eq + 1));
  }
  return c;
}

Config Config::load(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  if (!valid_name(section) || !valid_name(key)) throw ConfigError("bad config key " + section + "." + key);
  values_[section][key] = value;
}

void Config::apply_override(const std::string& assignment, const std::string& default_section) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  std::string key = trim(std::string_view(assignment).substr(0, eq));
  std::string section = default_section;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  set(section, key, trim(std::string_view(assignment).substr(eq + 1)));
}

const Config::Section& Config::section(const std::string& name) const {
  static const Section empty;
  const auto it = values_.find(name);
  return it == values_.end() ? empty : it->second;
}

// ---- Resolved values --------------------------------------------------------

std::string Resolved::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(command_ + ": missing key " + key);
  return it->second;
}

double Resolved::num(const std::string& key) const {
  const std::string s = str(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(command_ + "." + key + ": not a number: '" + s + "'");
  }
}

double Resolved::positive(const std::string& key) const {
  const double v = num(key);
  if (!(v > 0.0)) throw ConfigError(command_ + "." + key + " must be positive");
  return v;
}

int Resolved::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(command_ + "." + key + " must be an integer");
  return static_cast<int>(v);
}

bool Resolved::flag(const std::string& key) const {
  const std::string s = str(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(command_ + "." + key + ": expected a boolean");
}

std::vector<double> Resolved::list(const std::string& key) const {
  std::string s = str(key);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(command_ + "." + key + ": bad list entry '" + tok + "'");
    }
  }
  return out;
}

Config::Section defaults_for(const std::string& command) {
  const std::string out = "qlnls_out";
  if (command == "simulate") {
    return {{"N", "256"},          {"epsilon", "0.1"},     {"amplitude", "1"},
            {"T", "1"},            {"dt", "1e-3"},         {"scheme", "split-step"},
            {"order", "6"},        {"sigma", "2"},         {"nonlinearity", "focusing"},
            {"snapshot_every", "10"}, {"out_dir", out}};
  }
  if (command == "oracle") {
    return {{"amplitude", "0.3"}, {"mode", "3"},          {"T", "1"},          {"N", "8"},
            {"dt", "1e-3"},       {"plane_tol", "1e-8"},  {"random_N", "8"},   {"random_scale", "0.05"},
            {"random_T", "0.5"},  {"random_seed", "1"},   {"random_tol", "1e-6"}, {"random_scheme", "rk4"},
            {"out_dir", out}};
  }
  if (command == "nf-check") return {{"nsym", "4"}, {"out_dir", out}};
  if (command == "nf-deviation") {
    return {{"eps", "0.4, 0.2, 0.1"}, {"N", "64"},          {"h", "1e-4"},           {"measure", "both"},
            {"f1_substeps", "16"},    {"f2_substeps", "4"}, {"include_f2", "true"},  {"allow_large", "false"},
            {"threads", "0"},         {"out_dir", out}};
  }
  if (command == "scaling") {
    return {{"eps", "0.4, 0.2, 0.1, 0.05"}, {"N", "256"},  {"T", "1"},          {"dt", "1e-3"},
            {"scheme", "split-step"},       {"order", "6"}, {"sigma", "2"},     {"p", "2"},
            {"delta", "0"},                 {"slope_lo", "0.8"}, {"slope_hi", "1.3"}, {"r2_min", "0.95"},
            {"threads", "0"},               {"out_dir", out}};
  }
  if (command == "report") return {{"out_dir", out}};
  throw ConfigError("unknown command " + command);
}

Resolved resolve(const std::string& command, const Config& config) {
  auto values = defaults_for(command);
  for (const auto& [k, v] : config.section(command)) {
    if (!values.count(k)) throw ConfigError(command + ": unknown key '" + k + "'");
    values[k] = v;
  }
  return Resolved(command, std::move(values));
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string header_block(const Resolved& cfg) {
  std::string h = "# qlnls " + cfg.command() + "\n# convention_tag: " +
                  std::string(convention_tag(Convention::kPdeSign)) + "\n# [" + cfg.command() + "]\n";
  for (const auto& [k, v] : cfg.values()) h += "# " + k + " = " + v + "\n";
  return h;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---- Subcommands ---------------------------------------------------------------

namespace {

json config_json(const Resolved& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.values()) j[k] = v;
  return j;
}

json criterion(const std::string& name, const char* kind, double value, double lo, double hi) {
  const bool pass = std::isfinite(value) && value >= lo && value <= hi;
  return {{"name", name}, {kind, value}, {"window", {lo, hi}}, {"pass", pass}};
}

fs::path prepare_out_dir(const Resolved& cfg) {
  const fs::path dir = cfg.str("out_dir");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output directory not usable: " + dir.string());
  return dir;
}

int write_summary(const Resolved& cfg, const fs::path& dir, const std::string& stem, json criteria, std::ostream& out) {
  bool pass = true;
  for (const auto& c : criteria) pass = pass && c.at("pass").get<bool>();
  json j = {{"command", cfg.command()},
            {"convention_tag", std::string(convention_tag(Convention::kPdeSign))},
            {"config", config_json(cfg)},
            {"criteria", std::move(criteria)},
            {"pass", pass}};
  write_atomic(dir / (stem + "_summary.json"), j.dump(2) + "\n");
  for (const auto& c : j["criteria"]) {
    out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "\n";
  }
  return pass ? 0 : 1;
}

Scheme parse_scheme(const Resolved& cfg, const std::string& key) {
  const auto s = cfg.str(key);
  if (s == "split-step") return Scheme::kStrangSplitStep;
  if (s == "rk4") return Scheme::kRk4InteractionPicture;
  throw ConfigError(cfg.command() + "." + key + ": expected split-step or rk4");
}

Nonlinearity parse_nonlinearity(const Resolved& cfg) {
  const auto s = cfg.str("nonlinearity");
  if (s == "focusing") return Nonlinearity::kFocusing;
  if (s == "defocusing") return Nonlinearity::kDefocusing;
  if (s == "none") return Nonlinearity::kNone;
  throw ConfigError(cfg.command() + ".nonlinearity: expected focusing, defocusing or none");
}

std::vector<double> eps_list(const Resolved& cfg) {
  auto eps = cfg.list("eps");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError(cfg.command() + ".eps: values must lie in (0, 1)");
  }
  auto sorted = eps;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError(cfg.command() + ".eps: values must be distinct");
  }
  if (eps.size() < 3) throw ConfigError(cfg.command() + ": a slope fit needs at least 3 eps values");
  return eps;
}

/// Runs f(eps) for every eps on up to `threads` workers; results keep input order.
template <class F>
auto fan_out(const std::vector<double>& eps, int threads, F f) {
  using R = decltype(f(0.0));
  const std::size_t width =
      threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
  std::vector<R> results(eps.size());
  for (std::size_t start = 0; start < eps.size(); start += width) {
    std::vector<std::future<R>> jobs;
    for (std::size_t i = start; i < std::min(eps.size(), start + width); ++i) {
      jobs.push_back(std::async(std::launch::async, f, eps[i]));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) results[start + i] = jobs[i].get();
  }
  return results;
}

int cmd_simulate(const Resolved& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  const int n = cfg.integer("N");
  SchemeSpec scheme;
  scheme.scheme = parse_scheme(cfg, "scheme");
  scheme.dt = cfg.positive("dt");
  scheme.dispersion_exponent = cfg.integer("sigma");
  scheme.nonlinearity = parse_nonlinearity(cfg);
  scheme.splitting_order = cfg.integer("order");
  InitialDataSpec spec = gaussian_spec(cfg.positive("epsilon"), cfg.num("amplitude"));
  const double T = cfg.positive("T");
  const int every = cfg.integer("snapshot_every");
  if (every < 1) throw ConfigError("simulate.snapshot_every must be >= 1");

  const auto u0 = make_initial_data(spec, n);
  const double P = power(u0);
  const auto traj = evolve(u0, T, scheme, every);
  const auto rep = deviation_curve(traj, P, {NormSpec{2.0, 0.0}, NormSpec{kInf, 0.0}, NormSpec{1.0, 0.0}});

  std::string csv = header_block(cfg) + "t,dev_l2,dev_linf,dev_l1,l2_power,energy\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    csv += format_double(traj.times[k]) + "," + format_double(rep.values[0][k]) + "," +
           format_double(rep.values[1][k]) + "," + format_double(rep.values[2][k]) + "," +
           format_double(traj.conserved[k].power) + "," + format_double(traj.conserved[k].energy) + "\n";
  }
  write_atomic(dir / "deviation.csv", csv);
  out << "wrote " << (dir / "deviation.csv").string() << " (" << traj.times.size() << " snapshots)\n";
  return 0;
}

int cmd_oracle(const Resolved& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  json crit = json::array();

  const Complex a = cfg.num("amplitude");
  const int n0 = cfg.integer("mode");
  const int n = cfg.integer("N");
  const double T = cfg.positive("T");
  SchemeSpec scheme;
  scheme.dt = cfg.positive("dt");
  const auto u0 = FourierState::single_mode(n, n0, a);
  for (auto s : {Scheme::kStrangSplitStep, Scheme::kRk4InteractionPicture}) {
    scheme.scheme = s;
    const auto traj = evolve(u0, T, scheme, std::max(1, static_cast<int>(std::lround(T / scheme.dt))));
    const auto exact = plane_wave_oracle(a, n0, traj.times.back(), std::norm(a), n);
    const double err = l2_distance(traj.states.back(), exact.state);
    crit.push_back(criterion(std::string("plane wave vs closed form (") +
                                 (s == Scheme::kStrangSplitStep ? "split-step" : "rk4") + ")",
                             "residual", err, 0.0, cfg.positive("plane_tol")));
  }

  std::mt19937 rng(static_cast<unsigned>(cfg.integer("random_seed")));
  std::normal_distribution<double> g(0.0, cfg.positive("random_scale"));
  const int rn = cfg.integer("random_N");
  std::vector<Complex> c(static_cast<std::size_t>(2 * rn + 1));
  for (auto& x : c) x = {g(rng), g(rng)};
  const FourierState r0(rn, c);
  const double rT = cfg.positive("random_T");
  scheme.scheme = parse_scheme(cfg, "random_scheme");
  const auto traj = evolve(r0, rT, scheme, std::max(1, static_cast<int>(std::lround(rT / scheme.dt))));
  const auto ref = ode_oracle(r0, rT, 1e-12);
  crit.push_back(criterion("random small data vs adaptive reference", "residual",
                           l2_distance(traj.states.back(), ref), 0.0, cfg.positive("random_tol")));
  return write_summary(cfg, dir, "oracle", std::move(crit), out);
}

int cmd_nf_check(const Resolved& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  const int nsym = cfg.integer("nsym");
  if (nsym < 0) throw ConfigError("nf-check.nsym must be >= 0");
  const auto rep = identity_report(nsym);
  const std::string name = "identity_N" + std::to_string(nsym);
  write_atomic(dir / (name + ".txt"), header_block(cfg) + rep.to_text());
  out << rep.to_text();
  json crit = json::array();
  for (const auto& l : rep.lines) {
    crit.push_back(criterion(l.name, "residual", l.max_residual_value, 0.0, 0.0));
  }
  crit.push_back(criterion("F1 closed form mismatches", "residual",
                           static_cast<double>(rep.f1_closed_form_mismatches), 0.0, 0.0));
  return write_summary(cfg, dir, "nf_check", std::move(crit), out);
}

int cmd_nf_deviation(const Resolved& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  const auto eps = eps_list(cfg);
  const int n = cfg.integer("N");
  const std::string measure = cfg.str("measure");
  if (measure != "both" && measure != "nearness" && measure != "error") {
    throw ConfigError("nf-deviation.measure: expected both, nearness or error");
  }
  NormalFormOptions nf;
  nf.f1_substeps = cfg.integer("f1_substeps");
  nf.f2_substeps = cfg.integer("f2_substeps");
  nf.include_f2 = cfg.flag("include_f2");
  nf.allow_large = cfg.flag("allow_large");
  const double h = cfg.positive("h");
  const int threads = cfg.integer("threads");
  const std::vector<NormSpec> norms{{kInf, 0.0}, {2.0, 0.0}, {1.0, 0.0}};

  json crit = json::array();
  std::string csv = header_block(cfg) + "quantity,eps,N,linf,l2,l1\n";
  auto emit = [&](const std::string& what, const std::vector<SweepRow>& rows) {
    for (const auto& r : rows) {
      csv += what + "," + format_double(r.epsilon) + "," + std::to_string(n) + "," + format_double(r.values[0]) +
             "," + format_double(r.values[1]) + "," + format_double(r.values[2]) + "\n";
    }
  };
  if (measure != "error") {
    const auto cells = fan_out(eps, threads, [&](double e) { return nearness_report({e}, n, norms, nf); });
    std::vector<SweepRow> rows;
    double mismatch = 0.0;
    for (const auto& c : cells) {
      rows.push_back(c.rows.front());
      mismatch = std::max(mismatch, c.max_l2_mismatch);
    }
    emit("u_minus_v", rows);
    auto fit = [&](std::size_t j) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : rows) pts.emplace_back(r.epsilon, r.values[j]);
      return scaling_fit(pts);
    };
    crit.push_back(criterion("||u-v||_inf slope", "slope", fit(0).slope, 1.2, 1.8));
    crit.push_back(criterion("||u-v||_1 slope", "slope", fit(2).slope, 0.2, 0.8));
    crit.push_back(criterion("| ||u||_2 - ||v||_2 | / ||u||_2", "residual", mismatch, 0.0, 1e-8));
  }
  if (measure != "nearness") {
    const auto cells = fan_out(eps, threads, [&](double e) { return error_term_report({e}, n, h, norms, nf); });
    std::vector<SweepRow> rows;
    for (const auto& c : cells) rows.push_back(c.rows.front());
    emit("E", rows);
    auto fit = [&](std::size_t j) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : rows) pts.emplace_back(r.epsilon, r.values[j]);
      return scaling_fit(pts);
    };
    crit.push_back(criterion("||E(v)||_inf slope", "slope", fit(0).slope, 1.2, 1.8));
    crit.push_back(criterion("||E(v)||_2 slope", "slope", fit(1).slope, 0.7, 1.3));
  }
  write_atomic(dir / "nf_deviation.csv", csv);
  return write_summary(cfg, dir, "nf_deviation", std::move(crit), out);
}

int cmd_scaling(const Resolved& cfg, std::ostream& out) {
  const auto eps = eps_list(cfg);
  const auto dir = prepare_out_dir(cfg);
  const int n = cfg.integer("N");
  const double T = cfg.positive("T");
  SchemeSpec scheme;
  scheme.scheme = parse_scheme(cfg, "scheme");
  scheme.dt = cfg.positive("dt");
  scheme.splitting_order = cfg.integer("order");
  scheme.dispersion_exponent = cfg.integer("sigma");
  const NormSpec norm{cfg.num("p"), cfg.num("delta")};
  try {
    norm.validate();
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scaling: ") + e.what());
  }

  const auto values = fan_out(eps, cfg.integer("threads"), [&](double e) {
    const auto u = make_initial_data(gaussian_spec(e), n);
    const auto traj = evolve(u, T, scheme, std::max(1, static_cast<int>(std::lround(T / scheme.dt))));
    return deviation_curve(traj, power(u), norm).values[0].back();
  });
  std::vector<std::pair<double, double>> pts;
  std::string csv = header_block(cfg) + "eps,N,T,dt,dev_value,norm_p,norm_delta\n";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    pts.emplace_back(eps[i], values[i]);
    csv += format_double(eps[i]) + "," + std::to_string(n) + "," + format_double(T) + "," + format_double(scheme.dt) +
           "," + format_double(values[i]) + "," + format_double(norm.p) + "," + format_double(norm.delta) + "\n";
  }
  write_atomic(dir / "scaling.csv", csv);
  const auto fit = scaling_fit(pts);
  json crit = json::array();
  crit.push_back(criterion("deviation slope", "slope", fit.slope, cfg.num("slope_lo"), cfg.num("slope_hi")));
  crit.push_back(criterion("fit r2", "residual", fit.r2, cfg.num("r2_min"), 1.0));
  return write_summary(cfg, dir, "scaling", std::move(crit), out);
}

int cmd_report(const Resolved& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 13 && name.ends_with("_summary.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("report: no *_summary.json files in " + dir.string());
  json bundle = {{"convention_tag", std::string(convention_tag(Convention::kPdeSign))},
                 {"config", config_json(cfg)},
                 {"summaries", json::object()}};
  bool pass = true;
  for (const auto& f : files) {
    std::ifstream in(f);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw std::runtime_error("report: cannot parse " + f.string() + ": " + e.what());
    }
    const bool p = j.value("pass", false);
    pass = pass && p;
    out << (p ? "PASS " : "FAIL ") << f.filename().string() << "\n";
    bundle["summaries"][f.filename().string()] = std::move(j);
  }
  bundle["pass"] = pass;
  write_atomic(dir / "report.json", bundle.dump(2) + "\n");
  return pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normal-form verification harness for the cubic lattice NLS"};
  app.require_subcommand(1);
  struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out_dir;
  };
  std::map<std::string, Common> common;
  int nsym = -1;
  std::string eps_flag;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "One trajectory and its deviation CSV"},
      {"oracle", "Plane-wave and small-N reference checks"},
      {"nf-check", "Exact identity suite of the normal form"},
      {"nf-deviation", "Nearness and error-term eps sweeps"},
      {"scaling", "Deviation eps sweep with slope fit"},
      {"report", "Bundle *_summary.json files"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto& c = common[name];
    sub->add_option("--config", c.config, "Config file (flat [section] key = value)");
    sub->add_option("--set", c.sets, "Override, key=value or section.key=value")->take_all();
    sub->add_option("--out", c.out_dir, "Output directory");
    if (name == "nf-check") sub->add_option("--nsym", nsym, "Symbolic truncation");
    if (name == "scaling" || name == "nf-deviation") sub->add_option("--eps", eps_flag, "Comma-separated eps list");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto& c = common[command];
  try {
    Config config = c.config.empty() ? Config{} : Config::load(c.config);
    for (const auto& s : c.sets) config.apply_override(s, command);
    if (!c.out_dir.empty()) config.set(command, "out_dir", c.out_dir);
    if (nsym >= 0) config.set(command, "nsym", std::to_string(nsym));
    if (!eps_flag.empty()) config.set(command, "eps", eps_flag);
    const auto cfg = resolve(command, config);
    if (command == "simulate") return cmd_simulate(cfg, out);
    if (command == "oracle") return cmd_oracle(cfg, out);
    if (command == "nf-check") return cmd_nf_check(cfg, out);
    if (command == "nf-deviation") return cmd_nf_deviation(cfg, out);
    if (command == "scaling") return cmd_scaling(cfg, out);
    return cmd_report(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qlnls::cli
