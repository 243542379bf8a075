#include "nodalcert/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nodalcert/errors.hpp"
#include "nodalcert/grid.hpp"
#include "nodalcert/solver.hpp"
#include "nodalcert/verifier.hpp"

namespace nodalcert::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

bool parse_double(const std::string& text, double& out) {
  const char* b = text.data();
  const char* e = b + text.size();
  const auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e;
}

bool is_known(const std::string& key) {
  const auto& k = Config::known_keys();
  return std::find(k.begin(), k.end(), key) != k.end();
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "command",
      "paths.coefficients_in", "paths.coefficients_out", "paths.report", "paths.image",
      "problem.f", "problem.epsilon", "problem.lambda", "problem.p", "problem.poly",
      "problem.theorem", "problem.bound_lambda", "problem.bound_terms", "problem.bound_range",
      "problem.domain",
      "problem.boundary.bottom", "problem.boundary.right", "problem.boundary.top",
      "problem.boundary.left",
      "certificates.rho", "certificates.sigma", "certificates.source",
      "grid.m", "grid.refine",
      "constants.policy", "constants.user_c", "constants.user_c_provenance", "constants.tau",
      "constants.lambda1", "constants.K", "constants.C_M",
      "heuristic.tau", "heuristic.c4", "heuristic.c_embed", "heuristic.tau_check_level",
      "solve.mu", "solve.initial_guess", "solve.guess_path", "solve.tol", "solve.max_iters",
      "solve.quadrature_order",
      "render.format", "render.resolution", "render.shade",
  };
  return keys;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    const auto eq = s.find('=');
    const std::string at = source + ":" + std::to_string(line) + ": ";
    if (eq == std::string::npos) throw ParseError(at + "expected 'section.key = value'");
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
    if (key.empty()) throw ParseError(at + "missing key");
    if (!is_known(key)) throw ParseError(at + "unknown key '" + key + "'");
    if (c.entries_.count(key)) {
      throw ParseError(at + "duplicate key '" + key + "' (first set on line " +
                       std::to_string(c.entries_.at(key).line) + ")");
    }
    c.entries_[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!is_known(key)) throw ParseError("command line: unknown key '" + key + "'");
  entries_[key] = {trim(value), 0};
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::where(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return source_ + ": " + key;
  if (it->second.line == 0) return "command line: " + key;
  return source_ + ":" + std::to_string(it->second.line) + ": " + key;
}

std::string Config::str(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_ + ": missing required field " + key);
  return it->second.value;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::number(const std::string& key) const {
  const std::string v = str(key);
  double x = 0.0;
  if (!parse_double(v, x)) throw ConfigError(where(key) + ": expected a number, got '" + v + "'");
  return x;
}

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> Config::maybe_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

int Config::integer(const std::string& key) const {
  const std::string v = str(key);
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw ConfigError(where(key) + ": expected an integer, got '" + v + "'");
  }
  return x;
}

int Config::integer(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where(key) + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(str(key));
  std::string tok;
  while (in >> tok) {
    double x = 0.0;
    if (!parse_double(tok, x)) throw ConfigError(where(key) + ": expected numbers, got '" + tok + "'");
    out.push_back(x);
  }
  return out;
}

std::map<double, double> Config::pairs(const std::string& key) const {
  std::map<double, double> out;
  for (const auto& item : split(str(key), ',')) {
    const auto colon = item.find(':');
    double k = 0.0, v = 0.0;
    if (colon == std::string::npos || !parse_double(trim(item.substr(0, colon)), k) ||
        !parse_double(trim(item.substr(colon + 1)), v)) {
      throw ConfigError(where(key) + ": expected 'key:value' pairs, got '" + item + "'");
    }
    out[k] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

const char* to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Classify: return "classify";
    case Command::Verify: return "verify";
    case Command::Render: return "render";
    case Command::Pipeline: return "pipeline";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Solve, Command::Classify, Command::Verify, Command::Render,
                    Command::Pipeline}) {
    if (name == to_string(c)) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

namespace {

Rectangle domain_of(const Config& c) {
  if (!c.has("problem.domain")) return Rectangle::unit();
  const auto v = c.numbers("problem.domain");
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
    throw ConfigError(c.where("problem.domain") + ": expected 'ax bx ay by' with ax < bx, ay < by");
  }
  return {v[0], v[1], v[2], v[3]};
}

Nonlinearity solver_f(const Config& c) {
  const std::string kind = c.str("problem.f");
  if (kind == "allen_cahn") return Nonlinearity::allen_cahn(c.number("problem.epsilon"));
  if (kind == "emden") return Nonlinearity::emden(c.number("problem.lambda"), c.number("problem.p"));
  if (kind == "polynomial") return Nonlinearity::polynomial(c.numbers("problem.poly"));
  throw ConfigError(c.where("problem.f") + ": expected allen_cahn, emden or polynomial");
}

bool has_custom_bound(const Config& c) {
  return c.has("problem.bound_lambda") || c.has("problem.bound_terms") || c.has("problem.bound_range");
}

NonlinearityBound bound_of(const Config& c) {
  NonlinearityBound nl;
  if (has_custom_bound(c)) {
    nl.lambda = c.number("problem.bound_lambda", 0.0);
    if (c.has("problem.bound_terms")) {
      for (const auto& [a, p] : c.pairs("problem.bound_terms")) nl.terms.push_back({a, p});
    }
    if (c.has("problem.bound_range")) {
      const auto r = c.numbers("problem.bound_range");
      if (r.size() != 2) throw ConfigError(c.where("problem.bound_range") + ": expected 'lo hi'");
      nl.range = std::make_pair(r[0], r[1]);
    }
    nl.validate();
    return nl;
  }
  const std::string kind = c.str("problem.f");
  if (kind == "allen_cahn") return NonlinearityBound::allen_cahn(c.number("problem.epsilon"));
  if (kind == "emden") return NonlinearityBound::emden(c.number("problem.lambda"), c.number("problem.p"));
  throw ConfigError(c.where("problem.f") + ": problem.f = " + kind +
                    " needs problem.bound_lambda / problem.bound_terms");
}

BoundarySpec boundary_of(const Config& c) {
  BoundarySpec bc = BoundarySpec::all_dirichlet();
  const char* names[4] = {"problem.boundary.bottom", "problem.boundary.right", "problem.boundary.top",
                          "problem.boundary.left"};
  for (int s = 0; s < 4; ++s) {
    if (!c.has(names[s])) continue;
    try {
      bc.sides[s] = BoundarySpec::parse_side(c.str(names[s]));
    } catch (const Error& e) {
      throw ConfigError(c.where(names[s]) + ": " + e.what());
    }
  }
  bc.validate();
  return bc;
}

ConstantsPolicy policy_of(const Config& c) {
  ConstantsPolicy p;
  const std::string g = c.str("constants.policy", "auto");
  if (g == "auto") p.global = GlobalEmbedding::Auto;
  else if (g == "talenti") p.global = GlobalEmbedding::Talenti;
  else if (g == "plum") p.global = GlobalEmbedding::Plum;
  else if (g == "mizuguchi") p.global = GlobalEmbedding::Mizuguchi;
  else if (g == "user") p.global = GlobalEmbedding::User;
  else throw ConfigError(c.where("constants.policy") + ": expected auto, talenti, plum, mizuguchi or user");
  if (c.has("constants.user_c")) p.user_c = c.pairs("constants.user_c");
  p.user_c_provenance = c.str("constants.user_c_provenance", "config");
  p.tau = c.number("constants.tau", 0.0);
  if (p.global == GlobalEmbedding::User && p.user_c.empty()) {
    throw ConfigError(c.where("constants.policy") + ": policy user needs constants.user_c");
  }
  return p;
}

std::map<int, double> user_lambda1_of(const Config& c) {
  std::map<int, double> out;
  if (!c.has("constants.lambda1")) return out;
  for (const auto& [k, v] : c.pairs("constants.lambda1")) out[static_cast<int>(k)] = v;
  return out;
}

std::string source_of(const Config& c) {
  const std::string s = c.str("certificates.source", "certified-external");
  if (s != "certified-external" && s != "heuristic") {
    throw ConfigError(c.where("certificates.source") + ": expected certified-external or heuristic");
  }
  return s;
}

Theorem theorem_of(const Config& c, bool rho_known) {
  const std::string t = c.str("problem.theorem", "auto");
  if (t == "dirichlet") return Theorem::Dirichlet;
  if (t == "linf_only") return Theorem::LinfOnly;
  if (t == "emden") return Theorem::Emden;
  if (t == "allen_cahn") return Theorem::AllenCahn;
  if (t == "mixed") return Theorem::Mixed;
  if (t != "auto") {
    throw ConfigError(c.where("problem.theorem") +
                      ": expected auto, dirichlet, linf_only, emden, allen_cahn or mixed");
  }
  if (!boundary_of(c).is_all_dirichlet()) return Theorem::Mixed;
  const std::string f = c.str("problem.f", "");
  if (f == "allen_cahn" && !has_custom_bound(c)) return Theorem::AllenCahn;
  if (!rho_known) return Theorem::LinfOnly;
  if (f == "emden" && !has_custom_bound(c)) return Theorem::Emden;
  return Theorem::Dirichlet;
}

ClassifyOptions classify_options(const Config& c) {
  ClassifyOptions o;
  o.refine = c.integer("grid.refine", 1);
  if (o.refine < 0) throw ConfigError(c.where("grid.refine") + ": must be >= 0");
  return o;
}

int grid_m(const Config& c) { return c.integer("grid.m", 12); }

double require_sigma(const Config& c) {
  const double s = c.number("certificates.sigma");
  if (!(s >= 0.0)) throw ConfigError(c.where("certificates.sigma") + ": must be >= 0");
  return s;
}

SolveConfig solve_config(const Config& c) {
  SolveConfig s;
  s.mu = c.integer("solve.mu", s.mu);
  s.f = solver_f(c);
  const std::string g = c.str("solve.initial_guess", "C");
  if (g == "A") s.initial_guess = InitialGuess::PatternA;
  else if (g == "B") s.initial_guess = InitialGuess::PatternB;
  else if (g == "C") s.initial_guess = InitialGuess::PatternC;
  else if (g == "file") s.initial_guess = InitialGuess::FromFile;
  else throw ConfigError(c.where("solve.initial_guess") + ": expected A, B, C or file");
  s.guess_path = c.str("solve.guess_path", "");
  s.newton_tol = c.number("solve.tol", s.newton_tol);
  s.max_iters = c.integer("solve.max_iters", s.max_iters);
  s.quadrature_order = c.integer("solve.quadrature_order", 0);
  s.domain = domain_of(c);
  s.validate();
  return s;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << data;
}

void write_report(const Config& c, const json& j) {
  if (c.has("paths.report")) write_file(c.str("paths.report"), j.dump(2) + "\n");
}

std::string count_text(const CountBound& b) {
  return "[" + std::to_string(b.lower) + ", " + (b.upper ? std::to_string(*b.upper) : "unbounded") + "]";
}

void render_image(const Config& c, const CellClassification& cls) {
  const std::string path = c.str("paths.image");
  std::string format = c.str("render.format", "");
  if (format.empty()) format = path.size() >= 4 && path.substr(path.size() - 4) == ".svg" ? "svg" : "pgm";
  if (format == "pgm") {
    write_file(path, render_pgm(cls, c.integer("render.resolution", 1)));
  } else if (format == "svg") {
    write_file(path, render_svg(cls, c.integer("render.resolution", 512), c.flag("render.shade", false)));
  } else {
    throw ConfigError(c.where("render.format") + ": expected pgm or svg");
  }
}

struct Verified {
  NodalReport report;
  CellClassification cls;
};

Verified verify_field(const Config& c, const CoefficientField& field, std::optional<double> rho,
                      double sigma, const std::string& source) {
  const Theorem theorem = theorem_of(c, rho.has_value());
  const bool needs_rho =
      theorem == Theorem::Dirichlet || theorem == Theorem::Emden || theorem == Theorem::Mixed;
  if (needs_rho && !rho) {
    throw ConfigError(c.where("certificates.rho") + ": missing required field certificates.rho for theorem " +
                      to_string(theorem));
  }
  Verified v{NodalReport{}, classify(field, sigma, grid_m(c), classify_options(c))};
  const auto& cls = v.cls;
  switch (theorem) {
    case Theorem::Dirichlet: v.report = verify_dirichlet(cls, *rho, bound_of(c), policy_of(c)); break;
    case Theorem::LinfOnly: v.report = verify_linf_only(cls, bound_of(c)); break;
    case Theorem::Emden:
      v.report = verify_emden(cls, *rho, c.number("problem.lambda"), c.number("problem.p"), policy_of(c));
      break;
    case Theorem::AllenCahn:
      v.report = verify_allen_cahn(cls, rho.value_or(0.0), c.number("problem.epsilon"));
      if (!rho) v.report.rho.reset();
      break;
    case Theorem::Mixed:
      v.report = verify_mixed(cls, *rho, bound_of(c), boundary_of(c), user_lambda1_of(c), policy_of(c));
      break;
  }
  v.report.certificate_source = source;
  if (c.has("constants.C_M")) {
    v.report.constants.push_back({"C(M)", Bound::upper(c.number("constants.C_M")), "user"});
  }
  return v;
}

json report_json(const NodalReport& r, Command cmd) {
  json j = json::parse(to_json(r));
  j["command"] = to_string(cmd);
  // The verdict holds only as far as the error bounds do; heuristic bounds
  // never make a report certified.
  if (r.certificate_source == "heuristic") {
    j["certified"] = false;
    j["conditional_on_heuristic_errors"] = true;
  }
  return j;
}

// One line stating the outcome. Heuristic runs never claim a proof.
std::string verdict_line(const NodalReport& r) {
  const std::string counts = "nd in " + count_text(r.counts.nd) + " (positive " +
                             count_text(r.counts.pnd) + ", negative " + count_text(r.counts.nnd) + ")";
  const bool heuristic = r.certificate_source == "heuristic";
  switch (r.verdict) {
    case Verdict::Certified:
      return heuristic ? "conditional: " + counts + " if the heuristic error bounds hold; not a proof"
                       : "certified: " + counts + "; proved given the supplied error bounds";
    case Verdict::NotCertified:
      return "not certified: " + counts + (r.failing_component
                                               ? "; component " + std::to_string(*r.failing_component) +
                                                     " fails the smallness condition"
                                               : std::string());
    case Verdict::AssumptionViolation:
      return "not certified: assumption violated (" + (r.notes.empty() ? std::string("see report") : r.notes.back()) +
             ")";
  }
  return "";
}

int run_solve(const Config& c, std::ostream& out) {
  const SolveConfig s = solve_config(c);
  const auto r = newton_galerkin_run(s);
  const std::string path = c.str("paths.coefficients_out");
  {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << "# approximate solution of " << s.f.describe() << ", mu " << s.mu
      << "; heuristic, certified: false\n";
    write_coefficients(f, r.field);
  }
  const double delta = defect_estimate(r.field, s.f, c.number("heuristic.tau", 0.0));
  out << "solve: Newton converged in " << r.iterations << " iterations, residual " << r.residual
      << "; heuristic defect " << delta << "; wrote " << path << "\n";
  json j;
  j["command"] = "solve";
  j["certified"] = false;
  j["solver"] = {{"mu", s.mu}, {"f", s.f.describe()}, {"initial_guess", to_string(s.initial_guess)},
                 {"iterations", r.iterations}, {"residual", r.residual}, {"history", r.history},
                 {"defect", {{"value", delta}, {"certified", false}}}};
  write_report(c, j);
  return kExitCertified;
}

int run_classify(const Config& c, std::ostream& out) {
  const auto field = load_coefficients(c.str("paths.coefficients_in"));
  const double sigma = require_sigma(c);
  const auto cls = classify(field, sigma, grid_m(c), classify_options(c));
  const auto counts = nd_bounds(cls, false);
  const auto zero = components(cls, Region::ZeroRegion);
  std::vector<int> und;
  for (int i = 0; i < cls.size(); ++i) {
    if (cls.labels[i] == Label::Undetermined) und.push_back(i);
  }
  const double vol = und.empty() ? 0.0 : region_volume_upper(cls, und);
  auto count_json = [](const CountBound& b) {
    json x;
    x["lower"] = b.lower;
    x["upper"] = b.upper ? json(*b.upper) : json("unbounded");
    return x;
  };
  json j;
  j["command"] = "classify";
  j["certified"] = false;
  j["pnd"] = count_json(counts.pnd);
  j["nnd"] = count_json(counts.nnd);
  j["nd"] = count_json(counts.nd);
  j["inputs"] = {{"sigma", sigma}, {"m", cls.m}, {"certificate_source", source_of(c)}};
  j["classification"] = {{"plus", cls.count(Label::Plus)},
                         {"minus", cls.count(Label::Minus)},
                         {"undetermined", cls.count(Label::Undetermined)},
                         {"omega0_components", zero.count()},
                         {"omega0_volume", {{"value", vol}, {"rounding", "up"}}}};
  write_report(c, j);
  out << "classify: " << cls.nx << " x " << cls.ny << " cells, " << cls.count(Label::Undetermined)
      << " undetermined in " << zero.count() << " component(s), |Omega_0| <= " << vol
      << "; nd lower bound " << counts.nd.lower << "\n";
  return kExitCertified;
}

int run_verify(const Config& c, std::ostream& out) {
  const auto field = load_coefficients(c.str("paths.coefficients_in"));
  const auto v = verify_field(c, field, c.maybe_number("certificates.rho"), require_sigma(c), source_of(c));
  write_report(c, report_json(v.report, Command::Verify));
  if (c.has("paths.image")) render_image(c, v.cls);
  out << "verify (" << to_string(v.report.theorem_used) << "): " << verdict_line(v.report) << "\n";
  return v.report.certified() ? kExitCertified : kExitNotCertified;
}

int run_render(const Config& c, std::ostream& out) {
  const auto field = load_coefficients(c.str("paths.coefficients_in"));
  const auto cls = classify(field, require_sigma(c), grid_m(c), classify_options(c));
  render_image(c, cls);
  out << "render: wrote " << c.str("paths.image") << "\n";
  return kExitCertified;
}

int run_pipeline(const Config& c, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveConfig s = solve_config(c);
  const auto sol = newton_galerkin_run(s);
  if (c.has("paths.coefficients_out")) {
    std::ofstream f(c.str("paths.coefficients_out"));
    if (!f) throw ConfigError("cannot write " + c.str("paths.coefficients_out"));
    f << "# heuristic, certified: false\n";
    write_coefficients(f, sol.field);
  }
  out << "solve: Newton converged in " << sol.iterations << " iterations, residual " << sol.residual << "\n";

  const std::string source = source_of(c);
  std::optional<double> rho = c.maybe_number("certificates.rho");
  double sigma = 0.0;
  json heuristic;
  if (source == "heuristic") {
    HeuristicErrorInput in;
    in.tau = c.number("heuristic.tau", 0.0);
    in.delta = defect_estimate(sol.field, s.f, in.tau);
    in.k_bound = c.number("constants.K");
    in.c4 = c.number("heuristic.c4", 0.0);
    in.c_embed = c.number("heuristic.c_embed", 0.0);
    in.tau_check_level = c.integer("heuristic.tau_check_level", in.tau_check_level);
    const auto e = heuristic_error(in, s.f, sol.field);
    rho = e.rho;
    sigma = in.c_embed > 0.0 ? e.sigma : require_sigma(c);
    heuristic = {{"certified", false}, {"delta", in.delta}, {"K", in.k_bound}, {"tau", in.tau},
                 {"c4", e.c4}, {"uhat_l4", e.uhat_l4}, {"rho", e.rho}, {"sigma", sigma},
                 {"sigma_from", in.c_embed > 0.0 ? "c_embed * rho" : "certificates.sigma"}};
    out << "errors (heuristic, not certified): delta " << in.delta << ", rho " << e.rho << ", sigma "
        << sigma << "\n";
  } else {
    sigma = require_sigma(c);
  }

  const auto v = verify_field(c, sol.field, rho, sigma, source);
  if (c.has("paths.image")) render_image(c, v.cls);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json j = report_json(v.report, Command::Pipeline);
  j["solver"] = {{"mu", s.mu}, {"f", s.f.describe()}, {"initial_guess", to_string(s.initial_guess)},
                 {"iterations", sol.iterations}, {"residual", sol.residual}, {"certified", false}};
  if (!heuristic.is_null()) j["heuristic"] = heuristic;
  j["elapsed_seconds"] = seconds;
  write_report(c, j);
  out << "verify (" << to_string(v.report.theorem_used) << "): " << verdict_line(v.report) << "\n";
  return v.report.certified() ? kExitCertified : kExitNotCertified;
}

}  // namespace

int run(Command command, const Config& config, std::ostream& out, std::ostream& err) {
  try {
    switch (command) {
      case Command::Solve: return run_solve(config, out);
      case Command::Classify: return run_classify(config, out);
      case Command::Verify: return run_verify(config, out);
      case Command::Render: return run_render(config, out);
      case Command::Pipeline: return run_pipeline(config, out);
    }
  } catch (const std::exception& e) {
    err << "nodalcert " << to_string(command) << ": error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace nodalcert::cli
