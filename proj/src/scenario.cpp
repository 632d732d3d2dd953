#include "sticky1d/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sticky1d/oracles.hpp"

namespace sticky {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool times_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)));
}

struct RawValue {
  std::string text;
  int line = 0;
  bool used = false;
};

// Parsed key/value store with per-entry line numbers so every diagnostic can
// point at the offending line, including "unknown key" after interpretation.
class Config {
 public:
  Config(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::string line;
    std::string section;  // "" until the first [section] header
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string s = trim(line);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        if (s.back() != ']')
          fail(line_no, "malformed section header '" + s + "'");
        section = trim(s.substr(1, s.size() - 2));
        if (section != "force" && section != "initial" && section != "run" &&
            section != "output")
          fail(line_no, "unknown section [" + section + "]");
        continue;
      }
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        fail(line_no, "expected 'key = value', got '" + s + "'");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key.empty()) fail(line_no, "empty key");
      auto& sec = sections_[section];
      if (sec.count(key))
        fail(line_no, "duplicate key '" + key + "' (first at line " +
                          std::to_string(sec[key].line) + ")");
      sec[key] = RawValue{value, line_no, false};
    }
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw std::runtime_error(path_ + ":" + std::to_string(line) + ": " + msg);
  }
  [[noreturn]] void fail_key(const std::string& sec, const std::string& key,
                             const std::string& msg) {
    fail(sections_[sec][key].line, "key '" + key + "': " + msg);
  }

  bool has(const std::string& sec, const std::string& key) const {
    auto it = sections_.find(sec);
    return it != sections_.end() && it->second.count(key) > 0;
  }

  std::string get_string(const std::string& sec, const std::string& key) {
    if (!has(sec, key))
      throw std::runtime_error(path_ + ": missing required key '" + key +
                               "' in section [" + sec + "]");
    RawValue& rv = sections_[sec][key];
    rv.used = true;
    return rv.text;
  }
  std::string get_string_or(const std::string& sec, const std::string& key,
                            const std::string& def) {
    return has(sec, key) ? get_string(sec, key) : def;
  }

  double get_double(const std::string& sec, const std::string& key) {
    std::string text = get_string(sec, key);
    return parse_double(sec, key, text);
  }
  double get_double_or(const std::string& sec, const std::string& key,
                       double def) {
    return has(sec, key) ? get_double(sec, key) : def;
  }

  long get_int(const std::string& sec, const std::string& key) {
    std::string text = get_string(sec, key);
    try {
      size_t pos = 0;
      long v = std::stol(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail_key(sec, key, "expected an integer, got '" + text + "'");
    }
  }

  std::vector<double> get_list(const std::string& sec,
                               const std::string& key) {
    std::string text = get_string(sec, key);
    std::istringstream iss(text);
    std::vector<double> out;
    std::string tok;
    while (iss >> tok) out.push_back(parse_double(sec, key, tok));
    if (out.empty()) fail_key(sec, key, "expected a list of numbers");
    return out;
  }

  // After interpretation: every key must have been consumed.
  void check_all_used() const {
    int line = 0;
    std::string what;
    for (const auto& [sec, kv] : sections_)
      for (const auto& [key, rv] : kv)
        if (!rv.used && (line == 0 || rv.line < line)) {
          line = rv.line;
          what = "'" + key + "'" +
                 (sec.empty() ? "" : " in section [" + sec + "]");
        }
    if (line != 0) fail(line, "unknown key " + what);
  }

 private:
  double parse_double(const std::string& sec, const std::string& key,
                      const std::string& text) {
    try {
      size_t pos = 0;
      double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail_key(sec, key, "expected a number, got '" + text + "'");
    }
  }

  std::string path_;
  std::map<std::string, std::map<std::string, RawValue>> sections_;
};

ForceModel build_model(Config& cfg) {
  std::string variant = cfg.get_string("force", "variant");
  double beta = cfg.get_double_or("force", "beta", 0.0);
  if (variant == "euler_poisson") {
    return ForceModel::euler_poisson(cfg.get_double_or("force", "alpha", 0.0),
                                     beta);
  }
  if (variant == "damped") {
    return ForceModel::damped(cfg.get_double_or("force", "alpha", 0.0), beta,
                              cfg.get_double("force", "gamma"));
  }
  if (variant == "confined") {
    if (cfg.has("force", "alpha"))
      cfg.fail_key("force", "alpha",
                   "the confined model derives its pairwise coupling from "
                   "lambda; remove this key");
    return ForceModel::confined(cfg.get_double("force", "lambda"),
                                cfg.get_double_or("force", "gamma", 0.0),
                                beta);
  }
  cfg.fail_key("force", "variant",
               "expected euler_poisson, damped, or confined; got '" + variant +
                   "'");
}

double sgn(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0); }

void build_initial(Config& cfg, Scenario& sc) {
  std::string profile = cfg.get_string("initial", "profile");
  if (profile == "explicit") {
    sc.seed.masses = cfg.get_list("initial", "masses");
    sc.seed.positions = cfg.get_list("initial", "positions");
    sc.seed.velocities = cfg.get_list("initial", "velocities");
    if (sc.seed.positions.size() != sc.seed.masses.size() ||
        sc.seed.velocities.size() != sc.seed.masses.size())
      cfg.fail_key("initial", "masses",
                   "masses, positions, and velocities must have equal length");
    return;
  }
  long n = cfg.get_int("initial", "n");
  if (n < 1) cfg.fail_key("initial", "n", "need at least one particle");
  if (profile == "uniform_sym") {
    sc.seed = quantile_discretize([](double m) { return m - 0.5; },
                                  [](double) { return 0.0; }, (int)n);
  } else if (profile == "bgsw") {
    sc.seed = quantile_discretize([](double m) { return m - 0.5; },
                                  [](double m) { return -sgn(m - 0.5); },
                                  (int)n);
  } else if (profile == "linear_v") {
    sc.seed = quantile_discretize([](double m) { return m - 0.5; },
                                  [](double m) { return -(m - 0.5); }, (int)n);
  } else if (profile == "dirac") {
    sc.dirac_x0 = cfg.get_double_or("initial", "x0", 0.0);
    sc.dirac_v0 = cfg.get_double_or("initial", "v0", 0.0);
    sc.seed.masses.assign(n, 1.0 / (double)n);
    sc.seed.positions.assign(n, sc.dirac_x0);
    sc.seed.velocities.assign(n, sc.dirac_v0);
  } else {
    cfg.fail_key("initial", "profile",
                 "expected uniform_sym, bgsw, linear_v, dirac, or explicit; "
                 "got '" +
                     profile + "'");
  }
}

void build_run(Config& cfg, Scenario& sc) {
  sc.t_end = cfg.get_double("run", "t_end");
  if (!(sc.t_end > 0.0)) cfg.fail_key("run", "t_end", "must be positive");

  if (cfg.has("run", "samples") && cfg.has("run", "sample_count"))
    cfg.fail_key("run", "sample_count",
                 "give either samples or sample_count, not both");
  if (cfg.has("run", "samples")) {
    sc.sample_times = cfg.get_list("run", "samples");
    for (double& t : sc.sample_times) {
      if (t < -1e-12 || t > sc.t_end + 1e-12)
        cfg.fail_key("run", "samples", "sample times must lie in [0, t_end]");
      t = std::clamp(t, 0.0, sc.t_end);
    }
  } else {
    long k = cfg.has("run", "sample_count")
                 ? cfg.get_int("run", "sample_count")
                 : 11;
    if (k < 1) cfg.fail_key("run", "sample_count", "must be at least 1");
    if (k == 1) {
      sc.sample_times = {sc.t_end};
    } else {
      for (long i = 0; i < k; ++i)
        sc.sample_times.push_back(sc.t_end * (double)i / (double)(k - 1));
    }
  }
  std::sort(sc.sample_times.begin(), sc.sample_times.end());
  std::vector<double> dedup;
  for (double t : sc.sample_times)
    if (dedup.empty() || !times_equal(dedup.back(), t)) dedup.push_back(t);
  sc.sample_times = std::move(dedup);

  std::string mode = cfg.get_string_or("run", "mode", "entropic");
  if (mode == "entropic")
    sc.mode = RunMode::Entropic;
  else if (mode == "projected")
    sc.mode = RunMode::Projected;
  else if (mode == "both")
    sc.mode = RunMode::Both;
  else
    cfg.fail_key("run", "mode",
                 "expected entropic, projected, or both; got '" + mode + "'");
}

void build_output(Config& cfg, Scenario& sc, const std::string& profile) {
  sc.oracle = cfg.get_string_or("output", "oracle", "");
  if (sc.oracle.empty()) {
    if (cfg.has("output", "oracle_tol"))
      cfg.fail_key("output", "oracle_tol", "set oracle first");
    return;
  }
  size_t n = sc.seed.masses.size();
  double def_tol = 0.0;
  if (sc.oracle == "two_particle") {
    if (n != 2)
      cfg.fail_key("output", "oracle",
                   "two_particle needs exactly two particles");
    def_tol = 1e-9;
  } else if (sc.oracle == "bgsw") {
    def_tol = 2.0 / (double)n;
  } else if (sc.oracle == "confined_linear") {
    if (sc.model.variant() != Variant::ConfinedRepulsive)
      cfg.fail_key("output", "oracle",
                   "confined_linear needs the confined model");
    def_tol = 1e-8;
  } else if (sc.oracle == "dirac_riemann") {
    if (profile != "dirac")
      cfg.fail_key("output", "oracle",
                   "dirac_riemann needs the dirac initial profile");
    if (sc.model.variant() != Variant::EulerPoisson)
      cfg.fail_key("output", "oracle",
                   "dirac_riemann needs the euler_poisson model");
    def_tol = 3.0 / (double)n;
  } else if (sc.oracle == "steady_state") {
    if (sc.model.variant() != Variant::ConfinedRepulsive ||
        !(sc.model.gamma() > 0.0))
      cfg.fail_key("output", "oracle",
                   "steady_state needs the confined model with gamma > 0");
    def_tol = 1e-3;
  } else {
    cfg.fail_key("output", "oracle",
                 "expected two_particle, bgsw, confined_linear, "
                 "dirac_riemann, or steady_state; got '" +
                     sc.oracle + "'");
  }
  sc.oracle_tol = cfg.get_double_or("output", "oracle_tol", def_tol);
  if (!(sc.oracle_tol > 0.0))
    cfg.fail_key("output", "oracle_tol", "must be positive");
}

// ---- oracle distances ----------------------------------------------------

// Eight-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

double two_particle_distance(const Snapshot& s) {
  if (s.x.size() != 2)
    throw std::invalid_argument("two_particle oracle needs two particles");
  oracle::TwoParticleState st = oracle::two_particle(s.t);
  double d = std::abs(s.x[0] - st.x1);
  d = std::max(d, std::abs(s.x[1] - st.x2));
  d = std::max(d, std::abs(s.v[0] - st.v1));
  d = std::max(d, std::abs(s.v[1] - st.v2));
  return d;
}

// W2 distance between the particle quantile map and the closed-form bgsw
// profile: exact cell decomposition, Gauss-Legendre on each smooth piece.
double bgsw_w2(const std::vector<double>& masses, const Snapshot& s) {
  double t = s.t;
  // Radius in mass coordinate of the flat (concentrated) zone around m=1/2.
  double r = t < 1.0 ? t / (1.0 + t * t) : 1.0 / (2.0 * t);
  double total = 0.0;
  double theta = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    double a = theta, b = theta + masses[i];
    theta = b;
    std::vector<double> cut = {a};
    for (double m : {0.5 - r, 0.5 + r})
      if (m > a + 1e-15 && m < b - 1e-15) cut.push_back(m);
    cut.push_back(b);
    for (size_t p = 0; p + 1 < cut.size(); ++p) {
      double mid = 0.5 * (cut[p] + cut[p + 1]);
      double half = 0.5 * (cut[p + 1] - cut[p]);
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) {
        double dm = s.x[i] - oracle::bgsw_X(t, mid + half * kGlNode[k]);
        acc += kGlWeight[k] * dm * dm;
      }
      total += acc * half;
    }
  }
  return std::sqrt(total);
}

// W1 distance between the particle quantile map and the linear rarefaction
// quantile x0 + v0 t - (alpha/2) t^2 (m - 1/2), integrated exactly per cell.
double dirac_riemann_w1(const Scenario& sc, const Snapshot& s) {
  double t = s.t;
  double q = -(sc.model.alpha() / 2.0) * t * t;           // slope in m
  double p = sc.dirac_x0 + sc.dirac_v0 * t - q * 0.5;     // value at m = 0
  double total = 0.0;
  double theta = 0.0;
  for (size_t i = 0; i < sc.seed.masses.size(); ++i) {
    double a = theta, b = theta + sc.seed.masses[i];
    theta = b;
    double c = s.x[i];
    if (q == 0.0) {
      total += std::abs(p - c) * (b - a);
      continue;
    }
    double mstar = (c - p) / q;
    if (mstar <= a || mstar >= b) {
      total += std::abs(p + q * 0.5 * (a + b) - c) * (b - a);
    } else {
      total += 0.5 * std::abs(q) *
               ((mstar - a) * (mstar - a) + (b - mstar) * (b - mstar));
    }
  }
  return total;
}

double confined_linear_distance(const oracle::ConfinedLinear& cl,
                                const std::vector<double>& masses,
                                const Snapshot& s) {
  double d = 0.0;
  double theta = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    double mid = theta + 0.5 * masses[i];
    theta += masses[i];
    d = std::max(d, std::abs(s.x[i] - cl.X(s.t, mid)));
    d = std::max(d, std::abs(s.v[i] - cl.V(s.t, mid)));
  }
  return d;
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Entropic: return "entropic";
    case RunMode::Projected: return "projected";
    case RunMode::Both: return "both";
  }
  return "entropic";
}

Scenario load_scenario(const std::string& path) {
  Config cfg(path);
  Scenario sc;
  sc.name = cfg.get_string_or("", "name",
                              std::filesystem::path(path).stem().string());
  sc.description = cfg.get_string_or("", "description", "");
  sc.model = build_model(cfg);
  build_initial(cfg, sc);
  std::string profile = cfg.get_string_or("initial", "profile", "explicit");
  build_run(cfg, sc);
  build_output(cfg, sc, profile);
  cfg.check_all_used();
  return sc;
}

ScenarioRun run_scenario(const Scenario& sc) {
  ScenarioRun out;
  out.times = sc.sample_times;
  out.ran_entropic = sc.mode != RunMode::Projected;
  out.ran_projected = sc.mode != RunMode::Entropic;
  if (out.ran_entropic) {
    out.entropic = simulate(sc.seed, sc.model, sc.t_end, out.times);
    if (!out.entropic.aborted) {
      // Re-run once on the merged grid so every event instant is sampled.
      std::vector<double> merged = out.times;
      bool added = false;
      for (const Event& ev : out.entropic.events) {
        if (ev.t < 0.0 || ev.t > sc.t_end) continue;
        bool present = false;
        for (double t : merged)
          if (times_equal(t, ev.t)) {
            present = true;
            break;
          }
        if (!present) {
          merged.push_back(ev.t);
          added = true;
        }
      }
      if (added) {
        std::sort(merged.begin(), merged.end());
        out.times = merged;
        out.entropic = simulate(sc.seed, sc.model, sc.t_end, out.times);
      }
    }
  }
  if (out.ran_projected)
    out.projected = simulate_projected(sc.seed, sc.model, out.times);
  return out;
}

OracleReport compare_oracle(const Scenario& sc,
                            const std::vector<Snapshot>& snapshots) {
  if (sc.oracle.empty())
    throw std::invalid_argument("scenario has no oracle to compare against");
  if (snapshots.empty())
    throw std::invalid_argument("no snapshots to compare");
  OracleReport rep;
  rep.tol = sc.oracle_tol;

  if (sc.oracle == "confined_linear") {
    oracle::ConfinedLinear cl(sc.model.lambda(), sc.model.kappa());
    for (const Snapshot& s : snapshots)
      rep.per_sample.push_back(
          confined_linear_distance(cl, sc.seed.masses, s));
  } else if (sc.oracle == "steady_state") {
    double xbar0 = 0.0, vbar0 = 0.0;
    for (size_t i = 0; i < sc.seed.masses.size(); ++i) {
      xbar0 += sc.seed.masses[i] * sc.seed.positions[i];
      vbar0 += sc.seed.masses[i] * sc.seed.velocities[i];
    }
    oracle::SteadyProfile steady =
        oracle::steady_state(sc.model, xbar0, vbar0);
    std::vector<double> xs = oracle::steady_positions(steady, sc.seed.masses);
    MonotoneStepMap target = MonotoneStepMap::from_particles(sc.seed.masses, xs);
    for (const Snapshot& s : snapshots)
      rep.per_sample.push_back(w2_distance(
          MonotoneStepMap::from_particles(sc.seed.masses, s.x), target));
  } else {
    for (const Snapshot& s : snapshots) {
      if (sc.oracle == "two_particle")
        rep.per_sample.push_back(two_particle_distance(s));
      else if (sc.oracle == "bgsw")
        rep.per_sample.push_back(bgsw_w2(sc.seed.masses, s));
      else
        rep.per_sample.push_back(dirac_riemann_w1(sc, s));
    }
  }

  rep.worst = sc.oracle == "steady_state"
                  ? rep.per_sample.back()
                  : *std::max_element(rep.per_sample.begin(),
                                      rep.per_sample.end());
  rep.pass = rep.worst <= rep.tol;
  return rep;
}

}  // namespace sticky
