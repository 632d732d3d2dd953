// Command-line front end: runs scenario files, writes CSV artifacts, and
// re-checks front admissibility from written artifacts.
//
// Exit codes: 0 ok, 1 validation or oracle failure, 2 usage/parse error,
// 3 simulation abort.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sticky1d/claw.hpp"
#include "sticky1d/csv.hpp"
#include "sticky1d/diagnostics.hpp"
#include "sticky1d/dynamics.hpp"
#include "sticky1d/measures.hpp"
#include "sticky1d/scenario.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) { return sticky::csv::format_double(v); }

std::vector<double> theta_of(const std::vector<double>& masses) {
  std::vector<double> th(masses.size() + 1, 0.0);
  for (std::size_t i = 0; i < masses.size(); ++i) th[i + 1] = th[i] + masses[i];
  th.back() = 1.0;
  return th;
}

void write_trajectories(const fs::path& path,
                        const std::vector<double>& masses,
                        const std::vector<sticky::Snapshot>& snaps) {
  sticky::csv::Writer w(path.string(), {"t", "member", "mass", "x", "v", "u"});
  for (const sticky::Snapshot& s : snaps)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      w.row({fmt(s.t), std::to_string(i), fmt(masses[i]), fmt(s.x[i]),
             fmt(s.v[i]), fmt(s.u[i])});
}

void write_events(const fs::path& path,
                  const std::vector<sticky::Event>& events) {
  sticky::csv::Writer w(path.string(), {"t", "kind", "lo", "hi", "ke_before",
                                        "ke_after", "detail"});
  for (const sticky::Event& ev : events)
    w.row({fmt(ev.t), sticky::to_string(ev.kind), std::to_string(ev.lo),
           std::to_string(ev.hi), fmt(ev.ke_before), fmt(ev.ke_after),
           ev.detail});
}

void write_fronts(const fs::path& path, const std::vector<double>& masses,
                  const std::vector<sticky::Snapshot>& snaps) {
  std::vector<double> theta = theta_of(masses);
  sticky::csv::Writer w(path.string(), {"t", "front_index", "x", "m_left",
                                        "m_right", "speed", "mass"});
  for (const sticky::Snapshot& s : snaps)
    for (std::size_t k = 0; k < s.blocks.size(); ++k) {
      const sticky::Block& b = s.blocks[k];
      w.row({fmt(s.t), std::to_string(k), fmt(s.x[b.lo]), fmt(theta[b.lo]),
             fmt(theta[b.hi + 1]), fmt(s.fd_speed[k]), fmt(b.mass)});
    }
}

void write_diagnostics(const fs::path& path, const sticky::Scenario& sc,
                       const std::vector<sticky::Snapshot>& snaps,
                       const std::vector<double>& oracle_dist) {
  sticky::csv::Writer w(path.string(),
                        {"t", "kinetic", "potential", "total", "majorant",
                         "lyapunov", "oracle_dist"});
  const bool confined =
      sc.model.variant() == sticky::Variant::ConfinedRepulsive;
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const sticky::Snapshot& s = snaps[k];
    sticky::EnergyReport er =
        sticky::energy(sc.seed.masses, s.x, s.v, s.u, sc.model);
    std::string lyap =
        confined ? fmt(sticky::lyapunov(sc.seed.masses, s.x, s.u, sc.model))
                 : "";
    std::string od = k < oracle_dist.size() ? fmt(oracle_dist[k]) : "";
    w.row({fmt(s.t), fmt(er.kinetic), fmt(er.potential), fmt(er.total),
           fmt(er.majorant), lyap, od});
  }
}

void write_validation(const fs::path& path,
                      const sticky::ValidationReport& vr) {
  sticky::csv::Writer w(path.string(),
                        {"time", "front_index", "x", "M_left", "M_right",
                         "speed", "rh_residual", "oleinik_margin", "pass"});
  for (const sticky::FrontRow& r : vr.rows)
    w.row({fmt(r.t), std::to_string(r.front_index), fmt(r.x), fmt(r.m_left),
           fmt(r.m_right), fmt(r.speed), fmt(r.rh_residual),
           fmt(r.oleinik_margin), r.pass ? "1" : "0"});
}

void print_validation_summary(const char* label,
                              const sticky::ValidationReport& vr) {
  std::cout << label << ": " << vr.rows.size() << " front rows, max RH residual "
            << fmt(vr.max_rh_residual) << ", min margin " << fmt(vr.min_margin)
            << ", " << vr.failures << " failure(s)\n";
}

int cmd_run(const std::string& file, const std::string& out_dir,
            const std::string& mode_flag) {
  sticky::Scenario sc;
  try {
    sc = sticky::load_scenario(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (mode_flag == "entropic") sc.mode = sticky::RunMode::Entropic;
  else if (mode_flag == "projected") sc.mode = sticky::RunMode::Projected;
  else if (mode_flag == "both") sc.mode = sticky::RunMode::Both;

  std::cout << "scenario " << sc.name << ": " << sc.seed.masses.size()
            << " particles, t_end " << fmt(sc.t_end) << ", mode "
            << sticky::to_string(sc.mode) << "\n";

  sticky::ScenarioRun run;
  try {
    run = sticky::run_scenario(sc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  bool aborted = false;
  bool validation_fail = false;
  bool oracle_fail = false;

  // In projected-only mode the projected run is the run: it owns the plain
  // artifact names (events.csv stays header-only: the projected flow keeps
  // no event log).  Otherwise the entropic run owns them and the projected
  // artifacts get a _projected suffix.
  const bool projected_owns_plain = !run.ran_entropic;

  if (run.ran_entropic) {
    const sticky::SimResult& r = run.entropic;
    aborted = r.aborted;
    write_trajectories(out / "trajectories.csv", sc.seed.masses, r.snapshots);
    write_events(out / "events.csv", r.events);
    write_fronts(out / "fronts.csv", sc.seed.masses, r.snapshots);
    sticky::ValidationReport vr =
        sticky::validate_entropy(r.snapshots, sc.seed.masses);
    write_validation(out / "validation.csv", vr);
    validation_fail = !vr.all_pass();
    print_validation_summary("entropic", vr);
    std::cout << "entropic: " << r.events.size() << " event(s)\n";

    std::vector<double> od;
    if (!sc.oracle.empty() && !aborted && !r.snapshots.empty()) {
      sticky::OracleReport orep = sticky::compare_oracle(sc, r.snapshots);
      od = orep.per_sample;
      oracle_fail = !orep.pass;
      std::cout << "oracle " << sc.oracle << ": worst distance "
                << fmt(orep.worst) << " (tol " << fmt(orep.tol) << ") "
                << (orep.pass ? "ok" : "FAIL") << "\n";
    }
    write_diagnostics(out / "diagnostics.csv", sc, r.snapshots, od);

    if (aborted) {
      std::cerr << "simulation aborted: " << r.abort_reason << "\n";
      std::size_t tail = std::min<std::size_t>(r.events.size(), 10);
      std::cerr << "last " << tail << " event(s):\n";
      for (std::size_t k = r.events.size() - tail; k < r.events.size(); ++k) {
        const sticky::Event& ev = r.events[k];
        std::cerr << "  t=" << fmt(ev.t) << " " << sticky::to_string(ev.kind)
                  << " [" << ev.lo << "," << ev.hi << "] " << ev.detail
                  << "\n";
      }
    }
  }

  if (run.ran_projected) {
    const char* traj =
        projected_owns_plain ? "trajectories.csv" : "trajectories_projected.csv";
    const char* fronts =
        projected_owns_plain ? "fronts.csv" : "fronts_projected.csv";
    const char* diag =
        projected_owns_plain ? "diagnostics.csv" : "diagnostics_projected.csv";
    const char* valid =
        projected_owns_plain ? "validation.csv" : "validation_projected.csv";
    write_trajectories(out / traj, sc.seed.masses, run.projected);
    write_fronts(out / fronts, sc.seed.masses, run.projected);
    write_diagnostics(out / diag, sc, run.projected, {});
    sticky::ValidationReport vp =
        sticky::validate_entropy(run.projected, sc.seed.masses);
    write_validation(out / valid, vp);
    print_validation_summary("projected (informational)", vp);
    if (projected_owns_plain) write_events(out / "events.csv", {});
  }

  std::cout << "artifacts written to " << out.string() << "\n";
  if (aborted) return 3;
  if (validation_fail || oracle_fail) return 1;
  return 0;
}

// Rebuild per-time snapshots from trajectories.csv + fronts.csv and re-run
// the admissibility checks on them.
int cmd_validate(const std::string& out_dir, const std::string& cfg) {
  sticky::Scenario sc;
  try {
    sc = sticky::load_scenario(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const fs::path out(out_dir);
  sticky::csv::Table traj, fronts;
  try {
    traj = sticky::csv::read((out / "trajectories.csv").string());
    fronts = sticky::csv::read((out / "fronts.csv").string());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const int tc = traj.column("t"), xc = traj.column("x"), vc = traj.column("v"),
            uc = traj.column("u"), mc = traj.column("mass");
  const int ft = fronts.column("t"), fl = fronts.column("m_left"),
            fr = fronts.column("m_right"), fsp = fronts.column("speed");
  if (tc < 0 || xc < 0 || vc < 0 || uc < 0 || mc < 0 || ft < 0 || fl < 0 ||
      fr < 0 || fsp < 0) {
    std::cerr << "error: artifact files lack the expected columns\n";
    return 2;
  }

  // Group trajectory rows by identical written time; rows are in time order
  // and 17-digit formatting round-trips, so exact equality is safe.  The
  // block structure comes from fronts.csv: positions alone cannot recover it
  // at a split instant, where the parts still coincide.
  std::vector<sticky::Snapshot> snaps;
  std::vector<double> masses;
  std::size_t row = 0, fr_row = 0;
  while (row < traj.rows.size()) {
    double t = traj.number(row, tc);
    sticky::Snapshot s;
    s.t = t;
    std::vector<double> snap_masses;
    while (row < traj.rows.size() && traj.number(row, tc) == t) {
      snap_masses.push_back(traj.number(row, mc));
      s.x.push_back(traj.number(row, xc));
      s.v.push_back(traj.number(row, vc));
      s.u.push_back(traj.number(row, uc));
      ++row;
    }
    if (masses.empty()) masses = snap_masses;
    if (snap_masses.size() != masses.size()) {
      std::cerr << "error: inconsistent member count at t=" << fmt(t) << "\n";
      return 2;
    }
    std::vector<double> theta = theta_of(masses);
    int next_lo = 0;
    while (fr_row < fronts.rows.size() && fronts.number(fr_row, ft) == t) {
      double m_left = fronts.number(fr_row, fl);
      double m_right = fronts.number(fr_row, fr);
      sticky::Block b;
      b.lo = next_lo;
      if (std::abs(theta[b.lo] - m_left) > 1e-12) {
        std::cerr << "error: front rows at t=" << fmt(t)
                  << " do not tile the mass interval\n";
        return 2;
      }
      b.hi = b.lo;
      while (b.hi + 1 < (int)masses.size() &&
             std::abs(theta[b.hi + 1] - m_right) > 1e-12)
        ++b.hi;
      if (std::abs(theta[b.hi + 1] - m_right) > 1e-12) {
        std::cerr << "error: front row at t=" << fmt(t)
                  << " has m_right off the mass grid\n";
        return 2;
      }
      b.t0 = t;
      b.x0 = s.x[b.lo];
      b.v0 = s.v[b.lo];
      b.mass = m_right - m_left;
      next_lo = b.hi + 1;
      s.blocks.push_back(b);
      s.fd_speed.push_back(fronts.number(fr_row, fsp));
      ++fr_row;
    }
    if (s.blocks.empty() || next_lo != (int)masses.size()) {
      std::cerr << "error: fronts.csv does not cover t=" << fmt(t) << "\n";
      return 2;
    }
    snaps.push_back(std::move(s));
  }
  if (snaps.empty()) {
    std::cerr << "error: no trajectory rows\n";
    return 2;
  }
  if (fr_row != fronts.rows.size()) {
    std::cerr << "error: fronts.csv has rows at times missing from "
                 "trajectories.csv\n";
    return 2;
  }
  if (masses.size() != sc.seed.masses.size()) {
    std::cerr << "error: artifact member count does not match the scenario\n";
    return 2;
  }

  sticky::ValidationReport vr = sticky::validate_entropy(snaps, masses);
  write_validation(out / "validation.csv", vr);
  print_validation_summary("validation", vr);
  std::cout << "validation.csv rewritten in " << out.string() << "\n";
  return vr.all_pass() ? 0 : 1;
}

int cmd_list(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "error: no scenario directory '" << dir << "'\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cfg")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  bool bad = false;
  for (const fs::path& p : files) {
    try {
      sticky::Scenario sc = sticky::load_scenario(p.string());
      std::cout << sc.name << ": n=" << sc.seed.masses.size() << ", t_end="
                << fmt(sc.t_end) << ", mode=" << sticky::to_string(sc.mode)
                << (sc.oracle.empty() ? "" : ", oracle=" + sc.oracle) << "\n";
      if (!sc.description.empty()) std::cout << "  " << sc.description << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      bad = true;
    }
  }
  if (files.empty()) std::cout << "no scenario files in " << dir << "\n";
  return bad ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven sticky-particle simulator and entropy verifier "
               "for one-dimensional pressureless flows"};
  app.require_subcommand(1);

  std::string scenario_file, out_dir = "out", mode, seed;
  CLI::App* run = app.add_subcommand("run", "Run a scenario, write CSV artifacts");
  run->add_option("scenario", scenario_file, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory (default: out)");
  run->add_option("--mode", mode, "Override the scenario's run mode")
      ->check(CLI::IsMember({"entropic", "projected", "both"}));
  run->add_option("--seed", seed,
                  "Accepted for interface stability; runs are deterministic, "
                  "so only 'none' is valid")
      ->check(CLI::IsMember({"none"}));

  std::string val_dir, val_cfg;
  CLI::App* val = app.add_subcommand(
      "validate", "Re-check front admissibility from written artifacts");
  val->add_option("out_dir", val_dir, "Directory holding run artifacts")
      ->required();
  val->add_option("scenario", val_cfg, "Scenario config file")->required();

  std::string list_dir = "scenarios";
  CLI::App* lst =
      app.add_subcommand("list-scenarios", "Catalog scenario files");
  lst->add_option("--dir", list_dir, "Scenario directory (default: scenarios)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_file, out_dir, mode);
    if (val->parsed()) return cmd_validate(val_dir, val_cfg);
    return cmd_list(list_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
