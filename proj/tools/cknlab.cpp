// Command-line front end: one subcommand per library module, writing CSV/JSON
// artifacts plus a manifest.json into --out.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cknlab/cknlab.hpp"

namespace fs = std::filesystem;
using namespace cknlab;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum Exit { kOk = 0, kInvalid = 2, kInconclusive = 3, kIo = 4 };

struct Common {
  int N = 3;
  double a = 0;
  double b = 0;
  double p = NAN;
  double q = NAN;
  std::string out;
  double rmax = 1e4;
  double tol = 1e-10;
  double beta = 1.0;
  bool csv = false;
  bool emit_plot = false;

  ProblemParams params() const { return {N, a, b, p}; }

  ShootConfig shoot_config() const {
    ShootConfig c;
    c.beta = beta;
    c.r_max = rmax;
    c.rel_tol = tol;
    c.abs_tol = tol * 1e-2;
    return c;
  }
};

void add_params(CLI::App* cmd, Common& c, bool with_p = true) {
  cmd->add_option("--N", c.N, "dimension (>= 3)")->required();
  cmd->add_option("--a", c.a, "gradient weight exponent")->required();
  cmd->add_option("--b", c.b, "source weight exponent")->required();
  if (with_p) cmd->add_option("--p", c.p, "nonlinearity exponent");
}

void add_output(CLI::App* cmd, Common& c, const std::string& default_out) {
  c.out = default_out;
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_flag("--csv", c.csv, "print the primary CSV to stdout instead of JSON");
  cmd->add_flag("--json", "print JSON to stdout (default)");
  cmd->add_flag("--emit-plot", c.emit_plot, "also write a gnuplot script for the CSVs");
}

void add_shoot_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--rmax", c.rmax, "outer radius of the shot")->capture_default_str();
  cmd->add_option("--tol", c.tol, "relative integrator tolerance")->capture_default_str();
  cmd->add_option("--beta", c.beta, "initial height v(0)")->capture_default_str();
}

double require_p(const Common& c) {
  if (std::isnan(c.p)) throw Error(Errc::InvalidExponent, "--p is required");
  return c.p;
}

/// Collects outputs for the manifest.
class Run {
 public:
  Run(std::string subcommand, std::string out_dir)
      : subcommand_(std::move(subcommand)), dir_(std::move(out_dir)),
        start_(std::chrono::steady_clock::now()) {}

  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void write(const std::string& name, const std::string& contents) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir_ + ": " + ec.message());
    io::write_file(path(name), contents);
    outputs_.push_back(path(name));
  }

  void finish(const json& params, const json& config) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = {{"subcommand", subcommand_}, {"params", params},         {"config", config},
              {"outputs", outputs_},       {"wall_time", wall},         {"tool_version", kToolVersion}};
    outputs_.push_back(path("manifest.json"));
    std::error_code ec;
    fs::create_directories(dir_, ec);
    io::write_file(path("manifest.json"), m.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::string dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
};

std::string plot_script(const std::vector<std::pair<std::string, std::string>>& series) {
  std::ostringstream s;
  s << "set datafile separator ','\nset key autotitle columnhead\nset logscale x\nplot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) s << ", \\\n     ";
    s << '\'' << series[i].first << "' using 1:2 with lines title '" << series[i].second << '\'';
  }
  s << '\n';
  return s.str();
}

int cmd_classify(const Common& c, const std::string& out_dir) {
  const ProblemParams params{c.N, c.a, c.b, require_p(c)};
  const Regime regime = classify(params);
  json out;
  if (params.p > 1.0) {
    out = derive(params);
  } else {
    out = {{"sigma", weight_gap(c.a, c.b)},
           {"p_serrin", serrin_exponent(c.N, c.a, c.b)},
           {"p_critical", critical_exponent(c.N, c.a, c.b)},
           {"gamma", nullptr},
           {"lambda1", nullptr},
           {"lambda2", nullptr},
           {"fs_b_threshold", nullptr}};
  }
  out["regime"] = std::string(to_string(regime.kind));
  out["witness"] = regime.witness;
  std::cout << out.dump() << '\n';
  if (!out_dir.empty()) {
    Run run("classify", out_dir);
    run.write("classify.json", out.dump(2) + "\n");
    run.finish(params, json::object());
  }
  return kOk;
}

int cmd_shoot(const Common& c) {
  const ProblemParams params{c.N, c.a, c.b, require_p(c)};
  const ShootConfig config = c.shoot_config();
  const auto traj = shoot(params, config);
  const json outcome = outcome_json(traj.outcome);
  std::ostringstream csv;
  io::write_trajectory_csv(csv, traj.nodes);

  Run run("shoot", c.out);
  run.write("trajectory.csv", csv.str());
  run.write("outcome.json", outcome.dump(2) + "\n");
  if (c.emit_plot) run.write("plot.gp", plot_script({{"trajectory.csv", "v(r)"}}));
  run.finish(params, traj.config);
  std::cout << (c.csv ? csv.str() : outcome.dump() + "\n");
  return std::holds_alternative<Inconclusive>(traj.outcome) ? kInconclusive : kOk;
}

int cmd_threshold(const Common& c, double p_lo, double p_hi) {
  ShootConfig config = c.shoot_config();
  config.rel_tol = 1e-10;
  config.abs_tol = 1e-12;
  const double tol_p = c.tol;
  const auto result = threshold_bisect(c.N, c.a, c.b, p_lo, p_hi, tol_p, config);
  const double pc = critical_exponent(c.N, c.a, c.b);
  json out = result;
  out["p_critical"] = pc;
  out["abs_error"] = std::abs(result.p_star - pc);

  Run run("threshold", c.out);
  run.write("threshold.json", out.dump(2) + "\n");
  run.finish(json{{"N", c.N}, {"a", c.a}, {"b", c.b}, {"p_lo", p_lo}, {"p_hi", p_hi}},
             json{{"tol_p", tol_p}, {"shoot", config}});
  std::cout << "p_star " << io::format(result.p_star) << " +- "
            << io::format(0.5 * (result.p_hi - result.p_lo)) << '\n'
            << "|p_star - p_critical| " << io::format(std::abs(result.p_star - pc)) << '\n';
  return kOk;
}

int cmd_bubble(const Common& c, int samples) {
  ProblemParams params{c.N, c.a, c.b, std::isnan(c.p) ? critical_exponent(c.N, c.a, c.b) : c.p};
  const auto bubble = make_bubble<double>(params);
  const double worst = max_bubble_residual(params, samples);
  std::vector<RadialNode> nodes;
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    const double r = 1e-3 * std::pow(1e6, s);
    const auto value = bubble_eval(bubble, r);
    nodes.push_back({r, value.v, value.dv});
  }
  std::ostringstream csv;
  io::write_trajectory_csv(csv, nodes);
  const json out = {{"amplitude", bubble.amplitude},
                    {"sigma", bubble.sigma},
                    {"p", params.p},
                    {"samples", samples},
                    {"max_relative_residual", worst}};

  Run run("bubble", c.out);
  run.write("bubble.csv", csv.str());
  run.write("bubble.json", out.dump(2) + "\n");
  if (c.emit_plot) run.write("plot.gp", plot_script({{"bubble.csv", "bubble"}}));
  run.finish(params, json{{"samples", samples}, {"r_range", {1e-3, 1e3}}});
  std::cout << (c.csv ? csv.str() : out.dump() + "\n");
  return kOk;
}

int cmd_pohozaev(const Common& c, const std::string& trajectory, std::vector<double> radii) {
  const ProblemParams params{c.N, c.a, c.b, require_p(c)};
  RadialTrajectory traj;
  json config;
  if (trajectory.empty()) {
    traj = shoot(params, c.shoot_config());
    config = traj.config;
  } else {
    std::istringstream in(io::read_file(trajectory));
    traj.params = params;
    traj.nodes = io::read_trajectory_csv(in);
    config = {{"trajectory", trajectory}};
  }
  if (radii.empty()) radii = {0.5, 1.0, 2.0, 4.0};
  std::vector<PohozaevReport> reports;
  for (double R : radii) reports.push_back(evaluate(traj, R));
  std::ostringstream csv;
  io::write_pohozaev_csv(csv, reports);
  const json out = reports;

  Run run("pohozaev", c.out);
  run.write("pohozaev.csv", csv.str());
  run.write("pohozaev.json", out.dump(2) + "\n");
  run.finish(params, config);
  std::cout << (c.csv ? csv.str() : out.dump() + "\n");
  return kOk;
}

int cmd_phase(const Common& c) {
  const ProblemParams params{c.N, c.a, c.b, require_p(c)};
  const auto traj = shoot(params, c.shoot_config());
  const auto cyl = to_cylinder(traj);
  double max_h = 0.0;
  for (const auto& n : cyl.nodes) max_h = std::max(max_h, std::abs(hamiltonian(params, n.w, n.dw).value));
  json out = {{"outcome", outcome_json(traj.outcome)},
              {"max_abs_hamiltonian", max_h},
              {"hamiltonian_conserved", is_critical(params)}};
  try {
    out["fixed_point"] = fixed_points(params);
  } catch (const Error& e) {
    if (e.code() != Errc::NotInRange) throw;
    out["fixed_point"] = nullptr;
  }
  std::ostringstream csv;
  io::write_cylinder_csv(csv, cyl.nodes);

  Run run("phase", c.out);
  run.write("cylinder.csv", csv.str());
  run.write("phase.json", out.dump(2) + "\n");
  if (c.emit_plot) {
    run.write("plot.gp", "set datafile separator ','\nset key autotitle columnhead\n"
                         "plot 'cylinder.csv' using 2:3 with lines title 'w vs dw/dt'\n");
  }
  run.finish(params, traj.config);
  std::cout << (c.csv ? csv.str() : out.dump() + "\n");
  return std::holds_alternative<Inconclusive>(traj.outcome) ? kInconclusive : kOk;
}

int cmd_ckn(const Common& c) {
  if (std::isnan(c.q)) throw Error(Errc::InvalidExponent, "--q is required");
  const CknTriple triple{c.N, c.a, c.b, c.q};
  const auto check = check_balance(triple);
  json out = {{"balance", check}};
  out["energy"] = best_constant(triple);

  Run run("ckn", c.out);
  run.write("ckn.json", out.dump(2) + "\n");
  run.finish(triple, json::object());
  std::cout << out.dump() << '\n';
  return kOk;
}

/// Runs task(i) for i in [0, n) on `jobs` threads; results land by index.
template <class Task>
void parallel_for(std::size_t n, unsigned jobs, const Task& task) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) task(i);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::min<std::size_t>(jobs, n); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

int cmd_sweep(const Common& c, const std::string& grid_path, const std::string& mode, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::istringstream in(io::read_file(grid_path));
  std::ostringstream csv;
  json config = {{"grid", grid_path}, {"mode", mode}, {"jobs", jobs}};
  bool any_inconclusive = false;

  if (mode == "shoot") {
    const auto rows = io::read_numeric_csv(in, "N,a,b,p");
    std::vector<std::string> lines(rows.size());
    std::vector<char> inconclusive(rows.size(), 0);
    const ShootConfig config_shoot = c.shoot_config();
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
      const auto& row = rows[i];
      const ProblemParams params{static_cast<int>(row[0]), row[1], row[2], row[3]};
      std::string regime, outcome, r0;
      try {
        regime = std::string(to_string(classify(params).kind));
        const auto traj = shoot(params, config_shoot);
        outcome = std::string(outcome_name(traj.outcome));
        if (const auto* z = std::get_if<CrossedZero>(&traj.outcome)) r0 = io::format(z->r0);
        inconclusive[i] = std::holds_alternative<Inconclusive>(traj.outcome);
      } catch (const Error& e) {
        outcome = "error:" + std::string(to_string(e.code()));
      }
      lines[i] = io::format(row[0]) + ',' + io::format(row[1]) + ',' + io::format(row[2]) + ',' +
                 io::format(row[3]) + ',' + regime + ',' + outcome + ',' + r0 + '\n';
    });
    csv << "N,a,b,p,regime,outcome,r0\n";
    for (const auto& line : lines) csv << line;
    any_inconclusive = std::any_of(inconclusive.begin(), inconclusive.end(), [](char x) { return x; });
    config["shoot"] = config_shoot;
  } else if (mode == "ckn") {
    const auto rows = io::read_numeric_csv(in, "a,b,q");
    std::vector<std::string> lines(rows.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
      const auto& row = rows[i];
      const CknTriple triple{c.N, row[0], row[1], row[2]};
      std::string s, flag;
      try {
        flag = std::string(to_string(fs_region(triple.as_params())));
        s = io::format(best_constant(triple).s_estimate);
      } catch (const Error& e) {
        if (flag.empty()) flag = "error:" + std::string(to_string(e.code()));
      }
      lines[i] = io::format(row[0]) + ',' + io::format(row[1]) + ',' + io::format(row[2]) + ',' + s +
                 ',' + flag + '\n';
    });
    csv << "a,b,q,s_estimate,fs_flag\n";
    for (const auto& line : lines) csv << line;
    config["N"] = c.N;
  } else {
    throw Error(Errc::InvalidConfig, "--mode must be shoot or ckn");
  }

  Run run("sweep", c.out);
  run.write("sweep.csv", csv.str());
  run.finish(json::object(), config);
  std::cout << csv.str();
  return any_inconclusive ? kInconclusive : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial solutions of div(|x|^a Du) + |x|^b u^p = 0: thresholds, bubbles, identities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common c;
  double p_lo = NAN, p_hi = NAN;
  int samples = 100;
  std::string trajectory, grid, mode = "shoot";
  std::vector<double> radii;
  unsigned jobs = 0;

  auto* classify_cmd = app.add_subcommand("classify", "derived exponents and regime (JSON)");
  add_params(classify_cmd, c);
  std::string classify_out;
  classify_cmd->add_option("--out", classify_out, "also write classify.json and a manifest here");

  auto* shoot_cmd = app.add_subcommand("shoot", "integrate the radial IVP and classify the outcome");
  add_params(shoot_cmd, c);
  add_shoot_options(shoot_cmd, c);
  add_output(shoot_cmd, c, "out");

  auto* threshold_cmd = app.add_subcommand("threshold", "bisect p for the crossing/positive switch");
  add_params(threshold_cmd, c, false);
  threshold_cmd->add_option("--p-lo", p_lo, "exponent with crossing behavior")->required();
  threshold_cmd->add_option("--p-hi", p_hi, "exponent without crossing")->required();
  threshold_cmd->add_option("--tol", c.tol, "bracket width in p")->required();
  threshold_cmd->add_option("--rmax", c.rmax, "outer radius of each shot")->capture_default_str();
  add_output(threshold_cmd, c, "out");

  auto* bubble_cmd = app.add_subcommand("bubble", "sample the critical bubble and its residual");
  add_params(bubble_cmd, c);
  bubble_cmd->add_option("--samples", samples, "log-spaced radii in [1e-3, 1e3]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output(bubble_cmd, c, "out");

  auto* pohozaev_cmd = app.add_subcommand("pohozaev", "evaluate the ball identity on a trajectory");
  add_params(pohozaev_cmd, c);
  add_shoot_options(pohozaev_cmd, c);
  pohozaev_cmd->add_option("--trajectory", trajectory, "r,v,dv CSV from `shoot` (default: shoot now)");
  pohozaev_cmd->add_option("--R", radii, "ball radii")->delimiter(',');
  add_output(pohozaev_cmd, c, "out");

  auto* phase_cmd = app.add_subcommand("phase", "cylinder-variable image and fixed point");
  add_params(phase_cmd, c);
  add_shoot_options(phase_cmd, c);
  add_output(phase_cmd, c, "out");

  auto* ckn_cmd = app.add_subcommand("ckn", "CKN quotient of the bubble and balance checks");
  add_params(ckn_cmd, c, false);
  ckn_cmd->add_option("--q", c.q, "integrability exponent")->required();
  add_output(ckn_cmd, c, "out");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a CSV grid of parameter rows in parallel");
  sweep_cmd->add_option("--grid", grid, "CSV with header N,a,b,p (shoot) or a,b,q (ckn)")->required();
  sweep_cmd->add_option("--mode", mode, "shoot or ckn")->capture_default_str();
  sweep_cmd->add_option("--jobs", jobs, "worker threads (0: all cores)");
  sweep_cmd->add_option("--N", c.N, "dimension for ckn rows")->capture_default_str();
  add_shoot_options(sweep_cmd, c);
  add_output(sweep_cmd, c, "out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*classify_cmd) return cmd_classify(c, classify_out);
    if (*shoot_cmd) return cmd_shoot(c);
    if (*threshold_cmd) return cmd_threshold(c, p_lo, p_hi);
    if (*bubble_cmd) return cmd_bubble(c, samples);
    if (*pohozaev_cmd) return cmd_pohozaev(c, trajectory, radii);
    if (*phase_cmd) return cmd_phase(c);
    if (*ckn_cmd) return cmd_ckn(c);
    if (*sweep_cmd) return cmd_sweep(c, grid, mode, jobs);
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << '\n' << e.what() << '\n';
    return e.code() == Errc::IoError ? kIo : kInvalid;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
