// hprlp: solve MPS files, run benchmark directories, turn traces into plot data.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hprlp/bench.hpp"
#include "hprlp/mps.hpp"
#include "hprlp/solver.hpp"

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitLimit = 2;
constexpr int kExitError = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

struct SolverFlags {
  double tol = 1e-8;
  double time_limit = 3600.0;
  long iter_limit = 1'000'000;
  std::string mode = "hpr";
  double gamma = 1.0;
  double sigma0 = 1.0;
  double lambda_safety = 1.05;
  bool no_restart = false;
  long fixed_restart = 0;
  bool no_adaptive_sigma = false;
  long check_interval = 100;
  std::string scaling = "ruiz";

  void add_to(CLI::App& app) {
    app.add_option("--tol", tol, "relative KKT tolerance")->check(CLI::PositiveNumber);
    app.add_option("--time-limit", time_limit, "seconds")->check(CLI::PositiveNumber);
    app.add_option("--iter-limit", iter_limit)->check(CLI::PositiveNumber);
    app.add_option("--mode", mode)->check(CLI::IsMember({"hpr", "hdr", "pr", "epr", "rhpdhg"}));
    app.add_option("--gamma", gamma, "reflection parameter for rhpdhg");
    app.add_option("--sigma0", sigma0, "initial penalty")->check(CLI::PositiveNumber);
    app.add_option("--lambda-safety", lambda_safety, "factor applied to the power-iteration estimate");
    app.add_flag("--no-restart", no_restart);
    app.add_option("--fixed-restart", fixed_restart, "restart every N inner iterations")
        ->check(CLI::PositiveNumber);
    app.add_flag("--no-adaptive-sigma", no_adaptive_sigma);
    app.add_option("--check-interval", check_interval)->check(CLI::PositiveNumber);
    app.add_option("--scaling", scaling)->check(CLI::IsMember({"none", "ruiz"}));
  }

  hprlp::SolverConfig config() const {
    hprlp::SolverConfig cfg;
    cfg.tol = tol;
    cfg.time_limit = time_limit;
    cfg.iter_limit = iter_limit;
    cfg.engine.mode = *hprlp::parse_mode(mode);
    cfg.engine.gamma = gamma;
    cfg.sigma0 = sigma0;
    cfg.lambda_safety = lambda_safety;
    cfg.check_interval = check_interval;
    cfg.adaptive_sigma = !no_adaptive_sigma;
    cfg.scaling = scaling == "none" ? hprlp::ScalingMode::none : hprlp::ScalingMode::ruiz;
    if (no_restart || fixed_restart > 0) cfg.restart.enabled = false;
    if (fixed_restart > 0) cfg.restart.fixed_period = fixed_restart;
    cfg.validate();
    return cfg;
  }
};

int exit_code(hprlp::SolveStatus s) {
  switch (s) {
    case hprlp::SolveStatus::optimal: return kExitOptimal;
    case hprlp::SolveStatus::iter_limit:
    case hprlp::SolveStatus::time_limit: return kExitLimit;
    case hprlp::SolveStatus::numerical_error: return kExitError;
  }
  return kExitError;
}

int cmd_solve(const std::string& path, const SolverFlags& flags, const std::string& trace_file,
              bool as_json) {
  hprlp::BuildReport report;
  const hprlp::LpProblem prob = hprlp::load_mps(path, &report);
  for (const auto& w : report.warnings)
    std::cerr << "warning" << (w.line > 0 ? " (line " + std::to_string(w.line) + ")" : "")
              << ": " << w.message << '\n';

  const hprlp::SolveResult res = hprlp::solve(prob, flags.config());

  if (!trace_file.empty()) {
    std::ofstream out(trace_file);
    if (!out) throw std::runtime_error("cannot write " + trace_file);
    hprlp::write_trace_csv(out, res.trace);
  }
  if (as_json) {
    std::cout << hprlp::solve_result_to_json(res) << '\n';
  } else {
    std::cout.precision(12);
    std::cout << "status      " << hprlp::to_string(res.status) << '\n'
              << "mode        " << hprlp::to_string(res.mode) << '\n'
              << "primal obj  " << res.primal_obj << '\n'
              << "dual obj    " << res.dual_obj << '\n'
              << "rel gap     " << res.residuals.gap << '\n'
              << "rel primal  " << res.residuals.primal << '\n'
              << "rel dual    " << res.residuals.dual << '\n'
              << "iterations  " << res.iterations << '\n'
              << "restarts    " << res.restarts << '\n'
              << "seconds     " << res.seconds << '\n';
    if (res.status != hprlp::SolveStatus::optimal && res.mode == hprlp::Mode::pr)
      std::cout << "note        plain PR did not reach the tolerance before the limit\n";
    if (!res.note.empty()) std::cout << "note        " << res.note << '\n';
  }
  return exit_code(res.status);
}

int cmd_bench(const std::string& dir, const SolverFlags& flags, const std::vector<std::string>& modes,
              const std::string& csv_file) {
  std::vector<hprlp::Mode> ms;
  for (const auto& m : modes) ms.push_back(*hprlp::parse_mode(m));
  if (ms.empty()) ms.push_back(*hprlp::parse_mode(flags.mode));
  const hprlp::BenchReport rep = hprlp::run_bench(dir, ms, flags.config());
  hprlp::write_bench_table(std::cout, rep);
  if (!csv_file.empty()) {
    std::ofstream out(csv_file);
    if (!out) throw std::runtime_error("cannot write " + csv_file);
    hprlp::write_bench_csv(out, rep);
  }
  return kExitOptimal;
}

int cmd_plotdata(const std::vector<std::string>& inputs, const std::string& out_file) {
  std::vector<hprlp::LabeledTrace> traces;
  for (const auto& arg : inputs) {
    std::string label, path = arg;
    if (const auto eq = arg.find('='); eq != std::string::npos) {
      label = arg.substr(0, eq);
      path = arg.substr(eq + 1);
    } else if (inputs.size() > 1) {
      label = std::filesystem::path(path).stem().string();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    traces.push_back({label, hprlp::read_trace_csv(in)});
  }
  if (out_file.empty()) {
    hprlp::write_plotdata(std::cout, traces);
  } else {
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot write " + out_file);
    hprlp::write_plotdata(out, traces);
  }
  return kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restarted Halpern Peaceman-Rachford LP solver"};
  app.require_subcommand(1);

  SolverFlags solve_flags;
  std::string solve_path, trace_file;
  bool as_json = false;
  auto* solve = app.add_subcommand("solve", "solve one MPS file");
  solve->add_option("path", solve_path, "MPS file (.mps or .mps.gz)")->required();
  solve_flags.add_to(*solve);
  solve->add_option("--trace", trace_file, "write the convergence trace as CSV");
  solve->add_flag("--json", as_json, "print the result as JSON");

  SolverFlags bench_flags;
  bench_flags.time_limit = 3600.0;
  std::string bench_dir, csv_file;
  std::vector<std::string> modes;
  auto* bench = app.add_subcommand("bench", "solve every MPS file in a directory");
  bench->add_option("dir", bench_dir)->required()->check(CLI::ExistingDirectory);
  bench_flags.add_to(*bench);
  bench->add_option("--modes", modes, "comma separated list of modes")
      ->delimiter(',')
      ->check(CLI::IsMember({"hpr", "hdr", "pr", "epr", "rhpdhg"}));
  bench->add_option("--csv", csv_file, "write per-instance rows as CSV");

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  auto* plot = app.add_subcommand("plotdata", "convert trace CSVs to long-format plot data");
  plot->add_option("traces", plot_inputs, "trace files, optionally LABEL=path")->required();
  plot->add_option("-o,--output", plot_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_path, solve_flags, trace_file, as_json);
    if (bench->parsed()) return cmd_bench(bench_dir, bench_flags, modes, csv_file);
    return cmd_plotdata(plot_inputs, plot_out);
  } catch (const hprlp::MpsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == hprlp::MpsErrorKind::io ? kExitError : kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
