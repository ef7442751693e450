#ifndef HPRLP_SOLVER_HPP
#define HPRLP_SOLVER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hprlp/adaptive.hpp"
#include "hprlp/engine.hpp"
#include "hprlp/lp_model.hpp"
#include "hprlp/scaling.hpp"

namespace hprlp {

enum class ScalingMode { none, ruiz };

struct SolverConfig {
  double tol = 1e-8;
  double time_limit = 3600.0;  // seconds, checked at check_interval boundaries
  long iter_limit = 1'000'000;
  long check_interval = 100;   // termination-check stride
  EngineConfig engine;         // engine.sigma and engine.lambda_a are set by solve()
  RestartConfig restart;
  double sigma0 = 1.0;
  bool adaptive_sigma = true;
  SigmaBounds sigma_bounds;
  ScalingMode scaling = ScalingMode::ruiz;
  ScalingOptions scaling_options;
  double lambda_safety = 1.05;
  std::optional<double> lambda_a;       // skip the power iteration
  std::optional<Iterate> initial_point;  // in the original (unscaled) space
  bool record_trace = true;
  double divergence_threshold = 1e12;

  void validate() const;
};

enum class SolveStatus { optimal, iter_limit, time_limit, numerical_error };

std::string_view to_string(SolveStatus status);
std::optional<SolveStatus> parse_status(std::string_view name);

struct TraceRecord {
  long k = 0;
  long r = 0;
  long t = 0;
  double sigma = 0.0;
  double rel_gap = 0.0;
  double rel_primal = 0.0;
  double rel_dual = 0.0;
  double merit = 0.0;
  double seconds = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

struct RestartEvent {
  long k = 0;
  long r = 0;  // index of the outer loop that just ended
  long t = 0;  // its length
  RestartReason reason = RestartReason::none;
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  double merit = 0.0;

  bool operator==(const RestartEvent&) const = default;
};

struct SolveResult {
  SolveStatus status = SolveStatus::iter_limit;
  Vector x;
  Vector y;
  Vector z;
  // in the user's objective sense
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  RelativeResiduals residuals;
  long iterations = 0;
  long restarts = 0;
  double sigma = 0.0;
  double lambda_a = 0.0;
  double seconds = 0.0;
  Mode mode = Mode::hpr;
  std::string note;
  std::vector<TraceRecord> trace;
  std::vector<RestartEvent> events;

  Iterate iterate() const { return Iterate{y, z, x}; }
};

/// Restarted, penalty-adaptive HPR driver. Termination is tested on the
/// w_bar sequence against the original problem data.
SolveResult solve(const LpProblem& prob, const SolverConfig& cfg = {});

struct ComplexityReport {
  double r0 = 0.0;               // ||w0 - w*||_M
  double kkt_constant = 0.0;     // (sigma (||A|| + ||sqrt T1||) + 1) / sqrt(sigma)
  double max_ratio_m = 0.0;      // max_k ||w_bar^{k+1} - w^k||_M / (R0/(k+1))
  double max_ratio_kkt = 0.0;    // max_k ||R(w_bar^{k+1})|| / (C R0/(k+1))
  double max_ratio_obj = 0.0;    // max over both sides of the objective-error bound
  long iterations = 0;
  long worst_k_m = -1;
  long worst_k_kkt = -1;
  long worst_k_obj = -1;

  double max_ratio() const;
};

/// Runs `iterations` unrestarted HPR steps at fixed sigma from w0 on `prob`
/// and compares, at every k, the three O(1/k) quantities against their
/// bounds computed from the reference point w_star. ||A|| and ||sqrt T1||
/// are both replaced by the upper bound sqrt(lambda_a).
ComplexityReport complexity_diagnostics(const LpProblem& prob, const EngineConfig& cfg,
                                        const Iterate& w0, const Iterate& w_star,
                                        long iterations);

}  // namespace hprlp

#endif  // HPRLP_SOLVER_HPP
