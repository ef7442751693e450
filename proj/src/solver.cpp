#include "hprlp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "hprlp/kernels.hpp"

namespace hprlp {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (check_interval < 1) throw std::invalid_argument("SolverConfig: check_interval must be >= 1");
  if (iter_limit < 1) throw std::invalid_argument("SolverConfig: iter_limit must be >= 1");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("SolverConfig: sigma0 must be > 0");
  if (!(lambda_safety >= 1.0)) throw std::invalid_argument("SolverConfig: lambda_safety must be >= 1");
  if (!(sigma_bounds.min > 0.0 && sigma_bounds.min <= sigma_bounds.max))
    throw std::invalid_argument("SolverConfig: bad sigma bounds");
  if (lambda_a && !(*lambda_a > 0.0)) throw std::invalid_argument("SolverConfig: lambda_a must be > 0");
  restart.validate();
  EngineConfig e = engine;
  e.sigma = sigma0;
  e.validate();
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::iter_limit: return "iter_limit";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::numerical_error: return "numerical_error";
  }
  return "?";
}

std::optional<SolveStatus> parse_status(std::string_view name) {
  for (auto s : {SolveStatus::optimal, SolveStatus::iter_limit, SolveStatus::time_limit,
                 SolveStatus::numerical_error})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// out = (1 + rho) bar - rho base
void reflect_into(const Vector& bar, const Vector& base, double rho, Vector& out) {
  out.resize(bar.size());
  for (std::size_t i = 0; i < bar.size(); ++i) out[i] = (1.0 + rho) * bar[i] - rho * base[i];
}

double max_abs(const Iterate& w) {
  double s = 0.0;
  for (const Vector* v : {&w.y, &w.z, &w.x})
    for (double e : *v) s = std::max(s, std::abs(e));
  return s;
}

// ||w - w_hat||_M from maintained products.
double merit_of(const Iterate& w, const Products& wp, const Iterate& w_hat, const Products& hp,
                const MNormContext& ctx, Vector& dy, Vector& dx, Vector& daty) {
  dy.resize(w.y.size());
  dx.resize(w.x.size());
  daty.resize(w.x.size());
  for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = w.y[i] - w_hat.y[i];
  for (std::size_t j = 0; j < dx.size(); ++j) {
    dx[j] = w.x[j] - w_hat.x[j];
    daty[j] = wp.aty[j] - hp.aty[j];
  }
  return m_norm(dy, dx, daty, ctx);
}

bool equality_rows_only(const LpProblem& p) {
  for (std::size_t i = 0; i < p.row_lower.size(); ++i)
    if (p.row_lower[i] != p.row_upper[i]) return false;
  return true;
}

}  // namespace

SolveResult solve(const LpProblem& prob, const SolverConfig& cfg) {
  const auto start = Clock::now();
  cfg.validate();
  prob.validate();

  const ScaledProblem sp =
      cfg.scaling == ScalingMode::ruiz ? apply_scaling(prob, cfg.scaling_options) : no_scaling(prob);
  const LpProblem& P = sp.problem;
  const int m = P.num_rows();
  const int n = P.num_cols();

  SolveResult res;
  res.mode = cfg.engine.mode;

  EngineConfig ec = cfg.engine;
  ec.sigma = cfg.sigma0;

  std::unique_ptr<NormalEquationSolver> factor;
  if (ec.t1_zero_path) {
    if (!equality_rows_only(P)) {
      ec.t1_zero_path = false;
      res.note = "T1=0 path needs equality rows only; using lambda_A path";
    } else {
      try {
        factor = std::make_unique<NormalEquationSolver>(P.a);
      } catch (const std::exception& e) {
        ec.t1_zero_path = false;
        res.note = std::string(e.what()) + "; using lambda_A path";
      }
    }
  }

  if (cfg.lambda_a) {
    ec.lambda_a = *cfg.lambda_a;
  } else if (P.a.nnz() > 0) {
    PowerIterationOptions po;
    po.safety = cfg.lambda_safety;
    ec.lambda_a = estimate_lambda_a(P.a, po);
  } else {
    ec.lambda_a = 1.0;  // no coupling; any positive value is admissible
  }
  res.lambda_a = ec.lambda_a;

  MNormContext ctx{ec.sigma, ec.lambda_a, &P.a, ec.t1_zero_path};
  const bool epr = ec.mode == Mode::epr;
  const double rho = ec.reflection();

  Iterate w = cfg.initial_point ? sp.scale(*cfg.initial_point) : Iterate::zeros(m, n);
  if (w.y.size() != static_cast<std::size_t>(m) || w.x.size() != static_cast<std::size_t>(n) ||
      w.z.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("solve: initial point does not match problem");
  Products wp = Products::of(w, P);
  Iterate anchor = w;
  Products ap = wp;

  PrStepTrace tr;
  Products bp, hp;
  Iterate w_next;
  Products np;
  EprAverages avg;
  if (epr) avg.iter.add(w);

  Iterate best;
  RelativeResiduals best_rr{kInf, kInf, kInf};
  bool have_best = false;

  long k = 0, r = 0, t = 0;
  double merit0 = 0.0, merit_prev_check = 0.0, merit = 0.0;
  Vector dy, dx, daty;

  auto current_bar = [&]() -> const Iterate& { return epr ? avg.bar.mean() : tr.w_bar; };

  auto evaluate = [&](const Iterate& scaled_bar) {
    Iterate u = sp.unscale(scaled_bar);
    const RelativeResiduals rr = relative_residuals(u, prob);
    if (!have_best || rr.max() < best_rr.max()) {
      best = u;
      best_rr = rr;
      have_best = true;
    }
    return std::pair{std::move(u), rr};
  };

  auto record = [&](const RelativeResiduals& rr) {
    if (!cfg.record_trace) return;
    res.trace.push_back(TraceRecord{k, r, t, ec.sigma, rr.gap, rr.primal, rr.dual, merit,
                                    seconds_since(start)});
  };

  std::optional<Iterate> final_point;
  res.status = SolveStatus::iter_limit;

  try {
    while (true) {
      pr_step(w, wp, P, ec, factor.get(), tr, bp);
      reflect_into(bp.ax, wp.ax, rho, hp.ax);
      reflect_into(bp.aty, wp.aty, rho, hp.aty);

      if (!epr) {
        merit = merit_of(w, wp, tr.w_hat, hp, ctx, dy, dx, daty);
      } else if (t == 0) {
        merit = merit_of(w, wp, tr.w_hat, hp, ctx, dy, dx, daty);
      }
      if (t == 0) {
        merit0 = merit;
        merit_prev_check = merit;
      }

      if (ec.anchored()) {
        halpern_step_inplace(anchor, tr.w_hat, t, w_next);
        np.ax.resize(hp.ax.size());
        np.aty.resize(hp.aty.size());
        halpern_combine(ap.ax, hp.ax, t, np.ax);
        halpern_combine(ap.aty, hp.aty, t, np.aty);
        std::swap(w, w_next);
        std::swap(wp, np);
      } else {
        std::swap(w, tr.w_hat);
        std::swap(wp, hp);
      }
      if (epr) avg.accumulate(tr.w_bar, w);
      ++t;
      ++k;

      if (k % cfg.check_interval == 0 || k >= cfg.iter_limit) {
        auto [u, rr] = evaluate(current_bar());
        record(rr);
        if (rr.within(cfg.tol)) {
          res.status = SolveStatus::optimal;
          final_point = std::move(u);
          break;
        }
        if (max_abs(w) > cfg.divergence_threshold) {
          res.status = SolveStatus::numerical_error;
          res.note = "iterates diverged";
          break;
        }
        if (k >= cfg.iter_limit) {
          res.status = SolveStatus::iter_limit;
          break;
        }
        if (seconds_since(start) > cfg.time_limit) {
          res.status = SolveStatus::time_limit;
          break;
        }
      }

      RestartReason reason = RestartReason::none;
      const bool adaptive_check = cfg.restart.enabled && t % cfg.restart.check_interval == 0;
      if (adaptive_check) {
        if (epr) {
          // merit of the averaged point: one extra splitting step
          const Iterate& wa = avg.iter.mean();
          const Products wap = Products::of(wa, P);
          PrStepTrace probe;
          Products pb, ph;
          pr_step(wa, wap, P, ec, factor.get(), probe, pb);
          reflect_into(pb.ax, wap.ax, rho, ph.ax);
          reflect_into(pb.aty, wap.aty, rho, ph.aty);
          merit = merit_of(wa, wap, probe.w_hat, ph, ctx, dy, dx, daty);
        }
        reason = check_restart(merit0, merit_prev_check, merit, t, k, cfg.restart);
        merit_prev_check = merit;
      } else if (cfg.restart.fixed_period && t >= *cfg.restart.fixed_period) {
        reason = RestartReason::fixed;
      }

      if (reason != RestartReason::none) {
        const Iterate& bar = current_bar();
        const double sigma_before = ec.sigma;
        double sigma_after = sigma_before;
        if (cfg.adaptive_sigma)
          sigma_after = sigma_update(sigma_inputs(bar, anchor, ctx), sigma_before, cfg.sigma_bounds);
        res.events.push_back(RestartEvent{k, r, t, reason, sigma_before, sigma_after, merit});
        if (cfg.record_trace) {
          auto [u, rr] = evaluate(bar);
          record(rr);
        }
        anchor = bar;
        ap = epr ? Products::of(anchor, P) : bp;
        w = anchor;
        wp = ap;
        ec.sigma = sigma_after;
        ctx.sigma = sigma_after;
        ++r;
        t = 0;
        if (epr) {
          avg.bar.reset();
          avg.iter.reset();
          avg.iter.add(w);
        }
      }
    }
  } catch (const NumericalError& e) {
    res.status = SolveStatus::numerical_error;
    res.note = e.what();
  }

  const Iterate out = final_point ? *final_point : (have_best ? best : sp.unscale(w));
  res.x = out.x;
  res.y = out.y;
  res.z = out.z;
  res.residuals = relative_residuals(out, prob);
  const double sign = prob.report_sign();
  res.primal_obj = sign * primal_objective(out.x, prob);
  const double dobj = dual_objective(out.y, out.z, prob);
  res.dual_obj = sign * (dobj == kInf ? -kInf : -dobj + prob.obj_constant);
  res.iterations = k;
  res.restarts = r;
  res.sigma = ec.sigma;
  res.seconds = seconds_since(start);
  return res;
}

double ComplexityReport::max_ratio() const {
  return std::max({max_ratio_m, max_ratio_kkt, max_ratio_obj});
}

}  // namespace hprlp
