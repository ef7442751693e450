#include <cmath>
#include <limits>

#include "hprlp/kernels.hpp"
#include "hprlp/solver.hpp"

namespace hprlp {

namespace {

double ratio(double value, double bound) {
  if (bound > 0.0) return value / bound;
  return value <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double m_distance(const Iterate& a, const Iterate& b, const MNormContext& ctx) {
  Vector dy(a.y.size()), dx(a.x.size());
  for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = a.y[i] - b.y[i];
  for (std::size_t j = 0; j < dx.size(); ++j) dx[j] = a.x[j] - b.x[j];
  return m_norm(dy, dx, spmv_t(*ctx.a, dy), ctx);
}

}  // namespace

ComplexityReport complexity_diagnostics(const LpProblem& prob, const EngineConfig& cfg,
                                        const Iterate& w0, const Iterate& w_star,
                                        long iterations) {
  EngineConfig ec = cfg;
  ec.mode = Mode::hpr;
  ec.t1_zero_path = false;
  ec.validate();
  const MNormContext ctx{ec.sigma, ec.lambda_a, &prob.a, false};

  ComplexityReport rep;
  rep.iterations = iterations;
  rep.r0 = m_distance(w0, w_star, ctx);
  const double sqrt_lambda = std::sqrt(ec.lambda_a);
  const double sqrt_sigma = std::sqrt(ec.sigma);
  rep.kkt_constant = (ec.sigma * (sqrt_lambda + sqrt_lambda) + 1.0) / sqrt_sigma;
  const double xstar_term = kernels::norm2(w_star.x) / sqrt_sigma;
  const double dual_star = dual_objective(w_star.y, w_star.z, prob);

  Iterate w = w0;
  for (long k = 0; k < iterations; ++k) {
    const PrStepTrace tr = pr_step(w, prob, ec);
    const double bound = rep.r0 / static_cast<double>(k + 1);

    const double rm = ratio(m_distance(tr.w_bar, w, ctx), bound);
    if (rm > rep.max_ratio_m) {
      rep.max_ratio_m = rm;
      rep.worst_k_m = k;
    }

    const double kkt = kkt_residual(tr.w_bar, prob).norm();
    const double rk = ratio(kkt, rep.kkt_constant * bound);
    if (rk > rep.max_ratio_kkt) {
      rep.max_ratio_kkt = rk;
      rep.worst_k_kkt = k;
    }

    const double h = dual_objective(tr.w_bar.y, tr.w_bar.z, prob) - dual_star;
    double ro = 0.0;
    if (h > 0.0) ro = ratio(h, (3.0 * rep.r0 + xstar_term) * bound);
    else if (h < 0.0) ro = ratio(-h, xstar_term * bound);
    if (ro > rep.max_ratio_obj) {
      rep.max_ratio_obj = ro;
      rep.worst_k_obj = k;
    }

    w = halpern_step(w0, tr.w_hat, k);
  }
  return rep;
}

}  // namespace hprlp
