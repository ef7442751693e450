#include "hprlp/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hprlp/kernels.hpp"

namespace hprlp {

double m_inner(std::span<const double> y, std::span<const double> x,
               std::span<const double> aty, const MNormContext& ctx) {
  const double yy = ctx.t1_zero ? kernels::dot(aty, aty) : ctx.lambda_a * kernels::dot(y, y);
  return ctx.sigma * yy + 2.0 * kernels::dot(aty, x) + kernels::dot(x, x) / ctx.sigma;
}

double m_norm(std::span<const double> y, std::span<const double> x,
              std::span<const double> aty, const MNormContext& ctx) {
  return std::sqrt(std::max(0.0, m_inner(y, x, aty, ctx)));
}

double m_norm(const Iterate& w, const MNormContext& ctx) {
  if (ctx.a == nullptr) throw std::invalid_argument("m_norm: context has no matrix");
  const Vector aty = spmv_t(*ctx.a, w.y);
  return m_norm(w.y, w.x, aty, ctx);
}

void RestartConfig::validate() const {
  if (!(alpha1 > 0.0 && alpha1 < alpha2 && alpha2 < 1.0))
    throw std::invalid_argument("RestartConfig: need 0 < alpha1 < alpha2 < 1");
  if (!(alpha3 > 0.0 && alpha3 < 1.0)) throw std::invalid_argument("RestartConfig: need 0 < alpha3 < 1");
  if (fixed_period && *fixed_period < 1) throw std::invalid_argument("RestartConfig: fixed period must be >= 1");
  if (check_interval < 1) throw std::invalid_argument("RestartConfig: check interval must be >= 1");
}

std::string_view to_string(RestartReason reason) {
  switch (reason) {
    case RestartReason::none: return "none";
    case RestartReason::sufficient: return "sufficient";
    case RestartReason::necessary_no_progress: return "necessary_no_progress";
    case RestartReason::long_loop: return "long_loop";
    case RestartReason::fixed: return "fixed";
  }
  return "?";
}

RestartReason check_restart(double merit0, double merit_prev, double merit_curr, long t,
                            long k, const RestartConfig& cfg) {
  if (cfg.enabled) {
    if (merit_curr <= cfg.alpha1 * merit0) return RestartReason::sufficient;
    if (merit_curr <= cfg.alpha2 * merit0 && merit_curr > merit_prev)
      return RestartReason::necessary_no_progress;
    if (static_cast<double>(t) >= cfg.alpha3 * static_cast<double>(k)) return RestartReason::long_loop;
  }
  if (cfg.fixed_period && t >= *cfg.fixed_period) return RestartReason::fixed;
  return RestartReason::none;
}

SigmaUpdateInputs sigma_inputs(const Iterate& w_bar, const Iterate& w0, const MNormContext& ctx) {
  SigmaUpdateInputs in;
  Vector dx(w_bar.x.size()), dy(w_bar.y.size());
  for (std::size_t j = 0; j < dx.size(); ++j) dx[j] = w_bar.x[j] - w0.x[j];
  for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = w_bar.y[i] - w0.y[i];
  in.delta_x = kernels::norm2(dx);
  if (ctx.t1_zero) {
    if (ctx.a == nullptr) throw std::invalid_argument("sigma_inputs: context has no matrix");
    in.delta_y = kernels::norm2(spmv_t(*ctx.a, dy));
  } else {
    in.delta_y = std::sqrt(ctx.lambda_a) * kernels::norm2(dy);
  }
  in.x_scale = kernels::norm2(w_bar.x);
  in.y_scale = kernels::norm2(w_bar.y);
  return in;
}

double sigma_update(const SigmaUpdateInputs& in, double sigma_prev, const SigmaBounds& bounds) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (!(in.delta_x > eps * (1.0 + in.x_scale)) || !(in.delta_y > eps * (1.0 + in.y_scale)))
    return sigma_prev;
  const double s = in.delta_x / in.delta_y;
  if (!std::isfinite(s)) return sigma_prev;
  return std::clamp(s, bounds.min, bounds.max);
}

}  // namespace hprlp
