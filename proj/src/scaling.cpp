#include "hprlp/scaling.hpp"

#include <algorithm>
#include <cmath>

namespace hprlp {

Iterate ScaledProblem::scale(const Iterate& w) const {
  Iterate s = w;
  for (std::size_t i = 0; i < s.y.size(); ++i) s.y[i] = w.y[i] / row_scale[i];
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    s.x[j] = w.x[j] / col_scale[j];
    s.z[j] = w.z[j] * col_scale[j];
  }
  return s;
}

Iterate ScaledProblem::unscale(const Iterate& w) const {
  Iterate u = w;
  for (std::size_t i = 0; i < u.y.size(); ++i) u.y[i] = w.y[i] * row_scale[i];
  for (std::size_t j = 0; j < u.x.size(); ++j) {
    u.x[j] = w.x[j] * col_scale[j];
    u.z[j] = w.z[j] / col_scale[j];
  }
  return u;
}

ScaledProblem no_scaling(const LpProblem& prob) {
  return ScaledProblem{prob, Vector(static_cast<std::size_t>(prob.num_rows()), 1.0),
                       Vector(static_cast<std::size_t>(prob.num_cols()), 1.0)};
}

ScaledProblem apply_scaling(const LpProblem& prob, const ScalingOptions& opts) {
  const auto m = static_cast<std::size_t>(prob.num_rows());
  const auto n = static_cast<std::size_t>(prob.num_cols());
  Vector dr(m, 1.0), dc(n, 1.0);
  SparseMatrix a = prob.a;

  for (int it = 0; it < opts.ruiz_iterations; ++it) {
    Vector rmax(m, 0.0), cmax(n, 0.0);
    for (const auto& t : a.triplets()) {
      const double v = std::abs(t.value);
      rmax[static_cast<std::size_t>(t.row)] = std::max(rmax[static_cast<std::size_t>(t.row)], v);
      cmax[static_cast<std::size_t>(t.col)] = std::max(cmax[static_cast<std::size_t>(t.col)], v);
    }
    Vector r(m), s(n);
    for (std::size_t i = 0; i < m; ++i) r[i] = rmax[i] > 0.0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
    for (std::size_t j = 0; j < n; ++j) s[j] = cmax[j] > 0.0 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
    a = a.scaled(r, s);
    for (std::size_t i = 0; i < m; ++i) dr[i] *= r[i];
    for (std::size_t j = 0; j < n; ++j) dc[j] *= s[j];
  }

  if (opts.l2_column_pass) {
    Vector cnorm(n, 0.0);
    for (const auto& t : a.triplets()) cnorm[static_cast<std::size_t>(t.col)] += t.value * t.value;
    Vector s(n), r(m, 1.0);
    for (std::size_t j = 0; j < n; ++j) s[j] = cnorm[j] > 0.0 ? 1.0 / std::sqrt(std::sqrt(cnorm[j])) : 1.0;
    a = a.scaled(r, s);
    for (std::size_t j = 0; j < n; ++j) dc[j] *= s[j];
  }

  ScaledProblem out;
  out.problem = prob;
  out.problem.a = std::move(a);
  for (std::size_t j = 0; j < n; ++j) {
    out.problem.c[j] = prob.c[j] * dc[j];
    out.problem.col_lower[j] = prob.col_lower[j] / dc[j];
    out.problem.col_upper[j] = prob.col_upper[j] / dc[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    out.problem.row_lower[i] = prob.row_lower[i] * dr[i];
    out.problem.row_upper[i] = prob.row_upper[i] * dr[i];
  }
  out.row_scale = std::move(dr);
  out.col_scale = std::move(dc);
  return out;
}

}  // namespace hprlp
