#include "hprlp/lp_model.hpp"

#include <algorithm>
#include <cmath>

#include "hprlp/kernels.hpp"

namespace hprlp {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_span(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

void LpProblem::validate() const {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  require(c.size() == n, "LpProblem: len(c) != number of columns");
  require(row_lower.size() == m && row_upper.size() == m, "LpProblem: row bound length mismatch");
  require(col_lower.size() == n && col_upper.size() == n, "LpProblem: column bound length mismatch");
  require(finite_span(c), "LpProblem: objective has non-finite entries");
  require(std::isfinite(obj_constant), "LpProblem: non-finite objective constant");
  for (std::size_t i = 0; i < m; ++i) {
    require(!std::isnan(row_lower[i]) && !std::isnan(row_upper[i]), "LpProblem: NaN row bound");
    require(row_lower[i] <= row_upper[i], "LpProblem: row lower bound exceeds upper bound");
    require(row_lower[i] < kInf && row_upper[i] > -kInf, "LpProblem: row bounds exclude every value");
  }
  for (std::size_t j = 0; j < n; ++j) {
    require(!std::isnan(col_lower[j]) && !std::isnan(col_upper[j]), "LpProblem: NaN column bound");
    require(col_lower[j] <= col_upper[j], "LpProblem: column lower bound exceeds upper bound");
    require(col_lower[j] < kInf && col_upper[j] > -kInf, "LpProblem: column bounds exclude every value");
  }
}

LpProblem make_problem(Vector c, SparseMatrix a, Vector row_lower, Vector row_upper,
                       Vector col_lower, Vector col_upper, double obj_constant,
                       ObjSense sense) {
  LpProblem p{std::move(c),         std::move(a),         std::move(row_lower),
              std::move(row_upper), std::move(col_lower), std::move(col_upper),
              obj_constant,         sense};
  if (sense == ObjSense::maximize) {
    for (auto& e : p.c) e = -e;
    p.obj_constant = -p.obj_constant;
  }
  p.validate();
  return p;
}

Iterate Iterate::zeros(int m, int n) {
  return Iterate{Vector(static_cast<std::size_t>(m), 0.0), Vector(static_cast<std::size_t>(n), 0.0),
                 Vector(static_cast<std::size_t>(n), 0.0)};
}

bool Iterate::all_finite() const { return finite_span(y) && finite_span(z) && finite_span(x); }

double KktResidual::norm() const {
  return std::sqrt(primal_norm * primal_norm + dual_box_norm * dual_box_norm +
                   dual_eq_norm * dual_eq_norm);
}

double RelativeResiduals::max() const { return std::max({gap, primal, dual}); }

Vector project_box(std::span<const double> v, std::span<const double> lo,
                   std::span<const double> hi) {
  if (v.size() != lo.size() || v.size() != hi.size())
    throw std::invalid_argument("project_box: dimension mismatch");
  Vector out(v.size());
  kernels::project_box(v, lo, hi, out);
  return out;
}

KktResidual kkt_residual(const Iterate& w, const LpProblem& prob) {
  if (w.y.size() != static_cast<std::size_t>(prob.num_rows()) ||
      w.x.size() != static_cast<std::size_t>(prob.num_cols()) || w.z.size() != w.x.size())
    throw std::invalid_argument("kkt_residual: iterate does not match problem");
  if (!w.all_finite()) throw NumericalError("kkt_residual: iterate has non-finite entries");

  const Vector ax = spmv(prob.a, w.x);
  const Vector aty = spmv_t(prob.a, w.y);

  KktResidual r;
  r.primal = subtract(ax, project_box(subtract(ax, w.y), prob.row_lower, prob.row_upper));
  r.dual_box = subtract(w.x, project_box(subtract(w.x, w.z), prob.col_lower, prob.col_upper));
  r.dual_eq.resize(w.x.size());
  for (std::size_t j = 0; j < w.x.size(); ++j) r.dual_eq[j] = prob.c[j] - aty[j] - w.z[j];
  r.primal_norm = kernels::norm2(r.primal);
  r.dual_box_norm = kernels::norm2(r.dual_box);
  r.dual_eq_norm = kernels::norm2(r.dual_eq);
  return r;
}

double box_support(std::span<const double> s, std::span<const double> lo,
                   std::span<const double> hi) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] > 0.0) {
      if (hi[i] == kInf) return kInf;
      total += hi[i] * s[i];
    } else if (s[i] < 0.0) {
      if (lo[i] == -kInf) return kInf;
      total += lo[i] * s[i];
    }
  }
  return total;
}

double dual_objective(std::span<const double> y, std::span<const double> z,
                      const LpProblem& prob) {
  Vector neg_y(y.size()), neg_z(z.size());
  for (std::size_t i = 0; i < y.size(); ++i) neg_y[i] = -y[i];
  for (std::size_t j = 0; j < z.size(); ++j) neg_z[j] = -z[j];
  const double k_part = box_support(neg_y, prob.row_lower, prob.row_upper);
  if (k_part == kInf) return kInf;
  const double c_part = box_support(neg_z, prob.col_lower, prob.col_upper);
  if (c_part == kInf) return kInf;
  return k_part + c_part;
}

double primal_objective(std::span<const double> x, const LpProblem& prob) {
  return kernels::dot(prob.c, x) + prob.obj_constant;
}

RelativeResiduals relative_residuals(const Iterate& w, const LpProblem& prob) {
  const Vector ax = spmv(prob.a, w.x);
  const Vector aty = spmv_t(prob.a, w.y);
  return relative_residuals(w, ax, aty, prob);
}

RelativeResiduals relative_residuals(const Iterate& w, std::span<const double> ax,
                                     std::span<const double> aty, const LpProblem& prob) {
  RelativeResiduals rr;

  const double dobj = dual_objective(w.y, w.z, prob);
  if (dobj == kInf) {
    rr.gap = kInf;
  } else {
    const double pval = primal_objective(w.x, prob);
    const double dval = -dobj + prob.obj_constant;
    rr.gap = std::abs(dval - pval) / (1.0 + std::abs(dval) + std::abs(pval));
  }

  const std::size_t m = ax.size();
  Vector viol(m), bbar(m);
  for (std::size_t i = 0; i < m; ++i) {
    viol[i] = ax[i] - std::min(std::max(ax[i], prob.row_lower[i]), prob.row_upper[i]);
    const double lo = std::isfinite(prob.row_lower[i]) ? std::abs(prob.row_lower[i]) : 0.0;
    const double hi = std::isfinite(prob.row_upper[i]) ? std::abs(prob.row_upper[i]) : 0.0;
    bbar[i] = std::max(lo, hi);
  }
  rr.primal = kernels::norm2(viol) / (1.0 + kernels::norm2(bbar));

  Vector deq(w.x.size());
  for (std::size_t j = 0; j < deq.size(); ++j) deq[j] = prob.c[j] - aty[j] - w.z[j];
  rr.dual = kernels::norm2(deq) / (1.0 + kernels::norm2(prob.c));
  return rr;
}

}  // namespace hprlp
