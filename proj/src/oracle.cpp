#include "hprlp/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>

namespace hprlp {

std::string_view to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::optimal: return "optimal";
    case OracleStatus::infeasible: return "infeasible";
    case OracleStatus::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kBox = 1e6;
constexpr double kFeasTol = 1e-9;

// min <c,x> s.t. rl <= A x <= ru (entries may be infinite), vl <= x <= vu (finite).
struct DenseLp {
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
  Vector rl, ru, vl, vu;
};

struct Hyperplane {
  Eigen::RowVectorXd normal;
  Vector values;  // finite right-hand sides this hyperplane may take
};

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kFeasTol) return true;
    if (a[i] > b[i] + kFeasTol) return false;
  }
  return false;
}

bool within(double v, double lo, double hi) {
  return v >= lo - kFeasTol * (1.0 + std::abs(lo)) && v <= hi + kFeasTol * (1.0 + std::abs(hi));
}

bool feasible(const DenseLp& lp, const Eigen::VectorXd& x) {
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (!within(x[j], lp.vl[j], lp.vu[j])) return false;
  const Eigen::VectorXd ax = lp.a * x;
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    const double lo = lp.rl[i], hi = lp.ru[i];
    if (ax[i] < lo - kFeasTol * (1.0 + (std::isfinite(lo) ? std::abs(lo) : 0.0))) return false;
    if (ax[i] > hi + kFeasTol * (1.0 + (std::isfinite(hi) ? std::abs(hi) : 0.0))) return false;
  }
  return true;
}

void add_values(Vector& out, double lo, double hi) {
  if (std::isfinite(lo)) out.push_back(lo);
  if (std::isfinite(hi) && hi != lo) out.push_back(hi);
}

std::optional<Eigen::VectorXd> best_vertex(const DenseLp& lp) {
  const auto n = static_cast<int>(lp.c.size());
  const auto m = static_cast<int>(lp.a.rows());
  if (n == 0) {
    Eigen::VectorXd x(0);
    if (feasible(lp, x)) return x;
    return std::nullopt;
  }

  std::vector<Hyperplane> planes;
  for (int i = 0; i < m; ++i) {
    Hyperplane h{lp.a.row(i), {}};
    add_values(h.values, lp.rl[i], lp.ru[i]);
    if (!h.values.empty()) planes.push_back(std::move(h));
  }
  for (int j = 0; j < n; ++j) {
    Hyperplane h{Eigen::RowVectorXd::Unit(n, j), {}};
    add_values(h.values, lp.vl[j], lp.vu[j]);
    planes.push_back(std::move(h));
  }
  const int total = static_cast<int>(planes.size());

  std::optional<Eigen::VectorXd> best;
  double best_obj = 0.0;
  auto consider = [&](const Eigen::VectorXd& x) {
    if (!feasible(lp, x)) return;
    const double obj = lp.c.dot(x);
    const double tie = kFeasTol * (1.0 + std::abs(best_obj));
    if (!best || obj < best_obj - tie || (obj <= best_obj + tie && lex_less(x, *best))) {
      if (!best || obj < best_obj) best_obj = obj;
      best = x;
    }
  };

  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd basis(n, n);
  Eigen::VectorXd rhs(n);
  std::vector<std::size_t> side(static_cast<std::size_t>(n));
  while (true) {
    for (int r = 0; r < n; ++r) basis.row(r) = planes[static_cast<std::size_t>(pick[r])].normal;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.isInvertible()) {
      std::fill(side.begin(), side.end(), 0);
      while (true) {
        for (int r = 0; r < n; ++r)
          rhs[r] = planes[static_cast<std::size_t>(pick[r])].values[side[static_cast<std::size_t>(r)]];
        consider(lu.solve(rhs));
        int r = 0;
        for (; r < n; ++r) {
          auto& s = side[static_cast<std::size_t>(r)];
          if (++s < planes[static_cast<std::size_t>(pick[r])].values.size()) break;
          s = 0;
        }
        if (r == n) break;
      }
    }
    // next n-subset of [0, total)
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - n + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

OracleSolution oracle_solve(const LpProblem& prob) {
  prob.validate();
  const int m = prob.num_rows();
  const int n = prob.num_cols();
  if (m > kOracleMaxDim || n > kOracleMaxDim)
    throw std::invalid_argument("oracle_solve: dimensions exceed " + std::to_string(kOracleMaxDim));

  DenseLp lp;
  lp.c = Eigen::Map<const Eigen::VectorXd>(prob.c.data(), n);
  lp.a = Eigen::MatrixXd::Zero(m, n);
  for (const auto& t : prob.a.triplets()) lp.a(t.row, t.col) = t.value;
  lp.rl = prob.row_lower;
  lp.ru = prob.row_upper;
  lp.vl.resize(static_cast<std::size_t>(n));
  lp.vu.resize(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < lp.vl.size(); ++j) {
    lp.vl[j] = std::isfinite(prob.col_lower[j]) ? prob.col_lower[j] : -kBox;
    lp.vu[j] = std::isfinite(prob.col_upper[j]) ? prob.col_upper[j] : kBox;
  }

  OracleSolution sol;
  const auto vertex = best_vertex(lp);
  if (!vertex) {
    sol.status = OracleStatus::infeasible;
    return sol;
  }

  // Recession cone intersected with the unit box; d = 0 is always feasible.
  DenseLp rec = lp;
  for (std::size_t i = 0; i < rec.rl.size(); ++i) {
    rec.rl[i] = std::isfinite(prob.row_lower[i]) ? 0.0 : -kInf;
    rec.ru[i] = std::isfinite(prob.row_upper[i]) ? 0.0 : kInf;
  }
  for (std::size_t j = 0; j < rec.vl.size(); ++j) {
    rec.vl[j] = std::isfinite(prob.col_lower[j]) ? 0.0 : -1.0;
    rec.vu[j] = std::isfinite(prob.col_upper[j]) ? 0.0 : 1.0;
  }
  const auto dir = best_vertex(rec);
  if (dir && lp.c.dot(*dir) < -kFeasTol * (1.0 + lp.c.norm())) {
    sol.status = OracleStatus::unbounded;
    return sol;
  }

  sol.status = OracleStatus::optimal;
  sol.x.assign(vertex->data(), vertex->data() + n);
  sol.obj = prob.report_sign() * primal_objective(sol.x, prob);
  return sol;
}

}  // namespace hprlp
