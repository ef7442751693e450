#include "hprlp/engine.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "hprlp/kernels.hpp"
#include "parallel_for.hpp"

namespace hprlp {

namespace {

using Index = std::int64_t;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

bool finite_all(std::span<const double> v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

void check_dims(const Iterate& w, const LpProblem& prob) {
  const auto m = static_cast<std::size_t>(prob.num_rows());
  const auto n = static_cast<std::size_t>(prob.num_cols());
  if (w.y.size() != m || w.z.size() != n || w.x.size() != n)
    throw std::invalid_argument("iterate does not match problem dimensions");
}

// out = (1 + rho) bar - rho base
void reflect(std::span<const double> bar, std::span<const double> base, double rho,
             std::span<double> out) {
  const Index n = static_cast<Index>(out.size());
  detail::parallel_for(n, out.size() >= kernels::kParallelMinSize,
                       [&](Index i) { out[i] = (1.0 + rho) * bar[i] - rho * base[i]; });
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::hpr: return "hpr";
    case Mode::hdr: return "hdr";
    case Mode::pr: return "pr";
    case Mode::epr: return "epr";
    case Mode::rhpdhg: return "rhpdhg";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::hpr, Mode::hdr, Mode::pr, Mode::epr, Mode::rhpdhg})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

double EngineConfig::reflection() const {
  switch (mode) {
    case Mode::hdr: return 0.0;
    case Mode::rhpdhg: return gamma;
    default: return 1.0;
  }
}

void EngineConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("EngineConfig: sigma must be > 0");
  if (!t1_zero_path && (!(lambda_a > 0.0) || !std::isfinite(lambda_a)))
    throw std::invalid_argument("EngineConfig: lambda_a must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("EngineConfig: gamma must lie in [0, 1]");
}

Products Products::of(const Iterate& w, const LpProblem& prob) {
  return Products{spmv(prob.a, w.x), spmv_t(prob.a, w.y)};
}

// ---------------------------------------------------------------------------
// T1 = 0 path

struct NormalEquationSolver::Impl {
  const SparseMatrix* a = nullptr;
  Eigen::MatrixXd gram;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

NormalEquationSolver::NormalEquationSolver(const SparseMatrix& a, int max_rows)
    : impl_(std::make_unique<Impl>()) {
  const int m = a.rows();
  if (m > max_rows)
    throw std::invalid_argument("NormalEquationSolver: " + std::to_string(m) +
                                " rows exceeds dense limit " + std::to_string(max_rows));
  impl_->a = &a;
  Eigen::MatrixXd& g = impl_->gram;
  g = Eigen::MatrixXd::Zero(m, m);
  // A A^T accumulated column by column.
  for (int j = 0; j < a.cols(); ++j) {
    const auto lo = a.col_ptr()[j], hi = a.col_ptr()[j + 1];
    for (auto p = lo; p < hi; ++p)
      for (auto q = lo; q < hi; ++q)
        g(a.row_idx()[p], a.row_idx()[q]) += a.csc_values()[p] * a.csc_values()[q];
  }
  impl_->llt.compute(g);
  if (impl_->llt.info() != Eigen::Success)
    throw std::runtime_error("NormalEquationSolver: A A^T is singular");
  const Eigen::MatrixXd l = impl_->llt.matrixL();
  const double dmax = l.diagonal().cwiseAbs().maxCoeff();
  const double dmin = l.diagonal().cwiseAbs().minCoeff();
  if (m > 0 && !(dmin > 1e-7 * dmax))
    throw std::runtime_error("NormalEquationSolver: A A^T is numerically singular");
}

NormalEquationSolver::~NormalEquationSolver() = default;
NormalEquationSolver::NormalEquationSolver(NormalEquationSolver&&) noexcept = default;
NormalEquationSolver& NormalEquationSolver::operator=(NormalEquationSolver&&) noexcept = default;

Vector NormalEquationSolver::solve(std::span<const double> rhs) const {
  const auto m = static_cast<Eigen::Index>(rhs.size());
  if (m != impl_->gram.rows()) throw std::invalid_argument("NormalEquationSolver::solve: size mismatch");
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), m);
  const Eigen::VectorXd y = impl_->llt.solve(b);
  const double res = (impl_->gram * y - b).norm();
  if (!(res <= 1e-10 * (1.0 + b.norm())))
    throw std::runtime_error("NormalEquationSolver: residual check failed");
  return Vector(y.data(), y.data() + m);
}

Vector y_update_t1_zero(std::span<const double> z_bar, std::span<const double> x_bar,
                        const LpProblem& prob, double sigma,
                        const NormalEquationSolver& factor) {
  const auto m = static_cast<std::size_t>(prob.num_rows());
  for (std::size_t i = 0; i < m; ++i)
    if (prob.row_lower[i] != prob.row_upper[i])
      throw std::invalid_argument("y_update_t1_zero: requires equality rows only");
  Vector v(x_bar.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = x_bar[j] + sigma * (z_bar[j] - prob.c[j]);
  Vector rhs = spmv(prob.a, v);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = (prob.row_lower[i] - rhs[i]) / sigma;
  return factor.solve(rhs);
}

// ---------------------------------------------------------------------------
// splitting step

void pr_step(const Iterate& w, const Products& wp, const LpProblem& prob,
             const EngineConfig& cfg, const NormalEquationSolver* factor, PrStepTrace& out,
             Products& bar) {
  const auto m = static_cast<std::size_t>(prob.num_rows());
  const auto n = static_cast<std::size_t>(prob.num_cols());
  const double sigma = cfg.sigma;
  const double rho = cfg.reflection();

  out.xi.resize(n);
  out.w_bar.x.resize(n);
  out.w_bar.z.resize(n);
  out.w_bar.y.resize(m);
  out.w_hat.x.resize(n);
  out.w_hat.z.resize(n);
  out.w_hat.y.resize(m);
  bar.ax.resize(m);
  bar.aty.resize(n);

  {
    const Index nn = static_cast<Index>(n);
    const double* x = w.x.data();
    const double* aty = wp.aty.data();
    const double* c = prob.c.data();
    const double* lo = prob.col_lower.data();
    const double* hi = prob.col_upper.data();
    detail::parallel_for(nn, n >= kernels::kParallelMinSize, [&](Index j) {
      const double xi = x[j] + sigma * (aty[j] - c[j]);
      const double xb = clamp(xi, lo[j], hi[j]);
      out.xi[j] = xi;
      out.w_bar.x[j] = xb;
      out.w_bar.z[j] = (xb - xi) / sigma;
    });
  }

  spmv(prob.a, out.w_bar.x, bar.ax);

  if (cfg.t1_zero_path) {
    if (factor == nullptr) throw std::invalid_argument("pr_step: T1 = 0 path needs a factorization");
    out.zeta.clear();
    out.w_bar.y = y_update_t1_zero(out.w_bar.z, out.w_bar.x, prob, sigma, *factor);
  } else {
    out.zeta.resize(m);
    const double sl = sigma * cfg.lambda_a;
    const Index mm = static_cast<Index>(m);
    detail::parallel_for(mm, m >= kernels::kParallelMinSize, [&](Index i) {
      const double zeta = 2.0 * bar.ax[i] - wp.ax[i] - sl * w.y[i];
      out.zeta[i] = zeta;
      out.w_bar.y[i] = (clamp(zeta, prob.row_lower[i], prob.row_upper[i]) - zeta) / sl;
    });
  }

  spmv_t(prob.a, out.w_bar.y, bar.aty);

  reflect(out.w_bar.y, w.y, rho, out.w_hat.y);
  reflect(out.w_bar.z, w.z, rho, out.w_hat.z);
  reflect(out.w_bar.x, w.x, rho, out.w_hat.x);

  if (!finite_all(out.w_hat.y) || !finite_all(out.w_hat.x) || !finite_all(out.w_hat.z))
    throw NumericalError("pr_step: non-finite iterate (divergence)");
}

PrStepTrace pr_step(const Iterate& w, const LpProblem& prob, const EngineConfig& cfg,
                    const NormalEquationSolver* factor) {
  check_dims(w, prob);
  cfg.validate();
  if (!w.all_finite()) throw NumericalError("pr_step: input iterate has non-finite entries");
  PrStepTrace out;
  Products bar;
  pr_step(w, Products::of(w, prob), prob, cfg, factor, out, bar);
  return out;
}

void halpern_combine(std::span<const double> anchor, std::span<const double> v, long t,
                     std::span<double> out) {
  const double a = 1.0 / static_cast<double>(t + 2);
  const double b = static_cast<double>(t + 1) / static_cast<double>(t + 2);
  const Index n = static_cast<Index>(out.size());
  detail::parallel_for(n, out.size() >= kernels::kParallelMinSize,
                       [&](Index i) { out[i] = a * anchor[i] + b * v[i]; });
}

void halpern_step_inplace(const Iterate& w0, const Iterate& w_hat, long t, Iterate& out) {
  out.y.resize(w_hat.y.size());
  out.z.resize(w_hat.z.size());
  out.x.resize(w_hat.x.size());
  halpern_combine(w0.y, w_hat.y, t, out.y);
  halpern_combine(w0.z, w_hat.z, t, out.z);
  halpern_combine(w0.x, w_hat.x, t, out.x);
}

Iterate halpern_step(const Iterate& w0, const Iterate& w_hat, long t) {
  if (t < 0) throw std::invalid_argument("halpern_step: t must be >= 0");
  if (w0.y.size() != w_hat.y.size() || w0.z.size() != w_hat.z.size() || w0.x.size() != w_hat.x.size())
    throw std::invalid_argument("halpern_step: size mismatch");
  Iterate out;
  halpern_step_inplace(w0, w_hat, t, out);
  return out;
}

void RunningMean::add(const Iterate& sample) {
  ++count_;
  if (count_ == 1) {
    mean_ = sample;
    return;
  }
  const double inv = 1.0 / static_cast<double>(count_);
  auto upd = [inv](Vector& mean, const Vector& v) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (v[i] - mean[i]) * inv;
  };
  upd(mean_.y, sample.y);
  upd(mean_.z, sample.z);
  upd(mean_.x, sample.x);
}

// ---------------------------------------------------------------------------
// reflected Halpern PDHG

PrimalDualPair rhpdhg_step(const PrimalDualPair& u, const PrimalDualPair& u0,
                           const LpProblem& prob, double eta, double omega, double gamma,
                           long k) {
  if (!(eta > 0.0) || !(omega > 0.0)) throw std::invalid_argument("rhpdhg_step: eta, omega must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("rhpdhg_step: gamma must lie in [0, 1]");
  const auto m = static_cast<std::size_t>(prob.num_rows());
  const auto n = static_cast<std::size_t>(prob.num_cols());
  if (u.y.size() != m || u.x.size() != n || u0.y.size() != m || u0.x.size() != n)
    throw std::invalid_argument("rhpdhg_step: dimension mismatch");

  const double tau = eta / omega;    // primal step
  const double theta = eta * omega;  // dual step

  const Vector aty = spmv_t(prob.a, u.y);
  Vector x_bar(n), x_ext(n);
  for (std::size_t j = 0; j < n; ++j) {
    x_bar[j] = clamp(u.x[j] - tau * (prob.c[j] - aty[j]), prob.col_lower[j], prob.col_upper[j]);
    x_ext[j] = 2.0 * x_bar[j] - u.x[j];
  }
  const Vector a_ext = spmv(prob.a, x_ext);
  Vector y_bar(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double q = u.y[i] / theta - a_ext[i];
    // -K = [-u_c, -l_c]
    const double proj = clamp(q, -prob.row_upper[i], -prob.row_lower[i]);
    y_bar[i] = u.y[i] - theta * a_ext[i] - theta * proj;
  }

  const double a = static_cast<double>(k + 1) / static_cast<double>(k + 2);
  const double b = 1.0 / static_cast<double>(k + 2);
  PrimalDualPair next{Vector(m), Vector(n)};
  for (std::size_t i = 0; i < m; ++i)
    next.y[i] = a * ((1.0 + gamma) * y_bar[i] - gamma * u.y[i]) + b * u0.y[i];
  for (std::size_t j = 0; j < n; ++j)
    next.x[j] = a * ((1.0 + gamma) * x_bar[j] - gamma * u.x[j]) + b * u0.x[j];
  if (!finite_all(next.y) || !finite_all(next.x))
    throw NumericalError("rhpdhg_step: non-finite iterate (divergence)");
  return next;
}

// ---------------------------------------------------------------------------
// active sets and the frozen affine map

namespace {

BoundSide side_of(double projected, double lo, double hi) {
  if (std::isfinite(lo) && projected == lo) return BoundSide::lower;
  if (std::isfinite(hi) && projected == hi) return BoundSide::upper;
  return BoundSide::free;
}

}  // namespace

ActiveSets identify_active_sets(const PrStepTrace& trace, const LpProblem& prob) {
  ActiveSets s;
  const auto n = trace.xi.size();
  s.col_side.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = clamp(trace.xi[j], prob.col_lower[j], prob.col_upper[j]);
    s.col_side[j] = side_of(p, prob.col_lower[j], prob.col_upper[j]);
    if (s.col_side[j] != BoundSide::free) s.i_c.push_back(static_cast<int>(j));
  }
  const auto m = trace.zeta.size();
  s.row_side.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = clamp(trace.zeta[i], prob.row_lower[i], prob.row_upper[i]);
    s.row_side[i] = side_of(p, prob.row_lower[i], prob.row_upper[i]);
    if (s.row_side[i] != BoundSide::free) s.i_k.push_back(static_cast<int>(i));
  }
  return s;
}

FrozenAffineMap::FrozenAffineMap(ActiveSets active, const LpProblem& prob,
                                 const EngineConfig& cfg)
    : active_(std::move(active)), prob_(&prob), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.t1_zero_path) throw std::invalid_argument("FrozenAffineMap: only the lambda_A path is supported");
  if (active_.col_side.size() != static_cast<std::size_t>(prob.num_cols()) ||
      active_.row_side.size() != static_cast<std::size_t>(prob.num_rows()))
    throw std::invalid_argument("FrozenAffineMap: active sets do not match problem");
  offset_ = evaluate(Iterate::zeros(prob.num_rows(), prob.num_cols()), false);
}

Iterate FrozenAffineMap::evaluate(const Iterate& w, bool homogeneous) const {
  const LpProblem& p = *prob_;
  const auto m = static_cast<std::size_t>(p.num_rows());
  const auto n = static_cast<std::size_t>(p.num_cols());
  const double sigma = cfg_.sigma;
  const double sl = sigma * cfg_.lambda_a;
  const double rho = cfg_.reflection();

  auto face = [homogeneous](double v, BoundSide side, double lo, double hi) {
    switch (side) {
      case BoundSide::lower: return homogeneous ? 0.0 : lo;
      case BoundSide::upper: return homogeneous ? 0.0 : hi;
      case BoundSide::free: break;
    }
    return v;
  };

  Iterate bar = Iterate::zeros(static_cast<int>(m), static_cast<int>(n));
  const Vector aty = spmv_t(p.a, w.y);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = homogeneous ? 0.0 : p.c[j];
    const double xi = w.x[j] + sigma * (aty[j] - c);
    bar.x[j] = face(xi, active_.col_side[j], p.col_lower[j], p.col_upper[j]);
    bar.z[j] = (bar.x[j] - xi) / sigma;
  }
  Vector ext(n);
  for (std::size_t j = 0; j < n; ++j) ext[j] = 2.0 * bar.x[j] - w.x[j];
  const Vector aext = spmv(p.a, ext);
  for (std::size_t i = 0; i < m; ++i) {
    const double zeta = aext[i] - sl * w.y[i];
    bar.y[i] = (face(zeta, active_.row_side[i], p.row_lower[i], p.row_upper[i]) - zeta) / sl;
  }

  Iterate hat = Iterate::zeros(static_cast<int>(m), static_cast<int>(n));
  reflect(bar.y, w.y, rho, hat.y);
  reflect(bar.z, w.z, rho, hat.z);
  reflect(bar.x, w.x, rho, hat.x);
  return hat;
}

Iterate FrozenAffineMap::apply(const Iterate& w) const { return evaluate(w, false); }

Iterate FrozenAffineMap::apply_linear(const Iterate& w) const { return evaluate(w, true); }

FrozenAffineMap frozen_affine_map(const ActiveSets& active, const LpProblem& prob,
                                  const EngineConfig& cfg) {
  return FrozenAffineMap(active, prob, cfg);
}

}  // namespace hprlp
