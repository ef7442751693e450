#ifndef HPRLP_ENGINE_HPP
#define HPRLP_ENGINE_HPP

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "hprlp/lp_model.hpp"

namespace hprlp {

/// Iteration variants sharing the same splitting step.
///  hpr     reflection 1, Halpern anchoring
///  hdr     reflection 0 (w_hat = w_bar), Halpern anchoring
///  pr      reflection 1, plain Picard iteration
///  epr     pr iterates, reported through their uniform running averages
///  rhpdhg  reflection gamma, Halpern anchoring
enum class Mode { hpr, hdr, pr, epr, rhpdhg };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct EngineConfig {
  double sigma = 1.0;
  // Proximal scalar: T1 = lambda_a * I - A A^T. Must be >= ||A||^2.
  double lambda_a = 1.0;
  Mode mode = Mode::hpr;
  double gamma = 1.0;  // used by rhpdhg only
  // Exact y-update through A A^T (T1 = 0); equality rows only.
  bool t1_zero_path = false;

  /// rho in w_hat = (1 + rho) w_bar - rho w.
  double reflection() const;
  /// Whether the next iterate is anchored toward w0.
  bool anchored() const { return mode == Mode::hpr || mode == Mode::hdr || mode == Mode::rhpdhg; }
  void validate() const;
};

/// A x and A^T y for some iterate (x, y).
struct Products {
  Vector ax;
  Vector aty;

  static Products of(const Iterate& w, const LpProblem& prob);
};

struct PrStepTrace {
  Vector xi;    // x + sigma (A^T y - c)
  Vector zeta;  // A(2 x_bar - x) - sigma lambda_a y   (empty on the T1 = 0 path)
  Iterate w_bar;
  Iterate w_hat;
};

/// Cached dense Cholesky factor of A A^T for the T1 = 0 y-update.
class NormalEquationSolver {
 public:
  /// Throws std::runtime_error when A A^T is not numerically positive definite
  /// and std::invalid_argument when m exceeds max_rows.
  explicit NormalEquationSolver(const SparseMatrix& a, int max_rows = 2000);
  ~NormalEquationSolver();
  NormalEquationSolver(NormalEquationSolver&&) noexcept;
  NormalEquationSolver& operator=(NormalEquationSolver&&) noexcept;

  /// Solves A A^T y = rhs. Throws std::runtime_error if the residual check
  /// ||A A^T y - rhs|| <= 1e-10 (1 + ||rhs||) fails.
  Vector solve(std::span<const double> rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Exact y-update for equality-constrained rows:
///   A A^T y_bar = (b - A(x_bar + sigma (z_bar - c))) / sigma.
Vector y_update_t1_zero(std::span<const double> z_bar, std::span<const double> x_bar,
                        const LpProblem& prob, double sigma,
                        const NormalEquationSolver& factor);

/// One splitting step from w. Returns w_bar and w_hat = (1+rho) w_bar - rho w.
/// Throws NumericalError if anything non-finite comes out.
PrStepTrace pr_step(const Iterate& w, const LpProblem& prob, const EngineConfig& cfg,
                    const NormalEquationSolver* factor = nullptr);

/// Workhorse form of pr_step: takes the products of w and also returns those
/// of w_bar, so a run needs exactly one A and one A^T product per iteration.
void pr_step(const Iterate& w, const Products& w_products, const LpProblem& prob,
             const EngineConfig& cfg, const NormalEquationSolver* factor,
             PrStepTrace& out, Products& bar_products);

/// (1/(t+2)) w0 + ((t+1)/(t+2)) w_hat
Iterate halpern_step(const Iterate& w0, const Iterate& w_hat, long t);
void halpern_step_inplace(const Iterate& w0, const Iterate& w_hat, long t, Iterate& out);
void halpern_combine(std::span<const double> anchor, std::span<const double> v, long t,
                     std::span<double> out);

/// Uniform running mean of a sequence of iterates.
class RunningMean {
 public:
  void add(const Iterate& sample);
  void reset() { count_ = 0; }
  long count() const { return count_; }
  const Iterate& mean() const { return mean_; }

 private:
  Iterate mean_;
  long count_ = 0;
};

/// Both ergodic outputs of the EPR iteration: the mean of the w_bar sequence
/// and the mean of the w sequence. Only the former carries a convergence
/// guarantee.
struct EprAverages {
  RunningMean bar;
  RunningMean iter;

  void accumulate(const Iterate& w_bar, const Iterate& w) {
    bar.add(w_bar);
    iter.add(w);
  }
};

struct PrimalDualPair {
  Vector y;
  Vector x;
};

/// One anchored, reflected PDHG step:
///   x_bar = Pi_C(x - (eta/omega)(c - A^T y))
///   y_bar = y - eta omega A(2 x_bar - x) - eta omega Pi_{-K}(y/(eta omega) - A(2 x_bar - x))
///   u+    = ((k+1)/(k+2)) ((1+gamma) (y_bar, x_bar) - gamma u) + u0/(k+2)
PrimalDualPair rhpdhg_step(const PrimalDualPair& u, const PrimalDualPair& u0,
                           const LpProblem& prob, double eta, double omega, double gamma,
                           long k);

enum class BoundSide : unsigned char { free, lower, upper };

struct ActiveSets {
  std::vector<int> i_c;  // variables whose projection landed on a finite bound
  std::vector<int> i_k;  // rows likewise
  std::vector<BoundSide> col_side;
  std::vector<BoundSide> row_side;

  bool operator==(const ActiveSets& other) const {
    return col_side == other.col_side && row_side == other.row_side;
  }
};

/// Exact equality with the clamped value decides activity; a lower/upper
/// tie (fixed variable or equality row) is recorded as lower.
ActiveSets identify_active_sets(const PrStepTrace& trace, const LpProblem& prob);

/// The step map w -> w_hat with both projections frozen onto the faces given
/// by an active-set pattern. Affine: apply(w) = apply_linear(w) + offset().
class FrozenAffineMap {
 public:
  FrozenAffineMap(ActiveSets active, const LpProblem& prob, const EngineConfig& cfg);

  Iterate apply(const Iterate& w) const;
  Iterate apply_linear(const Iterate& w) const;
  const Iterate& offset() const { return offset_; }
  const ActiveSets& active() const { return active_; }

 private:
  Iterate evaluate(const Iterate& w, bool homogeneous) const;

  ActiveSets active_;
  const LpProblem* prob_;
  EngineConfig cfg_;
  Iterate offset_;
};

FrozenAffineMap frozen_affine_map(const ActiveSets& active, const LpProblem& prob,
                                  const EngineConfig& cfg);

}  // namespace hprlp

#endif  // HPRLP_ENGINE_HPP
