#ifndef HPRLP_LP_MODEL_HPP
#define HPRLP_LP_MODEL_HPP

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hprlp/sparse.hpp"

namespace hprlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjSense { minimize, maximize };

/// General-form LP
///
///   min <c, x> + obj_constant   s.t.  l_c <= A x <= u_c,  l_v <= x <= u_v.
///
/// Bounds may be +-infinity. A maximization read from a file is stored with c
/// and obj_constant negated and obj_sense == maximize so that reports can flip
/// the sign back; every algorithm only ever sees the minimization.
struct LpProblem {
  Vector c;
  SparseMatrix a;
  Vector row_lower;
  Vector row_upper;
  Vector col_lower;
  Vector col_upper;
  double obj_constant = 0.0;
  ObjSense obj_sense = ObjSense::minimize;

  int num_rows() const { return a.rows(); }
  int num_cols() const { return a.cols(); }

  /// Throws std::invalid_argument if any structural invariant is violated.
  void validate() const;

  /// Sign used when reporting objective values in the user's sense.
  double report_sign() const { return obj_sense == ObjSense::maximize ? -1.0 : 1.0; }
};

/// Builds a problem and validates it. When sense == maximize the objective is
/// negated here.
LpProblem make_problem(Vector c, SparseMatrix a, Vector row_lower, Vector row_upper,
                       Vector col_lower, Vector col_upper, double obj_constant = 0.0,
                       ObjSense sense = ObjSense::minimize);

/// w = (y, z, x): row duals, bound duals, primal.
struct Iterate {
  Vector y;
  Vector z;
  Vector x;

  static Iterate zeros(int m, int n);
  bool all_finite() const;
  bool operator==(const Iterate&) const = default;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KktResidual {
  Vector primal;    // A x - Pi_K(A x - y)
  Vector dual_box;  // x - Pi_C(x - z)
  Vector dual_eq;   // c - A^T y - z
  double primal_norm = 0.0;
  double dual_box_norm = 0.0;
  double dual_eq_norm = 0.0;

  double norm() const;
};

struct RelativeResiduals {
  double gap = 0.0;
  double primal = 0.0;
  double dual = 0.0;

  double max() const;
  bool within(double tol) const { return gap <= tol && primal <= tol && dual <= tol; }
};

Vector project_box(std::span<const double> v, std::span<const double> lo,
                   std::span<const double> hi);

/// R(w). Throws NumericalError when w has non-finite entries.
KktResidual kkt_residual(const Iterate& w, const LpProblem& prob);

/// Support function of the box [lo, hi] evaluated at s, with 0 * inf = 0.
double box_support(std::span<const double> s, std::span<const double> lo,
                   std::span<const double> hi);

/// delta*_K(-y) + delta*_C(-z). This is the value the dual *minimizes*; the
/// corresponding lower bound on the primal objective is its negation.
/// Returns +inf for sign patterns that are not dual feasible.
double dual_objective(std::span<const double> y, std::span<const double> z,
                      const LpProblem& prob);

/// <c, x> + obj_constant
double primal_objective(std::span<const double> x, const LpProblem& prob);

/// Ratios of the three termination tests (duality gap, primal feasibility,
/// dual feasibility) for the minimization form. The gap ratio is +inf when
/// the dual objective is infinite.
RelativeResiduals relative_residuals(const Iterate& w, const LpProblem& prob);

/// Same, reusing already computed products A x and A^T y.
RelativeResiduals relative_residuals(const Iterate& w, std::span<const double> ax,
                                     std::span<const double> aty, const LpProblem& prob);

}  // namespace hprlp

#endif  // HPRLP_LP_MODEL_HPP
