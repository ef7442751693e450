#ifndef HPRLP_SCALING_HPP
#define HPRLP_SCALING_HPP

#include "hprlp/lp_model.hpp"

namespace hprlp {

struct ScalingOptions {
  int ruiz_iterations = 10;
  bool l2_column_pass = true;
};

/// A_s = D_r A D_c together with the matching data transform:
///   c_s = D_c c,  bounds on x_s = bounds on x / D_c,  row bounds = D_r * row bounds.
/// Iterates map as x = D_c x_s, y = D_r y_s, z = z_s / D_c.
struct ScaledProblem {
  LpProblem problem;
  Vector row_scale;  // D_r
  Vector col_scale;  // D_c

  Iterate scale(const Iterate& w) const;
  Iterate unscale(const Iterate& w) const;
};

/// Ruiz equilibration followed by an optional column pass dividing each
/// column by the square root of its 2-norm. Empty rows and columns keep
/// scale 1.
ScaledProblem apply_scaling(const LpProblem& prob, const ScalingOptions& opts = {});

/// Identity scaling (all ones), same interface.
ScaledProblem no_scaling(const LpProblem& prob);

}  // namespace hprlp

#endif  // HPRLP_SCALING_HPP
