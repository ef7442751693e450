#ifndef HPRLP_ADAPTIVE_HPP
#define HPRLP_ADAPTIVE_HPP

#include <optional>
#include <span>
#include <string_view>

#include "hprlp/lp_model.hpp"

namespace hprlp {

/// Data defining the M operator
///
///   M = [ sigma A A^T + sigma T1   0   A        ]
///       [ 0                        0   0        ]
///       [ A^T                      0   I/sigma  ]
///
/// with T1 = lambda_a I - A A^T (so the yy block is sigma lambda_a I), or
/// T1 = 0 when t1_zero is set.
struct MNormContext {
  double sigma = 1.0;
  double lambda_a = 1.0;
  const SparseMatrix* a = nullptr;
  bool t1_zero = false;
};

/// <w, M w>, not clamped. The z block does not enter.
double m_inner(std::span<const double> y, std::span<const double> x,
               std::span<const double> aty, const MNormContext& ctx);

/// ||w||_M. Tiny negative values of <w, M w> from roundoff are clamped to 0.
double m_norm(const Iterate& w, const MNormContext& ctx);

/// ||w||_M given A^T y, avoiding a product.
double m_norm(std::span<const double> y, std::span<const double> x,
              std::span<const double> aty, const MNormContext& ctx);

struct RestartConfig {
  double alpha1 = 0.2;
  double alpha2 = 0.8;
  double alpha3 = 0.36;
  bool enabled = true;             // adaptive criteria
  std::optional<long> fixed_period;  // restart every N inner iterations
  long check_interval = 10;        // stride of adaptive checks

  void validate() const;
};

enum class RestartReason { none, sufficient, necessary_no_progress, long_loop, fixed };

std::string_view to_string(RestartReason reason);

/// Restart test in priority order: sufficient decay, necessary decay with no
/// local progress, long inner loop, fixed period.
RestartReason check_restart(double merit0, double merit_prev, double merit_curr, long t,
                            long k, const RestartConfig& cfg);

struct SigmaUpdateInputs {
  double delta_x = 0.0;
  double delta_y = 0.0;
  // ||x|| and ||y|| used by the degenerate-progress safeguard
  double x_scale = 0.0;
  double y_scale = 0.0;
};

struct SigmaBounds {
  double min = 1e-8;
  double max = 1e8;
};

/// delta_x = ||x_bar - x0||; delta_y = sqrt(lambda_a) ||y_bar - y0|| on the
/// lambda_A path and ||A^T (y_bar - y0)|| on the T1 = 0 path.
SigmaUpdateInputs sigma_inputs(const Iterate& w_bar, const Iterate& w0,
                               const MNormContext& ctx);

/// clamp(delta_x / delta_y) into bounds; sigma_prev when either progress
/// measure is at roundoff level.
double sigma_update(const SigmaUpdateInputs& in, double sigma_prev,
                    const SigmaBounds& bounds = {});

}  // namespace hprlp

#endif  // HPRLP_ADAPTIVE_HPP
