#ifndef HPRLP_ORACLE_HPP
#define HPRLP_ORACLE_HPP

#include <string_view>

#include "hprlp/lp_model.hpp"

namespace hprlp {

enum class OracleStatus { optimal, infeasible, unbounded };

std::string_view to_string(OracleStatus status);

struct OracleSolution {
  OracleStatus status = OracleStatus::infeasible;
  Vector x;
  double obj = 0.0;  // user's sense, constant included
};

inline constexpr int kOracleMaxDim = 10;

/// Exhaustive vertex enumeration for tiny problems (n, m <= kOracleMaxDim).
/// Infinite variable bounds are replaced by +-1e6 while enumerating, and
/// unboundedness is decided separately on the recession cone. Among optimal
/// vertices the lexicographically smallest x is returned.
OracleSolution oracle_solve(const LpProblem& prob);

}  // namespace hprlp

#endif  // HPRLP_ORACLE_HPP
