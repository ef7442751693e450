#ifndef HPRLP_TESTS_SUPPORT_HPP
#define HPRLP_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hprlp/engine.hpp"
#include "hprlp/lp_model.hpp"
#include "hprlp/sparse.hpp"

#ifndef HPRLP_FIXTURE_DIR
#define HPRLP_FIXTURE_DIR "tests/fixtures"
#endif

namespace hprlp::testing {

inline std::string fixture(const std::string& name) { return std::string(HPRLP_FIXTURE_DIR) + "/" + name; }

inline double norm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

/// ||a - b|| / max(||a||, ||b||), 0 when both vanish.
inline double rel_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  const double s = std::max(norm(a), norm(b));
  return s == 0.0 ? 0.0 : std::sqrt(d) / s;
}

inline Vector concat(std::initializer_list<std::span<const double>> parts) {
  Vector out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline double rel_diff(const Iterate& a, const Iterate& b) {
  return rel_diff(concat({a.y, a.z, a.x}), concat({b.y, b.z, b.x}));
}

inline double rel_diff_yx(std::span<const double> ya, std::span<const double> xa,
                          std::span<const double> yb, std::span<const double> xb) {
  return rel_diff(concat({ya, xa}), concat({yb, xb}));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }
  Vector vector(std::size_t n, double lo, double hi) {
    Vector v(n);
    for (auto& e : v) e = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

inline SparseMatrix random_matrix(Rng& rng, int m, int n, double density) {
  std::vector<Triplet> t;
  for (int i = 0; i < m; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j)
      if (rng.coin(density)) {
        t.push_back({i, j, rng.uniform(-2.0, 2.0)});
        any = true;
      }
    if (!any && n > 0) t.push_back({i, rng.integer(0, n - 1), rng.uniform(0.5, 2.0)});
  }
  return SparseMatrix(m, n, t);
}

/// A problem together with a primal feasible x and a dual feasible (y, z),
/// so an optimum exists.
struct PlantedLp {
  LpProblem prob;
  Vector x;
  Vector y;
  Vector z;
};

/// Mixed row types (L, G, E, ranged, free) and variable bounds (nonnegative,
/// boxed, free, upper only). c = A^T y + z with multipliers signed to match
/// the finite bounds.
inline PlantedLp random_feasible_lp(std::uint64_t seed, int m, int n, double density = 0.6,
                                    bool allow_free_rows = true) {
  Rng rng(seed);
  SparseMatrix a = random_matrix(rng, m, n, density);
  const auto un = static_cast<std::size_t>(n), um = static_cast<std::size_t>(m);
  Vector cl(un), cu(un), x(un), z(un);
  for (std::size_t j = 0; j < un; ++j) {
    const double r = rng.uniform(0.0, 1.0);
    if (r < 0.4) { cl[j] = 0.0; cu[j] = kInf; }
    else if (r < 0.75) { cl[j] = rng.uniform(-3.0, 0.0); cu[j] = cl[j] + rng.uniform(0.5, 4.0); }
    else if (r < 0.85) { cl[j] = -kInf; cu[j] = kInf; }
    else { cl[j] = -kInf; cu[j] = rng.uniform(-1.0, 3.0); }
    const double lo = std::isfinite(cl[j]) ? cl[j] : (std::isfinite(cu[j]) ? cu[j] - 3.0 : -2.0);
    const double hi = std::isfinite(cu[j]) ? cu[j] : lo + 3.0;
    x[j] = rng.coin(0.3) ? (rng.coin(0.5) ? lo : hi) : rng.uniform(lo, hi);
    if (!std::isfinite(cl[j]) && !std::isfinite(cu[j])) x[j] = rng.uniform(-2.0, 2.0);
    double s = rng.coin(0.4) ? 0.0 : rng.uniform(0.1, 2.0);
    if (std::isfinite(cl[j]) && std::isfinite(cu[j])) z[j] = rng.coin(0.5) ? s : -s;
    else if (std::isfinite(cl[j])) z[j] = s;
    else if (std::isfinite(cu[j])) z[j] = -s;
    else z[j] = 0.0;
  }
  const Vector ax = spmv(a, x);
  Vector rl(um), ru(um), y(um);
  for (std::size_t i = 0; i < um; ++i) {
    const double r = rng.uniform(0.0, 1.0);
    const double s = rng.coin(0.3) ? 0.0 : rng.uniform(0.1, 2.0);
    if (r < 0.3) { rl[i] = -kInf; ru[i] = ax[i] + (rng.coin(0.4) ? 0.0 : rng.uniform(0.0, 2.0)); y[i] = -s; }
    else if (r < 0.6) { rl[i] = ax[i] - (rng.coin(0.4) ? 0.0 : rng.uniform(0.0, 2.0)); ru[i] = kInf; y[i] = s; }
    else if (r < 0.8) { rl[i] = ru[i] = ax[i]; y[i] = rng.coin(0.5) ? s : -s; }
    else if (r < 0.95 || !allow_free_rows) {
      rl[i] = ax[i] - rng.uniform(0.0, 2.0);
      ru[i] = ax[i] + rng.uniform(0.1, 2.0);
      y[i] = rng.coin(0.5) ? s : -s;
    } else { rl[i] = -kInf; ru[i] = kInf; y[i] = 0.0; }
  }
  Vector c = spmv_t(a, y);
  for (std::size_t j = 0; j < un; ++j) c[j] += z[j];
  PlantedLp out{make_problem(std::move(c), std::move(a), std::move(rl), std::move(ru), std::move(cl),
                             std::move(cu)),
                std::move(x), std::move(y), std::move(z)};
  return out;
}

/// An LP with a known strictly complementary primal-dual optimum
/// (x*, y*, z*): every active bound carries a multiplier of magnitude at
/// least 0.5 and every inactive one has slack at least 0.5.
inline PlantedLp strictly_complementary_lp(std::uint64_t seed, int m, int n, double density = 0.5) {
  Rng rng(seed);
  SparseMatrix a = random_matrix(rng, m, n, density);
  const auto un = static_cast<std::size_t>(n), um = static_cast<std::size_t>(m);
  Vector cl(un), cu(un), x(un), z(un);
  for (std::size_t j = 0; j < un; ++j) {
    cl[j] = rng.uniform(-2.0, 0.0);
    cu[j] = cl[j] + rng.uniform(2.0, 4.0);
    const double r = rng.uniform(0.0, 1.0);
    if (r < 0.35) { x[j] = cl[j]; z[j] = rng.uniform(0.5, 2.0); }
    else if (r < 0.7) { x[j] = cu[j]; z[j] = -rng.uniform(0.5, 2.0); }
    else { x[j] = rng.uniform(cl[j] + 0.5, cu[j] - 0.5); z[j] = 0.0; }
    if (rng.coin(0.15) && z[j] == 0.0) { cl[j] = -kInf; cu[j] = kInf; }
  }
  const Vector ax = spmv(a, x);
  Vector rl(um), ru(um), y(um);
  for (std::size_t i = 0; i < um; ++i) {
    const double r = rng.uniform(0.0, 1.0);
    if (r < 0.3) { rl[i] = ax[i]; ru[i] = ax[i] + rng.uniform(1.0, 3.0); y[i] = rng.uniform(0.5, 2.0); }
    else if (r < 0.6) { rl[i] = -kInf; ru[i] = ax[i]; y[i] = -rng.uniform(0.5, 2.0); }
    else if (r < 0.8) { rl[i] = ru[i] = ax[i]; y[i] = (rng.coin(0.5) ? 1.0 : -1.0) * rng.uniform(0.5, 2.0); }
    else { rl[i] = ax[i] - rng.uniform(0.5, 2.0); ru[i] = ax[i] + rng.uniform(0.5, 2.0); y[i] = 0.0; }
  }
  Vector c = spmv_t(a, y);
  for (std::size_t j = 0; j < un; ++j) c[j] += z[j];
  return PlantedLp{make_problem(std::move(c), std::move(a), std::move(rl), std::move(ru),
                                std::move(cl), std::move(cu)),
                   std::move(x), std::move(y), std::move(z)};
}

inline std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Free-format MPS text for a problem without free rows. Exact decimal
/// round trip via %.17g.
inline std::string to_mps(const LpProblem& p) {
  const bool max = p.obj_sense == ObjSense::maximize;
  const double sign = max ? -1.0 : 1.0;
  std::ostringstream o;
  o << "NAME GEN\n";
  if (max) o << "OBJSENSE\n    MAX\n";
  o << "ROWS\n N OBJ\n";
  std::vector<char> type(p.row_lower.size());
  for (std::size_t i = 0; i < type.size(); ++i) {
    const double l = p.row_lower[i], u = p.row_upper[i];
    type[i] = l == u ? 'E' : (std::isfinite(l) ? 'G' : 'L');
    o << ' ' << type[i] << " R" << i << '\n';
  }
  o << "COLUMNS\n";
  const auto ptr = p.a.col_ptr();
  const auto idx = p.a.row_idx();
  const auto val = p.a.csc_values();
  for (std::size_t j = 0; j < p.c.size(); ++j) {
    o << "    C" << j << " OBJ " << exact(sign * p.c[j]) << '\n';
    for (auto k = ptr[j]; k < ptr[j + 1]; ++k)
      o << "    C" << j << " R" << idx[static_cast<std::size_t>(k)] << ' '
        << exact(val[static_cast<std::size_t>(k)]) << '\n';
  }
  o << "RHS\n";
  if (p.obj_constant != 0.0) o << "    RHS OBJ " << exact(-sign * p.obj_constant) << '\n';
  for (std::size_t i = 0; i < type.size(); ++i)
    o << "    RHS R" << i << ' ' << exact(type[i] == 'L' ? p.row_upper[i] : p.row_lower[i]) << '\n';
  o << "RANGES\n";
  for (std::size_t i = 0; i < type.size(); ++i)
    if (type[i] == 'G' && std::isfinite(p.row_upper[i]))
      o << "    RNG R" << i << ' ' << exact(p.row_upper[i] - p.row_lower[i]) << '\n';
  o << "BOUNDS\n";
  for (std::size_t j = 0; j < p.c.size(); ++j) {
    const double l = p.col_lower[j], u = p.col_upper[j];
    if (l == u) { o << " FX BND C" << j << ' ' << exact(l) << '\n'; continue; }
    if (!std::isfinite(l) && !std::isfinite(u)) { o << " FR BND C" << j << '\n'; continue; }
    if (!std::isfinite(l)) o << " MI BND C" << j << '\n';
    else if (l != 0.0 || u < 0.0) o << " LO BND C" << j << ' ' << exact(l) << '\n';
    if (std::isfinite(u)) o << " UP BND C" << j << ' ' << exact(u) << '\n';
  }
  o << "ENDATA\n";
  return o.str();
}

}  // namespace hprlp::testing

#endif  // HPRLP_TESTS_SUPPORT_HPP
