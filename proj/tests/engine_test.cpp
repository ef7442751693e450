#include <gtest/gtest.h>

#include "hprlp/engine.hpp"
#include "support.hpp"

namespace hprlp {
namespace {

using testing::Rng;

// m = n = 1, A = [1], c = 0, x free, row fixed at 1.
LpProblem unit_fixture() {
  return make_problem({0.0}, SparseMatrix::identity(1), {1.0}, {1.0}, {-kInf}, {kInf});
}

EngineConfig unit_config(double sigma = 1.0, double lambda = 1.0) {
  EngineConfig cfg;
  cfg.sigma = sigma;
  cfg.lambda_a = lambda;
  return cfg;
}

TEST(PrStep, UnitFixtureFromZero) {
  const PrStepTrace tr = pr_step(Iterate::zeros(1, 1), unit_fixture(), unit_config());
  EXPECT_EQ(tr.xi, (Vector{0.0}));
  EXPECT_EQ(tr.w_bar.x, (Vector{0.0}));
  EXPECT_EQ(tr.w_bar.z, (Vector{0.0}));
  EXPECT_EQ(tr.zeta, (Vector{0.0}));
  EXPECT_EQ(tr.w_bar.y, (Vector{1.0}));
  EXPECT_EQ(tr.w_hat, (Iterate{{2.0}, {0.0}, {0.0}}));
}

TEST(PrStep, BoxOnlyHandExample) {
  const LpProblem p = make_problem({1.0}, SparseMatrix(0, 1, std::vector<Triplet>{}), {}, {}, {0.0}, {kInf});
  const PrStepTrace tr = pr_step(Iterate{{}, {0.0}, {3.0}}, p, unit_config(2.0));
  EXPECT_EQ(tr.xi, (Vector{1.0}));
  EXPECT_EQ(tr.w_bar.x, (Vector{1.0}));
  EXPECT_EQ(tr.w_bar.z, (Vector{0.0}));
}

TEST(PrStep, ModeReflections) {
  const LpProblem p = unit_fixture();
  const Iterate w{{0.5}, {0.0}, {0.25}};
  EngineConfig cfg = unit_config();
  const PrStepTrace pr = pr_step(w, p, cfg);
  cfg.mode = Mode::hdr;
  const PrStepTrace dr = pr_step(w, p, cfg);
  EXPECT_EQ(dr.w_hat, dr.w_bar);
  EXPECT_EQ(pr.w_bar, dr.w_bar);
  EXPECT_DOUBLE_EQ(pr.w_hat.y[0], 2.0 * pr.w_bar.y[0] - w.y[0]);
  cfg.mode = Mode::rhpdhg;
  cfg.gamma = 0.5;
  const PrStepTrace rh = pr_step(w, p, cfg);
  EXPECT_DOUBLE_EQ(rh.w_hat.x[0], 1.5 * rh.w_bar.x[0] - 0.5 * w.x[0]);
}

TEST(PrStep, FixedPointAtPlantedOptimum) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto lp = testing::strictly_complementary_lp(seed, 8, 10);
    const Iterate star{lp.y, lp.z, lp.x};
    const PrStepTrace tr = pr_step(star, lp.prob, unit_config(0.7, estimate_lambda_a(lp.prob.a)));
    EXPECT_LE(testing::rel_diff(tr.w_hat, star), 1e-12);
  }
}

TEST(PrStep, WorkhorseMatchesPureForm) {
  const auto lp = testing::random_feasible_lp(7, 12, 15);
  const EngineConfig cfg = unit_config(1.3, estimate_lambda_a(lp.prob.a));
  Rng rng(8);
  const Iterate w{rng.vector(12, -1, 1), rng.vector(15, -1, 1), rng.vector(15, -1, 1)};
  const PrStepTrace pure = pr_step(w, lp.prob, cfg);
  PrStepTrace out;
  Products bp;
  pr_step(w, Products::of(w, lp.prob), lp.prob, cfg, nullptr, out, bp);
  EXPECT_EQ(out.w_hat, pure.w_hat);
  EXPECT_EQ(bp.ax, spmv(lp.prob.a, out.w_bar.x));
  EXPECT_EQ(bp.aty, spmv_t(lp.prob.a, out.w_bar.y));
}

TEST(PrStep, NonFiniteThrows) {
  EXPECT_THROW(pr_step(Iterate{{0.0}, {0.0}, {kInf}}, unit_fixture(), unit_config()), NumericalError);
}

TEST(EngineConfig, Validation) {
  EngineConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_mode("epr"), Mode::epr);
  EXPECT_FALSE(parse_mode("admm").has_value());
  for (Mode m : {Mode::hpr, Mode::hdr, Mode::pr, Mode::epr, Mode::rhpdhg})
    EXPECT_EQ(parse_mode(to_string(m)), m);
}

TEST(Halpern, Examples) {
  const Iterate w0{{2.0}, {4.0}, {6.0}}, hat{{4.0}, {0.0}, {2.0}};
  EXPECT_EQ(halpern_step(w0, hat, 0), (Iterate{{3.0}, {2.0}, {4.0}}));
  EXPECT_EQ(halpern_step(hat, hat, 5), hat);
  const Iterate h = halpern_step(Iterate{{0.0}, {0.0}, {0.0}}, Iterate{{10.0}, {20.0}, {-30.0}}, 8);
  EXPECT_DOUBLE_EQ(h.y[0], 9.0);
  EXPECT_DOUBLE_EQ(h.z[0], 18.0);
  EXPECT_DOUBLE_EQ(h.x[0], -27.0);
}

TEST(RunningMean, Examples) {
  RunningMean a;
  const Iterate v{{1.0}, {2.0}, {3.0}};
  a.add(v);
  EXPECT_EQ(a.mean(), v);
  a.add(v);
  EXPECT_EQ(a.mean(), v);
  RunningMean b;
  b.add(Iterate{{0.0}, {0.0}, {0.0}});
  b.add(Iterate{{2.0}, {2.0}, {2.0}});
  EXPECT_EQ(b.mean(), (Iterate{{1.0}, {1.0}, {1.0}}));
  EXPECT_EQ(b.count(), 2);
  b.reset();
  EXPECT_EQ(b.count(), 0);
}

TEST(Rhpdhg, UnitFixtureOneStep) {
  const PrimalDualPair zero{{0.0}, {0.0}};
  const PrimalDualPair next = rhpdhg_step(zero, zero, unit_fixture(), 1.0, 1.0, 1.0, 0);
  EXPECT_EQ(next.y, (Vector{1.0}));
  EXPECT_EQ(next.x, (Vector{0.0}));
}

TEST(Rhpdhg, FixedPointUnchanged) {
  const auto lp = testing::strictly_complementary_lp(3, 6, 9);
  const double eta = 1.0 / std::sqrt(estimate_lambda_a(lp.prob.a));
  const PrimalDualPair star{lp.y, lp.x};
  const PrimalDualPair next = rhpdhg_step(star, star, lp.prob, eta, eta / 0.8, 1.0, 3);
  EXPECT_LE(testing::rel_diff_yx(next.y, next.x, star.y, star.x), 1e-12);
}

TEST(Rhpdhg, MatchesHprShortRun) {
  const auto lp = testing::random_feasible_lp(21, 10, 14);
  const double lambda = estimate_lambda_a(lp.prob.a);
  const double eta = 1.0 / std::sqrt(lambda), sigma = 0.6, omega = eta / sigma;
  EngineConfig cfg = unit_config(sigma, 1.0 / (eta * eta));
  Iterate w0 = Iterate::zeros(10, 14), w = w0;
  PrimalDualPair u0{w0.y, w0.x}, u = u0;
  for (long k = 0; k < 50; ++k) {
    w = halpern_step(w0, pr_step(w, lp.prob, cfg).w_hat, k);
    u = rhpdhg_step(u, u0, lp.prob, eta, omega, 1.0, k);
    ASSERT_LE(testing::rel_diff_yx(u.y, u.x, w.y, w.x), 1e-12) << "k=" << k;
  }
}

TEST(T1Zero, HandExamples) {
  const LpProblem zero_rhs = make_problem({0.0, 0.0}, SparseMatrix::identity(2), {0, 0}, {0, 0},
                                          {-kInf, -kInf}, {kInf, kInf});
  const NormalEquationSolver f2(zero_rhs.a);
  EXPECT_EQ(y_update_t1_zero(Vector{0, 0}, Vector{0, 0}, zero_rhs, 1.0, f2), (Vector{0, 0}));

  const LpProblem p = make_problem({0.0}, SparseMatrix::from_dense(1, 1, Vector{2}), {2}, {2},
                                   {-kInf}, {kInf});
  const NormalEquationSolver f1(p.a);
  EXPECT_DOUBLE_EQ(y_update_t1_zero(Vector{0}, Vector{0}, p, 1.0, f1)[0], 0.5);
}

TEST(T1Zero, SingularOrInequalityRowsRejected) {
  EXPECT_THROW(NormalEquationSolver(SparseMatrix::from_dense(2, 1, Vector{1, 1})), std::runtime_error);
  const LpProblem ineq = make_problem({0.0}, SparseMatrix::identity(1), {0}, {1}, {-kInf}, {kInf});
  const NormalEquationSolver f(ineq.a);
  EXPECT_THROW(y_update_t1_zero(Vector{0}, Vector{0}, ineq, 1.0, f), std::invalid_argument);
}

TEST(T1Zero, StepIsFixedAtOptimum) {
  // min x1 + x2, x1 + 2 x2 = 2, x >= 0: optimum x = (0, 1), y = 0.5, z = (0.5, 0).
  const LpProblem p = make_problem({1.0, 1.0}, SparseMatrix::from_dense(1, 2, Vector{1, 2}), {2}, {2},
                                   {0, 0}, {kInf, kInf});
  const NormalEquationSolver f(p.a);
  EngineConfig cfg = unit_config();
  cfg.t1_zero_path = true;
  const Iterate star{{0.5}, {0.5, 0.0}, {0.0, 1.0}};
  const PrStepTrace tr = pr_step(star, p, cfg, &f);
  EXPECT_LE(testing::rel_diff(tr.w_hat, star), 1e-14);
}

TEST(ActiveSets, Examples) {
  const LpProblem p = make_problem({0.0, 0.0}, SparseMatrix(0, 2, std::vector<Triplet>{}), {}, {},
                                   {0, 0}, {1, 1});
  PrStepTrace tr;
  tr.xi = {0.5, 0.25};
  EXPECT_TRUE(identify_active_sets(tr, p).i_c.empty());
  tr.xi = {-1.0, 0.25};
  const ActiveSets s = identify_active_sets(tr, p);
  EXPECT_EQ(s.i_c, (std::vector<int>{0}));
  EXPECT_EQ(s.col_side[0], BoundSide::lower);

  const PrStepTrace unit = pr_step(Iterate::zeros(1, 1), unit_fixture(), unit_config());
  EXPECT_EQ(identify_active_sets(unit, unit_fixture()).i_k, (std::vector<int>{0}));
}

TEST(FrozenMap, AllInactiveMatchesPrStep) {
  Rng rng(31);
  const SparseMatrix a = testing::random_matrix(rng, 5, 7, 0.5);
  const LpProblem p = make_problem(rng.vector(7, -1, 1), a, Vector(5, -kInf), Vector(5, kInf),
                                   Vector(7, -kInf), Vector(7, kInf));
  const EngineConfig cfg = unit_config(0.9, estimate_lambda_a(a));
  const FrozenAffineMap f(identify_active_sets(pr_step(Iterate::zeros(5, 7), p, cfg), p), p, cfg);
  for (int s = 0; s < 10; ++s) {
    const Iterate w{rng.vector(5, -1, 1), rng.vector(7, -1, 1), rng.vector(7, -1, 1)};
    EXPECT_LE(testing::rel_diff(f.apply(w), pr_step(w, p, cfg).w_hat), 1e-14);
  }
}

TEST(FrozenMap, FullyActiveColumnsGiveConstantXBar) {
  const LpProblem p = make_problem({1.0, 1.0}, SparseMatrix(0, 2, std::vector<Triplet>{}), {}, {},
                                   {0, 0}, {1, 1});
  const EngineConfig cfg = unit_config();
  const PrStepTrace tr = pr_step(Iterate{{}, {0, 0}, {-5, -5}}, p, cfg);
  const FrozenAffineMap f(identify_active_sets(tr, p), p, cfg);
  ASSERT_EQ(f.active().i_c.size(), 2u);
  Rng rng(2);
  for (int s = 0; s < 5; ++s) {
    const Iterate w{{}, rng.vector(2, -1, 1), rng.vector(2, -1, 1)};
    const Iterate hat = f.apply(w);
    // x_hat = 2 x_bar - x with x_bar pinned at the lower bound 0
    EXPECT_DOUBLE_EQ(hat.x[0], -w.x[0]);
    EXPECT_DOUBLE_EQ(hat.x[1], -w.x[1]);
  }
}

TEST(FrozenMap, UnitFixtureMatchesPrStep) {
  const LpProblem p = unit_fixture();
  const EngineConfig cfg = unit_config();
  const PrStepTrace tr = pr_step(Iterate::zeros(1, 1), p, cfg);
  const FrozenAffineMap f(identify_active_sets(tr, p), p, cfg);
  EXPECT_EQ(f.apply(Iterate::zeros(1, 1)), tr.w_hat);
}

TEST(FrozenMap, AffineDecomposition) {
  const auto lp = testing::random_feasible_lp(5, 6, 8);
  const EngineConfig cfg = unit_config(1.1, estimate_lambda_a(lp.prob.a));
  Rng rng(9);
  const Iterate w{rng.vector(6, -1, 1), rng.vector(8, -1, 1), rng.vector(8, -1, 1)};
  const FrozenAffineMap f(identify_active_sets(pr_step(w, lp.prob, cfg), lp.prob), lp.prob, cfg);
  const Iterate lin = f.apply_linear(w), full = f.apply(w);
  Iterate sum = lin;
  for (std::size_t i = 0; i < sum.y.size(); ++i) sum.y[i] += f.offset().y[i];
  for (std::size_t j = 0; j < sum.x.size(); ++j) {
    sum.x[j] += f.offset().x[j];
    sum.z[j] += f.offset().z[j];
  }
  EXPECT_LE(testing::rel_diff(sum, full), 1e-14);
  EXPECT_LE(testing::rel_diff(full, pr_step(w, lp.prob, cfg).w_hat), 1e-14);
}

TEST(HalpernPicard, SmallAffineMap) {
  const auto lp = testing::random_feasible_lp(77, 4, 6);
  const EngineConfig cfg = unit_config(1.0, estimate_lambda_a(lp.prob.a));
  Rng rng(10);
  const Iterate w0{rng.vector(4, -1, 1), rng.vector(6, -1, 1), rng.vector(6, -1, 1)};
  const FrozenAffineMap f(identify_active_sets(pr_step(w0, lp.prob, cfg), lp.prob), lp.prob, cfg);
  Iterate halpern = w0, picard = w0;
  RunningMean avg;
  avg.add(w0);
  for (long k = 0; k < 40; ++k) {
    halpern = halpern_step(w0, f.apply(halpern), k);
    picard = f.apply(picard);
    avg.add(picard);
    ASSERT_LE(testing::rel_diff(halpern, avg.mean()), 1e-12) << "k=" << k;
  }
}

}  // namespace
}  // namespace hprlp
