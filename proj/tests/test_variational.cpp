#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/variational.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace sibson;

namespace {

Mat random_function(std::mt19937_64& rng, Index nx, Index ny, double scale = 2) {
  std::normal_distribution<double> g(0, scale);
  Mat f(nx, ny);
  for (Index i = 0; i < f.size(); ++i) f(i) = g(rng);
  return f;
}

Reference full_reference(double a) { return a > 1 ? Reference::RStar : Reference::QStar; }
Reference product_reference(double a) { return a > 1 ? Reference::ProductRStar : Reference::ProductQStar; }

JointPMF bsc_joint() { return JointPMF::compose(ProbVector::uniform(2), Channel::bsc(0.25)); }

}  // namespace

TEST(KlRepresentation, MinimizerAttains) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const JointPMF j = random_instance(s, 3, 3);
    for (double a : {0.5, 2.0}) {
      const JointPMF r = kl_representation_minimizer(j, a);
      EXPECT_NEAR(kl_representation_objective(r, j, a), (1 - a) * sibson_mi(j, a).value, 1e-9);
      EXPECT_LT((marginal_y(r).vec() - sibson_mi(j, a).q_star.vec()).lpNorm<Eigen::Infinity>(), 1e-9);
    }
  }
}

TEST(KlRepresentation, IndependentBase) {
  const JointPMF b = JointPMF::product(ProbVector::uniform(2), ProbVector::validated(Vec{{0.3, 0.7}}));
  EXPECT_NEAR(kl_representation_objective(b, b, 0.5), 0.0, 1e-15);
}

TEST(KlRepresentation, MinimumProperty) {
  std::mt19937_64 rng(1);
  const JointPMF j = random_instance(42, 3, 3);
  for (double a : {0.5, 2.0}) {
    const double floor = (1 - a) * sibson_mi(j, a).value;
    for (int t = 0; t < 100; ++t) {
      const JointPMF r = JointPMF::normalized(random_prob_vector(rng, 9).vec().reshaped(3, 3));
      EXPECT_GE(kl_representation_objective(r, j, a), floor - 1e-12);
    }
  }
}

TEST(VarRepOne, ConstantIsZero) {
  const JointPMF j = random_instance(1, 3, 3);
  for (double a : {0.5, 2.0}) {
    EXPECT_NEAR(var_rep_one(Mat::Constant(3, 3, 0.4), j, a, full_reference(a)), 0.0, 1e-13);
    EXPECT_NEAR(var_rep_one(Mat::Constant(3, 3, 0.4), j, a, product_reference(a)), 0.0, 1e-13);
  }
}

TEST(VarRepOne, WitnessAttains) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const JointPMF j = random_instance(s, 2 + s % 3, 2 + s % 4);
    for (double a : {0.3, 0.7, 1.5, 4.0}) {
      const double target = sibson_mi(j, a).value;
      const TestFunction f = var_rep_one_witness(j, a);
      EXPECT_NEAR(var_rep_one(f, j, a, full_reference(a)), target, 1e-9);
      EXPECT_NEAR(var_rep_one(f, j, a, product_reference(a)), target, 1e-9);
    }
  }
}

TEST(VarRepOne, SupremumDirection) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const JointPMF j = random_instance(1000 + t, 3, 3);
    const double a = t % 2 ? 0.5 : 2.5, target = sibson_mi(j, a).value;
    const Mat f = random_function(rng, 3, 3);
    EXPECT_LE(var_rep_one(f, j, a, full_reference(a)), target + 1e-12);
    EXPECT_LE(var_rep_one(f, j, a, product_reference(a)), var_rep_one(f, j, a, full_reference(a)) + 1e-12);
  }
}

TEST(VarRepOne, RejectsMismatchedReference) {
  const JointPMF j = bsc_joint();
  EXPECT_THROW(var_rep_one(Mat::Zero(2, 2), j, 2, Reference::QStar), std::invalid_argument);
  EXPECT_THROW(var_rep_one(Mat::Zero(2, 2), j, 0.5, Reference::RStar), std::invalid_argument);
  EXPECT_THROW(var_rep_one(Mat::Zero(3, 2), j, 2, Reference::RStar), std::invalid_argument);
}

TEST(RStar, TiltsOutputMarginal) {
  const JointPMF j = random_instance(5, 3, 2);
  EXPECT_LT((r_star(Mat::Zero(3, 2), j, 2).vec() - marginal_y(j).vec()).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(VarRepRatio, Examples) {
  const JointPMF j = random_instance(7, 3, 4);
  EXPECT_NEAR(var_rep_ratio(Mat::Ones(3, 4), j, 2), 1.0, 1e-15);
  EXPECT_LE(1.0, std::exp(0.5 * sibson_mi(j, 2).value));
  for (double a : {0.4, 0.8, 1.5, 3.0}) {
    const double target = std::exp((a - 1) / a * sibson_mi(j, a).value);
    EXPECT_NEAR(var_rep_ratio(var_rep_ratio_witness(j, a), j, a), target, 1e-9) << a;
  }
  EXPECT_NEAR(var_rep_ratio(var_rep_ratio_witness(j, kInf), j, kInf), std::exp(maximal_leakage(j)), 1e-9);
}

TEST(VarRepRatio, Direction) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 3);
  for (int t = 0; t < 200; ++t) {
    const JointPMF j = random_instance(2000 + t, 3, 3);
    Mat g(3, 3);
    for (Index i = 0; i < 9; ++i) g(i) = u(rng);
    for (double a : {0.5, 2.0}) {
      const double target = std::exp((a - 1) / a * sibson_mi(j, a).value), v = var_rep_ratio(g, j, a);
      if (a > 1) EXPECT_LE(v, target + 1e-12);
      else EXPECT_GE(v, target - 1e-12);
    }
    EXPECT_LE(var_rep_ratio(g, j, kInf), std::exp(maximal_leakage(j)) + 1e-12);
  }
}

TEST(VarRepScaled, WitnessAndBound) {
  std::mt19937_64 rng(4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const JointPMF j = random_instance(3000 + s, 3, 3);
    for (double a : {1.5, 3.0}) {
      const double sup = sibson_mi(j, a).value / a;
      EXPECT_NEAR(var_rep_scaled(var_rep_one_witness(j, a), j, a), sup, 1e-9);
      for (int t = 0; t < 20; ++t) EXPECT_LE(var_rep_scaled(random_function(rng, 3, 3), j, a), sup + 1e-12);
    }
  }
}

TEST(Ascent, IndependentJoint) {
  const JointPMF j = JointPMF::product(ProbVector::validated(Vec{{0.4, 0.6}}), ProbVector::validated(Vec{{0.3, 0.7}}));
  const AscentResult r = estimate_sibson_by_ascent(j, 2, 2000);
  EXPECT_LE(r.estimate, 1e-6);
}

TEST(Ascent, BscOrderTwo) {
  const AscentResult r = estimate_sibson_by_ascent(bsc_joint(), 2, 10000);
  EXPECT_NEAR(r.estimate, std::log(1.25), 1e-4);
  EXPECT_LE(r.estimate, std::log(1.25) + 1e-9);
  EXPECT_NEAR(2 * var_rep_scaled(r.witness, bsc_joint(), 2), r.estimate, 1e-12);
}

TEST(Ascent, NeverExceedsClosedForm) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const JointPMF j = random_instance(4000 + s, 3, 3);
    const AscentResult r = estimate_sibson_by_ascent(j, 3, 3000, 0.1, s);
    EXPECT_LE(r.estimate, sibson_mi(j, 3).value + 1e-9);
    for (std::size_t i = 1; i < r.checkpoints.size(); ++i) EXPECT_GE(r.checkpoints[i], r.checkpoints[i - 1]);
  }
}

TEST(Ascent, StrictBudgetThrows) {
  const JointPMF j = random_instance(9, 4, 4);
  try {
    estimate_sibson_by_ascent(j, 2, 3, 0.1, 0, true);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& e) {
    EXPECT_LE(e.best, sibson_mi(j, 2).value + 1e-9);
  }
  EXPECT_THROW(estimate_sibson_by_ascent(j, 0.5), std::invalid_argument);
  EXPECT_THROW(estimate_sibson_by_ascent(JointPMF::validated(Mat{{0.5, 0}, {0, 0.5}}), 2), std::invalid_argument);
}

TEST(DvLimit, Examples) {
  std::mt19937_64 rng(5);
  const JointPMF j = random_instance(11, 3, 4);
  const DvPair at_ratio = dv_mi_limit_check(log_density_ratio(j), j);
  EXPECT_NEAR(at_ratio.strong, shannon_mi(j), 1e-10);
  EXPECT_NEAR(at_ratio.weak, shannon_mi(j), 1e-10);
  const DvPair zero = dv_mi_limit_check(Mat::Zero(3, 4), j);
  EXPECT_NEAR(zero.strong, 0.0, 1e-15);
  EXPECT_NEAR(zero.weak, 0.0, 1e-15);
  for (int t = 0; t < 100; ++t) {
    const DvPair d = dv_mi_limit_check(random_function(rng, 3, 4), j);
    EXPECT_LE(d.weak, d.strong + 1e-12);
    EXPECT_LE(d.strong, shannon_mi(j) + 1e-12);
  }
}
