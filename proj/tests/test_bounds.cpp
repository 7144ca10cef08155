#include <sibson/bounds.hpp>
#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/renyi.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <bit>
#include <cmath>
#include <random>

using namespace sibson;

namespace {

JointPMF dsbs(double p) { return JointPMF::validated(Mat{{(1 - p) / 2, p / 2}, {p / 2, (1 - p) / 2}}); }

EventMask diagonal(Index n) { return Mat::Identity(n, n).cast<bool>(); }

// Three uses of BSC(0.3) on a uniform 3-bit word.
JointPMF bsc3_joint() {
  Mat w(8, 8);
  for (Index x = 0; x < 8; ++x)
    for (Index y = 0; y < 8; ++y) {
      const int flips = std::popcount(unsigned(x ^ y));
      w(x, y) = std::pow(0.3, flips) * std::pow(0.7, 3 - flips);
    }
  return JointPMF::compose(ProbVector::uniform(8), Channel::validated(w));
}

double prob_of(const JointPMF& j, const EventMask& e) { return (j.mat().array() * e.cast<double>().array()).sum(); }

EventMask random_event(std::mt19937_64& rng, Index nx, Index ny) {
  std::bernoulli_distribution coin(0.5);
  EventMask e(nx, ny);
  for (Index i = 0; i < e.size(); ++i) e(i) = coin(rng);
  return e;
}

}  // namespace

TEST(Dependence, DiagonalLeakageEquality) {
  for (Index n : {2, 5}) {
    const JointPMF j = JointPMF::compose(ProbVector::uniform(n), Channel::identity(n));
    const BoundSides s = dependence_bound(j, diagonal(n), kInf);
    EXPECT_NEAR(s.lhs, 1.0, 1e-15);
    EXPECT_NEAR(s.rhs, 1.0, 1e-14);
  }
}

TEST(Dependence, DsbsEquality) {
  for (double p : {0.1, 0.25, 0.4}) {
    const BoundSides s = dependence_bound(dsbs(p), diagonal(2), kInf);
    EXPECT_NEAR(s.lhs, 1 - p, 1e-15);
    EXPECT_NEAR(s.rhs, 1 - p, 1e-14);
  }
}

TEST(Dependence, IndependentConstantSections) {
  const JointPMF j = JointPMF::product(ProbVector::validated(Vec{{0.25, 0.25, 0.5}}), ProbVector::uniform(3));
  EventMask e(3, 3);
  e << 1, 0, 0,  //
      0, 1, 1,   //
      0, 0, 0;
  // P_X(E_y) = 0.25 for every y.
  // Zero dependence leaves ζ^{(α-1)/α}, tight only at α = ∞.
  for (double a : {2.0, 4.0, kInf}) {
    const BoundSides s = dependence_bound(j, e, a);
    EXPECT_NEAR(s.lhs, 0.25, 1e-15);
    EXPECT_NEAR(s.rhs, a == kInf ? 0.25 : std::pow(0.25, (a - 1) / a), 1e-14);
  }
}

TEST(Dependence, RandomEventsAndFunctions) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const JointPMF j = random_instance(t, 3, 4);
    const EventMask e = random_event(rng, 3, 4);
    for (double a : {1.5, 3.0, kInf}) {
      const BoundSides s = dependence_bound(j, e, a);
      EXPECT_NEAR(s.lhs, prob_of(j, e), 1e-15);
      EXPECT_LE(s.lhs, s.rhs + 1e-12);
    }
    Mat f(3, 4);
    for (Index i = 0; i < 12; ++i) f(i) = u(rng);
    const BoundSides s = dependence_bound(j, f, 2.5);
    EXPECT_NEAR(s.lhs, (j.mat().array() * f.array()).sum(), 1e-14);
    EXPECT_LE(s.lhs, s.rhs + 1e-12);
  }
}

TEST(DependenceLower, Examples) {
  const JointPMF j = random_instance(3, 3, 3);
  const BoundSides c = dependence_lower_bound(j, Mat::Constant(3, 3, 2.0), 0.5);
  EXPECT_NEAR(c.lhs, 2.0, 1e-15);
  EXPECT_NEAR(c.rhs, 2.0 * std::exp(-sibson_mi(j, 0.5).value), 1e-13);
  EXPECT_LE(c.rhs, c.lhs);
  const JointPMF ind = JointPMF::product(marginal_x(j), marginal_y(j));
  const BoundSides i = dependence_lower_bound(ind, Mat::Constant(3, 3, 0.7), 0.5);
  EXPECT_NEAR(i.lhs, i.rhs, 1e-12);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int t = 0; t < 100; ++t) {
    Mat f(3, 3);
    for (Index k = 0; k < 9; ++k) f(k) = u(rng);
    const BoundSides s = dependence_lower_bound(random_instance(50 + t, 3, 3), f, 0.5);
    EXPECT_GE(s.lhs, s.rhs - 1e-12);
  }
  EXPECT_THROW(dependence_lower_bound(j, Mat::Constant(3, 3, -1.0), 0.5), NonpositiveFunction);
}

TEST(Shattering, IdentityAndBsc) {
  const ShatteringWitness id = shattering_witness(Channel::identity(3));
  EXPECT_NEAR(id.px(1), 1.0 / 3, 1e-15);
  EXPECT_EQ(id.event, diagonal(3));
  const ShatteringWitness w = shattering_witness(Channel::bsc(0.3));
  EXPECT_NEAR(w.px(0), 0.5, 1e-15);
  EXPECT_EQ(w.event, diagonal(2));
  const BoundSides s = dependence_bound(JointPMF::compose(w.px, Channel::bsc(0.3)), w.event, kInf);
  EXPECT_NEAR(s.lhs, 0.7, 1e-15);
  EXPECT_NEAR(s.rhs, 0.5 * (2 * 0.7), 1e-15);
}

TEST(Shattering, RandomChannelsTight) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Channel c = random_channel(rng, 4, 3);
    const ShatteringWitness w = shattering_witness(c);
    const BoundSides s = dependence_bound(JointPMF::compose(w.px, c), w.event, kInf);
    EXPECT_NEAR(s.lhs, s.rhs, 1e-12);
  }
}

TEST(GenError, Examples) {
  const int n = 50;
  const double eta = 0.1;
  EXPECT_NEAR(gen_error_bound(n, eta, 0, kInf).value, 2 * std::exp(-2 * n * eta * eta), 1e-15);
  const ProbBound vac = gen_error_bound(n, eta, 2 * n * eta * eta, kInf);
  EXPECT_NEAR(vac.raw, 2.0, 1e-14);
  EXPECT_EQ(vac.value, 1.0);
  EXPECT_NEAR(gen_error_bound(100, 0.1, 1, 2).value, std::sqrt(2.0) * std::exp(-0.5), 1e-15);
}

TEST(GenError, ExactLearningTail) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 6;
    std::vector<int> rule(std::size_t(1) << n);
    for (int& r : rule) r = coin(rng);
    const double eta = u(rng) * 0.5;
    const oracle::LearningTail lt = oracle::learning_tail(n, u(rng), rule, eta);
    const JointPMF j = JointPMF::validated(lt.joint);
    for (double a : {1.5, 4.0, kInf}) EXPECT_LE(lt.tail, gen_error_bound(n, eta, sibson_mi(j, a).value, a).value + 1e-12);
  }
}

TEST(HypothesisTesting, Examples) {
  EXPECT_NEAR(hypothesis_testing_bound(10, 0.3, 0.3, 2).value, 1.0, 1e-15);
  EXPECT_NEAR(hypothesis_testing_bound(10, 1.3, 0.3, 2).value, std::exp(-5.0), 1e-15);
  EXPECT_EQ(hypothesis_testing_bound(10, 1.3, 0.3, 1).value, 1.0);
}

TEST(HypothesisTesting, ExhaustiveTests) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const JointPMF j = random_instance(s, 2, 2);
    for (int n : {1, 2})
      for (const oracle::TestPoint& p : oracle::all_tests(j.mat(), n))
        if (p.rate > 0)
          for (double a : {1.5, 3.0, kInf})
          ASSERT_LE(p.accept_null, hypothesis_testing_bound(n, p.rate, sibson_mi(j, a).value, a).value + 1e-12);
  }
}

TEST(Tpc, ZeroFunction) {
  const JointPMF j = random_instance(4, 3, 3);
  const TpcResult r = tpc_check(j, Mat::Zero(3, 3), 0.5, 0.7, default_kappa_grid());
  EXPECT_TRUE(r.condition_ok);
  EXPECT_NEAR(r.gap, std::sqrt(2 * 0.7 * sibson_mi(j, 0.5).value / 0.5), 1e-14);
}

TEST(Tpc, BoundedCenteredFunction) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const double m = 1.0;
  for (int t = 0; t < 50; ++t) {
    const JointPMF j = random_instance(600 + t, 3, 3);
    const Vec px = marginal_x(j).vec();
    Mat f(3, 3);
    for (Index k = 0; k < 9; ++k) f(k) = u(rng);
    f.rowwise() -= px.transpose() * f;  // zero mean under P_X for each y
    f /= f.cwiseAbs().maxCoeff() / m;
    for (double a : {0.3, 0.7}) {
      const TpcResult r = tpc_check(j, f, a, tpc_bounded_constant(m, a), default_kappa_grid());
      EXPECT_TRUE(r.condition_ok) << r.margin;
      EXPECT_GE(r.gap, -1e-12);
    }
  }
  EXPECT_NEAR(tpc_bounded_constant(2, 0.5), 6.0, 1e-15);
  EXPECT_EQ(default_kappa_grid().size(), 101u);
}

TEST(Fano, DalphaExamples) {
  const JointPMF ind = JointPMF::product(ProbVector::validated(Vec{{0.6, 0.4}}), ProbVector::uniform(3));
  EXPECT_NEAR(fano_dalpha_bound(ind, 2), 0.4, 1e-9);
  EXPECT_NEAR(fano_dalpha_bound(JointPMF::compose(ProbVector::uniform(3), Channel::identity(3)), 2), 0.0, 1e-12);
  EXPECT_LE(fano_dalpha_bound(bsc3_joint(), 2), 1 - 0.343 + 1e-12);
}

TEST(Fano, ExactMap) {
  EXPECT_NEAR(1 - exact_map_error(bsc3_joint()).error, 0.343, 1e-15);
  EXPECT_NEAR(exact_map_error(JointPMF::compose(ProbVector::uniform(3), Channel::identity(3))).error, 0.0, 1e-15);
  const JointPMF ind = JointPMF::product(ProbVector::validated(Vec{{0.3, 0.7}}), ProbVector::uniform(2));
  const MapError e = exact_map_error(ind);
  EXPECT_NEAR(e.error, 0.3, 1e-15);
  EXPECT_EQ(e.rule[0], 1);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const JointPMF j = random_instance(s, 3, 4);
    EXPECT_NEAR(1 - exact_map_error(j).error, oracle::brute_force_map_success(j.mat()), 1e-15);
  }
}

TEST(Fano, LikeBound) {
  const JointPMF ind = JointPMF::product(ProbVector::validated(Vec{{0.3, 0.7}}), ProbVector::uniform(2));
  const FanoLike f = fano_like_bound(ind, 2);
  EXPECT_NEAR(f.corollary.value, std::pow(0.7, 0.5), 1e-14);
  EXPECT_GE(f.corollary.value, 0.7);
  const JointPMF b3 = bsc3_joint();
  for (double a : {1.1, 2.0, 5.0, 10.0}) {
    const FanoLike fl = fano_like_bound(b3, a);
    EXPECT_GE(fl.bound.value, 0.343 - 1e-12);
    EXPECT_LE(fl.bound.value, fl.corollary.value + 1e-12);
    for (double g : {0.01, 1.0, 100.0}) EXPECT_GE(fano_like_bound(b3, a, g).bound.value, 0.343 - 1e-12);
  }
}

TEST(Fano, LikeBoundOptimizationDominates) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const JointPMF j = random_instance(700 + s, 3, 3);
    const double success = 1 - exact_map_error(j).error;
    for (double a : {1.5, 4.0}) {
      const FanoLike f = fano_like_bound(j, a);
      EXPECT_LE(f.bound.value, f.corollary.value + 1e-12);
      EXPECT_GE(f.bound.value, success - 1e-12);
      EXPECT_LE(f.bound.value, fano_like_bound(j, a, 3.0).bound.value + 1e-12);
    }
  }
}

TEST(Fano, Arimoto) {
  const JointPMF same = JointPMF::compose(ProbVector::validated(Vec{{0.2, 0.8}}), Channel::identity(2));
  EXPECT_NEAR(fano_arimoto_bound(same, 2).value, 0.0, 1e-12);
  const ProbVector px = ProbVector::validated(Vec{{0.2, 0.3, 0.5}});
  const JointPMF ind = JointPMF::product(px, ProbVector::uniform(2));
  EXPECT_NEAR(fano_arimoto_bound(ind, 3).value, 1 - std::exp(-(2.0 / 3) * renyi_entropy(px, 3)), 1e-12);
  // On the three-bit example it coincides with the corollary of the γ-bound.
  const JointPMF b3 = bsc3_joint();
  for (double a : {1.5, 2.0, 5.0})
    EXPECT_NEAR(1 - fano_arimoto_bound(b3, a).value, fano_like_bound(b3, a).corollary.value, 1e-9);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const JointPMF j = random_instance(800 + s, 3, 3);
    EXPECT_LE(fano_arimoto_bound(j, 2).value, exact_map_error(j).error + 1e-12);
    EXPECT_LE(fano_dalpha_bound(j, 2), exact_map_error(j).error + 1e-9);
  }
}

TEST(GeneralizedFano, Examples) {
  const ProbVector m = ProbVector::validated(Vec{{0.2, 0.8}});
  const double r3 = generalized_fano({m, m, m}, m, 0.0, 1.0, ProbVector::uniform(3), 2);
  EXPECT_NEAR(r3, 0.5 * (1 - std::pow(1.0 / 3, 0.5)), 1e-14);
  const ProbVector a = ProbVector::point_mass(2, 0), b = ProbVector::point_mass(2, 1);
  EXPECT_NEAR(generalized_fano({a, b}, ProbVector::uniform(2), std::log(2.0), 1.0, ProbVector::uniform(2), 2), 0.0,
              1e-14);
  EXPECT_THROW(generalized_fano({a, b}, ProbVector::uniform(2), 0.1, 1.0, ProbVector::uniform(2), 2), CenterViolation);
}

TEST(GeneralizedFano, BelowMapError) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    std::vector<ProbVector> models;
    Mat rows(4, 5);
    for (Index j = 0; j < 4; ++j) {
      models.push_back(random_prob_vector(rng, 5));
      rows.row(j) = models.back().vec().transpose();
    }
    const ProbVector center = random_prob_vector(rng, 5);
    double beta = 0;
    for (const auto& mdl : models) beta = std::max(beta, renyi_divergence(mdl, center, 2));
    const double gamma = 0.8;
    const double err = exact_map_error(JointPMF::compose(ProbVector::uniform(4), Channel::validated(rows))).error;
    EXPECT_LE(generalized_fano(models, center, beta, gamma, ProbVector::uniform(4), 2), gamma / 2 * err + 1e-12);
  }
}

TEST(BayesRisk, OneDimensionalOracle) {
  BayesRiskProblem p;
  p.small_ball = [](double rho) { return std::min(2 * rho, 1.0); };
  p.information = [](double) { return 0.0; };
  for (int i = 1; i <= 200; ++i) p.rho_grid.push_back(i / 400.0);
  p.alpha_grid = {kInf};
  const BayesRiskBound b = bayes_risk_lower_bound(p);
  EXPECT_NEAR(b.bound, 0.125, 1e-12);
  EXPECT_NEAR(b.best_rho, 0.25, 1e-6);
  p.small_ball = [](double) { return 1.0; };
  p.alpha_grid = {2.0, kInf};
  EXPECT_EQ(bayes_risk_lower_bound(p).bound, 0.0);
}

TEST(BayesRisk, BernoulliLeakageClosedForm) {
  for (int n : {1, 10, 100}) {
    BayesRiskProblem p;
    p.small_ball = [](double rho) { return std::min(2 * rho, 1.0); };
    p.information = [n](double) { return std::log(2 + std::sqrt(M_PI * n / 2)); };
    for (int i = 1; i <= 100; ++i) p.rho_grid.push_back(0.5 * i / 100);
    p.alpha_grid = {kInf};
    EXPECT_NEAR(bayes_risk_lower_bound(p).bound, bernoulli_bias_risk_bounds(n).ml_lower, 1e-12);
  }
}

TEST(BayesRisk, DiscreteExactRisk) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    Vec atoms(5);
    for (Index i = 0; i < 5; ++i) atoms(i) = i / 4.0;
    const ProbVector prior = random_prob_vector(rng, 5);
    const Channel c = random_channel(rng, 5, 3);
    const JointPMF j = JointPMF::compose(prior, c);
    BayesRiskProblem p;
    p.small_ball = [&](double rho) { return oracle::small_ball_abs(atoms, prior.vec(), rho); };
    p.information = [&](double a) { return sibson_mi(j, a).value; };
    for (int i = 1; i <= 100; ++i) p.rho_grid.push_back(i / 100.0);
    p.alpha_grid = {1.5, 3.0, kInf};
    EXPECT_LE(bayes_risk_lower_bound(p).bound, oracle::bayes_risk_abs(atoms, prior.vec(), c.mat()) + 1e-12);
  }
}

TEST(Bernoulli, InfoMatchesQuadrature) {
  EXPECT_NEAR(bernoulli_bias_info(2, 2), 1.2595755626700256, 1e-8);
  EXPECT_NEAR(bernoulli_bias_info(2, 2), oracle::bernoulli_bias_quadrature(2, 2), 1e-8);
  const double a = 1 + 1e-4;
  EXPECT_NEAR(a / (a - 1) * std::log(bernoulli_bias_info(1, a)), std::log(2.0) - 0.5, 1e-4);
  for (int n : {1, 5, 12})
    for (double al : {1.5, 5.0}) EXPECT_NEAR(bernoulli_bias_info(n, al), oracle::bernoulli_bias_quadrature(n, al), 1e-8);
}

TEST(Bernoulli, LeakageBelowAnalyticBound) {
  for (int n = 1; n <= 200; ++n) EXPECT_LE(bernoulli_bias_leakage(n), std::log(2 + std::sqrt(M_PI * n / 2)) + 1e-12);
}

TEST(Bernoulli, RiskBounds) {
  const BernoulliRisk r41 = bernoulli_bias_risk_bounds(41);
  EXPECT_GE(r41.ml_lower, 1 / (5 * std::sqrt(2 * M_PI * 41)));
  const BernoulliRisk r1 = bernoulli_bias_risk_bounds(1);
  EXPECT_LT(r1.ml_lower, r1.mi_upper);
  for (int n : {100, 10000, 1000000}) {
    const BernoulliRisk r = bernoulli_bias_risk_bounds(n);
    EXPECT_LT(r.mi_upper / r.ml_lower, 5.0);
    EXPECT_GT(r.mi_upper / r.ml_lower, 3.0);
  }
}

TEST(Bernoulli, OptimizedBoundSandwich) {
  for (int n : {10, 100}) {
    const BernoulliRisk r = bernoulli_bias_risk_bounds(n);
    const BayesRiskBound b = bernoulli_bias_optimized_bound(n);
    EXPECT_GE(b.bound, r.ml_lower);
    EXPECT_LE(b.bound, r.mi_upper);
  }
}

TEST(ConditionalDependence, ConstantZ) {
  std::mt19937_64 rng(8);
  const JointPMF j = random_instance(9, 3, 3);
  const EventMask e = random_event(rng, 3, 3);
  for (double a : {2.0, kInf}) {
    const BoundSides c = conditional_dependence_bound(JointPMF3::validated({j.mat()}), {e}, a);
    const BoundSides u = dependence_bound(j, e, a);
    EXPECT_NEAR(c.lhs, u.lhs, 1e-12);
    EXPECT_NEAR(c.rhs, u.rhs, 1e-12);
  }
}

TEST(ConditionalDependence, MarkovAndRandom) {
  std::mt19937_64 rng(9);
  // X - Z - Y with an event depending on (x, z) only.
  const ProbVector pz = random_prob_vector(rng, 2);
  std::vector<Mat> s;
  std::vector<EventMask> ev;
  for (Index z = 0; z < 2; ++z) {
    s.push_back(pz(z) * random_prob_vector(rng, 3).vec() * random_prob_vector(rng, 2).vec().transpose());
    EventMask e(3, 2);
    const bool pick[3] = {z == 0, true, false};
    for (Index x = 0; x < 3; ++x) e.row(x).setConstant(pick[x]);
    ev.push_back(e);
  }
  const JointPMF3 markov = JointPMF3::validated(s);
  EXPECT_NEAR(conditional_sibson_mi(markov, 2, ConditionalVariant::MinOverQ_YgZ).value, 0.0, 1e-12);
  const BoundSides m = conditional_dependence_bound(markov, ev, 2);
  EXPECT_LE(m.lhs, m.rhs + 1e-12);

  for (int t = 0; t < 100; ++t) {
    const ProbVector flat = random_prob_vector(rng, 8);
    const JointPMF3 tr = JointPMF3::validated({flat.vec().head(4).reshaped(2, 2), flat.vec().tail(4).reshaped(2, 2)});
    const std::vector<EventMask> e = {random_event(rng, 2, 2), random_event(rng, 2, 2)};
    for (double a : {2.0, kInf}) {
      const BoundSides b = conditional_dependence_bound(tr, e, a);
      EXPECT_LE(b.lhs, b.rhs + 1e-12);
    }
  }
}
