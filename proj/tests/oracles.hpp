#pragma once

// Reference implementations used only by the tests. Each one takes a
// different numerical route from the library: plain linear-domain sums,
// brute-force enumeration, quadrature or dense grids.

#include <Eigen/Dense>

#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Channel-form Sibson MI from the linear-domain sum; alpha finite, not 1.
double sibson(const Mat& pxy, double alpha);
/// Shannon MI by direct summation.
double shannon_mi(const Mat& pxy);
/// log Σ_y max_{x: P_X(x)>0} P(y|x).
double leakage(const Mat& pxy);
/// Shannon I(X;Y|Z) from slices P_XY|z scaled by P_Z.
double shannon_cmi(const std::vector<Mat>& slices);

/// (1/(α-1)) log Σ p^α q^{1-α}; finite α ≠ 1.
double renyi_div(const Vec& p, const Vec& q, double alpha);
double renyi_entropy(const Vec& p, double alpha);
/// Binary Rényi divergence written out for two-point distributions.
double binary_d(double p, double q, double alpha);

/// Best success probability over all |X|^|Y| deterministic decision rules.
double brute_force_map_success(const Mat& pxy);

/// log 2 + (1/(α-1)) log(ε^α + (1-ε)^α) and its limits; alpha may be 0, 1, inf.
double bsc_closed(double eps, double alpha);
/// BEC with uniform input. Forward direction I(X,Y).
double bec_forward(double delta, double alpha);
/// Reverse direction I(Y,X).
double bec_reverse(double delta, double alpha);

/// Σ_k C(n,k) (∫ w^{kα} (1-w)^{(n-k)α} dw)^{1/α} by composite Simpson.
double bernoulli_bias_quadrature(int n, double alpha, int panels = 10000);

/// -log Σ_y (Σ_x p(x) W(y|x)^{1/(1+ρ)})^{1+ρ} in linear arithmetic.
double e0(const Mat& w, const Vec& px, double rho);
/// max over an evenly spaced ρ grid on [0, 1] of E0(ρ) - ρR, uniform input.
double random_coding_grid(const Mat& w, double rate, int points = 100001);

/// Projection onto the simplex by bisection on the threshold.
Vec simplex_projection_bisect(const Vec& v);

/// Learner on n i.i.d. Bernoulli(theta) labels that outputs a constant
/// predictor h = rule[s] in {0, 1}, s the bit pattern of the sample.
struct LearningTail {
  Mat joint;    ///< P(S, H), 2^n by 2
  double tail;  ///< P(|L_D(H) - L_S(H)| ≥ eta) under 0-1 loss
};
LearningTail learning_tail(int n, double theta, const std::vector<int>& rule, double eta);

/// Every deterministic test on n samples from a joint: the null acceptance
/// probability 1 - p1 and the largest rate R with P_X^n(A_{y^n}) ≤ e^{-nR}
/// for every output sequence.
struct TestPoint {
  double accept_null;
  double rate;
};
std::vector<TestPoint> all_tests(const Mat& pxy, int n);

/// Bayes risk under absolute loss for a discrete prior on atoms observed
/// through a channel (rows indexed by atom).
double bayes_risk_abs(const Vec& atoms, const Vec& prior, const Mat& channel);
/// sup_w P(|W - w| < rho) for a discrete prior.
double small_ball_abs(const Vec& atoms, const Vec& prior, double rho);

}  // namespace oracle
