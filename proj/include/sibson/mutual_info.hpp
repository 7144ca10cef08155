#pragma once

#include <sibson/types.hpp>

#include <cstdint>

namespace sibson {

struct SibsonResult {
  double value;
  ProbVector q_star;  ///< minimizing output marginal
  AlphaOrder alpha;
};

/// Sibson α-mutual information I_α(X,Y) in nats together with its optimal Q_Y.
SibsonResult sibson_mi(const JointPMF& joint, AlphaOrder alpha);
SibsonResult sibson_mi(const ProbVector& px, const Channel& channel, AlphaOrder alpha);

/// Shannon mutual information.
double shannon_mi(const JointPMF& joint);

/// Maximal leakage log Σ_y max_{x: P_X(x)>0} P(y|x).
double maximal_leakage(const JointPMF& joint);

/// Closed form for a Gaussian input through additive Gaussian noise:
/// ½ log(1 + α σ²_X/σ²_Y).
double sibson_mi_gaussian(double sigma2_x, double sigma2_y, double alpha);

/// X ~ N(0, var_x) on `points` nodes over ±width σ_X, Y = X + N(0, var_noise) on
/// `points` nodes over ±width σ_Y; rows of the channel are renormalized.
JointPMF discretized_gaussian(double var_x, double var_noise, Index points = 2001, double width = 8);

/// P_X^α renormalized; α=0 is uniform on the support, α=∞ uniform on the argmax set.
ProbVector tilt(const ProbVector& p, AlphaOrder alpha);

/// Arimoto mutual information: Sibson MI at the tilted input.
double arimoto_mi(const JointPMF& joint, AlphaOrder alpha);

struct CsiszarResult {
  double value;
  ProbVector q;
  int iterations;
};

/// min_Q E_{P_X}[D_α(P_{Y|X}‖Q)].
CsiszarResult csiszar_mi(const JointPMF& joint, double alpha, double tol = 1e-13);

struct LapidothPfisterResult {
  double value;
  ProbVector qx;
  ProbVector qy;
};

/// min over product measures Q_X Q_Y of D_α(P_XY‖Q_X Q_Y), best of `restarts`
/// seeded starts. The first start is Q_X = P_X, so the result never exceeds
/// Sibson's value.
LapidothPfisterResult lapidoth_pfister_mi(const JointPMF& joint, double alpha, int restarts = 8,
                                          double tol = 1e-14, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Conditional variants on P_XYZ.

enum class ConditionalVariant {
  MinOverQ_YgZ,  ///< min over Q_{Y|Z} of D_α(P_XYZ‖P_Z P_{X|Z} Q_{Y|Z})
  MinOverQ_Z     ///< min over Q_Z of D_α(P_XYZ‖Q_Z P_{X|Z} P_{Y|Z})
};

struct ConditionalResult {
  double value;
  /// MinOverQ_YgZ: ny-by-nz matrix of columns Q*_{Y|Z=z} (zero columns where P_Z = 0).
  /// MinOverQ_Z: nz-by-1 column Q*_Z.
  Mat q_star;
};

ConditionalResult conditional_sibson_mi(const JointPMF3& triple, AlphaOrder alpha,
                                        ConditionalVariant variant);

/// The product measure the variant compares P_XYZ against, for a given Q.
JointPMF3 conditional_reference(const JointPMF3& triple, ConditionalVariant variant, const Mat& q);

/// D_α between two rank-3 pmfs on the same alphabet.
double renyi_divergence3(const JointPMF3& p, const JointPMF3& q, AlphaOrder alpha);

/// Shannon I(X;Y|Z).
double shannon_cmi(const JointPMF3& triple);

// ---------------------------------------------------------------------------
// Structural checks.

struct CheckSides {
  double lhs;
  double rhs;
};

struct BadWeights : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Outputs of `channels` are conditionally independent given X. Returns
/// lhs = (α-1) I_α(X, Y^n) and rhs = Σ (α - 1/β_i) I_{αβ_i}(X, Y_i).
CheckSides tensorization_check(const std::vector<Channel>& channels, const ProbVector& prior,
                               double alpha, const std::vector<double>& betas);

/// Channel whose output is the tuple of the given channels' outputs, with the
/// first channel's output varying slowest.
Channel product_channel(const std::vector<Channel>& channels);

/// coupling rows are indexed x * nz + z. Returns lhs = I_α(X,(Y,Z)),
/// rhs = I_α((X,Z),Y).
CheckSides independence_dpi_check(const ProbVector& px, const ProbVector& pz,
                                  const Channel& coupling, AlphaOrder alpha);

}  // namespace sibson
