#pragma once

#include <sibson/types.hpp>

#include <functional>
#include <vector>

namespace sibson {

/// Boolean mask over (x, y) cells; for rank-3 joints, one mask per z.
using EventMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Probability-valued bounds keep the unclamped formula value alongside.
struct ProbBound {
  double value;  ///< clamped to [0, 1]
  double raw;
};

struct BoundSides {
  double lhs;
  double rhs;
};

/// P_XY(E) ≤ max_y P_X(E_y)^{1/β} exp(((α-1)/α) I_α), β = α/(α-1). α = ∞ allowed.
BoundSides dependence_bound(const JointPMF& joint, const EventMask& event, AlphaOrder alpha);

/// E_P[f] ≤ max_y E_{P_X}[f^β(·,y)]^{1/β} exp(((α-1)/α) I_α) for nonnegative f, α > 1.
BoundSides dependence_bound(const JointPMF& joint, const Mat& f, AlphaOrder alpha);

struct NonpositiveFunction : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// For α in (0,1): E_P[f] ≥ min_y E_{P_X}[f^β(·,y)]^{1/β} exp(((α-1)/α) I_α), β < 0.
BoundSides dependence_lower_bound(const JointPMF& joint, const Mat& f, double alpha);

struct ShatteringWitness {
  ProbVector px;
  EventMask event;
};

/// g(y) = lowest-index argmax_x P(y|x); P_X uniform on g(Y); E = {x = g(y)}.
ShatteringWitness shattering_witness(const Channel& channel);

ProbBound gen_error_bound(int n, double eta, double info, AlphaOrder alpha);

/// Bound on 1 - p¹_n: exp(-((α-1)/α) n (R - I_α)).
ProbBound hypothesis_testing_bound(int n, double rate, double info, AlphaOrder alpha);

struct TpcResult {
  bool condition_ok;
  double gap;     ///< √(2c I_α/α) - (E_P[f] - E_{P_X P_Y}[f]) when the condition holds
  double margin;  ///< smallest slack of the κ-grid condition (negative when it fails)
};

/// Checks the sub-Gaussian-with-φ-entropy condition on a κ-grid, then the
/// transportation-cost conclusion. α in (0,1). A finite grid only verifies a
/// necessary condition.
TpcResult tpc_check(const JointPMF& joint, const Mat& f, double alpha, double c, const std::vector<double>& kappa_grid);

/// 101 points on [-10, 10].
std::vector<double> default_kappa_grid();

/// c = M²(2-α) for |f| ≤ M.
double tpc_bounded_constant(double m, double alpha);

/// ε ≥ d_α^{-1}(I_α ‖ 1 - p*), p* = max_x P_X(x).
double fano_dalpha_bound(const JointPMF& joint, AlphaOrder alpha);

struct FanoLike {
  ProbBound bound;      ///< at the given or optimized γ
  double gamma;         ///< γ used (optimized if requested)
  ProbBound corollary;  ///< γ → ∞ limit (p* e^{I_α})^{(α-1)/α}
};

/// Upper bound on the MAP success probability. gamma ≤ 0 requests golden
/// section over log γ ∈ [-20, 20].
FanoLike fano_like_bound(const JointPMF& joint, double alpha, double gamma = 0);

/// 1 - exp(-((α-1)/α)(H_α(X) - I^A_α(X,Y))), clamped.
ProbBound fano_arimoto_bound(const JointPMF& joint, double alpha);

struct MapError {
  double error;
  std::vector<Index> rule;  ///< x̂(y), lowest index on ties
};

MapError exact_map_error(const JointPMF& joint);

struct CenterViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// (γ/2)(1 - (max_j prior_j · e^{min(I_α(J,Y), β_bound)})^{(α-1)/α}), α > 1.
double generalized_fano(const std::vector<ProbVector>& models, const ProbVector& center, double beta_bound,
                        double gamma, const ProbVector& prior, double alpha);

struct BayesRiskProblem {
  std::function<double(double)> small_ball;   ///< L_W(ρ)
  std::function<double(double)> information;  ///< α ↦ I_α(W, X)
  std::vector<double> rho_grid;
  std::vector<double> alpha_grid;  ///< α > 1; +inf allowed
};

struct BayesRiskBound {
  double bound;
  double best_rho;
  double best_alpha;
};

/// max over the grids (golden-section refinement in ρ) of
/// ρ (1 - exp(((α-1)/α)(I_α + log L_W(ρ)))), clamped below at 0.
BayesRiskBound bayes_risk_lower_bound(const BayesRiskProblem& problem);

/// exp(((α-1)/α) I_α(W, Xⁿ)) for W uniform on [0,1] and Xⁿ i.i.d. Bernoulli(W).
double bernoulli_bias_info(int n, double alpha);

/// log Σ_k C(n,k) (k/n)^k (1-k/n)^{n-k}, the maximal leakage of the same model.
double bernoulli_bias_leakage(int n);

struct BernoulliRisk {
  double ml_lower;  ///< 1 / (8 (2 + √(πn/2)))
  double mi_upper;  ///< 1 / √(6n)
};

BernoulliRisk bernoulli_bias_risk_bounds(int n);

/// Bayes-risk lower bound for the absolute-error Bernoulli-bias problem,
/// optimized over ρ and α (α grid includes +inf).
BayesRiskBound bernoulli_bias_optimized_bound(int n);

/// Conditional version on P_XYZ: rhs = E_{P_Z}^{1/β}[max_{y: P(y|z)>0} P_{X|Z}(E_{y,z})^β... ] exp(((α-1)/α) I^{Y|Z}_α).
/// `event` holds one nx-by-ny mask per z.
BoundSides conditional_dependence_bound(const JointPMF3& triple, const std::vector<EventMask>& event,
                                        AlphaOrder alpha);

}  // namespace sibson
