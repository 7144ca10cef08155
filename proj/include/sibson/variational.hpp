#pragma once

#include <sibson/types.hpp>

#include <cstdint>
#include <vector>

namespace sibson {

/// Tabulated test function on X×Y: f (real-valued) or g (strictly positive).
using TestFunction = Mat;

/// α D(R‖P) + (1-α) D(R‖P_X R_Y), with R_Y the Y-marginal of r_joint.
double kl_representation_objective(const JointPMF& r_joint, const JointPMF& base, double alpha);

/// R* ∝ P_XY^α (P_X Q*_Y)^{1-α}, the minimizer of the objective above.
JointPMF kl_representation_minimizer(const JointPMF& base, double alpha);

/// Reference measure subtracted in the log-moment representations.
///  RStar, QStar:               - E_{ref}[log E_{P_X}[e^{αf}]]
///  ProductRStar, ProductQStar: - log E_{P_X ref}[e^{αf}]
enum class Reference { RStar, QStar, ProductRStar, ProductQStar };

/// (α/(α-1)) log E_P[e^{(α-1)f}] minus the reference term.
double var_rep_one(const TestFunction& f, const JointPMF& joint, double alpha, Reference reference);

/// R*_Y(y) ∝ Σ_x P_XY(x,y) e^{(α-1) f(x,y)}.
ProbVector r_star(const TestFunction& f, const JointPMF& joint, double alpha);

/// Maximizer of var_rep_one: αf* = α log(ratio) - log E_{P_X}[ratio^α](y), ratio = dP_XY/dP_X P_Y.
/// Cells with zero joint mass get a large negative value.
TestFunction var_rep_one_witness(const JointPMF& joint, double alpha);

/// E_P[g] / max_y E_{P_X}[g^β(·,y)]^{1/β} with β = α/(α-1) (min_y for α<1).
/// α = ∞ uses β = 1.
double var_rep_ratio(const TestFunction& g, const JointPMF& joint, AlphaOrder alpha);

/// g*^β = ratio^α / E_{P_X}[ratio^α](y); at α = ∞ the normalized argmax indicator.
TestFunction var_rep_ratio_witness(const JointPMF& joint, AlphaOrder alpha);

/// (1/(α-1)) log E_P[e^{(α-1)f}] - (1/α) log max_y E_{P_X}[e^{αf}]; supremum is I_α/α.
double var_rep_scaled(const TestFunction& f, const JointPMF& joint, double alpha);

struct AscentResult {
  double estimate;                 ///< lower bound on I_α (α times the best functional value)
  TestFunction witness;            ///< f attaining `estimate`
  std::vector<double> checkpoints; ///< best-so-far estimate, every 100 steps
  bool converged;
};

/// Gradient ascent on var_rep_scaled over tabular f. Requires α > 1 and a
/// full-support joint. Throws NoConvergence with the best estimate when
/// `steps` run out before the stationarity test passes and `strict` is set.
AscentResult estimate_sibson_by_ascent(const JointPMF& joint, double alpha, int steps = 100000,
                                       double rate = 0.1, std::uint64_t seed = 0, bool strict = false);

struct DvPair {
  double strong;  ///< E_P[f] - log E_{P_X P_Y}[e^f]
  double weak;    ///< E_P[f] - log max_y E_{P_X}[e^f]
};

DvPair dv_mi_limit_check(const TestFunction& f, const JointPMF& joint);

/// log dP_XY / dP_X P_Y, with a large negative value on zero-mass cells.
TestFunction log_density_ratio(const JointPMF& joint);

}  // namespace sibson
