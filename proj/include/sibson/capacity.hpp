#pragma once

#include <sibson/types.hpp>

#include <vector>

namespace sibson {

struct CapacityResult {
  double value;
  ProbVector optimal_input;
  ProbVector optimal_output;  ///< minimax center Q
  int iterations;
  double gap;  ///< max_x D_α(W_x‖Q) - I_α(P): upper minus lower bound
};

/// sup_{P_X} I_α(X,Y) = min_Q max_x D_α(P_{Y|X=x}‖Q). The pair (P, Q*_P) is
/// refined until the duality gap drops below `tol`.
CapacityResult sibson_capacity(const Channel& channel, AlphaOrder alpha, double tol = 1e-10);

/// Projected-gradient ascent of I_α(P_X) over the simplex; α ≥ 1 only.
/// Independent of sibson_capacity; used as its cross-check.
CapacityResult sibson_capacity_ascent(const Channel& channel, double alpha, double tol = 1e-14);

/// max_x D_α(W_x‖q) for a given center q.
double max_radius(const Channel& channel, const ProbVector& q, AlphaOrder alpha);

bool is_alpha_weakly_symmetric(const Channel& channel, double alpha, double tol = 1e-9);

struct NotSymmetric : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// I_α at the uniform input for α-weakly symmetric channels.
double symmetric_capacity(const Channel& channel, double alpha);

/// sup_P min_y -log P(S_y), S_y = {x : P(y|x) > 0}. Solved exactly as the
/// linear program max 1ᵀu s.t. A u ≤ 1, u ≥ 0, whose optimum is exp(C).
/// optimal_output is the normalized dual solution over y.
CapacityResult zero_error_feedback_capacity(const Channel& channel, double tol = 1e-12);

/// -log Σ_y (Σ_x P(x) P(y|x)^{1/(1+ρ)})^{1+ρ}.
double gallager_e0(const Channel& channel, const ProbVector& input, double rho);

enum class ExponentKind { SpherePacking, RandomCoding };

struct ExponentCurve {
  std::vector<double> rates;
  std::vector<double> exponents;
  std::vector<double> best_rho;
  ExponentKind kind;
};

/// sup_ρ ρ C_{1/(1+ρ)} - ρ R over ρ ∈ [1e-6, 1e3] (sphere packing) or [0, 1]
/// (random coding): 64-point log grid, then golden section in log ρ.
ExponentCurve error_exponents(const Channel& channel, const std::vector<double>& rates, ExponentKind kind,
                              double tol = 1e-12);

struct NmlResult {
  ProbVector predictor;
  double regret;  ///< max_θ D_α(p_θ‖predictor)
};

/// α-NML predictor ∝ (Σ_θ prior(θ) p_θ^α)^{1/α}; α = ∞ is the Shtarkov NML.
NmlResult alpha_nml(const Channel& models, const ProbVector& prior, AlphaOrder alpha);

}  // namespace sibson
