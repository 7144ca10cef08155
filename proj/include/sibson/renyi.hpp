#pragma once

#include <sibson/types.hpp>

namespace sibson {

/// Rényi entropy in nats. α=1 Shannon, α=∞ min-entropy, α=0 log of the support size.
double renyi_entropy(const ProbVector& p, AlphaOrder alpha);

/// Arimoto-style conditional Rényi entropy H_α(X|Y) of a joint indexed (x, y).
double cond_renyi_entropy(const JointPMF& joint, AlphaOrder alpha);

/// Rényi divergence D_α(p‖q); +inf on support violations for α ≥ 1.
double renyi_divergence(const ProbVector& p, const ProbVector& q, AlphaOrder alpha);
double renyi_divergence(const Vec& p, const Vec& q, AlphaOrder alpha);

double kl_divergence(const Vec& p, const Vec& q);

struct BinaryDivergenceProblem {
  double p;
  double q;
  AlphaOrder alpha;
};

double binary_d_alpha(const BinaryDivergenceProblem& prob);

struct InvalidTarget : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The ε in [0, δ] with d_α(ε‖δ) = target, by bisection. Returns 0 once the
/// target reaches -log(1-δ), where no ε in the range attains it.
double binary_d_alpha_inverse(double target, double delta, AlphaOrder alpha);

/// E[φ(V)] - φ(E[V]) for φ(v) = log(v) / (α-1), α in (0,1).
double phi_entropy(const Vec& values, const ProbVector& weights, double alpha);

/// α D(r‖p) + (1-α) D(r‖q).
double kl_variational_objective(const ProbVector& r, const ProbVector& p, const ProbVector& q,
                                double alpha);

/// r* ∝ p^α q^(1-α), the minimizer of kl_variational_objective.
ProbVector kl_variational_minimizer(const ProbVector& p, const ProbVector& q, double alpha);

/// (1/(α-1)) log E_p[e^{(α-1)f}] - (1/α) log E_q[e^{αf}].
double dv_renyi_functional(const Vec& f, const ProbVector& p, const ProbVector& q, double alpha);

}  // namespace sibson
