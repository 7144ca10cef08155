#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>

namespace sibson {

using K = AlphaOrder::Kind;

double renyi_entropy(const ProbVector& p, AlphaOrder alpha) {
  const Vec& v = p.vec();
  switch (alpha.kind()) {
    case K::Zero:
      return std::log(double((v.array() > 0).count()));
    case K::One: {
      double h = 0;
      for (Index i = 0; i < v.size(); ++i)
        if (v(i) > 0) h -= v(i) * std::log(v(i));
      return h;
    }
    case K::Infinity:
      return -std::log(v.maxCoeff());
    case K::Finite: {
      const double a = alpha.value();
      Vec t = Vec::Constant(v.size(), -kInf);
      for (Index i = 0; i < v.size(); ++i)
        if (v(i) > 0) t(i) = a * std::log(v(i));
      return logsumexp(t) / (1 - a);
    }
  }
  return 0;
}

double cond_renyi_entropy(const JointPMF& joint, AlphaOrder alpha) {
  const Mat& m = joint.mat();
  switch (alpha.kind()) {
    case K::Zero: {
      double best = 0;
      for (Index y = 0; y < m.cols(); ++y)
        best = std::max(best, double((m.col(y).array() > 0).count()));
      return std::log(best);
    }
    case K::One: {
      double hxy = 0, hy = 0;
      for (Index y = 0; y < m.cols(); ++y) {
        const double py = m.col(y).sum();
        if (py > 0) hy -= py * std::log(py);
        for (Index x = 0; x < m.rows(); ++x)
          if (m(x, y) > 0) hxy -= m(x, y) * std::log(m(x, y));
      }
      return hxy - hy;
    }
    case K::Infinity:
      return -std::log(m.colwise().maxCoeff().sum());
    case K::Finite: {
      const double a = alpha.value();
      Vec outer(m.cols());
      for (Index y = 0; y < m.cols(); ++y) {
        Vec t = Vec::Constant(m.rows(), -kInf);
        for (Index x = 0; x < m.rows(); ++x)
          if (m(x, y) > 0) t(x) = a * std::log(m(x, y));
        outer(y) = logsumexp(t) / a;
      }
      return a / (1 - a) * logsumexp(outer);
    }
  }
  return 0;
}

double kl_divergence(const Vec& p, const Vec& q) {
  double d = 0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0) continue;
    if (q(i) <= 0) return kInf;
    d += p(i) * (std::log(p(i)) - std::log(q(i)));
  }
  return std::max(d, 0.0);
}

double renyi_divergence(const Vec& p, const Vec& q, AlphaOrder alpha) {
  if (p.size() != q.size()) throw std::invalid_argument("renyi_divergence: alphabet mismatch");
  switch (alpha.kind()) {
    case K::Zero: {
      double mass = 0;
      for (Index i = 0; i < p.size(); ++i)
        if (p(i) > 0) mass += q(i);
      return mass > 0 ? std::max(-std::log(mass), 0.0) : kInf;
    }
    case K::One:
      return kl_divergence(p, q);
    case K::Infinity: {
      double best = -kInf;
      for (Index i = 0; i < p.size(); ++i) {
        if (p(i) <= 0) continue;
        if (q(i) <= 0) return kInf;
        best = std::max(best, std::log(p(i)) - std::log(q(i)));
      }
      return std::max(best, 0.0);
    }
    case K::Finite: {
      const double a = alpha.value();
      Vec t = Vec::Constant(p.size(), -kInf);
      for (Index i = 0; i < p.size(); ++i) {
        if (p(i) <= 0) continue;
        if (q(i) <= 0) {
          if (a > 1) return kInf;
          continue;
        }
        t(i) = a * std::log(p(i)) + (1 - a) * std::log(q(i));
      }
      const double l = logsumexp(t);
      if (l == -kInf) return kInf;
      return std::max(l / (a - 1), 0.0);
    }
  }
  return 0;
}

double renyi_divergence(const ProbVector& p, const ProbVector& q, AlphaOrder alpha) {
  return renyi_divergence(p.vec(), q.vec(), alpha);
}

double binary_d_alpha(const BinaryDivergenceProblem& prob) {
  if (prob.p < 0 || prob.p > 1 || prob.q < 0 || prob.q > 1)
    throw std::invalid_argument("binary_d_alpha: p and q must lie in [0, 1]");
  const double a = prob.alpha.value();
  if (prob.alpha.is_finite_generic() && prob.p > 0 && prob.p < 1 && prob.q > 0 && prob.q < 1) {
    // Σ q (p/q)^α - 1 written with expm1 so the O((p-q)²) result survives
    // the cancellation of its two first-order terms.
    const double s = prob.q * std::expm1(a * std::log(prob.p / prob.q)) +
                     (1 - prob.q) * std::expm1(a * (std::log1p(-prob.p) - std::log1p(-prob.q)));
    return std::max(std::log1p(s) / (a - 1), 0.0);
  }
  Vec p(2), q(2);
  p << prob.p, 1 - prob.p;
  q << prob.q, 1 - prob.q;
  return renyi_divergence(p, q, prob.alpha);
}

double binary_d_alpha_inverse(double target, double delta, AlphaOrder alpha) {
  if (!(target >= 0)) throw InvalidTarget("binary_d_alpha_inverse: target must be nonnegative");
  if (delta < 0 || delta >= 1) throw std::invalid_argument("binary_d_alpha_inverse: delta outside [0, 1)");
  if (target >= -std::log1p(-delta)) return 0.0;
  // d_α is quadratic around δ, so rounding would otherwise stop short by ~1e-8.
  if (target == 0) return delta;
  double lo = 0, hi = delta;  // d(lo) >= target >= d(hi)
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (binary_d_alpha({mid, delta, alpha}) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double phi_entropy(const Vec& values, const ProbVector& weights, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("phi_entropy: alpha must lie in (0, 1)");
  if ((values.array() <= 0).any()) throw std::invalid_argument("phi_entropy: values must be positive");
  const Vec& w = weights.vec();
  const double mean_log = w.dot(values.array().log().matrix());
  const double log_mean = std::log(w.dot(values));
  return std::max((mean_log - log_mean) / (alpha - 1), 0.0);
}

double kl_variational_objective(const ProbVector& r, const ProbVector& p, const ProbVector& q,
                                double alpha) {
  const double dp = kl_divergence(r.vec(), p.vec());
  const double dq = kl_divergence(r.vec(), q.vec());
  if (std::isinf(dp)) return kInf;
  if (std::isinf(dq)) return alpha < 1 ? kInf : -kInf;
  return alpha * dp + (1 - alpha) * dq;
}

ProbVector kl_variational_minimizer(const ProbVector& p, const ProbVector& q, double alpha) {
  Vec t = Vec::Constant(p.size(), -kInf);
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > 0 && q(i) > 0) t(i) = alpha * std::log(p(i)) + (1 - alpha) * std::log(q(i));
  const double l = logsumexp(t);
  if (l == -kInf) throw std::invalid_argument("kl_variational_minimizer: disjoint supports");
  return ProbVector::normalized((t.array() - l).exp().matrix());
}

double dv_renyi_functional(const Vec& f, const ProbVector& p, const ProbVector& q, double alpha) {
  Vec a = Vec::Constant(f.size(), -kInf), b = Vec::Constant(f.size(), -kInf);
  for (Index i = 0; i < f.size(); ++i) {
    if (p(i) > 0) a(i) = std::log(p(i)) + (alpha - 1) * f(i);
    if (q(i) > 0) b(i) = std::log(q(i)) + alpha * f(i);
  }
  return logsumexp(a) / (alpha - 1) - logsumexp(b) / alpha;
}

}  // namespace sibson
