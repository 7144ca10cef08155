#include <sibson/variational.hpp>

#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace sibson {

namespace {

double safe_log(double v) { return v > 0 ? std::log(v) : -kInf; }

void check_shape(const Mat& f, const JointPMF& joint) {
  if (f.rows() != joint.nx() || f.cols() != joint.ny())
    throw std::invalid_argument("test function shape does not match the joint");
}

// log E_P[e^{c f}] over cells with positive joint mass.
double log_moment_joint(const Mat& f, const Mat& p, double c) {
  Vec t = Vec::Constant(p.size(), -kInf);
  Index k = 0;
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y, ++k)
      if (p(x, y) > 0) t(k) = std::log(p(x, y)) + c * f(x, y);
  return logsumexp(t);
}

// log E_{P_X}[e^{c f(·, y)}] for every y.
Vec log_moment_px(const Mat& f, const Vec& px, double c) {
  Vec out(f.cols());
  Vec t(f.rows());
  for (Index y = 0; y < f.cols(); ++y) {
    for (Index x = 0; x < f.rows(); ++x) t(x) = px(x) > 0 ? std::log(px(x)) + c * f(x, y) : -kInf;
    out(y) = logsumexp(t);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

double kl_representation_objective(const JointPMF& r_joint, const JointPMF& base, double alpha) {
  check_shape(r_joint.mat(), base);
  const Mat& r = r_joint.mat();
  const Vec px = base.mat().rowwise().sum();
  const Vec ry = r.colwise().sum().transpose();
  const Mat prod = px * ry.transpose();
  Eigen::Map<const Vec> rv(r.data(), r.size()), pv(base.mat().data(), r.size()), qv(prod.data(), r.size());
  const double d1 = kl_divergence(rv, pv), d2 = kl_divergence(rv, qv);
  if (std::isinf(d1)) return kInf;
  if (std::isinf(d2)) return alpha < 1 ? kInf : -kInf;
  return alpha * d1 + (1 - alpha) * d2;
}

JointPMF kl_representation_minimizer(const JointPMF& base, double alpha) {
  const Mat& p = base.mat();
  const Vec px = p.rowwise().sum();
  const ProbVector q = sibson_mi(base, alpha).q_star;
  Mat t(p.rows(), p.cols());
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y)
      t(x, y) = p(x, y) > 0 && q(y) > 0 ? alpha * std::log(p(x, y)) + (1 - alpha) * (std::log(px(x)) + std::log(q(y)))
                                        : -kInf;
  Eigen::Map<const Vec> flat(t.data(), t.size());
  const double l = logsumexp(flat);
  return JointPMF::normalized((t.array() - l).exp().matrix());
}

// ---------------------------------------------------------------------------

ProbVector r_star(const TestFunction& f, const JointPMF& joint, double alpha) {
  check_shape(f, joint);
  const Mat& p = joint.mat();
  Vec t(p.cols()), cell(p.rows());
  for (Index y = 0; y < p.cols(); ++y) {
    for (Index x = 0; x < p.rows(); ++x)
      cell(x) = p(x, y) > 0 ? std::log(p(x, y)) + (alpha - 1) * f(x, y) : -kInf;
    t(y) = logsumexp(cell);
  }
  const double l = logsumexp(t);
  return ProbVector::normalized((t.array() - l).exp().matrix());
}

double var_rep_one(const TestFunction& f, const JointPMF& joint, double alpha, Reference reference) {
  check_shape(f, joint);
  if (!(alpha > 0) || alpha == 1 || std::isinf(alpha)) throw std::invalid_argument("var_rep_one: alpha in (0,1)∪(1,∞)");
  const bool large = alpha > 1;
  const bool wants_r = reference == Reference::RStar || reference == Reference::ProductRStar;
  if (large != wants_r)
    throw std::invalid_argument("var_rep_one: use an R* reference for α > 1 and a Q* reference for α < 1");

  const Mat& p = joint.mat();
  const Vec px = p.rowwise().sum();
  const double first = alpha / (alpha - 1) * log_moment_joint(f, p, alpha - 1);
  const Vec inner = log_moment_px(f, px, alpha);
  const ProbVector ref = wants_r ? r_star(f, joint, alpha) : sibson_mi(joint, alpha).q_star;

  double term;
  if (reference == Reference::RStar || reference == Reference::QStar) {
    term = 0;
    for (Index y = 0; y < p.cols(); ++y)
      if (ref(y) > 0) term += ref(y) * inner(y);
  } else {
    Vec t(p.cols());
    for (Index y = 0; y < p.cols(); ++y) t(y) = safe_log(ref(y)) + inner(y);
    term = logsumexp(t);
  }
  return first - term;
}

TestFunction log_density_ratio(const JointPMF& joint) {
  const Mat& p = joint.mat();
  const Vec px = p.rowwise().sum();
  const Vec py = p.colwise().sum().transpose();
  Mat f(p.rows(), p.cols());
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y)
      f(x, y) = p(x, y) > 0 ? std::log(p(x, y)) - std::log(px(x)) - std::log(py(y)) : -kInf;
  return f;
}

TestFunction var_rep_one_witness(const JointPMF& joint, double alpha) {
  const Mat lr = log_density_ratio(joint);
  const Vec px = joint.mat().rowwise().sum();
  // log E_{P_X}[ratio^α](y) equals log_moment_px of lr at order α.
  const Vec norm = log_moment_px(lr, px, alpha);
  Mat f(lr.rows(), lr.cols());
  for (Index x = 0; x < f.rows(); ++x)
    for (Index y = 0; y < f.cols(); ++y)
      f(x, y) = std::isinf(lr(x, y)) ? -kInf : lr(x, y) - norm(y) / alpha;
  return f;
}

// ---------------------------------------------------------------------------

double var_rep_ratio(const TestFunction& g, const JointPMF& joint, AlphaOrder alpha) {
  check_shape(g, joint);
  if ((g.array() < 0).any()) throw std::invalid_argument("var_rep_ratio: g must be nonnegative");
  const Mat& p = joint.mat();
  const Vec px = p.rowwise().sum();
  double num = 0;
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y)
      if (p(x, y) > 0) num += p(x, y) * g(x, y);

  using K = AlphaOrder::Kind;
  const Mat log_g = g.unaryExpr([](double v) { return safe_log(v); });
  Vec den(p.cols());
  switch (alpha.kind()) {
    case K::Infinity:
      for (Index y = 0; y < p.cols(); ++y) den(y) = px.dot(g.col(y));
      return num / den.maxCoeff();
    case K::One:
      for (Index y = 0; y < p.cols(); ++y) {
        double m = 0;
        for (Index x = 0; x < p.rows(); ++x)
          if (px(x) > 0) m = std::max(m, g(x, y));
        den(y) = m;
      }
      return num / den.maxCoeff();
    case K::Zero:
      throw std::invalid_argument("var_rep_ratio: alpha must be positive");
    case K::Finite: {
      const double a = alpha.value(), beta = a / (a - 1);
      Vec t(p.rows());
      for (Index y = 0; y < p.cols(); ++y) {
        for (Index x = 0; x < p.rows(); ++x) t(x) = px(x) > 0 ? std::log(px(x)) + beta * log_g(x, y) : -kInf;
        den(y) = std::exp(logsumexp(t) / beta);
      }
      return num / (a > 1 ? den.maxCoeff() : den.minCoeff());
    }
  }
  throw std::logic_error("unreachable");
}

TestFunction var_rep_ratio_witness(const JointPMF& joint, AlphaOrder alpha) {
  const Mat& p = joint.mat();
  const Vec px = p.rowwise().sum();
  using K = AlphaOrder::Kind;
  if (alpha.kind() == K::Infinity) {
    Mat g = Mat::Zero(p.rows(), p.cols());
    for (Index y = 0; y < p.cols(); ++y) {
      double best = 0;
      for (Index x = 0; x < p.rows(); ++x)
        if (px(x) > 0) best = std::max(best, p(x, y) / px(x));
      if (best <= 0) continue;
      double mass = 0;
      for (Index x = 0; x < p.rows(); ++x)
        if (px(x) > 0 && p(x, y) / px(x) >= best * (1 - 1e-14)) {
          g(x, y) = 1;
          mass += px(x);
        }
      g.col(y) /= mass;
    }
    return g;
  }
  if (alpha.kind() != K::Finite) throw std::invalid_argument("var_rep_ratio_witness: alpha must be finite ≠ 1 or ∞");
  const double a = alpha.value();
  const Mat lr = log_density_ratio(joint);
  const Vec norm = log_moment_px(lr, px, a);
  Mat g(p.rows(), p.cols());
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y)
      g(x, y) = std::isinf(lr(x, y)) ? (a > 1 ? 0.0 : kInf) : std::exp((a - 1) * lr(x, y) - (a - 1) / a * norm(y));
  return g;
}

double var_rep_scaled(const TestFunction& f, const JointPMF& joint, double alpha) {
  check_shape(f, joint);
  const Mat& p = joint.mat();
  const Vec px = p.rowwise().sum();
  return log_moment_joint(f, p, alpha - 1) / (alpha - 1) - log_moment_px(f, px, alpha).maxCoeff() / alpha;
}

// ---------------------------------------------------------------------------

namespace {

struct Surrogate {
  double value;
  Mat grad;
};

Surrogate surrogate(const Mat& f, const Mat& p, const Vec& px, double a, double tau) {
  const Index nx = p.rows(), ny = p.cols();
  // First term and its softmax weights.
  Mat t1(nx, ny);
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y) t1(x, y) = std::log(p(x, y)) + (a - 1) * f(x, y);
  Eigen::Map<const Vec> flat(t1.data(), t1.size());
  const double l1 = logsumexp(flat);
  Mat w1 = (t1.array() - l1).exp().matrix();

  Vec inner(ny);
  Mat w2(nx, ny);
  for (Index y = 0; y < ny; ++y) {
    Vec t = (px.array().log() + a * f.col(y).array()).matrix();
    inner(y) = logsumexp(t);
    w2.col(y) = (t.array() - inner(y)).exp().matrix();
  }
  const Vec scaled = tau * inner;
  const double ls = logsumexp(scaled);
  const Vec pi = (scaled.array() - ls).exp().matrix();

  Surrogate s;
  s.value = l1 / (a - 1) - ls / (tau * a);
  s.grad = w1 - w2 * pi.asDiagonal();
  return s;
}

}  // namespace

AscentResult estimate_sibson_by_ascent(const JointPMF& joint, double alpha, int steps, double rate,
                                       std::uint64_t seed, bool strict) {
  if (!(alpha > 1) || std::isinf(alpha)) throw std::invalid_argument("estimate_sibson_by_ascent: alpha must be in (1, ∞)");
  const Mat& p = joint.mat();
  if ((p.array() <= 0).any()) throw std::invalid_argument("estimate_sibson_by_ascent: joint must have full support");
  const Vec px = p.rowwise().sum();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 0.1);
  Mat f(p.rows(), p.cols());
  for (Index i = 0; i < f.size(); ++i) f.data()[i] = n01(rng);

  AscentResult out{alpha * var_rep_scaled(f, joint, alpha), f, {}, false};
  double tau = 10.0;
  const double tau_max = 1e7;
  double step = rate;
  Surrogate cur = surrogate(f, p, px, alpha, tau);
  for (int k = 0; k < steps; ++k) {
    Mat cand = f + step * cur.grad;
    Surrogate next = surrogate(cand, p, px, alpha, tau);
    if (next.value >= cur.value) {
      f = cand;
      cur = next;
      step = std::min(step * 1.1, 1e3);
      const double exact = alpha * var_rep_scaled(f, joint, alpha);
      if (exact > out.estimate) {
        out.estimate = exact;
        out.witness = f;
      }
    } else {
      step *= 0.5;
    }
    const double gnorm = cur.grad.cwiseAbs().maxCoeff();
    if (gnorm < 1e-9 || step < 1e-14) {
      if (tau >= tau_max) {
        out.converged = true;
        break;
      }
      tau = std::min(tau * 10, tau_max);
      step = rate;
      cur = surrogate(f, p, px, alpha, tau);
    }
    if (k % 100 == 0) out.checkpoints.push_back(out.estimate);
  }
  out.checkpoints.push_back(out.estimate);
  if (strict && !out.converged)
    throw NoConvergence("estimate_sibson_by_ascent: step budget exhausted", out.estimate, 0.0);
  return out;
}

DvPair dv_mi_limit_check(const TestFunction& f, const JointPMF& joint) {
  check_shape(f, joint);
  const Mat& p = joint.mat();
  const Vec px = p.rowwise().sum();
  const Vec py = p.colwise().sum().transpose();
  double mean = 0;
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y)
      if (p(x, y) > 0) mean += p(x, y) * f(x, y);
  Vec inner = log_moment_px(f, px, 1.0);
  Vec t(p.cols());
  for (Index y = 0; y < p.cols(); ++y) t(y) = safe_log(py(y)) + inner(y);
  return {mean - logsumexp(t), mean - inner.maxCoeff()};
}

}  // namespace sibson
