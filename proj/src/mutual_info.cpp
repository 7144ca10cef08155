#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>

namespace sibson {

using K = AlphaOrder::Kind;

namespace {

double safe_log(double v) { return v > 0 ? std::log(v) : -kInf; }

// Uniform over the entries of `score` within a relative 1e-14 of the maximum.
ProbVector uniform_on_argmax(const Vec& score) {
  const double m = score.maxCoeff();
  Vec w = Vec::Zero(score.size());
  for (Index i = 0; i < score.size(); ++i)
    if (score(i) >= m - 1e-14 * std::abs(m)) w(i) = 1.0;
  return ProbVector::normalized(w);
}

}  // namespace

double shannon_mi(const JointPMF& joint) {
  const Mat& m = joint.mat();
  const Vec px = m.rowwise().sum();
  const Vec py = m.colwise().sum().transpose();
  double acc = 0;
  for (Index x = 0; x < m.rows(); ++x)
    for (Index y = 0; y < m.cols(); ++y)
      if (m(x, y) > 0) acc += m(x, y) * (std::log(m(x, y)) - std::log(px(x)) - std::log(py(y)));
  return std::max(acc, 0.0);
}

SibsonResult sibson_mi(const JointPMF& joint, AlphaOrder alpha) {
  const Mat& m = joint.mat();
  const Vec px = m.rowwise().sum();
  const Index ny = m.cols();
  switch (alpha.kind()) {
    case K::One:
      return {shannon_mi(joint), marginal_y(joint), alpha};
    case K::Infinity: {
      Vec g = Vec::Zero(ny);
      for (Index x = 0; x < m.rows(); ++x)
        if (px(x) > 0) g = g.cwiseMax(m.row(x).transpose() / px(x));
      const double s = g.sum();
      return {std::max(std::log(s), 0.0), ProbVector::normalized(g), alpha};
    }
    case K::Zero: {
      // Only y with P_Y(y) > 0 take part; for those P_X(S_y) > 0.
      Vec s = Vec::Constant(ny, -1.0);
      for (Index y = 0; y < ny; ++y) {
        double mass = 0;
        for (Index x = 0; x < m.rows(); ++x)
          if (m(x, y) > 0) mass += px(x);
        if (mass > 0) s(y) = mass;
      }
      return {std::max(-std::log(s.maxCoeff()), 0.0), uniform_on_argmax(s), alpha};
    }
    case K::Finite: {
      const double a = alpha.value();
      Vec log_g(ny);
      Vec t(m.rows());
      for (Index y = 0; y < ny; ++y) {
        for (Index x = 0; x < m.rows(); ++x)
          t(x) = m(x, y) > 0 ? a * std::log(m(x, y)) + (1 - a) * std::log(px(x)) : -kInf;
        log_g(y) = logsumexp(t) / a;
      }
      const double l = logsumexp(log_g);
      Vec q = (log_g.array() - l).exp().matrix();
      return {std::max(a / (a - 1) * l, 0.0), ProbVector::normalized(q), alpha};
    }
  }
  throw std::logic_error("unreachable");
}

SibsonResult sibson_mi(const ProbVector& px, const Channel& channel, AlphaOrder alpha) {
  return sibson_mi(JointPMF::compose(px, channel), alpha);
}

double maximal_leakage(const JointPMF& joint) { return sibson_mi(joint, AlphaOrder::infinity()).value; }

double sibson_mi_gaussian(double sigma2_x, double sigma2_y, double alpha) {
  if (!(sigma2_x > 0 && sigma2_y > 0)) throw std::invalid_argument("variances must be positive");
  if (!(alpha >= 0)) throw std::invalid_argument("alpha must be nonnegative");
  return 0.5 * std::log1p(alpha * sigma2_x / sigma2_y);
}

JointPMF discretized_gaussian(double var_x, double var_noise, Index points, double width) {
  if (!(var_x > 0 && var_noise > 0)) throw std::invalid_argument("variances must be positive");
  if (points < 2 || !(width > 0)) throw std::invalid_argument("need at least two nodes and a positive width");
  const double sx = std::sqrt(var_x), sy = std::sqrt(var_x + var_noise);
  const Vec xs = Vec::LinSpaced(points, -width * sx, width * sx);
  const Vec ys = Vec::LinSpaced(points, -width * sy, width * sy);
  const Vec px = (-0.5 * xs.array().square() / var_x).exp();
  Mat w(points, points);
  for (Index i = 0; i < points; ++i) {
    w.row(i) = (-0.5 * (ys.array() - xs(i)).square() / var_noise).exp().transpose();
    w.row(i) /= w.row(i).sum();
  }
  return JointPMF::normalized(w.array().colwise() * (px / px.sum()).array());
}

ProbVector tilt(const ProbVector& p, AlphaOrder alpha) {
  const Vec& v = p.vec();
  switch (alpha.kind()) {
    case K::One:
      return p;
    case K::Zero:
      return ProbVector::normalized((v.array() > 0).cast<double>().matrix());
    case K::Infinity:
      return uniform_on_argmax(v);
    case K::Finite: {
      Vec t(v.size());
      for (Index i = 0; i < v.size(); ++i) t(i) = alpha.value() * safe_log(v(i));
      const double l = logsumexp(t);
      return ProbVector::normalized((t.array() - l).exp().matrix());
    }
  }
  throw std::logic_error("unreachable");
}

double arimoto_mi(const JointPMF& joint, AlphaOrder alpha) {
  const Marginals mg = marginals(joint);
  const ProbVector tilted = tilt(mg.px, alpha);
  return sibson_mi(JointPMF::normalized(recompose(tilted, mg.y_given_x)), alpha).value;
}

// ---------------------------------------------------------------------------
// Csiszár

namespace {

struct CsiszarProblem {
  Vec px;        // inputs with positive mass only
  Mat log_w;     // log P(y|x) on those inputs, restricted outputs
  double a;

  // log c_x(Q) = log Σ_y W^α Q^{1-α}
  Vec log_c(const Vec& log_q) const {
    Vec out(px.size());
    Vec t(log_q.size());
    for (Index x = 0; x < px.size(); ++x) {
      for (Index y = 0; y < log_q.size(); ++y)
        t(y) = std::isinf(log_w(x, y)) || std::isinf(log_q(y))
                   ? (std::isinf(log_w(x, y)) ? -kInf : (a > 1 ? kInf : -kInf))
                   : a * log_w(x, y) + (1 - a) * log_q(y);
      out(x) = logsumexp(t);
    }
    return out;
  }

  double objective(const Vec& q) const {
    Vec lq = q.array().log().matrix();
    Vec lc = log_c(lq);
    double v = 0;
    for (Index x = 0; x < px.size(); ++x) {
      if (std::isinf(lc(x)) && lc(x) > 0) return kInf;
      v += px(x) * lc(x) / (a - 1);
    }
    return v;
  }

  // ∂/∂Q(y) of the objective.
  Vec gradient(const Vec& q) const {
    Vec lq = q.array().log().matrix();
    Vec lc = log_c(lq);
    Vec g = Vec::Zero(q.size());
    for (Index y = 0; y < q.size(); ++y)
      for (Index x = 0; x < px.size(); ++x)
        if (!std::isinf(log_w(x, y))) g(y) -= px(x) * std::exp(a * log_w(x, y) - a * lq(y) - lc(x));
    return g;
  }

  Vec fixed_point(const Vec& q) const {
    Vec lq = q.array().log().matrix();
    Vec lc = log_c(lq);
    Vec t(q.size()), s(px.size());
    for (Index y = 0; y < q.size(); ++y) {
      for (Index x = 0; x < px.size(); ++x)
        s(x) = std::isinf(log_w(x, y)) ? -kInf : std::log(px(x)) + a * log_w(x, y) - lc(x);
      t(y) = logsumexp(s) / a;
    }
    const double l = logsumexp(t);
    return (t.array() - l).exp().matrix();
  }
};

}  // namespace

CsiszarResult csiszar_mi(const JointPMF& joint, double alpha, double tol) {
  if (!(alpha > 0) || std::isinf(alpha)) throw std::invalid_argument("csiszar_mi: alpha must be finite and positive");
  const SibsonResult sib = sibson_mi(joint, alpha);
  if (AlphaOrder(alpha).kind() == K::One) return {sib.value, sib.q_star, 0};

  const Mat& m = joint.mat();
  const Vec px_full = m.rowwise().sum();
  const Vec py_full = m.colwise().sum().transpose();
  std::vector<Index> xs, ys;
  for (Index x = 0; x < m.rows(); ++x)
    if (px_full(x) > 0) xs.push_back(x);
  for (Index y = 0; y < m.cols(); ++y)
    if (py_full(y) > 0) ys.push_back(y);

  CsiszarProblem prob{Vec(Index(xs.size())), Mat(Index(xs.size()), Index(ys.size())), alpha};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prob.px(Index(i)) = px_full(xs[i]);
    for (std::size_t j = 0; j < ys.size(); ++j)
      prob.log_w(Index(i), Index(j)) = safe_log(m(xs[i], ys[j]) / px_full(xs[i]));
  }

  Vec q(Index(ys.size()));
  for (std::size_t j = 0; j < ys.size(); ++j) q(Index(j)) = sib.q_star(ys[j]);
  double f = prob.objective(q);
  double step = 1.0;
  const int cap = 100000;
  int it = 0;
  for (; it < cap; ++it) {
    Vec cand = prob.fixed_point(q);
    double fc = prob.objective(cand);
    if (!(fc < f)) {
      // Projected-gradient step with backtracking.
      const Vec g = prob.gradient(q);
      bool moved = false;
      for (double t = step; t > 1e-18; t *= 0.5) {
        cand = project_to_simplex(q - t * g);
        fc = prob.objective(cand);
        if (fc < f) {
          step = std::min(2 * t, 1e3);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    const double dec = f - fc;
    q = cand;
    f = fc;
    if (dec < tol) break;
  }
  Vec q_full = Vec::Zero(m.cols());
  for (std::size_t j = 0; j < ys.size(); ++j) q_full(ys[j]) = q(Index(j));
  if (it == cap) throw NoConvergence("csiszar_mi: iteration cap reached", f, 0.0);
  return {std::max(f, 0.0), ProbVector::normalized(q_full), it};
}

// ---------------------------------------------------------------------------
// Lapidoth-Pfister

namespace {

// One-sided tilting: returns log of the unnormalized optimizer (A^{1/α}) for the
// side indexed by the rows of `log_p`, given log of the other side's Q.
Vec lp_tilt(const Mat& log_p, const Vec& log_q_other, double a) {
  Vec out(log_p.rows());
  Vec t(log_p.cols());
  for (Index i = 0; i < log_p.rows(); ++i) {
    for (Index j = 0; j < log_p.cols(); ++j)
      t(j) = std::isinf(log_p(i, j)) ? -kInf : a * log_p(i, j) + (1 - a) * log_q_other(j);
    out(i) = logsumexp(t) / a;
  }
  return out;
}

}  // namespace

LapidothPfisterResult lapidoth_pfister_mi(const JointPMF& joint, double alpha, int restarts, double tol,
                                          std::uint64_t seed) {
  if (!(alpha > 0) || std::isinf(alpha)) throw std::invalid_argument("lapidoth_pfister_mi: alpha must be finite and positive");
  if (restarts < 1) throw std::invalid_argument("lapidoth_pfister_mi: need at least one start");
  const ProbVector px = marginal_x(joint), py = marginal_y(joint);
  if (AlphaOrder(alpha).kind() == K::One) return {shannon_mi(joint), px, py};

  const Mat& m = joint.mat();
  const Mat log_p = m.unaryExpr([](double v) { return safe_log(v); });
  const Mat log_pt = log_p.transpose();
  std::mt19937_64 rng(seed);

  double best = kInf;
  Vec best_qx, best_qy;
  bool capped = false;
  for (int r = 0; r < restarts; ++r) {
    Vec log_qx = r == 0 ? Vec(px.vec().unaryExpr([](double v) { return safe_log(v); }))
                        : Vec(random_prob_vector(rng, m.rows()).vec().array().log().matrix());
    Vec log_qy;
    double prev = kInf, val = kInf;
    int it = 0;
    for (; it < 100000; ++it) {
      Vec uy = lp_tilt(log_pt, log_qx, alpha);
      double ly = logsumexp(uy);
      log_qy = uy.array() - ly;
      Vec ux = lp_tilt(log_p, log_qy, alpha);
      double lx = logsumexp(ux);
      log_qx = ux.array() - lx;
      val = alpha / (alpha - 1) * lx;
      if (prev - val < tol) break;
      prev = val;
    }
    if (it == 100000) capped = true;
    if (val < best) {
      best = val;
      best_qx = log_qx.array().exp();
      best_qy = log_qy.array().exp();
    }
  }
  if (capped && !std::isfinite(best)) throw NoConvergence("lapidoth_pfister_mi: iteration cap reached", best, 0.0);
  return {std::max(best, 0.0), ProbVector::normalized(best_qx), ProbVector::normalized(best_qy)};
}

// ---------------------------------------------------------------------------

Channel product_channel(const std::vector<Channel>& channels) {
  if (channels.empty()) throw std::invalid_argument("product_channel: no channels");
  Mat w = channels.front().mat();
  for (std::size_t i = 1; i < channels.size(); ++i) {
    const Mat& c = channels[i].mat();
    if (c.rows() != w.rows()) throw std::invalid_argument("product_channel: input sizes differ");
    Mat next(w.rows(), w.cols() * c.cols());
    for (Index x = 0; x < w.rows(); ++x)
      for (Index a = 0; a < w.cols(); ++a)
        for (Index b = 0; b < c.cols(); ++b) next(x, a * c.cols() + b) = w(x, a) * c(x, b);
    w = next;
  }
  return Channel::normalized(w);
}

CheckSides tensorization_check(const std::vector<Channel>& channels, const ProbVector& prior, double alpha,
                               const std::vector<double>& betas) {
  if (betas.size() != channels.size()) throw BadWeights("tensorization_check: one beta per channel");
  double s = 0;
  for (double b : betas) {
    if (!(b > 0)) throw BadWeights("tensorization_check: betas must be positive");
    s += 1.0 / b;
  }
  if (std::abs(s - 1.0) > 1e-9) throw BadWeights("tensorization_check: Σ 1/β_i must equal 1");
  const double lhs = (alpha - 1) * sibson_mi(prior, product_channel(channels), alpha).value;
  double rhs = 0;
  for (std::size_t i = 0; i < channels.size(); ++i)
    rhs += (alpha - 1.0 / betas[i]) * sibson_mi(prior, channels[i], alpha * betas[i]).value;
  return {lhs, rhs};
}

CheckSides independence_dpi_check(const ProbVector& px, const ProbVector& pz, const Channel& coupling,
                                  AlphaOrder alpha) {
  const Index nx = px.size(), nz = pz.size(), ny = coupling.outputs();
  if (coupling.inputs() != nx * nz) throw std::invalid_argument("independence_dpi_check: coupling needs nx*nz rows");
  Mat x_yz(nx, ny * nz), xz_y(nx * nz, ny);
  for (Index x = 0; x < nx; ++x)
    for (Index z = 0; z < nz; ++z)
      for (Index y = 0; y < ny; ++y) {
        const double v = px(x) * pz(z) * coupling.mat()(x * nz + z, y);
        x_yz(x, y * nz + z) = v;
        xz_y(x * nz + z, y) = v;
      }
  return {sibson_mi(JointPMF::normalized(x_yz), alpha).value, sibson_mi(JointPMF::normalized(xz_y), alpha).value};
}

}  // namespace sibson
