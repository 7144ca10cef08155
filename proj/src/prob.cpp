#include <sibson/prob.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace sibson {

namespace {

Vec clip_and_check(const Vec& raw, double tol, const char* what) {
  if (raw.size() == 0) throw NotADistribution(std::string(what) + ": empty");
  for (Index i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw(i)))
      throw NotADistribution(std::string(what) + ": non-finite entry at " + std::to_string(i));
    if (raw(i) < -tol)
      throw NotADistribution(std::string(what) + ": negative entry " + std::to_string(raw(i)) +
                             " at " + std::to_string(i));
  }
  Vec v = raw.cwiseMax(0.0);
  const double s = v.sum();
  if (std::abs(s - 1.0) > tol)
    throw NotADistribution(std::string(what) + ": sums to " + std::to_string(s));
  return v / s;
}

}  // namespace

// ---------------------------------------------------------------------------

ProbVector ProbVector::validated(const Vec& raw, double tol) {
  return ProbVector(clip_and_check(raw, tol, "probability vector"));
}

ProbVector ProbVector::normalized(const Vec& weights) {
  const double s = weights.sum();
  if (!(s > 0) || !std::isfinite(s) || (weights.array() < 0).any())
    throw NotADistribution("cannot normalize weights");
  return ProbVector(weights / s);
}

ProbVector ProbVector::uniform(Index n) { return ProbVector(Vec::Constant(n, 1.0 / double(n))); }

ProbVector ProbVector::point_mass(Index n, Index at) {
  Vec v = Vec::Zero(n);
  v(at) = 1.0;
  return ProbVector(v);
}

Channel Channel::validated(const Mat& raw, double tol) {
  if (raw.rows() == 0 || raw.cols() == 0) throw NotADistribution("channel: empty");
  Mat w(raw.rows(), raw.cols());
  for (Index x = 0; x < raw.rows(); ++x) {
    try {
      w.row(x) = clip_and_check(raw.row(x).transpose(), tol, "channel row").transpose();
    } catch (const NotADistribution& e) {
      throw NotADistribution(std::string(e.what()) + " (row " + std::to_string(x) + ")");
    }
  }
  return Channel(w);
}

Channel Channel::normalized(const Mat& weights) {
  Mat w = weights;
  for (Index x = 0; x < w.rows(); ++x) w.row(x) = ProbVector::normalized(w.row(x).transpose()).vec();
  return Channel(w);
}

Channel Channel::identity(Index n) { return Channel(Mat::Identity(n, n)); }

Channel Channel::bsc(double eps) {
  Mat w(2, 2);
  w << 1 - eps, eps, eps, 1 - eps;
  return Channel(w);
}

Channel Channel::bec(double delta) {
  Mat w(2, 3);
  w << 1 - delta, delta, 0, 0, delta, 1 - delta;
  return Channel(w);
}

ProbVector Channel::row(Index x) const { return ProbVector::normalized(w_.row(x).transpose()); }

JointPMF JointPMF::validated(const Mat& raw, double tol) {
  if (raw.size() == 0) throw NotADistribution("joint: empty");
  Eigen::Map<const Vec> flat(raw.data(), raw.size());
  Vec v = clip_and_check(flat, tol, "joint");
  return JointPMF(Eigen::Map<const Mat>(v.data(), raw.rows(), raw.cols()));
}

JointPMF JointPMF::normalized(const Mat& weights) {
  Eigen::Map<const Vec> flat(weights.data(), weights.size());
  Vec v = ProbVector::normalized(flat).vec();
  return JointPMF(Eigen::Map<const Mat>(v.data(), weights.rows(), weights.cols()));
}

JointPMF JointPMF::compose(const ProbVector& px, const Channel& channel) {
  if (px.size() != channel.inputs()) throw std::invalid_argument("compose: size mismatch");
  return JointPMF(px.vec().asDiagonal() * channel.mat());
}

JointPMF JointPMF::product(const ProbVector& px, const ProbVector& py) {
  return JointPMF(px.vec() * py.vec().transpose());
}

JointPMF3 JointPMF3::validated(const std::vector<Mat>& slices, double tol) {
  if (slices.empty()) throw NotADistribution("triple: empty");
  const Index nx = slices.front().rows(), ny = slices.front().cols();
  Vec flat(nx * ny * Index(slices.size()));
  Index k = 0;
  for (const auto& s : slices) {
    if (s.rows() != nx || s.cols() != ny) throw NotADistribution("triple: ragged slices");
    for (Index x = 0; x < nx; ++x)
      for (Index y = 0; y < ny; ++y) flat(k++) = s(x, y);
  }
  Vec v = clip_and_check(flat, tol, "triple");
  std::vector<Mat> out;
  k = 0;
  for (std::size_t z = 0; z < slices.size(); ++z) {
    Mat s(nx, ny);
    for (Index x = 0; x < nx; ++x)
      for (Index y = 0; y < ny; ++y) s(x, y) = v(k++);
    out.push_back(s);
  }
  return JointPMF3(out);
}

JointPMF3 JointPMF3::normalized(const std::vector<Mat>& slices) {
  double total = 0;
  for (const auto& s : slices) {
    if ((s.array() < 0).any()) throw NotADistribution("triple: negative weight");
    total += s.sum();
  }
  if (!(total > 0)) throw NotADistribution("triple: zero mass");
  std::vector<Mat> out;
  for (const auto& s : slices) out.push_back(s / total);
  return validated(out, 1e-6);
}

ProbVector JointPMF3::pz() const {
  Vec v(nz());
  for (Index z = 0; z < nz(); ++z) v(z) = slice(z).sum();
  return ProbVector::normalized(v);
}

JointPMF JointPMF3::xy() const {
  Mat m = Mat::Zero(nx(), ny());
  for (const auto& s : s_) m += s;
  return JointPMF::normalized(m);
}

AlphaOrder::AlphaOrder(double a) {
  if (std::isnan(a) || a < 0) throw std::invalid_argument("alpha must be nonnegative");
  if (a == 0) {
    kind_ = Kind::Zero;
    a_ = 0;
  } else if (std::isinf(a)) {
    kind_ = Kind::Infinity;
    a_ = kInf;
  } else if (std::abs(a - 1.0) < kShannonBand) {
    kind_ = Kind::One;
    a_ = 1.0;
  } else {
    kind_ = Kind::Finite;
    a_ = a;
  }
}

LogValue operator+(LogValue a, LogValue b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double m = std::max(a.log_val, b.log_val);
  return {m + std::log1p(std::exp(std::min(a.log_val, b.log_val) - m))};
}

double logsumexp(const Vec& v) {
  if (v.size() == 0) return -kInf;
  const double m = v.maxCoeff();
  if (m == -kInf) return -kInf;
  if (m == kInf) return kInf;
  return m + std::log((v.array() - m).exp().sum());
}

// ---------------------------------------------------------------------------

ProbVector marginal_x(const JointPMF& joint) {
  return ProbVector::normalized(joint.mat().rowwise().sum());
}

ProbVector marginal_y(const JointPMF& joint) {
  return ProbVector::normalized(joint.mat().colwise().sum().transpose());
}

namespace {

PartialChannel conditional_rows(const Mat& joint_rows, const Vec& marginal) {
  PartialChannel c{Mat::Zero(joint_rows.rows(), joint_rows.cols()),
                   std::vector<bool>(std::size_t(joint_rows.rows()), false)};
  for (Index i = 0; i < joint_rows.rows(); ++i) {
    if (marginal(i) > 0) {
      c.rows.row(i) = joint_rows.row(i) / joint_rows.row(i).sum();
      c.defined[std::size_t(i)] = true;
    }
  }
  return c;
}

}  // namespace

Marginals marginals(const JointPMF& joint) {
  ProbVector px = marginal_x(joint);
  ProbVector py = marginal_y(joint);
  PartialChannel ygx = conditional_rows(joint.mat(), px.vec());
  PartialChannel xgy = conditional_rows(joint.mat().transpose(), py.vec());
  return {px, py, ygx, xgy};
}

Mat recompose(const ProbVector& px, const PartialChannel& y_given_x) {
  Mat m = Mat::Zero(y_given_x.rows.rows(), y_given_x.rows.cols());
  for (Index x = 0; x < m.rows(); ++x)
    if (y_given_x.defined[std::size_t(x)]) m.row(x) = px(x) * y_given_x.rows.row(x);
  return m;
}

// ---------------------------------------------------------------------------

double weighted_norm(const Vec& v, const Vec& w, NormOrder p) {
  if (p.zero_limit) {
    double acc = 0;
    for (Index i = 0; i < v.size(); ++i) {
      if (w(i) == 0) continue;
      if (v(i) == 0) return 0.0;
      acc += w(i) * std::log(std::abs(v(i)));
    }
    return std::exp(acc);
  }
  if (std::isinf(p.p)) {
    double m = 0;
    for (Index i = 0; i < v.size(); ++i)
      if (w(i) > 0) m = std::max(m, std::abs(v(i)));
    return m;
  }
  // Log domain: log Σ w |v|^p, then divide by p.
  Vec terms = Vec::Constant(v.size(), -kInf);
  for (Index i = 0; i < v.size(); ++i)
    if (w(i) > 0 && v(i) != 0) terms(i) = std::log(w(i)) + p.p * std::log(std::abs(v(i)));
  const double l = logsumexp(terms);
  if (l == -kInf) return p.p > 0 ? 0.0 : kInf;
  return std::exp(l / p.p);
}

double nested_norm(const Mat& f, NormOrder inner, NormOrder outer,
                   const ProbVector& inner_weights, const ProbVector& outer_weights) {
  if (f.rows() != inner_weights.size() || f.cols() != outer_weights.size())
    throw std::invalid_argument("nested_norm: shape mismatch");
  Vec col_norms(f.cols());
  for (Index j = 0; j < f.cols(); ++j)
    col_norms(j) = weighted_norm(f.col(j), inner_weights.vec(), inner);
  return weighted_norm(col_norms, outer_weights.vec(), outer);
}

// ---------------------------------------------------------------------------

ProbVector random_prob_vector(std::mt19937_64& rng, Index n) {
  std::exponential_distribution<double> e(1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) {
    double d = e(rng);
    while (d <= 0) d = e(rng);
    v(i) = d;
  }
  return ProbVector::normalized(v);
}

Channel random_channel(std::mt19937_64& rng, Index nx, Index ny) {
  Mat w(nx, ny);
  for (Index x = 0; x < nx; ++x) w.row(x) = random_prob_vector(rng, ny).vec().transpose();
  return Channel::validated(w, 1e-9);
}

JointPMF random_instance(std::uint64_t seed, Index nx, Index ny, InstanceKind kind) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("random_instance: sizes must be positive");
  std::mt19937_64 rng(seed);
  if (kind == InstanceKind::ChannelPrior) {
    ProbVector px = random_prob_vector(rng, nx);
    Channel c = random_channel(rng, nx, ny);
    return JointPMF::compose(px, c);
  }
  Vec flat = random_prob_vector(rng, nx * ny).vec();
  Mat m(nx, ny);
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y) m(x, y) = flat(x * ny + y);
  return JointPMF::normalized(m);
}

Vec project_to_simplex(const Vec& v) {
  Vec u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<double>());
  double cum = 0, theta = 0;
  for (Index k = 0; k < u.size(); ++k) {
    cum += u(k);
    const double t = (cum - 1.0) / double(k + 1);
    if (u(k) - t > 0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace sibson
