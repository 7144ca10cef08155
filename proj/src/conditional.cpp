#include <sibson/mutual_info.hpp>
#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>

namespace sibson {

using K = AlphaOrder::Kind;

namespace {

double safe_log(double v) { return v > 0 ? std::log(v) : -kInf; }

struct Slice {
  Index z;
  double pz;
  const Mat* s;  // P(x, y, z)
  Vec px;        // P(x | z)
  Vec py;        // P(y | z)
};

std::vector<Slice> positive_slices(const JointPMF3& t) {
  std::vector<Slice> out;
  for (Index z = 0; z < t.nz(); ++z) {
    const Mat& s = t.slice(z);
    const double pz = s.sum();
    if (pz <= 0) continue;
    out.push_back({z, pz, &s, s.rowwise().sum() / pz, s.colwise().sum().transpose() / pz});
  }
  return out;
}

Vec uniform_on_argmax(const Vec& score) {
  const double m = score.maxCoeff();
  Vec w = Vec::Zero(score.size());
  for (Index i = 0; i < score.size(); ++i)
    if (score(i) >= m - 1e-14 * std::abs(m)) w(i) = 1.0;
  return w / w.sum();
}

ConditionalResult cond_y_given_z(const JointPMF3& t, AlphaOrder alpha) {
  const Index ny = t.ny();
  Mat q = Mat::Zero(ny, t.nz());
  const auto slices = positive_slices(t);
  switch (alpha.kind()) {
    case K::One:
      for (const auto& sl : slices) q.col(sl.z) = sl.py;
      return {shannon_cmi(t), q};
    case K::Infinity: {
      double best = 0;
      for (const auto& sl : slices) {
        Vec g = Vec::Zero(ny);
        for (Index x = 0; x < t.nx(); ++x)
          if (sl.px(x) > 0) g = g.cwiseMax(sl.s->row(x).transpose() / (sl.pz * sl.px(x)));
        best = std::max(best, g.sum());
        q.col(sl.z) = g / g.sum();
      }
      return {std::max(std::log(best), 0.0), q};
    }
    case K::Zero: {
      double acc = 0;
      for (const auto& sl : slices) {
        Vec mass = Vec::Constant(ny, -1.0);
        for (Index y = 0; y < ny; ++y) {
          double m = 0;
          for (Index x = 0; x < t.nx(); ++x)
            if ((*sl.s)(x, y) > 0) m += sl.px(x);
          if (m > 0) mass(y) = m;
        }
        acc += sl.pz * mass.maxCoeff();
        q.col(sl.z) = uniform_on_argmax(mass);
      }
      return {std::max(-std::log(acc), 0.0), q};
    }
    case K::Finite: {
      const double a = alpha.value();
      Vec terms(Index(slices.size()));
      Vec t_x(t.nx()), log_a(ny);
      for (std::size_t k = 0; k < slices.size(); ++k) {
        const auto& sl = slices[k];
        for (Index y = 0; y < ny; ++y) {
          for (Index x = 0; x < t.nx(); ++x)
            t_x(x) = (*sl.s)(x, y) > 0 ? a * std::log((*sl.s)(x, y)) + (1 - a) * std::log(sl.px(x)) : -kInf;
          log_a(y) = logsumexp(t_x) / a;
        }
        const double inner = logsumexp(log_a);
        q.col(sl.z) = (log_a.array() - inner).exp().matrix();
        terms(Index(k)) = (1 - a) * std::log(sl.pz) + a * inner;
      }
      return {std::max(logsumexp(terms) / (a - 1), 0.0), q};
    }
  }
  throw std::logic_error("unreachable");
}

ConditionalResult cond_z(const JointPMF3& t, AlphaOrder alpha) {
  Mat q = Mat::Zero(t.nz(), 1);
  const auto slices = positive_slices(t);
  switch (alpha.kind()) {
    case K::One:
      for (const auto& sl : slices) q(sl.z, 0) = sl.pz;
      return {shannon_cmi(t), q};
    case K::Infinity: {
      for (const auto& sl : slices) {
        double m = 0;
        for (Index x = 0; x < t.nx(); ++x)
          for (Index y = 0; y < t.ny(); ++y)
            if ((*sl.s)(x, y) > 0) m = std::max(m, (*sl.s)(x, y) / (sl.px(x) * sl.py(y)));
        q(sl.z, 0) = m;
      }
      const double s = q.sum();
      q /= s;
      return {std::max(std::log(s), 0.0), q};
    }
    case K::Zero: {
      Vec b = Vec::Constant(t.nz(), -1.0);
      for (const auto& sl : slices) {
        double m = 0;
        for (Index x = 0; x < t.nx(); ++x)
          for (Index y = 0; y < t.ny(); ++y)
            if ((*sl.s)(x, y) > 0) m += sl.px(x) * sl.py(y);
        b(sl.z) = m;
      }
      q.col(0) = uniform_on_argmax(b);
      return {std::max(-std::log(b.maxCoeff()), 0.0), q};
    }
    case K::Finite: {
      const double a = alpha.value();
      Vec log_b = Vec::Constant(t.nz(), -kInf);
      Vec cells(t.nx() * t.ny());
      for (const auto& sl : slices) {
        for (Index x = 0; x < t.nx(); ++x)
          for (Index y = 0; y < t.ny(); ++y) {
            const double v = (*sl.s)(x, y);
            cells(x * t.ny() + y) =
                v > 0 ? a * std::log(v) + (1 - a) * (std::log(sl.px(x)) + std::log(sl.py(y))) : -kInf;
          }
        log_b(sl.z) = logsumexp(cells) / a;
      }
      const double l = logsumexp(log_b);
      q.col(0) = (log_b.array() - l).exp().matrix();
      return {std::max(a / (a - 1) * l, 0.0), q};
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

ConditionalResult conditional_sibson_mi(const JointPMF3& triple, AlphaOrder alpha, ConditionalVariant variant) {
  return variant == ConditionalVariant::MinOverQ_YgZ ? cond_y_given_z(triple, alpha) : cond_z(triple, alpha);
}

JointPMF3 conditional_reference(const JointPMF3& triple, ConditionalVariant variant, const Mat& q) {
  std::vector<Mat> out(std::size_t(triple.nz()), Mat::Zero(triple.nx(), triple.ny()));
  for (const auto& sl : positive_slices(triple)) {
    if (variant == ConditionalVariant::MinOverQ_YgZ)
      out[std::size_t(sl.z)] = sl.pz * sl.px * q.col(sl.z).transpose();
    else
      out[std::size_t(sl.z)] = q(sl.z, 0) * sl.px * sl.py.transpose();
  }
  return JointPMF3::normalized(out);
}

double renyi_divergence3(const JointPMF3& p, const JointPMF3& q, AlphaOrder alpha) {
  const Index n = p.nx() * p.ny();
  Vec a(n * p.nz()), b(n * p.nz());
  for (Index z = 0; z < p.nz(); ++z) {
    a.segment(z * n, n) = Eigen::Map<const Vec>(p.slice(z).data(), n);
    b.segment(z * n, n) = Eigen::Map<const Vec>(q.slice(z).data(), n);
  }
  return renyi_divergence(a, b, alpha);
}

double shannon_cmi(const JointPMF3& triple) {
  double acc = 0;
  for (const auto& sl : positive_slices(triple))
    for (Index x = 0; x < triple.nx(); ++x)
      for (Index y = 0; y < triple.ny(); ++y) {
        const double v = (*sl.s)(x, y);
        if (v > 0) acc += v * (std::log(v / sl.pz) - safe_log(sl.px(x)) - safe_log(sl.py(y)));
      }
  return std::max(acc, 0.0);
}

}  // namespace sibson
