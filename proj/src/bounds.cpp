#include <sibson/bounds.hpp>

#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>

namespace sibson {

using K = AlphaOrder::Kind;

namespace {

ProbBound clamp01(double raw) { return {std::clamp(std::isnan(raw) ? 1.0 : raw, 0.0, 1.0), raw}; }

void require_above_one(AlphaOrder a, const char* who) {
  if (a.kind() != K::Infinity && !(a.kind() == K::Finite && a.value() > 1))
    throw std::invalid_argument(std::string(who) + ": alpha must exceed 1");
}

// (α-1)/α, with the α = ∞ limit.
double tilt_exponent(AlphaOrder a) { return a.kind() == K::Infinity ? 1.0 : (a.value() - 1) / a.value(); }

void check_mask(const EventMask& e, Index nx, Index ny) {
  if (e.rows() != nx || e.cols() != ny) throw std::invalid_argument("event mask dimensions do not match the joint");
}

// Minimizes a unimodal function of t on [lo, hi] by golden section.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

BoundSides dependence_bound(const JointPMF& joint, const EventMask& event, AlphaOrder alpha) {
  require_above_one(alpha, "dependence_bound");
  check_mask(event, joint.nx(), joint.ny());
  const Mat& p = joint.mat();
  const Vec px = marginal_x(joint).vec();
  const Vec py = marginal_y(joint).vec();
  double lhs = 0, worst = 0;
  for (Index y = 0; y < joint.ny(); ++y) {
    double section = 0;
    for (Index x = 0; x < joint.nx(); ++x)
      if (event(x, y)) lhs += p(x, y), section += px(x);
    if (py(y) > 0) worst = std::max(worst, section);
  }
  const double e = tilt_exponent(alpha);
  const double rhs = std::pow(worst, e) * std::exp(e * sibson_mi(joint, alpha).value);
  return {lhs, rhs};
}

BoundSides dependence_bound(const JointPMF& joint, const Mat& f, AlphaOrder alpha) {
  require_above_one(alpha, "dependence_bound");
  if (f.rows() != joint.nx() || f.cols() != joint.ny()) throw std::invalid_argument("dependence_bound: f has wrong shape");
  if ((f.array() < 0).any()) throw std::invalid_argument("dependence_bound: f must be nonnegative");
  const Vec px = marginal_x(joint).vec();
  const Vec py = marginal_y(joint).vec();
  const double e = tilt_exponent(alpha);
  const double beta = 1 / e;
  double worst = 0;
  for (Index y = 0; y < joint.ny(); ++y)
    if (py(y) > 0) worst = std::max(worst, px.dot(f.col(y).array().pow(beta).matrix()));
  const double lhs = joint.mat().cwiseProduct(f).sum();
  return {lhs, std::pow(worst, e) * std::exp(e * sibson_mi(joint, alpha).value)};
}

BoundSides dependence_lower_bound(const JointPMF& joint, const Mat& f, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("dependence_lower_bound: alpha must lie in (0, 1)");
  if (f.rows() != joint.nx() || f.cols() != joint.ny()) throw std::invalid_argument("dependence_lower_bound: f has wrong shape");
  if ((f.array() <= 0).any()) throw NonpositiveFunction("dependence_lower_bound: f must be strictly positive");
  const Vec px = marginal_x(joint).vec();
  const double beta = alpha / (alpha - 1);
  double best = kInf;
  for (Index y = 0; y < joint.ny(); ++y)
    best = std::min(best, std::pow(px.dot(f.col(y).array().pow(beta).matrix()), 1 / beta));
  const double info = sibson_mi(joint, alpha).value;
  return {joint.mat().cwiseProduct(f).sum(), best * std::exp((alpha - 1) / alpha * info)};
}

ShatteringWitness shattering_witness(const Channel& channel) {
  const Mat& w = channel.mat();
  std::vector<Index> g(static_cast<std::size_t>(channel.outputs()));
  Vec image = Vec::Zero(channel.inputs());
  for (Index y = 0; y < channel.outputs(); ++y) {
    Index best = 0;
    for (Index x = 1; x < channel.inputs(); ++x)
      if (w(x, y) > w(best, y)) best = x;
    g[static_cast<std::size_t>(y)] = best;
    image(best) = 1;
  }
  EventMask e = EventMask::Constant(channel.inputs(), channel.outputs(), false);
  for (Index y = 0; y < channel.outputs(); ++y) e(g[static_cast<std::size_t>(y)], y) = true;
  return {ProbVector::normalized(image), e};
}

ProbBound gen_error_bound(int n, double eta, double info, AlphaOrder alpha) {
  if (n < 1 || !(eta > 0) || !(info >= 0)) throw std::invalid_argument("gen_error_bound: need n >= 1, eta > 0, info >= 0");
  if (alpha.kind() == K::Zero || (alpha.kind() == K::Finite && alpha.value() < 1))
    throw std::invalid_argument("gen_error_bound: alpha must be at least 1");
  const double e = alpha.kind() == K::One ? 0.0 : tilt_exponent(alpha);
  return clamp01(std::pow(2.0, e) * std::exp(-n * e * (2 * eta * eta - info / n)));
}

ProbBound hypothesis_testing_bound(int n, double rate, double info, AlphaOrder alpha) {
  if (n < 1 || !(rate > 0)) throw std::invalid_argument("hypothesis_testing_bound: need n >= 1, rate > 0");
  if (alpha.kind() == K::Zero || (alpha.kind() == K::Finite && alpha.value() < 1))
    throw std::invalid_argument("hypothesis_testing_bound: alpha must be at least 1");
  const double e = alpha.kind() == K::One ? 0.0 : tilt_exponent(alpha);
  return clamp01(std::exp(-e * n * (rate - info)));
}

std::vector<double> default_kappa_grid() {
  std::vector<double> k(101);
  for (int i = 0; i <= 100; ++i) k[static_cast<std::size_t>(i)] = -10 + 0.2 * i;
  return k;
}

double tpc_bounded_constant(double m, double alpha) { return m * m * (2 - alpha); }

TpcResult tpc_check(const JointPMF& joint, const Mat& f, double alpha, double c, const std::vector<double>& kappa_grid) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("tpc_check: alpha must lie in (0, 1)");
  if (kappa_grid.empty()) throw std::invalid_argument("tpc_check: empty kappa grid");
  if (!f.allFinite()) throw std::invalid_argument("tpc_check: f must be finite");
  const Index nx = joint.nx(), ny = joint.ny();
  const Vec px = marginal_x(joint).vec();
  const Vec py = marginal_y(joint).vec();
  const ProbVector cells = ProbVector::normalized(joint.mat().reshaped());
  const Vec flat = f.reshaped();
  double margin = kInf;
  for (double kappa : kappa_grid) {
    const double ent = phi_entropy(((alpha - 1) * kappa * flat).array().exp().matrix(), cells, alpha);
    for (Index y = 0; y < ny; ++y) {
      Vec t(nx);
      for (Index x = 0; x < nx; ++x) t(x) = px(x) > 0 ? std::log(px(x)) + kappa * f(x, y) : -kInf;
      margin = std::min(margin, kappa * kappa * c / 2 - ent - logsumexp(t));
    }
  }
  const bool ok = margin >= -1e-12;
  const double diff = joint.mat().cwiseProduct(f).sum() - px.dot(f * py);
  const double gap = std::sqrt(2 * c * sibson_mi(joint, alpha).value / alpha) - diff;
  return {ok, gap, margin};
}

double fano_dalpha_bound(const JointPMF& joint, AlphaOrder alpha) {
  const double pstar = marginal_x(joint).vec().maxCoeff();
  return binary_d_alpha_inverse(sibson_mi(joint, alpha).value, 1 - pstar, alpha);
}

FanoLike fano_like_bound(const JointPMF& joint, double alpha, double gamma) {
  if (!(alpha > 1)) throw std::invalid_argument("fano_like_bound: alpha must exceed 1");
  const double pstar = marginal_x(joint).vec().maxCoeff();
  const double info = sibson_mi(joint, alpha).value;
  const double e = (alpha - 1) / alpha;
  // log of (p*(γ+1)^{1/e} + 1 - p*)^e e^{e I}, evaluated stably for large γ.
  const auto bound_at = [&](double g) {
    const double a = std::log(pstar) + std::log1p(g) / e;
    const double b = pstar < 1 ? std::log1p(-pstar) : -kInf;
    const double hi = std::max(a, b);
    const double ls = hi + std::log(std::exp(a - hi) + std::exp(b - hi));
    return std::expm1(e * (ls + info)) / g;
  };
  const ProbBound corollary = clamp01(std::pow(pstar * std::exp(info), e));
  if (gamma > 0) return {clamp01(bound_at(gamma)), gamma, corollary};
  const double t = golden_min([&](double lg) { return bound_at(std::exp(lg)); }, -20, 20, 1e-10);
  double g = std::exp(t), raw = bound_at(g);
  if (!(raw <= corollary.raw)) g = kInf, raw = corollary.raw;
  return {clamp01(raw), g, corollary};
}

ProbBound fano_arimoto_bound(const JointPMF& joint, double alpha) {
  if (!(alpha > 0) || alpha == 1 || std::isinf(alpha))
    throw std::invalid_argument("fano_arimoto_bound: alpha must lie in (0, 1) or (1, inf)");
  const double h = renyi_entropy(marginal_x(joint), alpha);
  const double ia = arimoto_mi(joint, alpha);
  return clamp01(-std::expm1(-(alpha - 1) / alpha * (h - ia)));
}

MapError exact_map_error(const JointPMF& joint) {
  const Mat& p = joint.mat();
  MapError out{1.0, std::vector<Index>(static_cast<std::size_t>(joint.ny()))};
  for (Index y = 0; y < joint.ny(); ++y) {
    Index best = 0;
    for (Index x = 1; x < joint.nx(); ++x)
      if (p(x, y) > p(best, y)) best = x;
    out.rule[static_cast<std::size_t>(y)] = best;
    out.error -= p(best, y);
  }
  out.error = std::max(out.error, 0.0);
  return out;
}

double generalized_fano(const std::vector<ProbVector>& models, const ProbVector& center, double beta_bound,
                        double gamma, const ProbVector& prior, double alpha) {
  if (!(alpha > 1)) throw std::invalid_argument("generalized_fano: alpha must exceed 1");
  if (models.size() < 2 || Index(models.size()) != prior.size())
    throw std::invalid_argument("generalized_fano: need at least two models and one prior weight per model");
  if (!(gamma > 0)) throw std::invalid_argument("generalized_fano: gamma must be positive");
  Mat rows(Index(models.size()), center.size());
  for (std::size_t j = 0; j < models.size(); ++j) {
    if (models[j].size() != center.size()) throw std::invalid_argument("generalized_fano: model/center size mismatch");
    if (renyi_divergence(models[j], center, alpha) > beta_bound + 1e-12)
      throw CenterViolation("generalized_fano: D_alpha(P_j || center) exceeds beta_bound for model " + std::to_string(j));
    rows.row(Index(j)) = models[j].vec().transpose();
  }
  const double info = sibson_mi(prior, Channel::validated(rows), alpha).value;
  const double e = (alpha - 1) / alpha;
  const double t = std::pow(prior.vec().maxCoeff() * std::exp(std::min(info, beta_bound)), e);
  return std::max(gamma / 2 * (1 - t), 0.0);
}

BayesRiskBound bayes_risk_lower_bound(const BayesRiskProblem& problem) {
  if (problem.rho_grid.empty() || problem.alpha_grid.empty()) throw std::invalid_argument("bayes_risk_lower_bound: empty grid");
  BayesRiskBound best{0.0, problem.rho_grid.front(), problem.alpha_grid.front()};
  for (double a : problem.alpha_grid) {
    if (!(a > 1)) throw std::invalid_argument("bayes_risk_lower_bound: alpha grid must exceed 1");
    const double e = std::isinf(a) ? 1.0 : (a - 1) / a;
    const double info = problem.information(a);
    const auto value = [&](double rho) {
      const double l = problem.small_ball(rho);
      if (l <= 0) return rho;
      return rho * -std::expm1(e * (info + std::log(l)));
    };
    std::size_t arg = 0;
    double top = -kInf;
    for (std::size_t i = 0; i < problem.rho_grid.size(); ++i) {
      const double v = value(problem.rho_grid[i]);
      if (v > top) top = v, arg = i;
    }
    double rho = problem.rho_grid[arg];
    if (problem.rho_grid.size() > 1) {
      const double lo = std::log(problem.rho_grid[arg == 0 ? 0 : arg - 1]);
      const double hi = std::log(problem.rho_grid[std::min(arg + 1, problem.rho_grid.size() - 1)]);
      const double t = golden_min([&](double lr) { return -value(std::exp(lr)); }, lo, hi, 1e-10);
      if (value(std::exp(t)) > top) rho = std::exp(t), top = value(rho);
    }
    if (top > best.bound) best = {top, rho, a};
  }
  best.bound = std::max(best.bound, 0.0);
  return best;
}

double bernoulli_bias_info(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("bernoulli_bias_info: n must be positive");
  if (!(alpha > 1)) throw std::invalid_argument("bernoulli_bias_info: alpha must exceed 1");
  if (std::isinf(alpha)) return std::exp(bernoulli_bias_leakage(n));
  Vec t(n + 1);
  for (int k = 0; k <= n; ++k)
    t(k) = log_binomial(n, k) +
           (std::lgamma(k * alpha + 1) + std::lgamma((n - k) * alpha + 1) - std::lgamma(n * alpha + 2)) / alpha;
  return std::exp(logsumexp(t));
}

double bernoulli_bias_leakage(int n) {
  if (n < 1) throw std::invalid_argument("bernoulli_bias_leakage: n must be positive");
  Vec t(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double w = double(k) / n;
    t(k) = log_binomial(n, k) + (k > 0 ? k * std::log(w) : 0) + (k < n ? (n - k) * std::log1p(-w) : 0);
  }
  return logsumexp(t);
}

BernoulliRisk bernoulli_bias_risk_bounds(int n) {
  if (n < 1) throw std::invalid_argument("bernoulli_bias_risk_bounds: n must be positive");
  const double pi = std::acos(-1.0);
  return {1 / (8 * (2 + std::sqrt(pi * n / 2))), 1 / std::sqrt(6.0 * n)};
}

BayesRiskBound bernoulli_bias_optimized_bound(int n) {
  BayesRiskProblem prob;
  prob.small_ball = [](double rho) { return std::min(2 * rho, 1.0); };
  prob.information = [n](double a) {
    if (std::isinf(a)) return bernoulli_bias_leakage(n);
    return a / (a - 1) * std::log(bernoulli_bias_info(n, a));
  };
  const double lo = -6, hi = std::log10(0.5);
  for (int i = 0; i <= 200; ++i) prob.rho_grid.push_back(std::pow(10.0, lo + (hi - lo) * i / 200));
  for (int i = 1; i <= 60; ++i) prob.alpha_grid.push_back(1 + std::pow(10.0, -2 + 5.0 * i / 60));
  prob.alpha_grid.push_back(kInf);
  return bayes_risk_lower_bound(prob);
}

BoundSides conditional_dependence_bound(const JointPMF3& triple, const std::vector<EventMask>& event, AlphaOrder alpha) {
  require_above_one(alpha, "conditional_dependence_bound");
  if (Index(event.size()) != triple.nz()) throw std::invalid_argument("event needs one mask per z");
  const Vec pz = triple.pz().vec();
  double lhs = 0, inner = 0;
  for (Index z = 0; z < triple.nz(); ++z) {
    const Mat& s = triple.slice(z);
    check_mask(event[static_cast<std::size_t>(z)], triple.nx(), triple.ny());
    if (pz(z) <= 0) continue;
    const Vec pxz = s.rowwise().sum() / pz(z);
    const Vec pyz = s.colwise().sum().transpose();
    double worst = 0;
    for (Index y = 0; y < triple.ny(); ++y) {
      double section = 0;
      for (Index x = 0; x < triple.nx(); ++x)
        if (event[static_cast<std::size_t>(z)](x, y)) lhs += s(x, y), section += pxz(x);
      if (pyz(y) > 0) worst = std::max(worst, section);
    }
    inner += pz(z) * worst;
  }
  const double e = tilt_exponent(alpha);
  const double info = conditional_sibson_mi(triple, alpha, ConditionalVariant::MinOverQ_YgZ).value;
  return {lhs, std::pow(inner, e) * std::exp(e * info)};
}

}  // namespace sibson
