#include <sibson/capacity.hpp>

#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace sibson {

using K = AlphaOrder::Kind;

namespace {

struct Radii {
  double value;  // I_α(P)
  Vec d;         // D_α(W_x‖Q*_P)
  ProbVector q;
  double gap() const { return d.maxCoeff() - value; }
};

Radii radii(const Channel& ch, const Vec& p, AlphaOrder a) {
  const SibsonResult s = sibson_mi(ProbVector::normalized(p), ch, a);
  Vec d(ch.inputs());
  for (Index x = 0; x < ch.inputs(); ++x) d(x) = renyi_divergence(ch.mat().row(x).transpose(), s.q_star.vec(), a);
  return {s.value, d, s.q_star};
}

// Newton iteration on the equalization conditions d_x = d_{x'} over the
// candidate support s; mass outside s is dropped. Returns the refined input
// when it stays feasible.
std::optional<Vec> newton_equalize(const Channel& ch, const Vec& p, AlphaOrder a, std::vector<Index> s) {
  const Index k = Index(s.size());
  // The heaviest letter becomes the dependent coordinate, so forward
  // differences in the others stay feasible.
  std::iter_swap(std::max_element(s.begin(), s.end(), [&](Index i, Index j) { return p(i) < p(j); }), s.end() - 1);
  if (k < 2) return std::nullopt;

  auto full = [&](const Vec& z) {
    Vec out = Vec::Zero(p.size());
    for (Index i = 0; i + 1 < k; ++i) out(s[std::size_t(i)]) = z(i);
    out(s.back()) = 1.0 - z.sum();
    return out;
  };
  auto residual = [&](const Vec& z) {
    const Radii r = radii(ch, full(z), a);
    Vec out(k - 1);
    for (Index i = 1; i < k; ++i) out(i - 1) = r.d(s[std::size_t(i)]) - r.d(s[0]);
    return out;
  };

  double mass = 0;
  for (Index x : s) mass += p(x);
  Vec z(k - 1);
  for (Index i = 0; i + 1 < k; ++i) z(i) = p(s[std::size_t(i)]) / mass;
  Vec r = residual(z);
  for (int it = 0; it < 30; ++it) {
    const double nr = r.cwiseAbs().maxCoeff();
    if (!(nr > 1e-15)) break;
    const double h = 1e-7;
    Mat jac(k - 1, k - 1);
    for (Index j = 0; j < k - 1; ++j) {
      Vec e = Vec::Zero(k - 1);
      e(j) = h;
      jac.col(j) = (residual(z + e) - r) / h;
    }
    if (!jac.allFinite()) break;
    const Vec step = jac.completeOrthogonalDecomposition().solve(r);
    if (!step.allFinite()) break;
    bool moved = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const Vec zn = z - t * step;
      if (zn.minCoeff() <= 0 || zn.sum() >= 1) continue;
      const Vec rn = residual(zn);
      if (rn.allFinite() && rn.cwiseAbs().maxCoeff() < nr) {
        z = zn;
        r = rn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  Vec out = full(z);
  if (out.minCoeff() < 0) return std::nullopt;
  return out;
}

// Tries the support of p and the near-maximal radii sets as active sets.
bool polish(const Channel& ch, Vec& p, Radii& cur, AlphaOrder a) {
  std::vector<std::vector<Index>> sets(1);
  const double pmax = p.maxCoeff();
  for (Index x = 0; x < p.size(); ++x)
    if (p(x) > 1e-12 * pmax) sets[0].push_back(x);
  const double dmax = cur.d.maxCoeff();
  for (double band : {1e-2, 1e-4, 1e-6, 1e-8}) {
    std::vector<Index> s;
    for (Index x = 0; x < p.size(); ++x)
      if (cur.d(x) >= dmax - band) s.push_back(x);
    if (std::find(sets.begin(), sets.end(), s) == sets.end()) sets.push_back(s);
  }
  bool improved = false;
  for (const auto& s : sets) {
    if (auto pn = newton_equalize(ch, p, a, s)) {
      Radii rn = radii(ch, *pn, a);
      if (rn.gap() < cur.gap()) {
        p = *pn;
        cur = rn;
        improved = true;
      }
    }
  }
  return improved;
}

CapacityResult infinity_capacity(const Channel& ch) {
  const Vec g = ch.mat().colwise().maxCoeff().transpose();
  const ProbVector q = ProbVector::normalized(g);
  const double value = std::log(g.sum());
  const double gap = std::max(max_radius(ch, q, AlphaOrder::infinity()) - value, 0.0);
  return {value, ProbVector::uniform(ch.inputs()), q, 0, gap};
}

}  // namespace

double max_radius(const Channel& channel, const ProbVector& q, AlphaOrder alpha) {
  double m = 0;
  for (Index x = 0; x < channel.inputs(); ++x)
    m = std::max(m, renyi_divergence(channel.mat().row(x).transpose(), q.vec(), alpha));
  return m;
}

CapacityResult sibson_capacity(const Channel& channel, AlphaOrder alpha, double tol) {
  if (alpha.kind() == K::Infinity) return infinity_capacity(channel);
  if (alpha.kind() == K::Zero) return zero_error_feedback_capacity(channel);

  Vec p = ProbVector::uniform(channel.inputs()).vec();
  Radii cur = radii(channel, p, alpha);
  double step = 1.0;
  const int cap = 100000;
  int it = 0;
  for (; it < cap && cur.gap() > tol; ++it) {
    if (cur.gap() < 1e-4 && it % 8 == 0 && polish(channel, p, cur, alpha)) continue;
    const double dmax = cur.d.maxCoeff();
    bool moved = false;
    for (; step > 1e-12; step *= 0.5) {
      Vec pn = (p.array() * (step * (cur.d.array() - dmax)).exp()).matrix();
      pn /= pn.sum();
      Radii rn = radii(channel, pn, alpha);
      if (rn.value > cur.value || (rn.value == cur.value && rn.gap() < cur.gap())) {
        p = pn;
        cur = rn;
        moved = true;
        break;
      }
    }
    step = moved ? std::min(step * 2, 1e4) : 1.0;
    if (!moved) {
      // Value is flat to machine precision; only the Newton polish can help.
      if (!polish(channel, p, cur, alpha)) break;
    }
  }
  CapacityResult out{cur.value, ProbVector::normalized(p), cur.q, it, std::max(cur.gap(), 0.0)};
  if (out.gap > tol)
    throw NoConvergence("sibson_capacity: duality gap " + std::to_string(out.gap) + " above tolerance", out.value,
                        out.gap);
  return out;
}

CapacityResult sibson_capacity_ascent(const Channel& channel, double alpha, double tol) {
  if (!(alpha >= 1) || std::isinf(alpha)) throw std::invalid_argument("sibson_capacity_ascent: alpha must be in [1, ∞)");
  const AlphaOrder a(alpha);
  Vec p = ProbVector::uniform(channel.inputs()).vec();
  Radii cur = radii(channel, p, a);
  auto grad = [&](const Radii& r) {
    Vec g(r.d.size());
    for (Index x = 0; x < g.size(); ++x) {
      const double e = std::min(r.d(x) - r.value, 50.0);
      g(x) = a.kind() == K::One ? e : std::expm1((alpha - 1) * e) / (alpha - 1);
    }
    return g;
  };
  double step = 1.0;
  int it = 0;
  int stalls = 0;
  for (; it < 100000; ++it) {
    const Vec g = grad(cur);
    bool moved = false;
    for (; step > 1e-16; step *= 0.5) {
      const Vec pn = project_to_simplex(p + step * g);
      Radii rn = radii(channel, pn, a);
      if (rn.value >= cur.value + 1e-4 * g.dot(pn - p)) {
        const double gain = rn.value - cur.value;
        const double move = (pn - p).cwiseAbs().maxCoeff();
        p = pn;
        cur = rn;
        moved = true;
        stalls = (gain < tol || move < 1e-15) ? stalls + 1 : 0;
        break;
      }
    }
    step = std::min(step * 2, 1e4);
    if (!moved || stalls >= 20) break;
  }
  return {cur.value, ProbVector::normalized(p), cur.q, it, std::max(cur.gap(), 0.0)};
}

// ---------------------------------------------------------------------------

bool is_alpha_weakly_symmetric(const Channel& channel, double alpha, double tol) {
  const Mat& w = channel.mat();
  Vec ref = w.row(0).transpose();
  std::sort(ref.data(), ref.data() + ref.size());
  for (Index x = 1; x < w.rows(); ++x) {
    Vec r = w.row(x).transpose();
    std::sort(r.data(), r.data() + r.size());
    if ((r - ref).cwiseAbs().maxCoeff() > tol) return false;
  }
  Vec cols(w.cols());
  for (Index y = 0; y < w.cols(); ++y) {
    double s = 0;
    for (Index x = 0; x < w.rows(); ++x) s += w(x, y) > 0 ? std::pow(w(x, y), alpha) : 0.0;
    cols(y) = s;
  }
  return cols.maxCoeff() - cols.minCoeff() <= tol;
}

double symmetric_capacity(const Channel& channel, double alpha) {
  if (!is_alpha_weakly_symmetric(channel, alpha)) throw NotSymmetric("symmetric_capacity: channel is not α-weakly symmetric");
  return sibson_mi(ProbVector::uniform(channel.inputs()), channel, alpha).value;
}

// ---------------------------------------------------------------------------

CapacityResult zero_error_feedback_capacity(const Channel& channel, double tol) {
  // Tableau simplex with Bland's rule for max 1ᵀu, A u ≤ 1, u ≥ 0 where
  // A(y, x) = [P(y|x) > 0].
  const Index m = channel.outputs(), n = channel.inputs();
  const double eps = std::max(tol, 1e-12);
  Mat t = Mat::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = (channel.mat().transpose().array() > 0).cast<double>().matrix();
  t.block(0, n, m, m).setIdentity();
  t.col(n + m).head(m).setOnes();
  t.row(m).head(n).setConstant(-1.0);
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  int it = 0;
  for (; it < 100000; ++it) {
    Index enter = -1;
    for (Index j = 0; j < n + m; ++j)
      if (t(m, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Index leave = -1;
    double best = kInf;
    for (Index i = 0; i < m; ++i) {
      if (t(i, enter) <= eps) continue;
      const double ratio = t(i, n + m) / t(i, enter);
      if (leave < 0 || ratio < best - eps ||
          (std::abs(ratio - best) <= eps && basis[std::size_t(i)] < basis[std::size_t(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) throw std::logic_error("zero_error_feedback_capacity: unbounded program");
    t.row(leave) /= t(leave, enter);
    for (Index i = 0; i <= m; ++i)
      if (i != leave && t(i, enter) != 0) t.row(i) -= t(i, enter) * t.row(leave);
    basis[std::size_t(leave)] = enter;
  }
  Vec u = Vec::Zero(n);
  for (Index i = 0; i < m; ++i)
    if (basis[std::size_t(i)] < n) u(basis[std::size_t(i)]) = t(i, n + m);
  const Vec dual = t.row(m).segment(n, m).transpose().cwiseMax(0.0);
  const double primal = u.sum(), dual_obj = dual.sum();
  return {std::log(primal), ProbVector::normalized(u), ProbVector::normalized(dual), it,
          std::abs(std::log(dual_obj) - std::log(primal))};
}

double gallager_e0(const Channel& channel, const ProbVector& input, double rho) {
  if (!(rho >= 0)) throw std::invalid_argument("gallager_e0: rho must be nonnegative");
  const Mat& w = channel.mat();
  const double s = 1.0 / (1.0 + rho);
  Vec outer(w.cols()), t(w.rows());
  for (Index y = 0; y < w.cols(); ++y) {
    for (Index x = 0; x < w.rows(); ++x)
      t(x) = input(x) > 0 && w(x, y) > 0 ? std::log(input(x)) + s * std::log(w(x, y)) : -kInf;
    outer(y) = (1 + rho) * logsumexp(t);
  }
  return -logsumexp(outer);
}

// ---------------------------------------------------------------------------

ExponentCurve error_exponents(const Channel& channel, const std::vector<double>& rates, ExponentKind kind,
                              double tol) {
  const double lo = 1e-6, hi = kind == ExponentKind::SpherePacking ? 1e3 : 1.0;
  std::map<double, double> cache;
  auto rho_c = [&](double rho) {
    auto it = cache.find(rho);
    if (it != cache.end()) return it->second;
    // ρ scales the capacity error, and orders near 1 cannot resolve gaps far
    // below eps / (1 - α), so small ρ gets a proportionally looser gap.
    const double v = rho * sibson_capacity(channel, 1.0 / (1.0 + rho), std::max(tol, tol / rho)).value;
    cache.emplace(rho, v);
    return v;
  };
  std::vector<double> grid(64);
  for (int i = 0; i < 64; ++i) grid[std::size_t(i)] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / 63.0);

  ExponentCurve curve{rates, {}, {}, kind};
  for (double r : rates) {
    if (!(r >= 0)) throw std::invalid_argument("error_exponents: rates must be nonnegative");
    auto h = [&](double rho) { return rho_c(rho) - rho * r; };
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (h(grid[i]) > h(grid[best])) best = i;
    double a = std::log(grid[best == 0 ? 0 : best - 1]);
    double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double hc = h(std::exp(c)), hd = h(std::exp(d));
    while (b - a > 1e-10) {
      if (hc > hd) {
        b = d;
        d = c;
        hd = hc;
        c = b - g * (b - a);
        hc = h(std::exp(c));
      } else {
        a = c;
        c = d;
        hc = hd;
        d = a + g * (b - a);
        hd = h(std::exp(d));
      }
    }
    double rho = std::exp(0.5 * (a + b));
    double e = h(rho);
    if (h(grid[best]) > e) {
      rho = grid[best];
      e = h(rho);
    }
    if (e <= 0) {
      e = 0;
      rho = 0;
    }
    curve.exponents.push_back(e);
    curve.best_rho.push_back(rho);
  }
  return curve;
}

NmlResult alpha_nml(const Channel& models, const ProbVector& prior, AlphaOrder alpha) {
  if (alpha.kind() == K::Zero || (alpha.kind() == K::Finite && alpha.value() < 1))
    throw std::invalid_argument("alpha_nml: alpha must be at least 1");
  const ProbVector pred = sibson_mi(prior, models, alpha).q_star;
  double regret = 0;
  for (Index t = 0; t < models.inputs(); ++t)
    regret = std::max(regret, renyi_divergence(models.mat().row(t).transpose(), pred.vec(), alpha));
  return {pred, regret};
}

}  // namespace sibson
