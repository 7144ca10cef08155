#include "checks.hpp"

#include <sibson/mutual_info.hpp>
#include <sibson/prob.hpp>
#include <sibson/renyi.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sibson::checks {

namespace {

using Rng = std::mt19937_64;
// Returns an empty string when the instance passes.
using Check = std::function<std::string(Rng&)>;

Index draw_size(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Log-uniform on [0.05, 20], with the 0, 1 and ∞ tags mixed in.
double draw_alpha(Rng& rng, bool limits) {
  if (limits) {
    const int k = std::uniform_int_distribution<int>(0, 9)(rng);
    if (k == 0) return 0.0;
    if (k == 1) return 1.0;
    if (k == 2) return kInf;
  }
  return std::exp(uniform(rng, std::log(0.05), std::log(20.0)));
}

// Finite α kept away from 1.
double draw_alpha_off_one(Rng& rng) {
  double a;
  do a = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  while (std::abs(a - 1) < 1e-3);
  return a;
}

JointPMF draw_joint(Rng& rng, int max_size = 5) {
  const Index nx = draw_size(rng, 2, max_size), ny = draw_size(rng, 2, max_size);
  return JointPMF::normalized(random_prob_vector(rng, nx * ny).vec().reshaped(nx, ny));
}

std::string fail(const std::string& what, double a, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at alpha=" << a << ": " << lhs << " vs " << rhs;
  return os.str();
}

double mi(const JointPMF& j, double a) { return sibson_mi(j, a).value; }

AlphaOrder reciprocal(double a) {
  if (a == 0) return AlphaOrder::infinity();
  if (std::isinf(a)) return AlphaOrder::zero();
  return AlphaOrder(1 / a);
}

const std::map<std::string, Check>& registry() {
  static const std::map<std::string, Check> r = {
      {"nonnegativity",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng);
         const double a = draw_alpha(rng, true), v = mi(j, a);
         return v >= -1e-12 ? std::string() : fail("I_alpha < 0", a, v, 0);
       }},
      {"zero_iff_independence",
       [](Rng& rng) {
         const double a = std::max(draw_alpha(rng, true), 0.05);
         if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
           const Index nx = draw_size(rng, 2, 5), ny = draw_size(rng, 2, 5);
           const JointPMF j = JointPMF::product(random_prob_vector(rng, nx), random_prob_vector(rng, ny));
           const double v = mi(j, a);
           return v <= 1e-9 ? std::string() : fail("independent joint has I_alpha > 1e-9", a, v, 1e-9);
         }
         const double v = mi(draw_joint(rng), a);
         return v > 1e-9 ? std::string() : fail("dependent joint has I_alpha <= 1e-9", a, v, 1e-9);
       }},
      {"alpha_monotonicity",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng);
         double a = draw_alpha(rng, true), b = draw_alpha(rng, true);
         if (a > b) std::swap(a, b);
         const double va = mi(j, a), vb = mi(j, b);
         return va <= vb + 1e-12 ? std::string() : fail("I_alpha decreased between orders", b, va, vb);
       }},
      {"additivity",
       [](Rng& rng) {
         const JointPMF j1 = draw_joint(rng, 3), j2 = draw_joint(rng, 3);
         const double a = draw_alpha(rng, true);
         Mat k(j1.nx() * j2.nx(), j1.ny() * j2.ny());
         for (Index x1 = 0; x1 < j1.nx(); ++x1)
           for (Index x2 = 0; x2 < j2.nx(); ++x2)
             for (Index y1 = 0; y1 < j1.ny(); ++y1)
               for (Index y2 = 0; y2 < j2.ny(); ++y2)
                 k(x1 * j2.nx() + x2, y1 * j2.ny() + y2) = j1.mat()(x1, y1) * j2.mat()(x2, y2);
         const double whole = mi(JointPMF::normalized(k), a), parts = mi(j1, a) + mi(j2, a);
         return std::abs(whole - parts) <= 1e-10 ? std::string() : fail("I_alpha not additive", a, whole, parts);
       }},
      {"data_processing",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng);
         const Channel w = random_channel(rng, j.ny(), draw_size(rng, 2, 5));
         const double a = draw_alpha(rng, true);
         const double vy = mi(j, a), vz = mi(JointPMF::normalized(j.mat() * w.mat()), a);
         return vz <= vy + 1e-12 ? std::string() : fail("I(X,Z) > I(X,Y)", a, vz, vy);
       }},
      {"tensorization",
       [](Rng& rng) {
         const Index nx = draw_size(rng, 2, 3), n = draw_size(rng, 2, 3);
         const ProbVector prior = random_prob_vector(rng, nx);
         std::vector<Channel> chans;
         for (Index i = 0; i < n; ++i) chans.push_back(random_channel(rng, nx, draw_size(rng, 2, 3)));
         const Vec w = random_prob_vector(rng, n).vec().cwiseMax(1e-3);
         std::vector<double> betas;
         for (Index i = 0; i < n; ++i) betas.push_back(w.sum() / w(i));
         const double a = draw_alpha_off_one(rng);
         const CheckSides s = tensorization_check(chans, prior, a, betas);
         return s.lhs <= s.rhs + 1e-10 ? std::string() : fail("tensorization bound violated", a, s.lhs, s.rhs);
       }},
      {"independence_dpi",
       [](Rng& rng) {
         const Index nx = draw_size(rng, 2, 3), nz = draw_size(rng, 2, 3);
         const ProbVector px = random_prob_vector(rng, nx), pz = random_prob_vector(rng, nz);
         const Channel c = random_channel(rng, nx * nz, draw_size(rng, 2, 4));
         const double a = draw_alpha(rng, true);
         const CheckSides s = independence_dpi_check(px, pz, c, a);
         return s.lhs <= s.rhs + 1e-12 ? std::string() : fail("I(X,(Y,Z)) > I((X,Z),Y)", a, s.lhs, s.rhs);
       }},
      {"entropy_bound",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng);
         const double a = draw_alpha(rng, true), v = mi(j, a);
         const AlphaOrder r = reciprocal(a);
         const double h = std::min(renyi_entropy(marginal_x(j), r), renyi_entropy(marginal_y(j), r));
         return v <= h + 1e-12 ? std::string() : fail("I_alpha > H_{1/alpha}", a, v, h);
       }},
      {"csiszar_ordering",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng, 4);
         const double a = draw_alpha_off_one(rng), v = mi(j, a), c = csiszar_mi(j, a).value;
         const bool ok = a > 1 ? v >= c - 1e-9 : v <= c + 1e-9;
         return ok ? std::string() : fail("Sibson/Csiszar ordering violated", a, v, c);
       }},
      {"lp_ordering",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng, 4);
         const double a = draw_alpha_off_one(rng), v = mi(j, a), l = lapidoth_pfister_mi(j, a, 2).value;
         return l <= v + 1e-12 ? std::string() : fail("I^LP > I_alpha", a, l, v);
       }},
      {"order_concavity",
       [](Rng& rng) {
         const JointPMF j = draw_joint(rng);
         double t[3] = {draw_alpha_off_one(rng), draw_alpha_off_one(rng), draw_alpha_off_one(rng)};
         std::sort(t, t + 3);
         if (t[2] - t[0] < 1e-6) return std::string();
         double f[3];
         for (int i = 0; i < 3; ++i) f[i] = (1 - t[i]) * mi(j, t[i]);
         const double chord = f[0] + (f[2] - f[0]) * (t[1] - t[0]) / (t[2] - t[0]);
         return f[1] >= chord - 1e-10 ? std::string() : fail("(1-alpha) I_alpha not concave", t[1], f[1], chord);
       }},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& property_suite_names() {
  static const std::vector<std::string> n = {"nonnegativity",   "zero_iff_independence", "alpha_monotonicity",
                                             "additivity",      "data_processing",       "tensorization",
                                             "independence_dpi", "entropy_bound",        "csiszar_ordering",
                                             "lp_ordering",     "order_concavity"};
  return n;
}

const std::vector<std::string>& tensorization_suite_names() {
  static const std::vector<std::string> n = {"tensorization", "independence_dpi", "additivity"};
  return n;
}

const std::vector<std::string>& ordering_suite_names() {
  static const std::vector<std::string> n = {"alpha_monotonicity", "csiszar_ordering", "lp_ordering", "entropy_bound"};
  return n;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown check suite: " + name);
  const Check& check = it->second;
  const int n = options.instances;
  std::vector<std::string> outcome(static_cast<std::size_t>(n));
  const auto work = [&](int first, int stride) {
    for (int i = first; i < n; i += stride) {
      std::seed_seq seq{std::uint32_t(options.seed), std::uint32_t(options.seed >> 32), std::uint32_t(i)};
      Rng rng(seq);
      std::string& out = outcome[static_cast<std::size_t>(i)];
      try {
        out = check(rng);
      } catch (const std::exception& e) {
        out = std::string("exception: ") + e.what();
      }
    }
  };
  const int threads = std::max(1, std::min(options.threads, n));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t, threads);
  work(0, threads);
  for (auto& t : pool) t.join();

  SuiteReport report;
  report.name = name;
  for (int i = 0; i < n; ++i) {
    const std::string& o = outcome[static_cast<std::size_t>(i)];
    if (o.empty()) {
      ++report.passed;
    } else {
      if (report.failed == 0) report.first_failure = "instance " + std::to_string(i) + ": " + o;
      ++report.failed;
    }
  }
  return report;
}

std::vector<SuiteReport> run_suites(const std::vector<std::string>& names, const SuiteOptions& options) {
  std::vector<SuiteReport> out;
  for (const auto& n : names) out.push_back(run_suite(n, options));
  return out;
}

}  // namespace sibson::checks
