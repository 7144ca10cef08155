#include "commands.hpp"

#include "checks.hpp"

#include <sibson/bounds.hpp>
#include <sibson/capacity.hpp>
#include <sibson/mutual_info.hpp>
#include <sibson/renyi.hpp>
#include <sibson/variational.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace sibson::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownExample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

const double kNoDefault = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kSchema =
    R"(expected JSON: {"pxy": [[...]]}, {"pygx": [[...]], "px": [...]} ("px" optional), or {"pxyz": [[[...]]]} indexed [x][y][z])";

struct Globals {
  std::string base = "e";
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

// Options shared by the leaf commands; each leaf registers what it uses.
struct Opts {
  std::string joint, channel, models, f_path;
  std::string alpha, sweep, scale = "linear", limits;
  std::string variant = "ygz";
  std::string p, q, prior, center, event = "diagonal";
  std::string rates, kind = "rc", form = "one", reference = "rstar";
  std::string ns;
  double eps = 0.25, delta = 0.25, dsbs_p = 0.25, gamma = 0, beta = 0, eta = 0, info = 0, rate = 0, c = 0, m = 0;
  int n = 0, steps = 100000;
  double step_rate = 0.1;
  int instances = 500;
};

double parse_real(const std::string& s, const std::string& flag) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInf;
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw UsageError(flag + ": expected a number, got '" + s + "'");
  return v;
}

Vec parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(parse_real(tok, flag));
  if (v.empty()) throw UsageError(flag + ": expected a comma-separated list of numbers");
  return Eigen::Map<Vec>(v.data(), Index(v.size()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Distribution load(const std::string& path, const std::string& flag, double tol) {
  if (path.empty()) throw UsageError(flag + " is required; " + kSchema);
  return read_distribution(path, tol);
}

JointPMF load_joint(const Opts& o, const Globals& g) { return as_joint(load(o.joint, "--joint", g.tol)); }

Channel load_channel(const std::string& path, const std::string& flag, const Globals& g) {
  const Distribution d = load(path, flag, g.tol);
  if (const auto* cp = std::get_if<ChannelWithPrior>(&d)) return cp->channel;
  throw ParseError(flag + ": expected a channel file with key 'pygx'");
}

// Rows computed in parallel; the exception of the lowest failing index wins.
std::vector<std::vector<double>> sweep_rows(const std::vector<double>& alphas, int threads,
                                            const std::function<std::vector<double>(double)>& row) {
  const std::size_t n = alphas.size();
  std::vector<std::vector<double>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  const auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      try {
        rows[i] = row(alphas[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t t = std::size_t(std::clamp(threads, 1, int(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < t; ++k) pool.emplace_back(work, k, t);
  work(0, t);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::vector<double> alphas_of(const Opts& o, double fallback = kNoDefault) {
  if (!o.sweep.empty()) return SweepSpec::parse(o.sweep, o.scale, o.limits).values();
  if (!o.alpha.empty()) return {parse_real(o.alpha, "--alpha")};
  if (!std::isnan(fallback)) return {fallback};
  throw UsageError("--alpha or --sweep is required");
}

Output alpha_table(const Opts& o, const Globals& g, std::vector<std::string> cols, std::vector<bool> info,
                   const std::function<std::vector<double>(double)>& row, double fallback = kNoDefault) {
  cols.insert(cols.begin(), "alpha");
  info.insert(info.begin(), false);
  const auto alphas = alphas_of(o, fallback);
  auto rows = sweep_rows(alphas, g.threads, [&](double a) {
    auto r = row(a);
    r.insert(r.begin(), a);
    return r;
  });
  return {{cols, rows}, info};
}

Reference parse_reference(const std::string& s) {
  if (s == "rstar") return Reference::RStar;
  if (s == "qstar") return Reference::QStar;
  if (s == "product-rstar") return Reference::ProductRStar;
  if (s == "product-qstar") return Reference::ProductQStar;
  throw UsageError("--reference: expected rstar|qstar|product-rstar|product-qstar");
}

Mat load_f(const Opts& o, Index nx, Index ny) {
  if (o.f_path.empty()) throw UsageError("--f is required: a JSON file {\"f\": [[...]]} of shape nx by ny");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(o.f_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("--f: malformed JSON: ") + e.what());
  }
  if (!j.contains("f") || !j["f"].is_array()) throw ParseError("--f: expected {\"f\": [[...]]}");
  const auto& rows = j["f"];
  if (Index(rows.size()) != nx) throw ParseError("--f: expected " + std::to_string(nx) + " rows");
  Mat f(nx, ny);
  for (Index x = 0; x < nx; ++x) {
    if (!rows[std::size_t(x)].is_array() || Index(rows[std::size_t(x)].size()) != ny)
      throw ParseError("--f: row " + std::to_string(x) + " must have " + std::to_string(ny) + " entries");
    for (Index y = 0; y < ny; ++y) f(x, y) = rows[std::size_t(x)][std::size_t(y)].get<double>();
  }
  return f;
}

EventMask parse_event(const std::string& s, Index nx, Index ny) {
  EventMask e = EventMask::Constant(nx, ny, false);
  if (s == "diagonal") {
    for (Index i = 0; i < std::min(nx, ny); ++i) e(i, i) = true;
    return e;
  }
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto colon = cell.find(':');
    if (colon == std::string::npos) throw UsageError("--event: expected 'diagonal' or cells 'x:y,x:y,...'");
    const Index x = Index(parse_real(cell.substr(0, colon), "--event"));
    const Index y = Index(parse_real(cell.substr(colon + 1), "--event"));
    if (x < 0 || x >= nx || y < 0 || y >= ny) throw UsageError("--event: cell " + cell + " out of range");
    e(x, y) = true;
  }
  return e;
}

JointPMF dsbs(double p) {
  Mat m(2, 2);
  m << (1 - p) / 2, p / 2, p / 2, (1 - p) / 2;
  return JointPMF::validated(m);
}

JointPMF bsc3_joint() {
  const Channel one = Channel::bsc(0.3);
  return JointPMF::compose(ProbVector::uniform(8), product_channel({one, one, one}));
}

// Success-probability bounds of the Fano family next to the exact MAP success.
std::vector<double> fano_row(const JointPMF& j, double a, double gamma) {
  const FanoLike fl = fano_like_bound(j, a, gamma);
  return {fl.bound.value,
          fl.corollary.value,
          1 - fano_arimoto_bound(j, a).value,
          1 - fano_dalpha_bound(j, a),
          1 - exact_map_error(j).error};
}

const std::vector<std::string> kFanoCols = {"fano_like", "fano_like_limit", "arimoto", "dalpha", "exact_success"};

// ---------------------------------------------------------------------------

Output measure(const std::string& what, const Opts& o, const Globals& g) {
  if (what == "sibson" || what == "arimoto" || what == "csiszar" || what == "lp") {
    const JointPMF j = load_joint(o, g);
    return alpha_table(o, g, {what}, {true}, [&](double a) -> std::vector<double> {
      if (what == "sibson") return {sibson_mi(j, a).value};
      if (what == "arimoto") return {arimoto_mi(j, a)};
      if (what == "csiszar") return {csiszar_mi(j, a, std::min(g.tol, 1e-13)).value};
      return {lapidoth_pfister_mi(j, a, 8, 1e-14, g.seed).value};
    });
  }
  if (what == "conditional") {
    const Distribution d = load(o.joint, "--joint", g.tol);
    const auto* t = std::get_if<JointPMF3>(&d);
    if (!t) throw ParseError("--joint: conditional measures need a rank-3 'pxyz' file");
    ConditionalVariant v;
    if (o.variant == "ygz") v = ConditionalVariant::MinOverQ_YgZ;
    else if (o.variant == "z") v = ConditionalVariant::MinOverQ_Z;
    else throw UsageError("--variant: expected ygz|z");
    return alpha_table(o, g, {"conditional"}, {true}, [&](double a) -> std::vector<double> {
      return {conditional_sibson_mi(*t, a, v).value};
    });
  }
  if (what == "renyi-div") {
    if (o.p.empty() || o.q.empty()) throw UsageError("--p and --q are required (comma-separated probabilities)");
    const ProbVector p = ProbVector::validated(parse_list(o.p, "--p"), g.tol);
    const ProbVector q = ProbVector::validated(parse_list(o.q, "--q"), g.tol);
    if (p.size() != q.size()) throw UsageError("--p and --q must have the same length");
    return alpha_table(o, g, {"divergence"}, {true}, [&](double a) -> std::vector<double> {
      return {renyi_divergence(p, q, a)};
    });
  }
  if (what == "renyi-ent") {
    const ProbVector p = !o.p.empty() ? ProbVector::validated(parse_list(o.p, "--p"), g.tol) : marginal_x(load_joint(o, g));
    return alpha_table(o, g, {"entropy"}, {true}, [&](double a) -> std::vector<double> {
      return {renyi_entropy(p, a)};
    });
  }
  const JointPMF j = load_joint(o, g);
  return {{{"leakage"}, {{maximal_leakage(j)}}}, {true}};
}

Output capacity(const std::string& what, const Opts& o, const Globals& g) {
  const bool bits = g.base == "2";
  if (what == "exponents") {
    const Channel ch = load_channel(o.channel, "--channel", g);
    if (o.rates.empty()) throw UsageError("--rates is required, e.g. 0:0.5:20");
    std::vector<double> rates;
    {
      std::stringstream ss(o.rates);
      std::string a, b, n;
      if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
        throw UsageError("--rates: expected min:max:points");
      const double lo = parse_real(a, "--rates"), hi = parse_real(b, "--rates");
      const int k = int(parse_real(n, "--rates"));
      if (k < 1 || hi < lo || lo < 0) throw UsageError("--rates: need 0 <= min <= max and points >= 1");
      for (int i = 0; i < k; ++i) rates.push_back((lo + (k == 1 ? 0 : (hi - lo) * i / (k - 1))) * (bits ? std::numbers::ln2 : 1));
    }
    ExponentKind kind;
    if (o.kind == "rc") kind = ExponentKind::RandomCoding;
    else if (o.kind == "sp") kind = ExponentKind::SpherePacking;
    else throw UsageError("--kind: expected rc|sp");
    const ExponentCurve c = error_exponents(ch, rates, kind, std::min(g.tol, 1e-12));
    Output out{{{"rate", "exponent", "rho"}, {}}, {true, true, false}};
    for (std::size_t i = 0; i < rates.size(); ++i) out.table.rows.push_back({c.rates[i], c.exponents[i], c.best_rho[i]});
    return out;
  }
  if (what == "alpha-nml") {
    const Channel models = load_channel(o.models.empty() ? o.channel : o.models, "--models", g);
    const ProbVector prior = o.prior.empty() ? ProbVector::uniform(models.inputs())
                                             : ProbVector::validated(parse_list(o.prior, "--prior"), g.tol);
    std::vector<std::string> cols = {"regret"};
    std::vector<bool> info = {true};
    for (Index y = 0; y < models.outputs(); ++y) cols.push_back("q" + std::to_string(y)), info.push_back(false);
    return alpha_table(o, g, cols, info, [&](double a) {
      const NmlResult r = alpha_nml(models, prior, a);
      std::vector<double> row = {r.regret};
      for (Index y = 0; y < models.outputs(); ++y) row.push_back(r.predictor(y));
      return row;
    });
  }
  const Channel ch = load_channel(o.channel, "--channel", g);
  std::vector<std::string> cols = {"capacity", "gap", "iterations"};
  std::vector<bool> info = {true, true, false};
  for (Index x = 0; x < ch.inputs(); ++x) cols.push_back("p" + std::to_string(x)), info.push_back(false);
  const auto row = [&](const CapacityResult& r) {
    std::vector<double> v = {r.value, r.gap, double(r.iterations)};
    for (Index x = 0; x < ch.inputs(); ++x) v.push_back(r.optimal_input(x));
    return v;
  };
  if (what == "zero-error-fb") return {{cols, {row(zero_error_feedback_capacity(ch))}}, info};
  return alpha_table(o, g, cols, info, [&](double a) { return row(sibson_capacity(ch, a, std::max(g.tol * 1e-1, 1e-13))); });
}

Output bound(const std::string& what, const Opts& o, const Globals& g) {
  const double unit = g.base == "2" ? std::numbers::ln2 : 1.0;
  if (what == "dependence") {
    const Distribution d = load(o.joint, "--joint", g.tol);
    if (const auto* t = std::get_if<JointPMF3>(&d)) {
      std::vector<EventMask> ev;
      for (Index z = 0; z < t->nz(); ++z) ev.push_back(parse_event(o.event, t->nx(), t->ny()));
      return alpha_table(o, g, {"lhs", "rhs"}, {false, false}, [&](double a) -> std::vector<double> {
        const BoundSides s = conditional_dependence_bound(*t, ev, a);
        return {s.lhs, s.rhs};
      });
    }
    const JointPMF j = as_joint(d);
    const EventMask e = parse_event(o.event, j.nx(), j.ny());
    return alpha_table(o, g, {"lhs", "rhs"}, {false, false}, [&](double a) -> std::vector<double> {
      const BoundSides s = dependence_bound(j, e, a);
      return {s.lhs, s.rhs};
    });
  }
  if (what == "gen-error") {
    return alpha_table(o, g, {"bound", "raw"}, {false, false}, [&](double a) -> std::vector<double> {
      const ProbBound b = gen_error_bound(o.n, o.eta, o.info * unit, a);
      return {b.value, b.raw};
    });
  }
  if (what == "hyp-test") {
    return alpha_table(o, g, {"bound", "raw"}, {false, false}, [&](double a) -> std::vector<double> {
      const ProbBound b = hypothesis_testing_bound(o.n, o.rate * unit, o.info * unit, a);
      return {b.value, b.raw};
    });
  }
  if (what == "tpc") {
    const JointPMF j = load_joint(o, g);
    const Mat f = load_f(o, j.nx(), j.ny());
    return alpha_table(o, g, {"condition_ok", "gap", "margin"}, {false, false, false}, [&](double a) -> std::vector<double> {
      const double c = o.c > 0 ? o.c : tpc_bounded_constant(o.m > 0 ? o.m : f.cwiseAbs().maxCoeff(), a);
      const TpcResult r = tpc_check(j, f, a, c, default_kappa_grid());
      return {r.condition_ok ? 1.0 : 0.0, r.gap, r.margin};
    });
  }
  if (what == "fano") {
    const JointPMF j = load_joint(o, g);
    return alpha_table(o, g, kFanoCols, std::vector<bool>(kFanoCols.size(), false),
                       [&](double a) { return fano_row(j, a, o.gamma); });
  }
  if (what == "gen-fano") {
    const Channel models = load_channel(o.models, "--models", g);
    if (o.center.empty()) throw UsageError("--center is required (comma-separated probabilities)");
    const ProbVector center = ProbVector::validated(parse_list(o.center, "--center"), g.tol);
    const ProbVector prior = o.prior.empty() ? ProbVector::uniform(models.inputs())
                                             : ProbVector::validated(parse_list(o.prior, "--prior"), g.tol);
    std::vector<ProbVector> ps;
    for (Index r = 0; r < models.inputs(); ++r) ps.push_back(models.row(r));
    return alpha_table(o, g, {"bound"}, {false}, [&](double a) -> std::vector<double> {
      return {generalized_fano(ps, center, o.beta * unit, o.gamma, prior, a)};
    });
  }
  // bayes-risk: Bernoulli-bias instance with absolute loss.
  if (o.n < 1) throw UsageError("--n is required: number of Bernoulli observations");
  const BayesRiskBound b = bernoulli_bias_optimized_bound(o.n);
  const BernoulliRisk r = bernoulli_bias_risk_bounds(o.n);
  return {{{"bound", "best_rho", "best_alpha", "ml_lower", "mi_upper"},
           {{b.bound, b.best_rho, b.best_alpha, r.ml_lower, r.mi_upper}}},
          {false, false, false, false, false}};
}

Output variational(const std::string& what, const Opts& o, const Globals& g) {
  const JointPMF j = load_joint(o, g);
  if (what == "estimate") {
    return alpha_table(o, g, {"estimate", "exact", "converged"}, {true, true, false}, [&](double a) -> std::vector<double> {
      const AscentResult r = estimate_sibson_by_ascent(j, a, o.steps, o.step_rate, g.seed, true);
      return {r.estimate, sibson_mi(j, a).value, r.converged ? 1.0 : 0.0};
    });
  }
  const double a = alphas_of(o).front();
  if (what == "witness") {
    Mat w;
    if (o.form == "one") w = var_rep_one_witness(j, a);
    else if (o.form == "ratio") w = var_rep_ratio_witness(j, a);
    else if (o.form == "dv") w = log_density_ratio(j);
    else throw UsageError("--form: witness supports one|ratio|dv");
    Output out{{{"x", "y", "value"}, {}}, {false, false, false}};
    for (Index x = 0; x < w.rows(); ++x)
      for (Index y = 0; y < w.cols(); ++y) out.table.rows.push_back({double(x), double(y), w(x, y)});
    return out;
  }
  const Mat f = load_f(o, j.nx(), j.ny());
  double v;
  bool info = true;
  if (o.form == "one") v = var_rep_one(f, j, a, parse_reference(o.reference));
  else if (o.form == "ratio") v = var_rep_ratio(f, j, a), info = false;
  else if (o.form == "scaled") v = var_rep_scaled(f, j, a);
  else if (o.form == "dv") v = dv_mi_limit_check(f, j).strong;
  else throw UsageError("--form: expected one|ratio|scaled|dv");
  return {{{"alpha", "value", "exact"}, {{a, v, sibson_mi(j, a).value}}}, {false, info, true}};
}

Output example(const std::string& name, const Opts& o, const Globals& g) {
  Opts so = o;
  if (name == "bsc") {
    if (so.sweep.empty() && so.alpha.empty()) so.sweep = "0.1:10:100", so.limits = so.limits.empty() ? "0,1,inf" : so.limits;
    const Channel ch = Channel::bsc(o.eps);
    const ProbVector u = ProbVector::uniform(2);
    const double e = o.eps;
    return alpha_table(so, g, {"generic", "closed_form"}, {true, true}, [&](double a) -> std::vector<double> {
      double closed;
      if (a == 0) closed = e > 0 && e < 1 ? 0.0 : std::log(2.0);
      else if (std::isinf(a)) closed = std::log(2 * std::max(e, 1 - e));
      else if (std::abs(a - 1) <= AlphaOrder::kShannonBand) closed = std::log(2.0) + (e > 0 ? e * std::log(e) : 0) + (e < 1 ? (1 - e) * std::log1p(-e) : 0);
      else closed = std::log(2.0) + std::log(std::pow(e, a) + std::pow(1 - e, a)) / (a - 1);
      return {sibson_mi(u, ch, a).value, closed};
    });
  }
  if (name == "bec") {
    if (so.sweep.empty() && so.alpha.empty()) so.sweep = "0.1:10:100", so.limits = so.limits.empty() ? "0,1,inf" : so.limits;
    const double d = o.delta;
    const JointPMF j = JointPMF::compose(ProbVector::uniform(2), Channel::bec(d));
    const JointPMF jt = j.transposed();
    return alpha_table(so, g, {"i_xy", "i_xy_closed", "i_yx", "i_yx_closed"}, {true, true, true, true},
                       [&](double a) -> std::vector<double> {
                         double xy, yx;
                         if (a == 0) xy = 0, yx = std::log(2 / (1 + d));
                         else if (std::isinf(a)) xy = std::log(2 - d), yx = std::log(2.0);
                         else if (std::abs(a - 1) <= AlphaOrder::kShannonBand) xy = yx = (1 - d) * std::log(2.0);
                         else {
                           xy = a / (a - 1) * std::log(std::pow(2.0, (a - 1) / a) * (1 - d) + d);
                           yx = a / (a - 1) * std::log(2.0) + std::log((1 - d) / 2 + d * std::pow(2.0, -a)) / (a - 1);
                         }
                         return {sibson_mi(j, a).value, xy, sibson_mi(jt, a).value, yx};
                       });
  }
  if (name == "gaussian") {
    if (so.alpha.empty() && so.sweep.empty()) so.alpha = "2";
    const std::vector<double> ratios = o.p.empty() ? std::vector<double>{0.5, 1, 4}
                                                   : [&] { Vec v = parse_list(o.p, "--ratios"); return std::vector<double>(v.begin(), v.end()); }();
    Output out{{{"alpha", "ratio", "quadrature", "closed_form"}, {}}, {false, false, true, true}};
    for (double r : ratios) {
      const JointPMF j = discretized_gaussian(r, 1.0);
      for (double a : alphas_of(so)) out.table.rows.push_back({a, r, sibson_mi(j, a).value, sibson_mi_gaussian(r, 1.0, a)});
    }
    return out;
  }
  if (name == "bernoulli_bias") {
    std::vector<double> ns = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
    if (!o.ns.empty()) {
      const Vec v = parse_list(o.ns, "--n-grid");
      ns.assign(v.begin(), v.end());
    }
    auto rows = sweep_rows(ns, g.threads, [](double n) -> std::vector<double> {
      const BernoulliRisk r = bernoulli_bias_risk_bounds(int(n));
      return {n, r.ml_lower, bernoulli_bias_optimized_bound(int(n)).bound, r.mi_upper};
    });
    return {{{"n", "ml_lower", "sibson_bound", "mi_upper"}, rows}, {false, false, false, false}};
  }
  if (name == "fano_bsc3") {
    if (so.sweep.empty() && so.alpha.empty()) so.sweep = "1.1:10:50";
    const JointPMF j = bsc3_joint();
    return alpha_table(so, g, kFanoCols, std::vector<bool>(kFanoCols.size(), false),
                       [&](double a) { return fano_row(j, a, o.gamma); });
  }
  if (name == "dsbs") {
    if (so.sweep.empty() && so.alpha.empty()) so.alpha = "inf";
    const JointPMF j = dsbs(o.dsbs_p);
    const EventMask e = parse_event("diagonal", 2, 2);
    return alpha_table(so, g, {"lhs", "rhs"}, {false, false}, [&](double a) -> std::vector<double> {
      const BoundSides s = dependence_bound(j, e, a);
      return {s.lhs, s.rhs};
    });
  }
  throw UnknownExample("unknown example '" + name + "'; expected bsc|bec|gaussian|bernoulli_bias|fano_bsc3|dsbs");
}

void emit(Output out, const Globals& g) {
  if (g.base == "2")
    for (auto& row : out.table.rows)
      for (std::size_t i = 0; i < row.size() && i < out.info.size(); ++i)
        if (out.info[i]) row[i] /= std::numbers::ln2;
  if (g.out.empty()) std::cout << format_csv(out.table);
  else write_table(out.table, g.out);
}

int check(const std::string& which, const Opts& o, const Globals& g) {
  const auto& names = which == "tensorization" ? checks::tensorization_suite_names()
                      : which == "ordering"    ? checks::ordering_suite_names()
                                               : checks::property_suite_names();
  const auto reports = checks::run_suites(names, {g.seed, o.instances, g.threads});
  std::ostringstream os;
  os << "suite,passed,failed\n";
  int failed = 0;
  for (const auto& r : reports) {
    os << r.name << ',' << r.passed << ',' << r.failed << '\n';
    if (r.failed) std::cerr << r.name << ": " << r.first_failure << '\n';
    failed += r.failed;
  }
  if (g.out.empty()) std::cout << os.str();
  else std::ofstream(g.out) << os.str();
  return failed ? 1 : 0;
}

}  // namespace

SweepSpec SweepSpec::parse(const std::string& range, const std::string& scale, const std::string& limits) {
  SweepSpec s;
  std::stringstream ss(range);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
    throw UsageError("--sweep: expected min:max:points, got '" + range + "'");
  s.alpha_min = parse_real(a, "--sweep");
  s.alpha_max = parse_real(b, "--sweep");
  s.points = int(parse_real(n, "--sweep"));
  if (s.points < 2) throw UsageError("--sweep: points must be at least 2");
  if (!(s.alpha_min > 0) || !(s.alpha_min < s.alpha_max) || std::isinf(s.alpha_max))
    throw UsageError("--sweep: need 0 < min < max < inf");
  if (scale == "linear") s.scale = Scale::Linear;
  else if (scale == "log") s.scale = Scale::Log;
  else throw UsageError("--scale: expected linear|log");
  std::stringstream ls(limits);
  std::string tok;
  while (std::getline(ls, tok, ',')) {
    if (tok == "0") s.include_zero = true;
    else if (tok == "1") s.include_one = true;
    else if (tok == "inf") s.include_inf = true;
    else if (!tok.empty()) throw UsageError("--limits: expected a comma list from {0, 1, inf}");
  }
  return s;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) {
    const double t = double(i) / (points - 1);
    v.push_back(scale == Scale::Linear ? alpha_min + (alpha_max - alpha_min) * t
                                       : std::exp(std::log(alpha_min) + (std::log(alpha_max) - std::log(alpha_min)) * t));
  }
  v.back() = alpha_max;
  if (include_zero) v.push_back(0.0);
  if (include_one && std::find(v.begin(), v.end(), 1.0) == v.end()) v.push_back(1.0);
  if (include_inf) v.push_back(kInf);
  std::sort(v.begin(), v.end());
  return v;
}

int run(int argc, char** argv) {
  CLI::App app{"Sibson alpha-mutual information and related Renyi-type measures"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Opts o;
  app.add_option("--base", g.base, "logarithm base of information-valued columns")->check(CLI::IsMember({"e", "2"}));
  app.add_option("--tol", g.tol, "validation and solver tolerance");
  app.add_option("--seed", g.seed, "seed for randomized routines");
  app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write CSV here instead of stdout");

  std::function<Output()> action;
  std::function<int()> raw_action;

  const auto alpha_opts = [&](CLI::App* c) {
    c->add_option("--alpha", o.alpha, "order (a real, or inf)");
    c->add_option("--sweep", o.sweep, "alpha range min:max:points");
    c->add_option("--scale", o.scale, "sweep spacing: linear|log");
    c->add_option("--limits", o.limits, "limit orders to add, e.g. 0,1,inf");
  };

  const std::map<std::string, std::string> about{
      {"sibson", "Sibson alpha-mutual information"},
      {"arimoto", "Arimoto alpha-mutual information"},
      {"csiszar", "Csiszar alpha-mutual information"},
      {"lp", "Lapidoth-Pfister alpha-mutual information"},
      {"conditional", "conditional Sibson alpha-mutual information"},
      {"renyi-div", "Renyi divergence D_alpha(p||q)"},
      {"renyi-ent", "Renyi entropy H_alpha(p)"},
      {"leakage", "maximal leakage"},
      {"zero-error-fb", "zero-error capacity with feedback"},
      {"exponents", "random-coding or sphere-packing exponent curve"},
      {"alpha-nml", "alpha-NML predictor and regret"},
      {"dependence", "probability of an event under dependence"},
      {"gen-error", "generalization-error tail bound"},
      {"hyp-test", "type-1 error bound at a type-2 exponent"},
      {"tpc", "transportation-cost inequality"},
      {"fano", "Fano-type lower bound on error probability"},
      {"gen-fano", "generalized Fano bound over a model family"},
      {"bayes-risk", "Bayes-risk lower bound for a Bernoulli bias"},
      {"eval", "evaluate a variational objective at a function"},
      {"witness", "optimal function and its objective value"},
      {"estimate", "estimate Sibson MI by gradient ascent"},
      {"properties", "all property suites"},
      {"tensorization", "tensorization, independence and additivity suites"},
      {"ordering", "monotonicity, variant ordering and entropy-bound suites"},
  };

  auto* measure_cmd = app.add_subcommand("measure", "information measures of a distribution");
  measure_cmd->require_subcommand(1);
  for (const std::string what : {"sibson", "arimoto", "csiszar", "lp", "conditional", "renyi-div", "renyi-ent", "leakage"}) {
    auto* c = measure_cmd->add_subcommand(what, about.at(what));
    c->add_option("--joint", o.joint, "distribution JSON file");
    if (what != "leakage") alpha_opts(c);
    if (what == "conditional") c->add_option("--variant", o.variant, "ygz|z");
    if (what == "renyi-div" || what == "renyi-ent") c->add_option("--p", o.p, "comma-separated probabilities");
    if (what == "renyi-div") c->add_option("--q", o.q, "comma-separated probabilities");
    c->callback([&, what] { action = [&, what] { return measure(what, o, g); }; });
  }

  auto* capacity_cmd = app.add_subcommand("capacity", "capacities, exponents and universal prediction");
  capacity_cmd->require_subcommand(1);
  for (const std::string what : {"sibson", "zero-error-fb", "exponents", "alpha-nml"}) {
    auto* c = capacity_cmd->add_subcommand(what, what == "sibson" ? "Sibson capacity of a channel" : about.at(what));
    c->add_option("--channel", o.channel, "channel JSON file (key 'pygx')");
    if (what == "sibson" || what == "alpha-nml") alpha_opts(c);
    if (what == "exponents") {
      c->add_option("--rates", o.rates, "rate grid min:max:points");
      c->add_option("--kind", o.kind, "rc (random coding) | sp (sphere packing)");
    }
    if (what == "alpha-nml") {
      c->add_option("--models", o.models, "model family as channel rows");
      c->add_option("--prior", o.prior, "comma-separated prior over models");
    }
    c->callback([&, what] { action = [&, what] { return capacity(what, o, g); }; });
  }

  auto* bound_cmd = app.add_subcommand("bound", "dependence, concentration and Fano-type bounds");
  bound_cmd->require_subcommand(1);
  for (const std::string what : {"dependence", "gen-error", "hyp-test", "tpc", "fano", "gen-fano", "bayes-risk"}) {
    auto* c = bound_cmd->add_subcommand(what, about.at(what));
    if (what != "bayes-risk") alpha_opts(c);
    if (what == "fano") c->add_option("--alpha-sweep", o.sweep, "alpha range min:max:points");
    if (what == "dependence" || what == "tpc" || what == "fano") c->add_option("--joint", o.joint, "distribution JSON file");
    if (what == "dependence") c->add_option("--event", o.event, "'diagonal' or cells x:y,x:y,...");
    if (what == "gen-error" || what == "hyp-test" || what == "bayes-risk") c->add_option("--n", o.n, "sample size");
    if (what == "gen-error") c->add_option("--eta", o.eta, "deviation");
    if (what == "gen-error" || what == "hyp-test") c->add_option("--info", o.info, "information term I_alpha");
    if (what == "hyp-test") c->add_option("--rate", o.rate, "type-2 exponent R");
    if (what == "tpc") {
      c->add_option("--f", o.f_path, "JSON file {\"f\": [[...]]}");
      c->add_option("--c", o.c, "sub-Gaussian constant (default M^2 (2 - alpha))");
      c->add_option("--m", o.m, "bound M on |f| (default max |f|)");
    }
    if (what == "fano" || what == "gen-fano") c->add_option("--gamma", o.gamma, "gamma (fano: <= 0 optimizes)");
    if (what == "gen-fano") {
      c->add_option("--models", o.models, "models as channel rows");
      c->add_option("--center", o.center, "comma-separated center distribution");
      c->add_option("--beta", o.beta, "divergence radius");
      c->add_option("--prior", o.prior, "comma-separated prior over models");
    }
    c->callback([&, what] { action = [&, what] { return bound(what, o, g); }; });
  }

  auto* fano_cmd = app.add_subcommand("fano", "shorthand for 'bound fano'");
  alpha_opts(fano_cmd);
  fano_cmd->add_option("--alpha-sweep", o.sweep, "alpha range min:max:points");
  fano_cmd->add_option("--joint", o.joint, "distribution JSON file");
  fano_cmd->add_option("--gamma", o.gamma, "gamma (<= 0 optimizes)");
  fano_cmd->callback([&] { action = [&] { return bound("fano", o, g); }; });

  auto* var_cmd = app.add_subcommand("variational", "variational representations");
  var_cmd->require_subcommand(1);
  for (const std::string what : {"eval", "witness", "estimate"}) {
    auto* c = var_cmd->add_subcommand(what, about.at(what));
    c->add_option("--joint", o.joint, "distribution JSON file");
    alpha_opts(c);
    if (what != "estimate") c->add_option("--form", o.form, "one|ratio|scaled|dv");
    if (what == "eval") {
      c->add_option("--f", o.f_path, "JSON file {\"f\": [[...]]}");
      c->add_option("--reference", o.reference, "rstar|qstar|product-rstar|product-qstar");
    }
    if (what == "estimate") {
      c->add_option("--steps", o.steps, "maximum ascent steps");
      c->add_option("--rate", o.step_rate, "initial step size");
    }
    c->callback([&, what] { action = [&, what] { return variational(what, o, g); }; });
  }

  std::string example_name;
  auto* ex = app.add_subcommand("example", "reproduce a worked example as a table");
  ex->add_option("name", example_name, "bsc|bec|gaussian|bernoulli_bias|fano_bsc3|dsbs")->required();
  alpha_opts(ex);
  ex->add_option("--eps", o.eps, "BSC crossover");
  ex->add_option("--delta", o.delta, "BEC erasure probability");
  ex->add_option("--p", o.dsbs_p, "DSBS crossover");
  ex->add_option("--ratios", o.p, "Gaussian variance ratios, comma-separated");
  ex->add_option("--n-grid", o.ns, "Bernoulli-bias sample sizes, comma-separated");
  ex->add_option("--gamma", o.gamma, "Fano gamma (<= 0 optimizes)");
  ex->callback([&] { action = [&] { return example(example_name, o, g); }; });

  auto* check_cmd = app.add_subcommand("check", "property suites on seeded random instances");
  check_cmd->require_subcommand(1);
  for (const std::string what : {"properties", "tensorization", "ordering"}) {
    auto* c = check_cmd->add_subcommand(what, about.at(what));
    c->add_option("--instances", o.instances, "instances per suite")->check(CLI::PositiveNumber);
    c->callback([&, what] { raw_action = [&, what] { return check(what, o, g); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (raw_action) return raw_action();
    emit(action(), g);
    return 0;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << " (best " << format_number(e.best) << ", residual "
              << format_number(e.residual) << ")\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << kSchema << '\n';
    return 1;
  } catch (const NotADistribution& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sibson::cli
