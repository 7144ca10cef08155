#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sibson {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultTol = 1e-9;

// ---------------------------------------------------------------------------
// Errors

struct NotADistribution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solver hit its cap. Carries the best value and the residual so
/// callers can still use the (valid but loose) result.
struct NoConvergence : std::runtime_error {
  NoConvergence(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best(best_value), residual(gap) {}
  double best;
  double residual;
};

// ---------------------------------------------------------------------------
// Probability carriers. All are immutable once built; factories validate.

class ProbVector {
 public:
  /// Clips entries in [-tol, 0) to zero and renormalizes. Throws
  /// NotADistribution outside tolerance.
  static ProbVector validated(const Vec& raw, double tol = kDefaultTol);
  /// Rescales nonnegative weights with a positive finite sum.
  static ProbVector normalized(const Vec& weights);
  static ProbVector uniform(Index n);
  static ProbVector point_mass(Index n, Index at);

  const Vec& vec() const { return p_; }
  Index size() const { return p_.size(); }
  double operator()(Index i) const { return p_(i); }

 private:
  explicit ProbVector(Vec p) : p_(std::move(p)) {}
  Vec p_;
};

/// Row-stochastic matrix, rows indexed by input x, columns by output y.
class Channel {
 public:
  static Channel validated(const Mat& raw, double tol = kDefaultTol);
  static Channel normalized(const Mat& weights);
  static Channel identity(Index n);
  static Channel bsc(double eps);
  /// Outputs ordered {0, erasure, 1}.
  static Channel bec(double delta);

  const Mat& mat() const { return w_; }
  Index inputs() const { return w_.rows(); }
  Index outputs() const { return w_.cols(); }
  ProbVector row(Index x) const;

 private:
  explicit Channel(Mat w) : w_(std::move(w)) {}
  Mat w_;
};

/// Joint pmf P_XY with rows indexed by x and columns by y.
class JointPMF {
 public:
  static JointPMF validated(const Mat& raw, double tol = kDefaultTol);
  static JointPMF normalized(const Mat& weights);
  static JointPMF compose(const ProbVector& px, const Channel& channel);
  static JointPMF product(const ProbVector& px, const ProbVector& py);

  const Mat& mat() const { return p_; }
  Index nx() const { return p_.rows(); }
  Index ny() const { return p_.cols(); }
  JointPMF transposed() const { return JointPMF(p_.transpose()); }

 private:
  explicit JointPMF(Mat p) : p_(std::move(p)) {}
  Mat p_;
};

/// Joint pmf P_XYZ stored as one nx-by-ny slice per z.
class JointPMF3 {
 public:
  static JointPMF3 validated(const std::vector<Mat>& slices, double tol = kDefaultTol);
  static JointPMF3 normalized(const std::vector<Mat>& slices);

  const Mat& slice(Index z) const { return s_[static_cast<std::size_t>(z)]; }
  Index nx() const { return s_.front().rows(); }
  Index ny() const { return s_.front().cols(); }
  Index nz() const { return static_cast<Index>(s_.size()); }
  ProbVector pz() const;
  /// Marginal over (x, y).
  JointPMF xy() const;

 private:
  explicit JointPMF3(std::vector<Mat> s) : s_(std::move(s)) {}
  std::vector<Mat> s_;
};

// ---------------------------------------------------------------------------
// Order parameter with explicit limit tags.

class AlphaOrder {
 public:
  enum class Kind { Zero, Finite, One, Infinity };

  /// Implicit so that plain doubles work at call sites. 0, +inf and values
  /// within 1e-6 of 1 map to their tags; negative or NaN throws.
  AlphaOrder(double a);  // NOLINT(google-explicit-constructor)

  static AlphaOrder zero() { return AlphaOrder(0.0); }
  static AlphaOrder one() { return AlphaOrder(1.0); }
  static AlphaOrder infinity() { return AlphaOrder(kInf); }

  Kind kind() const { return kind_; }
  /// Numeric value; 0, 1 or +inf for the tags.
  double value() const { return a_; }
  bool is_finite_generic() const { return kind_ == Kind::Finite; }

  static constexpr double kShannonBand = 1e-6;

 private:
  Kind kind_;
  double a_;
};

// ---------------------------------------------------------------------------
// Log-domain scalar: log_val in [-inf, +inf).

struct LogValue {
  double log_val = -kInf;

  static LogValue from_linear(double x) { return {x > 0 ? std::log(x) : -kInf}; }
  double linear() const { return std::exp(log_val); }
  bool is_zero() const { return log_val == -kInf; }

  friend LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero() || b.is_zero()) return {};
    return {a.log_val + b.log_val};
  }
  friend LogValue operator+(LogValue a, LogValue b);
};

/// log Σ exp(v_i) with the max factored out; -inf for an empty or all -inf input.
double logsumexp(const Vec& v);

}  // namespace sibson
