#pragma once

#include <sibson/types.hpp>

#include <optional>
#include <random>
#include <string>
#include <variant>

namespace sibson {

/// Conditional kernel whose rows may be undefined (zero conditioning mass).
/// Undefined rows are all-zero and flagged; downstream sums skip them.
struct PartialChannel {
  Mat rows;
  std::vector<bool> defined;
};

struct Marginals {
  ProbVector px;
  ProbVector py;
  PartialChannel y_given_x;  ///< indexed (x, y)
  PartialChannel x_given_y;  ///< indexed (y, x)
};

Marginals marginals(const JointPMF& joint);
ProbVector marginal_x(const JointPMF& joint);
ProbVector marginal_y(const JointPMF& joint);

/// Rebuilds P_XY from P_X and P_{Y|X} over defined rows.
Mat recompose(const ProbVector& px, const PartialChannel& y_given_x);

/// Order tag for nested_norm: a real order, or the p -> 0+ limit which
/// evaluates to exp E[log |f|].
struct NormOrder {
  double p;
  bool zero_limit = false;
  static NormOrder limit_zero() { return {0.0, true}; }
};

/// || || f ||_{L^inner(inner_weights)} ||_{L^outer(outer_weights)}, with the
/// inner norm taken along rows (index i of f(i, j) weighted by inner_weights)
/// and the outer norm across columns.
double nested_norm(const Mat& f, NormOrder inner, NormOrder outer,
                   const ProbVector& inner_weights, const ProbVector& outer_weights);

/// Weighted L^p norm of nonnegative values; p may be +inf.
double weighted_norm(const Vec& v, const Vec& w, NormOrder p);

enum class InstanceKind { Joint, ChannelPrior };

/// Dirichlet(1) draws from a seeded 64-bit Mersenne twister.
JointPMF random_instance(std::uint64_t seed, Index nx, Index ny,
                         InstanceKind kind = InstanceKind::Joint);
ProbVector random_prob_vector(std::mt19937_64& rng, Index n);
Channel random_channel(std::mt19937_64& rng, Index nx, Index ny);

/// Euclidean projection onto the probability simplex (sorted-threshold method).
Vec project_to_simplex(const Vec& v);

// ---------------------------------------------------------------------------
// File I/O

struct ChannelWithPrior {
  ProbVector px;
  Channel channel;
};

using Distribution = std::variant<JointPMF, ChannelWithPrior, JointPMF3>;

Distribution parse_distribution(const std::string& json_text, double tol = kDefaultTol);
Distribution read_distribution(const std::string& path, double tol = kDefaultTol);
std::string to_json(const Distribution& d);

/// Joint view of any distribution form; rank-3 inputs are marginalized to (x, y).
JointPMF as_joint(const Distribution& d);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits, header row first.
std::string format_csv(const Table& t);
void write_table(const Table& t, const std::string& path);
std::string format_number(double v);

}  // namespace sibson
