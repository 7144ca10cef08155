#include <sibson/prob.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sibson {

using nlohmann::json;

namespace {

Vec to_vec(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("field '" + field + "': expected an array of numbers");
  Vec v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ParseError("field '" + field + "[" + std::to_string(i) + "]': expected a number");
    v(Index(i)) = j[i].get<double>();
  }
  return v;
}

Mat to_mat(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ParseError("field '" + field + "': expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Mat m(Index(j.size()), Index(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string name = field + "[" + std::to_string(r) + "]";
    Vec row = to_vec(j[r], name);
    if (std::size_t(row.size()) != cols) throw ParseError("field '" + name + "': ragged row");
    m.row(Index(r)) = row.transpose();
  }
  return m;
}

json mat_json(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

template <class F>
auto with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const NotADistribution& e) {
    throw NotADistribution("field '" + field + "': " + e.what());
  }
}

}  // namespace

Distribution parse_distribution(const std::string& text, double tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("top level must be an object");
  if (j.contains("pxy")) {
    Mat m = to_mat(j["pxy"], "pxy");
    return with_field("pxy", [&] { return JointPMF::validated(m, tol); });
  }
  if (j.contains("pxyz")) {
    const json& t = j["pxyz"];
    if (!t.is_array() || t.empty()) throw ParseError("field 'pxyz': expected [x][y][z] nesting");
    // Stored as [x][y][z]; slices are per z.
    std::vector<Mat> xs;
    for (std::size_t x = 0; x < t.size(); ++x) xs.push_back(to_mat(t[x], "pxyz[" + std::to_string(x) + "]"));
    const Index ny = xs[0].rows(), nz = xs[0].cols();
    std::vector<Mat> slices(std::size_t(nz), Mat::Zero(Index(xs.size()), ny));
    for (std::size_t x = 0; x < xs.size(); ++x) {
      if (xs[x].rows() != ny || xs[x].cols() != nz) throw ParseError("field 'pxyz': ragged tensor");
      for (Index y = 0; y < ny; ++y)
        for (Index z = 0; z < nz; ++z) slices[std::size_t(z)](Index(x), y) = xs[x](y, z);
    }
    return with_field("pxyz", [&] { return JointPMF3::validated(slices, tol); });
  }
  if (j.contains("pygx")) {
    Channel c = with_field("pygx", [&] { return Channel::validated(to_mat(j["pygx"], "pygx"), tol); });
    if (!j.contains("px")) return ChannelWithPrior{ProbVector::uniform(c.inputs()), c};
    ProbVector px = with_field("px", [&] { return ProbVector::validated(to_vec(j["px"], "px"), tol); });
    if (c.inputs() != px.size()) throw ParseError("fields 'px' and 'pygx': input sizes differ");
    return ChannelWithPrior{px, c};
  }
  throw ParseError("expected one of the keys 'pxy', 'pxyz', or 'pygx' (optionally with 'px')");
}

Distribution read_distribution(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_distribution(ss.str(), tol);
}

std::string to_json(const Distribution& d) {
  json j;
  if (const auto* joint = std::get_if<JointPMF>(&d)) {
    j["pxy"] = mat_json(joint->mat());
  } else if (const auto* cp = std::get_if<ChannelWithPrior>(&d)) {
    j["px"] = json::array();
    for (Index i = 0; i < cp->px.size(); ++i) j["px"].push_back(cp->px(i));
    j["pygx"] = mat_json(cp->channel.mat());
  } else {
    const auto& t = std::get<JointPMF3>(d);
    json xs = json::array();
    for (Index x = 0; x < t.nx(); ++x) {
      json ys = json::array();
      for (Index y = 0; y < t.ny(); ++y) {
        json zs = json::array();
        for (Index z = 0; z < t.nz(); ++z) zs.push_back(t.slice(z)(x, y));
        ys.push_back(zs);
      }
      xs.push_back(ys);
    }
    j["pxyz"] = xs;
  }
  return j.dump();
}

JointPMF as_joint(const Distribution& d) {
  if (const auto* joint = std::get_if<JointPMF>(&d)) return *joint;
  if (const auto* cp = std::get_if<ChannelWithPrior>(&d)) return JointPMF::compose(cp->px, cp->channel);
  return std::get<JointPMF3>(d).xy();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_table(const Table& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_csv(t);
}

}  // namespace sibson
