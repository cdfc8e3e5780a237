#pragma once

// Batch JSON front end. parse_config validates everything a command needs
// before any numerics run; execute writes exactly one JSON document.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "invariants.hpp"

namespace thetagauss::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

enum class Command { Theta, Pmf, Moments, Entropy, Fit, Sample, Verify, Map, Cubic, Kummer, Probe };

inline constexpr std::array<std::pair<const char*, Command>, 11> kCommands{{
    {"theta", Command::Theta},
    {"pmf", Command::Pmf},
    {"moments", Command::Moments},
    {"entropy", Command::Entropy},
    {"fit", Command::Fit},
    {"sample", Command::Sample},
    {"verify", Command::Verify},
    {"map", Command::Map},
    {"cubic", Command::Cubic},
    {"kummer", Command::Kummer},
    {"probe", Command::Probe},
}};

inline const char* command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

/// Malformed input; `field` names the offending flag or JSON key.
class InputError : public std::runtime_error {
 public:
  InputError(std::string error, std::string field, const std::string& message)
      : std::runtime_error(message), error_(std::move(error)), field_(std::move(field)) {}
  const std::string& error() const { return error_; }
  const std::string& field() const { return field_; }

 private:
  std::string error_;
  std::string field_;
};

struct JobConfig {
  Command command = Command::Verify;
  std::string params_file;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string output;  ///< empty means standard output

  // Parameters; present only when the command uses them.
  std::optional<CVector> u;
  std::optional<CMatrix> B;
  std::optional<RVector> mu;
  std::optional<RMatrix> sigma;
  std::vector<IVector> points;  ///< pmf evaluation points
  std::vector<IVector> data;    ///< observations for fitting from a sample
  long count = 0;
  int d = 2;
  int trials = 200;

  int g() const {
    if (B) return static_cast<int>(B->rows());
    if (mu) return static_cast<int>(mu->size());
    if (!data.empty()) return static_cast<int>(data.front().size());
    return 0;
  }
};

// ---------------------------------------------------------------- output

namespace io {

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Like Json::dump(2) but every float is printed with 17 significant digits.
inline void dump(const Json& j, std::string& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump(v, out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      if (j.empty() || flat) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          dump(j[k], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        dump(j[k], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

inline std::string to_string(const Json& j) {
  std::string s;
  dump(j, s);
  return s + "\n";
}

inline Json complex(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vector(const CVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex(v(i)));
  return a;
}

inline Json matrix(const CMatrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector(m.row(i).transpose()));
  return a;
}

inline Json real_vector(const RVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json real_matrix(const RMatrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(real_vector(m.row(i).transpose()));
  return a;
}

inline Json integers(const IVector& n) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < n.size(); ++i) a.push_back(n(i));
  return a;
}

inline Json index(const MultiIndex& a) { return Json(a.values()); }

}  // namespace io

// ---------------------------------------------------------------- input

namespace parse {

inline double real(const Json& j, const std::string& field) {
  if (!j.is_number()) throw InputError("InvalidArgument", field, field + " entries must be numbers");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError("InvalidArgument", field, field + " entries must be finite");
  return x;
}

/// A number or a [re, im] pair.
inline Complex complex(const Json& j, const std::string& field) {
  if (j.is_number()) return real(j, field);
  if (j.is_array() && j.size() == 2) return {real(j[0], field), real(j[1], field)};
  throw InputError("InvalidArgument", field, field + " entries must be numbers or [re, im] pairs");
}

inline const Json& array(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InputError("InvalidArgument", field, field + " must be a non-empty array");
  return j;
}

inline CVector complex_vector(const Json& j, const std::string& field) {
  array(j, field);
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex(j[i], field);
  return v;
}

inline CMatrix complex_matrix(const Json& j, const std::string& field) {
  array(j, field);
  const std::size_t n = j.size();
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw InputError("DimensionMismatch", field, field + " must be square, given row-major");
    }
    for (std::size_t k = 0; k < n; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex(j[i][k], field);
  }
  return m;
}

inline RVector real_vector(const Json& j, const std::string& field) {
  array(j, field);
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = real(j[i], field);
  return v;
}

inline RMatrix real_matrix(const Json& j, const std::string& field) {
  array(j, field);
  const std::size_t n = j.size();
  RMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw InputError("DimensionMismatch", field, field + " must be square, given row-major");
    }
    for (std::size_t k = 0; k < n; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = real(j[i][k], field);
  }
  return m;
}

/// Array of integer vectors; a bare integer is read as a 1-vector.
inline std::vector<IVector> lattice_points(const Json& j, const std::string& field) {
  array(j, field);
  std::vector<IVector> out;
  for (const auto& e : j) {
    if (e.is_number_integer()) {
      out.push_back(IVector::Constant(1, e.get<int>()));
      continue;
    }
    if (!e.is_array() || e.empty()) throw InputError("InvalidArgument", field, field + " must hold integer vectors");
    IVector n(static_cast<Eigen::Index>(e.size()));
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i].is_number_integer()) throw InputError("InvalidArgument", field, field + " must hold integer vectors");
      n(static_cast<Eigen::Index>(i)) = e[i].get<int>();
    }
    out.push_back(std::move(n));
  }
  return out;
}

inline Json text(const std::string& s, const std::string& field) {
  try {
    return Json::parse(s);
  } catch (const Json::parse_error&) {
    throw InputError("InvalidArgument", field, field + " is not valid JSON");
  }
}

}  // namespace parse

namespace validate {

inline void siegel(const CMatrix& B) {
  try {
    SiegelMatrix{B};
  } catch (const Error& e) {
    std::string msg = e.what();
    if (e.code() == ErrorCode::NotSymmetric) msg = "B must be symmetric (B[i][j] == B[j][i])";
    throw InputError(to_string(e.code()), "B", msg);
  }
}

inline void moments(const RVector& mu, const RMatrix& sigma) {
  if (sigma.rows() != mu.size()) throw InputError("DimensionMismatch", "sigma", "sigma must be g x g with g = len(mu)");
  try {
    MomentData{mu, sigma}.validate();
  } catch (const Error& e) {
    throw InputError(to_string(e.code()), "sigma", e.what());
  }
}

inline void real_params(const JobConfig& c) {
  if (c.u->imag().cwiseAbs().maxCoeff() != 0.0) throw InputError("InvalidArgument", "u", "this command needs real u");
  if (c.B->imag().cwiseAbs().maxCoeff() != 0.0) throw InputError("InvalidArgument", "B", "this command needs real B");
}

}  // namespace validate

/// Parses argv (argv[1] is the command) and the optional --params file.
inline JobConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Discrete Gaussians on Z^g via the Riemann theta function"};
  std::string command, params, mu_text, sigma_text;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<long> count;
  std::optional<int> d, trials;
  std::string output;
  app.add_option("command", command, "theta | pmf | moments | entropy | fit | sample | verify | map | cubic | kummer | probe")
      ->required();
  app.add_option("--params", params, "JSON file with g, u, B (and optionally mu, sigma, points, data)");
  app.add_option("--mu", mu_text, "mean vector as JSON, e.g. \"[0]\"");
  app.add_option("--sigma", sigma_text, "covariance as JSON, e.g. \"[[1]]\"");
  app.add_option("--count", count, "number of draws (sample) or mapped points (kummer)");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--tol", tol, "fit tolerance");
  app.add_option("--d", d, "map degree, or maximum moment order for moments");
  app.add_option("--trials", trials, "probe pairs");
  app.add_option("--output", output, "write the JSON here instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw InputError("Help", "", app.help());
  } catch (const CLI::ParseError& e) {
    std::string field = "argv";
    const std::string what = e.what();
    for (const char* flag : {"--params", "--mu", "--sigma", "--count", "--seed", "--tol", "--d", "--trials", "--output"}) {
      if (what.find(flag) != std::string::npos) field = flag + 2;
    }
    throw InputError("InvalidArgument", field, what);
  }

  JobConfig c;
  bool known = false;
  for (const auto& [name, cmd] : kCommands) {
    if (command == name) {
      c.command = cmd;
      known = true;
    }
  }
  if (!known) throw InputError("InvalidArgument", "command", "unknown command '" + command + "'");
  c.params_file = params;
  c.output = output;
  if (seed) c.seed = *seed;
  if (tol) {
    if (!(*tol > 0.0 && std::isfinite(*tol))) throw InputError("InvalidArgument", "tol", "tol must be positive");
    c.tol = *tol;
  }

  std::optional<int> declared_g;
  if (!params.empty()) {
    std::ifstream in(params);
    if (!in) throw InputError("InvalidArgument", "params", "cannot open " + params);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InputError("InvalidArgument", "params", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("InvalidArgument", "params", "params file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "g") {
        if (!value.is_number_integer() || value.get<int>() < 1) throw InputError("InvalidArgument", "g", "g must be a positive integer");
        declared_g = value.get<int>();
      } else if (key == "u") {
        c.u = parse::complex_vector(value, "u");
      } else if (key == "B") {
        c.B = parse::complex_matrix(value, "B");
      } else if (key == "mu") {
        c.mu = parse::real_vector(value, "mu");
      } else if (key == "sigma") {
        c.sigma = parse::real_matrix(value, "sigma");
      } else if (key == "points") {
        c.points = parse::lattice_points(value, "points");
      } else if (key == "data") {
        c.data = parse::lattice_points(value, "data");
      } else {
        throw InputError("InvalidArgument", key, "unknown key '" + key + "'");
      }
    }
  }
  if (!mu_text.empty()) c.mu = parse::real_vector(parse::text(mu_text, "mu"), "mu");
  if (!sigma_text.empty()) c.sigma = parse::real_matrix(parse::text(sigma_text, "sigma"), "sigma");

  // Shapes.
  if (c.B) validate::siegel(*c.B);
  if (c.B && c.u && c.u->size() != c.B->rows()) throw InputError("DimensionMismatch", "u", "len(u) must equal the size of B");
  if (declared_g && c.B && *declared_g != c.B->rows()) throw InputError("DimensionMismatch", "g", "g does not match the size of B");
  if (declared_g && c.mu && *declared_g != c.mu->size()) throw InputError("DimensionMismatch", "g", "g does not match len(mu)");
  if (c.mu && c.sigma) validate::moments(*c.mu, *c.sigma);
  const int g = c.g();
  for (const auto& n : c.points)
    if (g && n.size() != g) throw InputError("DimensionMismatch", "points", "every point must have g entries");
  for (const auto& n : c.data)
    if (n.size() != c.data.front().size()) throw InputError("DimensionMismatch", "data", "observations differ in dimension");

  // Command requirements.
  auto need_point = [&] {
    if (!c.B) throw InputError("InvalidArgument", "B", "this command needs B (use --params)");
    if (!c.u) throw InputError("InvalidArgument", "u", "this command needs u (use --params)");
  };
  auto need_genus = [&](std::initializer_list<int> allowed) {
    if (!c.B) throw InputError("InvalidArgument", "B", "this command needs B (use --params)");
    if (std::find(allowed.begin(), allowed.end(), g) == allowed.end()) {
      throw InputError("InvalidArgument", "B", std::string(command_name(c.command)) + " does not support g = " + std::to_string(g));
    }
  };
  if (d && *d < 1) throw InputError("InvalidArgument", "d", "d must be >= 1");
  if (trials && *trials < 1) throw InputError("InvalidArgument", "trials", "trials must be >= 1");
  if (count && *count < 1) throw InputError("InvalidArgument", "count", "count must be >= 1");

  switch (c.command) {
    case Command::Theta:
    case Command::Entropy:
      need_point();
      break;
    case Command::Pmf:
      need_point();
      if (c.points.empty()) c.points.push_back(IVector::Zero(g));
      break;
    case Command::Moments:
      need_point();
      c.d = d.value_or(2);
      if (c.d > 8) throw InputError("InvalidArgument", "d", "moment order must be <= 8");
      break;
    case Command::Map:
      need_point();
      c.d = d.value_or(2);
      if (c.d < 2) throw InputError("InvalidArgument", "d", "map degree must be >= 2");
      break;
    case Command::Fit:
      if (!c.data.empty()) {
        if (c.mu || c.sigma) throw InputError("InvalidArgument", "data", "give either data or mu/sigma, not both");
      } else {
        if (!c.mu) throw InputError("InvalidArgument", "mu", "fit needs mu and sigma (or data)");
        if (!c.sigma) throw InputError("InvalidArgument", "sigma", "fit needs mu and sigma (or data)");
      }
      if (c.tol < 1e-10) throw InputError("InvalidArgument", "tol", "tol must be >= 1e-10");
      break;
    case Command::Sample:
      need_point();
      validate::real_params(c);
      c.count = count.value_or(1000);
      break;
    case Command::Cubic:
      need_point();
      need_genus({1});
      break;
    case Command::Kummer:
      need_genus({2});
      c.count = count.value_or(60);
      break;
    case Command::Probe:
      need_genus({1, 2});
      c.trials = trials.value_or(200);
      break;
    case Command::Verify:
      c.trials = trials.value_or(50);
      break;
  }
  return c;
}

// ---------------------------------------------------------------- execution

struct Diagnostics {
  double eps = DiscreteGaussian::kDefaultEps;
  double radius = 0.0;
  int iterations = 0;
};

namespace run {

inline ThetaPoint point(const JobConfig& c) { return ThetaPoint(*c.u, SiegelMatrix(*c.B)); }

inline void note(Diagnostics& diag, const DiscreteGaussian& d) {
  diag.eps = d.working_eps();
  diag.radius = d.budget().radius;
}

inline Json theta_cmd(const JobConfig& c, Diagnostics& diag) {
  const ThetaPoint p = point(c);
  diag.eps = scaled_tolerance(p, DiscreteGaussian::kDefaultEps);
  const ThetaSums sums(p, 0, diag.eps);
  diag.radius = sums.budget().radius;
  return {{"theta", io::complex(sums.theta())}, {"abs_sum", sums.abs_sum()}};
}

inline Json pmf_cmd(const JobConfig& c, Diagnostics& diag) {
  const DiscreteGaussian d(point(c));
  note(diag, d);
  Json values = Json::array();
  for (const auto& n : c.points) values.push_back(io::complex(pmf(d, n)));
  Json pts = Json::array();
  for (const auto& n : c.points) pts.push_back(io::integers(n));
  return {{"points", pts}, {"pmf", values}};
}

inline Json moments_cmd(const JobConfig& c, Diagnostics& diag) {
  const DiscreteGaussian d(point(c));
  note(diag, d);
  const MomentTable t(d, std::max(2, c.d));
  const int g = d.dim();
  CMatrix cov(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) cov(i, j) = t.central(MultiIndex::unit(g, i) + MultiIndex::unit(g, j));
  Json table = Json::array();
  for (const auto& a : indices_up_to(g, c.d)) {
    if (a.order() == 0) continue;
    table.push_back({{"index", io::index(a)},
                     {"raw", io::complex(t.moment(a))},
                     {"central", io::complex(t.central(a))},
                     {"cumulant", io::complex(t.cumulant(a))}});
  }
  return {{"mean", io::vector(t.mean())}, {"covariance", io::matrix(cov)}, {"table", table}};
}

inline Json entropy_cmd(const JobConfig& c, Diagnostics& diag) {
  const DiscreteGaussian d(point(c));
  note(diag, d);
  const auto h = entropy(d);
  return {{"entropy", io::complex(h.value)}, {"branch_ambiguous", h.branch_ambiguous}};
}

inline Json fit_cmd(const JobConfig& c, Diagnostics& diag) {
  FitOptions opt;
  opt.tol = c.tol;
  Json extra = Json::object();
  FitReport r;
  if (!c.data.empty()) {
    const auto m = sample_moments(c.data);
    extra = {{"estimator", "unbiased"}, {"sample_mu", io::real_vector(m.mu)}, {"sample_sigma", io::real_matrix(m.sigma)}};
    r = fit_from_sample(c.data, opt);
  } else {
    r = fit({*c.mu, *c.sigma}, opt);
  }
  diag.iterations = r.iterations;
  const DiscreteGaussian d(r.params.point());
  note(diag, d);
  Json out = {{"u", io::real_vector(r.params.u)},
              {"B", io::real_matrix(r.params.B)},
              {"converged", r.converged},
              {"moment_residual", r.grad_norm},
              {"newton_decrement", r.newton_decrement},
              {"objective", r.objective}};
  for (const auto& [k, v] : extra.items()) out[k] = v;
  return out;
}

inline Json sample_cmd(const JobConfig& c, Diagnostics& diag) {
  const CanonicalPoint p{c.u->real(), c.B->real()};
  SamplerConfig cfg;
  cfg.seed = c.seed;
  const auto xs = draw(p, c.count, cfg);
  diag.eps = cfg.tail_eps;
  diag.radius = support_radius(p, cfg.tail_eps);
  Json draws = Json::array();
  for (const auto& x : xs) draws.push_back(io::integers(x));
  Json out = {{"rng", kRngName}, {"seed", c.seed}, {"count", c.count}, {"draws", draws}};
  if (c.count >= 2) {
    const auto m = sample_moments(xs, CovarianceEstimator::MaximumLikelihood);
    out["sample_mean"] = io::real_vector(m.mu);
    out["sample_covariance"] = io::real_matrix(m.sigma);
  }
  return out;
}

inline Json map_cmd(const JobConfig& c, Diagnostics& diag) {
  const ThetaPoint p = point(c);
  diag.eps = scaled_tolerance(p, DiscreteGaussian::kDefaultEps);
  const auto phi = statistical_map(c.d, p);
  Json labels = Json::array();
  for (const auto& a : phi.labels) labels.push_back(io::index(a));
  return {{"d", c.d}, {"labels", labels}, {"coords", io::vector(phi.normalized())}};
}

inline Json cubic_cmd(const JobConfig& c, Diagnostics& diag) {
  const Complex u = (*c.u)(0), b = (*c.B)(0, 0);
  diag.eps = scaled_tolerance(point(c), DiscreteGaussian::kDefaultEps);
  const auto cc = cubic_coefficients(b);
  const auto r = verify_cubic(u, b);
  return {{"e", Json::array({io::complex(cc.e1), io::complex(cc.e2), io::complex(cc.e3)})},
          {"a", io::complex(cc.a)},
          {"b", io::complex(cc.b)},
          {"c", io::complex(cc.c)},
          {"residuals", {{"r_cubic", r.r_cubic}, {"r_quartic", r.r_quartic}, {"r_det", r.r_det}}}};
}

inline Json kummer_cmd(const JobConfig& c, Diagnostics&) {
  const SiegelMatrix B(*c.B);
  const auto fit = kummer_quartic_fit(B, sample_statistical_map(B, 2, static_cast<int>(c.count), c.seed));
  Json monomials = Json::array();
  for (const auto& a : fit.monomials) monomials.push_back(io::index(a));
  return {{"points", c.count},
          {"singular_values", io::real_vector(fit.singular_values)},
          {"smallest", fit.residual},
          {"second_smallest", fit.second_smallest},
          {"monomials", monomials},
          {"coefficients", io::vector(fit.coefficients)}};
}

inline Json probe_cmd(const JobConfig& c, Diagnostics&) {
  const auto r = identifiability_probe(SiegelMatrix(*c.B), c.trials, c.seed);
  return {{"trials", r.trials},
          {"collisions", r.collisions},
          {"min_separation", r.min_separation},
          {"rejected", r.rejected},
          {"collision_tolerance", kCollisionTol}};
}

inline Json verify_cmd(const JobConfig& c, Diagnostics&, bool& all_passed) {
  Json props = Json::array();
  all_passed = true;
  for (const auto& r : run_invariant_suite(c.trials, c.seed + 1)) {
    all_passed = all_passed && r.passed();
    Json e = {{"module", r.module},
              {"property", r.name},
              {"instances", r.instances},
              {"failures", r.failures},
              {"worst_ratio", r.worst_ratio},
              {"pass", r.passed()}};
    if (!r.first_error.empty()) e["error"] = r.first_error;
    props.push_back(std::move(e));
  }
  return {{"all_passed", all_passed}, {"properties", props}};
}

inline Json echo(const JobConfig& c) {
  Json e = {{"command", command_name(c.command)}};
  if (!c.params_file.empty()) e["params_file"] = c.params_file;
  if (c.g()) e["g"] = c.g();
  if (c.u) e["u"] = io::vector(*c.u);
  if (c.B) e["B"] = io::matrix(*c.B);
  if (c.mu) e["mu"] = io::real_vector(*c.mu);
  if (c.sigma) e["sigma"] = io::real_matrix(*c.sigma);
  if (!c.points.empty()) {
    Json pts = Json::array();
    for (const auto& n : c.points) pts.push_back(io::integers(n));
    e["points"] = pts;
  }
  if (!c.data.empty()) {
    Json pts = Json::array();
    for (const auto& n : c.data) pts.push_back(io::integers(n));
    e["data"] = pts;
  }
  e["tol"] = c.tol;
  e["seed"] = c.seed;
  switch (c.command) {
    case Command::Sample:
    case Command::Kummer:
      e["count"] = c.count;
      break;
    case Command::Moments:
    case Command::Map:
      e["d"] = c.d;
      break;
    case Command::Probe:
    case Command::Verify:
      e["trials"] = c.trials;
      break;
    default:
      break;
  }
  return e;
}

}  // namespace run

inline Json error_document(const std::string& error, const std::optional<std::string>& field, const std::string& message) {
  return {{"error", error}, {"field", field ? Json(*field) : Json(nullptr)}, {"message", message}};
}

/// Runs the job and writes the result (or error) document to out.
inline int execute(const JobConfig& c, std::ostream& out) {
  Diagnostics diag;
  Json result;
  bool ok = true;
  try {
    switch (c.command) {
      case Command::Theta: result = run::theta_cmd(c, diag); break;
      case Command::Pmf: result = run::pmf_cmd(c, diag); break;
      case Command::Moments: result = run::moments_cmd(c, diag); break;
      case Command::Entropy: result = run::entropy_cmd(c, diag); break;
      case Command::Fit: result = run::fit_cmd(c, diag); break;
      case Command::Sample: result = run::sample_cmd(c, diag); break;
      case Command::Map: result = run::map_cmd(c, diag); break;
      case Command::Cubic: result = run::cubic_cmd(c, diag); break;
      case Command::Kummer: result = run::kummer_cmd(c, diag); break;
      case Command::Probe: result = run::probe_cmd(c, diag); break;
      case Command::Verify: result = run::verify_cmd(c, diag, ok); break;
    }
  } catch (const Error& e) {
    out << io::to_string(error_document(to_string(e.code()), std::nullopt, e.what()));
    return e.is_numerical() ? kExitNumerical : kExitInput;
  }
  const Json doc = {{"command", command_name(c.command)},
                    {"inputs_echo", run::echo(c)},
                    {"result", result},
                    {"diagnostics", {{"eps", diag.eps}, {"radius", diag.radius}, {"iterations", diag.iterations}}}};
  out << io::to_string(doc);
  return ok ? kExitOk : kExitNumerical;
}

/// parse_config + execute, honouring --output; input errors go to the same stream.
inline int main(int argc, const char* const* argv, std::ostream& stdout_stream) {
  JobConfig c;
  try {
    c = parse_config(argc, argv);
  } catch (const InputError& e) {
    if (e.error() == "Help") {
      stdout_stream << e.what();
      return kExitOk;
    }
    stdout_stream << io::to_string(error_document(e.error(), e.field(), e.what()));
    return kExitInput;
  }
  if (c.output.empty()) return execute(c, stdout_stream);
  std::ostringstream buf;
  const int code = execute(c, buf);
  std::ofstream file(c.output);
  if (!file) {
    stdout_stream << io::to_string(error_document("InvalidArgument", std::string("output"), "cannot write " + c.output));
    return kExitInput;
  }
  file << buf.str();
  return code;
}

}  // namespace thetagauss::cli
