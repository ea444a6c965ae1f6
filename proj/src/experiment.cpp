#include "lpwave/experiment.hpp"

#include "lpwave/errors.hpp"
#include "lpwave/orlicz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace lpwave {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(std::string("config: missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_string()) throw ValidationError(std::string("config: field '") + key + "' must be a string");
  return v.get<std::string>();
}

double number_field(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("config: field '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("config: field '" + key + "' must be finite");
  return x;
}

std::int64_t integer_field(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ValidationError("config: field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config: top level must be a JSON object");
  static const std::set<std::string> known = {"model",  "basis",  "phi",      "schemes", "p",    "T",
                                              "grid_L", "grid_h", "n_paths", "epsilons", "seed", "alpha"};
  for (const auto& item : doc.items())
    if (!known.contains(item.key())) throw ValidationError("config: unknown field '" + item.key() + "'");

  ExperimentConfig cfg;
  cfg.model_spec = string_field(doc, "model");
  cfg.basis_spec = string_field(doc, "basis");
  cfg.nfunction_spec = string_field(doc, "phi");
  const json& schemes = field(doc, "schemes");
  if (!schemes.is_array()) throw ValidationError("config: field 'schemes' must be an array of scheme strings");
  for (const auto& s : schemes) {
    if (!s.is_string()) throw ValidationError("config: field 'schemes' must contain strings");
    cfg.schemes.push_back(TruncationScheme::parse(s.get<std::string>()));
  }
  cfg.p = number_field(field(doc, "p"), "p");
  cfg.T = number_field(field(doc, "T"), "T");
  cfg.grid_L = number_field(field(doc, "grid_L"), "grid_L");
  cfg.grid_h = number_field(field(doc, "grid_h"), "grid_h");
  cfg.n_paths = static_cast<long>(integer_field(field(doc, "n_paths"), "n_paths"));
  const json& eps = field(doc, "epsilons");
  if (!eps.is_array()) throw ValidationError("config: field 'epsilons' must be an array of numbers");
  for (const auto& e : eps) cfg.epsilons.push_back(number_field(e, "epsilons"));
  const json& seed = field(doc, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
    throw ValidationError("config: field 'seed' must be a nonnegative integer");
  cfg.seed = seed.get<std::uint64_t>();
  if (doc.contains("alpha")) cfg.alpha = number_field(doc["alpha"], "alpha");
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("config: cannot open '" + file.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

void validate_config(const ExperimentConfig& cfg) {
  parse_model(cfg.model_spec);
  make_basis(cfg.basis_spec);
  parse_nfunction(cfg.nfunction_spec);
  if (cfg.schemes.size() < 2) throw ValidationError("config: field 'schemes' needs at least two schemes");
  for (std::size_t i = 0; i + 1 < cfg.schemes.size(); ++i)
    if (!cfg.schemes[i + 1].contains(cfg.schemes[i]))
      throw ValidationError("config: field 'schemes' must be nested; scheme " + std::to_string(i) +
                            " is not contained in scheme " + std::to_string(i + 1));
  if (!(cfg.p >= 1.0)) throw ValidationError("config: field 'p' must be at least 1");
  if (!(cfg.T > 0.0)) throw ValidationError("config: field 'T' must be positive");
  if (!(cfg.grid_h > 0.0)) throw ValidationError("config: field 'grid_h' must be positive");
  if (!(cfg.grid_L >= cfg.T)) throw ValidationError("config: field 'grid_L' must cover [0, T]");
  if (cfg.n_paths < 100) throw ValidationError("config: field 'n_paths' must be at least 100");
  if (cfg.epsilons.empty()) throw ValidationError("config: field 'epsilons' must not be empty");
  for (double e : cfg.epsilons)
    if (!(e > 0.0)) throw ValidationError("config: field 'epsilons' must be positive");
  if (!(cfg.alpha > 0.0)) throw ValidationError("config: field 'alpha' must be positive");
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["model"] = cfg.model_spec;
  doc["basis"] = cfg.basis_spec;
  doc["phi"] = cfg.nfunction_spec;
  doc["schemes"] = json::array();
  for (const auto& s : cfg.schemes) doc["schemes"].push_back(s.spec());
  doc["p"] = cfg.p;
  doc["T"] = cfg.T;
  doc["grid_L"] = cfg.grid_L;
  doc["grid_h"] = cfg.grid_h;
  doc["n_paths"] = cfg.n_paths;
  doc["epsilons"] = cfg.epsilons;
  doc["seed"] = cfg.seed;
  doc["alpha"] = cfg.alpha;
  return doc;
}

ErrorSummary summarize(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw ValidationError("summarize: no values");
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
  };
  return {v.front(), quantile(0.25), quantile(0.5), quantile(0.75), v.back(), values.mean()};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const ProcessModel model = parse_model(cfg.model_spec);
  const WaveletPair basis = make_basis(cfg.basis_spec);
  const NFunction nf = parse_nfunction(cfg.nfunction_spec);
  const Eigen::VectorXd grid = symmetric_grid(cfg.grid_L, cfg.grid_h);

  // Catch coverage problems before the expensive simulation.
  std::vector<Eigen::MatrixXd> analysis;
  for (const auto& scheme : cfg.schemes) analysis.push_back(coefficient_operator(basis, scheme, grid));
  const SpectralMoments moments = spectral_moments(model, basis, cfg.alpha);

  const Eigen::MatrixXd paths = simulate_matrix(model, grid, cfg.n_paths, cfg.seed);

  // Nodes spanning [0, T] with one spare on each side for partial cells.
  const double h = cfg.grid_h;
  const auto n = grid.size();
  const auto first = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor((0.0 - grid[0]) / h)));
  const auto last = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(std::ceil((cfg.T - grid[0]) / h)));
  const Eigen::VectorXd window = grid.segment(first, last - first + 1);

  ExperimentResult result;
  result.config = cfg;
  const auto S = static_cast<Eigen::Index>(cfg.schemes.size());
  const auto E = static_cast<Eigen::Index>(cfg.epsilons.size());
  result.errors.resize(S, cfg.n_paths);
  result.empirical.resize(S, E);
  for (Eigen::Index s = 0; s < S; ++s) {
    const TruncationScheme& scheme = cfg.schemes[static_cast<std::size_t>(s)];
    const Eigen::MatrixXd coeffs = analysis[static_cast<std::size_t>(s)] * paths;
    const Eigen::MatrixXd recon = synthesis_operator(basis, scheme, window) * coeffs;
    for (long i = 0; i < cfg.n_paths; ++i) {
      const Eigen::VectorXd diff = paths.col(i).segment(first, window.size()) - recon.col(i);
      result.errors(s, i) = lp_integral(window, diff, cfg.p, cfg.T);
    }
    result.summary.push_back(summarize(result.errors.row(s).transpose()));

    const double c = c_n_infty_uniform(moments, basis, scheme, cfg.p, cfg.T, model.det_constant());
    result.rate_constants.push_back(c);
    std::vector<TailBoundReport> reports;
    for (Eigen::Index e = 0; e < E; ++e) {
      const double eps = cfg.epsilons[static_cast<std::size_t>(e)];
      result.empirical(s, e) = (result.errors.row(s).array() > eps).cast<double>().mean();
      TailBoundReport rep = tail_probability_bound(nf, c, cfg.p, eps);
      rep.route = "uniform";
      reports.push_back(rep);
    }
    result.bounds.push_back(std::move(reports));
  }
  return result;
}

std::vector<TightnessEntry> tightness_report(const ExperimentResult& result) {
  std::vector<TightnessEntry> out;
  const double paths = static_cast<double>(result.config.n_paths);
  for (std::size_t s = 0; s < result.bounds.size(); ++s)
    for (std::size_t e = 0; e < result.bounds[s].size(); ++e) {
      const TailBoundReport& rep = result.bounds[s][e];
      if (!rep.valid) continue;
      TightnessEntry t;
      t.scheme_index = static_cast<long>(s);
      t.epsilon = rep.epsilon;
      t.empirical = result.empirical(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(e));
      t.bound = rep.bound;
      t.ratio = rep.bound > 0.0 ? t.empirical / rep.bound : 0.0;
      t.stderr_ = std::sqrt(t.empirical * (1.0 - t.empirical) / paths);
      t.violation = t.empirical > rep.bound + 3.0 * t.stderr_;
      out.push_back(t);
    }
  if (out.empty()) throw ValidationError("tightness_report: no valid theoretical bound in the result");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + file.string() + "'");
  return out;
}

}  // namespace

void write_results_csv(const ExperimentResult& result, const std::filesystem::path& file) {
  std::ofstream out = open_output(file);
  out << "scheme_index,path_index,lp_error\n";
  for (Eigen::Index s = 0; s < result.errors.rows(); ++s)
    for (Eigen::Index i = 0; i < result.errors.cols(); ++i)
      out << s << ',' << i << ',' << format_double(result.errors(s, i)) << '\n';
}

void write_tails_csv(const ExperimentResult& result, const std::filesystem::path& file) {
  std::ofstream out = open_output(file);
  out << "scheme_index,epsilon,empirical,bound,valid,stderr\n";
  const double paths = static_cast<double>(result.config.n_paths);
  for (std::size_t s = 0; s < result.bounds.size(); ++s)
    for (std::size_t e = 0; e < result.bounds[s].size(); ++e) {
      const TailBoundReport& rep = result.bounds[s][e];
      const double f = result.empirical(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(e));
      out << s << ',' << format_double(rep.epsilon) << ',' << format_double(f) << ',' << format_double(rep.bound)
          << ',' << (rep.valid ? "true" : "false") << ',' << format_double(std::sqrt(f * (1.0 - f) / paths)) << '\n';
    }
}

json report_json(const ExperimentResult& result) {
  json doc;
  doc["config"] = to_json(result.config);
  doc["mc_tolerance"] = "violation when empirical > bound + 3 standard errors (harness convention)";
  doc["schemes"] = json::array();
  for (std::size_t s = 0; s < result.summary.size(); ++s) {
    const ErrorSummary& q = result.summary[s];
    json entry;
    entry["scheme"] = result.config.schemes[s].spec();
    entry["c_n"] = result.rate_constants[s];
    entry["route"] = "uniform";
    entry["summary"] = {{"min", q.min}, {"q1", q.q1}, {"median", q.median}, {"q3", q.q3}, {"max", q.max}, {"mean", q.mean}};
    entry["tails"] = json::array();
    for (std::size_t e = 0; e < result.bounds[s].size(); ++e) {
      json t = to_json(result.bounds[s][e]);
      t["empirical"] = result.empirical(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(e));
      entry["tails"].push_back(t);
    }
    doc["schemes"].push_back(entry);
  }
  doc["tightness"] = json::array();
  bool any_valid = false;
  for (const auto& row : result.bounds)
    for (const auto& rep : row) any_valid = any_valid || rep.valid;
  if (any_valid)
    for (const auto& t : tightness_report(result))
      doc["tightness"].push_back({{"scheme_index", t.scheme_index}, {"epsilon", t.epsilon}, {"empirical", t.empirical},
                                  {"bound", t.bound}, {"ratio", t.ratio}, {"stderr", t.stderr_},
                                  {"violation", t.violation}});
  return doc;
}

void write_path_csv(const SamplePath& path, const std::filesystem::path& file) {
  std::ofstream out = open_output(file);
  out << "t,x\n";
  for (Eigen::Index i = 0; i < path.grid.size(); ++i)
    out << format_double(path.grid[i]) << ',' << format_double(path.values[i]) << '\n';
}

void write_coefficients_csv(const CoefficientSet& coeffs, const std::filesystem::path& file) {
  std::ofstream out = open_output(file);
  out << "level,j,k,value\n";
  const long k0 = coeffs.scheme.k0_prime;
  for (long k = -k0; k <= k0; ++k) out << "phi,0," << k << ',' << format_double(coeffs.xi_at(k)) << '\n';
  for (int j = 0; j < coeffs.scheme.n(); ++j) {
    const long kj = coeffs.scheme.levels[static_cast<std::size_t>(j)];
    for (long k = -kj; k <= kj; ++k) out << "psi," << j << ',' << k << ',' << format_double(coeffs.eta_at(j, k)) << '\n';
  }
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir.string() + "'");
  write_results_csv(result, dir / "results.csv");
  write_tails_csv(result, dir / "tails.csv");
  std::ofstream out = open_output(dir / "report.json");
  out << report_json(result).dump(2) << '\n';
}

}  // namespace lpwave
