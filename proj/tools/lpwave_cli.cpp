// lpwave: tail bounds, truncation planning, basis constants, path simulation
// and Monte Carlo experiments for wavelet expansions in L_p([0, T]).

#include "lpwave/bounds.hpp"
#include "lpwave/errors.hpp"
#include "lpwave/experiment.hpp"
#include "lpwave/orlicz.hpp"
#include "lpwave/process.hpp"
#include "lpwave/wavelet.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace lpwave;

namespace {

double number(const std::string& text, const char* flag) {
  try {
    return parse_decimal(text);
  } catch (const ValidationError&) {
    throw ValidationError(std::string("--") + flag + ": not a decimal number: '" + text + "'");
  }
}

long integer(const std::string& text, const char* flag) {
  const double v = number(text, flag);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ValidationError(std::string("--") + flag + " must be an integer");
  return static_cast<long>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet expansions of sub-Gaussian processes in L_p: bounds and experiments", "lpwave"};
  app.require_subcommand(1);

  std::string phi = "gaussian", c_text, p_text, eps_text;
  auto* bound = app.add_subcommand("bound", "Tail bound report as JSON");
  bound->add_option("--phi", phi, "gaussian | power:<alpha>");
  bound->add_option("--c", c_text, "rate constant c")->required();
  bound->add_option("--p", p_text, "exponent p >= 1")->required();
  bound->add_option("--eps", eps_text, "level epsilon")->required();

  auto* threshold = app.add_subcommand("threshold", "Smallest valid epsilon");
  threshold->add_option("--phi", phi, "gaussian | power:<alpha>");
  threshold->add_option("--c", c_text, "rate constant c")->required();
  threshold->add_option("--p", p_text, "exponent p >= 1")->required();

  std::string model_spec, basis_spec, T_text = "1", delta_text, alpha_text = "0.5";
  auto* plan = app.add_subcommand("plan", "Smallest lattice scheme meeting a tail target");
  plan->add_option("--model", model_spec, "ou:<lambda> | separable:gauss-bump")->required();
  plan->add_option("--basis", basis_spec, "haar | daubechies:2|3|4 | meyer")->required();
  plan->add_option("--phi", phi, "gaussian | power:<alpha>");
  plan->add_option("--p", p_text, "exponent p >= 1")->required();
  plan->add_option("--T", T_text, "interval length");
  plan->add_option("--eps", eps_text, "level epsilon")->required();
  plan->add_option("--delta", delta_text, "target probability")->required();
  plan->add_option("--alpha", alpha_text, "spectral order");

  std::string k1_text;
  auto* info = app.add_subcommand("basis-info", "Envelope constants and Lipschitz fit as JSON");
  info->add_option("--basis", basis_spec, "haar | daubechies:2|3|4 | meyer")->required();
  auto* info_T = info->add_option("--T", T_text, "interval length for the tail constants");
  auto* info_k1 = info->add_option("--k1", k1_text, "tail cut k1 >= T + 1");
  info_T->needs(info_k1);
  info_k1->needs(info_T);

  std::string L_text, h_text, paths_text = "1", seed_text = "0", out_dir;
  auto* simulate = app.add_subcommand("simulate", "Write Gaussian sample paths as CSV");
  simulate->set_help_flag("--help", "Print this help message and exit");
  simulate->add_option("--model", model_spec, "ou:<lambda> | separable:gauss-bump")->required();
  simulate->add_option("--L", L_text, "grid half-width")->required();
  simulate->add_option("--h", h_text, "grid step")->required();
  simulate->add_option("--paths", paths_text, "number of paths");
  simulate->add_option("--seed", seed_text, "RNG seed");
  simulate->add_option("--out", out_dir, "output directory")->required();

  std::string config_file;
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo tightness experiment");
  experiment->add_option("--config", config_file, "JSON config")->required();
  experiment->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*bound) {
      const NFunction nf = parse_nfunction(phi);
      const auto report = tail_probability_bound(nf, number(c_text, "c"), number(p_text, "p"), number(eps_text, "eps"));
      std::cout << to_json(report).dump() << '\n';
    } else if (*threshold) {
      const NFunction nf = parse_nfunction(phi);
      std::cout << format_double(epsilon_threshold(nf, number(c_text, "c"), number(p_text, "p"))) << '\n';
    } else if (*plan) {
      const ProcessModel model = parse_model(model_spec);
      const WaveletPair basis = make_basis(basis_spec);
      const NFunction nf = parse_nfunction(phi);
      try {
        const Plan result = plan_truncation(model, basis, nf, number(p_text, "p"), number(T_text, "T"),
                                            number(eps_text, "eps"), number(delta_text, "delta"),
                                            number(alpha_text, "alpha"));
        nlohmann::json doc = to_json(result.report);
        doc["scheme"] = result.scheme.spec();
        doc["n"] = result.n;
        doc["m"] = result.m;
        std::cout << result.scheme.spec() << '\n' << doc.dump() << '\n';
      } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        std::cout << nlohmann::json{{"feasible", false}, {"best_bound", e.best_bound()}}.dump() << '\n';
        return 1;
      }
    } else if (*info) {
      const WaveletPair basis = make_basis(basis_spec);
      nlohmann::json doc;
      doc["basis"] = basis.spec();
      doc["continuous"] = basis.continuous();
      if (!basis.caveat().empty()) doc["caveat"] = basis.caveat();
      doc["C_phi"] = envelope_constant(basis.envelope_f());
      doc["C_psi"] = envelope_constant(basis.envelope_m());
      if (!k1_text.empty()) {
        const double T = number(T_text, "T");
        const long k1 = integer(k1_text, "k1");
        doc["T"] = T;
        doc["k1"] = k1;
        doc["C_phi_tail"] = tail_constant(basis.envelope_f(), T, k1);
        doc["C_psi_tail"] = tail_constant(basis.envelope_m(), T, k1);
      }
      const LipschitzFit fit = lipschitz_fit(basis, {0.25, 0.5, 0.75, 1.0, 1.5, 2.0});
      doc["lipschitz"] = {{"order", fit.order}, {"constant", fit.constant}};
      std::cout << doc.dump() << '\n';
    } else if (*simulate) {
      const ProcessModel model = parse_model(model_spec);
      const long n_paths = integer(paths_text, "paths");
      const long seed = integer(seed_text, "seed");
      if (seed < 0) throw ValidationError("--seed must be nonnegative");
      const auto paths = simulate_paths(model, number(L_text, "L"), number(h_text, "h"), n_paths,
                                        static_cast<std::uint64_t>(seed));
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw ValidationError("cannot create output directory '" + out_dir + "'");
      for (const auto& path : paths)
        write_path_csv(path, std::filesystem::path(out_dir) / ("path_" + std::to_string(path.path_index) + ".csv"));
    } else if (*experiment) {
      const ExperimentConfig cfg = load_config(config_file);
      write_experiment(run_experiment(cfg), out_dir);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
