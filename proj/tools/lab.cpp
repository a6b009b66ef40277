#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "baglab/errors.hpp"
#include "baglab/harness.hpp"
#include "baglab/kernels/kernels.hpp"
#include "baglab/multipliers.hpp"
#include "baglab/risk_empirical.hpp"
#include "baglab/theory.hpp"

namespace {

using namespace baglab;
using nlohmann::ordered_json;

SpectralMeasure parse_spectrum(const std::string& text) {
  std::vector<double> atoms, weights;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("spectrum entries must be atom:weight");
    atoms.push_back(std::stod(item.substr(0, colon)));
    weights.push_back(std::stod(item.substr(colon + 1)));
  }
  return SpectralMeasure::normalized(std::move(atoms), std::move(weights));
}

ordered_json decomposition_json(const RiskDecomposition& r) {
  return {{"bias", r.bias}, {"variance", r.variance}, {"risk", r.risk}};
}

struct TheoryArgs {
  double gamma = 2.0;
  double theta = 0.5;
  double r = 1.0;
  double sigma = 1.0;
  double delta = 0.0;
  std::string model = "iso-bagged";
  std::string scheme;
  std::string spectrum = "2:0.5,1:0.5";
};

ordered_json run_theory(const TheoryArgs& a) {
  ordered_json out = {{"model", a.model}, {"gamma", a.gamma}, {"theta", a.theta},
                      {"r", a.r},         {"sigma", a.sigma}};
  const MultiplierScheme scheme =
      a.scheme.empty() ? MultiplierScheme::bernoulli(a.theta) : MultiplierScheme::parse(a.scheme);
  auto put = [&](const theory::TheoryRisk& t) {
    out["regime"] = theory::regime_name(t.regime);
    out.update(decomposition_json(t.risk));
  };
  try {
    if (a.model == "iso-sketched") {
      out["scheme"] = scheme.name();
      put(theory::sketched_risk_iso(a.gamma, limiting_measure(scheme), a.r, a.sigma));
    } else if (a.model == "iso-bagged") {
      put(theory::bagged_risk_iso(a.gamma, a.theta, a.r, a.sigma));
    } else if (a.model == "minnorm") {
      out.update(decomposition_json(theory::minnorm_risk_iso(a.gamma, a.r, a.sigma)));
    } else if (a.model == "corr-sketched") {
      out["scheme"] = scheme.name();
      out["spectrum"] = a.spectrum;
      put(theory::sketched_risk_corr(a.gamma, a.r, a.sigma, parse_spectrum(a.spectrum),
                                     limiting_measure(scheme)));
    } else if (a.model == "corr-bagged") {
      out["spectrum"] = a.spectrum;
      put(theory::bagged_risk_corr(a.gamma, a.theta, a.r, a.sigma, parse_spectrum(a.spectrum)));
    } else if (a.model == "ridge-lambda") {
      out["lambda"] = theory::ridge_equiv_lambda(a.gamma, a.theta);
    } else if (a.model == "norm-bagged") {
      out["norm_sq"] = theory::limiting_norm_sq_bagged_iso(a.gamma, a.theta, a.r, a.sigma);
    } else if (a.model == "norm-minnorm") {
      out["norm_sq"] = theory::limiting_norm_sq_minnorm_iso(a.gamma, a.r, a.sigma);
    } else if (a.model == "train-err") {
      const auto t = theory::bagged_risk_iso(a.gamma, a.theta, a.r, a.sigma);
      out["regime"] = theory::regime_name(t.regime);
      out["train_err"] = theory::limiting_training_error(a.theta, t.risk.risk, a.sigma);
    } else if (a.model == "adv-bagged") {
      const auto t = theory::bagged_risk_iso(a.gamma, a.theta, a.r, a.sigma);
      const double nsq = theory::limiting_norm_sq_bagged_iso(a.gamma, a.theta, a.r, a.sigma);
      out["delta"] = a.delta;
      out["adv_risk"] = adversarial_risk(std::sqrt(nsq), t.risk.risk, a.sigma, a.delta);
    } else if (a.model == "adv-minnorm") {
      const auto t = theory::minnorm_risk_iso(a.gamma, a.r, a.sigma);
      const double nsq = theory::limiting_norm_sq_minnorm_iso(a.gamma, a.r, a.sigma);
      out["delta"] = a.delta;
      out["adv_risk"] = adversarial_risk(std::sqrt(nsq), t.risk, a.sigma, a.delta);
    } else {
      throw InvalidArgument("unknown model '" + a.model + "'");
    }
  } catch (const NearThresholdError& e) {
    out["regime"] = "near_threshold";
    out["near_threshold"] = true;
    out["message"] = e.what();
  }
  return out;
}

void emit(const harness::Table& table, const std::string& path) {
  if (path.empty() || path == "-") {
    harness::write_csv(table, std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  harness::write_csv(table, os);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bagged and sketched least-squares experiments"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a preset or a JSON config and write CSV");
  std::string preset, config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<Index> n;
  std::optional<int> reps, B, threads;
  std::optional<double> r, sigma;
  std::vector<double> gammas, thetas;
  std::vector<Index> ns;
  auto* preset_opt = run->add_option("--preset", preset, "Preset name")
                         ->check(CLI::IsMember(harness::preset_names()));
  auto* config_opt = run->add_option("--config", config_path, "JSON config file");
  preset_opt->excludes(config_opt);
  run->add_option("--out", out_path, "Output CSV path (default stdout)");
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--n", n, "Sample size");
  run->add_option("--ns", ns, "Sample sizes (tables, fig6 n panel)")->delimiter(',');
  run->add_option("--reps", reps, "Repetitions");
  run->add_option("--gammas", gammas, "Aspect-ratio grid")->delimiter(',');
  run->add_option("--thetas", thetas, "Bernoulli downsampling ratios")->delimiter(',');
  run->add_option("--B", B, "Number of bags");
  run->add_option("--r", r, "Signal strength");
  run->add_option("--sigma", sigma, "Noise level");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // theory
  auto* th = app.add_subcommand("theory", "Evaluate a limiting formula and print JSON");
  TheoryArgs targs;
  th->add_option("--gamma", targs.gamma)->required();
  th->add_option("--theta", targs.theta);
  th->add_option("--r", targs.r);
  th->add_option("--sigma", targs.sigma);
  th->add_option("--delta", targs.delta);
  th->add_option("--scheme", targs.scheme, "Multiplier scheme for sketched models");
  th->add_option("--spectrum", targs.spectrum, "Covariance spectrum as atom:weight,...");
  th->add_option("--model", targs.model)
      ->check(CLI::IsMember({"iso-sketched", "iso-bagged", "minnorm", "corr-sketched",
                             "corr-bagged", "ridge-lambda", "norm-bagged", "norm-minnorm",
                             "train-err", "adv-bagged", "adv-minnorm"}));

  // bench
  auto* bench = app.add_subcommand("bench", "Time the estimators of table1/table2");
  std::string bench_preset = "table2", bench_out;
  harness::BenchOptions bopt;
  bench->add_option("--preset", bench_preset)->check(CLI::IsMember({"table1", "table2"}));
  bench->add_option("--ns", bopt.ns)->delimiter(',');
  bench->add_option("--gamma", bopt.gamma);
  bench->add_option("--runs", bopt.runs);
  bench->add_option("--warmup", bopt.warmup);
  bench->add_option("--seed", bopt.seed);
  bench->add_option("--out", bench_out);

  app.add_subcommand("info", "Print build information");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      harness::RunOptions ropt;
      if (threads) ropt.threads = *threads;
      if (!config_path.empty()) {
        harness::ExperimentConfig cfg = harness::parse_config(read_file(config_path));
        if (seed) {
          cfg.seed = *seed;
          cfg.overrides.seed = *seed;
        }
        const std::string dest = out_path.empty() ? cfg.output : out_path;
        emit(harness::run_config(cfg, ropt), dest);
        return 0;
      }
      if (preset.empty()) throw InvalidArgument("run needs --preset or --config");
      harness::Overrides o;
      o.seed = seed;
      o.n = n;
      o.reps = reps;
      o.B = B;
      o.r = r;
      o.sigma = sigma;
      if (!gammas.empty()) o.gammas = gammas;
      if (!thetas.empty()) o.thetas = thetas;
      if (!ns.empty()) o.ns = ns;
      emit(harness::run_preset(preset, o, ropt), out_path);
    } else if (th->parsed()) {
      std::cout << run_theory(targs).dump(2) << "\n";
    } else if (bench->parsed()) {
      emit(harness::run_bench(bench_preset, bopt), bench_out);
    } else {
      std::cout << "kernels: " << kernels::active().name << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& p : e.problems()) std::cerr << "  - " << p << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
