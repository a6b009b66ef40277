#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "baglab/errors.hpp"
#include "baglab/harness.hpp"

namespace baglab::harness {

namespace {

using nlohmann::json;

const std::vector<std::string> kKnownKeys = {"preset", "n",          "gamma_grid", "scheme",
                                             "B",      "r",          "sigma",      "covariance",
                                             "repetitions", "seed",  "output",     "thetas"};

class Reader {
 public:
  explicit Reader(const json& j) : j_(j) {}

  template <typename T>
  std::optional<T> get(const std::string& key) {
    if (!j_.contains(key)) return std::nullopt;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      problems.push_back("field '" + key + "' has the wrong type");
      return std::nullopt;
    }
  }

  std::vector<std::string> problems;

 private:
  const json& j_;
};

bool strictly_increasing(const std::vector<double>& g) {
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) return false;
  return true;
}

std::vector<std::string> problems_of(const ExperimentConfig& cfg) {
  std::vector<std::string> p;
  if (cfg.preset) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), *cfg.preset) == names.end())
      p.push_back("preset: unknown preset '" + *cfg.preset + "'");
    const Overrides& o = cfg.overrides;
    if (o.reps && *o.reps < 1) p.push_back("repetitions: must be >= 1");
    if (o.n && *o.n < 2) p.push_back("n: must be >= 2");
    if (o.gammas && (o.gammas->empty() || !strictly_increasing(*o.gammas)))
      p.push_back("gamma_grid: must be non-empty and strictly increasing");
    if (o.B && *o.B < 1) p.push_back("B: must be >= 1");
    if (o.r && !(*o.r >= 0.0)) p.push_back("r: must be >= 0");
    if (o.sigma && !(*o.sigma >= 0.0)) p.push_back("sigma: must be >= 0");
    if (o.thetas)
      for (double t : *o.thetas)
        if (!(t > 0.0 && t <= 1.0)) p.push_back("thetas: each value must lie in (0, 1]");
    return p;
  }
  if (cfg.n < 2) p.push_back("n: must be >= 2");
  if (cfg.gamma_grid.empty()) p.push_back("gamma_grid: must be non-empty");
  else if (!strictly_increasing(cfg.gamma_grid)) p.push_back("gamma_grid: must be strictly increasing");
  for (double g : cfg.gamma_grid) {
    if (!(g > 0.0)) {
      p.push_back("gamma_grid: values must be positive");
      break;
    }
    if (std::llround(static_cast<double>(cfg.n) * g) < 1) {
      p.push_back("gamma_grid: n * gamma rounds to zero features");
      break;
    }
  }
  try {
    MultiplierScheme::parse(cfg.scheme);
  } catch (const Error& e) {
    p.push_back(std::string("scheme: ") + e.what());
  }
  if (cfg.B < 1) p.push_back("B: must be >= 1");
  if (!(cfg.r >= 0.0)) p.push_back("r: must be >= 0");
  if (!(cfg.sigma >= 0.0)) p.push_back("sigma: must be >= 0");
  try {
    const CovarianceKind kind = parse_covariance_kind(cfg.covariance);
    if (kind == CovarianceKind::Explicit)
      p.push_back("covariance: explicit spectra are not supported in config files");
  } catch (const Error& e) {
    p.push_back(std::string("covariance: ") + e.what());
  }
  if (cfg.repetitions < 1) p.push_back("repetitions: must be >= 1");
  return p;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  auto p = problems_of(cfg);
  if (!p.empty()) throw ValidationError(std::move(p));
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
  }
  if (!j.is_object()) throw ValidationError({"config must be a JSON object"});

  Reader rd(j);
  for (const auto& item : j.items())
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), item.key()) == kKnownKeys.end())
      rd.problems.push_back("unknown field '" + item.key() + "'");

  ExperimentConfig cfg;
  cfg.preset = rd.get<std::string>("preset");
  const auto n = rd.get<Index>("n");
  const auto grid = rd.get<std::vector<double>>("gamma_grid");
  const auto scheme = rd.get<std::string>("scheme");
  const auto B = rd.get<int>("B");
  const auto r = rd.get<double>("r");
  const auto sigma = rd.get<double>("sigma");
  const auto cov = rd.get<std::string>("covariance");
  const auto reps = rd.get<int>("repetitions");
  const auto seed = rd.get<std::uint64_t>("seed");
  const auto thetas = rd.get<std::vector<double>>("thetas");
  if (auto out = rd.get<std::string>("output")) cfg.output = *out;

  if (cfg.preset) {
    Overrides& o = cfg.overrides;
    o.n = n;
    o.gammas = grid;
    o.B = B;
    o.r = r;
    o.sigma = sigma;
    o.reps = reps;
    o.seed = seed;
    o.thetas = thetas;
    if (scheme) rd.problems.push_back("scheme: not applicable with a preset (use thetas)");
    if (cov) rd.problems.push_back("covariance: not applicable with a preset");
    if (seed) cfg.seed = *seed;
  } else {
    if (!grid) rd.problems.push_back("gamma_grid: required without a preset");
    if (thetas) rd.problems.push_back("thetas: only applicable with a preset");
    if (n) cfg.n = *n;
    if (grid) cfg.gamma_grid = *grid;
    if (scheme) cfg.scheme = *scheme;
    if (B) cfg.B = *B;
    if (r) cfg.r = *r;
    if (sigma) cfg.sigma = *sigma;
    if (cov) cfg.covariance = *cov;
    if (reps) cfg.repetitions = *reps;
    if (seed) cfg.seed = *seed;
  }

  auto more = problems_of(cfg);
  if (!cfg.preset && !grid) {
    std::erase_if(more, [](const std::string& s) { return s.rfind("gamma_grid", 0) == 0; });
  }
  rd.problems.insert(rd.problems.end(), more.begin(), more.end());
  if (!rd.problems.empty()) throw ValidationError(std::move(rd.problems));
  return cfg;
}

}  // namespace baglab::harness
