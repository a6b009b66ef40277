#include <algorithm>
#include <cmath>
#include <array>

#include "baglab/bagging_engine.hpp"
#include "baglab/errors.hpp"
#include "baglab/estimators.hpp"
#include "baglab/harness.hpp"
#include "baglab/risk_empirical.hpp"
#include "baglab/theory.hpp"
#include "internal.hpp"

namespace baglab::harness {

namespace {

enum class TheoryKind { None, MinNorm, SketchedIso, BaggedIso, SketchedCorr, BaggedCorr };

struct Series {
  MultiplierScheme scheme;
  int B;
  TheoryKind theory;
};

// Series in a group are evaluated on the same datasets.
struct Group {
  double r;
  double sigma;
  CovarianceKind cov;
  std::vector<Series> series;
};

struct Study {
  Index n = 400;
  int reps = 100;
  std::uint64_t seed = 1;
  std::vector<double> gammas;
  std::vector<Group> groups;
  bool training_extras = false;
};

struct RepOutcome {
  RiskDecomposition risk;
  double train_err = 0.0;
  double norm_sq = 0.0;
};

struct Summary {
  double mean = 0.0;
  double se = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return s;
}

const std::vector<double> kWideGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
                                       1.2, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};

std::vector<double> fine_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double x = std::round((lo + i * step) * 1e9) / 1e9;
    if (x > hi + 1e-12) break;
    g.push_back(x);
  }
  return g;
}

std::uint64_t dataset_seed(std::uint64_t seed, std::size_t point, int rep) {
  return derive_seed(derive_seed(seed, point), static_cast<std::uint64_t>(rep));
}

std::uint64_t bag_seed(std::uint64_t ds_seed, const Series& s) {
  return derive_seed(ds_seed, detail::label_hash(s.scheme.name()) ^ static_cast<std::uint64_t>(s.B));
}

std::optional<theory::TheoryRisk> theory_for(const Series& s, const Group& g, double gamma,
                                             Index d) {
  const double theta = downsampling_ratio(s.scheme);
  try {
    switch (s.theory) {
      case TheoryKind::None:
        return std::nullopt;
      case TheoryKind::MinNorm:
        return theory::TheoryRisk{theory::minnorm_risk_iso(gamma, g.r, g.sigma),
                                  theory::classify_regime(gamma, 1.0)};
      case TheoryKind::SketchedIso:
        return theory::sketched_risk_iso(gamma, limiting_measure(s.scheme), g.r, g.sigma);
      case TheoryKind::BaggedIso:
        return theory::bagged_risk_iso(gamma, theta, g.r, g.sigma);
      case TheoryKind::SketchedCorr:
        return theory::sketched_risk_corr(gamma, g.r, g.sigma,
                                          spectral_measure_of(build_covariance(g.cov, d)),
                                          limiting_measure(s.scheme));
      case TheoryKind::BaggedCorr:
        return theory::bagged_risk_corr(gamma, theta, g.r, g.sigma,
                                        spectral_measure_of(build_covariance(g.cov, d)));
    }
  } catch (const NearThresholdError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

bool near_threshold(const Series& s, double gamma) {
  const double theta = s.theory == TheoryKind::MinNorm ? 1.0 : downsampling_ratio(s.scheme);
  return theory::classify_regime(gamma, theta) == theory::Regime::NearThreshold;
}

void fill_theory(ResultRow& row, const std::optional<theory::TheoryRisk>& th) {
  if (!th) return;
  row.th_bias = th->risk.bias;
  row.th_var = th->risk.variance;
  row.th_risk = th->risk.risk;
}

Table run_study(const Study& study, const std::vector<std::string>& meta, const RunOptions& opt) {
  Table table;
  table.meta = meta;
  for (std::size_t gi = 0; gi < study.gammas.size(); ++gi) {
    const double gamma = study.gammas[gi];
    const AspectConfig cfg{study.n, gamma};
    cfg.validate();
    const Index d = cfg.d();
    for (const Group& g : study.groups) {
      const CovarianceModel cov = build_covariance(g.cov, d);
      std::vector<std::vector<RepOutcome>> out(g.series.size(),
                                               std::vector<RepOutcome>(static_cast<std::size_t>(study.reps)));
      parallel_for(study.reps, opt.threads, [&](int rep) {
        const std::uint64_t s0 = dataset_seed(study.seed, gi, rep);
        const Dataset ds = sample_dataset(cfg, cov, RandomSignal{g.r}, g.sigma, s0);
        KernelBagger bagger(ds.X, ds.covariance);
        for (std::size_t si = 0; si < g.series.size(); ++si) {
          const Series& s = g.series[si];
          const auto bags = draw_bags(s.scheme, ds.n(), s.B, bag_seed(s0, s));
          const Matrix C = bagger.averaged(bags);
          RepOutcome& o = out[si][static_cast<std::size_t>(rep)];
          o.risk = bagger.risk(C, ds.beta, ds.sigma);
          if (study.training_extras) {
            const Vector coef = bagger.coefficients(C, ds.y);
            o.train_err = training_error(coef, ds.X, ds.y);
            o.norm_sq = l2_norm_sq(coef);
          }
        }
      });

      for (std::size_t si = 0; si < g.series.size(); ++si) {
        const Series& s = g.series[si];
        std::vector<double> bias, var, risk, train, norm;
        for (const RepOutcome& o : out[si]) {
          bias.push_back(o.risk.bias);
          var.push_back(o.risk.variance);
          risk.push_back(o.risk.risk);
          train.push_back(o.train_err);
          norm.push_back(o.norm_sq);
        }
        ResultRow row;
        row.gamma = gamma;
        row.theta = downsampling_ratio(s.scheme);
        row.scheme = s.scheme.name();
        row.B = s.B;
        row.n = study.n;
        row.reps = study.reps;
        row.emp_bias = summarize(bias).mean;
        row.emp_var = summarize(var).mean;
        row.emp_risk = *row.emp_bias + *row.emp_var;
        if (study.reps > 1) row.emp_se = summarize(risk).se;
        row.near_threshold = near_threshold(s, gamma);
        const auto th = theory_for(s, g, gamma, d);
        fill_theory(row, th);
        row.add_extra("r", g.r);
        row.add_extra("sigma", g.sigma);
        row.add_extra("covariance", covariance_kind_name(g.cov));
        if (study.training_extras) {
          row.add_extra("train_err", summarize(train).mean);
          row.add_extra("norm_sq", summarize(norm).mean);
          if (th && th->regime == theory::Regime::Over)
            row.add_extra("th_train_err",
                          theory::limiting_training_error(row.theta, th->risk.risk, g.sigma));
          if (th && g.cov == CovarianceKind::Isotropic)
            row.add_extra("th_norm_sq",
                          theory::limiting_norm_sq_bagged_iso(gamma, row.theta, g.r, g.sigma));
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::vector<std::string> base_meta(const std::string& name, const Study& s) {
  return {"preset=" + name, "seed=" + std::to_string(s.seed), "n=" + std::to_string(s.n),
          "reps=" + std::to_string(s.reps)};
}

std::vector<double> thetas_or(const Overrides& o, std::vector<double> fallback) {
  return o.thetas ? *o.thetas : fallback;
}

// Bernoulli series for each theta followed by the multinomial and Jackknife schemes.
std::vector<Series> standard_series(const std::vector<double>& thetas, int B, TheoryKind kind) {
  std::vector<Series> s;
  for (double t : thetas) s.push_back({MultiplierScheme::bernoulli(t), B, kind});
  s.push_back({MultiplierScheme::multinomial(), B, kind});
  s.push_back({MultiplierScheme::jackknife(), B, kind});
  return s;
}

Study base_study(const Overrides& o, std::vector<double> grid, int default_reps = 100) {
  Study s;
  s.n = o.n.value_or(400);
  s.reps = o.reps.value_or(default_reps);
  s.seed = o.seed.value_or(1);
  s.gammas = o.gammas.value_or(std::move(grid));
  return s;
}

Table figure_study(const std::string& name, const Overrides& o, const RunOptions& opt) {
  Study s = base_study(o, kWideGrid);
  const double r5 = o.r.value_or(5.0), s5 = o.sigma.value_or(5.0);
  const double r3 = o.r.value_or(3.0), s3 = o.sigma.value_or(3.0);
  const int B50 = o.B.value_or(50);
  const double mult_theta = 1.0 - std::exp(-1.0);

  if (name == "fig1") {
    std::vector<std::pair<double, double>> rs = {{5, 5}, {10, 5}, {15, 5}};
    if (o.r || o.sigma) rs = {{r5, s5}};
    for (auto [r, sg] : rs)
      s.groups.push_back({r, sg, CovarianceKind::Isotropic,
                          {{MultiplierScheme::ones(), 1, TheoryKind::MinNorm}}});
  } else if (name == "fig2") {
    s.groups.push_back({r5, s5, CovarianceKind::Isotropic,
                        standard_series(thetas_or(o, {0.2, 0.6, 1.0}), o.B.value_or(1),
                                        TheoryKind::SketchedIso)});
  } else if (name == "fig3") {
    s.groups.push_back({r5, s5, CovarianceKind::Isotropic,
                        {{MultiplierScheme::bernoulli(mult_theta), 1, TheoryKind::SketchedIso},
                         {MultiplierScheme::multinomial(), 1, TheoryKind::SketchedIso},
                         {MultiplierScheme::ones(), 1, TheoryKind::MinNorm},
                         {MultiplierScheme::jackknife(), 1, TheoryKind::SketchedIso}}});
  } else if (name == "fig4") {
    s.training_extras = true;
    s.groups.push_back({r5, s5, CovarianceKind::Isotropic,
                        standard_series(thetas_or(o, {0.2, 0.6, 1.0}), B50, TheoryKind::BaggedIso)});
  } else if (name == "fig7") {
    s.groups.push_back({r3, s3, CovarianceKind::TwoPoint,
                        standard_series(thetas_or(o, {0.2, 0.6, 1.0}), o.B.value_or(1),
                                        TheoryKind::SketchedCorr)});
  } else if (name == "fig8") {
    s.groups.push_back({r3, s3, CovarianceKind::TwoPoint,
                        standard_series(thetas_or(o, {0.2, 0.6, 1.0}), B50, TheoryKind::BaggedCorr)});
  }
  return run_study(s, base_meta(name, s), opt);
}

// Limiting variance and risk ratios of the bagged estimator against min-norm.
Table fig5(const Overrides& o) {
  const std::vector<double> gammas = o.gammas.value_or([] {
    auto g = fine_grid(0.1, 2.0, 0.05);
    for (double x : fine_grid(2.25, 10.0, 0.25)) g.push_back(x);
    return g;
  }());
  const double r = o.r.value_or(5.0), sigma = o.sigma.value_or(5.0);
  Table table;
  table.meta = {"preset=fig5", "limit=B,n->inf"};
  for (double theta : thetas_or(o, {0.2, 0.6})) {
    for (double gamma : gammas) {
      ResultRow row;
      row.gamma = gamma;
      row.theta = theta;
      row.scheme = MultiplierScheme::bernoulli(theta).name();
      row.B = 0;
      row.near_threshold = theory::classify_regime(gamma, theta) == theory::Regime::NearThreshold ||
                           theory::classify_regime(gamma, 1.0) == theory::Regime::NearThreshold;
      row.add_extra("r", r);
      row.add_extra("sigma", sigma);
      if (!row.near_threshold) {
        const auto bag = theory::bagged_risk_iso(gamma, theta, r, sigma).risk;
        const auto mn = theory::minnorm_risk_iso(gamma, r, sigma);
        row.th_bias = bag.bias;
        row.th_var = bag.variance;
        row.th_risk = bag.risk;
        row.add_extra("mn_var", mn.variance);
        row.add_extra("mn_risk", mn.risk);
        row.add_extra("var_ratio", bag.variance / mn.variance);
        row.add_extra("risk_ratio", bag.risk / mn.risk);
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

// Limiting squared-norm and adversarial-risk ratios against min-norm.
Table fig9(const Overrides& o) {
  const std::vector<double> gammas = o.gammas.value_or(fine_grid(0.05, 2.0, 0.05));
  const double r = o.r.value_or(3.0), sigma = o.sigma.value_or(3.0);
  const std::vector<double> deltas = {0.01, 0.1};
  Table table;
  table.meta = {"preset=fig9", "limit=B,n->inf"};
  for (double theta : thetas_or(o, {0.2, 0.6})) {
    for (double gamma : gammas) {
      ResultRow row;
      row.gamma = gamma;
      row.theta = theta;
      row.scheme = MultiplierScheme::bernoulli(theta).name();
      row.B = 0;
      row.near_threshold = theory::classify_regime(gamma, theta) == theory::Regime::NearThreshold ||
                           theory::classify_regime(gamma, 1.0) == theory::Regime::NearThreshold;
      row.add_extra("r", r);
      row.add_extra("sigma", sigma);
      if (!row.near_threshold) {
        const auto bag = theory::bagged_risk_iso(gamma, theta, r, sigma).risk;
        const auto mn = theory::minnorm_risk_iso(gamma, r, sigma);
        const double nb = theory::limiting_norm_sq_bagged_iso(gamma, theta, r, sigma);
        const double nm = theory::limiting_norm_sq_minnorm_iso(gamma, r, sigma);
        row.th_bias = bag.bias;
        row.th_var = bag.variance;
        row.th_risk = bag.risk;
        row.add_extra("norm_sq", nb);
        row.add_extra("mn_norm_sq", nm);
        row.add_extra("norm_ratio", nb / nm);
        for (double delta : deltas) {
          const std::string tag = "_d" + format_number(delta);
          const double ab = adversarial_risk(std::sqrt(nb), bag.risk, sigma, delta);
          const double am = adversarial_risk(std::sqrt(nm), mn.risk, sigma, delta);
          row.add_extra("adv_risk" + tag, ab);
          row.add_extra("mn_adv_risk" + tag, am);
          row.add_extra("adv_ratio" + tag, ab / am);
        }
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

// Distance between bagged and equivalent ridge fits, against B and against n.
Table fig6(const Overrides& o, const RunOptions& opt) {
  const double gamma = o.gammas ? o.gammas->front() : 1.2;
  const Index n_fixed = o.n.value_or(800);
  const std::vector<Index> ns = o.ns.value_or(std::vector<Index>{100, 200, 300, 400, 500, 600, 700, 800});
  const int Bmax = o.B.value_or(10);
  const int reps = o.reps.value_or(20);
  const std::uint64_t seed = o.seed.value_or(1);
  const double r = o.r.value_or(5.0), sigma = o.sigma.value_or(5.0);
  std::vector<MultiplierScheme> schemes;
  for (double t : thetas_or(o, {0.2, 0.6})) schemes.push_back(MultiplierScheme::bernoulli(t));
  schemes.push_back(MultiplierScheme::multinomial());
  schemes.push_back(MultiplierScheme::jackknife());

  Table table;
  table.meta = {"preset=fig6", "seed=" + std::to_string(seed), "reps=" + std::to_string(reps),
                "gamma=" + format_number(gamma)};

  // diffs[scheme][b][rep] = |mean of first b+1 bags - ridge|^2
  auto run_panel = [&](Index n, int Bcount, std::size_t point, bool prefixes) {
    const AspectConfig cfg{n, gamma};
    cfg.validate();
    const CovarianceModel cov = build_covariance(CovarianceKind::Isotropic, cfg.d());
    const int nb = prefixes ? Bcount : 1;
    std::vector<std::vector<std::vector<double>>> diffs(
        schemes.size(), std::vector<std::vector<double>>(static_cast<std::size_t>(nb),
                                                         std::vector<double>(static_cast<std::size_t>(reps))));
    parallel_for(reps, opt.threads, [&](int rep) {
      const std::uint64_t s0 = dataset_seed(seed, point, rep);
      const Dataset ds = sample_dataset(cfg, cov, RandomSignal{r}, sigma, s0);
      KernelBagger bagger(ds.X, ds.covariance);
      for (std::size_t si = 0; si < schemes.size(); ++si) {
        const double lambda = theory::ridge_equiv_lambda(gamma, downsampling_ratio(schemes[si]));
        const Vector ridge_fit = bagger.ridge(lambda, ds.y);
        const Series series{schemes[si], Bcount, TheoryKind::None};
        const auto bags = draw_bags(schemes[si], ds.n(), Bcount, bag_seed(s0, series));
        Vector sum = Vector::Zero(ds.d());
        for (int b = 0; b < Bcount; ++b) {
          sum += bagger.coefficients(bagger.representer(bags[static_cast<std::size_t>(b)]), ds.y);
          if (prefixes || b == Bcount - 1) {
            const std::size_t slot = prefixes ? static_cast<std::size_t>(b) : 0;
            diffs[si][slot][static_cast<std::size_t>(rep)] = (sum / (b + 1) - ridge_fit).squaredNorm();
          }
        }
      }
    });
    for (std::size_t si = 0; si < schemes.size(); ++si) {
      for (int b = 0; b < nb; ++b) {
        const auto& v = diffs[si][static_cast<std::size_t>(b)];
        std::vector<double> norms;
        for (double x : v) norms.push_back(std::sqrt(x));
        const Summary sq = summarize(v);
        ResultRow row;
        row.gamma = gamma;
        row.theta = downsampling_ratio(schemes[si]);
        row.scheme = schemes[si].name();
        row.B = prefixes ? b + 1 : Bcount;
        row.n = n;
        row.reps = reps;
        row.add_extra("panel", prefixes ? "B" : "n");
        row.add_extra("lambda", theory::ridge_equiv_lambda(gamma, row.theta));
        row.add_extra("ridge_diff_sq", sq.mean);
        row.add_extra("ridge_diff_sq_se", sq.se);
        row.add_extra("ridge_diff", summarize(norms).mean);
        table.rows.push_back(std::move(row));
      }
    }
  };

  run_panel(n_fixed, Bmax, 0, true);
  for (std::size_t k = 0; k < ns.size(); ++k) run_panel(ns[k], Bmax, k + 1, false);
  return table;
}

// Conditional risks of the estimators timed by the benchmark tables.
Table table_risks(const std::string& name, const Overrides& o, const RunOptions& opt) {
  const bool bagged = name == "table2";
  const int B = o.B.value_or(bagged ? 10 : 1);
  const double gamma = o.gammas ? o.gammas->front() : 1.2;
  const double theta = o.thetas ? o.thetas->front() : 1.0 - std::exp(-1.0);
  const std::vector<Index> ns = o.ns ? *o.ns : (o.n ? std::vector<Index>{*o.n} : std::vector<Index>{400, 600, 800});
  const int reps = o.reps.value_or(20);
  const std::uint64_t seed = o.seed.value_or(1);
  const double r = o.r.value_or(1.0), sigma = o.sigma.value_or(1.0);

  Table table;
  table.meta = {"preset=" + name, "seed=" + std::to_string(seed), "reps=" + std::to_string(reps),
                "timing=lab bench"};
  const MultiplierScheme bern = MultiplierScheme::bernoulli(theta);
  const MultiplierScheme mult = MultiplierScheme::multinomial();

  for (std::size_t k = 0; k < ns.size(); ++k) {
    const AspectConfig cfg{ns[k], gamma};
    cfg.validate();
    const CovarianceModel cov = build_covariance(CovarianceKind::Isotropic, cfg.d());
    std::vector<std::array<RiskDecomposition, 3>> out(static_cast<std::size_t>(reps));
    parallel_for(reps, opt.threads, [&](int rep) {
      const std::uint64_t s0 = dataset_seed(seed, k, rep);
      const Dataset ds = sample_dataset(cfg, cov, RandomSignal{r}, sigma, s0);
      KernelBagger bagger(ds.X, ds.covariance);
      auto& res = out[static_cast<std::size_t>(rep)];
      const MultiplierScheme* schemes[2] = {&bern, &mult};
      for (int j = 0; j < 2; ++j) {
        const Series series{*schemes[j], B, TheoryKind::None};
        const auto bags = draw_bags(*schemes[j], ds.n(), B, bag_seed(s0, series));
        res[static_cast<std::size_t>(j)] = bagger.risk(bagger.averaged(bags), ds.beta, ds.sigma);
      }
      const Index m = static_cast<Index>(std::ceil(theta * static_cast<double>(ds.n())));
      Matrix A = Matrix::Zero(ds.d(), ds.n());
      for (int b = 0; b < B; ++b) {
        Rng rng(derive_seed(derive_seed(s0, detail::label_hash("orthogonal")), static_cast<std::uint64_t>(b)));
        const Matrix S = detail::haar_orthogonal_rows(ds.n(), m, rng);
        Eigen::BDCSVD<Matrix> svd(S * ds.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(kDefaultRankTol);
        const Index rank = svd.rank();
        A += svd.matrixV().leftCols(rank) *
             svd.singularValues().head(rank).cwiseInverse().asDiagonal() *
             svd.matrixU().leftCols(rank).transpose() * S;
      }
      A /= B;
      res[2] = conditional_risk({A, "orthogonal"}, ds.X, ds.beta, ds.covariance, ds.sigma);
    });

    const std::string labels[3] = {bern.name(), mult.name(), "orthogonal:" + format_number(theta)};
    for (int j = 0; j < 3; ++j) {
      std::vector<double> bias, var, risk;
      for (const auto& res : out) {
        bias.push_back(res[static_cast<std::size_t>(j)].bias);
        var.push_back(res[static_cast<std::size_t>(j)].variance);
        risk.push_back(res[static_cast<std::size_t>(j)].risk);
      }
      ResultRow row;
      row.gamma = gamma;
      row.theta = j == 1 ? downsampling_ratio(mult) : theta;
      row.scheme = labels[j];
      row.B = B;
      row.n = ns[k];
      row.reps = reps;
      row.emp_bias = summarize(bias).mean;
      row.emp_var = summarize(var).mean;
      row.emp_risk = *row.emp_bias + *row.emp_var;
      if (reps > 1) row.emp_se = summarize(risk).se;
      row.near_threshold = theory::classify_regime(gamma, row.theta) == theory::Regime::NearThreshold;
      if (j < 2 && !row.near_threshold) {
        const Series s{j == 0 ? bern : mult, B, bagged ? TheoryKind::BaggedIso : TheoryKind::SketchedIso};
        fill_theory(row, theory_for(s, Group{r, sigma, CovarianceKind::Isotropic, {}}, gamma, cfg.d()));
      }
      row.add_extra("r", r);
      row.add_extra("sigma", sigma);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6",
                                                 "fig7", "fig8", "fig9", "table1", "table2"};
  return names;
}

Table run_preset(const std::string& name, const Overrides& overrides, const RunOptions& options) {
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw InvalidArgument("unknown preset '" + name + "'");
  if (overrides.reps && *overrides.reps < 1) throw ValidationError({"reps must be >= 1"});
  if (name == "fig5") return fig5(overrides);
  if (name == "fig6") return fig6(overrides, options);
  if (name == "fig9") return fig9(overrides);
  if (name == "table1" || name == "table2") return table_risks(name, overrides, options);
  return figure_study(name, overrides, options);
}

Table run_custom(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  const MultiplierScheme scheme = MultiplierScheme::parse(cfg.scheme);
  const CovarianceKind cov = parse_covariance_kind(cfg.covariance);
  const bool iso = cov == CovarianceKind::Isotropic;
  TheoryKind kind;
  if (cfg.B == 1)
    kind = iso ? TheoryKind::SketchedIso : TheoryKind::SketchedCorr;
  else
    kind = iso ? TheoryKind::BaggedIso : TheoryKind::BaggedCorr;

  Study s;
  s.n = cfg.n;
  s.reps = cfg.repetitions;
  s.seed = cfg.seed;
  s.gammas = cfg.gamma_grid;
  s.training_extras = true;
  s.groups.push_back({cfg.r, cfg.sigma, cov, {{scheme, cfg.B, kind}}});
  std::vector<std::string> meta = {"preset=custom", "seed=" + std::to_string(cfg.seed),
                                   "n=" + std::to_string(cfg.n),
                                   "reps=" + std::to_string(cfg.repetitions)};
  return run_study(s, meta, options);
}

Table run_config(const ExperimentConfig& cfg, const RunOptions& options) {
  if (cfg.preset) return run_preset(*cfg.preset, cfg.overrides, options);
  return run_custom(cfg, options);
}

}  // namespace baglab::harness
