#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "baglab/bagging_engine.hpp"
#include "baglab/errors.hpp"
#include "baglab/harness.hpp"
#include "baglab/risk_empirical.hpp"
#include "baglab/rng.hpp"
#include "baglab/theory.hpp"

using namespace baglab;
namespace th = baglab::theory;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& note) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok   " : "FAIL ") + note);
  }
  void info(const std::string& note) { notes.push_back("     " + note); }
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

int inversions(const std::vector<double>& v) {
  int k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) ++k;
  return k;
}

harness::Table custom(double gamma, const std::string& scheme, int B, double r, double sigma,
                      const std::string& cov, int reps, Index n, std::uint64_t seed) {
  harness::ExperimentConfig cfg;
  cfg.n = n;
  cfg.gamma_grid = {gamma};
  cfg.scheme = scheme;
  cfg.B = B;
  cfg.r = r;
  cfg.sigma = sigma;
  cfg.covariance = cov;
  cfg.repetitions = reps;
  cfg.seed = seed;
  return harness::run_custom(cfg);
}

// Decomposition identity on random instances.
Outcome criterion1() {
  Outcome o;
  const std::vector<MultiplierScheme> schemes = {MultiplierScheme::bernoulli(0.5), MultiplierScheme::multinomial(),
                                                 MultiplierScheme::jackknife(), MultiplierScheme::ones(),
                                                 MultiplierScheme::bernoulli(0.8)};
  Rng rng(20240101);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index n = 10 + static_cast<Index>(rng.index(91));
    const Index d = 2 + static_cast<Index>(rng.index(std::min<std::uint64_t>(199, 2 * n)));
    const int B = 1 + static_cast<int>(rng.index(10));
    const auto& scheme = schemes[static_cast<std::size_t>(i) % schemes.size()];
    const auto kind = i % 2 ? CovarianceKind::TwoPoint : CovarianceKind::Isotropic;
    const AspectConfig cfg{n, static_cast<double>(d) / static_cast<double>(n)};
    const auto ds = sample_dataset(cfg, build_covariance(kind, cfg.d()), RandomSignal{2.0}, 1.5, 500 + i);
    const auto fit = bagged_ls(ds, scheme, B, 900 + i);
    const auto a = conditional_risk(smoother_of(fit, ds), ds.X, ds.beta, ds.covariance, ds.sigma);
    const auto b = lemma_decomposition(fit, ds);
    const double e = std::max({rel_err(a.risk, b.risk), rel_err(a.variance, b.variance),
                               std::abs(a.bias - b.bias) / std::max(b.risk, 1e-300)});
    worst = std::max(worst, e);
  }
  o.require(worst < 1e-8, fmt::format("max relative discrepancy {:.3e} over 50 instances (tol 1e-8)", worst));
  return o;
}

// Monte Carlo oracle against the exact conditional risk.
Outcome criterion2() {
  Outcome o;
  const std::vector<MultiplierScheme> schemes = {MultiplierScheme::bernoulli(0.6), MultiplierScheme::multinomial(),
                                                 MultiplierScheme::jackknife(), MultiplierScheme::bernoulli(0.3),
                                                 MultiplierScheme::ones()};
  for (int i = 0; i < 10; ++i) {
    const double gamma = i % 2 ? 0.5 : 1.6;
    const AspectConfig cfg{50, gamma};
    const auto kind = i % 3 == 2 ? CovarianceKind::TwoPoint : CovarianceKind::Isotropic;
    const auto ds = sample_dataset(cfg, build_covariance(kind, cfg.d()), RandomSignal{1.0}, 1.0, 700 + i);
    const auto fit = bagged_ls(ds, schemes[static_cast<std::size_t>(i) % schemes.size()], 1 + i % 4, 40 + i);
    const LinearSmoother A = smoother_of(fit, ds);
    const auto exact = conditional_risk(A, ds.X, ds.beta, ds.covariance, ds.sigma);
    const auto mc = monte_carlo_risk([&](const Vector& y) { return A.apply(y); }, ds, 2000, 2000, 77 + i);
    const double z = (mc.risk - exact.risk) / mc.risk_se;
    const bool ok = std::abs(z) < 3.0;
    o.require(ok, fmt::format("instance {} (d={}, {}): exact {:.5f}, MC {:.5f} +- {:.5f}, z = {:+.2f}", i, ds.d(),
                              schemes[static_cast<std::size_t>(i) % schemes.size()].name(), exact.risk, mc.risk,
                              mc.risk_se, z));
  }
  return o;
}

// Bagged risk against the isotropic limit.
Outcome criterion3() {
  Outcome o;
  const double B = 50.0;
  for (double theta : {0.2, 0.6}) {
    for (double gamma : {0.25, 0.5, 2.0, 4.0, 8.0}) {
      const auto t = custom(gamma, MultiplierScheme::bernoulli(theta).name(), 50, 5.0, 5.0, "isotropic", 100, 400, 31);
      const auto& row = t.rows.front();
      const double limit = th::bagged_risk_iso(gamma, theta, 5.0, 5.0).risk.risk;
      // With B bags the expected risk is R_inf + (R_1 - R_inf) / B.
      const double single = th::sketched_risk_iso(gamma, limiting_measure(MultiplierScheme::bernoulli(theta)), 5.0, 5.0).risk.risk;
      const double finite_b = limit + (single - limit) / B;
      o.require(rel_err(*row.emp_risk, limit) < 0.10,
                fmt::format("theta={} gamma={}: empirical {:.4f} +- {:.4f} vs limit {:.4f} (rel {:.3f}); "
                            "finite-B prediction {:.4f} (rel {:.3f})",
                            theta, gamma, *row.emp_risk, *row.emp_se, limit, rel_err(*row.emp_risk, limit), finite_b,
                            rel_err(*row.emp_risk, finite_b)));
    }
  }
  return o;
}

// Sketched risk in the underparameterized regime.
Outcome criterion4() {
  Outcome o;
  const double gamma = 0.3, r = 5.0, sigma = 5.0;
  const auto t = custom(gamma, "bernoulli:0.6", 1, r, sigma, "isotropic", 100, 400, 41);
  const double ratio = gamma / 0.6;
  const double target = sigma * sigma * ratio / (1.0 - ratio);
  o.require(rel_err(*t.rows.front().emp_risk, target) < 0.10,
            fmt::format("Bernoulli(0.6) sketched: empirical {:.4f} vs {:.4f} (rel {:.3f})", *t.rows.front().emp_risk,
                        target, rel_err(*t.rows.front().emp_risk, target)));

  const double theta = 1.0 - std::exp(-1.0);
  const double bern_theory =
      th::sketched_risk_iso(gamma, limiting_measure(MultiplierScheme::bernoulli(theta)), r, sigma).risk.risk;
  const AspectConfig cfg{400, gamma};
  const auto cov = build_covariance(CovarianceKind::Isotropic, cfg.d());
  std::vector<double> diff;
  for (int s = 0; s < 100; ++s) {
    const auto ds = sample_dataset(cfg, cov, RandomSignal{r}, sigma, derive_seed(42, static_cast<std::uint64_t>(s)));
    KernelBagger engine(ds.X, ds.covariance);
    const auto bags = draw_bags(MultiplierScheme::multinomial(), ds.n(), 1, derive_seed(43, static_cast<std::uint64_t>(s)));
    diff.push_back(engine.risk(engine.averaged(bags), ds.beta, ds.sigma).risk - bern_theory);
  }
  const double tstat = mean_of(diff) / se_of(diff);
  o.require(tstat > 1.6604,
            fmt::format("multinomial sketched exceeds Bernoulli({:.4f}) theory {:.4f}: mean excess {:.4f}, t = {:.2f} "
                        "(one-sided 95% critical 1.660, 99 df)",
                        theta, bern_theory, mean_of(diff), tstat));
  return o;
}

// Correlated features: sketched and bagged against their limits.
Outcome criterion5() {
  Outcome o;
  for (double theta : {0.2, 0.6}) {
    for (double gamma : {0.4, 2.0, 4.0}) {
      for (int B : {1, 50}) {
        const auto t = custom(gamma, MultiplierScheme::bernoulli(theta).name(), B, 3.0, 3.0, "two-point", 100, 400, 51);
        const auto& row = t.rows.front();
        const auto H = SpectralMeasure({2.0, 1.0}, {0.5, 0.5});
        const double limit =
            B == 1 ? th::sketched_risk_corr(gamma, 3.0, 3.0, H, limiting_measure(MultiplierScheme::bernoulli(theta))).risk.risk
                   : th::bagged_risk_corr(gamma, theta, 3.0, 3.0, H).risk.risk;
        o.require(rel_err(*row.emp_risk, limit) < 0.10,
                  fmt::format("theta={} gamma={} B={}: empirical {:.4f} +- {:.4f} vs {:.4f} (rel {:.3f})", theta, gamma, B,
                              *row.emp_risk, *row.emp_se, limit, rel_err(*row.emp_risk, limit)));
      }
    }
  }
  return o;
}

// Bagged fits approach the equivalent ridge fit.
Outcome criterion6() {
  Outcome o;
  harness::Overrides ov;
  ov.thetas = std::vector<double>{0.2, 0.6};
  const auto t = harness::run_preset("fig6", ov);
  for (const std::string scheme : {"bernoulli:0.2", "bernoulli:0.6"}) {
    std::vector<double> by_b, by_n;
    for (const auto& row : t.rows) {
      if (row.scheme != scheme) continue;
      const auto panel = std::find_if(row.extra.begin(), row.extra.end(), [](const auto& kv) { return kv.first == "panel"; });
      (panel->second == "B" ? by_b : by_n).push_back(*row.extra_value("ridge_diff_sq"));
    }
    std::string sb, sn;
    for (double x : by_b) sb += fmt::format(" {:.4g}", x);
    for (double x : by_n) sn += fmt::format(" {:.4g}", x);
    o.require(inversions(by_b) <= 1, fmt::format("{} vs B=1..10:{} ({} inversions)", scheme, sb, inversions(by_b)));
    o.require(inversions(by_n) <= 1, fmt::format("{} vs n=100..800:{} ({} inversions)", scheme, sn, inversions(by_n)));
    o.require(by_b.back() < 0.2 * by_b.front(),
              fmt::format("{} B=10 / B=1 = {:.3f} (< 0.2)", scheme, by_b.back() / by_b.front()));
  }
  return o;
}

harness::Table& training_run() {
  static harness::Table t = custom(2.0, "bernoulli:0.5", 50, 1.0, 1.0, "isotropic", 100, 600, 71);
  return t;
}

// Training error identity.
Outcome criterion7() {
  Outcome o;
  const auto& row = training_run().rows.front();
  const double risk = th::bagged_risk_iso(2.0, 0.5, 1.0, 1.0).risk.risk;
  const double target = th::limiting_training_error(0.5, risk, 1.0);
  const double emp = *row.extra_value("train_err");
  o.require(rel_err(emp, target) < 0.10,
            fmt::format("mean training error {:.5f} vs {:.6f} (rel {:.3f})", emp, target, rel_err(emp, target)));
  return o;
}

// Norm and adversarial risk.
Outcome criterion8() {
  Outcome o;
  const double target = th::limiting_norm_sq_bagged_iso(2.0, 0.5, 1.0, 1.0);
  const double emp = *training_run().rows.front().extra_value("norm_sq");
  o.require(rel_err(emp, target) < 0.10,
            fmt::format("mean squared norm {:.5f} vs {:.6f} (rel {:.3f})", emp, target, rel_err(emp, target)));
  bool exact = true;
  for (double risk : {0.0, 0.3, 1.7})
    for (double nrm : {0.0, 1.0, 4.0}) exact = exact && adversarial_risk(nrm, risk, 1.0, 0.0) == risk;
  o.require(exact, "adversarial risk with delta = 0 returns the risk exactly");
  const double bag = adversarial_risk(std::sqrt(target), th::bagged_risk_iso(2.0, 0.5, 1.0, 1.0).risk.risk, 1.0, 0.1);
  const double mn = adversarial_risk(std::sqrt(th::limiting_norm_sq_minnorm_iso(2.0, 1.0, 1.0)),
                                     th::minnorm_risk_iso(2.0, 1.0, 1.0).risk, 1.0, 0.1);
  o.require(bag < mn, fmt::format("adversarial risk at delta 0.1: bagged {:.5f} < min-norm {:.5f}", bag, mn));
  return o;
}

// Solver identities.
Outcome criterion9() {
  Outcome o;
  const std::vector<SpectralMeasure> Hs = {SpectralMeasure::point_mass(1.0), SpectralMeasure({2.0, 1.0}, {0.5, 0.5})};
  double worst_tilde = 0.0, worst_sk = 0.0, worst_bag = 0.0;
  int count = 0;
  for (double gamma : {1.2, 1.5, 2.0, 4.0, 8.0})
    for (double theta : {0.2, 0.4, 0.6, 0.8, 1.0})
      for (std::size_t h = 0; h < Hs.size(); ++h) {
        const auto s = th::solve_v_tilde(gamma, theta, Hs[h]);
        worst_tilde = std::max(worst_tilde, rel_err(s.tilde_v0, theta * s.v0));
        ++count;
        if (h == 0) {
          const auto mu = limiting_measure(MultiplierScheme::bernoulli(theta));
          worst_sk = std::max(worst_sk, rel_err(th::sketched_risk_corr(gamma, 2.0, 1.0, Hs[0], mu).risk.risk,
                                                th::sketched_risk_iso(gamma, mu, 2.0, 1.0).risk.risk));
          worst_bag = std::max(worst_bag, rel_err(th::bagged_risk_corr(gamma, theta, 2.0, 1.0, Hs[0]).risk.risk,
                                                  th::bagged_risk_iso(gamma, theta, 2.0, 1.0).risk.risk));
        }
      }
  o.require(worst_tilde < 1e-10, fmt::format("tilde v(0) = theta v(0) on {} points: max rel {:.2e}", count, worst_tilde));
  o.require(worst_sk < 1e-10, fmt::format("correlated sketched risk at identity covariance: max rel {:.2e}", worst_sk));
  o.require(worst_bag < 1e-10, fmt::format("correlated bagged risk at identity covariance: max rel {:.2e}", worst_bag));

  double worst_m1 = 0.0;
  for (double theta : {0.4, 0.6, 0.9})
    for (double frac : {0.1, 0.5, 0.9}) {
      const auto mu = limiting_measure(MultiplierScheme::bernoulli(theta));
      const double gamma = frac * theta;
      worst_m1 = std::max(worst_m1, rel_err(gamma * th::m1_solver(0.0, gamma, mu).value, th::solve_c0(gamma, mu).value));
    }
  o.require(worst_m1 < 1e-10, fmt::format("gamma m1(0) = c0: max rel {:.2e}", worst_m1));

  double worst_fd = 0.0;
  for (const auto& H : Hs)
    for (double gamma : {1.5, 2.0, 4.0})
      for (double theta : {0.3, 0.6, 1.0}) {
        const double h = 1e-4;
        const double v0 = th::solve_v(0.0, gamma, theta, H).value;
        const double fd = (v0 - th::solve_v(-h, gamma, theta, H).value) / h;
        worst_fd = std::max(worst_fd, rel_err(th::v_prime(gamma, theta, H, v0), fd));
      }
  o.require(worst_fd < 1e-3, fmt::format("v'(0) vs finite difference at z = -1e-4: max rel {:.2e}", worst_fd));
  return o;
}

// Boundedness and variance-ratio properties.
Outcome criterion10() {
  Outcome o;
  int points = 0, violations = 0;
  for (double theta : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double r : {0.5, 1.0, 5.0})
      for (double sigma : {0.5, 1.0, 5.0}) {
        const double bound = std::max(sigma * sigma * theta / (1.0 - theta), r * r);
        for (int k = 1; k <= 100; ++k) {
          const double gamma = 0.1 * k;
          if (th::classify_regime(gamma, theta) == th::Regime::NearThreshold) continue;
          ++points;
          if (th::bagged_risk_iso(gamma, theta, r, sigma).risk.risk > bound * (1.0 + 1e-12)) ++violations;
        }
      }
  o.require(violations == 0, fmt::format("bagged risk bound holds at {} of {} grid points", points - violations, points));

  const std::vector<SpectralMeasure> Hs = {SpectralMeasure::point_mass(1.0), SpectralMeasure({2.0, 1.0}, {0.5, 0.5}),
                                           SpectralMeasure({4.0, 1.0, 0.25}, {0.25, 0.5, 0.25})};
  double worst = -1.0;
  int n_ratio = 0;
  for (const auto& H : Hs)
    for (double theta : {0.2, 0.4, 0.6, 0.8})
      for (double ratio : {1.03, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0}) {
        worst = std::max(worst, th::variance_ratio_bagged_vs_sketched(ratio * theta, theta, H) / theta);
        ++n_ratio;
      }
  o.require(worst <= 1.0 + 1e-12, fmt::format("variance ratio / theta <= 1 on {} points (max {:.4f})", n_ratio, worst));
  for (const auto& H : Hs) {
    std::vector<double> near;
    for (double ratio : {1.1, 1.03, 1.01, 1.001}) near.push_back(th::variance_ratio_bagged_vs_sketched(ratio * 0.5, 0.5, H));
    o.require(near[2] < 0.05 && std::is_sorted(near.rbegin(), near.rend()),
              fmt::format("{}: variance ratio at gamma/theta 1.1, 1.03, 1.01, 1.001 = {:.4f} {:.4f} {:.4f} {:.5f}",
                          H.to_string(), near[0], near[1], near[2], near[3]));
  }
  return o;
}

// Timing order.
Outcome criterion11() {
  Outcome o;
  harness::BenchOptions opt;
  opt.ns = {800};
  const auto t = harness::run_bench("table2", opt);
  double bern = 0, classical = 0, orth = 0;
  for (const auto& row : t.rows) {
    const double ms = *row.extra_value("wall_ms");
    if (row.scheme == "classical") classical = ms;
    else if (row.scheme == "orthogonal") orth = ms;
    else bern = ms;
  }
  o.require(bern < classical && classical < orth,
            fmt::format("median ms at n=800, B=10: Bernoulli {:.1f} < classical {:.1f} < orthogonal {:.1f}", bern,
                        classical, orth));
  return o;
}

// Determinism of every preset.
Outcome criterion12() {
  Outcome o;
  for (const auto& name : harness::preset_names()) {
    harness::Overrides ov;
    const bool limit_only = name == "fig5" || name == "fig9";
    if (!limit_only) {
      ov.reps = 2;
      ov.n = 60;
      ov.ns = std::vector<Index>{40, 60};
      ov.gammas = std::vector<double>{0.5, 1.2};
    }
    ov.seed = 1234;
    const std::string a = harness::to_csv(harness::run_preset(name, ov, {1}));
    const std::string b = harness::to_csv(harness::run_preset(name, ov, {3}));
    o.require(a == b, fmt::format("{}: {} bytes, identical across two runs (1 and 3 threads)", name, a.size()));
  }
  o.info("bench tables are timing-only and excluded from byte comparison");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double budget_s = 0.0;  // 0 = no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "exact decomposition identity", criterion1, 30},
      {2, "Monte Carlo oracle equivalence", criterion2, 120},
      {3, "bagged isotropic risk vs limit", criterion3, 600},
      {4, "sketched isotropic risk, multinomial vs Bernoulli", criterion4},
      {5, "correlated features vs limits", criterion5},
      {6, "ridge equivalence convergence", criterion6},
      {7, "training error identity", criterion7},
      {8, "norm and adversarial risk", criterion8},
      {9, "solver identity suite", criterion9, 10},
      {10, "boundedness and variance ratio", criterion10},
      {11, "timing order", criterion11},
      {12, "determinism of presets", criterion12},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0)
      out.require(secs < c.budget_s, fmt::format("runtime {:.1f} s within {:.0f} s", secs, c.budget_s));
    fmt::print("[{}] criterion {:2d}: {} ({:.1f} s)\n", out.pass ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const auto& n : out.notes) fmt::print("        {}\n", n);
    std::fflush(stdout);
    failed += !out.pass;
  }
  fmt::print("{} criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
