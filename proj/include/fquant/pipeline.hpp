#pragma once

#include "fquant/antichain.hpp"
#include "fquant/estimates.hpp"
#include "fquant/fixtures.hpp"
#include "fquant/lloyd.hpp"
#include "fquant/measure.hpp"
#include "fquant/pressure.hpp"
#include "fquant/quantize.hpp"
#include "fquant/separation.hpp"
#include "fquant/word.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace fquant {

struct PipelineConfig {
  double r = 1.0;
  std::uint64_t seed = 0;
  std::size_t depth = 0;  // 0: chosen by the depth rule
  std::size_t n_min = 16;
  std::size_t n_max = 1024;
  bool lloyd = false;
  int restarts = 8;
};

struct PipelineRow {
  std::size_t n;
  double v;
  double e_n;
};

struct PipelineReport {
  double kappa = 0.0;
  double estimate = 0.0;  // least-squares slope of r log n against -log V_n
  double abs_error = 0.0;
  double lower = 0.0, upper = 0.0;
  std::size_t depth = 0;
  std::size_t atoms = 0;
  bool depth_rule_ok = true;
  std::string warning;
  std::string method;
  std::vector<PipelineRow> rows;
};

/// Samples omega, quantizes its approximant at dyadic n in [n_min, n_max] and
/// compares the growth exponent with kappa_r.
inline PipelineReport run_pipeline(const RifsSpec& spec, const PipelineConfig& cfg) {
  if (spec.dimension != 1 && !cfg.lloyd) throw Unsupported("exact pipeline needs d = 1; pass --lloyd for d >= 2");
  if (cfg.n_min < 2 || cfg.n_max < cfg.n_min) throw DegenerateInput("pipeline needs 2 <= n_min <= n_max");
  PipelineReport rep;
  rep.kappa = solve_kappa(spec, cfg.r).exponent;
  const std::size_t wanted = depth_for_quantization(spec, cfg.n_max, rep.kappa);
  rep.depth = cfg.depth ? cfg.depth : wanted;
  if (rep.depth < wanted) {
    rep.depth_rule_ok = false;
    rep.warning = "depth " + std::to_string(rep.depth) + " violates the resolution rule c_max^depth <= 1e-2 n^(-1/kappa) (needs " +
                  std::to_string(wanted) + ")";
  }
  const Word omega = sample_word(spec, cfg.seed, rep.depth);
  const DiscreteMeasure mu = approximant(spec, omega, rep.depth, default_anchor(spec));
  rep.atoms = mu.size();

  std::vector<std::size_t> ns;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; n *= 2) ns.push_back(n);
  std::vector<SeriesPoint> points;
  if (!cfg.lloyd) {
    rep.method = to_string(QuantMethod::ExactDp);
    const auto series = vnr_exact_1d_series(mu, ns.back(), cfg.r);
    for (std::size_t n : ns) points.emplace_back(static_cast<double>(n), series[n - 1]);
  } else {
    rep.method = to_string(QuantMethod::Lloyd);
    for (std::size_t n : ns)
      points.emplace_back(static_cast<double>(n), vnr_lloyd(mu, n, cfg.r, cfg.restarts, cfg.seed + n).cost);
  }
  // a shallow approximant is exactly quantized once n reaches its atom count
  const auto zero = std::find_if(points.begin(), points.end(), [](const SeriesPoint& p) { return !(p.second > 0); });
  if (zero != points.end()) {
    if (!rep.warning.empty()) rep.warning += "; ";
    rep.warning += "V_n = 0 from n = " + num(zero->first) + " (only " + std::to_string(rep.atoms) + " atoms); those n are dropped";
    points.erase(zero, points.end());
  }
  const DimensionEstimate est = estimate_dimension(points, cfg.r);
  rep.estimate = est.slope_fit;
  rep.lower = est.lower;
  rep.upper = est.upper;
  rep.abs_error = std::abs(rep.estimate - rep.kappa);
  for (std::size_t k = 0; k < est.points.size(); ++k)
    rep.rows.push_back({static_cast<std::size_t>(est.points[k].first), est.points[k].second, est.e_n[k]});
  return rep;
}

inline nlohmann::ordered_json to_json(const PipelineReport& rep) {
  nlohmann::ordered_json j;
  j["kappa"] = rep.kappa;
  j["estimate"] = rep.estimate;
  j["abs_error"] = rep.abs_error;
  j["lower"] = rep.lower;
  j["upper"] = rep.upper;
  j["depth"] = rep.depth;
  j["atoms"] = rep.atoms;
  j["method"] = rep.method;
  j["depth_rule_ok"] = rep.depth_rule_ok;
  if (!rep.warning.empty()) j["warning"] = rep.warning;
  return j;
}

inline void write_pipeline_csv(std::ostream& os, const PipelineReport& rep) {
  os << "n;V;e_n\n";
  for (const auto& row : rep.rows) os << row.n << ';' << num(row.v) << ';' << num(row.e_n) << '\n';
}

/// Example 1: separation verdicts and covering constants.
inline nlohmann::ordered_json reproduce_example1(double r) {
  const RifsSpec spec = fixtures::example(1);
  const auto u = check_uessc(spec);
  const auto s = check_suosc_intervals(spec);
  nlohmann::ordered_json j;
  j["example"] = 1;
  j["holds_uessc"] = u.holds;
  j["beta_max"] = u.beta;
  j["holds_suosc"] = s.holds;
  j["open_set"] = {s.open_set.lo[0], s.open_set.hi[0]};
  j["kappa"] = solve_kappa(spec, r).exponent;
  for (double beta : {1.0 / 3.0, u.beta}) {
    const auto lc = lemma_constants(spec, r, beta);
    j["lemma_constants"].push_back({{"beta", beta}, {"D", lc.D}, {"G1", lc.G1}, {"G2", lc.G2}, {"G", lc.G}});
  }
  return j;
}

struct WindowSummary {
  double kappa = 0.0;
  double min_log = 0.0, max_log = 0.0;
  LinearFit drift;
  bool consistent = true;
  double max_identity_error = 0.0;  // Example 3 letter-count identity
};

/// Window products of a sampled word and the Omega' verdict.
inline WindowSummary window_summary(const RifsSpec& spec, std::uint64_t seed, double r, std::size_t n_max,
                                    std::size_t nprime_max) {
  WindowSummary w;
  w.kappa = solve_kappa(spec, r).exponent;
  const Word omega = sample_word(spec, seed, n_max + nprime_max);
  const WindowProducts wp = window_products(spec, omega, r, w.kappa, n_max, nprime_max);
  w.min_log = wp.min_log();
  w.max_log = wp.max_log();
  w.drift = wp.drift();
  w.consistent = wp.consistent_with_omega_prime();
  if (spec.components.size() == 2) {
    // log P(0, n) = (#letter-2 - #letter-1) log B_2 when B_1 B_2 = 1
    const double z = w.kappa / (r + w.kappa);
    const double log_b2 = log_brackets(spec, r, z)[1];
    long double count = 0;
    for (std::size_t n = 1; n <= nprime_max; ++n) {
      count += omega.at(n - 1) == 1 ? 1 : -1;
      w.max_identity_error =
          std::max(w.max_identity_error, std::abs(wp.log_product(0, n) - static_cast<double>(count) * log_b2));
    }
  }
  return w;
}

inline nlohmann::ordered_json to_json(const WindowSummary& w) {
  nlohmann::ordered_json j;
  j["kappa"] = w.kappa;
  j["min_log_product"] = w.min_log;
  j["max_log_product"] = w.max_log;
  j["drift_slope"] = w.drift.slope;
  j["drift_stderr"] = w.drift.stderr_slope;
  j["verdict"] = w.consistent ? "consistent with Omega'" : "inconsistent with Omega'";
  return j;
}

/// Example 2: products identically 1. Example 3: drift and the letter-count identity.
inline nlohmann::ordered_json reproduce_windows(int id, std::uint64_t seed, double r, std::size_t n_max,
                                                std::size_t nprime_max) {
  const RifsSpec spec = fixtures::example(id);
  const WindowSummary w = window_summary(spec, seed, r, n_max, nprime_max);
  nlohmann::ordered_json j;
  j["example"] = id;
  j["seed"] = seed;
  j["n_max"] = n_max;
  j["nprime_max"] = nprime_max;
  j.update(to_json(w));
  if (id == 2) j["all_products_one"] = std::max(std::abs(w.min_log), std::abs(w.max_log)) <= 1e-12;
  if (id == 3) j["identity_max_error"] = w.max_identity_error;
  return j;
}

}  // namespace fquant
