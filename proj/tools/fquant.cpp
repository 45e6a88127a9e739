#include "fquant/fquant.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace fquant;

namespace {

struct Options {
  std::string spec_path;
  int example = 0;
  std::optional<double> r;
  std::uint64_t seed = 0;
  std::size_t depth = 0;
  std::size_t n_max = 0;
  std::size_t nprime_max = 0;
  std::size_t n = 0;
  int restarts = 8;
  std::string out;
  std::string measure_path;
  bool lloyd = false;
};

RifsSpec load(const Options& o) {
  if (!o.spec_path.empty()) return load_spec(o.spec_path);
  if (o.example) return fixtures::example(o.example);
  throw DegenerateInput("either --spec or --example is required");
}

double order(const Options& o, const RifsSpec& spec) { return o.r ? *o.r : spec.r_default; }

std::ofstream open_out(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / name, std::ios::binary);
  if (!f) throw Error("cannot write " + (fs::path(o.out) / name).string());
  return f;
}

void report(const Options& o, const nlohmann::ordered_json& j, const std::string& name) {
  std::cout << j.dump(2) << '\n';
  if (!o.out.empty()) open_out(o, name) << j.dump(2) << '\n';
}

void cmd_kappa(const Options& o) {
  const RifsSpec spec = load(o);
  const double r = order(o, spec);
  const PressureSolution s = solve_kappa(spec, r);
  nlohmann::ordered_json j;
  j["r"] = r;
  j["kappa"] = s.exponent;
  j["z"] = s.z;
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  report(o, j, "kappa.json");
}

void cmd_pipeline(const Options& o) {
  const RifsSpec spec = load(o);
  PipelineConfig cfg;
  cfg.r = order(o, spec);
  cfg.seed = o.seed;
  cfg.depth = o.depth;
  if (o.n_max) cfg.n_max = o.n_max;
  cfg.lloyd = o.lloyd;
  cfg.restarts = o.restarts;
  const PipelineReport rep = run_pipeline(spec, cfg);
  if (!rep.warning.empty()) std::cerr << "warning: " << rep.warning << '\n';
  if (!o.out.empty()) {
    auto f = open_out(o, "pipeline.csv");
    write_pipeline_csv(f, rep);
  }
  auto j = to_json(rep);
  j["seed"] = o.seed;
  j["r"] = cfg.r;
  report(o, j, "pipeline.json");
}

void cmd_reproduce(const Options& o) {
  const double r = o.r ? *o.r : 1.0;
  nlohmann::ordered_json j;
  if (o.example == 1) {
    j = reproduce_example1(r);
  } else if (o.example == 2) {
    const std::size_t n = o.n_max ? o.n_max : 1000;
    j = reproduce_windows(2, o.seed, r, n, n);
  } else if (o.example == 3) {
    const std::size_t n = o.n_max ? o.n_max : 10000;
    j = reproduce_windows(3, o.seed, r, 0, n);
    const RifsSpec spec = fixtures::example(3);
    int inconsistent = 0;
    for (std::uint64_t s = o.seed; s < o.seed + 100; ++s)
      inconsistent += window_summary(spec, s, r, 0, n).consistent ? 0 : 1;
    j["seeds_checked"] = 100;
    j["seeds_inconsistent"] = inconsistent;
  } else {
    throw DegenerateInput("--example must be 1, 2 or 3");
  }
  report(o, j, "reproduce" + std::to_string(o.example) + ".json");
}

void cmd_gamma(const Options& o) {
  const RifsSpec spec = load(o);
  const double r = order(o, spec);
  if (o.n == 0) throw DegenerateInput("--n must be >= 1");
  const Word omega = sample_word(spec, o.seed, 64);
  const auto [gamma, st] = build_gamma(spec, omega, static_cast<double>(o.n), r);
  if (!o.out.empty()) {
    auto f = open_out(o, "gamma.csv");
    write_antichain_csv(f, gamma);
  }
  nlohmann::ordered_json j;
  j["n"] = o.n;
  j["phi"] = st.phi;
  j["l1"] = st.l1;
  j["l2"] = st.l2;
  j["threshold"] = st.threshold;
  j["t_nr"] = st.phi >= 2 ? solve_tnr(gamma, r).exponent : 0.0;
  j["is_fma"] = validate_fma(spec, omega, gamma);
  report(o, j, "gamma.json");
}

void cmd_windows(const Options& o) {
  const RifsSpec spec = load(o);
  const double r = order(o, spec);
  const std::size_t n_max = o.n_max ? o.n_max : 100;
  const std::size_t nprime_max = o.nprime_max ? o.nprime_max : n_max;
  const double kappa = solve_kappa(spec, r).exponent;
  const Word omega = sample_word(spec, o.seed, n_max + nprime_max);
  const WindowProducts wp = window_products(spec, omega, r, kappa, n_max, nprime_max);
  if (!o.out.empty()) {
    auto f = open_out(o, "windows.csv");
    wp.write_csv(f);
    auto g = open_out(o, "ergodic.csv");
    write_ergodic_csv(g, ergodic_series(spec, omega, r, kappa / (r + kappa), n_max + nprime_max));
  }
  report(o, to_json(window_summary(spec, o.seed, r, n_max, nprime_max)), "windows.json");
}

DiscreteMeasure measure_from(const Options& o, const RifsSpec& spec) {
  const Word omega = sample_word(spec, o.seed, o.depth);
  return approximant(spec, omega, o.depth, default_anchor(spec));
}

void cmd_measure(const Options& o) {
  const RifsSpec spec = load(o);
  const DiscreteMeasure mu = measure_from(o, spec);
  if (!o.out.empty()) {
    auto f = open_out(o, "measure.csv");
    write_measure_csv(f, mu);
  }
  const ConvergenceBound cb = cauchy_bound(spec, default_anchor(spec));
  nlohmann::ordered_json j;
  j["depth"] = o.depth;
  j["atoms"] = mu.size();
  j["total"] = mu.total();
  j["cauchy_bound"] = cb.at_depth(o.depth);
  report(o, j, "measure.json");
}

void cmd_quantize(const Options& o) {
  DiscreteMeasure mu;
  double r = o.r ? *o.r : 1.0;
  if (!o.measure_path.empty()) {
    std::ifstream in(o.measure_path);
    if (!in) throw DegenerateInput("cannot open measure file " + o.measure_path);
    mu = read_measure_csv(in);
  } else {
    const RifsSpec spec = load(o);
    r = order(o, spec);
    mu = measure_from(o, spec);
  }
  const std::size_t n_max = o.n_max ? o.n_max : 8;
  std::vector<QuantResult> results;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (o.lloyd || mu.dimension() != 1)
      results.push_back(vnr_lloyd(mu, n, r, o.restarts, o.seed));
    else
      results.push_back(vnr_exact_1d(mu, n, r));
  }
  if (!o.out.empty()) {
    auto f = open_out(o, "quantize.csv");
    write_quant_csv(f, results);
  }
  nlohmann::ordered_json j;
  j["r"] = r;
  j["atoms"] = mu.size();
  for (const auto& q : results) j["V"].push_back(q.cost);
  j["method"] = to_string(results.front().method);
  report(o, j, "quantize.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantization of random homogeneous self-similar measures"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_spec) {
    auto* spec = sub->add_option("--spec", o.spec_path, "RIFS spec file (JSON)");
    auto* ex = sub->add_option("--example", o.example, "bundled example system")->check(CLI::Range(1, 3));
    if (needs_spec) spec->excludes(ex);
    sub->add_option("--r", o.r, "quantization order (defaults to the spec's r)");
    sub->add_option("--seed", o.seed, "word sampling seed");
    sub->add_option("--out", o.out, "output directory for JSON/CSV files");
  };

  auto* kappa = app.add_subcommand("kappa", "solve for kappa_r");
  common(kappa, true);

  auto* pipeline = app.add_subcommand("pipeline", "empirical quantization dimension vs kappa_r");
  common(pipeline, true);
  pipeline->add_option("--depth", o.depth, "approximant depth (default: resolution rule)");
  pipeline->add_option("--n-max", o.n_max, "largest n (dyadic grid from 16)");
  pipeline->add_option("--restarts", o.restarts, "Lloyd restarts");
  pipeline->add_flag("--lloyd", o.lloyd, "use Lloyd instead of the exact 1-D solver");

  auto* reproduce = app.add_subcommand("reproduce", "rerun a bundled example");
  reproduce->add_option("--example", o.example, "example id")->required()->check(CLI::Range(1, 3));
  reproduce->add_option("--seed", o.seed, "word sampling seed");
  reproduce->add_option("--r", o.r, "quantization order");
  reproduce->add_option("--n-max", o.n_max, "window length");
  reproduce->add_option("--out", o.out, "output directory");

  auto* gamma = app.add_subcommand("gamma", "build the antichain Gamma_{omega,n}");
  common(gamma, true);
  gamma->add_option("--n", o.n, "index n")->required();

  auto* windows = app.add_subcommand("windows", "window products and ergodic averages");
  common(windows, true);
  windows->add_option("--n-max", o.n_max, "largest start index");
  windows->add_option("--nprime-max", o.nprime_max, "largest window length");

  auto* measure = app.add_subcommand("measure", "export the depth-n approximant");
  common(measure, true);
  measure->add_option("--depth", o.depth, "depth")->required();

  auto* quantize = app.add_subcommand("quantize", "V_{n,r} for n = 1..n-max");
  common(quantize, true);
  quantize->add_option("--measure", o.measure_path, "measure CSV (x1..xd;weight;sigma)");
  quantize->add_option("--depth", o.depth, "approximant depth");
  quantize->add_option("--n-max", o.n_max, "largest n");
  quantize->add_option("--restarts", o.restarts, "Lloyd restarts");
  quantize->add_flag("--lloyd", o.lloyd, "use Lloyd");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*kappa) cmd_kappa(o);
    if (*pipeline) cmd_pipeline(o);
    if (*reproduce) cmd_reproduce(o);
    if (*gamma) cmd_gamma(o);
    if (*windows) cmd_windows(o);
    if (*measure) cmd_measure(o);
    if (*quantize) cmd_quantize(o);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
