#include "confclust_cli/commands.hpp"

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confclust/selection.hpp"
#include "confclust/serialize.hpp"

namespace confclust::cli {

namespace {

std::size_t k_max_of(const RunConfig& c) { return c.k_max.value_or(std::max<std::size_t>(c.k_min, 10)); }

std::size_t range_size(const RunConfig& c) { return k_max_of(c) - c.k_min + 1; }

const char* rule_name(ConnectivityRule rule) {
  return rule == ConnectivityRule::geometric ? "geometric" : "sample";
}

// Pipeline configuration for one k (k_nn for levelset); alpha divided by the
// number of candidate k values when the correction is requested.
PipelineConfig pipeline_config(const RunConfig& c, std::size_t k, std::size_t candidates) {
  PipelineConfig p;
  p.method = c.method;
  p.k = k;
  p.alpha = c.corrected ? corrected_alpha(c.alpha, candidates) : c.alpha;
  p.fit.restarts = c.restarts;
  p.fit.seed = curve_fit_seed(c.seed);
  p.level_quantile = c.level_quantile.value_or(1.0 - c.alpha);
  p.adaptive = c.adaptive;
  return p;
}

json run_json(const RunConfig& c, const PipelineConfig& p) {
  return json{{"method", std::string(to_string(c.method))},
              {"k", p.k},
              {"alpha", c.alpha},
              {"alpha_used", p.alpha},
              {"corrected", c.corrected},
              {"seed", c.seed},
              {"restarts", c.restarts},
              {"level_quantile", p.level_quantile},
              {"adaptive", c.adaptive},
              {"mc_samples", c.mc_samples}};
}

}  // namespace

void validate(const RunConfig& c, bool range_required) {
  if (c.input.empty()) throw UsageError("--input is required");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("--alpha must lie strictly between 0 and 1");
  if (c.k == 0) throw UsageError("--k must be >= 1");
  if (c.knn == 0) throw UsageError("--knn must be >= 1");
  if (c.k_min == 0) throw UsageError("--k-min must be >= 1");
  if (c.k_max && *c.k_max < c.k_min) throw UsageError("--k-max must be >= --k-min");
  if (c.level_quantile && !(*c.level_quantile > 0.0 && *c.level_quantile < 1.0))
    throw UsageError("--level-quantile must lie strictly between 0 and 1");
  if (c.mc_samples == 0) throw UsageError("--mc-samples must be >= 1");
  if (c.restarts == 0) throw UsageError("--restarts must be >= 1");
  if (c.bootstrap != 0 && c.bootstrap < 100) throw UsageError("--bootstrap needs at least 100 replicates (or 0)");
  if (range_required) {
    if (c.bootstrap != 0 && c.k_min != 1) throw UsageError("the bootstrap test scans k = 1..k-max; use --k-min 1");
  } else if (c.corrected && !c.k_max) {
    throw UsageError("--corrected needs the candidate range (--k-min/--k-max)");
  }
}

int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream&) {
  validate(c, false);
  const Dataset data = load_csv(c.input, c.header);
  const std::size_t k = c.method == Method::levelset ? c.knn : c.k;
  const PipelineConfig p = pipeline_config(c, k, c.corrected ? range_size(c) : 1);
  const SplitPair split = curve_split(data, c.seed);
  const PipelineResult res = run_pipeline(split, p);
  const VolumeEstimate vol = estimate_volume(res.set, c.mc_samples, curve_mc_seed(c.seed));
  Clustering clustering =
      connected_components(res.set, c.rule == ConnectivityRule::sample_based ? &split.calib_half : nullptr, c.rule);
  clustering.point_labels = assign_points(res.set, clustering, data);

  std::filesystem::create_directories(c.out_dir);
  json model = model_to_json(res.model);
  model["run"] = run_json(c, p);
  write_json(c.out_dir / "model.json", model);
  write_json(c.out_dir / "prediction_set.json", json(res.set));
  json cl = clustering;
  cl["rule"] = rule_name(c.rule);
  write_json(c.out_dir / "clustering.json", cl);
  write_json(c.out_dir / "volume.json", json(vol));
  write_csv(c.out_dir / "data.csv", data);

  out << "method " << to_string(c.method) << ", k " << k << ", alpha " << p.alpha << ": threshold "
      << res.set.threshold << ", " << res.set.nonempty_count() << " nonempty components, " << clustering.r
      << " clusters (" << rule_name(c.rule) << "), volume " << vol.value << " +- " << vol.std_error << "\n";
  return kOk;
}

int cmd_select(const RunConfig& c, std::ostream& out, std::ostream&) {
  validate(c, true);
  const Dataset data = load_csv(c.input, c.header);
  const std::size_t k_max = k_max_of(c);
  std::vector<std::size_t> ks;
  for (std::size_t k = c.k_min; k <= k_max; ++k) ks.push_back(k);
  const PipelineConfig p = pipeline_config(c, c.k_min, ks.size());

  VolumeCurve curve;
  std::optional<TestDecision> test;
  if (c.bootstrap > 0) {
    BootstrapResult b = bootstrap_test_k(data, k_max, c.alpha, c.bootstrap, p, c.mc_samples, c.seed);
    curve = std::move(b.curve);
    test = std::move(b.decision);
  } else {
    curve = volume_curve(data, ks, p, c.mc_samples, c.seed);
  }
  const std::size_t k_min_volume = select_k_min_volume(curve);

  std::filesystem::create_directories(c.out_dir);
  json cj = curve;
  cj["run"] = run_json(c, p);
  cj["run"].erase("k");
  write_json(c.out_dir / "curve.json", cj);
  json dj = test ? json(*test) : json::object();
  dj["selection"] = test ? "bootstrap" : "min_volume";
  dj["k_min_volume"] = k_min_volume;
  dj["k_hat"] = test ? test->k_hat : k_min_volume;
  write_json(c.out_dir / "decision.json", dj);

  out << std::setw(6) << "k" << std::setw(16) << "S_k" << std::setw(14) << "stderr" << std::setw(10) << "rejected"
      << "\n";
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    const std::size_t k = curve.ks[i];
    out << std::setw(6) << k << std::setw(16) << std::setprecision(6) << curve.volumes[i] << std::setw(14)
        << std::setprecision(4) << curve.std_errors[i] << std::setw(10)
        << (test ? (test->rejected[i] ? "yes" : "no") : "-") << (k == k_min_volume ? "  <- min" : "") << "\n";
  }
  out << "k_hat = " << dj["k_hat"].get<std::size_t>() << " ("
      << (test ? "bootstrap test" : "minimum volume") << ")\n";
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  PlotConfig pc;
  std::string method = "kspheres";
  std::string rule = "geometric";

  if (const char* env = std::getenv("CONFCLUST_SEED")) {
    try {
      std::size_t used = 0;
      rc.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "error: CONFCLUST_SEED must be a non-negative integer\n";
      return kUsageError;
    }
  }

  CLI::App app{"Conformal clustering: prediction sets, clusters and model selection"};
  app.require_subcommand(1);
  auto* fit = app.add_subcommand("fit", "fit one model and write its artifacts");
  auto* select = app.add_subcommand("select", "volume curve over a range of k");
  auto* plot = app.add_subcommand("plot", "render fit artifacts as SVG (2-D data only)");

  const std::vector<std::string> methods{"kspheres", "kspheres-weighted", "gmm",
                                         "maxmix-klloyd", "maxmix-em", "levelset"};
  for (CLI::App* sub : {fit, select}) {
    sub->add_option("--input", rc.input, "CSV file, one point per row")->required();
    sub->add_flag("--header", rc.header, "first CSV line is a header");
    sub->add_option("--method", method, "base clustering and residual")->check(CLI::IsMember(methods));
    sub->add_option("--alpha", rc.alpha, "miscoverage level in (0,1)");
    sub->add_option("--k-min", rc.k_min, "smallest candidate k");
    sub->add_option("--k-max", rc.k_max, "largest candidate k (default max(k-min, 10))");
    sub->add_option("--knn", rc.knn, "k_nn for the levelset method");
    sub->add_option("--level-quantile", rc.level_quantile, "density quantile defining the levelset (default 1 - alpha)");
    sub->add_option("--mc-samples", rc.mc_samples, "Monte Carlo samples for volumes");
    sub->add_option("--seed", rc.seed, "random seed (default $CONFCLUST_SEED or 0)");
    sub->add_option("--out-dir", rc.out_dir, "artifact directory");
    sub->add_option("--restarts", rc.restarts, "random restarts for each fit");
    sub->add_flag("--adaptive", rc.adaptive, "density-adaptive radii for levelset");
    sub->add_flag("--corrected", rc.corrected, "divide alpha by the number of candidate k values");
  }
  fit->add_option("--k", rc.k, "number of clusters");
  fit->add_option("--rule", rule, "connectivity rule")->check(CLI::IsMember({"geometric", "sample"}));
  select->add_option("--bootstrap", rc.bootstrap, "bootstrap replicates for the test (0 = minimum volume only)");
  plot->add_option("--out-dir", pc.dir, "artifact directory written by fit");
  plot->add_option("--svg", pc.svg, "output file (default <out-dir>/plot.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*plot) return cmd_plot(pc, out, err);
    rc.method = method_from_string(method);
    rc.rule = rule == "sample" ? ConnectivityRule::sample_based : ConnectivityRule::geometric;
    return *fit ? cmd_fit(rc, out, err) : cmd_select(rc, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kPipelineFailure;
  }
}

}  // namespace confclust::cli
