#include "mrfuzzy/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrfuzzy/bench.hpp"
#include "mrfuzzy/errors.hpp"
#include "mrfuzzy/inference.hpp"

namespace mrfuzzy {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "mrfuzzy 1.0";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path.string() + "'");
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw DataError("failed writing '" + path.string() + "'");
}

fs::path prepare_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

// Records each input's raw range so a saved model can normalize new data.
RuleBase with_raw_ranges(const RuleBase& rb, const std::vector<ColumnTransform>& transforms) {
  std::vector<Dimension> dims(rb.dimensions().begin(), rb.dimensions().end());
  for (std::size_t j = 0; j < dims.size(); ++j) dims[j].raw_range = Interval{transforms[j].min, transforms[j].max};
  return RuleBase(rb.kind(), std::move(dims), {rb.rules().begin(), rb.rules().end()});
}

std::vector<ColumnTransform> transforms_of(const RuleBase& rb) {
  std::vector<ColumnTransform> out;
  for (const Dimension& d : rb.dimensions()) {
    out.push_back(d.raw_range ? ColumnTransform{d.raw_range->lo, d.raw_range->hi} : ColumnTransform{});
  }
  return out;
}

double relative_error(double target, double prediction) {
  if (target == 0.0 || !std::isfinite(prediction)) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(prediction - target) / std::abs(target);
}

void write_predictions(const fs::path& path, const Dataset& raw, const std::vector<double>& predictions) {
  auto f = open_out(path);
  f << "sample,target,prediction,relative_error\n";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    f << i << ',' << num(raw.target(i)) << ',' << num(predictions[i]) << ','
      << num(relative_error(raw.target(i), predictions[i])) << '\n';
  }
}

std::optional<double> try_accuracy(const Dataset& raw, const std::vector<double>& predictions) {
  try {
    return accuracy_percent(raw.targets(), predictions);
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string method = "production";
  std::string dataset;
  std::size_t iterations = 32760;
  double eta = 0.1;
  double d0 = 0.0;
  std::uint64_t seed = 0;
  std::size_t sets = 0;
  std::size_t record_every = 0;
  bool shuffle = false;
  bool raw_targets = false;
  bool fallback_all_rules = false;
  std::string out = "run";
  std::string note = "unspecified";
};

json manifest_json(const FitArgs& a, const RuleBase& initial, const TrainConfig& cfg) {
  json axes = json::array();
  for (const Dimension& d : initial.dimensions()) {
    axes.push_back({{"name", d.name}, {"sets", d.labels.size()}, {"min", -1.0}, {"max", 1.0}, {"labels", d.labels}});
  }
  return {
      {"tool", kToolVersion},
      {"method", a.method},
      {"dataset", a.dataset},
      {"partition", {{"kind", to_string(initial.kind())}, {"rules", initial.size()}, {"axes", axes}}},
      {"train",
       {{"eta", cfg.eta},
        {"iterations", cfg.iterations},
        {"d0", cfg.d0},
        {"seed", cfg.seed},
        {"record_every", cfg.record_every},
        {"shuffle", cfg.shuffle},
        {"target_scaling", cfg.target_scaling == TargetScaling::MinMax ? "minmax" : "none"},
        {"on_empty", a.fallback_all_rules ? "all-rules" : "fail"}}},
      {"output_dir", a.out},
      {"hardware_note", a.note},
  };
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const Method method = parse_method(a.method);
  TrainConfig cfg;
  cfg.eta = a.eta;
  cfg.iterations = a.iterations;
  cfg.d0 = a.d0;
  cfg.seed = a.seed;
  cfg.record_every = a.record_every;
  cfg.shuffle = a.shuffle;
  cfg.target_scaling = a.raw_targets ? TargetScaling::None : TargetScaling::MinMax;
  cfg.on_empty = a.fallback_all_rules ? EmptyActivePolicy::AllRules : EmptyActivePolicy::Fail;
  cfg.validate();
  if (method == Method::TypeDistance) {
    throw UsageError("type-distance inference has no learning scheme; use it with predict");
  }

  const Dataset raw = load_csv(a.dataset);
  const NormalizedDataset norm = normalize(raw);
  const RuleBase initial = initial_grid(norm.data, method, a.sets);
  const TrainReport report = train_method(method, initial, norm.data, cfg);
  const RuleBase model = with_raw_ranges(report.model, norm.transforms);

  const fs::path dir = prepare_dir(a.out);
  write_text(dir / "model.rules", format_rulebase(model));
  {
    auto loss = open_out(dir / "loss.csv");
    auto timed = open_out(dir / "training_report.csv");
    loss << "iteration,loss\n";
    timed << "iteration,loss,elapsed_seconds\n";
    for (const LossPoint& p : report.loss_curve) {
      loss << p.iteration << ',' << num(p.loss) << '\n';
      timed << p.iteration << ',' << num(p.loss) << ',' << num(p.elapsed_seconds) << '\n';
    }
  }
  write_predictions(dir / "predictions.csv", raw, report.predictions);

  const double final_loss = report.loss_curve.back().loss;
  json summary = {
      {"method", a.method},
      {"dataset", a.dataset},
      {"rules", model.size()},
      {"inputs", model.input_dim()},
      {"iterations", cfg.iterations},
      {"eta", cfg.eta},
      {"d0", cfg.d0},
      {"seed", cfg.seed},
      {"accuracy_percent", report.accuracy},
      {"train_seconds", report.train_seconds},
      {"final_loss", final_loss},
      {"unpredictable_samples", report.unpredictable_samples},
      {"skipped_updates", report.skipped_updates},
      {"width_clamps", report.width_clamps},
  };
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_text(dir / "manifest.json", manifest_json(a, initial, cfg).dump(2) + "\n");

  std::ostringstream md;
  md << "# Training summary\n\n";
  md << "| Method | Rules | Iterations | Learning time (s) | Accuracy (%) |\n|---|---|---|---|---|\n";
  md << "| " << a.method << " | " << model.size() << " | " << cfg.iterations << " | " << fixed(report.train_seconds, 4)
     << " | " << fixed(report.accuracy, 2) << " |\n\n";
  md << "- dataset: " << a.dataset << " (" << raw.size() << " samples, " << raw.input_dim() << " inputs)\n";
  md << "- eta " << num(cfg.eta) << ", d0 " << num(cfg.d0) << ", seed " << cfg.seed
     << (cfg.shuffle ? ", shuffled" : ", fixed order") << "\n";
  md << "- final mean loss: " << num(final_loss) << "\n";
  md << "- unpredictable samples: " << report.unpredictable_samples << ", skipped updates: " << report.skipped_updates
     << ", width clamps: " << report.width_clamps << "\n";
  write_text(dir / "summary.md", md.str());

  out << a.method << ": accuracy " << fixed(report.accuracy, 2) << "%, learning time "
      << fixed(report.train_seconds, 4) << " s, " << model.size() << " rules -> " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::string model;
  std::string dataset;
  std::string method;  // empty: production for triangular models, sugeno for Gaussian
  double d0 = 0.0;
  bool fallback_all_rules = false;
  std::string out = ".";
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  std::ifstream in(a.model);
  if (!in) throw DataError("cannot open model '" + a.model + "'");
  const RuleBase rb = read_rulebase(in);
  const Method method =
      a.method.empty() ? (rb.kind() == SetKind::Gaussian ? Method::Sugeno : Method::Production) : parse_method(a.method);
  if (!(a.d0 >= 0.0 && a.d0 <= 1.0)) throw UsageError("d0 must lie in [0, 1]");

  const Dataset raw = load_csv(a.dataset);
  if (raw.input_dim() != rb.input_dim()) {
    throw DataError("model has " + std::to_string(rb.input_dim()) + " inputs, dataset has " +
                    std::to_string(raw.input_dim()));
  }
  const auto transforms = transforms_of(rb);
  const Dataset data = apply_transforms(raw, transforms);

  std::vector<double> predictions(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    switch (method) {
      case Method::Production: {
        const auto inputs = singletons(x);
        try {
          predictions[i] = infer_production(rb, inputs, a.d0).output;
        } catch (const EmptyActiveSetError&) {
          if (!a.fallback_all_rules || a.d0 == 0.0) {
            throw NumericError("sample " + std::to_string(i) + ": no rule exceeds d0" +
                               (a.fallback_all_rules ? "" : " (use --fallback-all-rules)"));
          }
          predictions[i] = infer_production(rb, inputs, 0.0).output;
        }
        break;
      }
      case Method::Sugeno:
        predictions[i] = infer_sugeno(rb, x);
        break;
      case Method::TypeDistance:
        predictions[i] = infer_type_distance(rb, singletons(x));
        break;
    }
  }

  const fs::path dir = prepare_dir(a.out);
  write_predictions(dir / "predictions.csv", raw, predictions);
  out << to_string(method) << ": " << raw.size() << " predictions -> " << (dir / "predictions.csv").string();
  if (const auto acc = try_accuracy(raw, predictions)) out << ", accuracy " << fixed(*acc, 2) << "%";
  out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string dataset;
  std::string baseline = "sugeno";
  std::string candidate = "production";
  std::size_t iterations = 32760;
  std::size_t reps = 5;
  double eta = 0.1;
  double d0 = 0.0;
  std::size_t sets = 0;
  std::string out = "bench";
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  BenchConfig cfg;
  cfg.baseline = parse_method(a.baseline);
  cfg.candidate = parse_method(a.candidate);
  cfg.sets = a.sets;
  cfg.reps = a.reps;
  cfg.train.iterations = a.iterations;
  cfg.train.eta = a.eta;
  cfg.train.d0 = a.d0;
  cfg.train.validate();

  const NormalizedDataset norm = normalize(load_csv(a.dataset));
  const BenchResult r = run_bench(norm.data, cfg);

  const fs::path dir = prepare_dir(a.out);
  {
    auto csv = open_out(dir / "bench.csv");
    csv << "repetition,method,seconds,seconds_per_100_iterations\n";
    for (const ArmTiming* arm : {&r.baseline, &r.candidate}) {
      for (std::size_t k = 0; k < arm->seconds.size(); ++k) {
        csv << k << ',' << to_string(arm->method) << ',' << num(arm->seconds[k]) << ','
            << num(arm->seconds[k] * 100.0 / static_cast<double>(r.iterations)) << '\n';
      }
    }
  }
  const std::string md = format_bench_markdown(r, fs::path(a.dataset).filename().string());
  write_text(dir / "bench.md", md);
  out << md;
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::vector<std::string> runs;
  std::string out;
};

json read_summary(const std::string& run) {
  const fs::path path = fs::path(run) / "summary.json";
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<json> rows;
  for (const auto& run : a.runs) rows.push_back(read_summary(run));

  std::ostringstream md;
  md << "# Comparison of learning time and accuracy\n\n";
  md << "| Run | Method | Dataset | Rules | Iterations | Learning time (s) | Accuracy (%) |\n";
  md << "|---|---|---|---|---|---|---|\n";
  try {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const json& s = rows[k];
      md << "| " << a.runs[k] << " | " << s.at("method").get<std::string>() << " | "
         << fs::path(s.at("dataset").get<std::string>()).filename().string() << " | " << s.at("rules").get<std::size_t>()
         << " | " << s.at("iterations").get<std::size_t>() << " | " << fixed(s.at("train_seconds").get<double>(), 4)
         << " | " << fixed(s.at("accuracy_percent").get<double>(), 2) << " |\n";
    }
    if (rows.size() == 2) {
      const double acc = rows[0].at("accuracy_percent").get<double>() - rows[1].at("accuracy_percent").get<double>();
      const double t0 = rows[0].at("train_seconds").get<double>();
      const double t1 = rows[1].at("train_seconds").get<double>();
      md << "\nAccuracy difference (first - second): " << fixed(acc, 3) << " points\n";
      if (t0 > 0.0) md << "Learning time ratio (second / first): " << fixed(t1 / t0, 3) << "x\n";
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed run summary: ") + e.what());
  }

  if (!a.out.empty()) write_text(a.out, md.str());
  out << md.str();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy inference with production-term weighting: train, predict, benchmark and report."};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::string methods = "production|sugeno|type-distance";

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Train a grid rule base on a CSV dataset");
  fit_cmd->add_option("--method", fit.method, methods)->capture_default_str();
  fit_cmd->add_option("--dataset", fit.dataset, "CSV file, target in the last column")->required();
  fit_cmd->add_option("--iterations", fit.iterations, "Single-sample updates")->capture_default_str();
  fit_cmd->add_option("--eta", fit.eta, "Learning rate")->capture_default_str();
  fit_cmd->add_option("--d0", fit.d0, "Production-term threshold in [0, 1]")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Shuffle seed")->capture_default_str();
  fit_cmd->add_option("--sets", fit.sets, "Fuzzy sets per input (0: 6 up to two inputs, else 3)")->capture_default_str();
  fit_cmd->add_option("--record-every", fit.record_every, "Loss sampling interval (0: once per pass)");
  fit_cmd->add_flag("--shuffle", fit.shuffle, "Reshuffle the sample order every pass");
  fit_cmd->add_flag("--raw-targets", fit.raw_targets, "Train on unscaled targets");
  fit_cmd->add_flag("--fallback-all-rules", fit.fallback_all_rules,
                    "When no rule exceeds d0, use every rule with a positive term");
  fit_cmd->add_option("--out", fit.out, "Output directory")->capture_default_str();
  fit_cmd->add_option("--note", fit.note, "Hardware note stored in the manifest");

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Evaluate a saved rule base on a CSV dataset");
  pred_cmd->add_option("--model", pred.model, "Rule-base file")->required();
  pred_cmd->add_option("--dataset", pred.dataset, "CSV file, target in the last column")->required();
  pred_cmd->add_option("--method", pred.method, methods + " (default from the model's set kind)");
  pred_cmd->add_option("--d0", pred.d0, "Production-term threshold in [0, 1]")->capture_default_str();
  pred_cmd->add_flag("--fallback-all-rules", pred.fallback_all_rules,
                     "When no rule exceeds d0, use every rule with a positive term");
  pred_cmd->add_option("--out", pred.out, "Output directory")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time two training schemes under the same budget");
  bench_cmd->add_option("--dataset", bench.dataset, "CSV file, target in the last column")->required();
  bench_cmd->add_option("--baseline", bench.baseline, methods)->capture_default_str();
  bench_cmd->add_option("--candidate", bench.candidate, methods)->capture_default_str();
  bench_cmd->add_option("--iterations", bench.iterations, "Single-sample updates per run")->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per scheme, at least 5")->capture_default_str();
  bench_cmd->add_option("--eta", bench.eta, "Learning rate")->capture_default_str();
  bench_cmd->add_option("--d0", bench.d0, "Production-term threshold in [0, 1]")->capture_default_str();
  bench_cmd->add_option("--sets", bench.sets, "Fuzzy sets per input (0: default)")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Tabulate accuracy and time of finished fit runs");
  rep_cmd->add_option("runs", rep.runs, "Run directories written by fit")->required();
  rep_cmd->add_option("--out", rep.out, "Also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*pred_cmd) return cmd_predict(pred, out);
    if (*bench_cmd) return cmd_bench(bench, out);
    if (*rep_cmd) return cmd_report(rep, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace mrfuzzy
