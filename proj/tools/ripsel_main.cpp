#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ripsel/config.hpp"
#include "ripsel/dataset.hpp"
#include "ripsel/missingness.hpp"
#include "ripsel/pipeline.hpp"
#include "ripsel/rng.hpp"
#include "ripsel/synth.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string model = "ripper";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

ripsel::Config load_config(const CommonArgs& args) {
  ripsel::Config cfg = args.config_path.empty()
                           ? ripsel::Config{}
                           : ripsel::Config::parse_file(args.config_path);
  if (args.seed_given)
    cfg.set("experiment", "seed", std::to_string(args.seed));
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ripsel::ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ripsel::ConfigError("cannot write " + path);
  out << content;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ripsel::ConfigError("cannot create directory " + dir);
}

int run_synth(const CommonArgs& args) {
  ripsel::Config cfg = load_config(args);
  ripsel::SynthSpec spec;
  spec.train_rows = cfg.get_int("synth", "train_rows", spec.train_rows);
  spec.test_rows = cfg.get_int("synth", "test_rows", spec.test_rows);
  spec.seed = args.seed_given ? args.seed
                              : cfg.get_u64("synth", "seed", spec.seed);
  const ripsel::SynthBundle bundle = ripsel::make_benchmark(spec);
  ensure_dir(args.out_dir);
  ripsel::save_table(bundle.train, args.out_dir + "/train.csv");
  ripsel::save_table(bundle.test, args.out_dir + "/test.csv");
  ripsel::write_schema_sidecar(bundle.train.schema(),
                               args.out_dir + "/schema.csv");
  std::cout << "wrote " << bundle.train.n_rows() << " train rows and "
            << bundle.test.n_rows() << " test rows to " << args.out_dir
            << " (seed " << spec.seed << ")\n";
  return 0;
}

int run_train(const CommonArgs& args) {
  ripsel::Config cfg = load_config(args);
  const ripsel::PipelineKind kind = ripsel::parse_pipeline_kind(args.model);
  auto [train, test] = ripsel::load_experiment_data(cfg);
  (void)test;
  const std::uint64_t exp_seed = cfg.get_u64("experiment", "seed", 17);
  const ripsel::PipelineConfig pcfg{ripsel::ripper_config_from(cfg, exp_seed),
                                    ripsel::ard_config_from(cfg, exp_seed)};
  const ripsel::TrainedPipeline p = ripsel::train_pipeline(train, kind, pcfg);
  ensure_dir(args.out_dir);
  const std::string model_path =
      args.out_dir + "/" + ripsel::to_string(kind) + ".model";
  write_file(model_path, ripsel::format_pipeline(p));
  std::ostringstream log;
  log << "trained " << ripsel::to_string(kind) << " on " << train.n_rows()
      << " rows\n";
  for (const auto& line : p.log) log << line << '\n';
  log << "rules " << p.ruleset.rules.size() << '\n';
  write_file(args.out_dir + "/train.log", log.str());
  std::cout << "trained " << ripsel::to_string(kind) << ": "
            << p.ruleset.rules.size() << " rules, model written to "
            << model_path << "\n";
  for (const auto& line : p.log) std::cout << "  " << line << "\n";
  return 0;
}

int run_inject(const CommonArgs& args, double level, const std::string& scope) {
  ripsel::Config cfg = load_config(args);
  auto [train, test] = ripsel::load_experiment_data(cfg);
  (void)train;
  ripsel::MissingnessSpec spec;
  spec.proportion = level;
  if (scope == "all") spec.scope = ripsel::MissingScope::kAllAttributes;
  else if (scope == "half") spec.scope = ripsel::MissingScope::kHalfAttributes;
  else throw ripsel::ConfigError("scope must be all or half");
  spec.seed = args.seed_given ? args.seed : cfg.get_u64("experiment", "seed", 17);
  const ripsel::Dataset degraded = ripsel::inject(test, spec);

  ensure_dir(args.out_dir);
  const std::string delim = cfg.get("data", "delimiter", ",");
  const std::string token = cfg.get("data", "missing_token", "?");
  ripsel::save_table(degraded, args.out_dir + "/injected.csv",
                     delim.empty() ? ',' : delim[0], token);
  const auto n_missing = degraded.missing().count();
  std::cout << "injected level " << level << " scope " << scope << ": "
            << n_missing << " missing cells, wrote " << args.out_dir
            << "/injected.csv\n";
  return 0;
}

int run_evaluate(const CommonArgs& args) {
  ripsel::Config cfg = load_config(args);
  const ripsel::PipelineKind kind = ripsel::parse_pipeline_kind(args.model);
  auto [train, test] = ripsel::load_experiment_data(cfg);
  (void)train;
  const std::string model_path =
      args.out_dir + "/" + ripsel::to_string(kind) + ".model";
  const ripsel::TrainedPipeline p = ripsel::parse_pipeline(read_file(model_path));
  const ripsel::Real acc = ripsel::evaluate(p, test);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", acc);
  std::cout << ripsel::to_string(kind) << " accuracy " << buf << " on "
            << test.n_rows() << " rows\n";
  return 0;
}

int run_experiment_cmd(const CommonArgs& args) {
  ripsel::Config cfg = load_config(args);
  const ripsel::ExperimentResult result =
      ripsel::run_experiment(cfg, args.out_dir);
  for (const ripsel::PipelineKind kind :
       {ripsel::PipelineKind::kRipperOnly, ripsel::PipelineKind::kPcaRip,
        ripsel::PipelineKind::kArdRip}) {
    char clean[32], overall[32];
    std::snprintf(clean, sizeof clean, "%.6f",
                  ripsel::clean_accuracy(result, kind));
    std::snprintf(overall, sizeof overall, "%.6f",
                  ripsel::overall_accuracy(result, kind));
    std::cout << ripsel::to_string(kind) << ": clean " << clean << ", overall "
              << overall << "\n";
  }
  std::cout << "results written to " << args.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rule learning with feature-selection front ends"};
  app.require_subcommand(1);

  CommonArgs args;
  double level = 0.10;
  std::string scope = "all";

  auto add_common = [&](CLI::App* sub, bool with_model) {
    sub->add_option("--config", args.config_path, "configuration file");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", args.seed, "override the experiment seed")
        ->each([&](const std::string&) { args.seed_given = true; });
    if (with_model)
      sub->add_option("--model", args.model,
                      "pipeline kind: ripper, pca-rip, or ard-rip");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate the benchmark tables");
  add_common(synth, false);

  CLI::App* train = app.add_subcommand("train", "train one pipeline");
  add_common(train, true);

  CLI::App* inject =
      app.add_subcommand("inject", "write a degraded copy of the test table");
  add_common(inject, false);
  inject->add_option("--level", level, "proportion of cells to blank")
      ->check(CLI::Range(0.0, 1.0));
  inject->add_option("--scope", scope, "all or half");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score a saved model on the test table");
  add_common(evaluate, true);

  CLI::App* experiment =
      app.add_subcommand("experiment", "run the full missingness comparison");
  add_common(experiment, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return run_synth(args);
    if (train->parsed()) return run_train(args);
    if (inject->parsed()) return run_inject(args, level, scope);
    if (evaluate->parsed()) return run_evaluate(args);
    if (experiment->parsed()) return run_experiment_cmd(args);
  } catch (const ripsel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
