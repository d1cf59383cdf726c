#include "ripsel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ripsel/rng.hpp"
#include "ripsel/synth.hpp"

namespace ripsel {

namespace {

const PipelineKind kAllKinds[] = {PipelineKind::kRipperOnly,
                                  PipelineKind::kPcaRip, PipelineKind::kArdRip};

void check_schema_match(const std::vector<Attribute>& expect,
                        const std::vector<Attribute>& got) {
  if (expect.size() != got.size())
    throw SchemaError("schema mismatch: expected " +
                      std::to_string(expect.size()) + " attributes, got " +
                      std::to_string(got.size()));
  for (std::size_t j = 0; j < expect.size(); ++j) {
    if (expect[j].name != got[j].name || expect[j].kind != got[j].kind)
      throw SchemaError("schema mismatch at attribute " + std::to_string(j) +
                        ": expected " + expect[j].name + ", got " + got[j].name);
  }
}

std::vector<Attribute> rule_schema(const TrainedPipeline& p) {
  switch (p.kind) {
    case PipelineKind::kRipperOnly:
      return p.schema;
    case PipelineKind::kPcaRip: {
      if (!p.pca) throw ConfigError("pca-rip pipeline carries no PCA model");
      std::vector<Attribute> s;
      for (Index i = 0; i < p.pca->retained; ++i)
        s.push_back({"PC" + std::to_string(i + 1), AttributeKind::kContinuous, {}});
      return s;
    }
    case PipelineKind::kArdRip: {
      std::vector<Attribute> s;
      for (Index i : p.retained)
        s.push_back(p.schema.at(static_cast<std::size_t>(i)));
      return s;
    }
  }
  throw ConfigError("unknown pipeline kind");
}

std::string fmt_accuracy(Real a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", a);
  return buf;
}

std::string fmt_level(Real level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", level);
  return buf;
}

std::string scope_name(MissingScope scope) {
  return scope == MissingScope::kAllAttributes ? "all" : "half";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace

std::string to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::kRipperOnly: return "ripper";
    case PipelineKind::kPcaRip: return "pca-rip";
    case PipelineKind::kArdRip: return "ard-rip";
  }
  return "unknown";
}

PipelineKind parse_pipeline_kind(const std::string& name) {
  if (name == "ripper") return PipelineKind::kRipperOnly;
  if (name == "pca-rip") return PipelineKind::kPcaRip;
  if (name == "ard-rip") return PipelineKind::kArdRip;
  throw ConfigError("unknown model kind: " + name +
                    " (expected ripper, pca-rip, or ard-rip)");
}

RipperConfig ripper_config_from(const Config& cfg, std::uint64_t fallback_seed) {
  RipperConfig rc;
  rc.grow_fraction = cfg.get_real("ripper", "grow_fraction", rc.grow_fraction);
  rc.dl_budget_bits = cfg.get_real("ripper", "dl_budget_bits", rc.dl_budget_bits);
  rc.prune_error_cap =
      cfg.get_real("ripper", "prune_error_cap", rc.prune_error_cap);
  rc.split_seed =
      cfg.get_u64("ripper", "split_seed", derive_seed(fallback_seed, 1));
  return rc;
}

ArdConfig ard_config_from(const Config& cfg, std::uint64_t fallback_seed) {
  ArdConfig ac;
  ac.epochs = static_cast<int>(cfg.get_int("ard", "epochs", ac.epochs));
  ac.n_hidden = cfg.get_int("ard", "n_hidden", ac.n_hidden);
  ac.learning_rate = cfg.get_real("ard", "learning_rate", ac.learning_rate);
  ac.evidence_cycles =
      static_cast<int>(cfg.get_int("ard", "evidence_cycles", ac.evidence_cycles));
  ac.relevance_threshold =
      cfg.get_real("ard", "relevance_threshold", ac.relevance_threshold);
  ac.split_groups =
      static_cast<int>(cfg.get_int("ard", "split_groups", ac.split_groups));
  ac.init_alpha = cfg.get_real("ard", "init_alpha", ac.init_alpha);
  ac.init_weight_scale =
      cfg.get_real("ard", "init_weight_scale", ac.init_weight_scale);
  ac.seed = cfg.get_u64("ard", "seed", derive_seed(fallback_seed, 2));
  return ac;
}

std::pair<Dataset, Dataset> load_experiment_data(const Config& cfg) {
  const std::string source =
      cfg.get("data", "source", cfg.has("data", "train") ? "files" : "synth");
  Dataset train, test;
  if (source == "synth") {
    SynthSpec spec;
    spec.train_rows = cfg.get_int("synth", "train_rows", spec.train_rows);
    spec.test_rows = cfg.get_int("synth", "test_rows", spec.test_rows);
    spec.seed = cfg.get_u64("synth", "seed", spec.seed);
    SynthBundle bundle = make_benchmark(spec);
    train = std::move(bundle.train);
    test = std::move(bundle.test);
  } else if (source == "files") {
    LoadOptions opts;
    const std::string delim = cfg.get("data", "delimiter", ",");
    if (delim.size() != 1)
      throw ConfigError("data delimiter must be a single character");
    opts.delimiter = delim[0];
    opts.missing_token = cfg.get("data", "missing_token", "?");
    if (cfg.has("data", "schema"))
      opts.schema_hint = read_schema_sidecar(cfg.require("data", "schema"));
    train = load_table(cfg.require("data", "train"), opts);
    test = load_table(cfg.require("data", "test"), opts);
  } else {
    throw ConfigError("unknown data source: " + source);
  }
  const long truncate = cfg.get_int("data", "truncate_train_rows", 0);
  if (truncate < 0) throw ConfigError("truncate_train_rows must be >= 0");
  if (truncate > 0 && train.n_rows() > truncate) train = train.head(truncate);
  return {std::move(train), std::move(test)};
}

Dataset keep_attributes(const Dataset& ds, const std::vector<Index>& keep) {
  const std::set<Index> kept(keep.begin(), keep.end());
  for (Index i : keep)
    if (i < 0 || i >= ds.n_attrs())
      throw ConfigError("keep_attributes: attribute index out of range");
  std::vector<std::string> drop;
  for (Index j = 0; j < ds.n_attrs(); ++j)
    if (!kept.count(j))
      drop.push_back(ds.schema()[static_cast<std::size_t>(j)].name);
  return drop_attributes(ds, drop);
}

TrainedPipeline train_pipeline(const Dataset& train, PipelineKind kind,
                               const PipelineConfig& cfg) {
  TrainedPipeline p;
  p.kind = kind;
  p.schema = train.schema();

  const std::vector<Index> observed = train.fully_observed_rows();
  const Index dropped = train.n_rows() - static_cast<Index>(observed.size());
  Dataset base =
      dropped > 0 ? train.subset_rows(observed) : train;
  if (dropped > 0)
    p.log.push_back("dropped " + std::to_string(dropped) +
                    " training rows with missing cells");
  if (base.n_rows() == 0)
    throw DegenerateError("train_pipeline: no fully observed training rows");

  switch (kind) {
    case PipelineKind::kRipperOnly:
      p.ruleset = build_ruleset(base, cfg.ripper);
      break;
    case PipelineKind::kPcaRip: {
      PcaModel model = fit_pca(base);
      const Matrix t = transform(model, base);
      const Dataset comp = component_dataset(t, base.labels());
      p.ruleset = build_ruleset(comp, cfg.ripper);
      p.log.push_back("retained " + std::to_string(model.retained) + " of " +
                      std::to_string(base.n_attrs()) + " components");
      p.pca = std::move(model);
      break;
    }
    case PipelineKind::kArdRip: {
      ArdSelection sel = select_features(base, cfg.ard);
      p.log.insert(p.log.end(), sel.log.begin(), sel.log.end());
      p.log.push_back("retained " + std::to_string(sel.retained.size()) +
                      " of " + std::to_string(base.n_attrs()) + " attributes");
      const Dataset restricted = keep_attributes(base, sel.retained);
      p.ruleset = build_ruleset(restricted, cfg.ripper);
      p.retained = std::move(sel.retained);
      p.ard_blocks = std::move(sel.blocks);
      break;
    }
  }
  return p;
}

Real evaluate(const TrainedPipeline& p, const Dataset& test) {
  if (test.n_rows() == 0) throw DegenerateError("evaluate: empty test set");
  check_schema_match(p.schema, test.schema());

  Index correct = 0;
  switch (p.kind) {
    case PipelineKind::kRipperOnly: {
      for (Index r = 0; r < test.n_rows(); ++r)
        if (classify(p.ruleset, test, r) == test.labels()[r]) ++correct;
      break;
    }
    case PipelineKind::kPcaRip: {
      if (!p.pca) throw ConfigError("pca-rip pipeline carries no PCA model");
      const Matrix t = transform(*p.pca, test);
      const Dataset comp = component_dataset(t, test.labels());
      for (Index r = 0; r < comp.n_rows(); ++r)
        if (classify(p.ruleset, comp, r) == comp.labels()[r]) ++correct;
      break;
    }
    case PipelineKind::kArdRip: {
      if (p.retained.empty())
        throw ConfigError("ard-rip pipeline carries no retained attributes");
      const Dataset restricted = keep_attributes(test, p.retained);
      for (Index r = 0; r < restricted.n_rows(); ++r)
        if (classify(p.ruleset, restricted, r) == restricted.labels()[r])
          ++correct;
      break;
    }
  }
  return static_cast<Real>(correct) / static_cast<Real>(test.n_rows());
}

Real cell_accuracy(const ExperimentResult& r, PipelineKind kind, Real level,
                   MissingScope scope) {
  for (const auto& c : r.cells)
    if (!c.clean && c.kind == kind && c.scope == scope &&
        std::abs(c.level - level) < 1e-12)
      return c.accuracy;
  throw ConfigError("no experiment cell for " + to_string(kind) + " level " +
                    fmt_level(level) + " scope " + scope_name(scope));
}

Real clean_accuracy(const ExperimentResult& r, PipelineKind kind) {
  for (const auto& c : r.cells)
    if (c.clean && c.kind == kind) return c.accuracy;
  throw ConfigError("no clean cell for " + to_string(kind));
}

Real overall_accuracy(const ExperimentResult& r, PipelineKind kind) {
  for (const auto& [k, acc] : r.overall)
    if (k == kind) return acc;
  throw ConfigError("no overall accuracy for " + to_string(kind));
}

ExperimentResult run_experiment(const Config& cfg, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::filesystem::create_directories(out_dir + "/models", ec);

  std::vector<std::string> log;
  auto [train, test] = load_experiment_data(cfg);
  log.push_back("train: " + std::to_string(train.n_rows()) + " rows, " +
                std::to_string(train.n_attrs()) + " attributes");
  log.push_back("test: " + std::to_string(test.n_rows()) + " rows");

  const std::uint64_t exp_seed = cfg.get_u64("experiment", "seed", 17);
  const PipelineConfig pcfg{ripper_config_from(cfg, exp_seed),
                            ard_config_from(cfg, exp_seed)};
  std::vector<Real> levels =
      cfg.get_reals("experiment", "levels", {0.10, 0.25, 0.30, 0.40, 0.50});
  const auto suite = make_suite(test, levels, derive_seed(exp_seed, 0));

  ExperimentResult result;
  result.levels = levels;
  std::sort(result.levels.begin(), result.levels.end());

  for (PipelineKind kind : kAllKinds) {
    TrainedPipeline p;
    try {
      p = train_pipeline(train, kind, pcfg);
    } catch (const Error& e) {
      throw Error("training " + to_string(kind) + ": " + e.what());
    }
    log.push_back("trained " + to_string(kind) + ": " +
                  std::to_string(p.ruleset.rules.size()) + " rules, default " +
                  std::to_string(p.ruleset.default_class));
    for (const auto& line : p.log)
      log.push_back("  [" + to_string(kind) + "] " + line);

    Real acc;
    try {
      acc = evaluate(p, test);
    } catch (const Error& e) {
      throw Error(to_string(kind) + " clean cell: " + e.what());
    }
    result.cells.push_back({kind, 0.0, MissingScope::kAllAttributes, true, acc});
    log.push_back(to_string(kind) + " level 0.00 clean accuracy " +
                  fmt_accuracy(acc));

    Real sum = 0.0;
    for (const auto& [spec, degraded] : suite) {
      Real a;
      try {
        a = evaluate(p, degraded);
      } catch (const Error& e) {
        throw Error(to_string(kind) + " level " + fmt_level(spec.proportion) +
                    " scope " + scope_name(spec.scope) + ": " + e.what());
      }
      result.cells.push_back({kind, spec.proportion, spec.scope, false, a});
      log.push_back(to_string(kind) + " level " + fmt_level(spec.proportion) +
                    " scope " + scope_name(spec.scope) + " accuracy " +
                    fmt_accuracy(a));
      sum += a;
    }
    const Real overall = sum / static_cast<Real>(suite.size());
    result.overall.emplace_back(kind, overall);
    log.push_back(to_string(kind) + " overall " + fmt_accuracy(overall));

    write_file(out_dir + "/models/" + to_string(kind) + ".model",
               format_pipeline(p));
    for (std::size_t b = 0; b < p.ard_blocks.size(); ++b)
      write_file(out_dir + "/models/ard-block" + std::to_string(b) + ".txt",
                 format_ard_model(p.ard_blocks[b]));
  }

  std::ostringstream results_csv;
  results_csv << "kind,level,scope,accuracy\n";
  for (const auto& c : result.cells)
    results_csv << to_string(c.kind) << ',' << fmt_level(c.level) << ','
                << (c.clean ? "clean" : scope_name(c.scope)) << ','
                << fmt_accuracy(c.accuracy) << '\n';
  write_file(out_dir + "/results.csv", results_csv.str());

  std::ostringstream overall_csv;
  overall_csv << "kind,accuracy\n";
  for (const auto& [kind, acc] : result.overall)
    overall_csv << to_string(kind) << ',' << fmt_accuracy(acc) << '\n';
  write_file(out_dir + "/overall.csv", overall_csv.str());

  // Accuracy against level, averaged over the two scopes.
  std::ostringstream fig3;
  fig3 << "level,ripper,pca-rip,ard-rip\n";
  for (Real level : result.levels) {
    fig3 << fmt_level(level);
    for (PipelineKind kind : kAllKinds) {
      const Real mean =
          (cell_accuracy(result, kind, level, MissingScope::kAllAttributes) +
           cell_accuracy(result, kind, level, MissingScope::kHalfAttributes)) /
          2.0;
      fig3 << ',' << fmt_accuracy(mean);
    }
    fig3 << '\n';
  }
  write_file(out_dir + "/figure3.csv", fig3.str());

  // Accuracy against level for each (pipeline, scope) series.
  std::ostringstream fig4;
  fig4 << "level";
  for (PipelineKind kind : kAllKinds)
    fig4 << ',' << to_string(kind) << "-all," << to_string(kind) << "-half";
  fig4 << '\n';
  for (Real level : result.levels) {
    fig4 << fmt_level(level);
    for (PipelineKind kind : kAllKinds)
      fig4 << ','
           << fmt_accuracy(cell_accuracy(result, kind, level,
                                         MissingScope::kAllAttributes))
           << ','
           << fmt_accuracy(cell_accuracy(result, kind, level,
                                         MissingScope::kHalfAttributes));
    fig4 << '\n';
  }
  write_file(out_dir + "/figure4.csv", fig4.str());

  // Per-pipeline level-means, split by scope.
  std::ostringstream fig5;
  fig5 << "kind,overall-all,overall-half\n";
  for (PipelineKind kind : kAllKinds) {
    Real sum_all = 0.0, sum_half = 0.0;
    for (Real level : result.levels) {
      sum_all += cell_accuracy(result, kind, level, MissingScope::kAllAttributes);
      sum_half +=
          cell_accuracy(result, kind, level, MissingScope::kHalfAttributes);
    }
    const Real n = static_cast<Real>(result.levels.size());
    fig5 << to_string(kind) << ',' << fmt_accuracy(sum_all / n) << ','
         << fmt_accuracy(sum_half / n) << '\n';
  }
  write_file(out_dir + "/figure5.csv", fig5.str());

  std::ostringstream run_log;
  for (const auto& line : log) run_log << line << '\n';
  write_file(out_dir + "/run.log", run_log.str());

  return result;
}

std::string format_pipeline(const TrainedPipeline& p) {
  std::ostringstream out;
  out << "pipeline " << to_string(p.kind) << '\n';
  out << "attributes " << p.schema.size() << '\n';
  for (const auto& a : p.schema)
    out << a.name << ','
        << (a.kind == AttributeKind::kCategorical ? "categorical" : "continuous")
        << '\n';
  switch (p.kind) {
    case PipelineKind::kRipperOnly:
      out << "selector none\n";
      break;
    case PipelineKind::kPcaRip:
      if (!p.pca) throw ConfigError("pca-rip pipeline carries no PCA model");
      out << "selector pca\n" << format_pca_model(*p.pca);
      break;
    case PipelineKind::kArdRip:
      out << "selector ard\nretained " << p.retained.size();
      for (Index i : p.retained) out << ' ' << i;
      out << '\n';
      break;
  }
  out << "rules " << p.ruleset.rules.size() << '\n';
  out << format_ruleset(p.ruleset, rule_schema(p));
  return out.str();
}

TrainedPipeline parse_pipeline(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line))
      throw ParseError("parse_pipeline: file truncated");
    return line;
  };

  TrainedPipeline p;
  {
    std::istringstream ls(next_line());
    std::string tok, kind;
    ls >> tok >> kind;
    if (tok != "pipeline") throw ParseError("parse_pipeline: missing header");
    p.kind = parse_pipeline_kind(kind);
  }

  Index m = 0;
  {
    std::istringstream ls(next_line());
    std::string tok;
    ls >> tok >> m;
    if (tok != "attributes" || m < 1)
      throw ParseError("parse_pipeline: bad attribute count");
  }
  for (Index j = 0; j < m; ++j) {
    const std::string& l = next_line();
    const auto comma = l.rfind(',');
    if (comma == std::string::npos)
      throw ParseError("parse_pipeline: bad schema line: " + l);
    Attribute a;
    a.name = l.substr(0, comma);
    const std::string kind = l.substr(comma + 1);
    if (kind == "categorical") a.kind = AttributeKind::kCategorical;
    else if (kind == "continuous") a.kind = AttributeKind::kContinuous;
    else throw ParseError("parse_pipeline: bad attribute kind: " + kind);
    p.schema.push_back(std::move(a));
  }

  {
    std::istringstream ls(next_line());
    std::string tok, which;
    ls >> tok >> which;
    if (tok != "selector") throw ParseError("parse_pipeline: missing selector");
    if (which == "none") {
      if (p.kind != PipelineKind::kRipperOnly)
        throw ParseError("parse_pipeline: selector does not match kind");
    } else if (which == "pca") {
      std::ostringstream pca_text;
      for (Index i = 0; i < 5 + m; ++i) pca_text << next_line() << '\n';
      PcaModel model = parse_pca_model(pca_text.str());
      if (model.means.size() != m)
        throw ParseError("parse_pipeline: PCA dimension does not match schema");
      p.pca = std::move(model);
    } else if (which == "ard") {
      std::istringstream rs(next_line());
      std::string rtok;
      std::size_t count = 0;
      rs >> rtok >> count;
      if (rtok != "retained")
        throw ParseError("parse_pipeline: missing retained list");
      for (std::size_t i = 0; i < count; ++i) {
        Index idx = -1;
        if (!(rs >> idx) || idx < 0 || idx >= m)
          throw ParseError("parse_pipeline: bad retained index");
        p.retained.push_back(idx);
      }
    } else {
      throw ParseError("parse_pipeline: unknown selector: " + which);
    }
  }

  std::size_t n_rules = 0;
  {
    std::istringstream ls(next_line());
    std::string tok;
    ls >> tok >> n_rules;
    if (tok != "rules") throw ParseError("parse_pipeline: missing rules header");
  }
  std::ostringstream rules_text;
  for (std::size_t i = 0; i < n_rules + 1; ++i) rules_text << next_line() << '\n';
  p.ruleset = parse_ruleset(rules_text.str(), rule_schema(p));
  return p;
}

}  // namespace ripsel
