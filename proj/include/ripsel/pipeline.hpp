#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ripsel/ard.hpp"
#include "ripsel/config.hpp"
#include "ripsel/dataset.hpp"
#include "ripsel/missingness.hpp"
#include "ripsel/pca.hpp"
#include "ripsel/ripper.hpp"

namespace ripsel {

enum class PipelineKind { kRipperOnly, kPcaRip, kArdRip };

// "ripper" | "pca-rip" | "ard-rip", as used by the CLI and the CSV outputs.
std::string to_string(PipelineKind kind);
PipelineKind parse_pipeline_kind(const std::string& name);

struct PipelineConfig {
  RipperConfig ripper;
  ArdConfig ard;
};

struct TrainedPipeline {
  PipelineKind kind = PipelineKind::kRipperOnly;
  std::vector<Attribute> schema;    // training schema, before any selection
  std::optional<PcaModel> pca;      // kPcaRip only
  std::vector<Index> retained;      // kArdRip only, ascending original indices
  std::vector<ArdModel> ard_blocks; // kArdRip only, one per attribute block
  RuleSet ruleset;                  // over PC columns (pca), retained columns
                                    // (ard), or raw columns (ripper)
  std::vector<std::string> log;
};

// Drops training rows that contain missing cells (with a logged count), runs
// the kind's selector, and builds the rule set.
TrainedPipeline train_pipeline(const Dataset& train, PipelineKind kind,
                               const PipelineConfig& cfg);

// Fraction of test rows classified correctly. pca-rip projects every row into
// component space (mean-imputing missing cells); ard-rip restricts rows to
// the retained attributes, leaving missing cells missing; ripper classifies
// raw rows. The test schema must equal the training schema.
Real evaluate(const TrainedPipeline& p, const Dataset& test);

// Restriction of ds to the given attribute positions, order preserved.
Dataset keep_attributes(const Dataset& ds, const std::vector<Index>& keep);

struct ExperimentCell {
  PipelineKind kind = PipelineKind::kRipperOnly;
  Real level = 0.0;
  MissingScope scope = MissingScope::kAllAttributes;
  bool clean = false;  // the added level-0 sanity cell
  Real accuracy = 0.0;
};

struct ExperimentResult {
  std::vector<Real> levels;                            // ascending
  std::vector<ExperimentCell> cells;
  std::vector<std::pair<PipelineKind, Real>> overall;  // mean over the degraded cells
};

Real cell_accuracy(const ExperimentResult& r, PipelineKind kind, Real level,
                   MissingScope scope);
Real clean_accuracy(const ExperimentResult& r, PipelineKind kind);
Real overall_accuracy(const ExperimentResult& r, PipelineKind kind);

// Full harness: load or synthesize data per the config, train all three
// pipelines on the complete training rows, build the missingness suite over
// the test set, evaluate every cell, and write results.csv, overall.csv,
// figure3.csv, figure4.csv, figure5.csv, model files, and run.log into
// out_dir. Deterministic given the config.
ExperimentResult run_experiment(const Config& cfg, const std::string& out_dir);

// Config plumbing shared with the CLI. Seeds not present in the config fall
// back to streams derived from fallback_seed.
RipperConfig ripper_config_from(const Config& cfg, std::uint64_t fallback_seed);
ArdConfig ard_config_from(const Config& cfg, std::uint64_t fallback_seed);
std::pair<Dataset, Dataset> load_experiment_data(const Config& cfg);

// Model file round-trip: kind, schema, selector state, rule set.
std::string format_pipeline(const TrainedPipeline& p);
TrainedPipeline parse_pipeline(const std::string& text);

}  // namespace ripsel
