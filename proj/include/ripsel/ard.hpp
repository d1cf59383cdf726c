#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripsel/dataset.hpp"
#include "ripsel/types.hpp"

namespace ripsel {

// Two-layer perceptron with logistic hidden and output units. Bias entries
// live inside the weight arrays (column 0 of w_ji, entry 0 of w_kj), so the
// flattened parameter vector is exactly the trainable state. Flattening order
// is w_ji column-major followed by w_kj.
struct MlpNetwork {
  Index n_inputs = 0;
  Index n_hidden = 0;
  Matrix w_ji;  // n_hidden x (n_inputs + 1); column 0 is the hidden bias
  Vector w_kj;  // n_hidden + 1; entry 0 is the output bias
};

// Weight-decay group structure: one group per input attribute covering that
// input's fan-out weights, plus a shared default group holding the biases and
// the whole hidden->output layer.
struct ArdHyperparams {
  std::vector<int> input_group;  // input index -> group id
  int default_group = 0;
  Vector alphas;  // one per group id, all positive
};

struct ArdConfig {
  int epochs = 1000;
  Index n_hidden = 8;
  Real learning_rate = 0.01;
  int evidence_cycles = 4;
  Real relevance_threshold = 0.01;
  int split_groups = 0;          // 0 = auto: 4 when > 100 inputs, else 1
  Real init_alpha = 0.1;
  Real init_weight_scale = 0.0;  // 0 = auto: 1 / sqrt(n_inputs)
  std::uint64_t seed = 0;
};

struct ArdModel {
  MlpNetwork network;
  ArdHyperparams hyperparams;
  Vector relevance;             // per input: RMS of that input's fan-out weights
  Vector hessian_diag_inverse;  // flattened-parameter order
  Vector gamma;                 // per group: well-determined parameter count
  bool hessian_ridged = false;  // the Hessian inverse needed the 1e-8 ridge
};

Index n_params(const MlpNetwork& net);
Vector flatten(const MlpNetwork& net);
void unflatten(const Vector& w, MlpNetwork& net);

// Group layout used by select_features: group i for input i, group n_inputs
// as the shared default, every alpha starting at init_alpha.
ArdHyperparams per_input_hyperparams(Index n_inputs, Real init_alpha);

int resolved_split_groups(const ArdConfig& cfg, Index n_inputs);
Real resolved_weight_scale(const ArdConfig& cfg, Index n_inputs);

// Contiguous balanced partition of n_inputs attributes into n_blocks blocks;
// earlier blocks absorb the remainder (185 into 4 gives {47, 46, 46, 46}).
std::vector<Index> block_sizes(Index n_inputs, int n_blocks);

// P(class = 1 | x); the complement probability is 1 - result.
Real forward(const MlpNetwork& net, const Vector& x);

// Penalized objective: full-batch cross-entropy plus
// sum_k alpha_k/2 * sum_{i in k} w_i^2, and its gradient in flattened order.
Real objective(const MlpNetwork& net, const Matrix& x, const IntVector& labels,
               const ArdHyperparams& hp);
Vector gradient(const MlpNetwork& net, const Matrix& x, const IntVector& labels,
                const ArdHyperparams& hp);

// Full-batch gradient descent for cfg.epochs epochs. The step is
// learning_rate * gradient / n_rows so one rate works across dataset sizes.
MlpNetwork train(MlpNetwork net, const Matrix& x, const IntVector& labels,
                 const ArdHyperparams& hp, const ArdConfig& cfg);

// alpha = gamma / sum_w2 clamped to [1e-6, 1e6]; an all-zero group clamps to
// the upper bound.
Real reestimate_alpha(Real gamma, Real sum_w2);

// Evidence re-estimation at the current weights. Builds the Gauss-Newton
// Hessian (outer products of per-row output gradients plus the decay
// diagonal), stores its inverse diagonal, gamma, and the ridge flag on the
// model, and returns the re-estimated alphas. The caller decides whether to
// install them.
ArdHyperparams update_alphas(ArdModel& model, const Matrix& x,
                             const IntVector& labels);

struct ArdSelection {
  std::vector<Index> retained;  // ascending original attribute indices
  std::vector<ArdModel> blocks;
  std::vector<std::string> log;  // one line per evidence cycle per block
  bool guard_triggered = false;  // some block kept only its top attribute
};

// ARD feature selection: standardize all attributes (categorical codes taken
// as numbers), partition them into contiguous balanced blocks, run
// evidence_cycles alternations of train/update_alphas per block with
// per-input groups, and keep inputs whose relevance reaches the threshold.
// Internally each block's inputs are processed in a content-canonical order
// with content-fingerprint-seeded initial weights, which makes the result
// exactly equivariant under attribute permutations.
ArdSelection select_features(const Dataset& ds, const ArdConfig& cfg);

// Plain-text serialization at 17 significant digits: weights, groups, alphas,
// relevance, gamma. hessian_diag_inverse is transient and not serialized.
std::string format_ard_model(const ArdModel& model);
ArdModel parse_ard_model(const std::string& text);

}  // namespace ripsel
