#pragma once

#include <cstdint>

#include "ripsel/dataset.hpp"

namespace ripsel {

// Deterministic insurance-style benchmark: 86 integer-coded attributes
// (5 categorical, 81 continuous) driven by three latent factors, with a
// minority positive class near 28%. The label-bearing factor is a two-cluster
// mixture, so one correlated attribute block carries the class signal
// redundantly; two further blocks follow label-independent factors and the
// remaining columns are pure noise.
struct SynthSpec {
  Index train_rows = 5822;
  Index test_rows = 4000;
  std::uint64_t seed = 929270;
};

struct SynthBundle {
  Dataset train;
  Dataset test;
};

SynthBundle make_benchmark(const SynthSpec& spec);

}  // namespace ripsel
