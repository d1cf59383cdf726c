#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ripsel/dataset.hpp"

namespace ripsel {

enum class MissingScope { kAllAttributes, kHalfAttributes };

struct MissingnessSpec {
  double proportion = 0.0;  // fraction of eligible cells, in [0,1]
  MissingScope scope = MissingScope::kAllAttributes;
  std::uint64_t seed = 0;
};

// Masks exactly floor(proportion * |eligible cells|) distinct eligible cells.
// Eligible cells are every feature cell (kAllAttributes) or the cells of
// floor(m/2) attributes picked uniformly by the seed (kHalfAttributes).
// Labels are never eligible. Cells that were already missing count toward
// eligibility and stay missing when re-selected. Selection depends only on
// the table shape and the seed, never on cell values.
Dataset inject(const Dataset& ds, const MissingnessSpec& spec);

// One degraded variant per (level, scope) pair, ordered level-ascending with
// kAllAttributes before kHalfAttributes. Variant i draws its own generator
// from derive_seed(seed, i).
std::vector<std::pair<MissingnessSpec, Dataset>> make_suite(
    const Dataset& ds, const std::vector<double>& levels, std::uint64_t seed);

}  // namespace ripsel
