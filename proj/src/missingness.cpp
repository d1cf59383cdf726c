#include "ripsel/missingness.hpp"

#include <algorithm>
#include <cmath>

#include "ripsel/errors.hpp"
#include "ripsel/rng.hpp"

namespace ripsel {

Dataset inject(const Dataset& ds, const MissingnessSpec& spec) {
  if (spec.proportion < 0.0 || spec.proportion > 1.0)
    throw ConfigError("inject: proportion " + std::to_string(spec.proportion) +
                      " outside [0,1]");
  if (ds.n_rows() < 1) throw DegenerateError("inject: empty dataset");

  SplitMix64 rng(spec.seed);
  const Index n = ds.n_rows();
  const Index m = ds.n_attrs();

  std::vector<Index> attrs;
  if (spec.scope == MissingScope::kHalfAttributes) {
    const std::size_t half = static_cast<std::size_t>(m / 2);
    auto picked = sample_without_replacement(static_cast<std::size_t>(m), half, rng);
    std::sort(picked.begin(), picked.end());
    for (auto a : picked) attrs.push_back(static_cast<Index>(a));
  } else {
    for (Index j = 0; j < m; ++j) attrs.push_back(j);
  }

  const std::size_t eligible = static_cast<std::size_t>(n) * attrs.size();
  const std::size_t k =
      static_cast<std::size_t>(std::floor(spec.proportion * static_cast<double>(eligible)));
  auto cells = sample_without_replacement(eligible, k, rng);

  BoolArray missing = ds.missing();
  for (auto c : cells) {
    const Index row = static_cast<Index>(c / attrs.size());
    const Index col = attrs[c % attrs.size()];
    missing(row, col) = true;
  }
  return Dataset(ds.schema(), ds.values(), std::move(missing), ds.labels());
}

std::vector<std::pair<MissingnessSpec, Dataset>> make_suite(
    const Dataset& ds, const std::vector<double>& levels, std::uint64_t seed) {
  if (levels.empty()) throw ConfigError("make_suite: no levels given");
  std::vector<double> sorted = levels;
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::pair<MissingnessSpec, Dataset>> out;
  out.reserve(sorted.size() * 2);
  std::uint64_t variant = 0;
  for (double level : sorted) {
    for (MissingScope scope :
         {MissingScope::kAllAttributes, MissingScope::kHalfAttributes}) {
      MissingnessSpec spec{level, scope, derive_seed(seed, variant++)};
      out.emplace_back(spec, inject(ds, spec));
    }
  }
  return out;
}

}  // namespace ripsel
