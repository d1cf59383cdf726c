#include "ripsel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ripsel/errors.hpp"
#include "ripsel/rng.hpp"

namespace ripsel {

namespace {

constexpr Index kCategoricalAttrs = 5;
constexpr Index kStrongAttrs = 24;
constexpr Index kWeakAttrs = 12;
constexpr Index kFactor1Attrs = 12;
constexpr Index kFactor2Attrs = 12;
constexpr Index kNoiseAttrs = 21;
constexpr Index kAttrs = kCategoricalAttrs + kStrongAttrs + kWeakAttrs +
                         kFactor1Attrs + kFactor2Attrs + kNoiseAttrs;

constexpr Real kStrongLoad = 0.8;
constexpr Real kWeakLoad = 0.45;
constexpr Real kNuisanceLoad = 0.8;

// The label factor is a two-population mixture: a minority cluster centred at
// +kClusterCentre and a majority cluster at -kClusterCentre, both with spread
// kClusterSpread. The class boundary sits at z = 0, between the clusters.
constexpr Real kPositiveShare = 0.25;
constexpr Real kClusterCentre = 0.8;
constexpr Real kClusterSpread = 0.45;
constexpr Real kLabelScale = 6.0;

Real mix(Real load, Real factor, Real eps) {
  return load * factor + std::sqrt(1.0 - load * load) * eps;
}

// Integer codes shaped like percentage-bin survey answers.
Real code10(Real latent) {
  const long c = std::lround(4.5 + 1.8 * latent);
  return static_cast<Real>(std::clamp(c, 0L, 9L));
}

Real code5(Real latent) {
  const long c = std::lround(2.0 + 1.1 * latent);
  return static_cast<Real>(std::clamp(c, 0L, 4L));
}

Dataset generate(Index rows, SplitMix64& rng) {
  Matrix values(rows, kAttrs);
  IntVector labels(rows);
  for (Index r = 0; r < rows; ++r) {
    const Real centre =
        rng.uniform() < kPositiveShare ? kClusterCentre : -kClusterCentre;
    const Real z = centre + kClusterSpread * rng.normal();
    const Real u1 = rng.normal();
    const Real u2 = rng.normal();
    Index j = 0;
    values(r, j++) = code5(mix(0.5, z, rng.normal()));
    values(r, j++) = code5(mix(0.5, z, rng.normal()));
    values(r, j++) = code5(mix(0.6, u1, rng.normal()));
    values(r, j++) = code5(mix(0.6, u2, rng.normal()));
    values(r, j++) = code5(rng.normal());
    for (Index k = 0; k < kStrongAttrs; ++k)
      values(r, j++) = code10(mix(kStrongLoad, z, rng.normal()));
    for (Index k = 0; k < kWeakAttrs; ++k)
      values(r, j++) = code10(mix(kWeakLoad, z, rng.normal()));
    for (Index k = 0; k < kFactor1Attrs; ++k)
      values(r, j++) = code10(mix(kNuisanceLoad, u1, rng.normal()));
    for (Index k = 0; k < kFactor2Attrs; ++k)
      values(r, j++) = code10(mix(kNuisanceLoad, u2, rng.normal()));
    for (Index k = 0; k < kNoiseAttrs; ++k) values(r, j++) = code10(rng.normal());
    const Real p = 1.0 / (1.0 + std::exp(-kLabelScale * z));
    labels[r] = rng.uniform() < p ? 1 : 0;
  }

  std::vector<Attribute> schema;
  schema.reserve(static_cast<std::size_t>(kAttrs));
  for (Index j = 0; j < kAttrs; ++j) {
    Attribute attr;
    if (j < kCategoricalAttrs) {
      attr.name = "cat" + std::to_string(j + 1);
      attr.kind = AttributeKind::kCategorical;
      std::set<int> codes;
      for (Index r = 0; r < rows; ++r)
        codes.insert(static_cast<int>(values(r, j)));
      attr.categories.assign(codes.begin(), codes.end());
    } else {
      attr.name = "con" + std::to_string(j - kCategoricalAttrs + 1);
      attr.kind = AttributeKind::kContinuous;
    }
    schema.push_back(std::move(attr));
  }

  BoolArray missing = BoolArray::Constant(rows, kAttrs, false);
  return Dataset(std::move(schema), std::move(values), std::move(missing),
                 std::move(labels));
}

}  // namespace

SynthBundle make_benchmark(const SynthSpec& spec) {
  if (spec.train_rows < 1 || spec.test_rows < 1)
    throw ConfigError("make_benchmark: row counts must be positive");
  SynthBundle out;
  SplitMix64 train_rng(derive_seed(spec.seed, 0));
  SplitMix64 test_rng(derive_seed(spec.seed, 1));
  out.train = generate(spec.train_rows, train_rng);
  out.test = generate(spec.test_rows, test_rng);
  return out;
}

}  // namespace ripsel
