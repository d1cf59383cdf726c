#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "ripsel/ard.hpp"
#include "ripsel/rng.hpp"

using namespace ripsel;

namespace {

MlpNetwork make_net(Index n_inputs, Index n_hidden, std::uint64_t seed,
                    Real scale = 0.3) {
  MlpNetwork net;
  net.n_inputs = n_inputs;
  net.n_hidden = n_hidden;
  net.w_ji = Matrix(n_hidden, n_inputs + 1);
  net.w_kj = Vector(n_hidden + 1);
  SplitMix64 g(seed);
  for (Index c = 0; c < net.w_ji.cols(); ++c)
    for (Index r = 0; r < net.w_ji.rows(); ++r) net.w_ji(r, c) = scale * g.normal();
  for (Index j = 0; j < net.w_kj.size(); ++j) net.w_kj(j) = scale * g.normal();
  return net;
}

// Two gaussian blobs of 100 rows each, centres (-2, 0) and (2, 0): margin 2
// about the separating axis.
void make_blobs(Matrix& x, IntVector& labels, std::uint64_t seed) {
  SplitMix64 g(seed);
  x = Matrix(200, 2);
  labels = IntVector(200);
  for (Index r = 0; r < 200; ++r) {
    const int cls = r < 100 ? 0 : 1;
    const Real cx = cls == 0 ? -2.0 : 2.0;
    x(r, 0) = cx + 0.5 * g.normal();
    x(r, 1) = 0.5 * g.normal();
    labels(r) = cls;
  }
}

Dataset informative_dataset(Index n_rows, std::uint64_t seed) {
  // 10 standardized-ish inputs; only the first two drive the label.
  SplitMix64 g(seed);
  Matrix values(n_rows, 10);
  IntVector labels(n_rows);
  for (Index r = 0; r < n_rows; ++r) {
    for (Index c = 0; c < 10; ++c) values(r, c) = g.normal();
    const Real score = 2.0 * values(r, 0) - 2.0 * values(r, 1);
    labels(r) = score + 0.3 * g.normal() > 0.0 ? 1 : 0;
  }
  std::vector<Attribute> schema;
  for (Index c = 0; c < 10; ++c)
    schema.push_back({"f" + std::to_string(c), AttributeKind::kContinuous, {}});
  return Dataset(std::move(schema), std::move(values),
                 BoolArray::Constant(n_rows, 10, false), std::move(labels));
}

}  // namespace

TEST_CASE("flatten and unflatten are inverse bijections") {
  MlpNetwork net = make_net(4, 3, 1);
  CHECK(n_params(net) == 3 * 5 + 4);
  const Vector w = flatten(net);
  REQUIRE(w.size() == n_params(net));
  // Column-major w_ji first: w(0) is w_ji(0,0), then w_kj at the tail.
  CHECK(w(0) == net.w_ji(0, 0));
  CHECK(w(3 * 5) == net.w_kj(0));

  MlpNetwork other = make_net(4, 3, 2);
  unflatten(w, other);
  CHECK(other.w_ji == net.w_ji);
  CHECK(other.w_kj == net.w_kj);
}

TEST_CASE("forward of the zero network is one half") {
  MlpNetwork net;
  net.n_inputs = 3;
  net.n_hidden = 4;
  net.w_ji = Matrix::Zero(4, 4);
  net.w_kj = Vector::Zero(5);
  Vector x(3);
  x << 0.5, -2.0, 7.0;
  CHECK(forward(net, x) == doctest::Approx(0.5));
}

TEST_CASE("forward matches the hand-computed nested sigmoid") {
  MlpNetwork net;
  net.n_inputs = 1;
  net.n_hidden = 1;
  net.w_ji = Matrix(1, 2);
  net.w_ji << 0.0, 1.0;  // bias 0, weight 1
  net.w_kj = Vector(2);
  net.w_kj << 0.0, 1.0;
  Vector x(1);
  x << 0.0;
  // g(0) = 0.5, f(0.5) = 1/(1+e^-0.5) = 0.62246.
  CHECK(forward(net, x) == doctest::Approx(0.62246).epsilon(1e-4));
}

TEST_CASE("forward output stays strictly inside (0, 1)") {
  SplitMix64 g(77);
  for (int trial = 0; trial < 2000; ++trial) {
    MlpNetwork net = make_net(3, 2, g.next(), 10.0);  // deliberately extreme
    Vector x(3);
    for (Index i = 0; i < 3; ++i) x(i) = 20.0 * g.normal();
    const Real y = forward(net, x);
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  SplitMix64 g(5);
  MlpNetwork net = make_net(5, 3, 99);
  Matrix x(16, 5);
  IntVector labels(16);
  for (Index r = 0; r < 16; ++r) {
    for (Index c = 0; c < 5; ++c) x(r, c) = g.normal();
    labels(r) = static_cast<int>(g.below(2));
  }
  const ArdHyperparams hp = per_input_hyperparams(5, 0.1);

  const Vector analytic = gradient(net, x, labels, hp);
  const Real step = 1e-5;
  Vector w = flatten(net);
  Real max_rel = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    Vector wp = w, wm = w;
    wp(i) += step;
    wm(i) -= step;
    MlpNetwork np = net, nm = net;
    unflatten(wp, np);
    unflatten(wm, nm);
    const Real fd =
        (objective(np, x, labels, hp) - objective(nm, x, labels, hp)) /
        (2.0 * step);
    const Real denom = std::max({std::abs(analytic(i)), std::abs(fd), 1e-2});
    max_rel = std::max(max_rel, std::abs(analytic(i) - fd) / denom);
  }
  CHECK(max_rel < 1e-4);
}

TEST_CASE("training separates wide blobs") {
  Matrix x;
  IntVector labels;
  make_blobs(x, labels, 2024);
  MlpNetwork net = make_net(2, 4, 11, 0.5);
  const ArdHyperparams hp = per_input_hyperparams(2, 0.01);
  ArdConfig cfg;
  cfg.epochs = 1000;
  cfg.learning_rate = 0.5;
  const MlpNetwork trained = train(net, x, labels, hp, cfg);

  Index correct = 0;
  for (Index r = 0; r < 200; ++r) {
    const int pred = forward(trained, x.row(r).transpose()) >= 0.5 ? 1 : 0;
    if (pred == labels(r)) ++correct;
  }
  CHECK(correct >= 190);  // >= 0.95 training accuracy
}

TEST_CASE("objective is non-increasing in nearly every epoch at small rates") {
  Matrix x;
  IntVector labels;
  make_blobs(x, labels, 7);
  MlpNetwork net = make_net(2, 4, 3, 0.5);
  const ArdHyperparams hp = per_input_hyperparams(2, 0.01);
  ArdConfig step_cfg;
  step_cfg.epochs = 1;
  step_cfg.learning_rate = 0.01;

  int increases = 0;
  const int total = 300;
  Real prev = objective(net, x, labels, hp);
  for (int e = 0; e < total; ++e) {
    net = train(net, x, labels, hp, step_cfg);
    const Real now = objective(net, x, labels, hp);
    if (now > prev) ++increases;
    prev = now;
  }
  CHECK(increases <= total / 20);  // at most 5% of epochs
}

TEST_CASE("heavier decay shrinks the group it targets") {
  Matrix x;
  IntVector labels;
  make_blobs(x, labels, 55);
  ArdConfig cfg;
  cfg.epochs = 500;
  cfg.learning_rate = 0.2;

  ArdHyperparams light = per_input_hyperparams(2, 0.1);
  ArdHyperparams heavy = light;
  heavy.alphas(0) = 1000.0;  // decay input 0's fan-out hard

  const MlpNetwork net0 = make_net(2, 4, 21, 0.5);
  const MlpNetwork a = train(net0, x, labels, light, cfg);
  const MlpNetwork b = train(net0, x, labels, heavy, cfg);

  const Real norm_a = a.w_ji.col(1).norm();  // input 0 fans out via column 1
  const Real norm_b = b.w_ji.col(1).norm();
  CHECK(norm_b < norm_a);
}

TEST_CASE("divergence raises a numeric error naming the epoch") {
  Matrix x;
  IntVector labels;
  make_blobs(x, labels, 9);
  // Weights big enough that the decay penalty overflows a double.
  MlpNetwork net = make_net(2, 3, 2, 1e200);
  const ArdHyperparams hp = per_input_hyperparams(2, 1.0);
  ArdConfig cfg;
  cfg.epochs = 5;
  try {
    train(net, x, labels, hp, cfg);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}

TEST_CASE("alpha re-estimation arithmetic") {
  CHECK(reestimate_alpha(1.0, 2.0) == doctest::Approx(0.5));
  CHECK(reestimate_alpha(3.0, 0.0) == 1e6);   // all-zero group clamps up
  CHECK(reestimate_alpha(0.0, 5.0) == 1e-6);  // floor clamp
  CHECK(reestimate_alpha(1e9, 1.0) == 1e6);   // ceiling clamp
}

TEST_CASE("update_alphas keeps gamma and alpha inside their bounds") {
  const Dataset ds = informative_dataset(80, 31);
  Matrix x = ds.values();
  const IntVector labels = ds.labels();

  ArdModel model;
  model.network = make_net(10, 4, 17, 0.4);
  model.hyperparams = per_input_hyperparams(10, 0.1);
  ArdConfig cfg;
  cfg.epochs = 300;
  cfg.learning_rate = 0.1;
  model.network = train(model.network, x, labels, model.hyperparams, cfg);

  const ArdHyperparams updated = update_alphas(model, x, labels);
  REQUIRE(updated.alphas.size() == 11);
  for (Index k = 0; k < updated.alphas.size(); ++k) {
    CHECK(updated.alphas(k) >= 1e-6);
    CHECK(updated.alphas(k) <= 1e6);
  }
  REQUIRE(model.gamma.size() == 11);
  for (Index k = 0; k < 10; ++k) {
    CHECK(model.gamma(k) >= 0.0);
    CHECK(model.gamma(k) <= 4.0);  // per-input group has n_hidden weights
  }
  CHECK(model.hessian_diag_inverse.size() == n_params(model.network));
}

TEST_CASE("irrelevant inputs end up with larger alphas than relevant ones") {
  const Dataset ds = informative_dataset(150, 42);
  ArdConfig cfg;
  cfg.epochs = 400;
  cfg.learning_rate = 0.3;
  cfg.n_hidden = 4;
  cfg.evidence_cycles = 3;
  cfg.seed = 4242;
  const ArdSelection sel = select_features(ds, cfg);
  REQUIRE(sel.blocks.size() == 1);
  const Vector& alphas = sel.blocks[0].hyperparams.alphas;
  const Real relevant_max = std::max(alphas(0), alphas(1));
  for (Index k = 2; k < 10; ++k) CHECK(alphas(k) > relevant_max);
  // Both informative inputs retained.
  CHECK(std::count(sel.retained.begin(), sel.retained.end(), 0) == 1);
  CHECK(std::count(sel.retained.begin(), sel.retained.end(), 1) == 1);
}

TEST_CASE("threshold zero retains every attribute") {
  const Dataset ds = informative_dataset(60, 5);
  ArdConfig cfg;
  cfg.epochs = 50;
  cfg.learning_rate = 0.1;
  cfg.relevance_threshold = 0.0;
  cfg.seed = 1;
  const ArdSelection sel = select_features(ds, cfg);
  CHECK(sel.retained.size() == 10);
  for (Index i = 0; i < 10; ++i) CHECK(sel.retained[static_cast<std::size_t>(i)] == i);
  CHECK_FALSE(sel.guard_triggered);
}

TEST_CASE("impossible threshold trips the guard instead of emptying a block") {
  const Dataset ds = informative_dataset(60, 6);
  ArdConfig cfg;
  cfg.epochs = 50;
  cfg.learning_rate = 0.1;
  cfg.relevance_threshold = 1e9;
  cfg.seed = 2;
  const ArdSelection sel = select_features(ds, cfg);
  CHECK(sel.retained.size() == 1);  // single block keeps its best attribute
  CHECK(sel.guard_triggered);
}

TEST_CASE("block partition arithmetic") {
  CHECK(block_sizes(185, 4) == std::vector<Index>{47, 46, 46, 46});
  CHECK(block_sizes(10, 1) == std::vector<Index>{10});
  CHECK(block_sizes(9, 3) == std::vector<Index>{3, 3, 3});
  CHECK_THROWS_AS(block_sizes(3, 4), ConfigError);

  ArdConfig cfg;
  CHECK(resolved_split_groups(cfg, 185) == 4);  // auto splits past 100 inputs
  CHECK(resolved_split_groups(cfg, 86) == 1);
  cfg.split_groups = 2;
  CHECK(resolved_split_groups(cfg, 86) == 2);
}

TEST_CASE("selection is deterministic and permutation equivariant") {
  const Dataset ds = informative_dataset(120, 12);
  ArdConfig cfg;
  cfg.epochs = 200;
  cfg.learning_rate = 0.2;
  cfg.evidence_cycles = 2;
  cfg.seed = 99;

  const ArdSelection a = select_features(ds, cfg);
  const ArdSelection b = select_features(ds, cfg);
  CHECK(a.retained == b.retained);
  REQUIRE(a.blocks.size() == b.blocks.size());
  CHECK(a.blocks[0].relevance == b.blocks[0].relevance);

  // Reverse the attribute order and rerun: retained indices must map back.
  const Index m = ds.n_attrs();
  std::vector<Attribute> rev_schema;
  Matrix rev_values(ds.n_rows(), m);
  for (Index j = 0; j < m; ++j) {
    rev_schema.push_back(ds.schema()[static_cast<std::size_t>(m - 1 - j)]);
    rev_values.col(j) = ds.values().col(m - 1 - j);
  }
  const Dataset reversed(rev_schema, rev_values,
                         BoolArray::Constant(ds.n_rows(), m, false), ds.labels());
  const ArdSelection r = select_features(reversed, cfg);

  std::vector<Index> mapped;
  for (Index idx : r.retained) mapped.push_back(m - 1 - idx);
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == a.retained);
}

TEST_CASE("select_features validates its input") {
  const Dataset ds = informative_dataset(50, 3);
  BoolArray missing = BoolArray::Constant(50, 10, false);
  missing(0, 0) = true;
  const Dataset with_missing(ds.schema(), ds.values(), missing, ds.labels());
  ArdConfig cfg;
  cfg.epochs = 10;
  CHECK_THROWS_AS(select_features(with_missing, cfg), DegenerateError);
}

TEST_CASE("ard model text round-trips") {
  const Dataset ds = informative_dataset(80, 21);
  ArdConfig cfg;
  cfg.epochs = 100;
  cfg.learning_rate = 0.2;
  cfg.evidence_cycles = 2;
  cfg.seed = 8;
  const ArdSelection sel = select_features(ds, cfg);
  REQUIRE(sel.blocks.size() == 1);
  const ArdModel& model = sel.blocks[0];

  const ArdModel back = parse_ard_model(format_ard_model(model));
  CHECK(back.network.n_inputs == model.network.n_inputs);
  CHECK(back.network.n_hidden == model.network.n_hidden);
  CHECK(back.network.w_ji == model.network.w_ji);
  CHECK(back.network.w_kj == model.network.w_kj);
  CHECK(back.hyperparams.input_group == model.hyperparams.input_group);
  CHECK(back.hyperparams.default_group == model.hyperparams.default_group);
  CHECK(back.hyperparams.alphas == model.hyperparams.alphas);
  CHECK(back.relevance == model.relevance);
  CHECK(back.gamma == model.gamma);
  CHECK(back.hessian_ridged == model.hessian_ridged);

  CHECK_THROWS_AS(parse_ard_model("not a model"), ParseError);
}
