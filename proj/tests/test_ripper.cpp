#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "ripsel/ripper.hpp"

using namespace ripsel;

namespace {

Dataset one_dim(const std::vector<Real>& xs, const std::vector<int>& labels) {
  std::vector<Attribute> schema{{"x", AttributeKind::kContinuous, {}}};
  Matrix values(static_cast<Index>(xs.size()), 1);
  IntVector y(static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    values(static_cast<Index>(i), 0) = xs[i];
    y(static_cast<Index>(i)) = labels[i];
  }
  return Dataset(std::move(schema), std::move(values),
                 BoolArray::Constant(static_cast<Index>(xs.size()), 1, false),
                 std::move(y));
}

Dataset two_dim(const std::vector<std::pair<Real, Real>>& rows,
                const std::vector<int>& labels) {
  std::vector<Attribute> schema{{"a", AttributeKind::kContinuous, {}},
                                {"b", AttributeKind::kContinuous, {}}};
  Matrix values(static_cast<Index>(rows.size()), 2);
  IntVector y(static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values(static_cast<Index>(i), 0) = rows[i].first;
    values(static_cast<Index>(i), 1) = rows[i].second;
    y(static_cast<Index>(i)) = labels[i];
  }
  return Dataset(std::move(schema), std::move(values),
                 BoolArray::Constant(static_cast<Index>(rows.size()), 2, false),
                 std::move(y));
}

std::vector<Index> rows_with_label(const Dataset& ds, int label) {
  std::vector<Index> out;
  for (Index r = 0; r < ds.n_rows(); ++r)
    if (ds.labels()(r) == label) out.push_back(r);
  return out;
}

}  // namespace

TEST_CASE("foil gain arithmetic") {
  CHECK(foil_gain(10, 10, 8, 0) == doctest::Approx(8.0));
  CHECK(foil_gain(10, 10, 0, 0) == 0.0);
  // Narrowing 6/6 to 3/1: 3 * (log2(3/4) - log2(1/2)) = 3 * log2(3/2).
  CHECK(foil_gain(6, 6, 3, 1) == doctest::Approx(3.0 * std::log2(1.5)));
}

TEST_CASE("order_classes sorts by prevalence, ties by code") {
  const Dataset skew = one_dim({1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                               {0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(order_classes(skew) == std::vector<int>{1, 0});

  const Dataset tie = one_dim({1, 2, 3, 4}, {1, 0, 1, 0});
  CHECK(order_classes(tie) == std::vector<int>{0, 1});
}

TEST_CASE("grow finds the separating midpoint threshold") {
  const Dataset ds = one_dim({1, 2, 3, 7, 8}, {1, 1, 1, 0, 0});
  const Rule rule = grow_rule(ds, rows_with_label(ds, 1), rows_with_label(ds, 0), 1);
  REQUIRE(rule.conditions.size() == 1);
  CHECK(rule.conditions[0].attr == 0);
  CHECK(rule.conditions[0].pred == Predicate::kLessOrEqual);
  CHECK(rule.conditions[0].value == doctest::Approx(5.0));
  for (Index r : rows_with_label(ds, 1)) CHECK(rule.covers(ds, r));
  for (Index r : rows_with_label(ds, 0)) CHECK_FALSE(rule.covers(ds, r));
}

TEST_CASE("empty negative set grows an unconditional rule") {
  const Dataset ds = one_dim({1, 2, 3}, {1, 1, 1});
  const Rule rule = grow_rule(ds, {0, 1, 2}, {}, 1);
  CHECK(rule.conditions.empty());
  CHECK(rule.target_class == 1);
}

TEST_CASE("grow uses equality on categorical attributes") {
  std::vector<Attribute> schema{{"c", AttributeKind::kCategorical, {2, 3}}};
  Matrix values(6, 1);
  values << 2, 2, 2, 3, 3, 3;
  IntVector labels(6);
  labels << 1, 1, 1, 0, 0, 0;
  const Dataset ds(schema, values, BoolArray::Constant(6, 1, false), labels);
  const Rule rule = grow_rule(ds, {0, 1, 2}, {3, 4, 5}, 1);
  REQUIRE(rule.conditions.size() == 1);
  CHECK(rule.conditions[0].pred == Predicate::kEquals);
  CHECK(rule.conditions[0].value == 2.0);
}

TEST_CASE("prune deletes a suffix that hurts pruning-set coverage") {
  // Condition 2 (b <= 0.5) fits growing noise: on the pruning rows every
  // positive has b > 0.5, so the full rule covers nothing (v = -1) and the
  // one-condition prefix covers 3 positives, 0 negatives (v = 1).
  Rule rule;
  rule.target_class = 1;
  rule.conditions = {{0, Predicate::kLessOrEqual, 5.0},
                     {1, Predicate::kLessOrEqual, 0.5}};
  const Dataset prune = two_dim({{1, 0.9}, {2, 0.8}, {3, 0.7}, {7, 0.1}},
                                {1, 1, 1, 0});
  const Rule out = prune_rule(prune, rule, {0, 1, 2}, {3});
  CHECK(out.conditions.size() == 1);
  CHECK(out.conditions[0].attr == 0);
}

TEST_CASE("prune keeps a suffix that helps, v arithmetic decides") {
  // Full rule covers p=3, n=1 on the pruning rows: v = 0.5. Deleting the
  // last condition widens to p=4, n=2: v = 1/3. The higher v wins.
  Rule rule;
  rule.target_class = 1;
  rule.conditions = {{0, Predicate::kLessOrEqual, 10.0},
                     {1, Predicate::kLessOrEqual, 0.5}};
  const Dataset prune = two_dim({{1, 0.1}, {2, 0.2}, {3, 0.3}, {4, 0.9},
                                 {5, 0.4}, {6, 0.8}},
                                {1, 1, 1, 1, 0, 0});
  const Rule out = prune_rule(prune, rule, {0, 1, 2, 3}, {4, 5});
  CHECK(out.conditions.size() == 2);
}

TEST_CASE("prune ties keep more conditions and never add any") {
  Rule rule;
  rule.target_class = 1;
  rule.conditions = {{0, Predicate::kLessOrEqual, 5.0},
                     {0, Predicate::kGreaterOrEqual, 0.0}};
  // Both suffixes cover the same rows: tie keeps both conditions.
  const Dataset prune = two_dim({{1, 0}, {2, 0}, {7, 0}}, {1, 1, 0});
  const Rule out = prune_rule(prune, rule, {0, 1}, {2});
  CHECK(out.conditions.size() == 2);
}

TEST_CASE("description length penalizes useless rules and extra errors") {
  const Dataset ds = one_dim({1, 2, 3, 4, 7, 8, 9, 10}, {1, 1, 1, 1, 0, 0, 0, 0});
  const std::vector<Index> pos = rows_with_label(ds, 1);
  const std::vector<Index> neg = rows_with_label(ds, 0);

  RuleSet perfect;
  perfect.default_class = 0;
  perfect.rules.push_back({{{0, Predicate::kLessOrEqual, 5.5}}, 1});

  RuleSet padded = perfect;
  padded.rules.push_back({{{0, Predicate::kLessOrEqual, -100.0}}, 1});

  const double dl_perfect = description_length(perfect, ds, pos, neg);
  const double dl_padded = description_length(padded, ds, pos, neg);
  CHECK(dl_padded > dl_perfect);

  // Widening the rule to swallow two negatives adds false positives and
  // costs exception bits.
  RuleSet sloppy;
  sloppy.default_class = 0;
  sloppy.rules.push_back({{{0, Predicate::kLessOrEqual, 8.5}}, 1});
  const double dl_sloppy = description_length(sloppy, ds, pos, neg);
  CHECK(dl_sloppy > dl_perfect);
}

TEST_CASE("empty ruleset on zero-error data beats misclassifying rulesets") {
  // All-negative data: the empty ruleset with default 0 makes no errors.
  const Dataset ds = one_dim({1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0});
  RuleSet empty;
  empty.default_class = 0;
  const double dl_empty = description_length(empty, ds, {}, {0, 1, 2, 3, 4, 5});

  RuleSet wrong;
  wrong.default_class = 0;
  wrong.rules.push_back({{{0, Predicate::kLessOrEqual, 3.5}}, 1});
  const double dl_wrong = description_length(wrong, ds, {}, {0, 1, 2, 3, 4, 5});
  CHECK(dl_empty < dl_wrong);
}

TEST_CASE("build_ruleset nails a cleanly separable threshold") {
  std::vector<Real> xs;
  std::vector<int> labels;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(1.0 + (i % 5));
    labels.push_back(1);
  }
  for (int i = 0; i < 18; ++i) {
    xs.push_back(7.0 + (i % 6));
    labels.push_back(0);
  }
  const Dataset ds = one_dim(xs, labels);
  RipperConfig cfg;
  cfg.split_seed = 42;
  const RuleSet rs = build_ruleset(ds, cfg);
  CHECK(rs.default_class == 0);
  Index correct = 0;
  for (Index r = 0; r < ds.n_rows(); ++r)
    if (classify(rs, ds, r) == ds.labels()(r)) ++correct;
  CHECK(correct == ds.n_rows());
}

TEST_CASE("build_ruleset rejects degenerate inputs") {
  const Dataset single = one_dim({1, 2, 3}, {0, 0, 0});
  CHECK_THROWS_AS(build_ruleset(single, RipperConfig{}), DegenerateError);

  const Dataset ok = one_dim({1, 2, 7, 8}, {1, 1, 0, 0});
  RipperConfig bad;
  bad.grow_fraction = 0.0;
  CHECK_THROWS_AS(build_ruleset(ok, bad), ConfigError);
  bad = RipperConfig{};
  bad.prune_error_cap = 1.5;
  CHECK_THROWS_AS(build_ruleset(ok, bad), ConfigError);
}

TEST_CASE("build_ruleset is deterministic for a fixed seed") {
  std::vector<Real> xs;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    xs.push_back(static_cast<Real>(i % 13));
    labels.push_back(i % 13 < 4 ? 1 : 0);
  }
  const Dataset ds = one_dim(xs, labels);
  RipperConfig cfg;
  cfg.split_seed = 7;
  const RuleSet a = build_ruleset(ds, cfg);
  const RuleSet b = build_ruleset(ds, cfg);
  CHECK(format_ruleset(a, ds.schema()) == format_ruleset(b, ds.schema()));
}

TEST_CASE("compression keeps load-bearing rules on tiny data") {
  // Two rows, one per class: the lone rule for class 0 costs more theory
  // bits than the single exception bit its removal would add, so a pure DL
  // comparison would delete it and strand one row on the default class.
  std::vector<Attribute> schema{{"a", AttributeKind::kCategorical, {0, 1}},
                                {"b", AttributeKind::kCategorical, {0, 1}}};
  Matrix values(2, 2);
  values << 1, 0, 1, 1;
  IntVector labels(2);
  labels << 1, 0;
  const Dataset ds(schema, values, BoolArray::Constant(2, 2, false), labels);

  RipperConfig cfg;
  cfg.grow_fraction = 1.0;
  cfg.prune_error_cap = 1.0;
  cfg.dl_budget_bits = 1e9;
  cfg.split_seed = 1;
  const RuleSet rs = build_ruleset(ds, cfg);
  for (Index r = 0; r < ds.n_rows(); ++r)
    CHECK(classify(rs, ds, r) == ds.labels()(r));
}

TEST_CASE("compression still deletes rules that only add errors") {
  // Three identical rows, majority negative: growing stalls at the
  // unconditional rule, which mislabels both negatives and has to go.
  std::vector<Attribute> schema{{"a", AttributeKind::kCategorical, {0, 1}},
                                {"b", AttributeKind::kCategorical, {0, 1}}};
  Matrix values(3, 2);
  values << 0, 0, 0, 0, 0, 0;
  IntVector labels(3);
  labels << 1, 0, 0;
  const Dataset ds(schema, values, BoolArray::Constant(3, 2, false), labels);

  RipperConfig cfg;
  cfg.grow_fraction = 1.0;
  cfg.prune_error_cap = 1.0;
  cfg.dl_budget_bits = 1e9;
  cfg.split_seed = 1;
  const RuleSet rs = build_ruleset(ds, cfg);
  CHECK(rs.rules.empty());
  CHECK(rs.default_class == 0);
  Index correct = 0;
  for (Index r = 0; r < ds.n_rows(); ++r)
    if (classify(rs, ds, r) == ds.labels()(r)) ++correct;
  CHECK(correct == 2);
}

TEST_CASE("classify takes the first matching rule") {
  RuleSet rs;
  rs.default_class = 0;
  rs.rules.push_back({{{0, Predicate::kLessOrEqual, 5.0}}, 1});
  rs.rules.push_back({{{0, Predicate::kLessOrEqual, 10.0}}, 0});
  rs.rules.push_back({{{0, Predicate::kGreaterOrEqual, 0.0}}, 1});

  const Dataset ds = one_dim({3, 8, 20}, {0, 0, 0});
  CHECK(classify(rs, ds, 0) == 1);  // first rule fires
  CHECK(classify(rs, ds, 1) == 0);  // second rule fires
  CHECK(classify(rs, ds, 2) == 1);  // third rule fires
}

TEST_CASE("missing cells fail conditions and fall to the default") {
  RuleSet rs;
  rs.default_class = 9;
  rs.rules.push_back({{{0, Predicate::kLessOrEqual, 5.0}}, 1});

  std::vector<Attribute> schema{{"x", AttributeKind::kContinuous, {}}};
  Matrix values(1, 1);
  values << 3.0;
  BoolArray missing = BoolArray::Constant(1, 1, true);
  const Dataset all_missing(schema, values, missing, IntVector::Zero(1));
  CHECK(classify(rs, all_missing, 0) == 9);

  CHECK(classify(rs, std::vector<Cell>{{3.0, true}}, 1) == 9);
  CHECK(classify(rs, std::vector<Cell>{{3.0, false}}, 1) == 1);
  CHECK_THROWS_AS(classify(rs, std::vector<Cell>{{3.0, false}, {1.0, false}}, 1),
                  SchemaError);
}

TEST_CASE("empty rules list always answers the default") {
  RuleSet rs;
  rs.default_class = 1;
  const Dataset ds = one_dim({1, 100}, {0, 0});
  CHECK(classify(rs, ds, 0) == 1);
  CHECK(classify(rs, ds, 1) == 1);
}

TEST_CASE("rule text round-trips") {
  std::vector<Attribute> schema{{"age", AttributeKind::kContinuous, {}},
                                {"zone", AttributeKind::kCategorical, {1, 2, 3}}};
  RuleSet rs;
  rs.default_class = 0;
  rs.rules.push_back({{{0, Predicate::kLessOrEqual, 4.5},
                       {1, Predicate::kEquals, 2.0}},
                      1});
  rs.rules.push_back({{}, 0});

  const std::string text = format_ruleset(rs, schema);
  CHECK(text.find("IF age <= 4.5 AND zone == 2 THEN 1") != std::string::npos);
  CHECK(text.find("IF TRUE THEN 0") != std::string::npos);
  CHECK(text.find("DEFAULT 0") != std::string::npos);

  const RuleSet back = parse_ruleset(text, schema);
  REQUIRE(back.rules.size() == 2);
  CHECK(back.default_class == 0);
  CHECK(back.rules[0].conditions == rs.rules[0].conditions);
  CHECK(back.rules[0].target_class == 1);
  CHECK(back.rules[1].conditions.empty());
  CHECK(format_ruleset(back, schema) == text);
}

TEST_CASE("rule parser rejects malformed text") {
  const std::vector<Attribute> schema{{"x", AttributeKind::kContinuous, {}}};
  CHECK_THROWS_AS(parse_ruleset("IF y <= 1 THEN 1\nDEFAULT 0\n", schema),
                  ParseError);
  CHECK_THROWS_AS(parse_ruleset("IF x ~~ 1 THEN 1\nDEFAULT 0\n", schema),
                  ParseError);
  CHECK_THROWS_AS(parse_ruleset("IF x <= 1\nDEFAULT 0\n", schema), ParseError);
  CHECK_THROWS_AS(parse_ruleset("IF x <= 1 THEN 1\n", schema), ParseError);
}
