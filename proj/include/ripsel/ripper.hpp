#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripsel/dataset.hpp"

namespace ripsel {

enum class Predicate { kEquals, kLessOrEqual, kGreaterOrEqual };

// One conjunct of a rule. kEquals carries a category code (categorical
// attributes only), the threshold predicates carry a continuous cut point.
// A condition evaluated on a missing cell is false, never an error.
struct Condition {
  Index attr = 0;
  Predicate pred = Predicate::kEquals;
  Real value = 0.0;

  bool matches(const Dataset& ds, Index row) const {
    if (ds.missing()(row, attr)) return false;
    const Real x = ds.values()(row, attr);
    switch (pred) {
      case Predicate::kEquals: return x == value;
      case Predicate::kLessOrEqual: return x <= value;
      case Predicate::kGreaterOrEqual: return x >= value;
    }
    return false;
  }

  bool operator==(const Condition&) const = default;
};

struct Rule {
  std::vector<Condition> conditions;  // empty matches everything
  int target_class = 1;

  bool covers(const Dataset& ds, Index row) const {
    for (const auto& c : conditions)
      if (!c.matches(ds, row)) return false;
    return true;
  }
};

// First-match-wins ordered rule list with a fall-through default.
struct RuleSet {
  std::vector<Rule> rules;
  int default_class = 0;
};

struct RipperConfig {
  double grow_fraction = 2.0 / 3.0;  // (0,1]; 1.0 puts every row in the
                                     // growing set and disables pruning
  double dl_budget_bits = 64.0;      // stop when DL exceeds best seen + budget
  double prune_error_cap = 0.5;      // reject a rule whose pruning error exceeds this
  std::uint64_t split_seed = 0;
};

// Distinct classes sorted by ascending instance count; ties by ascending code.
std::vector<int> order_classes(const Dataset& ds);

// FOIL information gain of a refinement that narrows coverage from (p0, n0)
// positives/negatives to (p1, n1): p1 * (log2(p1/(p1+n1)) - log2(p0/(p0+n0))).
// Zero when the refined rule covers no positives.
double foil_gain(double p0, double n0, double p1, double n1);

// Greedy FOIL-gain growth: repeatedly add the best candidate condition that
// keeps at least one covered positive and strictly reduces covered negatives,
// until the rule covers no negatives or no such candidate exists. Candidate
// thresholds are midpoints of consecutive distinct observed values restricted
// to currently covered rows.
Rule grow_rule(const Dataset& ds, const std::vector<Index>& grow_pos,
               const std::vector<Index>& grow_neg, int target_class);

// Best suffix-deletion of the condition list under v = (p - n)/(p + n) on the
// pruning rows; rules covering nothing score -1; ties keep more conditions.
Rule prune_rule(const Dataset& ds, const Rule& rule,
                const std::vector<Index>& prune_pos,
                const std::vector<Index>& prune_neg);

// MDL cost in bits of the rule list plus its exceptions on (pos, neg):
// per-rule theory bits 0.5*(||k|| + log2 C(n_cand, k)) with ||k|| = log2(k+1)+1
// and n_cand the candidate-condition pool size over pos+neg, plus binomial
// exception bits for false positives among covered rows and false negatives
// among uncovered rows. Coverage is any-rule coverage.
double description_length(const RuleSet& rs, const Dataset& ds,
                          const std::vector<Index>& pos,
                          const std::vector<Index>& neg);

RuleSet build_ruleset(const Dataset& ds, const RipperConfig& cfg);

int classify(const RuleSet& rs, const Dataset& ds, Index row);
int classify(const RuleSet& rs, const std::vector<Cell>& row, Index schema_arity);

// "IF cond AND cond THEN class" lines plus a "DEFAULT class" line; parses back
// losslessly given the schema the rule set was built against.
std::string format_ruleset(const RuleSet& rs, const std::vector<Attribute>& schema);
RuleSet parse_ruleset(const std::string& text, const std::vector<Attribute>& schema);

}  // namespace ripsel
