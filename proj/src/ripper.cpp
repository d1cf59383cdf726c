#include "ripsel/ripper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "ripsel/rng.hpp"

namespace ripsel {

namespace {

double log2_binom(double n, double k) {
  if (k < 0 || n < 0) return 0.0;
  if (k > n) k = n;
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) /
         std::log(2.0);
}

// Bits to transmit the natural number k.
double int_bits(double k) { return std::log2(k + 1.0) + 1.0; }

struct Candidate {
  Condition cond;
  double p1 = 0.0;
  double n1 = 0.0;
};

// Candidate-condition pool size over a row set: one equals-condition per
// observed category code, two threshold conditions per midpoint between
// consecutive distinct observed continuous values.
double candidate_pool_size(const Dataset& ds, const std::vector<Index>& rows) {
  double total = 0.0;
  for (Index j = 0; j < ds.n_attrs(); ++j) {
    const auto& attr = ds.schema()[static_cast<std::size_t>(j)];
    std::set<Real> distinct;
    for (Index r : rows) {
      if (!ds.missing()(r, j)) distinct.insert(ds.values()(r, j));
    }
    if (attr.kind == AttributeKind::kCategorical) {
      total += static_cast<double>(distinct.size());
    } else if (distinct.size() > 1) {
      total += 2.0 * static_cast<double>(distinct.size() - 1);
    }
  }
  return total;
}

double theory_bits(std::size_t k, double n_cand) {
  return 0.5 * (int_bits(static_cast<double>(k)) +
                log2_binom(n_cand, static_cast<double>(k)));
}

struct DlStats {
  double bits = 0.0;
  double errors = 0.0;  // fp + fn against the class-local split
};

DlStats dl_stats(const std::vector<Rule>& rules, const Dataset& ds,
                 const std::vector<Index>& pos, const std::vector<Index>& neg,
                 double n_cand) {
  double theory = 0.0;
  for (const auto& r : rules) theory += theory_bits(r.conditions.size(), n_cand);

  auto covered_by_any = [&](Index row) {
    for (const auto& r : rules)
      if (r.covers(ds, row)) return true;
    return false;
  };
  double covered = 0.0, uncovered = 0.0, fp = 0.0, fn = 0.0;
  for (Index r : pos) {
    if (covered_by_any(r)) ++covered;
    else { ++uncovered; ++fn; }
  }
  for (Index r : neg) {
    if (covered_by_any(r)) { ++covered; ++fp; }
    else ++uncovered;
  }
  return {theory + log2_binom(covered, fp) + log2_binom(uncovered, fn), fp + fn};
}

double dl_impl(const std::vector<Rule>& rules, const Dataset& ds,
               const std::vector<Index>& pos, const std::vector<Index>& neg,
               double n_cand) {
  return dl_stats(rules, ds, pos, neg, n_cand).bits;
}

std::pair<double, double> rule_coverage(const Dataset& ds, const Rule& rule,
                                        const std::vector<Index>& pos,
                                        const std::vector<Index>& neg) {
  double p = 0.0, n = 0.0;
  for (Index r : pos)
    if (rule.covers(ds, r)) ++p;
  for (Index r : neg)
    if (rule.covers(ds, r)) ++n;
  return {p, n};
}

}  // namespace

double foil_gain(double p0, double n0, double p1, double n1) {
  if (p1 <= 0.0) return 0.0;
  return p1 * (std::log2(p1 / (p1 + n1)) - std::log2(p0 / (p0 + n0)));
}

std::vector<int> order_classes(const Dataset& ds) {
  if (ds.n_rows() == 0) throw DegenerateError("order_classes: empty dataset");
  std::map<int, Index> counts;
  for (Index i = 0; i < ds.n_rows(); ++i) ++counts[ds.labels()[i]];
  std::vector<std::pair<Index, int>> order;  // (count, code), both ascending
  for (auto [code, count] : counts) order.emplace_back(count, code);
  std::sort(order.begin(), order.end());
  std::vector<int> out;
  for (auto& [count, code] : order) out.push_back(code);
  return out;
}

Rule grow_rule(const Dataset& ds, const std::vector<Index>& grow_pos,
               const std::vector<Index>& grow_neg, int target_class) {
  Rule rule;
  rule.target_class = target_class;

  std::vector<Index> pos = grow_pos;
  std::vector<Index> neg = grow_neg;

  while (!neg.empty()) {
    const double p0 = static_cast<double>(pos.size());
    const double n0 = static_cast<double>(neg.size());

    bool have_best = false;
    Candidate best;
    double best_gain = 0.0;
    // A candidate is admissible when it keeps a covered positive and
    // strictly reduces covered negatives; the gain itself may be <= 0.
    auto consider = [&](const Candidate& c) {
      if (c.p1 < 1.0 || c.n1 >= n0) return;
      const double gain = foil_gain(p0, n0, c.p1, c.n1);
      if (!have_best || gain > best_gain) {
        have_best = true;
        best = c;
        best_gain = gain;
      }
    };

    for (Index j = 0; j < ds.n_attrs(); ++j) {
      const auto& attr = ds.schema()[static_cast<std::size_t>(j)];
      if (attr.kind == AttributeKind::kCategorical) {
        std::map<int, std::pair<double, double>> by_code;  // code -> (p, n)
        for (Index r : pos)
          if (!ds.missing()(r, j)) ++by_code[static_cast<int>(ds.values()(r, j))].first;
        for (Index r : neg)
          if (!ds.missing()(r, j)) ++by_code[static_cast<int>(ds.values()(r, j))].second;
        for (const auto& [code, pn] : by_code) {
          consider({{j, Predicate::kEquals, static_cast<Real>(code)},
                    pn.first, pn.second});
        }
      } else {
        std::vector<std::pair<Real, bool>> obs;  // (value, is_positive)
        obs.reserve(pos.size() + neg.size());
        for (Index r : pos)
          if (!ds.missing()(r, j)) obs.emplace_back(ds.values()(r, j), true);
        for (Index r : neg)
          if (!ds.missing()(r, j)) obs.emplace_back(ds.values()(r, j), false);
        if (obs.size() < 2) continue;
        std::sort(obs.begin(), obs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double p_total = 0.0, n_total = 0.0;
        for (const auto& [v, is_pos] : obs) (is_pos ? p_total : n_total) += 1.0;

        double p_le = 0.0, n_le = 0.0;
        for (std::size_t i = 0; i + 1 < obs.size();) {
          const Real v = obs[i].first;
          while (i < obs.size() && obs[i].first == v) {
            (obs[i].second ? p_le : n_le) += 1.0;
            ++i;
          }
          if (i == obs.size()) break;
          const Real mid = v + (obs[i].first - v) / 2;
          consider({{j, Predicate::kLessOrEqual, mid}, p_le, n_le});
          consider({{j, Predicate::kGreaterOrEqual, mid}, p_total - p_le,
                    n_total - n_le});
        }
      }
    }

    if (!have_best) break;
    rule.conditions.push_back(best.cond);

    auto keep_covered = [&](std::vector<Index>& rows) {
      std::vector<Index> kept;
      kept.reserve(rows.size());
      for (Index r : rows)
        if (best.cond.matches(ds, r)) kept.push_back(r);
      rows = std::move(kept);
    };
    keep_covered(pos);
    keep_covered(neg);
  }
  return rule;
}

Rule prune_rule(const Dataset& ds, const Rule& rule,
                const std::vector<Index>& prune_pos,
                const std::vector<Index>& prune_neg) {
  auto score = [&](const Rule& r) {
    auto [p, n] = rule_coverage(ds, r, prune_pos, prune_neg);
    if (p + n == 0.0) return -1.0;
    return (p - n) / (p + n);
  };

  Rule best = rule;
  double best_v = score(rule);
  Rule candidate = rule;
  // Suffix deletions only; strict improvement required, so ties keep the
  // longer rule.
  while (!candidate.conditions.empty()) {
    candidate.conditions.pop_back();
    const double v = score(candidate);
    if (v > best_v) {
      best_v = v;
      best = candidate;
    }
  }
  return best;
}

double description_length(const RuleSet& rs, const Dataset& ds,
                          const std::vector<Index>& pos,
                          const std::vector<Index>& neg) {
  std::vector<Index> all = pos;
  all.insert(all.end(), neg.begin(), neg.end());
  return dl_impl(rs.rules, ds, pos, neg, candidate_pool_size(ds, all));
}

RuleSet build_ruleset(const Dataset& ds, const RipperConfig& cfg) {
  if (cfg.grow_fraction <= 0.0 || cfg.grow_fraction > 1.0)
    throw ConfigError("build_ruleset: grow_fraction outside (0,1]");
  if (cfg.dl_budget_bits <= 0.0)
    throw ConfigError("build_ruleset: dl_budget_bits must be positive");
  if (cfg.prune_error_cap <= 0.0 || cfg.prune_error_cap > 1.0)
    throw ConfigError("build_ruleset: prune_error_cap outside (0,1]");

  const auto order = order_classes(ds);
  if (order.size() < 2)
    throw DegenerateError("build_ruleset: training data has a single class");

  RuleSet rs;
  rs.default_class = order.back();

  for (std::size_t ci = 0; ci + 1 < order.size(); ++ci) {
    const int cls = order[ci];
    std::vector<Index> pos_all, neg_all;
    for (Index i = 0; i < ds.n_rows(); ++i)
      (ds.labels()[i] == cls ? pos_all : neg_all).push_back(i);

    std::vector<Index> spos = pos_all, sneg = neg_all;
    std::vector<Rule> class_rules;
    const double n_cand = candidate_pool_size(ds, [&] {
      std::vector<Index> all = pos_all;
      all.insert(all.end(), neg_all.begin(), neg_all.end());
      return all;
    }());

    double best_dl = dl_impl(class_rules, ds, pos_all, neg_all, n_cand);
    SplitMix64 rng(derive_seed(cfg.split_seed, ci));

    while (!spos.empty()) {
      // Fresh stratified grow/prune split for every rule.
      auto split = [&](std::vector<Index> rows, bool at_least_one) {
        rng.shuffle(rows);
        std::size_t g = static_cast<std::size_t>(
            std::floor(cfg.grow_fraction * static_cast<double>(rows.size())));
        if (at_least_one && g == 0 && !rows.empty()) g = 1;
        std::vector<Index> grow(rows.begin(), rows.begin() + static_cast<long>(g));
        std::vector<Index> prune(rows.begin() + static_cast<long>(g), rows.end());
        return std::make_pair(std::move(grow), std::move(prune));
      };
      auto [gpos, ppos] = split(spos, true);
      auto [gneg, pneg] = split(sneg, false);

      Rule rule = grow_rule(ds, gpos, gneg, cls);
      rule = prune_rule(ds, rule, ppos, pneg);

      auto [p, n] = rule_coverage(ds, rule, ppos, pneg);
      // Empty pruning set (grow_fraction = 1) carries no contrary evidence.
      const double err = (p + n > 0.0) ? n / (p + n) : 0.0;
      if (err > cfg.prune_error_cap) break;

      class_rules.push_back(rule);
      auto drop_covered = [&](std::vector<Index>& rows) {
        std::vector<Index> kept;
        kept.reserve(rows.size());
        for (Index r : rows)
          if (!rule.covers(ds, r)) kept.push_back(r);
        rows = std::move(kept);
      };
      drop_covered(spos);
      drop_covered(sneg);

      const double dl = dl_impl(class_rules, ds, pos_all, neg_all, n_cand);
      best_dl = std::min(best_dl, dl);
      if (dl > best_dl + cfg.dl_budget_bits) break;
    }

    // Compression: drop, in reverse order, any rule whose removal strictly
    // reduces the total description length without adding training errors.
    // The error guard matters on small row sets, where the fixed coding
    // costs outweigh the exception bits and a pure DL test would delete a
    // rule that is the only cover for its positives.
    for (std::size_t i = class_rules.size(); i-- > 0;) {
      std::vector<Rule> without = class_rules;
      without.erase(without.begin() + static_cast<long>(i));
      const DlStats keep = dl_stats(class_rules, ds, pos_all, neg_all, n_cand);
      const DlStats drop = dl_stats(without, ds, pos_all, neg_all, n_cand);
      if (drop.bits < keep.bits && drop.errors <= keep.errors)
        class_rules = std::move(without);
    }

    rs.rules.insert(rs.rules.end(), class_rules.begin(), class_rules.end());
  }
  return rs;
}

int classify(const RuleSet& rs, const Dataset& ds, Index row) {
  for (const auto& r : rs.rules)
    if (r.covers(ds, row)) return r.target_class;
  return rs.default_class;
}

int classify(const RuleSet& rs, const std::vector<Cell>& row, Index schema_arity) {
  if (static_cast<Index>(row.size()) != schema_arity)
    throw SchemaError("classify: row has " + std::to_string(row.size()) +
                      " cells, schema expects " + std::to_string(schema_arity));
  auto matches = [&](const Condition& c) {
    if (c.attr >= static_cast<Index>(row.size())) return false;
    const Cell& cell = row[static_cast<std::size_t>(c.attr)];
    if (cell.missing) return false;
    switch (c.pred) {
      case Predicate::kEquals: return cell.value == c.value;
      case Predicate::kLessOrEqual: return cell.value <= c.value;
      case Predicate::kGreaterOrEqual: return cell.value >= c.value;
    }
    return false;
  };
  for (const auto& r : rs.rules) {
    bool all = true;
    for (const auto& c : r.conditions)
      if (!matches(c)) { all = false; break; }
    if (all) return r.target_class;
  }
  return rs.default_class;
}

std::string format_ruleset(const RuleSet& rs, const std::vector<Attribute>& schema) {
  std::ostringstream out;
  char buf[64];
  for (const auto& rule : rs.rules) {
    out << "IF ";
    if (rule.conditions.empty()) {
      out << "TRUE";
    } else {
      for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
        const auto& c = rule.conditions[i];
        if (i > 0) out << " AND ";
        out << schema.at(static_cast<std::size_t>(c.attr)).name << ' ';
        switch (c.pred) {
          case Predicate::kEquals: out << "=="; break;
          case Predicate::kLessOrEqual: out << "<="; break;
          case Predicate::kGreaterOrEqual: out << ">="; break;
        }
        if (c.pred == Predicate::kEquals) {
          out << ' ' << static_cast<long long>(c.value);
        } else {
          std::snprintf(buf, sizeof buf, "%.17g", c.value);
          out << ' ' << buf;
        }
      }
    }
    out << " THEN " << rule.target_class << '\n';
  }
  out << "DEFAULT " << rs.default_class << '\n';
  return out.str();
}

RuleSet parse_ruleset(const std::string& text, const std::vector<Attribute>& schema) {
  auto attr_index = [&](const std::string& name) -> Index {
    for (std::size_t j = 0; j < schema.size(); ++j)
      if (schema[j].name == name) return static_cast<Index>(j);
    throw ParseError("parse_ruleset: unknown attribute '" + name + "'");
  };

  RuleSet rs;
  bool saw_default = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "DEFAULT") {
      ls >> rs.default_class;
      saw_default = true;
      continue;
    }
    if (tok != "IF") throw ParseError("parse_ruleset: bad line '" + line + "'");

    Rule rule;
    std::string name;
    ls >> name;
    if (name == "TRUE") {
      ls >> tok;  // THEN
    } else {
      for (;;) {
        std::string op, value;
        ls >> op >> value;
        Condition c;
        c.attr = attr_index(name);
        if (op == "==") c.pred = Predicate::kEquals;
        else if (op == "<=") c.pred = Predicate::kLessOrEqual;
        else if (op == ">=") c.pred = Predicate::kGreaterOrEqual;
        else throw ParseError("parse_ruleset: bad operator '" + op + "'");
        c.value = std::stod(value);
        rule.conditions.push_back(c);
        ls >> tok;  // AND or THEN
        if (tok == "AND") ls >> name;
        else break;
      }
    }
    if (tok != "THEN") throw ParseError("parse_ruleset: missing THEN in '" + line + "'");
    ls >> rule.target_class;
    rs.rules.push_back(std::move(rule));
  }
  if (!saw_default) throw ParseError("parse_ruleset: missing DEFAULT line");
  return rs;
}

}  // namespace ripsel
