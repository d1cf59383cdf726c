#include "ripsel/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ripsel {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

bool parse_real(const std::string& tok, Real& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool is_integral(Real v) { return std::floor(v) == v && std::isfinite(v); }

}  // namespace

Dataset::Dataset(std::vector<Attribute> schema, Matrix values, BoolArray missing,
                 IntVector labels)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      missing_(std::move(missing)),
      labels_(std::move(labels)) {
  if (values_.cols() != static_cast<Index>(schema_.size()))
    throw SchemaError("dataset: column count does not match schema");
  if (missing_.rows() != values_.rows() || missing_.cols() != values_.cols())
    throw SchemaError("dataset: missing mask shape mismatch");
  if (labels_.size() != values_.rows())
    throw SchemaError("dataset: label count does not match row count");
  std::unordered_set<std::string> names;
  for (const auto& a : schema_) {
    if (!names.insert(a.name).second)
      throw SchemaError("dataset: duplicate attribute name '" + a.name + "'");
  }
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 0 && labels_[i] != 1)
      throw LabelError("dataset: label outside {0,1} at row " +
                       std::to_string(i));
  }
  for (Index i = 0; i < values_.rows(); ++i)
    for (Index j = 0; j < values_.cols(); ++j)
      if (missing_(i, j)) values_(i, j) = kNaN;
}

int Dataset::attribute_index(const std::string& name) const {
  for (std::size_t j = 0; j < schema_.size(); ++j)
    if (schema_[j].name == name) return static_cast<int>(j);
  return -1;
}

Dataset Dataset::subset_rows(const std::vector<Index>& rows) const {
  Matrix v(static_cast<Index>(rows.size()), n_attrs());
  BoolArray m(static_cast<Index>(rows.size()), n_attrs());
  IntVector l(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    v.row(static_cast<Index>(i)) = values_.row(rows[i]);
    m.row(static_cast<Index>(i)) = missing_.row(rows[i]);
    l[static_cast<Index>(i)] = labels_[rows[i]];
  }
  return Dataset(schema_, std::move(v), std::move(m), std::move(l));
}

Dataset Dataset::head(Index n) const {
  n = std::min(n, n_rows());
  std::vector<Index> rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  return subset_rows(rows);
}

std::vector<Index> Dataset::fully_observed_rows() const {
  std::vector<Index> rows;
  for (Index i = 0; i < n_rows(); ++i)
    if (!missing_.row(i).any()) rows.push_back(i);
  return rows;
}

Dataset load_table(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_table: cannot open '" + path + "'");

  std::vector<std::vector<std::string>> raw;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    raw.push_back(split_line(line, opts.delimiter));
  }
  if (raw.empty()) throw SchemaError("load_table: '" + path + "' has no rows");

  const std::size_t n_cols = raw.front().size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != n_cols)
      throw SchemaError("load_table: ragged row " + std::to_string(i) +
                        " has " + std::to_string(raw[i].size()) +
                        " fields, expected " + std::to_string(n_cols));
  }
  if (n_cols < 2)
    throw SchemaError("load_table: need at least one feature and one label column");

  bool header = false;
  if (opts.header == LoadOptions::Header::kYes) {
    header = true;
  } else if (opts.header == LoadOptions::Header::kAuto) {
    for (const auto& tok : raw.front()) {
      Real v;
      if (tok != opts.missing_token && !parse_real(tok, v)) {
        header = true;
        break;
      }
    }
  }

  std::vector<std::string> names(n_cols);
  if (header) {
    names = raw.front();
    raw.erase(raw.begin());
    if (raw.empty()) throw SchemaError("load_table: header but no data rows");
  } else {
    for (std::size_t j = 0; j + 1 < n_cols; ++j)
      names[j] = "a" + std::to_string(j + 1);
    names[n_cols - 1] = "class";
  }

  const std::size_t label_col = opts.label_column < 0
                                    ? n_cols - 1
                                    : static_cast<std::size_t>(opts.label_column);
  if (label_col >= n_cols)
    throw SchemaError("load_table: label column out of range");

  std::vector<std::size_t> feat_cols;
  for (std::size_t j = 0; j < n_cols; ++j)
    if (j != label_col) feat_cols.push_back(j);
  const std::size_t m = feat_cols.size();

  if (!opts.schema_hint.empty() && opts.schema_hint.size() != m)
    throw SchemaError("load_table: schema hint lists " +
                      std::to_string(opts.schema_hint.size()) +
                      " attributes, table has " + std::to_string(m));

  const Index n = static_cast<Index>(raw.size());
  Matrix values(n, static_cast<Index>(m));
  BoolArray missing = BoolArray::Constant(n, static_cast<Index>(m), false);
  IntVector labels(n);

  for (Index i = 0; i < n; ++i) {
    const auto& row = raw[static_cast<std::size_t>(i)];
    for (std::size_t f = 0; f < m; ++f) {
      const std::string& tok = row[feat_cols[f]];
      if (tok == opts.missing_token || tok.empty()) {
        missing(i, static_cast<Index>(f)) = true;
        values(i, static_cast<Index>(f)) = kNaN;
        continue;
      }
      Real v;
      if (!parse_real(tok, v))
        throw ParseError("load_table: row " + std::to_string(i) + ", column '" +
                         names[feat_cols[f]] + "': cannot parse '" + tok + "'");
      values(i, static_cast<Index>(f)) = v;
    }
    const std::string& lt = row[label_col];
    Real lv;
    if (lt == opts.missing_token || !parse_real(lt, lv))
      throw LabelError("load_table: row " + std::to_string(i) +
                       ": label '" + lt + "' is not a number");
    if (lv != 0.0 && lv != 1.0)
      throw LabelError("load_table: row " + std::to_string(i) + ": label '" +
                       lt + "' outside {0,1}");
    labels[i] = static_cast<int>(lv);
  }

  std::vector<Attribute> schema(m);
  for (std::size_t f = 0; f < m; ++f) {
    Attribute a;
    if (!opts.schema_hint.empty()) {
      a = opts.schema_hint[f];
      if (a.name.empty()) a.name = names[feat_cols[f]];
    } else {
      a.name = names[feat_cols[f]];
      // Kind inference over observed cells.
      std::set<Real> distinct;
      bool integral = true;
      for (Index i = 0; i < n; ++i) {
        if (missing(i, static_cast<Index>(f))) continue;
        const Real v = values(i, static_cast<Index>(f));
        integral = integral && is_integral(v);
        if (integral) distinct.insert(v);
        if (!integral) break;
      }
      a.kind = (integral && !distinct.empty() && distinct.size() <= 12)
                   ? AttributeKind::kCategorical
                   : AttributeKind::kContinuous;
    }
    if (a.kind == AttributeKind::kCategorical) {
      std::set<int> codes;
      for (Index i = 0; i < n; ++i) {
        if (missing(i, static_cast<Index>(f))) continue;
        const Real v = values(i, static_cast<Index>(f));
        if (!is_integral(v))
          throw ParseError("load_table: row " + std::to_string(i) +
                           ", categorical column '" + a.name +
                           "': non-integer code " + std::to_string(v));
        codes.insert(static_cast<int>(v));
      }
      a.categories.assign(codes.begin(), codes.end());
    } else {
      a.categories.clear();
    }
    schema[f] = std::move(a);
  }

  return Dataset(std::move(schema), std::move(values), std::move(missing),
                 std::move(labels));
}

void save_table(const Dataset& ds, const std::string& path, char delimiter,
                const std::string& missing_token, bool with_header) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_table: cannot open '" + path + "' for write");
  char buf[64];
  if (with_header) {
    for (const auto& a : ds.schema()) out << a.name << delimiter;
    out << "class\n";
  }
  for (Index i = 0; i < ds.n_rows(); ++i) {
    for (Index j = 0; j < ds.n_attrs(); ++j) {
      if (ds.missing()(i, j)) {
        out << missing_token;
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", ds.values()(i, j));
        out << buf;
      }
      out << delimiter;
    }
    out << ds.labels()[i] << '\n';
  }
}

std::vector<Attribute> read_schema_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("schema sidecar: cannot open '" + path + "'");
  std::vector<Attribute> schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_line(line, ',');
    if (fields.size() != 2)
      throw ConfigError("schema sidecar: line " + std::to_string(line_no) +
                        ": expected 'name,kind'");
    Attribute a;
    a.name = fields[0];
    if (fields[1] == "categorical")
      a.kind = AttributeKind::kCategorical;
    else if (fields[1] == "continuous")
      a.kind = AttributeKind::kContinuous;
    else
      throw ConfigError("schema sidecar: line " + std::to_string(line_no) +
                        ": unknown kind '" + fields[1] + "'");
    schema.push_back(std::move(a));
  }
  return schema;
}

void write_schema_sidecar(const std::vector<Attribute>& schema,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("schema sidecar: cannot open '" + path + "' for write");
  for (const auto& a : schema) {
    out << a.name << ','
        << (a.kind == AttributeKind::kCategorical ? "categorical" : "continuous")
        << '\n';
  }
}

Dataset drop_attributes(const Dataset& ds, const std::vector<std::string>& names) {
  std::unordered_set<std::string> to_drop;
  for (const auto& n : names) {
    if (ds.attribute_index(n) < 0)
      throw ConfigError("drop_attributes: unknown attribute '" + n + "'");
    to_drop.insert(n);  // repeated names collapse to one removal
  }
  std::vector<Index> keep;
  for (Index j = 0; j < ds.n_attrs(); ++j)
    if (!to_drop.count(ds.schema()[static_cast<std::size_t>(j)].name))
      keep.push_back(j);

  std::vector<Attribute> schema;
  schema.reserve(keep.size());
  Matrix v(ds.n_rows(), static_cast<Index>(keep.size()));
  BoolArray m(ds.n_rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    schema.push_back(ds.schema()[static_cast<std::size_t>(keep[k])]);
    v.col(static_cast<Index>(k)) = ds.values().col(keep[k]);
    m.col(static_cast<Index>(k)) = ds.missing().col(keep[k]);
  }
  return Dataset(std::move(schema), std::move(v), std::move(m), ds.labels());
}

ColumnStats standardize_stats(const Dataset& ds) {
  const Index m = ds.n_attrs();
  ColumnStats st;
  st.mean = Vector::Zero(m);
  st.stddev = Vector::Zero(m);
  for (Index j = 0; j < m; ++j) {
    Real sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < ds.n_rows(); ++i) {
      if (ds.missing()(i, j)) continue;
      sum += ds.values()(i, j);
      ++count;
    }
    if (count == 0)
      throw DegenerateError("standardize_stats: column '" +
                            ds.schema()[static_cast<std::size_t>(j)].name +
                            "' has no observed cells");
    const Real mean = sum / static_cast<Real>(count);
    Real ss = 0.0;
    for (Index i = 0; i < ds.n_rows(); ++i) {
      if (ds.missing()(i, j)) continue;
      const Real d = ds.values()(i, j) - mean;
      ss += d * d;
    }
    st.mean[j] = mean;
    st.stddev[j] = std::sqrt(ss / static_cast<Real>(count));
  }
  return st;
}

}  // namespace ripsel
