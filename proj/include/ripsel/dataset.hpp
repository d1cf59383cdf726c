#pragma once

#include <string>
#include <vector>

#include "ripsel/errors.hpp"
#include "ripsel/types.hpp"

namespace ripsel {

enum class AttributeKind { kCategorical, kContinuous };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kContinuous;
  // Distinct category codes observed in the data, ascending. Empty for
  // continuous attributes.
  std::vector<int> categories;
};

struct Cell {
  Real value = 0.0;
  bool missing = false;
};

// Immutable-after-construction tabular dataset: one column per schema
// attribute, binary labels, explicit per-cell missing flags. Missing cells
// hold NaN in the value matrix so an accidental numeric read surfaces fast.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Attribute> schema, Matrix values, BoolArray missing,
          IntVector labels);

  Index n_rows() const { return values_.rows(); }
  Index n_attrs() const { return values_.cols(); }

  const std::vector<Attribute>& schema() const { return schema_; }
  const Matrix& values() const { return values_; }
  const BoolArray& missing() const { return missing_; }
  const IntVector& labels() const { return labels_; }

  Cell cell(Index row, Index col) const {
    return missing_(row, col) ? Cell{0.0, true}
                              : Cell{values_(row, col), false};
  }

  int attribute_index(const std::string& name) const;  // -1 when absent

  Dataset subset_rows(const std::vector<Index>& rows) const;
  Dataset head(Index n) const;
  std::vector<Index> fully_observed_rows() const;

 private:
  std::vector<Attribute> schema_;
  Matrix values_;
  BoolArray missing_;
  IntVector labels_;
};

struct LoadOptions {
  char delimiter = ',';
  std::string missing_token = "?";
  // kAuto treats the first line as a header when it contains a field that is
  // neither numeric nor the missing token.
  enum class Header { kAuto, kYes, kNo };
  Header header = Header::kAuto;
  // Feature-column schema. When empty, kinds are inferred: a column whose
  // observed values are all integral with at most 12 distinct codes becomes
  // categorical, anything else continuous.
  std::vector<Attribute> schema_hint;
  // Label column position; -1 means last column.
  int label_column = -1;
};

Dataset load_table(const std::string& path, const LoadOptions& opts = {});
void save_table(const Dataset& ds, const std::string& path,
                char delimiter = ',', const std::string& missing_token = "?",
                bool with_header = true);

// Sidecar format: one "name,kind" line per feature column, kind in
// {categorical, continuous}. '#' starts a comment.
std::vector<Attribute> read_schema_sidecar(const std::string& path);
void write_schema_sidecar(const std::vector<Attribute>& schema,
                          const std::string& path);

Dataset drop_attributes(const Dataset& ds, const std::vector<std::string>& names);

struct ColumnStats {
  Vector mean;    // over observed cells
  Vector stddev;  // population (n) divisor; 0 for constant columns
};

ColumnStats standardize_stats(const Dataset& ds);

}  // namespace ripsel
