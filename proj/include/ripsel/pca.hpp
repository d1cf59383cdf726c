#pragma once

#include <string>

#include "ripsel/dataset.hpp"
#include "ripsel/types.hpp"

namespace ripsel {

// Principal-component front end: standardize columns, eigendecompose the
// correlation matrix, keep components whose eigenvalue exceeds 1, project
// rows into component space. Missing cells are imputed to the column mean at
// projection time, which is a standardized value of 0.
struct PcaModel {
  Vector means;
  Vector scales;        // per-column standard deviation; 1 for constant columns
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, column i pairs with eigenvalues[i]
  Index retained = 0;
};

// Requires >= 2 fully observed rows. Sets retained via select_components.
PcaModel fit_pca(const Dataset& ds);

// Count of eigenvalues strictly above 1; at least 1 (top component fallback).
Index select_components(const PcaModel& model);

// Standardize (imputing missing cells to 0) and project onto the first
// model.retained components. One output column per retained component.
Matrix transform(const PcaModel& model, const Dataset& ds);

// Map component-space rows back through the eigenvector basis and
// de-standardize. t may have any column count up to the model dimension.
Matrix inverse_transform(const PcaModel& model, const Matrix& t);

// Wrap a projected matrix as a dataset with continuous columns PC1..PCk.
Dataset component_dataset(const Matrix& t, const IntVector& labels);

// Plain-text serialization, lossless at 17 significant digits.
std::string format_pca_model(const PcaModel& model);
PcaModel parse_pca_model(const std::string& text);

}  // namespace ripsel
