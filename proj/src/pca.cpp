#include "ripsel/pca.hpp"

#include <cstdio>
#include <sstream>

#include "ripsel/jacobi.hpp"

namespace ripsel {

namespace {

void append_row(std::ostringstream& out, const char* label, const Vector& v) {
  out << label;
  char buf[64];
  for (Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << ' ' << buf;
  }
  out << '\n';
}

void expect_token(std::istream& in, const std::string& want) {
  std::string got;
  in >> got;
  if (got != want)
    throw ParseError("parse_pca_model: expected '" + want + "', got '" + got + "'");
}

Vector read_row(std::istream& in, const std::string& label, Index m) {
  expect_token(in, label);
  Vector v(m);
  for (Index i = 0; i < m; ++i) {
    if (!(in >> v[i]))
      throw ParseError("parse_pca_model: truncated '" + label + "' row");
  }
  return v;
}

}  // namespace

PcaModel fit_pca(const Dataset& ds) {
  if (ds.n_rows() < 2)
    throw DegenerateError("fit_pca: need at least 2 rows");
  if (ds.n_attrs() < 1)
    throw DegenerateError("fit_pca: dataset has no attributes");
  if (ds.missing().any())
    throw DegenerateError("fit_pca: training rows contain missing cells");

  const ColumnStats stats = standardize_stats(ds);

  PcaModel model;
  model.means = stats.mean;
  model.scales = stats.stddev;
  for (Index j = 0; j < model.scales.size(); ++j)
    if (model.scales[j] == 0.0) model.scales[j] = 1.0;

  const Index n = ds.n_rows();
  Matrix z = (ds.values().rowwise() - model.means.transpose()).array().rowwise() /
             model.scales.transpose().array();
  Matrix corr = (z.transpose() * z) / static_cast<Real>(n);

  EigenDecomposition eig = eigen_symmetric(corr);
  model.eigenvalues = std::move(eig.values);
  model.eigenvectors = std::move(eig.vectors);
  model.retained = select_components(model);
  return model;
}

Index select_components(const PcaModel& model) {
  Index count = 0;
  for (Index i = 0; i < model.eigenvalues.size(); ++i)
    if (model.eigenvalues[i] > 1.0) ++count;
  return count > 0 ? count : 1;
}

Matrix transform(const PcaModel& model, const Dataset& ds) {
  const Index m = model.means.size();
  if (ds.n_attrs() != m)
    throw SchemaError("transform: dataset has " + std::to_string(ds.n_attrs()) +
                      " attributes, model expects " + std::to_string(m));
  if (model.retained < 1 || model.retained > m)
    throw ConfigError("transform: retained component count outside [1, " +
                      std::to_string(m) + "]");

  Matrix z(ds.n_rows(), m);
  for (Index i = 0; i < ds.n_rows(); ++i)
    for (Index j = 0; j < m; ++j)
      z(i, j) = ds.missing()(i, j)
                    ? 0.0
                    : (ds.values()(i, j) - model.means[j]) / model.scales[j];
  return z * model.eigenvectors.leftCols(model.retained);
}

Matrix inverse_transform(const PcaModel& model, const Matrix& t) {
  const Index m = model.means.size();
  if (t.cols() > m)
    throw SchemaError("inverse_transform: " + std::to_string(t.cols()) +
                      " component columns exceed model dimension " +
                      std::to_string(m));
  Matrix z = t * model.eigenvectors.leftCols(t.cols()).transpose();
  return (z.array().rowwise() * model.scales.transpose().array()).rowwise() +
         model.means.transpose().array();
}

Dataset component_dataset(const Matrix& t, const IntVector& labels) {
  std::vector<Attribute> schema;
  schema.reserve(static_cast<std::size_t>(t.cols()));
  for (Index j = 0; j < t.cols(); ++j)
    schema.push_back({"PC" + std::to_string(j + 1), AttributeKind::kContinuous, {}});
  BoolArray missing = BoolArray::Constant(t.rows(), t.cols(), false);
  return Dataset(std::move(schema), t, std::move(missing), labels);
}

std::string format_pca_model(const PcaModel& model) {
  std::ostringstream out;
  out << "dims " << model.means.size() << '\n';
  out << "retained " << model.retained << '\n';
  append_row(out, "means", model.means);
  append_row(out, "scales", model.scales);
  append_row(out, "eigenvalues", model.eigenvalues);
  for (Index k = 0; k < model.eigenvectors.cols(); ++k)
    append_row(out, "vector", model.eigenvectors.col(k));
  return out.str();
}

PcaModel parse_pca_model(const std::string& text) {
  std::istringstream in(text);
  expect_token(in, "dims");
  Index m = 0;
  if (!(in >> m) || m < 1)
    throw ParseError("parse_pca_model: bad dimension count");
  PcaModel model;
  expect_token(in, "retained");
  if (!(in >> model.retained) || model.retained < 1 || model.retained > m)
    throw ParseError("parse_pca_model: bad retained count");
  model.means = read_row(in, "means", m);
  model.scales = read_row(in, "scales", m);
  model.eigenvalues = read_row(in, "eigenvalues", m);
  model.eigenvectors.resize(m, m);
  for (Index k = 0; k < m; ++k)
    model.eigenvectors.col(k) = read_row(in, "vector", m);
  return model;
}

}  // namespace ripsel
