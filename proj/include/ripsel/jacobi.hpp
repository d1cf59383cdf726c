#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ripsel/errors.hpp"
#include "ripsel/types.hpp"

namespace ripsel {

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // column i pairs with values[i]
};

template <typename Derived>
Real off_diagonal_norm(const Eigen::MatrixBase<Derived>& a) {
  Real sum = 0.0;
  for (Index p = 0; p < a.rows(); ++p)
    for (Index q = 0; q < a.cols(); ++q)
      if (p != q) sum += static_cast<Real>(a(p, q)) * static_cast<Real>(a(p, q));
  return std::sqrt(sum);
}

// Eigendecomposition of a dense symmetric matrix by cyclic Jacobi rotations.
// Sweeps until the off-diagonal Frobenius norm drops below tol; eigenvalues
// come back sorted descending, and each eigenvector has its largest-magnitude
// entry forced positive so the decomposition is unique.
template <typename Derived>
EigenDecomposition eigen_symmetric(const Eigen::MatrixBase<Derived>& input,
                                   Real tol = 1e-10, int max_sweeps = 100) {
  const Index m = input.rows();
  if (m != input.cols())
    throw NumericError("eigen_symmetric: matrix is not square");

  Matrix a = input.template cast<Real>();
  Matrix v = Matrix::Identity(m, m);

  int sweep = 0;
  while (off_diagonal_norm(a) >= tol) {
    if (++sweep > max_sweeps)
      throw NumericError("eigen_symmetric: off-diagonal norm still " +
                         std::to_string(off_diagonal_norm(a)) + " after " +
                         std::to_string(max_sweeps) + " sweeps");
    for (Index p = 0; p + 1 < m; ++p) {
      for (Index q = p + 1; q < m; ++q) {
        const Real apq = a(p, q);
        if (apq == 0.0) continue;
        const Real theta = (a(q, q) - a(p, p)) / (2 * apq);
        Real t;
        if (std::abs(theta) > 1e150) {
          t = 1 / (2 * theta);  // theta^2 would overflow
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1));
        }
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real s = t * c;

        // A := G^T A G and V := V G with the Givens rotation in plane (p,q).
        for (Index i = 0; i < m; ++i) {
          const Real aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (Index i = 0; i < m; ++i) {
          const Real api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (Index i = 0; i < m; ++i) {
          const Real vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(m);
  out.vectors.resize(m, m);
  for (Index k = 0; k < m; ++k) {
    out.values[k] = a(order[static_cast<std::size_t>(k)],
                      order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  for (Index k = 0; k < m; ++k) {
    Index imax = 0;
    for (Index i = 1; i < m; ++i)
      if (std::abs(out.vectors(i, k)) > std::abs(out.vectors(imax, k))) imax = i;
    if (m > 0 && out.vectors(imax, k) < 0) out.vectors.col(k) *= -1;
  }
  return out;
}

}  // namespace ripsel
