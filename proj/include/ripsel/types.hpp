#pragma once

#include <Eigen/Core>

namespace ripsel {

using Real = double;
using Index = Eigen::Index;

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using IntVector = Eigen::Matrix<int, Eigen::Dynamic, 1>;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace ripsel
