#pragma once

#include <Eigen/Dense>

#include <vector>

namespace oscloc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

using BusId = int;
using BusIds = std::vector<BusId>;

}  // namespace oscloc
