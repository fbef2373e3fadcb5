#pragma once

#include <Eigen/Dense>

namespace qrst {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace qrst
