#pragma once

#include <Eigen/Dense>

namespace procal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace procal
