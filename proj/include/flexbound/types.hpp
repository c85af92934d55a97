#pragma once

#include <Eigen/Core>

#include <complex>

namespace flexbound {

using Scalar = double;
using Index = Eigen::Index;

using Vec = Eigen::VectorX<Scalar>;
using Mat = Eigen::MatrixX<Scalar>;
using Complex = std::complex<Scalar>;
using CVec = Eigen::VectorX<Complex>;

using BoolVec = Eigen::Array<bool, Eigen::Dynamic, 1>;
using BoolMat = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace flexbound
