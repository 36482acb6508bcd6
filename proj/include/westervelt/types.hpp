#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace westervelt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

}  // namespace westervelt
