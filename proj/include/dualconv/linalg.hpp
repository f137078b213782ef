#pragma once

#include <Eigen/Dense>

#include "dualconv/core.hpp"

namespace dualconv {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Matrix exponential by scaling and squaring with a Taylor kernel.
CMatrix expm(const CMatrix& a);

struct PsdResult {
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;  // effective (norm-scaled) tolerance
  bool psd = true;
  CVector witness;  // eigenvector of the smallest eigenvalue
};

/// Smallest eigenvalue test of the Hermitian part of m; the tolerance is
/// scaled by max(1, ||m||).
PsdResult psd_check(const CMatrix& m, double tol);

/// max |m - m^†|.
double hermitian_defect(const CMatrix& m);

}  // namespace dualconv
