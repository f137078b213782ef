#include "dualconv/linalg.hpp"

#include <cmath>

namespace dualconv {

CMatrix expm(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix scaled = a / std::ldexp(1.0, squarings);

  CMatrix result = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

PsdResult psd_check(const CMatrix& m, double tol) {
  PsdResult r;
  if (m.rows() == 0) return r;
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::ComputationError, "eigenvalue solver did not converge");
  r.min_eigenvalue = solver.eigenvalues()(0);
  const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  r.tolerance = tol * scale;
  r.psd = r.min_eigenvalue >= -r.tolerance;
  r.witness = solver.eigenvectors().col(0);
  return r;
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace dualconv
