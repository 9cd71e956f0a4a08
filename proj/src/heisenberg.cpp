#include "aq/heisenberg.hpp"

#include <Eigen/Eigenvalues>

namespace aq {

std::optional<std::string> compatibility_failure(const Matrix<double>& omega, const Matrix<double>& J, double tol) {
  const Eigen::Index d = omega.rows();
  if (J.rows() != d || J.cols() != d) return "shape";
  if ((J * J + Matrix<double>::Identity(d, d)).norm() > tol) return "J^2 = -I";
  if ((J.transpose() * omega * J - omega).norm() > tol) return "omega(J.,J.) = omega";
  const Matrix<double> g = J.transpose() * omega;
  if ((g - g.transpose()).norm() > tol) return "omega(J.,.) symmetric";
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(0.5 * (g + g.transpose()));
  if (es.eigenvalues().minCoeff() <= tol) return "omega(J.,.) positive definite";
  return std::nullopt;
}

HomogeneousSymbol ground_state_symbol(const OsculatingFiber<double>& F, const Matrix<double>& J) {
  if (auto failure = compatibility_failure(F.omega, J))
    throw PreconditionError("ground_state_symbol: J fails compatibility check `" + *failure + "`");
  HomogeneousSymbol::Gaussian g{F.omega, J, J.transpose() * F.omega};
  g.Q = 0.5 * (g.Q + g.Q.transpose()).eval();
  const Matrix<double> Q = g.Q;
  auto eval = [Q](const Vector<double>& xi, double eta) {
    if (xi.size() != Q.rows()) throw ChartMismatch("ground-state symbol: point dimension differs from fiber");
    if (eta > 0) return std::exp(-xi.dot(Q * xi) / eta);
    if (eta < 0 || !xi.isZero()) return 0.0;
    throw PreconditionError("ground-state symbol: undefined at the origin");
  };
  return HomogeneousSymbol(0, eval, std::move(g));
}

} // namespace aq
