#include "igabem/dense_linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

void check_finite(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size()) throw ArgumentError("solve: matrix and right-hand side sizes differ");
  if (!A.allFinite() || !b.allFinite()) throw SolverError("solve: non-finite input");
}

}  // namespace

Eigen::VectorXd solve_square(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, SolveReport* report) {
  if (A.rows() != A.cols()) throw ArgumentError("solve_square: matrix is not square");
  check_finite(A, b);
  if (A.rows() == 0) return Eigen::VectorXd();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const auto& LU = lu.matrixLU();
  const double scale = A.cwiseAbs().maxCoeff();
  double min_pivot = std::abs(LU(0, 0));
  for (Eigen::Index k = 1; k < LU.rows(); ++k) min_pivot = std::min(min_pivot, std::abs(LU(k, k)));
  if (!(min_pivot > 1e-14 * scale)) {
    std::ostringstream msg;
    msg << "solve_square: numerically singular matrix (pivot " << min_pivot << ")";
    throw SolverError(msg.str());
  }
  Eigen::VectorXd x = lu.solve(b);
  if (report) {
    report->residual_inf = (A * x - b).cwiseAbs().maxCoeff();
    report->rcond_estimate = lu.rcond();
    report->ill_conditioned = report->rcond_estimate < 1e-12;
    if (report->ill_conditioned) report->warning = "condition number estimate above 1e12";
  }
  return x;
}

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, SolveReport* report) {
  if (A.rows() < A.cols()) throw ArgumentError("solve_least_squares: fewer rows than columns");
  check_finite(A, b);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-13);
  if (qr.rank() < A.cols()) {
    std::ostringstream msg;
    msg << "solve_least_squares: rank " << qr.rank() << " < " << A.cols();
    throw SolverError(msg.str());
  }
  Eigen::VectorXd x = qr.solve(b);
  if (report) {
    report->residual_inf = (A * x - b).cwiseAbs().maxCoeff();
    const auto R = qr.matrixR().topLeftCorner(A.cols(), A.cols()).diagonal().cwiseAbs();
    report->rcond_estimate = R.minCoeff() / R.maxCoeff();
    report->ill_conditioned = report->rcond_estimate < 1e-12;
    if (report->ill_conditioned) report->warning = "condition number estimate above 1e12";
  }
  return x;
}

double condition_estimate(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd;
  Eigen::VectorXd sv;
  if (A.rows() > 400) {
    Eigen::BDCSVD<Eigen::MatrixXd> bdc(A);
    sv = bdc.singularValues();
  } else {
    svd.compute(A);
    sv = svd.singularValues();
  }
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw ArgumentError("min_symmetric_eigenvalue: matrix is not square");
  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_eigenvalue_real_part(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw ArgumentError("min_eigenvalue_real_part: matrix is not square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) throw SolverError("min_eigenvalue_real_part: eigenvalue iteration failed");
  return es.eigenvalues().real().minCoeff();
}

}  // namespace igabem
