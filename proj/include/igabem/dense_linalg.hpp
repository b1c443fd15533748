#pragma once

#include <Eigen/Core>
#include <string>

namespace igabem {

struct SolveReport {
  double residual_inf = 0.0;  // ||Ax - b||_inf
  double rcond_estimate = 0.0;
  bool ill_conditioned = false;  // estimated condition number above 1e12
  std::string warning;
};

// LU with partial pivoting.
Eigen::VectorXd solve_square(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, SolveReport* report = nullptr);

// Householder QR with column pivoting; rejects rank-deficient A.
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                    SolveReport* report = nullptr);

// 2-norm condition number sigma_max / sigma_min from a full SVD.
double condition_estimate(const Eigen::MatrixXd& A);

// Smallest eigenvalue of the symmetric part (A + A^T)/2; positive iff x^T A x > 0 for all x != 0.
double min_symmetric_eigenvalue(const Eigen::MatrixXd& A);

// Smallest real part over the (possibly complex) eigenvalues of A.
double min_eigenvalue_real_part(const Eigen::MatrixXd& A);

}  // namespace igabem
