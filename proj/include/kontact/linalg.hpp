#ifndef KONTACT_LINALG_HPP
#define KONTACT_LINALG_HPP

#include <Eigen/Dense>

namespace kontact {

/// Singular values above rel_threshold * largest count towards the rank.
int numeric_rank(const Eigen::MatrixXd& a, double rel_threshold);

/// Orthonormal basis of ker a, one column per direction.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double rel_threshold);

struct LeastNormSolution {
  Eigen::VectorXd x;          // minimises |a x - b|, then |x|
  Eigen::MatrixXd null_basis;  // orthonormal columns spanning ker a
  int rank = 0;
  double residual = 0.0;  // |a x - b|
  double largest_singular_value = 0.0;
};

LeastNormSolution solve_least_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                   double rel_threshold);

}  // namespace kontact

#endif  // KONTACT_LINALG_HPP
