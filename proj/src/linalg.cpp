#include "kontact/linalg.hpp"

namespace kontact {

namespace {

int rank_from(const Eigen::VectorXd& sv, double rel_threshold) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_threshold * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

}  // namespace

int numeric_rank(const Eigen::MatrixXd& a, double rel_threshold) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return rank_from(svd.singularValues(), rel_threshold);
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double rel_threshold) {
  return solve_least_norm(a, Eigen::VectorXd::Zero(a.rows()), rel_threshold).null_basis;
}

LeastNormSolution solve_least_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                   double rel_threshold) {
  LeastNormSolution out;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) {
    out.x = Eigen::VectorXd::Zero(n);
    out.null_basis = Eigen::MatrixXd::Identity(n, n);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  out.rank = rank_from(sv, rel_threshold);
  out.largest_singular_value = sv.size() > 0 ? sv(0) : 0.0;
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < out.rank; ++i) out.x += v.col(i) * (u.col(i).dot(b) / sv(i));
  out.null_basis = v.rightCols(n - out.rank);
  out.residual = (a * out.x - b).norm();
  return out;
}

}  // namespace kontact
