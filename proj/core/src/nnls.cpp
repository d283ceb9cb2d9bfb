#include "qnd/nnls.hpp"

#include <algorithm>
#include <vector>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
  const Eigen::VectorXd s = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t c = 0; c < cols.size(); ++c) full(cols[c]) = s(static_cast<Eigen::Index>(c));
  return full;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol, std::size_t max_iterations) {
  if (a.rows() != b.size()) throw InvalidInput("nnls: dimension mismatch");
  const auto n = a.cols();
  if (max_iterations == 0) max_iterations = 3 * static_cast<std::size_t>(std::max<Eigen::Index>(n, 1));

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd grad = a.transpose() * (b - a * out.x);

  auto entering = [&]() -> Eigen::Index {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)] || grad(j) <= tol) continue;
      if (best < 0 || grad(j) > grad(best)) best = j;
    }
    return best;
  };

  while (out.iterations < max_iterations) {
    const Eigen::Index t = entering();
    if (t < 0) {
      out.converged = true;
      break;
    }
    ++out.iterations;
    passive[static_cast<std::size_t>(t)] = true;

    for (;;) {
      Eigen::VectorXd s = solve_passive(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) feasible = false;
      if (feasible) {
        out.x = std::move(s);
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) alpha = std::min(alpha, out.x(j) / (out.x(j) - s(j)));
      }
      out.x += alpha * (s - out.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && out.x(j) <= 0.0) {
          passive[static_cast<std::size_t>(j)] = false;
          out.x(j) = 0.0;
        }
      }
      if (std::none_of(passive.begin(), passive.end(), [](bool p) { return p; })) break;
    }
    grad = a.transpose() * (b - a * out.x);
  }

  out.kkt_residual = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = passive[static_cast<std::size_t>(j)] ? std::abs(grad(j)) : std::max(0.0, grad(j));
    out.kkt_residual = std::max(out.kkt_residual, v);
  }
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

}  // namespace qnd
