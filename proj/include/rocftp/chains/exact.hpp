#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "rocftp/core.hpp"

namespace rocftp::chains {

/// Sparse one-step transition matrix P (rows sum to 1) of a finite chain.
template <FiniteChain C>
Eigen::SparseMatrix<double> transition_matrix(const C& chain) {
  const std::size_t n = chain.num_states();
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, p] : chain.transition_row(i)) {
      entries.emplace_back(static_cast<int>(i), static_cast<int>(j), p);
    }
  }
  Eigen::SparseMatrix<double> P(static_cast<int>(n), static_cast<int>(n));
  P.setFromTriplets(entries.begin(), entries.end());  // duplicates are summed
  return P;
}

/// Stationary distribution: the left eigenvector of P for eigenvalue 1,
/// solved as (P^T - I) pi = 0 with one row replaced by sum(pi) = 1.
template <FiniteChain C>
std::vector<double> exact_stationary(const C& chain, std::size_t max_states = 10'000) {
  const std::size_t n = chain.num_states();
  if (n > max_states) throw std::length_error("chain too large for exact_stationary");
  const int m = static_cast<int>(n);

  const Eigen::SparseMatrix<double> P = transition_matrix(chain);
  Eigen::SparseMatrix<double> I(m, m);
  I.setIdentity();
  Eigen::SparseMatrix<double> A = Eigen::SparseMatrix<double>(P.transpose()) - I;

  std::vector<Eigen::Triplet<double>> entries;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      if (it.row() != m - 1) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int j = 0; j < m; ++j) entries.emplace_back(m - 1, j, 1.0);
  Eigen::SparseMatrix<double> system(m, m);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("exact_stationary: factorization failed (chain reducible?)");
  }
  Eigen::VectorXd pi = lu.solve(rhs);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, pi(static_cast<int>(i)));
  double total = 0.0;
  for (double v : out) total += v;
  for (double& v : out) v /= total;
  return out;
}

/// || pi P - pi ||_1
template <FiniteChain C>
double stationarity_residual(const C& chain, const std::vector<double>& pi) {
  const Eigen::SparseMatrix<double> P = transition_matrix(chain);
  Eigen::Map<const Eigen::VectorXd> v(pi.data(), static_cast<int>(pi.size()));
  const Eigen::VectorXd moved = P.transpose() * v;
  return (moved - v).lpNorm<1>();
}

}  // namespace rocftp::chains
