// Dense Hermitian eigendecomposition and the von Neumann entropy kernel.
// A thin layer over Eigen's SelfAdjointEigenSolver that adds the
// deterministic ordering and the PSD bookkeeping the density-matrix code
// relies on (stable golden files, clipped near-zero eigenvalues, nats).
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nuwalk/types.hpp"

namespace nuwalk {

template <typename Scalar>
struct Spectrum {
  VectorXr<Scalar> eigenvalues;   // sorted descending
  MatrixXc<Scalar> eigenvectors;  // orthonormal columns, same order
};

namespace detail {

// Make the first component of magnitude > 1e-9 real positive. A unit vector
// of dimension up to ~10^3 always has one, so the threshold never skips all.
template <typename Scalar>
void fix_column_phase(Eigen::Ref<VectorXc<Scalar>> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar m = std::abs(v[i]);
    if (m > Scalar(1e-9)) {
      v *= std::conj(v[i]) / m;
      return;
    }
  }
}

template <typename Scalar>
bool lex_less(const VectorXc<Scalar>& a, const VectorXc<Scalar>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

template <typename Scalar>
void check_hermitian(const MatrixXc<Scalar>& a, const char* who,
                     Scalar tol = Scalar(1e-12)) {
  Scalar worst = 0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Scalar d = std::abs(a(i, j) - std::conj(a(j, i)));
      if (d > worst) { worst = d; wi = i; wj = j; }
    }
  if (worst > tol) {
    std::ostringstream os;
    os << who << ": matrix is not Hermitian, entries (" << wi << "," << wj
       << ") and (" << wj << "," << wi << ") differ by " << worst;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace detail

// Eigenvalues descending; ties broken by ascending lexicographic comparison
// of the phase-normalized eigenvectors (first nonzero component real
// positive), so repeated eigenvalues still come out in one canonical order.
template <typename Derived>
Spectrum<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
hermitian_eigensystem(const Eigen::MatrixBase<Derived>& a_expr) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  MatrixXc<Scalar> a = a_expr.template cast<std::complex<Scalar>>();
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << "hermitian_eigensystem: matrix is " << a.rows() << "x" << a.cols()
       << ", expected square";
    throw std::invalid_argument(os.str());
  }
  detail::check_hermitian(a, "hermitian_eigensystem");

  Eigen::SelfAdjointEigenSolver<MatrixXc<Scalar>> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigensystem: eigensolver did not converge");

  const Eigen::Index n = a.rows();
  MatrixXc<Scalar> vecs = es.eigenvectors();
  VectorXr<Scalar> vals = es.eigenvalues();
  std::vector<VectorXc<Scalar>> cols(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    cols[static_cast<size_t>(j)] = vecs.col(j);
    detail::fix_column_phase<Scalar>(cols[static_cast<size_t>(j)]);
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (vals[i] != vals[j]) return vals[i] > vals[j];
    return detail::lex_less(cols[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
  });

  Spectrum<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues[j] = vals[order[static_cast<size_t>(j)]];
    out.eigenvectors.col(j) = cols[static_cast<size_t>(order[static_cast<size_t>(j)])];
  }
  return out;
}

// S = -sum lambda ln lambda in nats, with 0 ln 0 = 0. Eigenvalues in
// [-1e-10, 0) are clipped to zero (floating-point PSD drift); anything more
// negative means the input was not a density matrix and is an error, as is a
// trace further than 1e-8 from one.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho_expr) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  MatrixXc<Scalar> rho = rho_expr.template cast<std::complex<Scalar>>();
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("von_neumann_entropy: matrix must be square");
  const std::complex<Scalar> tr = rho.trace();
  if (std::abs(tr - std::complex<Scalar>(1)) > Scalar(1e-8)) {
    std::ostringstream os;
    os << "von_neumann_entropy: trace is " << tr.real();
    if (tr.imag() != Scalar(0)) os << (tr.imag() < 0 ? "" : "+") << tr.imag() << "i";
    os << ", expected 1 within 1e-8";
    throw std::invalid_argument(os.str());
  }

  const Spectrum<Scalar> spec = hermitian_eigensystem(rho);
  Scalar s = 0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const Scalar lam = spec.eigenvalues[i];
    if (lam < Scalar(-1e-10)) {
      std::ostringstream os;
      os << "von_neumann_entropy: matrix is not PSD, eigenvalue " << lam;
      throw std::invalid_argument(os.str());
    }
    if (lam <= Scalar(0)) continue;
    s -= lam * std::log(lam);
  }
  return s;
}

// Max-entry magnitude of U^dagger U - I.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
unitarity_defect(const Eigen::MatrixBase<Derived>& u_expr) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  MatrixXc<Scalar> u = u_expr.template cast<std::complex<Scalar>>();
  if (u.rows() != u.cols())
    throw std::invalid_argument("unitarity_defect: matrix must be square");
  MatrixXc<Scalar> g = u.adjoint() * u;
  g -= MatrixXc<Scalar>::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

// Max-entry magnitude of A - A^dagger.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
hermiticity_defect(const Eigen::MatrixBase<Derived>& a_expr) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  MatrixXc<Scalar> a = a_expr.template cast<std::complex<Scalar>>();
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermiticity_defect: matrix must be square");
  return (a - a.adjoint().eval()).cwiseAbs().maxCoeff();
}

}  // namespace nuwalk
