#include "specloc/signature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/SparseLU>

#include "dense_lapack.hpp"

namespace specloc {

namespace {

template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& H) {
  if (H.size() == 0) return 0.0;
  return H.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& H, const char* who) {
  if (H.rows() != H.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (H.size() == 0) return;
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

template <typename Matrix>
Inertia factor_inertia(const Matrix& H, std::optional<double> tol_opt) {
  require_hermitian(H, "inertia");
  const double tol = tol_opt.value_or(default_zero_tolerance(H));
  if (tol < 0) throw std::invalid_argument("inertia: tolerance must be non-negative");
  Inertia out;
  out.tol = tol;
  const Index n = H.rows();
  if (tol == 0.0) {
    Matrix a = H;
    const auto c = detail::bunch_kaufman_inertia(a);
    out.n_plus = c.plus;
    out.n_minus = c.minus;
    out.n_zero = c.zero;
    return out;
  }
  Matrix a = H;
  a.diagonal().array() -= tol;
  out.n_plus = detail::bunch_kaufman_inertia(a).plus;
  a = H;
  a.diagonal().array() += tol;
  out.n_minus = detail::bunch_kaufman_inertia(a).minus;
  out.n_zero = n - out.n_plus - out.n_minus;
  return out;
}

Inertia count_eigenvalues(const RVector& eig, double tol) {
  Inertia out;
  out.tol = tol;
  for (Index i = 0; i < eig.size(); ++i) {
    if (eig(i) > tol) ++out.n_plus;
    else if (eig(i) < -tol) ++out.n_minus;
    else ++out.n_zero;
  }
  return out;
}

template <typename Scalar>
Inertia structured_impl(const Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>& H, const BlockPartition& part,
                        double shift) {
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = H.rows();
  if (H.cols() != n) throw std::invalid_argument("structured_inertia: matrix must be square");
  const std::size_t nb = part.blocks.size();
  if (!part.rank.empty() && part.rank.size() != nb)
    throw std::invalid_argument("structured_inertia: one rank per block required");

  std::vector<int> block_of(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < nb; ++b)
    for (Index i : part.blocks[b]) {
      if (i < 0 || i >= n || block_of[static_cast<std::size_t>(i)] != -1)
        throw std::invalid_argument("structured_inertia: blocks must partition the index range");
      block_of[static_cast<std::size_t>(i)] = static_cast<int>(b);
    }
  if (std::find(block_of.begin(), block_of.end(), -1) != block_of.end())
    throw std::invalid_argument("structured_inertia: blocks must partition the index range");

  {
    const Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index> diff = H - Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>(H.adjoint());
    double mx = 0.0, dm = 0.0;
    for (Index k = 0; k < H.outerSize(); ++k)
      for (typename Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>::InnerIterator it(H, k); it; ++it)
        mx = std::max(mx, std::abs(it.value()));
    for (Index k = 0; k < diff.outerSize(); ++k)
      for (typename Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>::InnerIterator it(diff, k); it; ++it)
        dm = std::max(dm, std::abs(it.value()));
    if (dm > 1e-12 * std::max(1.0, mx)) throw std::invalid_argument("structured_inertia: matrix is not Hermitian");
  }

  // Column abs sums bound ‖H‖; neighbour blocks from the sparsity pattern.
  double scale = 0.0;
  std::vector<std::vector<int>> nbr(nb);
  for (Index k = 0; k < H.outerSize(); ++k) {
    double colsum = 0.0;
    const int bk = block_of[static_cast<std::size_t>(k)];
    for (typename Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>::InnerIterator it(H, k); it; ++it) {
      colsum += std::abs(it.value());
      const int bi = block_of[static_cast<std::size_t>(it.row())];
      if (bi != bk && it.value() != Scalar(0)) nbr[static_cast<std::size_t>(bk)].push_back(bi);
    }
    scale = std::max(scale, colsum);
  }
  for (auto& v : nbr) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  const double thresh = 1e-3 * std::max(scale + std::abs(shift), std::numeric_limits<double>::min());

  std::vector<std::size_t> order(nb);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!part.rank.empty())
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return part.rank[a] < part.rank[b]; });

  auto dense_block = [&](const std::vector<Index>& idx, const std::vector<Index>& jdx) {
    Dense B = Dense::Zero(static_cast<Index>(idx.size()), static_cast<Index>(jdx.size()));
    for (std::size_t j = 0; j < jdx.size(); ++j)
      for (std::size_t i = 0; i < idx.size(); ++i) B(static_cast<Index>(i), static_cast<Index>(j)) = H.coeff(idx[i], jdx[j]);
    return B;
  };

  Inertia total;
  std::vector<char> eliminated(nb, 0), blocked(nb, 0);
  std::vector<Dense> inverse(nb);
  for (std::size_t b : order) {
    if (blocked[b]) continue;
    const auto& idx = part.blocks[b];
    Dense B = dense_block(idx, idx);
    B.diagonal().array() -= shift;
    Eigen::SelfAdjointEigenSolver<Dense> es(B);
    const RVector& ev = es.eigenvalues();
    if (ev.size() == 0 || ev.cwiseAbs().minCoeff() < thresh) continue;
    eliminated[b] = 1;
    for (int nbb : nbr[b]) blocked[static_cast<std::size_t>(nbb)] = 1;
    for (Index i = 0; i < ev.size(); ++i) (ev(i) > 0 ? total.n_plus : total.n_minus) += 1;
    inverse[b] = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  }

  std::vector<Index> kept;
  std::vector<Index> pos(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i)
    if (!eliminated[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])]) {
      pos[static_cast<std::size_t>(i)] = static_cast<Index>(kept.size());
      kept.push_back(i);
    }

  const Index nk = static_cast<Index>(kept.size());
  Dense S = Dense::Zero(nk, nk);
  for (Index c = 0; c < nk; ++c)
    for (typename Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>::InnerIterator it(H, kept[static_cast<std::size_t>(c)]); it; ++it) {
      const Index r = pos[static_cast<std::size_t>(it.row())];
      if (r >= 0) S(r, c) = it.value();
    }
  S.diagonal().array() -= shift;

  for (std::size_t b = 0; b < nb; ++b) {
    if (!eliminated[b]) continue;
    const auto& idx = part.blocks[b];
    std::vector<Index> rows;
    for (Index j : idx)
      for (typename Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>::InnerIterator it(H, j); it; ++it)
        if (pos[static_cast<std::size_t>(it.row())] >= 0) rows.push_back(it.row());
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.empty()) continue;
    const Dense C = dense_block(rows, idx);
    const Dense U = C * inverse[b] * C.adjoint();
    for (std::size_t j = 0; j < rows.size(); ++j)
      for (std::size_t i = 0; i < rows.size(); ++i)
        S(pos[static_cast<std::size_t>(rows[i])], pos[static_cast<std::size_t>(rows[j])]) -= U(static_cast<Index>(i), static_cast<Index>(j));
  }

  const auto c = detail::bunch_kaufman_inertia(S);
  total.n_plus += c.plus;
  total.n_minus += c.minus;
  total.n_zero += c.zero;
  return total;
}

struct PfaffianParts {
  int sign = 1;
  double log_abs = 0.0;
};

PfaffianParts householder_pfaffian(RMatrix K) {
  const Index n = K.rows();
  PfaffianParts out;
  if (n % 2 != 0) {
    out.sign = 0;
    return out;
  }
  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    RVector x = K.col(k).tail(m);
    RVector ess(m - 1);
    double tau = 0.0, beta = 0.0;
    x.makeHouseholder(ess, tau, beta);
    if (tau == 0.0) continue;
    RVector v(m);
    v(0) = 1.0;
    v.tail(m - 1) = ess;
    auto T = K.bottomRightCorner(m, m);
    const RVector w = T * v;
    T.noalias() += tau * (v * w.transpose() - w * v.transpose());
    K.col(k).tail(m).setZero();
    K.row(k).tail(m).setZero();
    K(k + 1, k) = beta;
    K(k, k + 1) = -beta;
    out.sign = -out.sign;
  }
  for (Index i = 0; i < n; i += 2) {
    const double t = K(i, i + 1);
    if (t == 0.0) {
      out.sign = 0;
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;
    }
    if (t < 0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(t));
  }
  return out;
}

template <typename Scalar>
double lanczos_min_abs(const Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>& H) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Sp = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>;
  const Index n = H.rows();
  Eigen::SparseLU<Sp, Eigen::COLAMDOrdering<Index>> lu;
  lu.compute(H);
  if (lu.info() != Eigen::Success) return 0.0;

  // Lanczos on H⁻¹ with full reorthogonalisation; the largest |θ| gives 1/min|λ|.
  const Index max_steps = std::min<Index>(n, 400);
  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  Vec q = Vec::Ones(n) / std::sqrt(double(n));
  for (Index i = 0; i < n; ++i) q(i) *= Scalar(1.0 + 0.37 * std::sin(1.7 * double(i)));
  q.normalize();
  double best = 0.0;
  for (Index step = 0; step < max_steps; ++step) {
    basis.push_back(q);
    Vec w = lu.solve(q);
    const double a = std::real(q.dot(w));
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b * b.dot(w);
    const double bnorm = w.norm();
    const Index m = static_cast<Index>(alpha.size());
    RMatrix T = RMatrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(T);
    Index arg = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&arg);
    const double theta = std::abs(es.eigenvalues()(arg));
    const double resid = bnorm * std::abs(es.eigenvectors()(m - 1, arg));
    best = theta;
    if (bnorm < 1e-14 * std::max(1.0, theta) || (m >= 8 && resid < 1e-10 * theta)) break;
    beta.push_back(bnorm);
    q = w / bnorm;
  }
  if (best == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / best;
}

}  // namespace

double default_zero_tolerance(const CMatrix& H) {
  return double(H.rows()) * std::numeric_limits<double>::epsilon() * inf_norm(H);
}

double default_zero_tolerance(const RMatrix& H) {
  return double(H.rows()) * std::numeric_limits<double>::epsilon() * inf_norm(H);
}

Inertia inertia(const CMatrix& H, std::optional<double> tol) { return factor_inertia(H, tol); }
Inertia inertia(const RMatrix& H, std::optional<double> tol) { return factor_inertia(H, tol); }

Inertia eigen_inertia(const CMatrix& H, std::optional<double> tol) {
  require_hermitian(H, "eigen_inertia");
  return count_eigenvalues(hermitian_eigenvalues(H), tol.value_or(default_zero_tolerance(H)));
}

Inertia eigen_inertia(const RMatrix& H, std::optional<double> tol) {
  require_hermitian(H, "eigen_inertia");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(H, Eigen::EigenvaluesOnly);
  return count_eigenvalues(es.eigenvalues(), tol.value_or(default_zero_tolerance(H)));
}

Index half_signature(const Inertia& in) {
  if (in.n_zero > 0)
    throw NotInvertibleError("half_signature: " + std::to_string(in.n_zero) + " eigenvalue(s) within tolerance " +
                             std::to_string(in.tol) + " of zero");
  const Index sig = in.signature();
  if (sig % 2 != 0) throw OddSignatureError("half_signature: odd signature " + std::to_string(sig));
  return sig / 2;
}

Index half_signature(const CMatrix& H, std::optional<double> tol) { return half_signature(inertia(H, tol)); }

Inertia structured_inertia(const CSparse& H, const BlockPartition& part, double shift) {
  return structured_impl(H, part, shift);
}

Inertia structured_inertia(const RSparse& H, const BlockPartition& part, double shift) {
  return structured_impl(H, part, shift);
}

double pfaffian(const RMatrix& K) {
  if (K.rows() != K.cols()) throw std::invalid_argument("pfaffian: matrix must be square");
  const auto p = householder_pfaffian(K);
  if (p.sign == 0) return 0.0;
  return double(p.sign) * std::exp(p.log_abs);
}

int pfaffian_sign(const RMatrix& K, double tol) {
  const Index n = K.rows();
  if (K.cols() != n) throw std::invalid_argument("pfaffian_sign: matrix must be square");
  if (n % 2 != 0) throw std::invalid_argument("pfaffian_sign: odd dimension");
  if (n == 0) return 1;
  if ((K + K.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("pfaffian_sign: matrix is not antisymmetric within tolerance");
  const RMatrix A = (K - K.transpose()) / 2.0;
  Eigen::BDCSVD<RMatrix> svd(A);
  if (svd.singularValues()(n - 1) <= tol) throw NotInvertibleError("pfaffian_sign: matrix is singular at tolerance");
  const auto p = householder_pfaffian(A);
  if (p.sign == 0) throw NotInvertibleError("pfaffian_sign: zero Pfaffian");
  const double log_det = svd.singularValues().array().log().sum();
  if (std::abs(2.0 * p.log_abs - log_det) > 1e-8 * (double(n) + std::abs(log_det)))
    throw Error("pfaffian_sign: |Pf|^2 disagrees with det");
  return p.sign;
}

double min_abs_eigenvalue(const CSparse& H, Index dense_limit) {
  if (H.rows() == 0) return std::numeric_limits<double>::infinity();
  if (H.rows() <= dense_limit) return hermitian_eigenvalues(CMatrix(H)).cwiseAbs().minCoeff();
  return lanczos_min_abs(H);
}

double min_abs_eigenvalue(const RSparse& H, Index dense_limit) {
  if (H.rows() == 0) return std::numeric_limits<double>::infinity();
  if (H.rows() <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es{RMatrix(H), Eigen::EigenvaluesOnly};
    return es.eigenvalues().cwiseAbs().minCoeff();
  }
  return lanczos_min_abs(H);
}

RVector hermitian_eigenvalues(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace specloc
