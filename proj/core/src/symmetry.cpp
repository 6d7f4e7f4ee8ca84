#include "specloc/symmetry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "specloc/signature.hpp"

namespace specloc {

namespace {

void check_sign(int s, const char* name) {
  if (s != 1 && s != -1) throw std::invalid_argument(std::string("sign ") + name + " must be +1 or -1");
}

double sparse_max_abs(const CSparse& m) {
  double mx = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (CSparse::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
  return mx;
}

// Grading factor σ₁^{(1−s_A)/2} σ₃^{(1−s_A s_D)/2}.
RMatrix grading_factor(int s_A, int s_D) {
  RMatrix g = RMatrix::Identity(2, 2);
  RMatrix s1(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s3 << 1, 0, 0, -1;
  if (s_A == -1) g = g * s1;
  if (s_A * s_D == -1) g = g * s3;
  return g;
}

}  // namespace

std::string to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::Z: return "Z";
    case InvariantKind::TwoZ: return "2Z";
    case InvariantKind::Z2: return "Z2";
    default: return "trivial";
  }
}

SignPair operator_signs(int j) {
  int jm = ((j % 8) + 8) % 8;
  if (jm == 0) jm = 8;
  switch (jm) {
    case 2: return {-1, +1};
    case 4: return {+1, -1};
    case 6: return {-1, -1};
    case 8: return {+1, +1};
    default: throw std::invalid_argument("operator_signs: j must be even, got " + std::to_string(j));
  }
}

SymmetryClass classify(int s_D, int s_prime_D, int s_A, int s_prime_A) {
  check_sign(s_D, "s_D");
  check_sign(s_prime_D, "s'_D");
  check_sign(s_A, "s_A");
  check_sign(s_prime_A, "s'_A");
  SymmetryClass c;
  c.s_L = s_A * s_D;
  c.s_prime_L = s_prime_D * s_prime_A * (s_D == 1 ? s_A : 1);
  if (c.s_L == 1) c.kind = c.s_prime_L == 1 ? InvariantKind::Z : InvariantKind::TwoZ;
  else c.kind = c.s_prime_L == 1 ? InvariantKind::Z2 : InvariantKind::Trivial;
  return c;
}

SymmetryClass classify_dj(int d, int j) {
  const SignPair D = dirac_signs(d);
  const SignPair A = operator_signs(j);
  return classify(D.s, D.s_prime, A.s, A.s_prime);
}

RealSymmetryData make_symmetry_data(const CliffordRep& rep, int N, const SymmetryOperator& sym) {
  check_sign(sym.s_A, "s_A");
  check_sign(sym.s_prime_A, "s'_A");
  if (N % rep.nu != 0) throw std::invalid_argument("make_symmetry_data: N must be a multiple of nu");
  if (sym.S.rows() != N || sym.S.cols() != N) throw std::invalid_argument("make_symmetry_data: S must be N x N");
  RealSymmetryData data;
  const Index m = N / rep.nu;
  data.sigma = kron(rep.sigma, RMatrix(RMatrix::Identity(m, m)));
  data.S = sym.S;
  data.s_D = rep.sign_D;
  data.s_prime_D = rep.sign_prime_D;
  data.s_A = sym.s_A;
  data.s_prime_A = sym.s_prime_A;
  return data;
}

double SymmetryResiduals::max() const {
  return std::max({S_squared, sigma_S, S_dirac, sigma_A, operator_relation});
}

SymmetryResiduals check_symmetry(const RealSymmetryData& data, const HoppingOperator& op, const CliffordRep& rep,
                                 const LatticeBall* probe) {
  const Index N = op.fiber_dim();
  if (data.S.rows() != N || data.sigma.rows() != N)
    throw std::invalid_argument("check_symmetry: symmetry data does not match the fiber dimension");
  SymmetryResiduals res;
  const RMatrix id = RMatrix::Identity(N, N);
  res.S_squared = operator_norm(RMatrix(data.S * data.S - double(data.s_prime_A) * id));
  res.sigma_S = operator_norm(RMatrix(data.S * data.sigma - data.sigma * data.S));
  const Index m = N / rep.nu;
  const CMatrix S = data.S.cast<cplx>();
  const CMatrix Sig = data.sigma.cast<cplx>();
  for (const auto& g : rep.gammas) {
    const CMatrix gt = kron(g, CMatrix::Identity(m, m));
    res.S_dirac = std::max(res.S_dirac, operator_norm(CMatrix(S * gt - gt * S)));
  }

  // Coefficient of A^{[s_A]} at displacement r and site n.
  const HoppingOperator star = adjoint(op);
  auto relation_at = [&](std::span<const int> site, std::size_t h) {
    const auto& r = op.hoppings()[h].r;
    const CMatrix A = op.coefficient(h, site);
    res.sigma_A = std::max(res.sigma_A, operator_norm(CMatrix(Sig * A - A * Sig)));
    const CMatrix lhs = S.transpose() * A.conjugate() * S;
    CMatrix rhs = CMatrix::Zero(N, N);
    if (data.s_A == 1) {
      rhs = A;
    } else {
      for (std::size_t k = 0; k < star.hoppings().size(); ++k)
        if (star.hoppings()[k].r == r) rhs = star.coefficient(k, site);
    }
    res.operator_relation = std::max(res.operator_relation, operator_norm(CMatrix(lhs - rhs)));
  };
  // Displacements present only in A^{[s_A]} must vanish on the other side.
  auto missing_at = [&](std::span<const int> site) {
    if (data.s_A == 1) return;
    for (std::size_t k = 0; k < star.hoppings().size(); ++k) {
      bool found = false;
      for (const auto& h : op.hoppings()) found = found || h.r == star.hoppings()[k].r;
      if (!found) res.operator_relation = std::max(res.operator_relation, operator_norm(star.coefficient(k, site)));
    }
  };

  if (op.translation_invariant()) {
    const std::vector<int> origin(static_cast<std::size_t>(op.dimension()), 0);
    for (std::size_t h = 0; h < op.hoppings().size(); ++h) relation_at(origin, h);
    missing_at(origin);
  } else {
    if (!probe) throw std::invalid_argument("check_symmetry: site-dependent operator needs a probe ball");
    for (std::size_t s = 0; s < probe->size(); ++s) {
      for (std::size_t h = 0; h < op.hoppings().size(); ++h) relation_at(probe->site(s), h);
      missing_at(probe->site(s));
    }
  }
  return res;
}

RSparse build_R(const RealSymmetryData& data, std::size_t site_count) {
  const Index N = data.S.rows();
  const RMatrix fiber = data.sigma * data.S;
  const RMatrix grading = grading_factor(data.s_A, data.s_D);
  const Index half = N * static_cast<Index>(site_count);
  std::vector<Eigen::Triplet<double, Index>> trips;
  for (Index gi = 0; gi < 2; ++gi)
    for (Index gj = 0; gj < 2; ++gj) {
      if (grading(gi, gj) == 0.0) continue;
      for (std::size_t s = 0; s < site_count; ++s)
        for (Index a = 0; a < N; ++a)
          for (Index b = 0; b < N; ++b) {
            const double v = grading(gi, gj) * fiber(a, b);
            if (v != 0.0)
              trips.emplace_back(gi * half + static_cast<Index>(s) * N + a, gj * half + static_cast<Index>(s) * N + b, v);
          }
    }
  RSparse R(2 * half, 2 * half);
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

double verify_symmetry(const CSparse& L, const RSparse& R, int s_L) {
  if (L.rows() != R.rows()) throw std::invalid_argument("verify_symmetry: dimension mismatch");
  check_sign(s_L, "s_L");
  const CSparse Rc = R.cast<cplx>();
  const CSparse diff = CSparse(Rc.transpose()) * CSparse(L.conjugate()) * Rc - cplx(double(s_L)) * L;
  return diff.norm();
}

double verify_symmetry(const LocalizerMatrix& L, const RSparse& R, int s_L) { return verify_symmetry(L.matrix, R, s_L); }

CSparse square_root_R(const RSparse& R, RootBranch branch) {
  const Index n = R.rows();
  const RSparse R2 = R * R;
  RSparse id(n, n);
  id.setIdentity();
  if ((R2 - id).norm() > 1e-12 * std::sqrt(double(n)))
    throw std::invalid_argument("square_root_R: R^2 must be the identity");
  const cplx phase = branch == RootBranch::First ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
  // M = (1 + R)/2 + phase·(1 − R)/2.
  const CSparse Rc = R.cast<cplx>();
  const CSparse idc = id.cast<cplx>();
  return CSparse(0.5 * (idc + Rc) + (0.5 * phase) * (idc - Rc));
}

RMatrix z2_matrix(const LocalizerMatrix& L, const RSparse& R, double tol, RootBranch branch) {
  const CSparse M = square_root_R(R, branch);
  const CSparse Mh = M.adjoint();
  const CMatrix K = cplx(0.0, 1.0) * CMatrix(M * L.matrix * Mh);
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  if (K.imag().cwiseAbs().maxCoeff() > tol * scale) throw Error("z2_matrix: iMLM* is not real (inconsistent symmetry)");
  const RMatrix Kr = K.real();
  if ((Kr + Kr.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw Error("z2_matrix: iMLM* is not antisymmetric (inconsistent symmetry)");
  return (Kr - Kr.transpose()) / 2.0;
}

int z2_invariant(const LocalizerMatrix& L, const RSparse& R, double tol, RootBranch branch) {
  return pfaffian_sign(z2_matrix(L, R, tol, branch), tol);
}

RSparse realify(const LocalizerMatrix& L, const RSparse& R, double tol) {
  const CSparse M = square_root_R(R, RootBranch::First);
  const CSparse K = M * L.matrix * CSparse(M.adjoint());
  const double scale = std::max(1.0, sparse_max_abs(K));
  RSparse out = K.real();
  const RSparse im = K.imag();
  double imax = 0.0;
  for (Index k = 0; k < im.outerSize(); ++k)
    for (RSparse::InnerIterator it(im, k); it; ++it) imax = std::max(imax, std::abs(it.value()));
  if (imax > tol * scale) throw Error("realify: MLM* is not real (inconsistent symmetry)");
  out.prune(0.0);
  return out;
}

}  // namespace specloc
