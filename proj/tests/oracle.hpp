#pragma once

// Brute-force reference implementations used only by the tests. Nothing here
// calls into the library's numerics: local matrices come from the ladder
// formula, many-body operators from explicit Kronecker products, and reduced
// densities from index loops.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Local {
  MatrixXd sz, sp, sm, sx, isy;  // isy = i s^y, real
};

inline Local local_ops(int twice_s) {
  const int d = twice_s + 1;
  const double s = 0.5 * twice_s;
  Local l;
  l.sz = MatrixXd::Zero(d, d);
  l.sp = MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    l.sz(k, k) = k - s;
    if (k + 1 < d) l.sp(k + 1, k) = std::sqrt((k + 1.0) * (twice_s - k));
  }
  l.sm = l.sp.transpose();
  l.sx = 0.5 * (l.sp + l.sm);
  l.isy = 0.5 * (l.sp - l.sm);
  return l;
}

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Operator `op` on `site`, identity elsewhere; site 0 is the leftmost Kronecker factor.
inline MatrixXd embed(const std::vector<int>& twice_s, std::size_t site, const MatrixXd& op) {
  MatrixXd out = MatrixXd::Identity(1, 1);
  for (std::size_t k = 0; k < twice_s.size(); ++k) {
    out = kron(out, k == site ? op : MatrixXd::Identity(twice_s[k] + 1, twice_s[k] + 1));
  }
  return out;
}

/// H = sum_i b_i sz_i - 1/2 sum_{i,j} (vx sx sx + vy sy sy + vz sz sz), with the full double sum.
/// s^y s^y = -(i s^y)(i s^y), so everything stays real.
inline MatrixXd hamiltonian(const std::vector<int>& twice_s, const MatrixXd& vx, const MatrixXd& vy,
                            const MatrixXd& vz, const VectorXd& b) {
  const std::size_t n = twice_s.size();
  std::vector<MatrixXd> sx(n), isy(n), sz(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = local_ops(twice_s[i]);
    sx[i] = embed(twice_s, i, l.sx);
    isy[i] = embed(twice_s, i, l.isy);
    sz[i] = embed(twice_s, i, l.sz);
  }
  const Index dim = sz[0].rows();
  MatrixXd h = MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    h += b(static_cast<Index>(i)) * sz[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto ii = static_cast<Index>(i), jj = static_cast<Index>(j);
      h -= 0.5 * (vx(ii, jj) * sx[i] * sx[j] - vy(ii, jj) * isy[i] * isy[j] + vz(ii, jj) * sz[i] * sz[j]);
    }
  }
  return h;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Coherent state entry k = sqrt(C(2s,k)) cos^{2s-k}(theta/2) sin^k(theta/2).
inline VectorXd coherent(int twice_s, double theta) {
  VectorXd v(twice_s + 1);
  for (int k = 0; k <= twice_s; ++k) {
    v(k) = std::sqrt(binomial(twice_s, k)) * std::pow(std::cos(0.5 * theta), twice_s - k) *
           std::pow(std::sin(0.5 * theta), k);
  }
  return v;
}

inline VectorXd product(const std::vector<int>& twice_s, const std::vector<double>& theta) {
  VectorXd v = VectorXd::Ones(1);
  for (std::size_t i = 0; i < twice_s.size(); ++i) {
    const VectorXd c = coherent(twice_s[i], theta[i]);
    VectorXd next(v.size() * c.size());
    for (Index a = 0; a < v.size(); ++a)
      for (Index b = 0; b < c.size(); ++b) next(a * c.size() + b) = v(a) * c(b);
    v = next;
  }
  return v;
}

/// Digits of basis index x, site 0 most significant.
inline std::vector<int> digits(const std::vector<int>& dims, std::size_t x) {
  std::vector<int> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = static_cast<int>(x % static_cast<std::size_t>(dims[k]));
    x /= static_cast<std::size_t>(dims[k]);
  }
  return d;
}

/// rho_keep = tr_rest |psi><psi| by explicit double loop over basis pairs.
inline MatrixXd reduce(const std::vector<int>& dims, const VectorXd& psi, const std::vector<std::size_t>& keep) {
  Index dk = 1;
  for (auto k : keep) dk *= dims[k];
  MatrixXd rho = MatrixXd::Zero(dk, dk);
  const auto total = static_cast<std::size_t>(psi.size());
  auto keep_index = [&](const std::vector<int>& d) {
    Index r = 0;
    for (auto k : keep) r = r * dims[k] + d[k];
    return r;
  };
  auto same_rest = [&](const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      bool kept = false;
      for (auto q : keep) kept = kept || q == k;
      if (!kept && a[k] != b[k]) return false;
    }
    return true;
  };
  for (std::size_t x = 0; x < total; ++x) {
    if (psi(static_cast<Index>(x)) == 0.0) continue;
    const auto dx = digits(dims, x);
    for (std::size_t y = 0; y < total; ++y) {
      if (psi(static_cast<Index>(y)) == 0.0) continue;
      const auto dy = digits(dims, y);
      if (!same_rest(dx, dy)) continue;
      rho(keep_index(dx), keep_index(dy)) += psi(static_cast<Index>(x)) * psi(static_cast<Index>(y));
    }
  }
  return rho;
}

/// Partial transpose of a bipartite (da x db) density on the second factor.
inline MatrixXd transpose_second(const MatrixXd& rho, Index da, Index db) {
  MatrixXd out(rho.rows(), rho.cols());
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < db; ++b)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b2 = 0; b2 < db; ++b2) out(a * db + b, a2 * db + b2) = rho(a * db + b2, a2 * db + b);
  return out;
}

inline double negativity_second(const MatrixXd& rho, Index da, Index db) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(transpose_second(rho, da, db), Eigen::EigenvaluesOnly);
  double n = 0.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) n += std::max(0.0, -es.eigenvalues()(k));
  return n;
}

/// Textbook two-qubit concurrence via the non-Hermitian product rho (sy sy) rho* (sy sy).
inline double wootters(const MatrixXd& rho) {
  MatrixXd yy = MatrixXd::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const MatrixXd r = rho * yy * rho * yy;
  Eigen::EigenSolver<MatrixXd> es(r, false);
  std::vector<double> l;
  for (Index k = 0; k < 4; ++k) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(k).real())));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

/// Columns phi_r of psi = sum_r |phi_r>_{bc} |r>_{rest}, so that rho_bc = W W^T.
inline MatrixXd pair_ensemble(const std::vector<int>& dims, const VectorXd& psi, std::size_t b, std::size_t c) {
  Index rest_dim = 1;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (k != b && k != c) rest_dim *= dims[k];
  MatrixXd w = MatrixXd::Zero(dims[b] * dims[c], rest_dim);
  for (std::size_t x = 0; x < static_cast<std::size_t>(psi.size()); ++x) {
    const auto d = digits(dims, x);
    Index r = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (k != b && k != c) r = r * dims[k] + d[k];
    w(d[b] * dims[c] + d[c], r) += psi(static_cast<Index>(x));
  }
  return w;
}

/// Two-qubit concurrence from any decomposition rho = W W^T: the lambdas are the
/// singular values of W^T (sy x sy) W, so no square roots of small eigenvalues appear.
inline double wootters_ensemble(const MatrixXd& w) {
  MatrixXd yy = MatrixXd::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const MatrixXd tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<MatrixXd> svd(tau);
  VectorXd l = VectorXd::Zero(4);
  for (Index k = 0; k < std::min<Index>(4, svd.singularValues().size()); ++k) l(k) = svd.singularValues()(k);
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

}  // namespace oracle
