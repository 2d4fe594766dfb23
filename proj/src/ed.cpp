#include "sepspin/ed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace sepspin {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Krylov basis memory cap (bytes).
constexpr std::size_t kKrylovBudget = std::size_t{1} << 30;

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

}  // namespace

SectorGroundState ground_state(const ModelSpec& spec, Parity parity, const LanczosOptions& options) {
  const std::size_t total = spec.space().total_dim();
  if (total > options.max_dim) {
    throw std::length_error("state dimension " + std::to_string(total) + " exceeds budget " +
                            std::to_string(options.max_dim));
  }
  const HamiltonianAction h(spec, parity);
  const auto n = static_cast<Eigen::Index>(h.dim());

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd start(n);
  for (Eigen::Index r = 0; r < n; ++r) start(r) = uniform(rng);
  start.normalize();

  const auto memory_cap = static_cast<Eigen::Index>(
      std::max<std::size_t>(2, kKrylovBudget / (sizeof(double) * static_cast<std::size_t>(n))));
  const Eigen::Index m = std::min<Eigen::Index>({static_cast<Eigen::Index>(options.krylov_dim), n, memory_cap});

  Eigen::MatrixXd basis(n, m);
  Eigen::VectorXd alpha(m), beta(m);
  Eigen::VectorXd w(n);
  int matvecs = 0;
  double best = std::numeric_limits<double>::infinity();

  SectorGroundState out;
  out.parity = parity;

  while (true) {
    basis.col(0) = start;
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      w = h.apply(Eigen::VectorXd(basis.col(j)));
      ++matvecs;
      // two passes of classical Gram-Schmidt against the whole basis
      Eigen::VectorXd coeff = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * coeff;
      Eigen::VectorXd again = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * again;
      alpha(j) = coeff(j) + again(j);
      const double b = w.norm();
      k = j + 1;
      const double scale = std::max(1.0, std::abs(alpha(j)));
      if (b < 1e-12 * scale || k == m) break;
      beta(j) = b;
      basis.col(j + 1) = w / b;

      if (k >= 2 && k % 8 == 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> t;
        t.computeFromTridiagonal(alpha.head(k), beta.head(k - 1), Eigen::ComputeEigenvectors);
        if (b * std::abs(t.eigenvectors()(k - 1, 0)) < 0.1 * options.tol) break;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> t;
    if (k == 1) {
      Eigen::VectorXd d(1);
      d(0) = alpha(0);
      t.computeFromTridiagonal(d, Eigen::VectorXd(), Eigen::ComputeEigenvectors);
    } else {
      t.computeFromTridiagonal(alpha.head(k), beta.head(k - 1), Eigen::ComputeEigenvectors);
    }
    Eigen::VectorXd x = basis.leftCols(k) * t.eigenvectors().col(0);
    x.normalize();
    const Eigen::VectorXd hx = h.apply(x);
    ++matvecs;
    const double energy = x.dot(hx);
    const double residual = (hx - energy * x).norm();
    best = std::min(best, residual);

    if (residual <= options.tol) {
      fix_sign(x);
      out.energy = energy;
      out.residual = residual;
      out.iterations = matvecs;
      out.next_ritz = k >= 2 ? t.eigenvalues()(1) : kNaN;
      out.near_degenerate = k >= 2 && (t.eigenvalues()(1) - t.eigenvalues()(0)) < 10.0 * options.tol;
      out.vector = h.embed(x);
      return out;
    }
    if (matvecs >= options.max_iter) {
      std::ostringstream msg;
      msg << "Lanczos did not converge in " << matvecs << " matrix-vector products (best residual " << best << ")";
      throw ConvergenceError(msg.str(), best);
    }
    start = x;
  }
}

Spectrum full_spectrum(const ModelSpec& spec, bool with_vectors, std::size_t cap) {
  const Eigen::MatrixXd h = dense_h(spec, cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, with_vectors ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
  Spectrum s;
  s.values = es.eigenvalues();
  if (with_vectors) s.vectors = es.eigenvectors();
  return s;
}

std::size_t multiplicity(const Spectrum& spectrum, double energy, double tol) {
  std::size_t count = 0;
  for (Eigen::Index k = 0; k < spectrum.values.size(); ++k) count += std::abs(spectrum.values(k) - energy) <= tol;
  return count;
}

ReducedDensity reduced_density(const HilbertSpace& space, std::span<const WeightedState> states,
                               const SubsystemSelector& selector) {
  const std::size_t n = space.sites();
  if (!selector.empty() && selector.back() >= n) throw std::out_of_range("selector site beyond system size");
  const SubsystemSelector env = selector.complement(n);

  ReducedDensity rho;
  rho.subsystem = selector;
  std::size_t dim_a = 1;
  for (std::size_t s : selector) {
    rho.local_dims.push_back(space.local_dim(s));
    dim_a *= static_cast<std::size_t>(space.local_dim(s));
  }
  const std::size_t dim_e = space.total_dim() / dim_a;

  // kept / traced sub-indices for every basis state
  std::vector<std::size_t> kept(space.total_dim()), traced(space.total_dim());
  std::vector<int> digits(n);
  for (std::size_t x = 0; x < space.total_dim(); ++x) {
    space.decode(x, digits);
    std::size_t a = 0, e = 0;
    for (std::size_t s : selector) a = a * static_cast<std::size_t>(space.local_dim(s)) + static_cast<std::size_t>(digits[s]);
    for (std::size_t s : env) e = e * static_cast<std::size_t>(space.local_dim(s)) + static_cast<std::size_t>(digits[s]);
    kept[x] = a;
    traced[x] = e;
  }

  rho.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_a));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_e));
  for (const auto& st : states) {
    if (st.amplitudes.size() != space.total_dim()) throw std::invalid_argument("state length does not match space");
    if (st.weight < 0.0) throw std::invalid_argument("mixture weights must be non-negative");
    for (std::size_t x = 0; x < space.total_dim(); ++x) {
      m(static_cast<Eigen::Index>(kept[x]), static_cast<Eigen::Index>(traced[x])) = st.amplitudes[x];
    }
    rho.matrix.noalias() += st.weight * (m * m.transpose());
  }
  return rho;
}

ReducedDensity reduced_density(const HilbertSpace& space, const Eigen::VectorXd& state,
                               const SubsystemSelector& selector) {
  const WeightedState ws{1.0, std::span<const double>(state.data(), static_cast<std::size_t>(state.size()))};
  return reduced_density(space, std::span<const WeightedState>(&ws, 1), selector);
}

Eigen::MatrixXd partial_transpose(const ReducedDensity& rho, const SubsystemSelector& transposed) {
  const auto positions = rho.subsystem.positions_of(transposed);
  const HilbertSpace local(rho.local_dims);
  const std::size_t d = local.total_dim();
  std::vector<bool> flip(rho.local_dims.size(), false);
  for (auto p : positions) flip[p] = true;

  Eigen::MatrixXd out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::vector<int> row(rho.local_dims.size()), col(rho.local_dims.size());
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      local.decode(a, row);
      local.decode(b, col);
      for (std::size_t p = 0; p < flip.size(); ++p) {
        if (flip[p]) std::swap(row[p], col[p]);
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          rho.matrix(static_cast<Eigen::Index>(local.encode(row)), static_cast<Eigen::Index>(local.encode(col)));
    }
  }
  return out;
}

double negativity(const ReducedDensity& rho, const SubsystemSelector& transposed) {
  const Eigen::MatrixXd pt = partial_transpose(rho, transposed);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt, Eigen::EigenvaluesOnly);
  double negative = 0.0, trace_norm = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double l = es.eigenvalues()(k);
    if (l < 0.0) negative -= l;
    trace_norm += std::abs(l);
  }
  const double from_norm = 0.5 * (trace_norm - 1.0);
  if (std::abs(from_norm - negative) > 1e-10) {
    throw std::logic_error("negativity forms disagree; density is not trace-normalized");
  }
  return negative;
}

EntanglementMeasures entanglement_measures(const ReducedDensity& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.matrix, Eigen::EigenvaluesOnly);
  EntanglementMeasures m;
  double purity = 0.0, entropy = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double l = es.eigenvalues()(k);
    purity += l * l;
    if (l > 0.0) entropy -= l * std::log2(l);
  }
  m.purity = purity;
  m.entropy_bits = entropy;
  m.global_concurrence = std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
  return m;
}

double wootters_concurrence(const Eigen::Matrix4d& rho) {
  // rho = W W^T; the lambdas are the singular values of W^T (sy x sy) W. Eigenvalues of rho
  // at roundoff level are dropped, otherwise they enter the lambdas as sqrt(roundoff).
  Eigen::Matrix4d yy = Eigen::Matrix4d::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (rho + rho.transpose()));
  const double cutoff = 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::Vector4d> columns;
  for (int k = 0; k < 4; ++k) {
    const double p = es.eigenvalues()(k);
    if (p > cutoff) columns.push_back(std::sqrt(p) * es.eigenvectors().col(k));
  }
  if (columns.empty()) return 0.0;
  Eigen::MatrixXd w(4, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = columns[k];
  const Eigen::MatrixXd tau = w.transpose() * yy * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts(0.5 * (tau + tau.transpose()), Eigen::EigenvaluesOnly);
  std::vector<double> l(4, 0.0);
  for (Eigen::Index k = 0; k < ts.eigenvalues().size(); ++k) l[static_cast<std::size_t>(k)] = std::abs(ts.eigenvalues()(k));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double wootters_concurrence(const ReducedDensity& rho) {
  if (rho.local_dims != std::vector<int>{2, 2}) {
    throw std::invalid_argument("Wootters concurrence needs a pair of qubits");
  }
  return wootters_concurrence(Eigen::Matrix4d(rho.matrix));
}

double expectation_sz(const HilbertSpace& space, const Eigen::VectorXd& state, std::size_t site) {
  if (site >= space.sites()) throw std::out_of_range("site beyond system size");
  if (static_cast<std::size_t>(state.size()) != space.total_dim()) throw std::invalid_argument("state length mismatch");
  const double s = 0.5 * (space.local_dim(site) - 1);
  double m = 0.0;
  for (std::size_t x = 0; x < space.total_dim(); ++x) {
    const double a = state(static_cast<Eigen::Index>(x));
    m += a * a * (space.digit(x, site) - s);
  }
  return m;
}

double total_magnetization(const HilbertSpace& space, const Eigen::VectorXd& state) {
  double m = 0.0;
  for (std::size_t i = 0; i < space.sites(); ++i) m += expectation_sz(space, state, i);
  return m;
}

TransitionScan parity_transition_scan(const std::function<ModelSpec(double)>& model_at,
                                      std::span<const double> grid, const ScanOptions& options) {
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("scan grid must be strictly increasing");
  }
  auto gap = [&](double scale) {
    const ModelSpec spec = model_at(scale);
    ScanPoint p{scale, ground_state(spec, Parity::even, options.lanczos).energy,
                ground_state(spec, Parity::odd, options.lanczos).energy};
    return p;
  };
  auto sign_of = [&](const ScanPoint& p) {
    const double d = p.e_even - p.e_odd;
    if (std::abs(d) < options.degeneracy_threshold) return 0;
    return d < 0.0 ? -1 : 1;
  };

  TransitionScan scan;
  for (double g : grid) scan.points.push_back(gap(g));

  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t k = 0; k < scan.points.size(); ++k) {
    const int sg = sign_of(scan.points[k]);
    if (sg == 0) continue;
    if (last_sign == 0) {
      scan.interval_parity.push_back(sg < 0 ? Parity::even : Parity::odd);
    } else if (sg != last_sign) {
      double lo = scan.points[last_index].scale;
      double hi = scan.points[k].scale;
      double crossing = 0.5 * (lo + hi);
      bool converged = false;
      for (int iter = 0; iter < 200 && !converged; ++iter) {
        crossing = 0.5 * (lo + hi);
        if (hi - lo <= options.relative_width * std::max(std::abs(lo), std::abs(hi))) {
          converged = true;
          break;
        }
        const int sm = sign_of(gap(crossing));
        if (sm == 0) converged = true;
        else if (sm == last_sign) lo = crossing;
        else hi = crossing;
      }
      if (!converged) throw ConvergenceError("crossing refinement did not converge", hi - lo);
      scan.crossings.push_back(crossing);
      scan.interval_parity.push_back(sg < 0 ? Parity::even : Parity::odd);
    }
    last_sign = sg;
    last_index = k;
  }
  return scan;
}

}  // namespace sepspin
