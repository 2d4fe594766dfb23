#include "sepspin/spin_algebra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace sepspin {

SpinValue::SpinValue(int twice_s) : twice_s_(twice_s) {
  if (twice_s < 1) {
    throw std::invalid_argument("spin must satisfy 2s >= 1, got 2s = " + std::to_string(twice_s));
  }
}

double raising_coefficient(SpinValue s, int k) {
  if (k < 0 || k >= s.twice_s()) return 0.0;
  return std::sqrt(static_cast<double>((k + 1) * (s.twice_s() - k)));
}

SpinOperators spin_operators(SpinValue s) {
  const int d = s.dim();
  SpinOperators ops;
  ops.sz = Eigen::MatrixXd::Zero(d, d);
  ops.splus = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    ops.sz(k, k) = k - s.s();
    if (k + 1 < d) ops.splus(k + 1, k) = raising_coefficient(s, k);
  }
  ops.sminus = ops.splus.transpose();
  ops.sx = 0.5 * (ops.splus + ops.sminus);
  // s^y = (s^+ - s^-)/(2i) = -i/2 (s^+ - s^-)
  ops.sy = std::complex<double>(0.0, -0.5) * (ops.splus - ops.sminus).cast<std::complex<double>>();
  return ops;
}

Eigen::MatrixXd rotation_y(SpinValue s, double theta) {
  const int d = s.dim();
  Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) {
    const double c = 0.5 * raising_coefficient(s, k);
    generator(k + 1, k) = c;
    generator(k, k + 1) = -c;
  }
  return (theta * generator).exp();
}

Eigen::VectorXd coherent_local(SpinValue s, double theta) {
  const int n = s.twice_s();
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  Eigen::VectorXd v(n + 1);
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    v(k) = std::sqrt(binom) * std::pow(c, n - k) * std::pow(sn, k);
    binom = binom * (n - k) / (k + 1);
  }
  return v;
}

int parity_sign(std::span<const int> digits) {
  int sum = 0;
  for (int k : digits) sum += k;
  return (sum % 2 == 0) ? 1 : -1;
}

HilbertSpace::HilbertSpace(std::vector<int> local_dims)
    : local_dims_(std::move(local_dims)), strides_(local_dims_.size()) {
  std::size_t stride = 1;
  for (std::size_t i = local_dims_.size(); i-- > 0;) {
    if (local_dims_[i] < 2) throw std::invalid_argument("local dimension must be >= 2");
    strides_[i] = stride;
    const auto d = static_cast<std::size_t>(local_dims_[i]);
    if (stride > std::numeric_limits<std::size_t>::max() / d) {
      throw std::overflow_error("Hilbert space dimension overflows size_t");
    }
    stride *= d;
  }
  total_dim_ = stride;
}

HilbertSpace HilbertSpace::of(std::span<const SpinValue> spins) {
  std::vector<int> dims;
  dims.reserve(spins.size());
  for (auto s : spins) dims.push_back(s.dim());
  return HilbertSpace(std::move(dims));
}

std::size_t HilbertSpace::encode(std::span<const int> digits) const {
  if (digits.size() != local_dims_.size()) throw std::invalid_argument("digit count mismatch");
  std::size_t index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= local_dims_[i]) throw std::out_of_range("digit out of range");
    index += static_cast<std::size_t>(digits[i]) * strides_[i];
  }
  return index;
}

void HilbertSpace::decode(std::size_t index, std::span<int> digits) const {
  if (index >= total_dim_) throw std::out_of_range("basis index out of range");
  for (std::size_t i = local_dims_.size(); i-- > 0;) {
    const auto d = static_cast<std::size_t>(local_dims_[i]);
    digits[i] = static_cast<int>(index % d);
    index /= d;
  }
}

std::vector<int> HilbertSpace::decode(std::size_t index) const {
  std::vector<int> digits(local_dims_.size());
  decode(index, digits);
  return digits;
}

Parity HilbertSpace::parity(std::size_t index) const {
  int sum = 0;
  for (std::size_t i = local_dims_.size(); i-- > 0;) {
    const auto d = static_cast<std::size_t>(local_dims_[i]);
    sum += static_cast<int>(index % d);
    index /= d;
  }
  return (sum % 2 == 0) ? Parity::even : Parity::odd;
}

Eigen::VectorXd kron_all(std::span<const Eigen::VectorXd> factors) {
  Eigen::VectorXd out = Eigen::VectorXd::Ones(1);
  for (const auto& f : factors) {
    Eigen::VectorXd next(out.size() * f.size());
    for (Eigen::Index a = 0; a < out.size(); ++a) {
      next.segment(a * f.size(), f.size()) = out(a) * f;
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace sepspin
