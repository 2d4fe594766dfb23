#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sepspin {

/// Spin magnitude stored as 2s so half-integer spins stay exact.
class SpinValue {
 public:
  SpinValue() = default;
  explicit SpinValue(int twice_s);

  int twice_s() const { return twice_s_; }
  double s() const { return 0.5 * twice_s_; }
  int dim() const { return twice_s_ + 1; }

  friend bool operator==(SpinValue, SpinValue) = default;

 private:
  int twice_s_ = 1;
};

/// Global S_z parity eigenvalue exp(i pi sum (s^z + s)).
enum class Parity : int { even = 1, odd = -1 };

inline int sign(Parity p) { return static_cast<int>(p); }
inline Parity opposite(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

struct SpinOperators {
  Eigen::MatrixXd sz;
  Eigen::MatrixXd splus;
  Eigen::MatrixXd sminus;
  Eigen::MatrixXd sx;
  Eigen::MatrixXcd sy;
};

/// Local operators in the basis |k>, k = 0..2s, with s^z|k> = (k - s)|k>.
SpinOperators spin_operators(SpinValue s);

/// Matrix element <k+1|s^+|k> = sqrt((k+1)(2s-k)); zero outside 0 <= k < 2s.
double raising_coefficient(SpinValue s, int k);

/// exp(i theta s^y). Real orthogonal since i s^y = (s^+ - s^-)/2 is real
/// antisymmetric.
Eigen::MatrixXd rotation_y(SpinValue s, double theta);

/// Coherent state exp(i theta s^y)|0>, entry k = sqrt(C(2s,k)) cos^{2s-k}(theta/2) sin^k(theta/2).
Eigen::VectorXd coherent_local(SpinValue s, double theta);

/// (-1)^(sum k_i).
int parity_sign(std::span<const int> digits);

/// Mixed-radix product basis. Site 0 is the slowest-varying digit.
class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<int> local_dims);
  static HilbertSpace of(std::span<const SpinValue> spins);

  std::size_t sites() const { return local_dims_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  const std::vector<int>& local_dims() const { return local_dims_; }
  const std::vector<std::size_t>& strides() const { return strides_; }
  int local_dim(std::size_t site) const { return local_dims_[site]; }
  std::size_t stride(std::size_t site) const { return strides_[site]; }

  std::size_t encode(std::span<const int> digits) const;
  void decode(std::size_t index, std::span<int> digits) const;
  std::vector<int> decode(std::size_t index) const;
  int digit(std::size_t index, std::size_t site) const {
    return static_cast<int>((index / strides_[site]) % static_cast<std::size_t>(local_dims_[site]));
  }
  Parity parity(std::size_t index) const;

 private:
  std::vector<int> local_dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_dim_ = 1;
};

/// Tensor product of local vectors, ordered like HilbertSpace (site 0 slowest).
Eigen::VectorXd kron_all(std::span<const Eigen::VectorXd> factors);

}  // namespace sepspin
