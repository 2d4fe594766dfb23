#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sepspin {

/// Strictly increasing list of site indices.
class SubsystemSelector {
 public:
  SubsystemSelector() = default;
  SubsystemSelector(std::initializer_list<std::size_t> sites);
  explicit SubsystemSelector(std::vector<std::size_t> sites);

  static SubsystemSelector all(std::size_t n);

  const std::vector<std::size_t>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  bool contains(std::size_t site) const;
  std::size_t back() const { return sites_.back(); }

  SubsystemSelector complement(std::size_t n) const;
  SubsystemSelector united(const SubsystemSelector& other) const;
  bool disjoint(const SubsystemSelector& other) const;
  /// Position of each of `subset`'s sites inside this selector.
  std::vector<std::size_t> positions_of(const SubsystemSelector& subset) const;

  auto begin() const { return sites_.begin(); }
  auto end() const { return sites_.end(); }

  friend bool operator==(const SubsystemSelector&, const SubsystemSelector&) = default;

 private:
  std::vector<std::size_t> sites_;
};

}  // namespace sepspin
