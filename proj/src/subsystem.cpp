#include "sepspin/subsystem.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace sepspin {

SubsystemSelector::SubsystemSelector(std::initializer_list<std::size_t> sites)
    : SubsystemSelector(std::vector<std::size_t>(sites)) {}

SubsystemSelector::SubsystemSelector(std::vector<std::size_t> sites) : sites_(std::move(sites)) {
  for (std::size_t k = 1; k < sites_.size(); ++k) {
    if (sites_[k] <= sites_[k - 1]) throw std::invalid_argument("subsystem sites must be strictly increasing");
  }
}

SubsystemSelector SubsystemSelector::all(std::size_t n) {
  std::vector<std::size_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return SubsystemSelector(std::move(s));
}

bool SubsystemSelector::contains(std::size_t site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

SubsystemSelector SubsystemSelector::complement(std::size_t n) const {
  if (!sites_.empty() && sites_.back() >= n) throw std::out_of_range("subsystem site beyond system size");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!contains(i)) out.push_back(i);
  }
  return SubsystemSelector(std::move(out));
}

SubsystemSelector SubsystemSelector::united(const SubsystemSelector& other) const {
  std::vector<std::size_t> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(), std::back_inserter(out));
  return SubsystemSelector(std::move(out));
}

bool SubsystemSelector::disjoint(const SubsystemSelector& other) const {
  std::vector<std::size_t> out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out));
  return out.empty();
}

std::vector<std::size_t> SubsystemSelector::positions_of(const SubsystemSelector& subset) const {
  std::vector<std::size_t> pos;
  for (std::size_t s : subset) {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
    if (it == sites_.end() || *it != s) throw std::invalid_argument("site is not part of the selector");
    pos.push_back(static_cast<std::size_t>(it - sites_.begin()));
  }
  return pos;
}

}  // namespace sepspin
