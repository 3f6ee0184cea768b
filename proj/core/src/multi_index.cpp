#include "dpass/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpass {

bool MultiIndex::divides(const MultiIndex& other) const {
  if (other.dimension() != dimension()) return false;
  for (std::size_t k = 0; k < size_; ++k) {
    if (orders_[k] > other.orders_[k]) return false;
  }
  return true;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  if (other.dimension() != dimension()) throw std::invalid_argument("multi-index dimension mismatch");
  for (std::size_t k = 0; k < size_; ++k) orders_[k] += other.orders_[k];
  return *this;
}

std::string MultiIndex::to_string() const {
  std::string s = "[";
  for (std::size_t k = 0; k < size_; ++k) {
    if (k > 0) s += ",";
    s += std::to_string(orders_[k]);
  }
  return s + "]";
}

namespace {

void extend(std::vector<unsigned>& prefix, std::size_t dimension, unsigned remaining,
            std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == dimension) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned a = remaining + 1; a-- > 0;) {
    prefix.push_back(a);
    extend(prefix, dimension, remaining - a, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(std::size_t dimension, unsigned max_order) {
  std::vector<MultiIndex> out;
  if (dimension == 0) {
    out.emplace_back(0);
    return out;
  }
  for (unsigned degree = 0; degree <= max_order; ++degree) {
    std::vector<MultiIndex> level;
    std::vector<unsigned> prefix;
    extend(prefix, dimension, degree, level);
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace dpass
