#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpass {

/// Element of the monoid (N^n, +, 0): one derivative order per independent
/// variable.
class MultiIndex {
 public:
  /// Largest supported number of independent variables. Storage is inline,
  /// so copies never allocate.
  static constexpr std::size_t kMaxDimension = 8;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t dimension) : size_(checked(dimension)) {}
  MultiIndex(std::initializer_list<unsigned> orders) : size_(checked(orders.size())) {
    std::copy(orders.begin(), orders.end(), orders_.begin());
  }
  explicit MultiIndex(const std::vector<unsigned>& orders) : size_(checked(orders.size())) {
    std::copy(orders.begin(), orders.end(), orders_.begin());
  }

  static MultiIndex unit(std::size_t dimension, std::size_t axis) {
    if (axis >= dimension) throw std::out_of_range("multi-index axis out of range");
    MultiIndex e(dimension);
    e.orders_[axis] = 1;
    return e;
  }

  std::size_t dimension() const noexcept { return size_; }
  unsigned operator[](std::size_t axis) const { return orders_[axis]; }
  unsigned& operator[](std::size_t axis) { return orders_[axis]; }
  std::span<const unsigned> orders() const noexcept { return {orders_.data(), size_}; }

  /// |alpha|, the total order.
  unsigned order() const noexcept {
    unsigned s = 0;
    for (std::size_t k = 0; k < size_; ++k) s += orders_[k];
    return s;
  }

  bool is_zero() const noexcept { return order() == 0; }

  /// Componentwise <=, i.e. other = *this + delta for some delta in N^n.
  bool divides(const MultiIndex& other) const;

  MultiIndex& operator+=(const MultiIndex& other);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }

  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.size_ == b.size_ && std::equal(a.orders_.begin(), a.orders_.begin() + a.size_, b.orders_.begin());
  }
  /// Lexicographic, a proper prefix first.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return std::lexicographical_compare_three_way(a.orders_.begin(), a.orders_.begin() + a.size_,
                                                  b.orders_.begin(), b.orders_.begin() + b.size_);
  }

 private:
  static std::size_t checked(std::size_t dimension) {
    if (dimension > kMaxDimension) throw std::invalid_argument("too many independent variables (at most 8)");
    return dimension;
  }

  std::array<unsigned, kMaxDimension> orders_{};
  std::size_t size_ = 0;
};

/// Derivative coordinate u^i_alpha; alpha = 0 are the indeterminates.
struct JetVar {
  std::size_t unknown = 0;
  MultiIndex order;

  friend bool operator==(const JetVar&, const JetVar&) = default;
  friend std::strong_ordering operator<=>(const JetVar& a, const JetVar& b) {
    if (auto c = a.unknown <=> b.unknown; c != 0) return c;
    if (auto c = a.order.order() <=> b.order.order(); c != 0) return c;
    return a.order <=> b.order;
  }
};

/// Every multi-index of the given dimension with |alpha| <= max_order, in
/// increasing total order and lexicographic order within each degree.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dimension, unsigned max_order);

}  // namespace dpass
