#pragma once

#include <cstddef>
#include <vector>

namespace potts {

// Fixed-order pairwise (tree) summation. The result depends only on the term
// order, never on the thread count that produced the terms, and the rounding
// error grows like log(n) instead of n.
template <typename T>
T pairwise_sum(const T* v, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace potts
