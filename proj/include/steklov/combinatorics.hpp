#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace steklov {

/// binom(n, r) as a double, exact for the magnitudes the enumeration guards allow.
inline double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double out = 1.0;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(out);
}

/// Visit every r-subset of {0, ..., n-1} in lexicographic order.
template <class Fn>
void for_each_combination(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace steklov
