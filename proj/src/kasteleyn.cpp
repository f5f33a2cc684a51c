#include "dimerlab/kasteleyn.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dimerlab/errors.hpp"

namespace dimerlab {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

void check_product_domain(int m, int n) {
  if (m < 1 || n < 1 || m > 32 || n > 32)
    throw Error("product formula is defined for 1 <= m, n <= 32, got " +
                std::to_string(m) + "x" + std::to_string(n));
}

// ln Z via Kahan-compensated summation of the factor log-moduli. Each factor
// contributes ln(4cos^2 a + 4cos^2 b); Z is the product of square roots of
// moduli, hence the final /4.
long double log_tiling_count(int m, int n) {
  if (m % 2 == 1 && n % 2 == 1)
    return -HUGE_VALL;  // the central factor vanishes exactly

  std::vector<long double> ca(m), cb(n);
  for (int j = 1; j <= m; ++j) ca[j - 1] = std::cos(kPi * j / (m + 1));
  for (int k = 1; k <= n; ++k) cb[k - 1] = std::cos(kPi * k / (n + 1));

  long double sum = 0.0L, comp = 0.0L;
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) {
      const long double mag2 = 4.0L * (ca[j] * ca[j] + cb[k] * cb[k]);
      const long double y = std::log(mag2) - comp;
      const long double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  return sum / 4.0L;
}

}  // namespace

double count_tilings_product(int m, int n) {
  check_product_domain(m, n);
  const long double ln_z = log_tiling_count(m, n);
  return static_cast<double>(std::exp(ln_z));
}

double catalan_density_check(int m, int n) {
  check_product_domain(m, n);
  return static_cast<double>(log_tiling_count(m, n) /
                             (static_cast<long double>(m) * n));
}

mpz_class count_tilings_dp(int m, int n) {
  if (m < 1 || n < 1)
    throw Error("grid dimensions must be positive, got " + std::to_string(m) +
                "x" + std::to_string(n));
  const int h = std::max(m, n);
  const int w = std::min(m, n);
  if (w > 16)
    throw TooLarge("profile DP is capped at min(m,n) <= 16, got " +
                   std::to_string(w));

  // State bit c: the cell in column c of the row being scanned is already
  // covered (by a vertical domino from the previous row, or a horizontal one
  // from the previous column).
  const std::size_t states = std::size_t{1} << w;
  std::vector<mpz_class> cur(states), next(states);
  cur[0] = 1;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (auto& x : next) x = 0;
      for (std::size_t mask = 0; mask < states; ++mask) {
        const mpz_class& v = cur[mask];
        if (v == 0) continue;
        const std::size_t bit = std::size_t{1} << c;
        if (mask & bit) {
          next[mask ^ bit] += v;
        } else {
          if (r + 1 < h) next[mask | bit] += v;  // vertical
          if (c + 1 < w && !(mask & (bit << 1)))
            next[mask | (bit << 1)] += v;  // horizontal
        }
      }
      cur.swap(next);
    }
  }
  return cur[0];
}

TilingCount count_tilings(int m, int n) {
  return TilingCount{m, n, count_tilings_dp(m, n)};
}

}  // namespace dimerlab
