#pragma once

#include <gmpxx.h>

namespace dimerlab {

struct TilingCount {
  int m = 0;
  int n = 0;
  mpz_class count;  // 0 whenever m*n is odd; symmetric in (m, n)
};

// Domino tilings of the OPEN m x n rectangle (free boundaries). This module
// is a standalone counting oracle for the matching machinery; it is not the
// torus partition function.

// Closed-form product |prod_jk (2cos(pi j/(m+1)) + 2i cos(pi k/(n+1)))|^(1/2),
// evaluated as a compensated log-modulus sum in 80-bit arithmetic so the
// result stays within 1e-9 relative of the exact count. 1 <= m, n <= 32.
double count_tilings_product(int m, int n);

// (1/(m n)) ln Z_{m,n}. Approaches Catalan/pi ~ 0.29156 for large squares;
// -inf when the count is zero (odd area).
double catalan_density_check(int m, int n);

// Exact count: sweep cells in column-minor order, state = bitmask of cells
// already covered from the left/above. Requires min(m, n) <= 16 (TooLarge).
mpz_class count_tilings_dp(int m, int n);

TilingCount count_tilings(int m, int n);

}  // namespace dimerlab
