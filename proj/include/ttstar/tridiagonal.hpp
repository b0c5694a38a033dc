#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ttstar/error.hpp"

namespace ttstar {

// Thomas algorithm. sub[0] and super[m-1] are ignored.
// Pivots below 1e-300 in magnitude raise a singular-system error.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& super,
                                             const std::vector<double>& rhs) {
  const std::size_t m = diag.size();
  if (sub.size() != m || super.size() != m || rhs.size() != m)
    throw bad_argument("tridiagonal_shape", "tridiagonal bands must share one length");
  std::vector<double> c(m), x(m);
  if (m == 0) return x;

  double piv = diag[0];
  if (std::abs(piv) < 1e-300) throw non_convergence("singular_system", "zero pivot in tridiagonal solve");
  c[0] = super[0] / piv;
  x[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < m; ++i) {
    piv = diag[i] - sub[i] * c[i - 1];
    if (std::abs(piv) < 1e-300) throw non_convergence("singular_system", "zero pivot in tridiagonal solve");
    c[i] = (i + 1 < m) ? super[i] / piv : 0.0;
    x[i] = (rhs[i] - sub[i] * x[i - 1]) / piv;
  }
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace ttstar
