#pragma once

#include "parakahler/grid.hpp"

#ifdef PARAKAHLER_OPENMP
#include <omp.h>
#endif

namespace parakahler::detail {

// Bodies must not throw: validate before entering.
template <typename F>
void parallel_for(int n, F&& body) {
#ifdef PARAKAHLER_OPENMP
  const int cap = thread_count();
  const int threads = cap > 0 ? cap : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int k = 0; k < n; ++k) body(k);
#else
  for (int k = 0; k < n; ++k) body(k);
#endif
}

// Max of f(i, j) over nodes at least `margin` away from the boundary.
template <typename F>
double interior_max(const Grid2& g, int margin, F&& f) {
  std::vector<double> rows(static_cast<size_t>(g.ny), 0.0);
  parallel_for(g.ny, [&](int j) {
    if (j < margin || j >= g.ny - margin) return;
    double m = 0.0;
    for (int i = margin; i < g.nx - margin; ++i) {
      const double v = f(i, j);
      if (!(v <= m)) m = v;  // propagates NaN
    }
    rows[static_cast<size_t>(j)] = m;
  });
  double m = 0.0;
  for (double r : rows)
    if (!(r <= m)) m = r;
  return m;
}

}  // namespace parakahler::detail
