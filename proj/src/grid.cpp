#include "parakahler/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace parakahler {

void Grid2::require_min(int n, const char* what) const {
  if (nx < n || ny < n)
    throw Error(std::string(what) + ": grid too small (need at least " + std::to_string(n) + " nodes per axis)");
}

Grid2 Grid2::square(double lo, double hi, int n) {
  if (n < 2) throw Error("Grid2::square: need at least 2 nodes");
  const double h = (hi - lo) / (n - 1);
  return Grid2{n, n, lo, lo, h, h};
}

Grid2 Grid2::spaced(double lo, double hi, double h) {
  const double cells = (hi - lo) / h;
  const long m = std::lround(cells);
  if (m < 1 || std::abs(cells - static_cast<double>(m)) > 1e-9 * std::max(1.0, cells))
    throw Error("Grid2::spaced: interval is not a multiple of the spacing");
  const int n = static_cast<int>(m) + 1;
  return Grid2{n, n, lo, lo, h, h};
}

int thread_count() {
  if (const char* env = std::getenv("PARAKAHLER_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

}  // namespace parakahler
