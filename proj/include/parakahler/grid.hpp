#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace parakahler {

using cd = std::complex<double>;
inline constexpr cd I1{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform rectangular grid; node (i, j) sits at z = (x0 + i*hx) + i (y0 + j*hy).
struct Grid2 {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 0.0;
  double hy = 0.0;

  int size() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  cd z(int i, int j) const { return {x(i), y(j)}; }
  bool interior(int i, int j, int margin = 1) const {
    return i >= margin && j >= margin && i < nx - margin && j < ny - margin;
  }
  void require_min(int n, const char* what) const;

  // n nodes per axis on [lo, hi]^2
  static Grid2 square(double lo, double hi, int n);
  // nodes spaced by h on [lo, hi]^2; (hi - lo) / h must be an integer
  static Grid2 spaced(double lo, double hi, double h);
};

template <typename T>
struct GridField {
  Grid2 grid;
  std::vector<T> v;

  GridField() = default;
  GridField(const Grid2& g, const T& fill) : grid(g), v(static_cast<size_t>(g.size()), fill) {}

  T& operator()(int i, int j) { return v[static_cast<size_t>(grid.index(i, j))]; }
  const T& operator()(int i, int j) const { return v[static_cast<size_t>(grid.index(i, j))]; }
};

using RealField = GridField<double>;
using ComplexField = GridField<cd>;

template <typename T, typename F>
GridField<T> make_field(const Grid2& g, F&& f) {
  GridField<T> out;
  out.grid = g;
  out.v.reserve(static_cast<size_t>(g.size()));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.v.push_back(T(f(i, j)));
  return out;
}

// Finite differences. Second order central in the interior. Edge nodes use the central formula
// against a quartic-extrapolated ghost value, so the truncation error h^2 f'''/6 stays smooth up to
// the boundary; grids with fewer than 5 nodes fall back to second-order one-sided differences.
namespace fd {

template <typename T>
T dx(const GridField<T>& f, int i, int j) {
  const double h = f.grid.hx;
  const int n = f.grid.nx;
  if (n >= 5) {
    if (i == 0) return T((-5.0 * f(0, j) + 11.0 * f(1, j) - 10.0 * f(2, j) + 5.0 * f(3, j) - f(4, j)) / (2.0 * h));
    if (i == n - 1)
      return T((5.0 * f(n - 1, j) - 11.0 * f(n - 2, j) + 10.0 * f(n - 3, j) - 5.0 * f(n - 4, j) + f(n - 5, j)) / (2.0 * h));
  }
  if (i == 0) return T((-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * h));
  if (i == n - 1) return T((3.0 * f(n - 1, j) - 4.0 * f(n - 2, j) + f(n - 3, j)) / (2.0 * h));
  return T((f(i + 1, j) - f(i - 1, j)) / (2.0 * h));
}

template <typename T>
T dy(const GridField<T>& f, int i, int j) {
  const double h = f.grid.hy;
  const int n = f.grid.ny;
  if (n >= 5) {
    if (j == 0) return T((-5.0 * f(i, 0) + 11.0 * f(i, 1) - 10.0 * f(i, 2) + 5.0 * f(i, 3) - f(i, 4)) / (2.0 * h));
    if (j == n - 1)
      return T((5.0 * f(i, n - 1) - 11.0 * f(i, n - 2) + 10.0 * f(i, n - 3) - 5.0 * f(i, n - 4) + f(i, n - 5)) / (2.0 * h));
  }
  if (j == 0) return T((-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * h));
  if (j == n - 1) return T((3.0 * f(i, n - 1) - 4.0 * f(i, n - 2) + f(i, n - 3)) / (2.0 * h));
  return T((f(i, j + 1) - f(i, j - 1)) / (2.0 * h));
}

namespace detail {

// fourth-order derivative along one axis; f(k) reads node k on that line. One-sided five-point
// stencils on the two outer nodes, second order when the line has fewer than five nodes.
template <typename T, typename Get>
T d4_line(Get f, int p, int n, double h) {
  if (n < 5) {
    if (p == 0) return T((-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h));
    if (p == n - 1) return T((3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h));
    return T((f(p + 1) - f(p - 1)) / (2.0 * h));
  }
  if (p == 0) return T((-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h));
  if (p == 1) return T((-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * h));
  if (p == n - 2)
    return T((3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) / (12.0 * h));
  if (p == n - 1)
    return T((25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5)) / (12.0 * h));
  return T((f(p - 2) - 8.0 * f(p - 1) + 8.0 * f(p + 1) - f(p + 2)) / (12.0 * h));
}

}  // namespace detail

template <typename T>
T dx4(const GridField<T>& f, int i, int j) {
  return detail::d4_line<T>([&](int k) { return f(k, j); }, i, f.grid.nx, f.grid.hx);
}

template <typename T>
T dy4(const GridField<T>& f, int i, int j) {
  return detail::d4_line<T>([&](int k) { return f(i, k); }, j, f.grid.ny, f.grid.hy);
}

// d/dz = (d1 - i d2)/2 and d/dzbar = (d1 + i d2)/2; T must be complex valued
template <typename T>
T dz(const GridField<T>& f, int i, int j) {
  return T(0.5 * (dx(f, i, j) - I1 * dy(f, i, j)));
}

template <typename T>
T dzb(const GridField<T>& f, int i, int j) {
  return T(0.5 * (dx(f, i, j) + I1 * dy(f, i, j)));
}

inline cd dz(const RealField& f, int i, int j) { return 0.5 * cd(dx(f, i, j), -dy(f, i, j)); }
inline cd dzb(const RealField& f, int i, int j) { return 0.5 * cd(dx(f, i, j), dy(f, i, j)); }

inline cd dz4(const RealField& f, int i, int j) { return 0.5 * cd(dx4(f, i, j), -dy4(f, i, j)); }
inline cd dzb4(const RealField& f, int i, int j) { return 0.5 * cd(dx4(f, i, j), dy4(f, i, j)); }

template <typename T>
T dz4(const GridField<T>& f, int i, int j) {
  return T(0.5 * (dx4(f, i, j) - I1 * dy4(f, i, j)));
}

template <typename T>
T dzb4(const GridField<T>& f, int i, int j) {
  return T(0.5 * (dx4(f, i, j) + I1 * dy4(f, i, j)));
}

// 5-point Laplacian, interior nodes only
template <typename T>
T laplacian(const GridField<T>& f, int i, int j) {
  const double hx2 = f.grid.hx * f.grid.hx;
  const double hy2 = f.grid.hy * f.grid.hy;
  return T((f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / hx2 +
           (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / hy2);
}

}  // namespace fd

int thread_count();

}  // namespace parakahler
