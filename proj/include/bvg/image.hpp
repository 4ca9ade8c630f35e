#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvg {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A parameter record violates its invariants.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Regular 2-D sampling grid. Pixel (x, y) has its center at
/// (x0 + x * spacing, y0 + y * spacing); x indexes columns, y rows.
struct Grid {
  std::size_t width = 1;
  std::size_t height = 1;
  double spacing = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;

  std::size_t size() const { return width * height; }
  double pixel_area() const { return spacing * spacing; }
  double x_at(std::size_t x) const { return x0 + static_cast<double>(x) * spacing; }
  double y_at(std::size_t y) const { return y0 + static_cast<double>(y) * spacing; }

  /// Throws InvalidParams unless width, height >= 1 and spacing > 0.
  void validate() const;

  /// Grid of the given pixel size covering [xmin, xmax] horizontally with
  /// square pixels; the vertical extent follows from the height.
  static Grid covering(std::size_t width, std::size_t height, double xmin, double xmax,
                       double ymin);

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws GridMismatch with a message naming both shapes.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Scalar field on a Grid, stored row-major (y outer, x inner).
class Image {
 public:
  Image() = default;
  explicit Image(const Grid& grid, double fill = 0.0);
  Image(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t width() const { return grid_.width; }
  std::size_t height() const { return grid_.height; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return grid_.spacing; }

  double& at(std::size_t x, std::size_t y) { return values_[y * grid_.width + x]; }
  double at(std::size_t x, std::size_t y) const { return values_[y * grid_.width + x]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;
  double sum() const;
  double mean() const;
  bool all_finite() const;

  Image& operator+=(const Image& other);
  Image& operator-=(const Image& other);
  Image& operator*=(double s);
  Image& operator+=(double c);

  friend Image operator+(Image a, const Image& b) { return a += b; }
  friend Image operator-(Image a, const Image& b) { return a -= b; }
  friend Image operator*(double s, Image a) { return a *= s; }
  friend Image operator*(Image a, double s) { return a *= s; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Pair of scalar fields (g1 along x, g2 along y) sharing one grid.
struct DualField {
  Grid grid;
  std::vector<double> g1;
  std::vector<double> g2;

  DualField() = default;
  explicit DualField(const Grid& grid) : grid(grid), g1(grid.size(), 0.0), g2(grid.size(), 0.0) {}

  std::size_t size() const { return g1.size(); }
  /// Largest pointwise modulus sqrt(g1^2 + g2^2).
  double max_modulus() const;
};

/// Largest absolute pixel difference. Grids must match.
double max_abs_diff(const Image& a, const Image& b);

}  // namespace bvg
