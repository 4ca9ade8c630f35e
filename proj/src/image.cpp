#include "bvg/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bvg {

void Grid::validate() const {
  if (width < 1 || height < 1) {
    throw InvalidParams("grid must be at least 1x1");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidParams("grid spacing must be positive and finite");
  }
  if (!std::isfinite(x0) || !std::isfinite(y0)) {
    throw InvalidParams("grid origin must be finite");
  }
}

Grid Grid::covering(std::size_t width, std::size_t height, double xmin, double xmax, double ymin) {
  Grid g;
  g.width = width;
  g.height = height;
  g.spacing = (xmax - xmin) / static_cast<double>(width);
  g.x0 = xmin + 0.5 * g.spacing;
  g.y0 = ymin + 0.5 * g.spacing;
  g.validate();
  return g;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a.width != b.width || a.height != b.height || a.spacing != b.spacing) {
    std::ostringstream os;
    os << what << ": grid mismatch (" << a.width << "x" << a.height << " h=" << a.spacing
       << " vs " << b.width << "x" << b.height << " h=" << b.spacing << ")";
    throw GridMismatch(os.str());
  }
}

Image::Image(const Grid& grid, double fill) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.size(), fill);
}

Image::Image(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) {
    throw InvalidParams("image value count does not match grid size");
  }
}

double Image::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Image::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Image::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Image::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double Image::mean() const { return sum() / static_cast<double>(values_.size()); }

bool Image::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Image& Image::operator+=(const Image& other) {
  require_same_grid(grid_, other.grid_, "image addition");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Image& Image::operator-=(const Image& other) {
  require_same_grid(grid_, other.grid_, "image subtraction");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Image& Image::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Image& Image::operator+=(double c) {
  for (double& v : values_) v += c;
  return *this;
}

double DualField::max_modulus() const {
  double m = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) {
    m = std::max(m, g1[k] * g1[k] + g2[k] * g2[k]);
  }
  return std::sqrt(m);
}

double max_abs_diff(const Image& a, const Image& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace bvg
