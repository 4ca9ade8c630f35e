#include "bvg/operators.hpp"

#include <cmath>

namespace bvg {

DualField gradient(const Image& u) {
  const Grid& g = u.grid();
  const std::size_t w = g.width;
  const std::size_t h = g.height;
  DualField out(g);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t k = y * w + x;
      out.g1[k] = x + 1 < w ? u[k + 1] - u[k] : 0.0;
      out.g2[k] = y + 1 < h ? u[k + w] - u[k] : 0.0;
    }
  }
  return out;
}

Image divergence(const DualField& f) {
  const Grid& g = f.grid;
  const std::size_t w = g.width;
  const std::size_t h = g.height;
  Image out(g);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t k = y * w + x;
      double d = 0.0;
      if (x + 1 < w) d += f.g1[k];
      if (x > 0) d -= f.g1[k - 1];
      if (y + 1 < h) d += f.g2[k];
      if (y > 0) d -= f.g2[k - w];
      out[k] = d;
    }
  }
  return out;
}

double tv_norm(const Image& u) {
  const Grid& g = u.grid();
  const std::size_t w = g.width;
  const std::size_t h = g.height;
  double s = 0.0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t k = y * w + x;
      const double dx = x + 1 < w ? u[k + 1] - u[k] : 0.0;
      const double dy = y + 1 < h ? u[k + w] - u[k] : 0.0;
      s += std::sqrt(dx * dx + dy * dy);
    }
  }
  return s * g.spacing;
}

double l2_norm_sq(const Image& u) {
  double s = 0.0;
  for (double v : u.values()) s += v * v;
  return s * u.grid().pixel_area();
}

double l2_norm(const Image& u) { return std::sqrt(l2_norm_sq(u)); }

double l2_inner(const Image& u, const Image& v) {
  require_same_grid(u.grid(), v.grid(), "l2_inner");
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s * u.grid().pixel_area();
}

double l1_norm(const Image& u) {
  double s = 0.0;
  for (double v : u.values()) s += std::abs(v);
  return s * u.grid().pixel_area();
}

double dual_inner(const DualField& g, const DualField& q) {
  require_same_grid(g.grid, q.grid, "dual_inner");
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.g1[k] * q.g1[k] + g.g2[k] * q.g2[k];
  return s * g.grid.pixel_area();
}

double bv_norm(const Image& u, BvConvention convention) {
  const double tv = tv_norm(u);
  return convention == BvConvention::Full ? l1_norm(u) + tv : tv;
}

const char* to_string(BvConvention c) { return c == BvConvention::Full ? "full" : "seminorm"; }

}  // namespace bvg
