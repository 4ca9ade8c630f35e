#include "bvg/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "bvg/operators.hpp"

namespace bvg {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex g_planner_mutex;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<double*>(fftw_malloc(n * sizeof(double)))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* data;
};

void run_dct(int rows, int cols, double* in, double* out, fftw_r2r_kind kind) {
  fftw_plan plan;
  {
    std::lock_guard lock(g_planner_mutex);
    plan = fftw_plan_r2r_2d(rows, cols, in, out, kind, kind, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("poisson: could not create transform plan");
  fftw_execute(plan);
  std::lock_guard lock(g_planner_mutex);
  fftw_destroy_plan(plan);
}

}  // namespace

Image solve_neumann_poisson(const Image& rhs) {
  const Grid& g = rhs.grid();
  const std::size_t w = g.width;
  const std::size_t h = g.height;
  const std::size_t n = g.size();
  FftwBuffer a(n);
  FftwBuffer b(n);
  const double mean = rhs.mean();
  for (std::size_t k = 0; k < n; ++k) a.data[k] = rhs[k] - mean;
  run_dct(static_cast<int>(h), static_cast<int>(w), a.data, b.data, FFTW_REDFT10);

  std::vector<double> ex(w);
  std::vector<double> ey(h);
  for (std::size_t x = 0; x < w; ++x) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(x) / (2.0 * static_cast<double>(w)));
    ex[x] = -4.0 * s * s;
  }
  for (std::size_t y = 0; y < h; ++y) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(y) / (2.0 * static_cast<double>(h)));
    ey[y] = -4.0 * s * s;
  }
  // The forward/backward transform pair scales by 4wh.
  const double norm = 4.0 * static_cast<double>(w) * static_cast<double>(h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double lam = ex[x] + ey[y];
      b.data[y * w + x] = lam == 0.0 ? 0.0 : b.data[y * w + x] / (lam * norm);
    }
  }
  run_dct(static_cast<int>(h), static_cast<int>(w), b.data, a.data, FFTW_REDFT01);

  Image phi(g);
  for (std::size_t k = 0; k < n; ++k) phi[k] = a.data[k];
  return phi;
}

DualField poisson_field(const Image& v) {
  DualField f = gradient(solve_neumann_poisson(v));
  const double s = v.grid().spacing;
  for (std::size_t k = 0; k < f.size(); ++k) {
    f.g1[k] *= s;
    f.g2[k] *= s;
  }
  return f;
}

}  // namespace bvg
