#include "bvg/projector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bvg/operators.hpp"
#include "bvg/parallel.hpp"
#include "bvg/poisson.hpp"

namespace bvg {

namespace {

constexpr std::size_t kMinCoarseSide = 32;

// Zero the components that carry flux through the outer boundary; the
// divergence ignores them and the iteration never changes them.
void clear_boundary_flux(DualField& p) {
  const std::size_t w = p.grid.width;
  const std::size_t h = p.grid.height;
  for (std::size_t y = 0; y < h; ++y) p.g1[y * w + w - 1] = 0.0;
  for (std::size_t x = 0; x < w; ++x) p.g2[(h - 1) * w + x] = 0.0;
}

void clip_to_unit_ball(DualField& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double n = std::sqrt(p.g1[k] * p.g1[k] + p.g2[k] * p.g2[k]);
    if (n > 1.0) {
      p.g1[k] /= n;
      p.g2[k] /= n;
    }
  }
}

// Row y of d = div(p) - f / r, relying on the zero boundary-flux invariant.
// `p2_up` is row y - 1 of the second component, null on the first row.
void residual_row(const double* p1r, const double* p2r, const double* p2_up, const double* fr,
                  double inv_r, double* dr, std::size_t w) {
  if (p2_up != nullptr) {
    dr[0] = p1r[0] + p2r[0] - p2_up[0] - fr[0] * inv_r;
    for (std::size_t x = 1; x < w; ++x) {
      dr[x] = p1r[x] - p1r[x - 1] + p2r[x] - p2_up[x] - fr[x] * inv_r;
    }
  } else {
    dr[0] = p1r[0] + p2r[0] - fr[0] * inv_r;
    for (std::size_t x = 1; x < w; ++x) dr[x] = p1r[x] - p1r[x - 1] + p2r[x] - fr[x] * inv_r;
  }
}

// Semi-implicit update of row y of p from residual rows d (row y) and dn
// (row y + 1, null on the last row). Returns the max-norm change.
double update_row(double* p1r, double* p2r, const double* d, const double* dn, double tau,
                  std::size_t w) {
  double change = 0.0;
  const std::size_t inner = w - 1;
  if (dn != nullptr) {
#pragma omp simd reduction(max : change)
    for (std::size_t x = 0; x < inner; ++x) {
      const double gx = d[x + 1] - d[x];
      const double gy = dn[x] - d[x];
      const double s = 1.0 / (1.0 + tau * std::sqrt(gx * gx + gy * gy));
      const double a = (p1r[x] + tau * gx) * s;
      const double b = (p2r[x] + tau * gy) * s;
      const double ca = std::abs(a - p1r[x]);
      const double cb = std::abs(b - p2r[x]);
      change = change > ca ? change : ca;
      change = change > cb ? change : cb;
      p1r[x] = a;
      p2r[x] = b;
    }
    const double gy = dn[inner] - d[inner];
    const double b = (p2r[inner] + tau * gy) / (1.0 + tau * std::abs(gy));
    change = std::max(change, std::abs(b - p2r[inner]));
    p2r[inner] = b;
  } else {
#pragma omp simd reduction(max : change)
    for (std::size_t x = 0; x < inner; ++x) {
      const double gx = d[x + 1] - d[x];
      const double a = (p1r[x] + tau * gx) / (1.0 + tau * std::abs(gx));
      const double ca = std::abs(a - p1r[x]);
      change = change > ca ? change : ca;
      p1r[x] = a;
    }
  }
  return change;
}

// One full iteration: the residual field is computed from the old p and the
// update applied from it, as two logical passes. Rows are swept with a
// two-row residual buffer so d never round-trips through memory; each
// chunk of rows gets its first residual row computed up front, before any
// row is updated, so the result does not depend on the chunking.
double iterate_dual(DualField& p, std::span<const double> f, double inv_r, double tau,
                    std::vector<double>& scratch) {
  const std::size_t w = p.grid.width;
  const std::size_t h = p.grid.height;
  double* p1 = p.g1.data();
  double* p2 = p.g2.data();
  const std::size_t chunks = std::clamp<std::size_t>(h / 16, 1, static_cast<std::size_t>(thread_count()));
  scratch.resize((chunks + 2 * chunks) * w);
  double* heads = scratch.data();
  auto chunk_begin = [&](std::size_t c) { return c * h / chunks; };
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t y = chunk_begin(c);
    residual_row(p1 + y * w, p2 + y * w, y > 0 ? p2 + (y - 1) * w : nullptr, f.data() + y * w,
                 inv_r, heads + c * w, w);
  }
  double change = 0.0;
#pragma omp parallel for schedule(static, 1) reduction(max : change) num_threads(static_cast<int>(chunks))
  for (std::ptrdiff_t cc = 0; cc < static_cast<std::ptrdiff_t>(chunks); ++cc) {
    const auto c = static_cast<std::size_t>(cc);
    const std::size_t y0 = chunk_begin(c);
    const std::size_t y1 = chunk_begin(c + 1);
    double* cur = scratch.data() + (chunks + 2 * c) * w;
    double* next = cur + w;
    std::copy_n(heads + c * w, w, cur);
    double local = 0.0;
    for (std::size_t y = y0; y < y1; ++y) {
      double* p1r = p1 + y * w;
      double* p2r = p2 + y * w;
      const double* dn = nullptr;
      if (y + 1 < h) {
        if (y + 1 == y1) {
          dn = heads + (c + 1) * w;
        } else {
          residual_row(p1r + w, p2r + w, p2r, f.data() + (y + 1) * w, inv_r, next, w);
          dn = next;
        }
      }
      local = std::max(local, update_row(p1r, p2r, cur, dn, tau, w));
      std::swap(cur, next);
    }
    change = std::max(change, local);
  }
  return change;
}

// Flux-consistent prolongation: a coarse edge flux is copied to the fine edge
// it coincides with, and the fine edge in the middle of a coarse cell gets the
// average of the two coarse edges around it.
DualField prolongate_dual(const DualField& coarse, const Grid& fine) {
  DualField p(fine);
  const std::size_t cw = coarse.grid.width;
  const std::size_t ch = coarse.grid.height;
  auto c1 = [&](std::ptrdiff_t x, std::size_t y) {
    return x < 0 ? 0.0 : coarse.g1[y * cw + static_cast<std::size_t>(x)];
  };
  auto c2 = [&](std::size_t x, std::ptrdiff_t y) {
    return y < 0 ? 0.0 : coarse.g2[static_cast<std::size_t>(y) * cw + x];
  };
  for (std::size_t y = 0; y < fine.height; ++y) {
    const std::size_t cy = std::min(y / 2, ch - 1);
    for (std::size_t x = 0; x < fine.width; ++x) {
      const std::size_t cx = std::min(x / 2, cw - 1);
      const std::size_t k = y * fine.width + x;
      const auto X = static_cast<std::ptrdiff_t>(cx);
      const auto Y = static_cast<std::ptrdiff_t>(cy);
      p.g1[k] = (x % 2 == 1) ? c1(X, cy) : 0.5 * (c1(X - 1, cy) + c1(X, cy));
      p.g2[k] = (y % 2 == 1) ? c2(cx, Y) : 0.5 * (c2(cx, Y - 1) + c2(cx, Y));
    }
  }
  clear_boundary_flux(p);
  clip_to_unit_ball(p);
  return p;
}

Projection project_impl(const Image& f, const ProjectorParams& params,
                        const ProjectOptions& options) {
  const Grid& grid = f.grid();
  const double r = params.radius / grid.spacing;
  const double inv_r = 1.0 / r;

  Projection out;
  out.trace = SolveTrace{};

  if (options.initial_dual != nullptr) {
    require_same_grid(options.initial_dual->grid, grid, "initial dual field");
    out.dual = *options.initial_dual;
    out.dual.grid = grid;
    clear_boundary_flux(out.dual);
    if (options.correct_initial_dual) {
      const Image residual = options.correction_reference != nullptr
                                 ? f - *options.correction_reference
                                 : f - dual_to_image(out.dual, params.radius);
      const DualField q = poisson_field(residual);
      const double s = 1.0 / params.radius;
      for (std::size_t k = 0; k < q.size(); ++k) {
        out.dual.g1[k] += s * q.g1[k];
        out.dual.g2[k] += s * q.g2[k];
      }
      clear_boundary_flux(out.dual);
    }
    clip_to_unit_ball(out.dual);
  } else if (options.start == ProjectStart::Poisson) {
    out.dual = poisson_field(f);
    const double s = 1.0 / params.radius;
    for (std::size_t k = 0; k < out.dual.size(); ++k) {
      out.dual.g1[k] *= s;
      out.dual.g2[k] *= s;
    }
    clear_boundary_flux(out.dual);
    clip_to_unit_ball(out.dual);
  } else if (options.start == ProjectStart::Multilevel &&
             std::min(grid.width, grid.height) >= 2 * kMinCoarseSide) {
    ProjectOptions coarse_opts;
    coarse_opts.start = ProjectStart::Multilevel;
    const Projection coarse = project_impl(restrict_image(f), params, coarse_opts);
    out.dual = prolongate_dual(coarse.dual, grid);
    out.trace.coarse_iterations = coarse.trace.iterations_used + coarse.trace.coarse_iterations;
  } else {
    out.dual = DualField(grid);
  }

  const double lambda = 1.0 / (2.0 * params.radius);
  std::vector<double> scratch;
  for (int it = 1; it <= params.max_iters; ++it) {
    const double change = iterate_dual(out.dual, f.values(), inv_r, params.step, scratch);
    out.trace.iterations_used = it;
    out.trace.final_residual = change;
    if (options.record_energy) {
      Image u = f - dual_to_image(out.dual, params.radius);
      out.trace.energy_history.push_back(rof_energy(f, u, lambda).total());
    }
    if (change <= params.fp_tol) {
      out.trace.converged = true;
      break;
    }
    if (options.monitor && options.monitor_every > 0 && it % options.monitor_every == 0 &&
        options.monitor(out.dual, it)) {
      break;
    }
  }
  out.value = dual_to_image(out.dual, params.radius);
  return out;
}

}  // namespace

void ProjectorParams::validate() const {
  std::ostringstream os;
  if (!(radius > 0.0) || !std::isfinite(radius)) os << "radius must be > 0; ";
  if (!(step > 0.0) || step > 0.125) os << "step must lie in (0, 1/8]; ";
  if (!(fp_tol > 0.0)) os << "fp_tol must be > 0; ";
  if (max_iters < 1) os << "max_iters must be >= 1; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw InvalidParams("projector: " + msg.substr(0, msg.size() - 2));
}

Image dual_to_image(const DualField& dual, double radius) {
  Image v = divergence(dual);
  v *= radius / dual.grid.spacing;
  return v;
}

Image restrict_image(const Image& f) {
  const Grid& g = f.grid();
  Grid c;
  c.width = (g.width + 1) / 2;
  c.height = (g.height + 1) / 2;
  c.spacing = 2.0 * g.spacing;
  c.x0 = g.x0 + 0.5 * g.spacing;
  c.y0 = g.y0 + 0.5 * g.spacing;
  Image out(c);
  for (std::size_t cy = 0; cy < c.height; ++cy) {
    for (std::size_t cx = 0; cx < c.width; ++cx) {
      double s = 0.0;
      int n = 0;
      for (std::size_t y = 2 * cy; y < std::min(2 * cy + 2, g.height); ++y) {
        for (std::size_t x = 2 * cx; x < std::min(2 * cx + 2, g.width); ++x) {
          s += f.at(x, y);
          ++n;
        }
      }
      out.at(cx, cy) = s / n;
    }
  }
  return out;
}

Projection project_g_ball(const Image& f, const ProjectorParams& params,
                          const ProjectOptions& options) {
  params.validate();
  return project_impl(f, params, options);
}

RofEnergy rof_energy(const Image& f, const Image& u, double lambda) {
  return RofEnergy{tv_norm(u), lambda * l2_norm_sq(f - u)};
}

RofResult rof_solve(const Image& f, double lambda, const ProjectorParams& params,
                    const ProjectOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidParams("rof: lambda must be > 0");
  }
  Projection p = project_g_ball(f, params.with_radius(1.0 / (2.0 * lambda)), options);
  RofResult out;
  out.v = std::move(p.value);
  out.u = f - out.v;
  out.trace = std::move(p.trace);
  out.dual = std::move(p.dual);
  return out;
}

}  // namespace bvg
