#include "bvg/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "bvg/poisson.hpp"

namespace bvg {

namespace {

double max_abs_change(const Image& a, const Image& b) { return max_abs_diff(a, b); }

DualField rescaled(const DualField& p, double factor) {
  DualField q = p;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q.g1[k] *= factor;
    q.g2[k] *= factor;
  }
  return q;
}

// Dual field of a previous projection together with its radius and input.
struct WarmStart {
  DualField dual;
  double radius = 0.0;
  Image input;
};

// A projection started from `warm` when given: its field is rescaled to the
// new radius and shifted by the Poisson representation of the input change,
// so a converged start stays converged when nothing changed. Without a warm
// start the projection starts from the Poisson representation of f.
Projection project_from(const Image& f, double radius, const ProjectorParams& base,
                        const WarmStart* warm) {
  ProjectOptions po;
  DualField start;
  if (warm != nullptr) {
    start = rescaled(warm->dual, warm->radius / radius);
    po.initial_dual = &start;
    po.correct_initial_dual = true;
    po.correction_reference = &warm->input;
  } else {
    po.start = ProjectStart::Poisson;
  }
  return project_g_ball(f, base.with_radius(radius), po);
}

struct TextureResult {
  Image w;
  double radius = 0.0;
  int projections = 0;
  int iterations = 0;
  std::optional<WarmStart> warm;
};

// Minimises lambda ||r - w||^2 + mu ||w||_G. By Moreau's identity the
// minimiser is r minus the projection of r on {J <= alpha}, alpha = mu/(2 lambda),
// and that projection is an ROF solution r - P_rho(r) whose TV equals alpha.
// rho is found by safeguarded regula falsi on psi(rho) = J(r - P_rho(r)),
// which decreases from J(r) at 0 to 0 at ||r - mean(r)||_G.
TextureResult penalized_texture(const Image& r, const BvgParams& p, double rho_guess,
                                const WarmStart* warm) {
  TextureResult out;
  const double alpha = p.mu / (2.0 * p.lambda);
  const double jr = tv_norm(r);
  if (jr <= alpha) {
    out.w = Image(r.grid());
    return out;
  }
  const DualField pf = poisson_field(r);
  double hi = pf.max_modulus();
  // Signed residuals psi - alpha at the bracket ends.
  double lo = 0.0;
  double f_lo = jr - alpha;
  double f_hi = -alpha;
  double rho = rho_guess > lo && rho_guess < hi ? rho_guess : hi * (1.0 - alpha / jr);
  std::optional<WarmStart> last;
  if (warm != nullptr) last = *warm;
  int side = 0;  // +1 after moving lo, -1 after moving hi
  for (int eval = 0; eval < 60; ++eval) {
    Projection proj = project_from(r, rho, p.projector, last ? &*last : nullptr);
    ++out.projections;
    out.iterations += proj.trace.iterations_used;
    const double psi = tv_norm(r - proj.value);
    last = WarmStart{std::move(proj.dual), rho, r};
    out.w = std::move(proj.value);
    out.radius = rho;
    if (std::abs(psi - alpha) <= p.level_tol * alpha || hi - lo <= 1e-12 * hi) break;
    // Illinois modification: halve the retained end's residual when the
    // same end moves twice in a row.
    if (psi > alpha) {
      lo = rho;
      f_lo = psi - alpha;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    } else {
      hi = rho;
      f_hi = psi - alpha;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    }
    double next = lo + (hi - lo) * f_lo / (f_lo - f_hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    rho = next;
  }
  out.warm = std::move(last);
  return out;
}

double energy_of(const Image& u, const Image& v, double lambda, double mu, double g) {
  return tv_norm(u) + lambda * l2_norm_sq(v) + mu * g;
}

}  // namespace

const char* to_string(TextureModel m) {
  return m == TextureModel::Penalized ? "penalized" : "constrained";
}

void BvgParams::validate() const {
  std::ostringstream os;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) os << "lambda must be > 0; ";
  if (!(mu > 0.0) || !std::isfinite(mu)) os << "mu must be > 0; ";
  if (!(stop_tol > 0.0)) os << "stop_tol must be > 0; ";
  if (max_outer_iters < 1) os << "max_outer_iters must be >= 1; ";
  if (!(level_tol > 0.0 && level_tol < 1.0)) os << "level_tol must lie in (0, 1); ";
  const std::string msg = os.str();
  if (!msg.empty()) throw InvalidParams("bvg: " + msg.substr(0, msg.size() - 2));
  projector.with_radius(1.0).validate();
}

Decomposition bvg_decompose(const Image& f, const BvgParams& p) {
  p.validate();
  Decomposition d;
  d.f = f;
  d.u = Image(f.grid());
  d.w = Image(f.grid());
  const double rof_radius = 1.0 / (2.0 * p.lambda);

  std::optional<WarmStart> u_warm;
  std::optional<WarmStart> w_warm;
  double rho = 0.0;

  for (int it = 1; it <= p.max_outer_iters; ++it) {
    OuterStep step;
    const Image r = f - d.u;
    const WarmStart* warm_w = p.warm_start && w_warm ? &*w_warm : nullptr;
    Image w_next;
    if (p.texture_model == TextureModel::Penalized) {
      TextureResult t = penalized_texture(r, p, rho, warm_w);
      w_next = std::move(t.w);
      if (t.radius > 0.0) rho = t.radius;
      step.texture_radius = t.radius;
      step.projections += t.projections;
      step.inner_iterations += t.iterations;
      if (t.warm) w_warm = std::move(t.warm);
    } else {
      Projection proj = project_from(r, p.mu, p.projector, warm_w);
      w_next = std::move(proj.value);
      step.texture_radius = p.mu;
      step.projections += 1;
      step.inner_iterations += proj.trace.iterations_used;
      w_warm = WarmStart{std::move(proj.dual), p.mu, r};
    }

    const Image s = f - w_next;
    const WarmStart* warm_u = p.warm_start && u_warm ? &*u_warm : nullptr;
    Projection proj = project_from(s, rof_radius, p.projector, warm_u);
    Image u_next = s - proj.value;
    u_warm = WarmStart{std::move(proj.dual), rof_radius, s};
    step.projections += 1;
    step.inner_iterations += proj.trace.iterations_used;

    step.change_u = max_abs_change(u_next, d.u);
    step.change_w = max_abs_change(w_next, d.w);
    d.u = std::move(u_next);
    d.w = std::move(w_next);
    const Image v = f - d.u - d.w;
    const double g = p.texture_model == TextureModel::Penalized ? step.texture_radius : 0.0;
    step.energy = energy_of(d.u, v, p.lambda, p.mu, g);

    d.trace.outer_iterations = it;
    d.trace.inner_iterations += step.inner_iterations;
    d.trace.final_change = std::max(step.change_u, step.change_w);
    d.trace.steps.push_back(step);
    if (d.trace.final_change <= p.stop_tol) {
      d.trace.converged = true;
      break;
    }
  }
  d.v = f - d.u - d.w;
  return d;
}

Objective objective(const Image& u, const Image& v, const Image& w, double lambda, double mu,
                    const GnormOptions& gnorm, BvConvention convention) {
  require_same_grid(u.grid(), v.grid(), "objective u/v");
  require_same_grid(u.grid(), w.grid(), "objective u/w");
  Objective o;
  o.bv_term = bv_norm(u, convention);
  o.l2_term = lambda * l2_norm_sq(v);
  try {
    const GnormResult g = gnorm_estimate(w, gnorm);
    o.g_term = mu * g.estimate;
    o.g_error = mu * g.bracket;
  } catch (const NonZeroMean&) {
    o.g_valid = false;
    o.g_term = std::numeric_limits<double>::infinity();
  }
  o.total = o.bv_term + o.l2_term + o.g_term;
  return o;
}

Objective objective(const Decomposition& d, double lambda, double mu, const GnormOptions& gnorm,
                    BvConvention convention) {
  return objective(d.u, d.v, d.w, lambda, mu, gnorm, convention);
}

}  // namespace bvg
