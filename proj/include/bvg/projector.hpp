#pragma once

#include <functional>
#include <vector>

#include "bvg/image.hpp"

namespace bvg {

/// Controls for the dual fixed-point projection onto the G-ball.
struct ProjectorParams {
  double radius = 1.0;   ///< ball radius in physical G-norm units
  double step = 0.125;   ///< fixed-point step tau, 0 < tau <= 1/8
  double fp_tol = 1e-6;  ///< stop when the max-norm change of the dual field is below this
  int max_iters = 5000;

  void validate() const;
  ProjectorParams with_radius(double r) const {
    ProjectorParams p = *this;
    p.radius = r;
    return p;
  }
};

struct SolveTrace {
  int iterations_used = 0;
  double final_residual = 0.0;  ///< last max-norm change of the dual field
  bool converged = false;
  /// Iterations spent on coarser levels when multilevel start is enabled.
  int coarse_iterations = 0;
  /// ROF energy J(u) + ||f - u||^2 / (2 radius) of u = f - P(f) per iteration,
  /// only filled when requested.
  std::vector<double> energy_history;
};

/// Where the dual iteration starts when no initial field is given.
enum class ProjectStart {
  Zero,        ///< g = 0
  Multilevel,  ///< solve on a 2x coarser grid first and prolongate its field
  Poisson,     ///< the Poisson representation of f - mean(f), clipped to |g| <= 1
};

struct ProjectOptions {
  /// Dual field to start from (normalised so that |g| <= 1); overrides `start`.
  const DualField* initial_dual = nullptr;
  ProjectStart start = ProjectStart::Zero;
  /// Replace `initial_dual` p by clip(p + q), where q is the Poisson field that
  /// makes r div(p + q) equal f - mean(f) exactly. A start that is feasible up
  /// to a smooth residual then becomes an exact fixed point.
  bool correct_initial_dual = false;
  /// Input the initial dual was computed for. When set, the correction only
  /// accounts for the change f - *correction_reference, which shifts the
  /// projection by that change instead of forcing it to equal f.
  const Image* correction_reference = nullptr;
  bool record_energy = false;
  /// Called every `monitor_every` iterations with the current dual field;
  /// returning true stops the iteration early (trace.converged stays false).
  std::function<bool(const DualField&, int)> monitor;
  int monitor_every = 50;
};

struct Projection {
  Image value;     ///< P(f) = radius * div(dual), in physical units
  DualField dual;  ///< normalised dual field, |dual| <= 1 pointwise
  SolveTrace trace;
};

/// Nonlinear projection of f onto {div g : |g| <= radius} computed with
/// Chambolle's semi-implicit dual iteration
///   g <- (g + tau grad(div g - f/r)) / (1 + tau |grad(div g - f/r)|)
/// where r is the radius in pixel units (radius / spacing).
Projection project_g_ball(const Image& f, const ProjectorParams& params,
                          const ProjectOptions& options = {});

/// Image r * div(dual) for a normalised dual field, r = radius / spacing.
Image dual_to_image(const DualField& dual, double radius);

struct RofResult {
  Image u;  ///< minimiser of J(u) + lambda ||f - u||^2
  Image v;  ///< f - u
  SolveTrace trace;
  DualField dual;
};

/// ROF model with fidelity weight lambda, solved as u = f - P_{G_{1/(2 lambda)}}(f).
/// The radius of `params` is ignored; the other controls are used as given.
RofResult rof_solve(const Image& f, double lambda, const ProjectorParams& params,
                    const ProjectOptions& options = {});

/// Energy J(u) + lambda ||f - u||^2.
struct RofEnergy {
  double tv = 0.0;
  double fidelity = 0.0;
  double total() const { return tv + fidelity; }
};
RofEnergy rof_energy(const Image& f, const Image& u, double lambda);

/// 2x2 block average; odd trailing rows/columns average what is available.
Image restrict_image(const Image& f);

}  // namespace bvg
