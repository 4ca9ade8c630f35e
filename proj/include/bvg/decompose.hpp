#pragma once

#include <vector>

#include "bvg/analysis.hpp"
#include "bvg/image.hpp"
#include "bvg/operators.hpp"
#include "bvg/projector.hpp"

namespace bvg {

/// How the texture part w is updated for fixed u.
enum class TextureModel {
  /// Exact minimisation of lambda ||f - u - w||^2 + mu ||w||_G over w:
  /// w = P_rho(f - u) with rho chosen so that J(f - u - w) = mu / (2 lambda)
  /// (w = 0 when J(f - u) is already below that level).
  Penalized,
  /// w = P_mu(f - u): w is constrained to the G-ball of radius mu.
  Constrained,
};
const char* to_string(TextureModel m);

struct BvgParams {
  double lambda = 1.0;
  double mu = 1.0;
  double stop_tol = 1e-4;
  int max_outer_iters = 200;
  /// Inner projector controls; radii are set by the solver.
  ProjectorParams projector{};
  /// Reuse the inner dual fields of the previous outer iteration. Without it
  /// every inner projection starts from the Poisson representation of its
  /// own input.
  bool warm_start = true;
  TextureModel texture_model = TextureModel::Penalized;
  /// Relative tolerance on J(f - u - w) = mu / (2 lambda) in the penalized
  /// texture step.
  double level_tol = 2e-3;

  void validate() const;
};

struct OuterStep {
  double change_u = 0.0;  ///< max |u_{n+1} - u_n|
  double change_w = 0.0;  ///< max |w_{n+1} - w_n|
  /// Radius of the G-ball w was projected on (rho, or mu when constrained).
  double texture_radius = 0.0;
  int inner_iterations = 0;
  int projections = 0;
  /// J(u) + lambda ||v||^2 + mu ||w||_G with ||w||_G taken as the texture
  /// radius when w lies on that sphere (penalized), or without the G term
  /// when w is constrained.
  double energy = 0.0;
};

struct BvgTrace {
  int outer_iterations = 0;
  bool converged = false;
  double final_change = 0.0;
  int inner_iterations = 0;
  std::vector<OuterStep> steps;
};

/// f = u + v + w: u structures (BV), v residual (L^2), w texture (G).
struct Decomposition {
  Image f;
  Image u;
  Image v;
  Image w;
  BvgTrace trace;
};

/// Alternating minimisation starting from u = w = 0:
///   w_{n+1} = texture step on f - u_n,
///   u_{n+1} = s - P_{1/(2 lambda)}(s) with s = f - w_{n+1},
/// until both parts change by at most stop_tol in max-norm. v = f - u - w.
Decomposition bvg_decompose(const Image& f, const BvgParams& params);

struct Objective {
  double total = 0.0;
  double bv_term = 0.0;
  double l2_term = 0.0;
  double g_term = 0.0;
  /// mu times the estimator's bracket width.
  double g_error = 0.0;
  bool g_valid = true;
};

/// ||u||_BV + lambda ||v||^2 + mu ||w||_G. With an invalid G-norm (non-zero
/// mean w and no mean subtraction) the G term and total are +infinity.
Objective objective(const Image& u, const Image& v, const Image& w, double lambda, double mu,
                    const GnormOptions& gnorm = {},
                    BvConvention convention = BvConvention::Full);
Objective objective(const Decomposition& d, double lambda, double mu,
                    const GnormOptions& gnorm = {},
                    BvConvention convention = BvConvention::Full);

}  // namespace bvg
