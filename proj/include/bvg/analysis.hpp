#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvg/image.hpp"
#include "bvg/operators.hpp"
#include "bvg/projector.hpp"

namespace bvg {

/// The G-norm of an image is only finite on the bounded grid when its pixel
/// sum vanishes (every discrete divergence has zero sum).
class NonZeroMean : public Error {
 public:
  using Error::Error;
};

struct GnormOptions {
  /// Relative membership tolerance ||v - P_mu(v)|| <= tol ||v||; the search
  /// stops once the bracket is below tol times its upper end.
  double tol = 1e-2;
  bool subtract_mean = false;
  /// Inner projector controls; the radius is set by the bisection.
  ProjectorParams projector{1.0, 0.125, 1e-8, 5000};
  /// Iterations between membership checks inside one projection.
  int check_every = 50;
  /// Thresholds tried when turning an iterate into level-set certificates.
  int levels = 16;
};

struct GnormResult {
  double estimate = 0.0;  ///< bracket midpoint
  double bracket = 0.0;   ///< final bracket width
  double lower = 0.0;
  double upper = 0.0;
  /// Largest certified lower bound <u, v> / J(u) seen during the search.
  double certified_lower = 0.0;
  /// Smallest sup norm of an exact representation v = div g seen during the
  /// search (projector iterates completed by a Poisson correction).
  double certified_upper = 0.0;
  /// Sup norm of the Poisson representation of v, the first upper bound.
  double poisson_upper = 0.0;
  /// Isoperimetric upper bound ||v||_2 / (2 sqrt(pi)) used to open the search.
  double isoperimetric_upper = 0.0;
  /// True when the isoperimetric bound was probed and rejected (it can fail
  /// for mass concentrated at the domain boundary).
  bool upper_expanded = false;
  double subtracted_mean = 0.0;
  int projections = 0;
  int projector_iterations = 0;
  /// Membership tests that hit max_iters without a decision; each one is
  /// treated as "outside", which can only widen the reported bracket.
  int undecided = 0;
};

/// Zero-mean test: |sum v| h^2 <= 1e-8 ||v||_L1.
bool has_zero_mean(const Image& v);

/// ||v||_G = inf { ||g||_inf : v = div g } estimated by bisection on mu with the
/// projector as membership oracle (v lies in the G-ball of radius mu iff
/// P_mu(v) = v). Every checked iterate also yields certified bounds, which
/// narrow the bracket from both sides.
GnormResult gnorm_estimate(const Image& v, const GnormOptions& options);
GnormResult gnorm_estimate(const Image& v, double tol);

struct NormReport {
  double l1 = 0.0;
  double l2 = 0.0;
  double tv = 0.0;
  double bv = 0.0;  ///< l1 + tv
  double g = 0.0;
  double g_tolerance = 0.0;
  bool g_valid = false;
  double subtracted_mean = 0.0;
  std::string g_error;
};

NormReport norms(const Image& f, const GnormOptions& options);
NormReport norms(const Image& f, double tol);

enum class InputClass { TrivialV, Nontrivial, OutOfTheorem, Unknown };
const char* to_string(InputClass c);

/// Scalar gaps of the optimality conditions, raw values.
struct OptimalityGaps {
  double bv = 0.0;     ///< ||v||_BV - mu / (2 lambda)
  double g = 0.0;      ///< ||v||_G - 1 / (2 lambda)
  double uv = 0.0;     ///< <u, v> - ||u||_BV / (2 lambda)
  double vw = 0.0;     ///< <v, w> - mu ||w||_G / (2 lambda)
};

struct CheckOptions {
  double tol = 0.05;
  BvConvention convention = BvConvention::Full;
  GnormOptions gnorm{};
};

struct CaseReport {
  double lambda = 0.0;
  double mu = 0.0;
  double tol = 0.0;
  BvConvention convention = BvConvention::Full;
  double g_thresh = 0.0;   ///< 1 / (2 lambda)
  double bv_thresh = 0.0;  ///< mu / (2 lambda)

  // Input classification (classify_input).
  InputClass input_class = InputClass::Unknown;
  double f_g = 0.0;
  double f_bv = 0.0;
  bool predicts_case1 = false;   ///< ||f||_G < pi / (lambda mu)
  bool theorem1_regime = false;  ///< mu < 4 pi

  // Decomposition check (check_optimality).
  bool has_decomposition = false;
  OptimalityGaps gaps;
  double u_bv = 0.0;
  double v_bv = 0.0;
  double v_g = 0.0;
  double w_g = 0.0;
  double uv_inner = 0.0;
  double vw_inner = 0.0;
  bool u_zero = false;
  bool w_zero = false;
  bool case1 = false;
  bool case2 = false;
  bool case3 = false;
  bool trivial_optimum = false;
  bool v_g_valid = true;
  bool w_g_valid = true;

  std::vector<std::string> diagnostics;
};

CaseReport classify_input(const Image& f, double lambda, double mu, const CheckOptions& options);

/// The decomposition is given as its three parts; f is taken as their sum.
CaseReport check_optimality(const Image& u, const Image& v, const Image& w, double lambda,
                            double mu, const CheckOptions& options);

struct Lemma1Result {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// |<u, v>| <= ||u||_G ||v||_BV, with u zero-mean.
Lemma1Result lemma1_check(const Image& u, const Image& v, const GnormOptions& options,
                          BvConvention convention = BvConvention::Full);

}  // namespace bvg
