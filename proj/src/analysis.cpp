#include "bvg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bvg/poisson.hpp"

namespace bvg {

namespace {

// Any u with J(u) > 0 certifies ||v||_G >= <u, v> / J(u).
double duality_lower_bound(const Image& u, const Image& v) {
  const double j = tv_norm(u);
  if (!(j > 0.0)) return 0.0;
  return std::max(0.0, l2_inner(u, v) / j);
}

// Indicators of super-level sets of u are test functions too, and usually
// much better ones than a noisy iterate.
double level_set_lower_bound(const Image& u, const Image& v, int levels) {
  const double lo = u.min();
  const double hi = u.max();
  if (!(hi > lo)) return 0.0;
  double best = 0.0;
  Image ind(u.grid());
  for (int k = 1; k < levels; ++k) {
    const double t = lo + (hi - lo) * k / levels;
    double inner = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const bool in = u[i] > t;
      ind[i] = in ? 1.0 : 0.0;
      if (in) inner += v[i];
    }
    const double j = tv_norm(ind);
    if (j > 0.0) best = std::max(best, std::abs(inner * u.grid().pixel_area()) / j);
  }
  return best;
}

double sup_modulus(const DualField& g) {
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    m = std::max(m, std::sqrt(g.g1[k] * g.g1[k] + g.g2[k] * g.g2[k]));
  }
  return m;
}

// The projector iterate represents v - u with u = v - mu div(p) / h. Adding the
// Poisson field of u gives an exact representation of v, so its sup norm
// bounds ||v||_G from above.
double corrected_upper_bound(const DualField& p, double mu, const Image& u) {
  DualField g = poisson_field(u);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.g1[k] += mu * p.g1[k];
    g.g2[k] += mu * p.g2[k];
  }
  return sup_modulus(g);
}

DualField scaled_start(const DualField& g, double scale) {
  DualField p = g;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p.g1[k] *= scale;
    p.g2[k] *= scale;
  }
  return p;
}

enum class Verdict { Inside, Outside, Undecided, Resolved };

class Estimator {
 public:
  Estimator(const Image& v, const GnormOptions& opts, GnormResult& res)
      : v_(v), opts_(opts), res_(res), v_norm_(l2_norm(v)) {}

  void run() {
    const DualField g0 = poisson_field(v_);
    res_.isoperimetric_upper = v_norm_ / (2.0 * std::sqrt(std::numbers::pi));
    res_.poisson_upper = sup_modulus(g0);
    res_.certified_upper = res_.poisson_upper;
    hi_ = res_.certified_upper;
    start_ = g0;
    start_mu_ = 1.0;

    // The isoperimetric bound holds on the plane but can fail on a bounded
    // grid, so it is only a first probe, and the bracket stays open above it
    // until the probe is accepted.
    if (res_.isoperimetric_upper < hi_) {
      const Verdict v = test(res_.isoperimetric_upper);
      if (v == Verdict::Resolved) return finish();
      if (v != Verdict::Inside) res_.upper_expanded = true;
    }
    while (!done()) {
      if (test(0.5 * (lo_ + hi_)) == Verdict::Resolved) break;
    }
    finish();
  }

 private:
  bool done() const { return hi_ - lo_ <= opts_.tol * hi_; }

  void tighten() {
    lo_ = std::max(lo_, res_.certified_lower);
    hi_ = std::min(hi_, res_.certified_upper);
    hi_ = std::max(hi_, lo_);
  }

  Verdict test(double mu) {
    DualField start = scaled_start(start_, start_mu_ / mu);
    ProjectOptions po;
    po.initial_dual = &start;
    po.correct_initial_dual = true;
    po.monitor_every = opts_.check_every;
    Verdict verdict = Verdict::Undecided;
    double relres = 1.0;
    auto assess = [&](const DualField& p) {
      const Image u = v_ - dual_to_image(p, mu);
      relres = l2_norm(u) / v_norm_;
      res_.certified_lower = std::max({res_.certified_lower, duality_lower_bound(u, v_),
                                        level_set_lower_bound(u, v_, opts_.levels)});
      res_.certified_upper = std::min(res_.certified_upper, corrected_upper_bound(p, mu, u));
      if (res_.certified_upper - res_.certified_lower <= opts_.tol * res_.certified_upper) {
        verdict = Verdict::Resolved;
      } else if (res_.certified_upper <= mu || relres <= opts_.tol) {
        verdict = Verdict::Inside;
      } else if (res_.certified_lower > mu) {
        verdict = Verdict::Outside;
      }
      return verdict != Verdict::Undecided;
    };
    po.monitor = [&](const DualField& p, int) { return assess(p); };
    Projection proj = project_g_ball(v_, opts_.projector.with_radius(mu), po);
    ++res_.projections;
    res_.projector_iterations += proj.trace.iterations_used;
    if (verdict == Verdict::Undecided) {
      assess(proj.dual);
      // A converged projection that still leaves a residual means v is outside.
      if (verdict == Verdict::Undecided && proj.trace.converged) verdict = Verdict::Outside;
    }
    if (verdict == Verdict::Undecided) {
      ++res_.undecided;
      verdict = Verdict::Outside;
    }
    if (verdict == Verdict::Inside) hi_ = std::min(hi_, mu);
    if (verdict == Verdict::Outside) lo_ = std::max(lo_, mu);
    tighten();
    start_ = std::move(proj.dual);
    start_mu_ = mu;
    return verdict;
  }

  void finish() {
    tighten();
    res_.lower = lo_;
    res_.upper = hi_;
    res_.estimate = 0.5 * (lo_ + hi_);
    res_.bracket = std::max(hi_ - lo_, std::numeric_limits<double>::min());
  }

  const Image& v_;
  const GnormOptions& opts_;
  GnormResult& res_;
  double v_norm_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  DualField start_;
  double start_mu_ = 1.0;
};

}  // namespace

bool has_zero_mean(const Image& v) {
  const double l1 = l1_norm(v);
  return std::abs(v.sum() * v.grid().pixel_area()) <= 1e-8 * l1;
}

GnormResult gnorm_estimate(const Image& input, const GnormOptions& opts) {
  if (!(opts.tol > 0.0) || opts.tol >= 1.0) throw InvalidParams("gnorm: tol must lie in (0, 1)");
  opts.projector.validate();
  GnormResult res;
  Image v = input;
  if (!has_zero_mean(v)) {
    if (!opts.subtract_mean) {
      std::ostringstream os;
      os << "gnorm: image mean " << v.mean()
         << " is not zero; the G-norm is infinite on a bounded grid (enable mean subtraction)";
      throw NonZeroMean(os.str());
    }
    res.subtracted_mean = v.mean();
    v += -res.subtracted_mean;
  }
  if (l2_norm(v) == 0.0) {
    res.bracket = std::numeric_limits<double>::min();
    return res;
  }
  Estimator(v, opts, res).run();
  return res;
}

GnormResult gnorm_estimate(const Image& v, double tol) {
  GnormOptions opts;
  opts.tol = tol;
  return gnorm_estimate(v, opts);
}

NormReport norms(const Image& f, const GnormOptions& options) {
  NormReport r;
  r.l1 = l1_norm(f);
  r.l2 = l2_norm(f);
  r.tv = tv_norm(f);
  r.bv = r.l1 + r.tv;
  try {
    const GnormResult g = gnorm_estimate(f, options);
    r.g = g.estimate;
    r.g_tolerance = g.bracket;
    r.g_valid = true;
    r.subtracted_mean = g.subtracted_mean;
  } catch (const NonZeroMean& e) {
    r.g_valid = false;
    r.g_error = e.what();
  }
  return r;
}

NormReport norms(const Image& f, double tol) {
  GnormOptions opts;
  opts.tol = tol;
  return norms(f, opts);
}

const char* to_string(InputClass c) {
  switch (c) {
    case InputClass::TrivialV:
      return "TRIVIAL_V";
    case InputClass::Nontrivial:
      return "NONTRIVIAL";
    case InputClass::OutOfTheorem:
      return "OUT_OF_THEOREM";
    case InputClass::Unknown:
      break;
  }
  return "UNKNOWN";
}

namespace {

void fill_thresholds(CaseReport& r, double lambda, double mu, const CheckOptions& o) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidParams("lambda and mu must be > 0");
  if (!(o.tol > 0.0)) throw InvalidParams("tol must be > 0");
  r.lambda = lambda;
  r.mu = mu;
  r.tol = o.tol;
  r.convention = o.convention;
  r.g_thresh = 1.0 / (2.0 * lambda);
  r.bv_thresh = mu / (2.0 * lambda);
  r.theorem1_regime = mu < 4.0 * std::numbers::pi;
}

}  // namespace

CaseReport classify_input(const Image& f, double lambda, double mu, const CheckOptions& o) {
  CaseReport r;
  fill_thresholds(r, lambda, mu, o);
  r.f_bv = bv_norm(f, o.convention);
  try {
    r.f_g = gnorm_estimate(f, o.gnorm).estimate;
  } catch (const NonZeroMean& e) {
    r.input_class = InputClass::Unknown;
    r.diagnostics.emplace_back(e.what());
    return r;
  }
  if (r.f_g > r.g_thresh) {
    r.input_class = InputClass::OutOfTheorem;
  } else if (r.f_bv <= r.bv_thresh) {
    r.input_class = InputClass::TrivialV;
  } else {
    r.input_class = InputClass::Nontrivial;
  }
  r.predicts_case1 = r.f_g < std::numbers::pi / (lambda * mu);
  return r;
}

CaseReport check_optimality(const Image& u, const Image& v, const Image& w, double lambda,
                            double mu, const CheckOptions& o) {
  require_same_grid(u.grid(), v.grid(), "check_optimality u/v");
  require_same_grid(u.grid(), w.grid(), "check_optimality u/w");
  CaseReport r;
  fill_thresholds(r, lambda, mu, o);
  r.has_decomposition = true;

  const Image f = u + v + w;
  r.f_bv = bv_norm(f, o.convention);
  r.u_bv = bv_norm(u, o.convention);
  r.v_bv = bv_norm(v, o.convention);
  r.uv_inner = l2_inner(u, v);
  r.vw_inner = l2_inner(v, w);

  try {
    r.v_g = gnorm_estimate(v, o.gnorm).estimate;
  } catch (const NonZeroMean& e) {
    r.v_g_valid = false;
    r.diagnostics.emplace_back(std::string("v: ") + e.what());
  }
  try {
    r.w_g = gnorm_estimate(w, o.gnorm).estimate;
  } catch (const NonZeroMean& e) {
    r.w_g_valid = false;
    r.diagnostics.emplace_back(std::string("w: ") + e.what());
  }

  r.gaps.bv = r.v_bv - r.bv_thresh;
  r.gaps.g = r.v_g - r.g_thresh;
  r.gaps.uv = r.uv_inner - r.g_thresh * r.u_bv;
  r.gaps.vw = r.vw_inner - r.bv_thresh * r.w_g;

  const double tol = o.tol;
  r.u_zero = r.u_bv <= tol * std::max(r.f_bv, 1e-300);
  const double f_l2 = l2_norm(f);
  r.w_zero = l2_norm(w) <= tol * std::max(f_l2, 1e-300) || f_l2 == 0.0;
  if (f_l2 == 0.0) r.u_zero = true;

  const bool bv_eq = std::abs(r.gaps.bv) <= tol * r.bv_thresh;
  const bool bv_le = r.gaps.bv <= tol * r.bv_thresh;
  const bool g_eq = r.v_g_valid && std::abs(r.gaps.g) <= tol * r.g_thresh;
  const bool g_lt = r.v_g_valid && r.gaps.g < tol * r.g_thresh;
  const bool uv_eq = r.u_zero || std::abs(r.gaps.uv) <= tol * r.g_thresh * r.u_bv;
  const bool vw_eq =
      r.w_zero || (r.w_g_valid && std::abs(r.gaps.vw) <= tol * r.bv_thresh * r.w_g);

  r.case1 = r.u_zero && bv_eq && g_lt && vw_eq;
  r.case2 = r.w_zero && bv_le && g_eq && uv_eq;
  r.case3 = bv_eq && g_eq && uv_eq && vw_eq;
  r.trivial_optimum = r.u_zero && r.w_zero && bv_le && g_lt;

  if (!r.v_g_valid || !r.w_g_valid) {
    r.diagnostics.emplace_back("G-norm unavailable; flags depending on it are false");
  }
  return r;
}

Lemma1Result lemma1_check(const Image& u, const Image& v, const GnormOptions& options,
                          BvConvention convention) {
  require_same_grid(u.grid(), v.grid(), "lemma1_check");
  Lemma1Result r;
  r.lhs = std::abs(l2_inner(u, v));
  const GnormResult g = gnorm_estimate(u, options);
  r.rhs = g.estimate * bv_norm(v, convention);
  r.holds = r.lhs <= r.rhs * (1.0 + options.tol) + 1e-300;
  return r;
}

}  // namespace bvg
