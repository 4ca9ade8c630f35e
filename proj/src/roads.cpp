#include "bvg/roads.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bvg/parallel.hpp"

namespace bvg {

namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Difference of two directed angles, in [0, pi].
double directed_diff(double a, double b) {
  const double d = std::abs(wrap_angle(a - b));
  return std::min(d, kTwoPi - d);
}

// Difference of the undirected lines carrying two angles, in [0, pi/2].
double line_diff(double a, double b) {
  const double d = std::fmod(std::abs(a - b), pi);
  return std::min(d, pi - d);
}

struct Pick {
  int i = 0;
  int j = 0;
  int k = 0;
  double log10_nfa = 0.0;
};

struct LineGeometry {
  double ox = 0.0, oy = 0.0;  // first sample, pixel coordinates
  double dx = 0.0, dy = 0.0;  // step between samples
  int n = 0;
  double theta = 0.0;
};

// Samples of the line c + t n + s d (s on a grid of `step`) inside the image.
LineGeometry line_geometry(std::size_t w, std::size_t h, double theta, double t, double step) {
  LineGeometry g;
  g.theta = theta;
  const double cx = 0.5 * static_cast<double>(w - 1);
  const double cy = 0.5 * static_cast<double>(h - 1);
  const double ux = std::cos(theta);
  const double uy = std::sin(theta);
  const double bx = cx - t * uy;
  const double by = cy + t * ux;
  const double reach = std::hypot(cx, cy) + step;
  const int smax = static_cast<int>(std::ceil(reach / step));
  const double xmax = static_cast<double>(w - 1);
  const double ymax = static_cast<double>(h - 1);
  int first = std::numeric_limits<int>::max();
  int last = std::numeric_limits<int>::min();
  for (int s = -smax; s <= smax; ++s) {
    const double x = bx + s * step * ux;
    const double y = by + s * step * uy;
    if (x >= -1e-9 && x <= xmax + 1e-9 && y >= -1e-9 && y <= ymax + 1e-9) {
      first = std::min(first, s);
      last = std::max(last, s);
    }
  }
  if (first > last) return g;
  g.ox = bx + first * step * ux;
  g.oy = by + first * step * uy;
  g.dx = step * ux;
  g.dy = step * uy;
  g.n = last - first + 1;
  return g;
}

std::size_t cell_of(double x, double y, std::size_t w, std::size_t h) {
  const auto clampi = [](double v, std::size_t hi) {
    const long r = std::lround(v - 0.5);
    return static_cast<std::size_t>(std::clamp<long>(r, 0, static_cast<long>(hi)));
  };
  const std::size_t cx = clampi(x, w >= 2 ? w - 2 : 0);
  const std::size_t cy = clampi(y, h >= 2 ? h - 2 : 0);
  return cy * w + cx;
}

Segment make_segment(const LineGeometry& g, const Pick& p, const Grid& grid) {
  Segment s;
  s.x1 = grid.x0 + (g.ox + p.i * g.dx) * grid.spacing;
  s.y1 = grid.y0 + (g.oy + p.i * g.dy) * grid.spacing;
  s.x2 = grid.x0 + (g.ox + p.j * g.dx) * grid.spacing;
  s.y2 = grid.y0 + (g.oy + p.j * g.dy) * grid.spacing;
  s.length = std::hypot(s.x2 - s.x1, s.y2 - s.y1);
  s.k = p.k;
  s.l = p.j - p.i + 1;
  s.log10_nfa = p.log10_nfa;
  return s;
}

bool nfa_order(const Segment& a, const Segment& b) {
  if (a.log10_nfa != b.log10_nfa) return a.log10_nfa < b.log10_nfa;
  if (a.length != b.length) return a.length > b.length;
  return std::tie(a.x1, a.y1, a.x2, a.y2) < std::tie(b.x1, b.y1, b.x2, b.y2);
}

// Covering segment of a and b along the line of `base`.
Segment cover(const Segment& base, const Segment& other) {
  const double ux = std::cos(base.angle());
  const double uy = std::sin(base.angle());
  const std::array<std::array<double, 2>, 4> pts{{{base.x1, base.y1},
                                                  {base.x2, base.y2},
                                                  {other.x1, other.y1},
                                                  {other.x2, other.y2}}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& q : pts) {
    const double t = (q[0] - base.x1) * ux + (q[1] - base.y1) * uy;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  Segment s = base;
  s.x2 = base.x1 + hi * ux;
  s.y2 = base.y1 + hi * uy;
  s.x1 = base.x1 + lo * ux;
  s.y1 = base.y1 + lo * uy;
  s.length = hi - lo;
  s.log10_nfa = std::min(base.log10_nfa, other.log10_nfa);
  return s;
}

double point_line_distance(double x, double y, const Segment& s) {
  const double ux = std::cos(s.angle());
  const double uy = std::sin(s.angle());
  return std::abs(-(x - s.x1) * uy + (y - s.y1) * ux);
}

double endpoint_hausdorff(const Segment& a, const Segment& b) {
  const std::array<std::array<double, 2>, 2> pa{{{a.x1, a.y1}, {a.x2, a.y2}}};
  const std::array<std::array<double, 2>, 2> pb{{{b.x1, b.y1}, {b.x2, b.y2}}};
  auto directed = [](const auto& p, const auto& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : q) best = std::min(best, std::hypot(x[0] - y[0], x[1] - y[1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(pa, pb), directed(pb, pa));
}

double endpoint_gap(const Segment& a, const Segment& b) {
  double best = std::numeric_limits<double>::infinity();
  for (auto [x, y] : {std::pair{a.x1, a.y1}, std::pair{a.x2, a.y2}}) {
    for (auto [u, v] : {std::pair{b.x1, b.y1}, std::pair{b.x2, b.y2}}) {
      best = std::min(best, std::hypot(x - u, y - v));
    }
  }
  return best;
}

// Intervals along the candidate line overlap; fraction of b covered by a.
double interval_overlap(const Pick& a, const Pick& b) {
  const int lo = std::max(a.i, b.i);
  const int hi = std::min(a.j, b.j);
  if (hi < lo) return 0.0;
  return static_cast<double>(hi - lo + 1) / static_cast<double>(b.j - b.i + 1);
}

}  // namespace

double Segment::angle() const { return wrap_angle(std::atan2(y2 - y1, x2 - x1)); }

void DetectionParams::validate() const {
  std::ostringstream os;
  if (!(precision > 0.0 && precision < 1.0)) os << "precision must lie in (0, 1); ";
  if (!(epsilon > 0.0)) os << "epsilon must be > 0; ";
  if (!(min_length >= 0.0)) os << "min_length must be >= 0; ";
  if (directions < 4 || directions % 4 != 0) os << "directions must be a positive multiple of 4; ";
  if (!(sample_step > 0.0)) os << "sample_step must be > 0; ";
  if (!(line_step > 0.0)) os << "line_step must be > 0; ";
  if (!(merge_angle >= 0.0)) os << "merge_angle must be >= 0; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw InvalidParams("detection: " + msg.substr(0, msg.size() - 2));
}

double DetectionParams::effective_gradient_threshold() const {
  if (gradient_threshold >= 0.0) return gradient_threshold;
  return (2.0 / 255.0) / std::sin(precision * pi);
}

DetectionParams DetectionParams::resolved(double spacing) const {
  DetectionParams p = *this;
  if (p.merge_dist < 0.0) p.merge_dist = 3.0 * spacing;
  if (p.chain_gap < 0.0) p.chain_gap = 10.0 * spacing;
  p.gradient_threshold = effective_gradient_threshold();
  return p;
}

OrientationField orientation_field(const Image& img, double threshold) {
  const Grid& g = img.grid();
  OrientationField o{g, std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0),
                     std::vector<unsigned char>(g.size(), 0)};
  if (g.width < 2 || g.height < 2) return o;
  for (std::size_t y = 0; y + 1 < g.height; ++y) {
    for (std::size_t x = 0; x + 1 < g.width; ++x) {
      const double a = img.at(x, y);
      const double b = img.at(x + 1, y);
      const double c = img.at(x, y + 1);
      const double d = img.at(x + 1, y + 1);
      const double gx = 0.5 * (b + d - a - c);
      const double gy = 0.5 * (c + d - a - b);
      const std::size_t k = y * g.width + x;
      o.magnitude[k] = std::hypot(gx, gy);
      if (o.magnitude[k] > threshold) {
        o.defined[k] = 1;
        o.angle[k] = wrap_angle(std::atan2(gx, -gy));
      }
    }
  }
  return o;
}

double log10_binomial_tail(int l, int k, double p) {
  if (k <= 0) return 0.0;
  if (k > l) return -std::numeric_limits<double>::infinity();
  const double log_term = std::lgamma(l + 1.0) - std::lgamma(k + 1.0) - std::lgamma(l - k + 1.0) +
                          k * std::log(p) + (l - k) * std::log1p(-p);
  const double q = p / (1.0 - p);
  double sum = 1.0;
  double t = 1.0;
  for (int i = k; i < l; ++i) {
    t *= static_cast<double>(l - i) / static_cast<double>(i + 1) * q;
    sum += t;
    if (t < 1e-17 * sum && static_cast<double>(l - i) * q < static_cast<double>(i + 1)) break;
  }
  return std::min(0.0, (log_term + std::log(sum)) / std::numbers::ln10);
}

SegmentSet detect_segments(const Image& img, const DetectionParams& raw_params) {
  raw_params.validate();
  const Grid& grid = img.grid();
  if (grid.width < 16 || grid.height < 16) {
    throw InvalidParams("detection: image must be at least 16x16");
  }
  const DetectionParams params = raw_params.resolved(grid.spacing);
  const OrientationField field = orientation_field(img, params.gradient_threshold);
  SegmentSet out;
  out.degenerate = std::none_of(field.defined.begin(), field.defined.end(),
                                [](unsigned char d) { return d != 0; });
  if (out.degenerate) return out;

  const std::size_t w = grid.width;
  const std::size_t h = grid.height;
  const double reach = std::hypot(0.5 * (w - 1), 0.5 * (h - 1));
  const int offsets = static_cast<int>(std::floor(reach / params.line_step));
  std::vector<LineGeometry> lines;
  for (int a = 0; a < params.directions; ++a) {
    const double theta = kTwoPi * a / params.directions;
    for (int o = -offsets; o <= offsets; ++o) {
      LineGeometry g = line_geometry(w, h, theta, o * params.line_step, params.sample_step);
      if (g.n > 0) lines.push_back(g);
    }
  }

  const int min_l = std::max(
      2, static_cast<int>(std::ceil(params.min_length / (params.sample_step * grid.spacing) - 1e-9)) + 1);
  int max_n = 0;
  double tests = 0.0;
  for (const LineGeometry& g : lines) {
    max_n = std::max(max_n, g.n);
    if (g.n >= min_l) tests += 0.5 * (g.n - min_l + 1.0) * (g.n - min_l + 2.0);
  }
  if (tests <= 0.0) return out;
  out.log10_tests = std::log10(tests);
  const double log_eps = std::log10(params.epsilon);

  // Smallest meaningful k for every length, and the NFA table up to max_n.
  std::vector<std::vector<double>> log_nfa(max_n + 1);
  std::vector<int> kmin(max_n + 1, std::numeric_limits<int>::max());
  for (int l = min_l; l <= max_n; ++l) {
    log_nfa[l].assign(l + 1, 0.0);
    for (int k = l; k >= 0; --k) {
      log_nfa[l][k] = out.log10_tests + log10_binomial_tail(l, k, params.precision);
      if (log_nfa[l][k] <= log_eps) kmin[l] = k;
      else break;
    }
  }

  const double tol = params.precision * pi;
  std::vector<std::vector<Pick>> picks(lines.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (std::ptrdiff_t li = 0; li < static_cast<std::ptrdiff_t>(lines.size()); ++li) {
    const LineGeometry& g = lines[static_cast<std::size_t>(li)];
    if (g.n < min_l) continue;
    std::vector<unsigned char> aligned(g.n);
    std::vector<int> prefix(g.n + 1, 0);
    for (int s = 0; s < g.n; ++s) {
      const std::size_t c = cell_of(g.ox + s * g.dx, g.oy + s * g.dy, w, h);
      aligned[s] = field.defined[c] && directed_diff(field.angle[c], g.theta) <= tol;
      prefix[s + 1] = prefix[s] + aligned[s];
    }
    if (prefix[g.n] == 0) continue;
    std::vector<Pick> cands;
    for (int i = 0; i < g.n; ++i) {
      if (!aligned[i]) continue;
      for (int j = i + min_l - 1; j < g.n; ++j) {
        if (!aligned[j]) continue;
        const int l = j - i + 1;
        const int k = prefix[j + 1] - prefix[i];
        if (k >= kmin[l]) cands.push_back({i, j, k, log_nfa[l][k]});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Pick& a, const Pick& b) {
      if (a.log10_nfa != b.log10_nfa) return a.log10_nfa < b.log10_nfa;
      if (a.j - a.i != b.j - b.i) return a.j - a.i > b.j - b.i;
      return a.i < b.i;
    });
    std::vector<Pick>& kept = picks[static_cast<std::size_t>(li)];
    for (const Pick& c : cands) {
      const bool clash = std::any_of(kept.begin(), kept.end(),
                                     [&](const Pick& k) { return interval_overlap(k, c) > 0.5; });
      if (!clash) kept.push_back(c);
    }
  }

  struct Candidate {
    Segment seg;
    std::size_t line;
    Pick pick;
  };
  std::vector<Candidate> all;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    for (const Pick& p : picks[li]) all.push_back({make_segment(lines[li], p, grid), li, p});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) { return nfa_order(a.seg, b.seg); });

  // Greedy exclusion on pixels: a kept segment claims the 3x3 neighbourhoods
  // of its sample points.
  std::vector<unsigned char> claimed(grid.size(), 0);
  for (const Candidate& c : all) {
    const LineGeometry& g = lines[c.line];
    int hits = 0;
    const int l = c.pick.j - c.pick.i + 1;
    for (int s = c.pick.i; s <= c.pick.j; ++s) {
      const long x = std::lround(g.ox + s * g.dx);
      const long y = std::lround(g.oy + s * g.dy);
      hits += claimed[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
    }
    if (2 * hits > l) continue;
    for (int s = c.pick.i; s <= c.pick.j; ++s) {
      const long x = std::lround(g.ox + s * g.dx);
      const long y = std::lround(g.oy + s * g.dy);
      for (long yy = std::max(0L, y - 1); yy <= std::min<long>(h - 1, y + 1); ++yy) {
        for (long xx = std::max(0L, x - 1); xx <= std::min<long>(w - 1, x + 1); ++xx) {
          claimed[static_cast<std::size_t>(yy) * w + static_cast<std::size_t>(xx)] = 1;
        }
      }
    }
    out.segments.push_back(c.seg);
  }
  return out;
}

SegmentSet fuse_segments(const SegmentSet& set, const DetectionParams& params) {
  SegmentSet out = set;
  std::vector<Segment>& s = out.segments;
  auto merge_rule = [&](const Segment& a, const Segment& b) {
    return line_diff(a.angle(), b.angle()) <= params.merge_angle &&
           endpoint_hausdorff(a, b) <= params.merge_dist;
  };
  auto chain_rule = [&](const Segment& a, const Segment& b) {
    return line_diff(a.angle(), b.angle()) <= params.merge_angle &&
           endpoint_gap(a, b) <= params.chain_gap &&
           point_line_distance(b.x1, b.y1, a) <= params.merge_dist &&
           point_line_distance(b.x2, b.y2, a) <= params.merge_dist &&
           point_line_distance(a.x1, a.y1, b) <= params.merge_dist &&
           point_line_distance(a.x2, a.y2, b) <= params.merge_dist;
  };
  std::sort(s.begin(), s.end(), nfa_order);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < s.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < s.size() && !changed; ++j) {
        if (merge_rule(s[i], s[j]) || chain_rule(s[i], s[j])) {
          // The better segment sets the line; it comes first in NFA order.
          const Segment& base = s[i].length >= s[j].length ? s[i] : s[j];
          const Segment& other = &base == &s[i] ? s[j] : s[i];
          Segment merged = cover(base, other);
          merged.k = std::max(s[i].k, s[j].k);
          merged.l = std::max(s[i].l, s[j].l);
          s[i] = merged;
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(j));
          std::sort(s.begin(), s.end(), nfa_order);
          changed = true;
        }
      }
    }
  }
  return out;
}

Image draw_segments(const Image& f, const SegmentSet& set) {
  Image out = f;
  const Grid& g = f.grid();
  const double value = f.size() > 0 ? f.max() : 0.0;
  for (const Segment& s : set.segments) {
    const double ax = (s.x1 - g.x0) / g.spacing;
    const double ay = (s.y1 - g.y0) / g.spacing;
    const double bx = (s.x2 - g.x0) / g.spacing;
    const double by = (s.y2 - g.y0) / g.spacing;
    const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * std::hypot(bx - ax, by - ay))));
    for (int t = 0; t <= steps; ++t) {
      const double u = static_cast<double>(t) / steps;
      const long x = std::lround(ax + u * (bx - ax));
      const long y = std::lround(ay + u * (by - ay));
      if (x >= 0 && y >= 0 && x < static_cast<long>(g.width) && y < static_cast<long>(g.height)) {
        out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = value;
      }
    }
  }
  return out;
}

RoadResult road_pipeline(const Image& f, const BvgParams& bvg, const DetectionParams& det) {
  RoadResult r;
  r.decomposition = bvg_decompose(f, bvg);
  r.raw = detect_segments(r.decomposition.w, det);
  r.segments = fuse_segments(r.raw, det.resolved(f.grid().spacing));
  r.overlay = draw_segments(f, r.segments);
  return r;
}

}  // namespace bvg
