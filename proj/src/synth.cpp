#include "bvg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bvg {

namespace {

using std::numbers::pi;

// Signed distance (positive inside) to the shape's edge for characteristic
// functions; the textured square uses it for its support.
double signed_distance(const SceneSpec& s, double x, double y) {
  switch (s.kind) {
    case SceneKind::Disk:
      return s.radius - std::hypot(x - s.cx, y - s.cy);
    case SceneKind::TexturedSquare:
      return 0.5 * s.side - std::max(std::abs(x - s.cx), std::abs(y - s.cy));
    case SceneKind::Bar: {
      const double c = std::cos(s.angle);
      const double n = std::sin(s.angle);
      const double t = (x - s.cx) * c + (y - s.cy) * n;
      const double u = -(x - s.cx) * n + (y - s.cy) * c;
      return std::min(0.5 * s.length - std::abs(t), 0.5 * s.thickness - std::abs(u));
    }
    default:
      return 1.0;
  }
}

double texture(const SceneSpec& s, double x) {
  return std::cos(2.0 * pi * s.frequency * (x - (s.cx - 0.5 * s.side)));
}

// Fraction of the pixel centred at (x, y) inside the shape.
double coverage(const SceneSpec& s, double x, double y, double h) {
  const double d = signed_distance(s, x, y);
  if (s.edge_width > 0.0) return std::clamp(d / (s.edge_width * h) + 0.5, 0.0, 1.0);
  if (s.supersample > 1 && std::abs(d) < h) {
    const int n = s.supersample;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double sx = x + ((i + 0.5) / n - 0.5) * h;
        const double sy = y + ((j + 0.5) / n - 0.5) * h;
        acc += signed_distance(s, sx, sy) >= 0.0 ? 1.0 : 0.0;
      }
    }
    return acc / (n * n);
  }
  return d >= 0.0 ? 1.0 : 0.0;
}

bool axis_aligned(double angle) {
  const double q = angle / (0.5 * pi);
  return std::abs(q - std::round(q)) < 1e-12;
}

// Sharp axis-aligned bars are rasterized in index space so the support is
// exactly round(L/h) x round(eps/h) pixels.
void render_aligned_bar(const SceneSpec& s, Image& img) {
  const Grid& g = img.grid();
  const bool vertical = static_cast<long>(std::llround(s.angle / (0.5 * pi))) % 2 != 0;
  const double along = s.length / g.spacing;
  const double across = s.thickness / g.spacing;
  const long nx = std::lround(vertical ? across : along);
  const long ny = std::lround(vertical ? along : across);
  const double pcx = (s.cx - g.x0) / g.spacing;
  const double pcy = (s.cy - g.y0) / g.spacing;
  const long x0 = std::lround(pcx - 0.5 * static_cast<double>(nx - 1));
  const long y0 = std::lround(pcy - 0.5 * static_cast<double>(ny - 1));
  for (long y = std::max(0L, y0); y < std::min<long>(y0 + ny, static_cast<long>(g.height)); ++y) {
    for (long x = std::max(0L, x0); x < std::min<long>(x0 + nx, static_cast<long>(g.width)); ++x) {
      img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = s.amplitude;
    }
  }
}

// Standard normal deviates from a 64-bit Mersenne twister via Box-Muller;
// spelled out so the stream does not depend on the standard library vendor.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

const char* to_string(SceneKind k) {
  switch (k) {
    case SceneKind::Disk: return "disk";
    case SceneKind::TexturedSquare: return "textured_square";
    case SceneKind::Bar: return "bar";
    case SceneKind::GaussianBump: return "gaussian_bump";
    case SceneKind::Noise: return "noise";
    case SceneKind::Composite: return "composite";
  }
  return "unknown";
}

SceneKind scene_kind_from_string(const std::string& name) {
  for (SceneKind k : {SceneKind::Disk, SceneKind::TexturedSquare, SceneKind::Bar,
                      SceneKind::GaussianBump, SceneKind::Noise, SceneKind::Composite}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidParams("unknown scene kind '" + name + "'");
}

void SceneSpec::validate() const {
  grid.validate();
  std::ostringstream os;
  if (!(radius > 0.0)) os << "radius must be > 0; ";
  if (!(side > 0.0)) os << "side must be > 0; ";
  if (!(length > 0.0)) os << "length must be > 0; ";
  if (!(thickness > 0.0)) os << "thickness must be > 0; ";
  if (!(frequency >= 1.0)) os << "frequency must be >= 1; ";
  if (!(sigma >= 0.0)) os << "sigma must be >= 0; ";
  if (supersample < 1) os << "supersample must be >= 1; ";
  if (!(edge_width >= 0.0)) os << "edge_width must be >= 0; ";
  if (kind == SceneKind::Composite && parts.empty()) os << "composite needs parts; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw InvalidParams("scene: " + msg.substr(0, msg.size() - 2));
  for (const SceneSpec& p : parts) {
    if (!(p.grid == grid)) throw InvalidParams("scene: composite parts must share its grid");
    p.validate();
  }
}

std::vector<std::string> resolution_warnings(const SceneSpec& s) {
  std::vector<std::string> out;
  const double h = s.grid.spacing;
  auto px = [&](double len) {
    std::ostringstream os;
    os.precision(3);
    os << len / h << " px";
    return os.str();
  };
  switch (s.kind) {
    case SceneKind::Disk:
      if (s.radius / h < 3.0) out.push_back("disk radius is " + px(s.radius));
      break;
    case SceneKind::Bar:
      if (s.thickness / h < 3.0) out.push_back("bar thickness is " + px(s.thickness));
      break;
    case SceneKind::TexturedSquare:
      if (1.0 / (s.frequency * h) < 8.0) {
        out.push_back("texture period is " + px(1.0 / s.frequency));
      }
      break;
    case SceneKind::GaussianBump:
      if (s.radius / h < 3.0) out.push_back("bump width is " + px(s.radius));
      break;
    case SceneKind::Composite:
      for (const SceneSpec& p : s.parts) {
        for (std::string& w : resolution_warnings(p)) out.push_back(std::move(w));
      }
      break;
    case SceneKind::Noise:
      break;
  }
  return out;
}

Image render(const SceneSpec& s) {
  s.validate();
  if (s.strict) {
    const auto warnings = resolution_warnings(s);
    if (!warnings.empty()) throw UnderResolved("under-resolved scene: " + warnings.front());
  }
  const Grid& g = s.grid;
  Image img(g);
  const double h = g.spacing;
  switch (s.kind) {
    case SceneKind::Disk:
    case SceneKind::TexturedSquare:
    case SceneKind::Bar:
      if (s.kind == SceneKind::Bar && s.edge_width == 0.0 && s.supersample == 1 &&
          axis_aligned(s.angle)) {
        render_aligned_bar(s, img);
        break;
      }
      for (std::size_t y = 0; y < g.height; ++y) {
        for (std::size_t x = 0; x < g.width; ++x) {
          const double c = coverage(s, g.x_at(x), g.y_at(y), h);
          if (c == 0.0) continue;
          const double t = s.kind == SceneKind::TexturedSquare ? texture(s, g.x_at(x)) : 1.0;
          img.at(x, y) = s.amplitude * c * t;
        }
      }
      break;
    case SceneKind::GaussianBump: {
      const double inv = 1.0 / (2.0 * s.radius * s.radius);
      for (std::size_t y = 0; y < g.height; ++y) {
        for (std::size_t x = 0; x < g.width; ++x) {
          const double dx = g.x_at(x) - s.cx;
          const double dy = g.y_at(y) - s.cy;
          img.at(x, y) = s.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
        }
      }
      break;
    }
    case SceneKind::Noise: {
      NormalStream normal(s.seed);
      for (std::size_t k = 0; k < img.size(); ++k) img[k] = s.sigma * normal.next();
      break;
    }
    case SceneKind::Composite:
      for (const SceneSpec& p : s.parts) img += render(p);
      break;
  }
  return img;
}

OracleNorms oracle_norms(const SceneSpec& s) {
  s.validate();
  OracleNorms o;
  const double a = std::abs(s.amplitude);
  switch (s.kind) {
    case SceneKind::Disk:
      o.l1 = pi * s.radius * s.radius * a;
      o.l2 = std::sqrt(pi) * s.radius * a;
      o.tv = 2.0 * pi * s.radius * a;
      o.g = 0.5 * s.radius * a;
      o.notes.emplace_back("g is the whole-plane value; a bounded grid needs mean subtraction");
      break;
    case SceneKind::TexturedSquare: {
      const double area = s.side * s.side;
      o.l1 = 2.0 / pi * area * a;
      o.l2 = s.side * a / std::sqrt(2.0);
      // |d/dx cos| integrates to 4 per period; the square's own edges add O(1).
      o.tv = 4.0 * s.frequency * area * a;
      o.g_upper = a / (2.0 * pi * s.frequency);
      o.notes.emplace_back("tv omits the O(1) edge term; g_upper is the one-dimensional field bound");
      break;
    }
    case SceneKind::Bar:
      o.l1 = s.length * s.thickness * a;
      o.tv = 2.0 * (s.length + s.thickness) * a;
      o.l2 = std::sqrt(s.length * s.thickness) * a;
      o.g_upper = s.thickness * a;
      break;
    case SceneKind::GaussianBump: {
      const double r2 = s.radius * s.radius;
      o.l1 = 2.0 * pi * r2 * a;
      o.l2 = std::sqrt(pi * r2) * a;
      o.tv = pi * std::sqrt(2.0 * pi) * s.radius * a;
      break;
    }
    case SceneKind::Noise:
    case SceneKind::Composite:
      o.notes.emplace_back("no closed form for this kind");
      break;
  }
  if (o.l1 && o.tv) o.bv = *o.l1 + *o.tv;
  return o;
}

}  // namespace bvg
