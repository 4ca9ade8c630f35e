#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvg/image.hpp"

namespace bvg {

enum class SceneKind { Disk, TexturedSquare, Bar, GaussianBump, Noise, Composite };
const char* to_string(SceneKind k);
/// Throws InvalidParams for an unknown name.
SceneKind scene_kind_from_string(const std::string& name);

/// Raised by render() in strict mode when a feature is below the resolution
/// the grid can represent.
class UnderResolved : public Error {
 public:
  using Error::Error;
};

struct SceneSpec {
  SceneKind kind = SceneKind::Disk;
  Grid grid;
  double cx = 0.0;
  double cy = 0.0;
  double amplitude = 1.0;
  double radius = 1.0;     ///< disk radius; standard deviation of the Gaussian bump
  double side = 1.0;       ///< side of the textured square
  double frequency = 8.0;  ///< texture cycles per unit length along x
  double length = 0.8;     ///< bar length L
  double thickness = 0.01; ///< bar thickness epsilon
  double angle = 0.0;      ///< bar direction, radians from the x axis
  double sigma = 1.0;      ///< noise standard deviation
  std::uint64_t seed = 0;
  /// Subsamples per axis for pixels cut by a characteristic-function edge;
  /// 1 samples the pixel center only.
  int supersample = 1;
  /// Width in pixels of a linear ramp across characteristic-function edges;
  /// 0 keeps them sharp.
  double edge_width = 0.0;
  bool strict = false;
  std::vector<SceneSpec> parts;  ///< composite only

  void validate() const;
};

/// Features the grid cannot resolve: under 3 pixels across a bar or a disk,
/// under 8 pixels per texture period.
std::vector<std::string> resolution_warnings(const SceneSpec& spec);

Image render(const SceneSpec& spec);

/// Analytic continuum norms; unset where no closed form is known.
struct OracleNorms {
  std::optional<double> l1;
  std::optional<double> l2;
  std::optional<double> tv;  ///< seminorm J
  std::optional<double> bv;  ///< l1 + tv
  std::optional<double> g;
  /// An upper bound on the G-norm when only a bound is known.
  std::optional<double> g_upper;
  std::vector<std::string> notes;
};

OracleNorms oracle_norms(const SceneSpec& spec);

}  // namespace bvg
