#pragma once

#include <numbers>
#include <vector>

#include "bvg/decompose.hpp"
#include "bvg/image.hpp"

namespace bvg {

struct Segment {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;  ///< physical endpoints
  double length = 0.0;                             ///< physical
  int width = 1;                                   ///< alignment strip width in pixels
  int k = 0;                                       ///< aligned sample points
  int l = 0;                                       ///< sample points
  double log10_nfa = 0.0;

  /// Direction of travel from (x1, y1) to (x2, y2), radians in [0, 2 pi).
  double angle() const;
};

struct SegmentSet {
  std::vector<Segment> segments;
  double log10_tests = 0.0;
  /// Every orientation was undefined (e.g. a constant image).
  bool degenerate = false;
};

struct DetectionParams {
  double precision = 1.0 / 16.0;  ///< p: angular tolerance p * pi, alignment probability p
  double epsilon = 1.0;           ///< NFA threshold
  double min_length = 0.0;        ///< physical
  int directions = 64;            ///< directed candidate angles over [0, 2 pi)
  double sample_step = 2.0;       ///< pixels between sample points along a candidate
  double line_step = 1.0;         ///< pixels between parallel candidate lines
  /// Gradient moduli below this (per-pixel units) leave the orientation
  /// undefined. Default: two 8-bit quantisation steps of a [0, 1] image,
  /// divided by sin(p pi).
  double gradient_threshold = -1.0;
  double merge_dist = -1.0;  ///< physical; default 3 px
  double merge_angle = 5.0 * std::numbers::pi / 180.0;  ///< radians;
  double chain_gap = -1.0;   ///< physical; default 10 px

  void validate() const;
  double effective_gradient_threshold() const;
  /// Copy with defaults that depend on the pixel size filled in.
  DetectionParams resolved(double spacing) const;
};

/// Level-line orientation from 2x2 differences, stored at the cell whose
/// top-left pixel is (x, y); the last row and column are undefined.
struct OrientationField {
  Grid grid;
  std::vector<double> angle;      ///< radians in [0, 2 pi), direction (-gy, gx)
  std::vector<double> magnitude;  ///< per-pixel units
  std::vector<unsigned char> defined;
};

OrientationField orientation_field(const Image& img, double gradient_threshold);

/// log10 of P[Binomial(l, p) >= k].
double log10_binomial_tail(int l, int k, double p);

SegmentSet detect_segments(const Image& img, const DetectionParams& params);

/// Merges near-duplicate segments and chains collinear ones until no rule
/// applies, so the result is a fixed point.
SegmentSet fuse_segments(const SegmentSet& set, const DetectionParams& params);

struct RoadResult {
  Decomposition decomposition;
  SegmentSet raw;
  SegmentSet segments;
  Image overlay;
};

RoadResult road_pipeline(const Image& f, const BvgParams& bvg, const DetectionParams& det);

/// f with each segment drawn at the maximum value of f.
Image draw_segments(const Image& f, const SegmentSet& set);

}  // namespace bvg
