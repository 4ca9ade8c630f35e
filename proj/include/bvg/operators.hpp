#pragma once

#include "bvg/image.hpp"

namespace bvg {

// Discrete operators on the pixel grid.
//
// The stencils are dimensionless per-pixel differences: gradient is a forward
// difference with zero flux through the last row and column, divergence is its
// exact negative adjoint. The spacing h only enters the norms (TV weighted by h,
// L1/L2 by the pixel area h^2), so that continuum values such as a perimeter or
// an area are recovered under refinement.

DualField gradient(const Image& u);
Image divergence(const DualField& g);

/// Isotropic total variation J(u) = h * sum |grad u|.
double tv_norm(const Image& u);

double l2_norm_sq(const Image& u);
double l2_norm(const Image& u);
double l2_inner(const Image& u, const Image& v);
double l1_norm(const Image& u);

/// h^2 * sum (g1 q1 + g2 q2); the pairing for which gradient and divergence
/// are negative adjoints.
double dual_inner(const DualField& g, const DualField& q);

/// Which quantity "||.||_BV" denotes.
enum class BvConvention {
  Full,      ///< L1 norm plus total variation
  Seminorm,  ///< total variation only
};

double bv_norm(const Image& u, BvConvention convention = BvConvention::Full);

const char* to_string(BvConvention c);

}  // namespace bvg
