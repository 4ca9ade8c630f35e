#pragma once

#include "bvg/image.hpp"

namespace bvg {

/// Solves div(grad(phi)) = rhs - mean(rhs) for the discrete operators of
/// operators.hpp in raw pixel units (the reflecting 5-point Laplacian),
/// via a cosine transform. The returned phi has zero mean.
Image solve_neumann_poisson(const Image& rhs);

/// Physical field g = h grad(phi) with div(g) = v - mean(v) in physical units.
/// Its sup norm is an upper bound on the G-norm of v - mean(v).
DualField poisson_field(const Image& v);

}  // namespace bvg
