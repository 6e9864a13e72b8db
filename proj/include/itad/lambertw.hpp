#pragma once

namespace itad {

// Principal branch W0 of the product-logarithm, w e^w = x for x >= 0,
// by Halley iteration from an asymptotic seed.
double lambert_w0(double x);

}  // namespace itad
