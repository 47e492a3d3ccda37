#pragma once

#include <vector>

#include "atelier/color.hpp"
#include "atelier/geometry.hpp"
#include "atelier/image.hpp"
#include "atelier/palette.hpp"

// Reference implementations written independently of the library, used only
// to cross-check it.
namespace atelier::testkit {

/// Per reference cluster, the canvas index maximizing 0.4*S_val + 0.6*IoU with
/// ties broken by larger pixel share, then lower index. Exhaustive.
std::vector<std::size_t> exhaustive_match(const Palette& canvas, const Palette& reference);

/// Direct 2D Gaussian convolution of the red channel, radius ceil(3*sigma),
/// clamp-to-edge, unrounded.
std::vector<double> naive_gaussian(const ImageBuffer& gray, double sigma);

/// Brute-force sorted-window median of the red channel, clamp-to-edge.
std::vector<int> naive_median(const ImageBuffer& gray, int window);

/// Variance of the 4-neighbour Laplacian over interior pixels (red channel).
double laplacian_variance(const ImageBuffer& gray);

/// Textbook hexcone HSV (h in degrees, s and v in [0, 1]).
HsvColor textbook_hsv(Rgb8 c);

/// Closed-contour RDP with an explicit stack: anchor at vertex 0, first split
/// at the vertex farthest from it, then recursive splits on both chains.
std::vector<NormPoint> stack_rdp(const std::vector<NormPoint>& contour, double epsilon);

/// Foreground pixels with a 4-neighbour that is background or off-image.
std::vector<std::pair<int, int>> boundary_pixels(const Mask& mask);

}  // namespace atelier::testkit
