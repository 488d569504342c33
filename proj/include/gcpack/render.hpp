#pragma once

#include <string>

namespace gcp
{

struct SvgOptions {
    /** Width and height in pixels */
    int size = 512;
    int margin = 16;
    /** Digits after the decimal point for coordinates */
    int precision = 4;
    double stroke_width = 1.5;
    double dot_radius = 3.0;
    bool show_tangency = true;
};

/**
 * @brief SVG picture of the face with curvatures (k1, k2, k3) in the
 * Poincaré disk.
 *
 * The half-plane embedding is pushed through w = i (z - i) / (z + i), which
 * puts the first tangency point at the origin with a vertical common tangent.
 * Curves are clipped to the unit disk. Output depends only on the inputs.
 */
std::string render_face_svg(double k1, double k2, double k3, const SvgOptions& options = {});

}  // namespace gcp
