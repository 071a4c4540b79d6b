#pragma once

#include "pwbddc/mesh.hpp"

namespace pwbddc {

// Integral of exp(i c t) over [a, b].
Complex exp_interval_integral(double c, double a, double b);

// Integral of exp(i d.x) over a rectangle lying in a coordinate plane (a box with exactly
// one zero-extent axis). Degenerate rectangles give 0.
Complex oscillatory_rect_integral(const Vec3& d, const Box& rect);

// Integral of exp(i d.x) over a box.
Complex oscillatory_box_integral(const Vec3& d, const Box& box);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace pwbddc
