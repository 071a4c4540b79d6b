#include "pwbddc/integrals.hpp"

#include <cmath>

namespace pwbddc {

namespace {

// sin(x)/x
double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

} // namespace

Complex exp_interval_integral(double c, double a, double b)
{
    const double len = b - a;
    const double mid = 0.5 * (a + b);
    // (e^{icb} - e^{ica})/(ic) = len e^{ic mid} sinc(c len / 2); the series branch covers |c| len -> 0
    return len * sinc(0.5 * c * len) * std::polar(1.0, c * mid);
}

Complex oscillatory_rect_integral(const Vec3& d, const Box& rect)
{
    int flat = -1;
    for (int a = 0; a < 3; ++a) {
        if (rect.extent(a) <= 0.0) {
            if (flat >= 0) return {0.0, 0.0};
            flat = a;
        }
    }
    if (flat < 0) throw std::invalid_argument("rectangle does not lie in a coordinate plane");
    Complex value = std::polar(1.0, d[flat] * rect.lo[flat]);
    for (int a = 0; a < 3; ++a)
        if (a != flat) value *= exp_interval_integral(d[a], rect.lo[a], rect.hi[a]);
    return value;
}

Complex oscillatory_box_integral(const Vec3& d, const Box& box)
{
    Complex value{1.0, 0.0};
    for (int a = 0; a < 3; ++a) {
        if (box.extent(a) <= 0.0) return {0.0, 0.0};
        value *= exp_interval_integral(d[a], box.lo[a], box.hi[a]);
    }
    return value;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(static_cast<std::size_t>(order), 0.0);
    weights.assign(static_cast<std::size_t>(order), 0.0);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

} // namespace pwbddc
