#include "pwbddc/basis.hpp"

#include <cmath>
#include <string>

namespace pwbddc {

std::pair<int, int> direction_grid(int p)
{
    if (p < 1) throw NoValidFactorization("p must be positive");
    for (int n2 = 1; n2 <= p; ++n2) {
        if (p % n2 != 0) continue;
        const int n1 = p / n2;
        const bool odd = n2 % 2 == 1;
        if (n1 == 2 * n2 - 1 || n1 == 2 * n2 + 1 || (odd && n1 == 2 * n2)) return {n1, n2};
    }
    throw NoValidFactorization("no (n1, n2) direction grid for p = " + std::to_string(p));
}

std::vector<Vec3> wave_directions(int p)
{
    const auto [n1, n2] = direction_grid(p);
    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < n2; ++j) {
        const double b = M_PI * j / n2;
        for (int r = 0; r < n1; ++r) {
            const double a = 2.0 * M_PI * r / n1;
            Vec3 v(std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a));
            dirs.push_back(v.normalized());
        }
    }
    return dirs;
}

double FormWeights::alpha(double kappa_k, double kappa_j) const
{
    const double k = std::abs(0.5 * (kappa_k + kappa_j));
    return 1.0 / h + k;
}

double FormWeights::beta(double kappa_k, double kappa_j) const
{
    const double k = std::abs(0.5 * (kappa_k + kappa_j));
    return 1.0 / (h * k * k) + 1.0 / k;
}

double FormWeights::theta_dirichlet(double kappa) const { return 1.0 / h + std::abs(kappa); }

double FormWeights::theta_neumann(double kappa) const
{
    const double k = std::abs(kappa);
    return 1.0 / (h * k * k) + 1.0 / k;
}

double FormWeights::theta_robin(double kappa) const { return theta_neumann(kappa); }

} // namespace pwbddc
