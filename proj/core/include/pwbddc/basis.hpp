#pragma once

#include "pwbddc/mesh.hpp"

#include <utility>

namespace pwbddc {

// (n1, n2) with p = n1 n2; n1 in {2n2-1, 2n2, 2n2+1} for odd n2, {2n2-1, 2n2+1} for even n2.
std::pair<int, int> direction_grid(int p);

// alpha_{r,j} = (cos a cos b, cos a sin b, sin a), a = 2pi(r-1)/n1, b = pi(j-1)/n2, l = (j-1) n1 + r.
std::vector<Vec3> wave_directions(int p);

struct WaveBasis {
    std::vector<Vec3> directions;

    explicit WaveBasis(int p) : directions(wave_directions(p)) {}
    int size() const { return static_cast<int>(directions.size()); }
};

struct FormWeights {
    double h = 1.0;

    double alpha(double kappa_k, double kappa_j) const;
    double beta(double kappa_k, double kappa_j) const;
    double theta_dirichlet(double kappa) const;
    double theta_neumann(double kappa) const;
    double theta_robin(double kappa) const;
};

} // namespace pwbddc
