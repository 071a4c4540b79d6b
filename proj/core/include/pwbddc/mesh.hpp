#pragma once

#include "pwbddc/types.hpp"

#include <array>

namespace pwbddc {

using Triple = std::array<int, 3>;

enum class BoundaryKind { Dirichlet, Neumann, Robin };

// Axis-aligned box. A face rectangle is a box with zero extent along its normal axis.
struct Box {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Ones();

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    Box intersect(const Box& other) const;
    bool contains(const Vec3& x, double tol = 0.0) const;
};

struct MeshConfig {
    int n = 1;
    int m = 1;
    int p = 1;
    double kappa = 1.0;
    Box domain;
    // -x, +x, -y, +y, -z, +z
    std::array<BoundaryKind, 6> boundary{BoundaryKind::Robin, BoundaryKind::Robin, BoundaryKind::Robin,
                                         BoundaryKind::Robin, BoundaryKind::Robin, BoundaryKind::Robin};

    int elements_per_axis() const { return n * m + (n - 1); }
    void validate() const;
};

struct InteriorFace {
    Index lower = 0; // k, the element on the -axis side
    Index upper = 0; // j, the element on the +axis side
    int axis = 0;    // normal +e_axis points from lower to upper
    Box rect;
};

struct BoundaryFace {
    Index element = 0;
    int axis = 0;
    int side = 1; // outward normal is side * e_axis
    BoundaryKind kind = BoundaryKind::Robin;
    Box rect;

    Vec3 normal() const;
};

class Mesh {
public:
    explicit Mesh(const MeshConfig& config);

    const MeshConfig& config() const { return config_; }
    int elements_per_axis() const { return N_; }
    Index element_count() const { return static_cast<Index>(N_) * N_ * N_; }
    Index dof_count() const { return element_count() * config_.p; }
    Index dof(Index element, int l) const { return element * config_.p + l; }

    // h = max element edge length
    double h() const { return h_; }
    const Vec3& element_size() const { return size_; }
    double kappa(Index element) const { return kappa_[element]; }
    void set_kappa(Index element, double kappa) { kappa_[element] = kappa; }

    Index element_index(const Triple& t) const { return t[0] + static_cast<Index>(N_) * (t[1] + static_cast<Index>(N_) * t[2]); }
    Triple element_triple(Index e) const;
    Box element_box(Index e) const;
    bool in_grid(const Triple& t) const;

    // Neighbour across the face with normal +e_axis (or -1 at the boundary).
    Index upper_neighbour(Index e, int axis) const;
    Index lower_neighbour(Index e, int axis) const;

    const std::vector<InteriorFace>& interior_faces() const { return interior_; }
    const std::vector<BoundaryFace>& boundary_faces() const { return boundary_; }

    // Faces of one element; boundary entries are indices into boundary_faces().
    std::vector<Index> boundary_faces_of(Index e) const;

private:
    MeshConfig config_;
    int N_;
    double h_;
    Vec3 size_;
    std::vector<double> kappa_;
    std::vector<InteriorFace> interior_;
    std::vector<BoundaryFace> boundary_;
    std::vector<std::array<Index, 6>> element_boundary_; // -1 when not a boundary face
};

Mesh build_mesh(const MeshConfig& config);

// Subdomains are numbered s = sx + n (sy + n sz).
Index subdomain_index(int n, const Triple& s);
Triple subdomain_triple(int n, Index s);

// Geometric box of subdomain D_s; its faces cut through the midplanes of shared element layers.
Box subdomain_box(const MeshConfig& config, const Triple& s);

// Subdomains on one axis that own element index e.
std::vector<int> axis_owners(const MeshConfig& config, int e);

// Sorted subdomain indices whose box overlaps the element with positive volume.
IndexList element_owners(const MeshConfig& config, const Triple& element);

} // namespace pwbddc
