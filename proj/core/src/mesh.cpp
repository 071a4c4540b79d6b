#include "pwbddc/mesh.hpp"

#include <algorithm>
#include <string>

namespace pwbddc {

Box Box::intersect(const Box& other) const
{
    Box out;
    out.lo = lo.cwiseMax(other.lo);
    out.hi = hi.cwiseMin(other.hi);
    return out;
}

bool Box::contains(const Vec3& x, double tol) const
{
    for (int a = 0; a < 3; ++a)
        if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
    return true;
}

void MeshConfig::validate() const
{
    if (n < 1) throw ConfigError("n must be at least 1, got " + std::to_string(n));
    if (m < 1) throw ConfigError("m must be at least 1, got " + std::to_string(m));
    if (p < 1) throw ConfigError("p must be at least 1, got " + std::to_string(p));
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    for (int a = 0; a < 3; ++a)
        if (!(domain.hi[a] > domain.lo[a])) throw ConfigError("domain box has non-positive extent");
}

Vec3 BoundaryFace::normal() const
{
    Vec3 v = Vec3::Zero();
    v[axis] = side;
    return v;
}

Mesh::Mesh(const MeshConfig& config) : config_(config)
{
    config_.validate();
    N_ = config_.elements_per_axis();
    for (int a = 0; a < 3; ++a) size_[a] = config_.domain.extent(a) / N_;
    h_ = size_.maxCoeff();
    kappa_.assign(static_cast<std::size_t>(element_count()), config_.kappa);
    element_boundary_.assign(static_cast<std::size_t>(element_count()), {-1, -1, -1, -1, -1, -1});

    for (Index e = 0; e < element_count(); ++e) {
        const Triple t = element_triple(e);
        const Box box = element_box(e);
        for (int a = 0; a < 3; ++a) {
            if (t[a] + 1 < N_) {
                Triple u = t;
                ++u[a];
                InteriorFace f;
                f.lower = e;
                f.upper = element_index(u);
                f.axis = a;
                f.rect = box;
                f.rect.lo[a] = box.hi[a];
                interior_.push_back(f);
            }
            for (int side : {-1, 1}) {
                const bool on_boundary = side < 0 ? t[a] == 0 : t[a] == N_ - 1;
                if (!on_boundary) continue;
                BoundaryFace f;
                f.element = e;
                f.axis = a;
                f.side = side;
                f.kind = config_.boundary[2 * a + (side > 0 ? 1 : 0)];
                f.rect = box;
                if (side < 0)
                    f.rect.hi[a] = box.lo[a];
                else
                    f.rect.lo[a] = box.hi[a];
                element_boundary_[e][2 * a + (side > 0 ? 1 : 0)] = static_cast<Index>(boundary_.size());
                boundary_.push_back(f);
            }
        }
    }
}

Triple Mesh::element_triple(Index e) const
{
    const Index N = N_;
    return {static_cast<int>(e % N), static_cast<int>((e / N) % N), static_cast<int>(e / (N * N))};
}

Box Mesh::element_box(Index e) const
{
    const Triple t = element_triple(e);
    Box b;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] = config_.domain.lo[a] + t[a] * size_[a];
        b.hi[a] = config_.domain.lo[a] + (t[a] + 1) * size_[a];
    }
    return b;
}

bool Mesh::in_grid(const Triple& t) const
{
    for (int a = 0; a < 3; ++a)
        if (t[a] < 0 || t[a] >= N_) return false;
    return true;
}

Index Mesh::upper_neighbour(Index e, int axis) const
{
    Triple t = element_triple(e);
    if (++t[axis] >= N_) return -1;
    return element_index(t);
}

Index Mesh::lower_neighbour(Index e, int axis) const
{
    Triple t = element_triple(e);
    if (--t[axis] < 0) return -1;
    return element_index(t);
}

std::vector<Index> Mesh::boundary_faces_of(Index e) const
{
    std::vector<Index> out;
    for (Index f : element_boundary_[e])
        if (f >= 0) out.push_back(f);
    return out;
}

Mesh build_mesh(const MeshConfig& config) { return Mesh(config); }

Index subdomain_index(int n, const Triple& s) { return s[0] + static_cast<Index>(n) * (s[1] + static_cast<Index>(n) * s[2]); }

Triple subdomain_triple(int n, Index s)
{
    return {static_cast<int>(s % n), static_cast<int>((s / n) % n), static_cast<int>(s / (static_cast<Index>(n) * n))};
}

Box subdomain_box(const MeshConfig& config, const Triple& s)
{
    const int N = config.elements_per_axis();
    Box b;
    for (int a = 0; a < 3; ++a) {
        const double size = config.domain.extent(a) / N;
        const double lo = std::max(0.0, s[a] * (config.m + 1) - 0.5);
        const double hi = std::min(static_cast<double>(N), s[a] * (config.m + 1) + config.m + 0.5);
        b.lo[a] = config.domain.lo[a] + lo * size;
        b.hi[a] = config.domain.lo[a] + hi * size;
    }
    return b;
}

std::vector<int> axis_owners(const MeshConfig& config, int e)
{
    const int period = config.m + 1;
    const int s = e / period;
    if (e % period == config.m && s + 1 < config.n) return {s, s + 1};
    return {s};
}

IndexList element_owners(const MeshConfig& config, const Triple& element)
{
    const int N = config.elements_per_axis();
    for (int a = 0; a < 3; ++a)
        if (element[a] < 0 || element[a] >= N)
            throw std::out_of_range("element index outside the " + std::to_string(N) + "^3 grid");
    const auto ox = axis_owners(config, element[0]);
    const auto oy = axis_owners(config, element[1]);
    const auto oz = axis_owners(config, element[2]);
    IndexList out;
    for (int z : oz)
        for (int y : oy)
            for (int x : ox) out.push_back(subdomain_index(config.n, {x, y, z}));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace pwbddc
