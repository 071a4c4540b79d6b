#pragma once

#include "pwbddc/mesh.hpp"

namespace pwbddc {

enum class GlobKind { Interior, Face, Edge, Vertex };

const char* to_string(GlobKind kind);

// 1 owner: interior, 2: face, 3-4: edge, more: vertex.
GlobKind kind_from_multiplicity(std::size_t owners);

struct Glob {
    GlobKind kind = GlobKind::Interior;
    IndexList subdomains; // sorted neighbour set N_X
    IndexList dofs;       // sorted
};

struct GlobPartition {
    Index subdomain_count = 0;
    std::vector<Glob> globs;
    IndexList dof_glob;                          // dof -> glob id
    std::vector<IndexList> subdomain_globs;      // non-interior globs touching each subdomain, ascending
    std::vector<IndexList> subdomain_interior;   // interior dofs I_r, sorted
    std::vector<IndexList> subdomain_dofs;       // all dofs of D_r, sorted

    Index count(GlobKind kind) const;
    Index dof_count(GlobKind kind) const;
    IndexList interface_dofs() const; // dofs of all non-interior globs, sorted
};

// Groups dofs by identical neighbour sets. Globs are ordered by kind, then by first dof.
GlobPartition partition_by_neighbours(Index subdomain_count, const std::vector<IndexList>& dof_neighbours);

GlobPartition classify_globs(const MeshConfig& config, const Mesh& mesh);

} // namespace pwbddc
