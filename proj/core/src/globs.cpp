#include "pwbddc/globs.hpp"

#include <algorithm>
#include <map>

namespace pwbddc {

const char* to_string(GlobKind kind)
{
    switch (kind) {
    case GlobKind::Interior: return "interior";
    case GlobKind::Face: return "face";
    case GlobKind::Edge: return "edge";
    case GlobKind::Vertex: return "vertex";
    }
    return "unknown";
}

GlobKind kind_from_multiplicity(std::size_t owners)
{
    if (owners <= 1) return GlobKind::Interior;
    if (owners == 2) return GlobKind::Face;
    if (owners <= 4) return GlobKind::Edge;
    return GlobKind::Vertex;
}

Index GlobPartition::count(GlobKind kind) const
{
    return std::count_if(globs.begin(), globs.end(), [kind](const Glob& g) { return g.kind == kind; });
}

Index GlobPartition::dof_count(GlobKind kind) const
{
    Index total = 0;
    for (const auto& g : globs)
        if (g.kind == kind) total += static_cast<Index>(g.dofs.size());
    return total;
}

IndexList GlobPartition::interface_dofs() const
{
    IndexList out;
    for (const auto& g : globs)
        if (g.kind != GlobKind::Interior) out.insert(out.end(), g.dofs.begin(), g.dofs.end());
    std::sort(out.begin(), out.end());
    return out;
}

GlobPartition partition_by_neighbours(Index subdomain_count, const std::vector<IndexList>& dof_neighbours)
{
    GlobPartition part;
    part.subdomain_count = subdomain_count;
    const Index ndof = static_cast<Index>(dof_neighbours.size());

    std::map<IndexList, Index> key_to_glob;
    std::vector<Glob> found;
    for (Index d = 0; d < ndof; ++d) {
        const IndexList& key = dof_neighbours[d];
        if (key.empty()) throw Error("dof " + std::to_string(d) + " belongs to no subdomain");
        auto [it, inserted] = key_to_glob.try_emplace(key, static_cast<Index>(found.size()));
        if (inserted) {
            Glob g;
            g.kind = kind_from_multiplicity(key.size());
            g.subdomains = key;
            found.push_back(std::move(g));
        }
        found[it->second].dofs.push_back(d);
    }

    // Interior dofs of one subdomain form one glob; that is what I_r means.
    std::vector<Index> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (found[a].kind != found[b].kind) return found[a].kind < found[b].kind;
        return found[a].dofs.front() < found[b].dofs.front();
    });

    part.dof_glob.assign(static_cast<std::size_t>(ndof), -1);
    part.subdomain_globs.assign(static_cast<std::size_t>(subdomain_count), {});
    part.subdomain_interior.assign(static_cast<std::size_t>(subdomain_count), {});
    part.subdomain_dofs.assign(static_cast<std::size_t>(subdomain_count), {});
    for (Index id : order) {
        const Index gid = static_cast<Index>(part.globs.size());
        Glob& g = found[id];
        for (Index d : g.dofs) part.dof_glob[d] = gid;
        for (Index s : g.subdomains) {
            if (s < 0 || s >= subdomain_count) throw std::out_of_range("subdomain id out of range");
            auto& dofs = part.subdomain_dofs[s];
            dofs.insert(dofs.end(), g.dofs.begin(), g.dofs.end());
            if (g.kind == GlobKind::Interior) {
                auto& in = part.subdomain_interior[s];
                in.insert(in.end(), g.dofs.begin(), g.dofs.end());
            } else {
                part.subdomain_globs[s].push_back(gid);
            }
        }
        part.globs.push_back(std::move(g));
    }
    for (auto& v : part.subdomain_dofs) std::sort(v.begin(), v.end());
    for (auto& v : part.subdomain_interior) std::sort(v.begin(), v.end());
    return part;
}

GlobPartition classify_globs(const MeshConfig& config, const Mesh& mesh)
{
    const int p = config.p;
    std::vector<IndexList> neighbours(static_cast<std::size_t>(mesh.dof_count()));
    for (Index e = 0; e < mesh.element_count(); ++e) {
        const IndexList owners = element_owners(config, mesh.element_triple(e));
        for (int l = 0; l < p; ++l) neighbours[mesh.dof(e, l)] = owners;
    }
    const Index nsub = static_cast<Index>(config.n) * config.n * config.n;
    return partition_by_neighbours(nsub, neighbours);
}

} // namespace pwbddc
