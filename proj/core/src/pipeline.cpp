#include "pwbddc/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace pwbddc {

IndexList slab_elements(const Mesh& mesh, Index nu, const Glob& glob, double eta)
{
    const int p = mesh.config().p;
    IndexList glob_elements;
    for (Index d : glob.dofs) glob_elements.push_back(d / p);
    glob_elements.erase(std::unique(glob_elements.begin(), glob_elements.end()), glob_elements.end());
    std::vector<Triple> gt;
    for (Index e : glob_elements) gt.push_back(mesh.element_triple(e));

    const Vec3& size = mesh.element_size();
    const double limit = eta * eta * (1.0 - 1e-12);
    IndexList out;
    for (Index e : subdomain_elements(mesh, nu)) {
        const Triple t = mesh.element_triple(e);
        for (const Triple& g : gt) {
            double d2 = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double gap = std::max(0, std::abs(t[a] - g[a]) - 1) * size[a];
                d2 += gap * gap;
            }
            if (d2 < limit || (eta > 0.0 && d2 == 0.0)) {
                out.push_back(e);
                break;
            }
        }
    }
    return out;
}

std::vector<std::pair<CMatrix, CMatrix>> economic_glob_blocks(const FormEvaluator& form, const GlobPartition& partition,
                                                              Index nu, double eta, double pivot_floor)
{
    const Mesh& mesh = form.mesh();
    const int p = form.p();
    const LocalFormAssembler assembler(form, subdomain_elements(mesh, nu),
                                       subdomain_box(mesh.config(), subdomain_triple(mesh.config().n, nu)));
    std::vector<std::pair<CMatrix, CMatrix>> out;
    for (Index g : partition.subdomain_globs[nu]) {
        const Glob& glob = partition.globs[g];
        if (glob.kind == GlobKind::Vertex) {
            out.emplace_back();
            continue;
        }
        const IndexList slab = slab_elements(mesh, nu, glob, eta);
        const CMatrix M = assembler.matrix(slab);
        const IndexList dofs = element_dofs(slab, p);
        IndexList in_glob;
        IndexList interior;
        IndexList rest;
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            const Index owner = partition.dof_glob[dofs[i]];
            if (owner == g)
                in_glob.push_back(static_cast<Index>(i));
            else if (partition.globs[owner].kind == GlobKind::Interior)
                interior.push_back(static_cast<Index>(i));
            else
                rest.push_back(static_cast<Index>(i));
        }
        auto S = schur_complement(M, in_glob, interior, pivot_floor);
        if (!S) throw SingularInterior(nu, "slab interior block of subdomain " + std::to_string(nu) + " for glob " +
                                               std::to_string(g) + " violates the pivot floor");
        IndexList eliminate = interior;
        eliminate.insert(eliminate.end(), rest.begin(), rest.end());
        std::sort(eliminate.begin(), eliminate.end());
        auto Sbar = schur_complement(M, in_glob, eliminate, pivot_floor);
        if (!Sbar)
            throw SingularEliminationBlock(g, nu, "slab elimination block of subdomain " + std::to_string(nu) +
                                                      " for glob " + std::to_string(g) + " violates the pivot floor");
        out.emplace_back(std::move(*S), std::move(*Sbar));
    }
    return out;
}

LevelProblem make_pwls_level(const FormEvaluator& form, std::shared_ptr<const SparseMatrix> matrix,
                             const PwlsLevelOptions& options)
{
    const Mesh& mesh = form.mesh();
    LevelProblem problem;
    problem.matrix = std::move(matrix);
    problem.partition = classify_globs(mesh.config(), mesh);
    problem.grid_n = mesh.config().n;
    const FormEvaluator* f = &form;
    problem.local_matrix = [f](Index r) {
        const Mesh& m = f->mesh();
        return LocalFormAssembler(*f, subdomain_elements(m, r), subdomain_box(m.config(), subdomain_triple(m.config().n, r)))
            .matrix();
    };
    if (options.economic) {
        const double eta = options.eta > 0.0 ? options.eta : mesh.h();
        const double floor = options.pivot_floor;
        auto partition = std::make_shared<const GlobPartition>(problem.partition);
        problem.glob_blocks = [f, partition, eta, floor](Index nu) {
            return economic_glob_blocks(*f, *partition, nu, eta, floor);
        };
    }
    return problem;
}

} // namespace pwbddc
