#pragma once

#include "pwbddc/basis.hpp"
#include "pwbddc/globs.hpp"

#include <functional>

namespace pwbddc {

// c exp(i k.x)
struct PlaneWaveTerm {
    Complex coefficient;
    Vec3 wavevector;
};

// Boundary data as sums of plane waves, per outward normal. An empty function means "not given".
struct BoundaryData {
    using Terms = std::function<std::vector<PlaneWaveTerm>(const Vec3& normal)>;
    Terms dirichlet;
    Terms neumann;
    Terms robin;
};

// Data generated by u_ex = exp(i kappa v0.x): g_d = u_ex, g_n = du/dn, g_r = (d/dn + i kappa) u_ex.
BoundaryData assemble_rhs_exact(double kappa, const Vec3& v0);

// v1 = (tan(-pi/10), 0, tan(pi/5)), normalised.
Vec3 example_direction();

// Evaluates the element-pair blocks of a(.,.) and the boundary blocks of L(.).
// Rows index test functions, columns trial functions, so a(u, v) = v^H A u.
class FormEvaluator {
public:
    FormEvaluator(const Mesh& mesh, const WaveBasis& basis);

    const Mesh& mesh() const { return *mesh_; }
    const WaveBasis& basis() const { return *basis_; }
    const FormWeights& weights() const { return weights_; }
    int p() const { return basis_->size(); }

    // 2p x 2p block over [lower dofs, upper dofs] for the face restricted to rect.
    void interior_block(const InteriorFace& face, const Box& rect, CMatrix& out) const;
    // p x p block of the boundary terms on rect.
    void boundary_block(const BoundaryFace& face, const Box& rect, CMatrix& out) const;
    // p entries of L(phi_l) on rect.
    void boundary_rhs(const BoundaryFace& face, const Box& rect, const BoundaryData& data, CVector& out) const;

private:
    const Mesh* mesh_;
    const WaveBasis* basis_;
    FormWeights weights_;
};

struct AssembledSystem {
    SparseMatrix matrix;
    CVector rhs;
};

AssembledSystem assemble_global(const FormEvaluator& form, const BoundaryData& data);

// Elements of the subdomain, sorted (those with positive-volume overlap with D_r).
IndexList subdomain_elements(const Mesh& mesh, Index subdomain);

IndexList element_dofs(const IndexList& elements, int p);

// Caches the clipped face blocks among a set of elements. The form over a subset keeps interior
// faces with both elements in the subset plus the boundary faces of the subset, all clipped.
class LocalFormAssembler {
public:
    LocalFormAssembler(const FormEvaluator& form, IndexList elements, const Box& clip);

    const IndexList& elements() const { return elements_; }
    CMatrix matrix() const;
    CMatrix matrix(const IndexList& subset) const;

private:
    struct FaceBlock {
        Index lower;
        Index upper; // -1 for a boundary face
        CMatrix block;
    };
    const FormEvaluator* form_;
    IndexList elements_;
    std::vector<FaceBlock> faces_;
};

struct LocalForm {
    IndexList elements;
    IndexList dofs;
    CMatrix matrix;
};

LocalForm assemble_subdomain_form(const FormEvaluator& form, Index subdomain);
std::vector<LocalForm> assemble_subdomain_forms(const FormEvaluator& form);

// Scatters a dense local form into a global-size quadratic form check: v^H A_loc u on the dof list.
Complex local_form_value(const LocalForm& form, const CVector& u, const CVector& v);

} // namespace pwbddc
