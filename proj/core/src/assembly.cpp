#include "pwbddc/assembly.hpp"

#include "pwbddc/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace pwbddc {

namespace {

constexpr Complex I_unit{0.0, 1.0};

bool has_area(const Box& rect, int normal_axis, double scale)
{
    for (int a = 0; a < 3; ++a)
        if (a != normal_axis && rect.extent(a) <= 1e-14 * scale) return false;
    return true;
}

InteriorFace face_above(const Mesh& mesh, Index e, int axis)
{
    InteriorFace f;
    f.lower = e;
    f.upper = mesh.upper_neighbour(e, axis);
    f.axis = axis;
    f.rect = mesh.element_box(e);
    f.rect.lo[axis] = f.rect.hi[axis];
    return f;
}

} // namespace

BoundaryData assemble_rhs_exact(double kappa, const Vec3& v0)
{
    if (std::abs(v0.norm() - 1.0) > 1e-12) throw ConfigError("v0 must be a unit vector");
    const Vec3 k = kappa * v0;
    BoundaryData data;
    data.dirichlet = [k](const Vec3&) { return std::vector<PlaneWaveTerm>{{Complex(1.0, 0.0), k}}; };
    data.neumann = [k](const Vec3& n) { return std::vector<PlaneWaveTerm>{{I_unit * k.dot(n), k}}; };
    data.robin = [k, kappa, v0](const Vec3& n) {
        return std::vector<PlaneWaveTerm>{{I_unit * kappa * (1.0 + v0.dot(n)), k}};
    };
    return data;
}

Vec3 example_direction()
{
    return Vec3(std::tan(-M_PI / 10.0), 0.0, std::tan(M_PI / 5.0)).normalized();
}

FormEvaluator::FormEvaluator(const Mesh& mesh, const WaveBasis& basis) : mesh_(&mesh), basis_(&basis)
{
    if (basis.size() != mesh.config().p) throw DimensionMismatch("basis size differs from MeshConfig::p");
    weights_.h = mesh.h();
}

void FormEvaluator::interior_block(const InteriorFace& face, const Box& rect, CMatrix& out) const
{
    const int p = this->p();
    const auto& dirs = basis_->directions;
    const double kk = mesh_->kappa(face.lower);
    const double kj = mesh_->kappa(face.upper);
    const double wa = weights_.alpha(kk, kj);
    const double wb = weights_.beta(kk, kj);
    const int ax = face.axis;

    out.resize(2 * p, 2 * p);
    auto wave = [&](int a) { return (a < p ? kk : kj) * dirs[a % p]; };
    for (int s = 0; s < 2 * p; ++s) {
        const Vec3 ws = wave(s);
        const double ks = s < p ? kk : kj;
        const double sign_s = s < p ? 1.0 : -1.0;
        const double qs = dirs[s % p][ax];
        for (int t = 0; t <= s; ++t) {
            const Vec3 wt = wave(t);
            const double kt = t < p ? kk : kj;
            const double sign = sign_s * (t < p ? 1.0 : -1.0);
            const double qt = dirs[t % p][ax];
            const double weight = sign * (wa + wb * ks * kt * qs * qt);
            const Complex v = weight * oscillatory_rect_integral(ws - wt, rect);
            out(t, s) = v;
            out(s, t) = std::conj(v);
        }
        out(s, s) = out(s, s).real();
    }
}

void FormEvaluator::boundary_block(const BoundaryFace& face, const Box& rect, CMatrix& out) const
{
    const int p = this->p();
    const auto& dirs = basis_->directions;
    const double k = mesh_->kappa(face.element);
    const Vec3 n = face.normal();
    out.resize(p, p);
    for (int s = 0; s < p; ++s) {
        const double qs = dirs[s].dot(n);
        for (int t = 0; t <= s; ++t) {
            const double qt = dirs[t].dot(n);
            double weight = 0.0;
            switch (face.kind) {
            case BoundaryKind::Dirichlet: weight = weights_.theta_dirichlet(k); break;
            case BoundaryKind::Neumann: weight = weights_.theta_neumann(k) * k * k * qs * qt; break;
            case BoundaryKind::Robin: weight = weights_.theta_robin(k) * k * k * (1.0 + qs) * (1.0 + qt); break;
            }
            const Complex v = weight * oscillatory_rect_integral(k * (dirs[s] - dirs[t]), rect);
            out(t, s) = v;
            out(s, t) = std::conj(v);
        }
        out(s, s) = out(s, s).real();
    }
}

void FormEvaluator::boundary_rhs(const BoundaryFace& face, const Box& rect, const BoundaryData& data, CVector& out) const
{
    const int p = this->p();
    const auto& dirs = basis_->directions;
    const double k = mesh_->kappa(face.element);
    const Vec3 n = face.normal();
    const BoundaryData::Terms* terms = nullptr;
    double theta = 0.0;
    switch (face.kind) {
    case BoundaryKind::Dirichlet: terms = &data.dirichlet; theta = weights_.theta_dirichlet(k); break;
    case BoundaryKind::Neumann: terms = &data.neumann; theta = weights_.theta_neumann(k); break;
    case BoundaryKind::Robin: terms = &data.robin; theta = weights_.theta_robin(k); break;
    }
    if (!*terms) throw ConfigError(std::string("missing boundary data for a face tagged ") +
                                   (face.kind == BoundaryKind::Dirichlet ? "Dirichlet"
                                    : face.kind == BoundaryKind::Neumann ? "Neumann" : "Robin"));
    const auto g = (*terms)(n);
    out = CVector::Zero(p);
    for (int t = 0; t < p; ++t) {
        const double qt = dirs[t].dot(n);
        Complex test_weight{1.0, 0.0};
        if (face.kind == BoundaryKind::Neumann) test_weight = I_unit * k * qt;
        if (face.kind == BoundaryKind::Robin) test_weight = I_unit * k * (1.0 + qt);
        for (const auto& term : g)
            out[t] += theta * term.coefficient * std::conj(test_weight) *
                      oscillatory_rect_integral(term.wavevector - k * dirs[t], rect);
    }
}

AssembledSystem assemble_global(const FormEvaluator& form, const BoundaryData& data)
{
    const Mesh& mesh = form.mesh();
    const int p = form.p();
    const Index ndof = mesh.dof_count();
    AssembledSystem sys;
    sys.matrix.resize(ndof, ndof);
    sys.matrix.reserve(Eigen::VectorXi::Constant(ndof, 7 * p));

    CMatrix block;
    for (const auto& face : mesh.interior_faces()) {
        form.interior_block(face, face.rect, block);
        const Index base[2] = {face.lower * p, face.upper * p};
        for (int s = 0; s < 2 * p; ++s)
            for (int t = 0; t < 2 * p; ++t)
                sys.matrix.coeffRef(base[t / p] + t % p, base[s / p] + s % p) += block(t, s);
    }
    sys.rhs = CVector::Zero(ndof);
    CVector local;
    for (const auto& face : mesh.boundary_faces()) {
        form.boundary_block(face, face.rect, block);
        const Index base = face.element * p;
        for (int s = 0; s < p; ++s)
            for (int t = 0; t < p; ++t) sys.matrix.coeffRef(base + t, base + s) += block(t, s);
        form.boundary_rhs(face, face.rect, data, local);
        sys.rhs.segment(base, p) += local;
    }
    sys.matrix.makeCompressed();
    return sys;
}

IndexList subdomain_elements(const Mesh& mesh, Index subdomain)
{
    const MeshConfig& cfg = mesh.config();
    const Triple s = subdomain_triple(cfg.n, subdomain);
    const int N = mesh.elements_per_axis();
    int lo[3];
    int hi[3];
    for (int a = 0; a < 3; ++a) {
        lo[a] = std::max(0, s[a] * (cfg.m + 1) - 1);
        hi[a] = std::min(N - 1, s[a] * (cfg.m + 1) + cfg.m);
    }
    IndexList out;
    for (int z = lo[2]; z <= hi[2]; ++z)
        for (int y = lo[1]; y <= hi[1]; ++y)
            for (int x = lo[0]; x <= hi[0]; ++x) out.push_back(mesh.element_index({x, y, z}));
    return out;
}

IndexList element_dofs(const IndexList& elements, int p)
{
    IndexList out;
    out.reserve(elements.size() * static_cast<std::size_t>(p));
    for (Index e : elements)
        for (int l = 0; l < p; ++l) out.push_back(e * p + l);
    return out;
}

LocalFormAssembler::LocalFormAssembler(const FormEvaluator& form, IndexList elements, const Box& clip)
    : form_(&form), elements_(std::move(elements))
{
    std::sort(elements_.begin(), elements_.end());
    const Mesh& mesh = form.mesh();
    const double scale = mesh.h();
    std::unordered_map<Index, Index> pos;
    for (std::size_t i = 0; i < elements_.size(); ++i) pos.emplace(elements_[i], static_cast<Index>(i));

    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const Index e = elements_[i];
        for (int a = 0; a < 3; ++a) {
            const Index u = mesh.upper_neighbour(e, a);
            if (u < 0) continue;
            auto it = pos.find(u);
            if (it == pos.end()) continue;
            const InteriorFace face = face_above(mesh, e, a);
            const Box rect = face.rect.intersect(clip);
            if (!has_area(rect, a, scale)) continue;
            FaceBlock fb{static_cast<Index>(i), it->second, {}};
            form.interior_block(face, rect, fb.block);
            faces_.push_back(std::move(fb));
        }
        for (Index bf : mesh.boundary_faces_of(e)) {
            const BoundaryFace& face = mesh.boundary_faces()[bf];
            const Box rect = face.rect.intersect(clip);
            if (!has_area(rect, face.axis, scale)) continue;
            FaceBlock fb{static_cast<Index>(i), -1, {}};
            form.boundary_block(face, rect, fb.block);
            faces_.push_back(std::move(fb));
        }
    }
}

CMatrix LocalFormAssembler::matrix() const { return matrix(elements_); }

CMatrix LocalFormAssembler::matrix(const IndexList& subset) const
{
    const int p = form_->p();
    std::vector<Index> local(elements_.size(), -1);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), subset[i]);
        if (it == elements_.end() || *it != subset[i]) throw std::invalid_argument("subset element outside the assembler's element set");
        local[it - elements_.begin()] = static_cast<Index>(i);
    }
    const Index size = static_cast<Index>(subset.size()) * p;
    CMatrix A = CMatrix::Zero(size, size);
    for (const auto& f : faces_) {
        const Index a = local[f.lower];
        if (a < 0) continue;
        if (f.upper < 0) {
            A.block(a * p, a * p, p, p) += f.block;
            continue;
        }
        const Index b = local[f.upper];
        if (b < 0) continue;
        A.block(a * p, a * p, p, p) += f.block.topLeftCorner(p, p);
        A.block(a * p, b * p, p, p) += f.block.topRightCorner(p, p);
        A.block(b * p, a * p, p, p) += f.block.bottomLeftCorner(p, p);
        A.block(b * p, b * p, p, p) += f.block.bottomRightCorner(p, p);
    }
    return A;
}

LocalForm assemble_subdomain_form(const FormEvaluator& form, Index subdomain)
{
    const Mesh& mesh = form.mesh();
    LocalForm out;
    out.elements = subdomain_elements(mesh, subdomain);
    out.dofs = element_dofs(out.elements, form.p());
    const Box clip = subdomain_box(mesh.config(), subdomain_triple(mesh.config().n, subdomain));
    out.matrix = LocalFormAssembler(form, out.elements, clip).matrix();
    return out;
}

std::vector<LocalForm> assemble_subdomain_forms(const FormEvaluator& form)
{
    const int n = form.mesh().config().n;
    std::vector<LocalForm> out;
    for (Index r = 0; r < static_cast<Index>(n) * n * n; ++r) out.push_back(assemble_subdomain_form(form, r));
    return out;
}

Complex local_form_value(const LocalForm& form, const CVector& u, const CVector& v)
{
    CVector ul(static_cast<Index>(form.dofs.size()));
    CVector vl(static_cast<Index>(form.dofs.size()));
    for (std::size_t i = 0; i < form.dofs.size(); ++i) {
        ul[static_cast<Index>(i)] = u[form.dofs[i]];
        vl[static_cast<Index>(i)] = v[form.dofs[i]];
    }
    return vl.dot(form.matrix * ul);
}

} // namespace pwbddc
