#include "pwbddc/bddc.hpp"

#include "pwbddc/parallel.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <random>
#include <unordered_map>

namespace pwbddc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct SubdomainLayout {
    IndexList interior_pos;  // positions in subdomain_dofs
    IndexList interface_pos; // positions in subdomain_dofs
    std::vector<IndexList> glob_pos; // per subdomain glob, positions in the interface ordering
};

SubdomainLayout make_layout(const GlobPartition& part, Index r)
{
    SubdomainLayout L;
    const IndexList& dofs = part.subdomain_dofs[r];
    std::unordered_map<Index, Index> iface_index;
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        const Index g = part.dof_glob[dofs[i]];
        if (part.globs[g].kind == GlobKind::Interior) {
            L.interior_pos.push_back(static_cast<Index>(i));
        } else {
            iface_index.emplace(dofs[i], static_cast<Index>(L.interface_pos.size()));
            L.interface_pos.push_back(static_cast<Index>(i));
        }
    }
    for (Index g : part.subdomain_globs[r]) {
        IndexList pos;
        for (Index d : part.globs[g].dofs) pos.push_back(iface_index.at(d));
        L.glob_pos.push_back(std::move(pos));
    }
    return L;
}

Index slot_of(const Glob& glob, Index r)
{
    auto it = std::lower_bound(glob.subdomains.begin(), glob.subdomains.end(), r);
    if (it == glob.subdomains.end() || *it != r) throw Error("glob is not incident to subdomain " + std::to_string(r));
    return static_cast<Index>(it - glob.subdomains.begin());
}

} // namespace

std::vector<std::pair<CMatrix, CMatrix>> full_glob_blocks(const LevelProblem& problem, Index nu, double pivot_floor)
{
    const GlobPartition& part = problem.partition;
    const SubdomainLayout L = make_layout(part, nu);
    const LocalSchur ls(problem.local_matrix(nu), L.interior_pos, L.interface_pos, nu, pivot_floor);
    std::vector<std::pair<CMatrix, CMatrix>> out;
    const IndexList& globs = part.subdomain_globs[nu];
    for (std::size_t i = 0; i < globs.size(); ++i) {
        if (part.globs[globs[i]].kind == GlobKind::Vertex) {
            out.emplace_back();
            continue;
        }
        out.emplace_back(ls.glob_S(L.glob_pos[i]), ls.glob_Sbar(L.glob_pos[i], globs[i]));
    }
    return out;
}

struct BddcLevel::SubdomainData {
    IndexList globs;
    IndexList slots;
    IndexList dual_offset;
    Index n_dual = 0;
    IndexList primal_global;
    HermitianFactor dual_factor;
    CMatrix phi; // -S_dd^{-1} S_dp
};

struct BddcLevel::CoarseDirect {
    Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
};

BddcLevel::~BddcLevel() = default;

BddcLevel::BddcLevel(LevelProblem problem, const BddcOptions& options, int level)
    : problem_(std::move(problem)), options_(options), level_(level)
{
    if (options_.levels < 2) throw ConfigError("number of levels must be at least 2");
    if (!problem_.matrix) throw ConfigError("level problem has no matrix");
    if (!problem_.glob_blocks) {
        const LevelProblem* self = &problem_;
        const double floor = options_.pivot_floor;
        problem_.glob_blocks = [self, floor](Index nu) { return full_glob_blocks(*self, nu, floor); };
    }
    schur_ = std::make_unique<SchurOperator>(problem_.matrix, problem_.partition, options_.pivot_floor);
    build_globs();
    std::vector<CMatrix> coarse_locals;
    const auto t0 = Clock::now();
    build_subdomains(&coarse_locals);
    build_coarse(&coarse_locals);
    seconds_coarse_ = seconds_since(t0);
}

void BddcLevel::build_globs()
{
    const GlobPartition& part = problem_.partition;
    const Index nglob = static_cast<Index>(part.globs.size());
    globs_.assign(static_cast<std::size_t>(nglob), {});

    std::unordered_map<Index, Index> iface_index;
    const IndexList& iface = schur_->interface_dofs();
    for (std::size_t i = 0; i < iface.size(); ++i) iface_index.emplace(iface[i], static_cast<Index>(i));

    std::vector<std::vector<CMatrix>> S(static_cast<std::size_t>(nglob));
    std::vector<std::vector<CMatrix>> Sbar(static_cast<std::size_t>(nglob));
    for (Index g = 0; g < nglob; ++g) {
        const Glob& glob = part.globs[g];
        GlobData& gd = globs_[g];
        gd.kind = glob.kind;
        gd.subdomains = glob.subdomains;
        if (glob.kind == GlobKind::Interior) continue;
        for (Index d : glob.dofs) gd.interface_pos.push_back(iface_index.at(d));
        S[g].resize(glob.subdomains.size());
        Sbar[g].resize(glob.subdomains.size());
    }

    auto t0 = Clock::now();
    const Index nsub = part.subdomain_count;
    parallel_for(nsub, options_.threads, [&](std::ptrdiff_t nu) {
        auto blocks = problem_.glob_blocks(nu);
        const IndexList& gl = part.subdomain_globs[nu];
        if (blocks.size() != gl.size()) throw DimensionMismatch("glob block provider returned the wrong number of blocks");
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const Index k = slot_of(part.globs[gl[i]], nu);
            S[gl[i]][k] = std::move(blocks[i].first);
            Sbar[gl[i]][k] = std::move(blocks[i].second);
        }
    });
    seconds_glob_blocks_ = seconds_since(t0);

    t0 = Clock::now();
    std::vector<char> fallback(static_cast<std::size_t>(nglob), 0);
    parallel_for(nglob, options_.threads, [&](std::ptrdiff_t g) {
        const Glob& glob = part.globs[g];
        GlobData& gd = globs_[g];
        if (glob.kind == GlobKind::Interior) return;
        const Index n = static_cast<Index>(glob.dofs.size());
        const std::size_t nn = glob.subdomains.size();
        if (glob.kind == GlobKind::Vertex) {
            gd.split = all_primal(n);
            gd.D.assign(nn, CMatrix::Identity(n, n) / static_cast<double>(nn));
        } else {
            try {
                gd.D = scaling_matrices(options_.deluxe_from_sbar ? Sbar[g] : S[g], options_.scaling);
            } catch (const SingularDeluxeSum&) {
                gd.D = scaling_matrices(S[g], ScalingKind::Multiplicity);
                gd.deluxe_fallback = true;
                fallback[g] = 1;
            }
            const Gevp gevp = build_gevp(S[g], Sbar[g], gd.D);
            const double theta = glob.kind == GlobKind::Face ? options_.theta_face : options_.theta_edge;
            try {
                gd.split = solve_gevp_and_split(gevp.A, gevp.B, theta, options_.split);
            } catch (const EigenSolverFailure& e) {
                throw EigenSolverFailure(std::string(e.what()) + " (glob " + std::to_string(g) + ")");
            }
        }
        for (const auto& d : gd.D) gd.DT.push_back(d * gd.split.T_dual);
        gd.T_inverse = gd.split.T().partialPivLu().inverse();
        if (options_.keep_glob_blocks) {
            gd.S = std::move(S[g]);
            gd.Sbar = std::move(Sbar[g]);
        } else {
            S[g].clear();
            Sbar[g].clear();
        }
    });
    deluxe_fallbacks_ = std::count(fallback.begin(), fallback.end(), 1);

    std::vector<GlobEigenSplit> splits(static_cast<std::size_t>(nglob));
    for (Index g = 0; g < nglob; ++g) {
        splits[g].T_dual.resize(0, globs_[g].split.n_dual());
        splits[g].T_primal.resize(0, globs_[g].split.n_primal());
    }
    coarse_ = build_coarse_space(part, splits);
    seconds_eigen_ = seconds_since(t0);
}

void BddcLevel::build_subdomains(std::vector<CMatrix>* coarse_locals)
{
    const GlobPartition& part = problem_.partition;
    const Index nsub = part.subdomain_count;
    subdomains_.assign(static_cast<std::size_t>(nsub), {});
    coarse_locals->assign(static_cast<std::size_t>(nsub), {});

    parallel_for(nsub, options_.threads, [&](std::ptrdiff_t r) {
        SubdomainData& sd = subdomains_[r];
        const SubdomainLayout L = make_layout(part, r);
        sd.globs = part.subdomain_globs[r];
        Index n_primal = 0;
        for (Index g : sd.globs) {
            sd.slots.push_back(slot_of(part.globs[g], r));
            sd.dual_offset.push_back(sd.n_dual);
            sd.n_dual += globs_[g].split.n_dual();
            for (Index j = 0; j < globs_[g].split.n_primal(); ++j) sd.primal_global.push_back(coarse_.primal_offset[g] + j);
            n_primal += globs_[g].split.n_primal();
        }

        CMatrix S;
        {
            const LocalSchur ls(problem_.local_matrix(r), L.interior_pos, L.interface_pos, r, options_.pivot_floor);
            S = ls.S();
        }
        const Index ng = S.rows();
        // S Q_d and S Q_p, glob by glob
        CMatrix SQd = CMatrix::Zero(ng, sd.n_dual);
        CMatrix SQp = CMatrix::Zero(ng, n_primal);
        Index pofs = 0;
        for (std::size_t i = 0; i < sd.globs.size(); ++i) {
            const GlobEigenSplit& sp = globs_[sd.globs[i]].split;
            const CMatrix Scols = columns(S, L.glob_pos[i]);
            if (sp.n_dual() > 0) SQd.middleCols(sd.dual_offset[i], sp.n_dual()).noalias() = Scols * sp.T_dual;
            if (sp.n_primal() > 0) SQp.middleCols(pofs, sp.n_primal()).noalias() = Scols * sp.T_primal;
            pofs += sp.n_primal();
        }
        S.resize(0, 0);
        CMatrix Sdd(sd.n_dual, sd.n_dual);
        CMatrix Sdp(sd.n_dual, n_primal);
        CMatrix Spp(n_primal, n_primal);
        Sdd.setZero();
        Sdp.setZero();
        Spp.setZero();
        pofs = 0;
        for (std::size_t i = 0; i < sd.globs.size(); ++i) {
            const GlobEigenSplit& sp = globs_[sd.globs[i]].split;
            const IndexList& pos = L.glob_pos[i];
            if (sp.n_dual() > 0) {
                const CMatrix rowsd = SQd(pos, Eigen::all);
                Sdd.middleRows(sd.dual_offset[i], sp.n_dual()).noalias() = sp.T_dual.adjoint() * rowsd;
                const CMatrix rowsp = SQp(pos, Eigen::all);
                Sdp.middleRows(sd.dual_offset[i], sp.n_dual()).noalias() = sp.T_dual.adjoint() * rowsp;
            }
            if (sp.n_primal() > 0) {
                const CMatrix rowsp = SQp(pos, Eigen::all);
                Spp.middleRows(pofs, sp.n_primal()).noalias() = sp.T_primal.adjoint() * rowsp;
            }
            pofs += sp.n_primal();
        }
        auto f = HermitianFactor::try_factor(hermitian_part(Sdd), options_.pivot_floor);
        if (!f)
            throw SingularInterior(r, "dual block of subdomain " + std::to_string(r) + " on level " + std::to_string(level_) +
                                          " violates the pivot floor");
        sd.dual_factor = std::move(*f);
        CMatrix Sp = Spp;
        if (sd.n_dual > 0) {
            sd.phi = -sd.dual_factor.solve(Sdp);
            Sp.noalias() += Sdp.adjoint() * sd.phi;
        } else {
            sd.phi.resize(0, n_primal);
        }
        (*coarse_locals)[r] = hermitian_part(Sp);
    });
}

void BddcLevel::build_coarse(std::vector<CMatrix>* coarse_locals)
{
    const Index pnum = coarse_.counts.pnum;
    std::vector<Eigen::Triplet<Complex, int>> trip;
    for (std::size_t r = 0; r < subdomains_.size(); ++r) {
        const IndexList& pg = subdomains_[r].primal_global;
        const CMatrix& C = (*coarse_locals)[r];
        for (std::size_t j = 0; j < pg.size(); ++j)
            for (std::size_t i = 0; i < pg.size(); ++i)
                trip.emplace_back(static_cast<int>(pg[i]), static_cast<int>(pg[j]), C(static_cast<Index>(i), static_cast<Index>(j)));
    }
    coarse_matrix_.resize(pnum, pnum);
    coarse_matrix_.setFromTriplets(trip.begin(), trip.end());
    trip.clear();
    trip.shrink_to_fit();

    const bool deeper = level_ + 2 < options_.levels;
    if (deeper) {
        const int n = problem_.grid_n;
        if (n % 2 != 0)
            throw ConfigError("level " + std::to_string(level_) + " has " + std::to_string(n) +
                              " subdomains per axis, which is not divisible by the merge factor 2");
        const int nc = n / 2;
        const Index ncoarse = static_cast<Index>(nc) * nc * nc;
        auto parent = [n, nc](Index r) {
            const Triple t = subdomain_triple(n, r);
            return subdomain_index(nc, {t[0] / 2, t[1] / 2, t[2] / 2});
        };
        std::vector<IndexList> neighbours(static_cast<std::size_t>(pnum));
        for (std::size_t g = 0; g < globs_.size(); ++g) {
            if (coarse_.primal_size[g] == 0) continue;
            IndexList key;
            for (Index r : globs_[g].subdomains) key.push_back(parent(r));
            std::sort(key.begin(), key.end());
            key.erase(std::unique(key.begin(), key.end()), key.end());
            for (Index j = 0; j < coarse_.primal_size[g]; ++j) neighbours[coarse_.primal_offset[g] + j] = key;
        }
        LevelProblem next;
        next.matrix = std::make_shared<const SparseMatrix>(coarse_matrix_);
        next.partition = partition_by_neighbours(ncoarse, neighbours);
        next.grid_n = nc;
        if (!next.partition.interface_dofs().empty()) {
            auto locals = std::make_shared<std::vector<CMatrix>>(std::move(*coarse_locals));
            auto primal = std::make_shared<std::vector<IndexList>>();
            for (const auto& sd : subdomains_) primal->push_back(sd.primal_global);
            std::vector<IndexList> children(static_cast<std::size_t>(ncoarse));
            for (Index r = 0; r < static_cast<Index>(subdomains_.size()); ++r) children[parent(r)].push_back(r);
            auto dofs = std::make_shared<std::vector<IndexList>>(next.partition.subdomain_dofs);
            next.local_matrix = [locals, primal, dofs, children](Index R) {
                const IndexList& rd = (*dofs)[R];
                CMatrix A = CMatrix::Zero(static_cast<Index>(rd.size()), static_cast<Index>(rd.size()));
                for (Index r : children[R]) {
                    const IndexList& pg = (*primal)[r];
                    IndexList pos(pg.size());
                    for (std::size_t i = 0; i < pg.size(); ++i)
                        pos[i] = std::lower_bound(rd.begin(), rd.end(), pg[i]) - rd.begin();
                    const CMatrix& C = (*locals)[r];
                    for (std::size_t j = 0; j < pg.size(); ++j)
                        for (std::size_t i = 0; i < pg.size(); ++i) A(pos[i], pos[j]) += C(static_cast<Index>(i), static_cast<Index>(j));
                }
                return A;
            };
            next_ = std::make_unique<BddcLevel>(std::move(next), options_, level_ + 1);
            return;
        }
    }
    coarse_locals->clear();
    if (pnum == 0) return;
    direct_ = std::make_unique<CoarseDirect>();
    direct_->llt.compute(coarse_matrix_);
    if (direct_->llt.info() != Eigen::Success)
        throw Error("coarse matrix factorization failed on level " + std::to_string(level_));
}

CVector BddcLevel::coarse_solve(const CVector& g) const
{
    if (g.size() == 0) return g;
    if (direct_) return direct_->llt.solve(g);
    const SchurOperator& S = next_->schur();
    const CVector gc = S.condense_rhs(g);
    PcgOptions po;
    po.rtol = options_.coarse_rtol;
    po.maxit = options_.coarse_maxit;
    po.flexible = options_.flexible;
    const PcgResult res = pcg([&S](const CVector& x) { return S.apply(x); },
                              [this](const CVector& x) { return next_->apply(x); }, gc, po);
    coarse_iterations_ += res.iterations;
    ++coarse_calls_;
    return S.extend(g, res.x);
}

CVector BddcLevel::apply(const CVector& r) const
{
    if (r.size() != schur_->size()) throw DimensionMismatch("preconditioner: wrong vector size");
    const Index nsub = static_cast<Index>(subdomains_.size());
    CVector gp = CVector::Zero(coarse_.counts.pnum);
    for (std::size_t g = 0; g < globs_.size(); ++g) {
        const GlobData& gd = globs_[g];
        if (gd.kind == GlobKind::Interior || gd.split.n_primal() == 0) continue;
        gp.segment(coarse_.primal_offset[g], gd.split.n_primal()) = gd.split.T_primal.adjoint() * extract(r, gd.interface_pos);
    }
    std::vector<CVector> w(static_cast<std::size_t>(nsub));
    std::vector<CVector> contrib(static_cast<std::size_t>(nsub));
    parallel_for(nsub, options_.threads, [&](std::ptrdiff_t s) {
        const SubdomainData& sd = subdomains_[s];
        CVector f(sd.n_dual);
        for (std::size_t i = 0; i < sd.globs.size(); ++i) {
            const GlobData& gd = globs_[sd.globs[i]];
            if (gd.split.n_dual() == 0) continue;
            f.segment(sd.dual_offset[i], gd.split.n_dual()) = gd.DT[sd.slots[i]].adjoint() * extract(r, gd.interface_pos);
        }
        if (sd.n_dual == 0) {
            w[s].resize(0);
            contrib[s] = CVector::Zero(sd.phi.cols());
            return;
        }
        w[s] = sd.dual_factor.solve(f);
        contrib[s] = sd.phi.adjoint() * f;
    });
    for (Index s = 0; s < nsub; ++s) {
        const IndexList& pg = subdomains_[s].primal_global;
        for (std::size_t j = 0; j < pg.size(); ++j) gp[pg[j]] += contrib[s][static_cast<Index>(j)];
    }
    const CVector zp = coarse_solve(gp);
    parallel_for(nsub, options_.threads, [&](std::ptrdiff_t s) {
        const SubdomainData& sd = subdomains_[s];
        if (sd.n_dual == 0) return;
        CVector zl(static_cast<Index>(sd.primal_global.size()));
        for (std::size_t j = 0; j < sd.primal_global.size(); ++j) zl[static_cast<Index>(j)] = zp[sd.primal_global[j]];
        w[s].noalias() += sd.phi * zl;
    });
    CVector u = CVector::Zero(r.size());
    for (std::size_t g = 0; g < globs_.size(); ++g) {
        const GlobData& gd = globs_[g];
        if (gd.kind == GlobKind::Interior) continue;
        CVector ux = CVector::Zero(static_cast<Index>(gd.interface_pos.size()));
        if (gd.split.n_primal() > 0) ux.noalias() = gd.split.T_primal * zp.segment(coarse_.primal_offset[g], gd.split.n_primal());
        if (gd.split.n_dual() > 0) {
            for (std::size_t k = 0; k < gd.subdomains.size(); ++k) {
                const Index s = gd.subdomains[k];
                const SubdomainData& sd = subdomains_[s];
                const auto it = std::lower_bound(sd.globs.begin(), sd.globs.end(), static_cast<Index>(g));
                const Index i = it - sd.globs.begin();
                ux.noalias() += gd.DT[k] * w[s].segment(sd.dual_offset[i], gd.split.n_dual());
            }
        }
        for (std::size_t i = 0; i < gd.interface_pos.size(); ++i) u[gd.interface_pos[i]] += ux[static_cast<Index>(i)];
    }
    return u;
}

CMatrix BddcLevel::dense_preconditioner() const
{
    const Index n = schur_->size();
    CMatrix M(n, n);
    for (Index j = 0; j < n; ++j) M.col(j) = apply(CVector::Unit(n, j));
    return M;
}

std::vector<LevelReport> BddcLevel::reports() const
{
    LevelReport rep;
    rep.level = level_;
    rep.subdomains = problem_.partition.subdomain_count;
    rep.dofs = problem_.matrix->rows();
    rep.interface_size = schur_->size();
    rep.counts = coarse_.counts;
    rep.deluxe_fallbacks = deluxe_fallbacks_;
    rep.coarse_pcg_iterations = coarse_iterations_;
    rep.coarse_pcg_calls = coarse_calls_;
    std::vector<LevelReport> out{rep};
    if (next_) {
        auto rest = next_->reports();
        out.insert(out.end(), rest.begin(), rest.end());
    }
    return out;
}

SolveResult full_solve(LevelProblem problem, const CVector& rhs, const BddcOptions& options, const PcgOptions& pcg_options)
{
    SolveResult out;
    auto A = problem.matrix;
    if (!A || A->rows() != rhs.size()) throw DimensionMismatch("full_solve: right-hand side size differs from the matrix");
    if (problem.partition.interface_dofs().empty()) {
        const SchurOperator S(A, problem.partition, options.pivot_floor);
        out.u = S.extend(rhs, CVector(0));
        out.report.converged = true;
        out.report.residual_history = {1.0};
    } else {
        const BddcLevel level(std::move(problem), options);
        const SchurOperator& S = level.schur();
        const CVector g = S.condense_rhs(rhs);
        const auto t0 = Clock::now();
        const PcgResult res = pcg([&S](const CVector& x) { return S.apply(x); },
                                  [&level](const CVector& x) { return level.apply(x); }, g, pcg_options);
        out.report.seconds_pcg = seconds_since(t0);
        out.u = S.extend(rhs, res.x);
        out.report.iterations = res.iterations;
        out.report.converged = res.converged;
        out.report.residual_history = res.residual_history;
        out.report.lambda_min = res.lambda_min;
        out.report.lambda_max = res.lambda_max;
        out.report.cond = res.cond();
        out.report.levels = level.reports();
        out.report.seconds_glob_blocks = level.seconds_glob_blocks();
        out.report.seconds_eigen = level.seconds_eigen();
        out.report.seconds_coarse = level.seconds_coarse();
    }
    const double bn = rhs.norm();
    out.report.full_residual = bn > 0.0 ? (rhs - (*A) * out.u).norm() / bn : 0.0;
    return out;
}

PartialVector random_partial_vector(const BddcLevel& level, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto rand_vec = [&](Index n) {
        CVector v(n);
        for (Index i = 0; i < n; ++i) v[i] = Complex(nd(rng), nd(rng));
        return v;
    };
    PartialVector w;
    const auto& globs = level.globs();
    w.dual.resize(globs.size());
    w.primal.resize(globs.size());
    for (std::size_t g = 0; g < globs.size(); ++g) {
        if (globs[g].kind == GlobKind::Interior) continue;
        for (std::size_t k = 0; k < globs[g].subdomains.size(); ++k) w.dual[g].push_back(rand_vec(globs[g].split.n_dual()));
        w.primal[g] = rand_vec(globs[g].split.n_primal());
    }
    return w;
}

std::vector<std::vector<CVector>> local_values(const BddcLevel& level, const PartialVector& w)
{
    const auto& globs = level.globs();
    std::vector<std::vector<CVector>> out(globs.size());
    for (std::size_t g = 0; g < globs.size(); ++g) {
        if (globs[g].kind == GlobKind::Interior) continue;
        const GlobEigenSplit& sp = globs[g].split;
        for (std::size_t k = 0; k < globs[g].subdomains.size(); ++k)
            out[g].push_back(sp.T_dual * w.dual[g][k] + sp.T_primal * w.primal[g]);
    }
    return out;
}

CVector average(const BddcLevel& level, const PartialVector& w)
{
    const auto& globs = level.globs();
    const auto c = local_values(level, w);
    CVector u = CVector::Zero(level.schur().size());
    for (std::size_t g = 0; g < globs.size(); ++g) {
        if (globs[g].kind == GlobKind::Interior) continue;
        CVector ux = CVector::Zero(static_cast<Index>(globs[g].interface_pos.size()));
        for (std::size_t k = 0; k < c[g].size(); ++k) ux += globs[g].D[k] * c[g][k];
        for (std::size_t i = 0; i < globs[g].interface_pos.size(); ++i) u[globs[g].interface_pos[i]] = ux[static_cast<Index>(i)];
    }
    return u;
}

PartialVector inject(const BddcLevel& level, const CVector& u)
{
    const auto& globs = level.globs();
    PartialVector w;
    w.dual.resize(globs.size());
    w.primal.resize(globs.size());
    for (std::size_t g = 0; g < globs.size(); ++g) {
        if (globs[g].kind == GlobKind::Interior) continue;
        const CVector coeff = globs[g].T_inverse * extract(u, globs[g].interface_pos);
        const Index nd = globs[g].split.n_dual();
        for (std::size_t k = 0; k < globs[g].subdomains.size(); ++k) w.dual[g].push_back(coeff.head(nd));
        w.primal[g] = coeff.tail(globs[g].split.n_primal());
    }
    return w;
}

} // namespace pwbddc
