#pragma once

#include "pwbddc/coarse.hpp"
#include "pwbddc/pcg.hpp"
#include "pwbddc/schur.hpp"

#include <functional>
#include <memory>

namespace pwbddc {

struct BddcOptions {
    ScalingKind scaling = ScalingKind::Deluxe;
    // build deluxe weights from the eliminated blocks Sbar instead of S
    bool deluxe_from_sbar = false;
    double theta_face = 8.0;
    double theta_edge = 1000.0;
    int levels = 2;
    double coarse_rtol = 1e-2;
    int coarse_maxit = 100;
    bool flexible = false;
    int threads = 1;
    double pivot_floor = 1e-12;
    bool keep_glob_blocks = false;
    SplitOptions split;
};

// Glob blocks (S, Sbar) of subdomain nu, one pair per entry of partition.subdomain_globs[nu];
// vertex globs may be left empty.
using GlobBlockProvider = std::function<std::vector<std::pair<CMatrix, CMatrix>>(Index nu)>;

// Everything one BDDC level needs from its discretisation.
struct LevelProblem {
    std::shared_ptr<const SparseMatrix> matrix;
    GlobPartition partition;
    // dense subdomain form over partition.subdomain_dofs[r]
    std::function<CMatrix(Index r)> local_matrix;
    // optional; defaults to blocks of the full subdomain Schur complement
    GlobBlockProvider glob_blocks;
    int grid_n = 1; // subdomains per axis
};

// Glob blocks from the whole subdomain form.
std::vector<std::pair<CMatrix, CMatrix>> full_glob_blocks(const LevelProblem& problem, Index nu, double pivot_floor);

struct GlobData {
    GlobKind kind = GlobKind::Interior;
    IndexList subdomains;
    IndexList interface_pos; // positions in the level's interface vector
    std::vector<CMatrix> D;  // per subdomain of N_X
    std::vector<CMatrix> DT; // D^(v) T_dual
    GlobEigenSplit split;
    CMatrix T_inverse;
    std::vector<CMatrix> S;    // kept only with keep_glob_blocks
    std::vector<CMatrix> Sbar; // kept only with keep_glob_blocks
    bool deluxe_fallback = false;
};

struct LevelReport {
    int level = 0;
    Index subdomains = 0;
    Index dofs = 0;
    Index interface_size = 0;
    CoarseCounts counts;
    Index deluxe_fallbacks = 0;
    long coarse_pcg_iterations = 0; // accumulated inner iterations when this level is solved inexactly
    long coarse_pcg_calls = 0;
};

class BddcLevel {
public:
    BddcLevel(LevelProblem problem, const BddcOptions& options, int level = 0);
    ~BddcLevel();
    BddcLevel(const BddcLevel&) = delete;
    BddcLevel& operator=(const BddcLevel&) = delete;

    const SchurOperator& schur() const { return *schur_; }
    const GlobPartition& partition() const { return problem_.partition; }
    const std::vector<GlobData>& globs() const { return globs_; }
    const CoarseSpace& coarse_space() const { return coarse_; }
    const SparseMatrix& coarse_matrix() const { return coarse_matrix_; }
    const BddcLevel* next() const { return next_.get(); }

    // M^{-1} r on the interface
    CVector apply(const CVector& r) const;
    CMatrix dense_preconditioner() const;

    // Reports for this level and all coarser ones.
    std::vector<LevelReport> reports() const;

    double seconds_glob_blocks() const { return seconds_glob_blocks_; }
    double seconds_eigen() const { return seconds_eigen_; }
    double seconds_coarse() const { return seconds_coarse_; }

private:
    struct SubdomainData;
    struct CoarseDirect;

    void build_globs();
    void build_subdomains(std::vector<CMatrix>* coarse_locals);
    void build_coarse(std::vector<CMatrix>* coarse_locals);
    CVector coarse_solve(const CVector& g) const;

    LevelProblem problem_;
    BddcOptions options_;
    int level_;
    std::unique_ptr<SchurOperator> schur_;
    std::vector<GlobData> globs_;
    CoarseSpace coarse_;
    std::vector<SubdomainData> subdomains_;
    SparseMatrix coarse_matrix_;
    std::unique_ptr<CoarseDirect> direct_;
    std::unique_ptr<BddcLevel> next_;
    mutable long coarse_iterations_ = 0;
    mutable long coarse_calls_ = 0;
    Index deluxe_fallbacks_ = 0;
    double seconds_glob_blocks_ = 0.0;
    double seconds_eigen_ = 0.0;
    double seconds_coarse_ = 0.0;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    double cond = 1.0;
    double full_residual = 0.0; // ||b - A u|| / ||b||
    std::vector<LevelReport> levels;
    double seconds_glob_blocks = 0.0;
    double seconds_eigen = 0.0;
    double seconds_coarse = 0.0;
    double seconds_pcg = 0.0;
};

struct SolveResult {
    CVector u;
    SolveReport report;
};

// Interface PCG with BDDC, then interior back-substitution.
SolveResult full_solve(LevelProblem problem, const CVector& rhs, const BddcOptions& options, const PcgOptions& pcg_options);

// Pieces of the partially assembled space, in per-glob coordinates: w_dual[g][k] for the k-th
// subdomain of N_X, w_primal[g] shared by all of them.
struct PartialVector {
    std::vector<std::vector<CVector>> dual;
    std::vector<CVector> primal;
};

PartialVector random_partial_vector(const BddcLevel& level, unsigned seed);
// u_X = sum_v D^(v) (T_dual w^{X,v} + T_primal w^X)
CVector average(const BddcLevel& level, const PartialVector& w);
// coefficients of T^{-1} u_X copied to every subdomain
PartialVector inject(const BddcLevel& level, const CVector& u);
// local physical glob values T w^{X,v}
std::vector<std::vector<CVector>> local_values(const BddcLevel& level, const PartialVector& w);

} // namespace pwbddc
