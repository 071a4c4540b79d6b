#pragma once

#include "pwbddc/assembly.hpp"
#include "pwbddc/bddc.hpp"

namespace pwbddc {

// Elements of D_nu whose box lies closer than eta to the union of the glob's element boxes.
IndexList slab_elements(const Mesh& mesh, Index nu, const Glob& glob, double eta);

// Glob blocks computed on slabs of width eta instead of whole subdomains.
std::vector<std::pair<CMatrix, CMatrix>> economic_glob_blocks(const FormEvaluator& form, const GlobPartition& partition,
                                                              Index nu, double eta, double pivot_floor);

struct PwlsLevelOptions {
    bool economic = true;
    double eta = 0.0; // 0 means one element size h
    double pivot_floor = 1e-12;
};

// Level-0 problem of the plane-wave discretisation. The form evaluator must outlive the problem.
LevelProblem make_pwls_level(const FormEvaluator& form, std::shared_ptr<const SparseMatrix> matrix,
                             const PwlsLevelOptions& options);

} // namespace pwbddc
