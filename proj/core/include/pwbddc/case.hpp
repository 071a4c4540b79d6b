#pragma once

#include "pwbddc/assembly.hpp"
#include "pwbddc/bddc.hpp"

#include <string>

namespace pwbddc {

struct CaseConfig {
    std::string kappa = "2pi";
    int p = 18;
    int n = 2;
    int m = 1;
    std::string theta_f = "4m";
    std::string theta_e = "1000";
    std::string scaling = "deluxe";
    bool deluxe_from_sbar = false;
    bool economic = true;
    std::string eta = "h";
    int levels = 2;
    double rtol = 1e-5;
    double coarse_rtol = 1e-2;
    int maxit = 100;
    unsigned seed = 1;
    bool flexible = false;
    int threads = 1;
    bool deterministic = true;
};

// Numeric values of the expression-valued fields.
struct ResolvedCase {
    double kappa = 0.0;
    double theta_f = 0.0;
    double theta_e = 0.0;
    double eta = 0.0;
    double h = 0.0;
    ScalingKind scaling = ScalingKind::Deluxe;
};

ResolvedCase resolve(const CaseConfig& config);
MeshConfig mesh_config(const CaseConfig& config);
BddcOptions bddc_options(const CaseConfig& config);

// Relative L2 error of a plane-wave coefficient vector against exp(i kappa v0.x).
double l2_relative_error(const Mesh& mesh, const WaveBasis& basis, const CVector& u, double kappa, const Vec3& v0);

struct CaseReport {
    CaseConfig config;
    ResolvedCase resolved;
    Index elements = 0;
    Index dofs = 0;
    SolveReport solve;
    double err = 0.0;
    double seconds_assembly = 0.0;
    double seconds_total = 0.0;
};

class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what) : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Example problem on the unit cube: all-Robin data from exp(i kappa v0.x).
CaseReport run_case(const CaseConfig& config);

std::string report_to_json(const CaseReport& report);
std::string csv_header();
std::string report_to_csv_row(const CaseReport& report);
// Writes JSON (overwrites) or CSV (appends, header only for a new file). Empty path means stdout.
void emit_report(const CaseReport& report, const std::string& format, const std::string& path);

} // namespace pwbddc
