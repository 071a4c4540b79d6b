#include "pwbddc/case.hpp"

#include "pwbddc/expression.hpp"
#include "pwbddc/integrals.hpp"
#include "pwbddc/pipeline.hpp"

#include "json.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace pwbddc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const NoValidFactorization&) {
        throw;
    } catch (const StageError&) {
        throw;
    } catch (const std::bad_alloc&) {
        throw StageError(name, "out of memory");
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

} // namespace

MeshConfig mesh_config(const CaseConfig& config)
{
    MeshConfig mc;
    mc.n = config.n;
    mc.m = config.m;
    mc.p = config.p;
    mc.kappa = resolve(config).kappa;
    return mc;
}

ResolvedCase resolve(const CaseConfig& config)
{
    if (config.n < 1 || config.m < 1 || config.p < 1) throw ConfigError("n, m and p must be positive");
    if (config.levels < 2) throw ConfigError("levels must be at least 2");
    if (!(config.rtol > 0.0) || !(config.coarse_rtol > 0.0)) throw ConfigError("tolerances must be positive");
    if (config.maxit < 1) throw ConfigError("maxit must be positive");
    ResolvedCase r;
    const int N = config.n * config.m + config.n - 1;
    r.h = 1.0 / N;
    const std::map<std::string, double> vars{{"m", static_cast<double>(config.m)},
                                             {"n", static_cast<double>(config.n)},
                                             {"p", static_cast<double>(config.p)},
                                             {"h", r.h}};
    r.kappa = evaluate_expression(config.kappa, vars);
    r.theta_f = evaluate_expression(config.theta_f, vars);
    r.theta_e = evaluate_expression(config.theta_e, vars);
    r.eta = evaluate_expression(config.eta, vars);
    r.scaling = parse_scaling(config.scaling);
    if (!(r.kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(r.theta_f > 0.0) || !(r.theta_e > 0.0)) throw ConfigError("tolerances theta must be positive");
    if (config.economic && !(r.eta > 0.0)) throw ConfigError("eta must be positive");
    return r;
}

BddcOptions bddc_options(const CaseConfig& config)
{
    const ResolvedCase r = resolve(config);
    BddcOptions o;
    o.scaling = r.scaling;
    o.deluxe_from_sbar = config.deluxe_from_sbar;
    o.theta_face = r.theta_f;
    o.theta_edge = r.theta_e;
    o.levels = config.levels;
    o.coarse_rtol = config.coarse_rtol;
    o.coarse_maxit = config.maxit;
    o.flexible = config.flexible;
    o.threads = config.threads;
    return o;
}

double l2_relative_error(const Mesh& mesh, const WaveBasis& basis, const CVector& u, double kappa, const Vec3& v0)
{
    const int p = basis.size();
    if (u.size() != mesh.dof_count()) throw DimensionMismatch("l2_relative_error: coefficient vector size");
    const Vec3 kex = kappa * v0;
    double err2 = 0.0;
    double norm2 = 0.0;
    // u_h - u_ex as one plane-wave sum per element; coincident wave vectors are merged so an
    // exactly representable solution cancels before the Gram form is evaluated.
    std::vector<Vec3> waves;
    std::vector<Complex> coef;
    for (Index e = 0; e < mesh.element_count(); ++e) {
        const Box box = mesh.element_box(e);
        const double k = mesh.kappa(e);
        waves.clear();
        coef.clear();
        auto add = [&](const Vec3& w, Complex c) {
            for (std::size_t i = 0; i < waves.size(); ++i)
                if ((waves[i] - w).norm() <= 1e-13 * (1.0 + w.norm())) {
                    coef[i] += c;
                    return;
                }
            waves.push_back(w);
            coef.push_back(c);
        };
        for (int s = 0; s < p; ++s) add(k * basis.directions[s], u[e * p + s]);
        add(kex, Complex(-1.0, 0.0));
        double e2 = 0.0;
        for (std::size_t s = 0; s < waves.size(); ++s) {
            e2 += std::norm(coef[s]) * oscillatory_box_integral(Vec3::Zero(), box).real();
            for (std::size_t t = 0; t < s; ++t)
                e2 += 2.0 * std::real(std::conj(coef[t]) * coef[s] * oscillatory_box_integral(waves[s] - waves[t], box));
        }
        err2 += std::max(0.0, e2);
        norm2 += box.extent(0) * box.extent(1) * box.extent(2);
    }
    return std::sqrt(err2 / norm2);
}

CaseReport run_case(const CaseConfig& config)
{
    const auto t_total = Clock::now();
    CaseReport rep;
    rep.config = config;
    rep.resolved = resolve(config);
    const MeshConfig mc = mesh_config(config);

    const auto t0 = Clock::now();
    const Mesh mesh = stage("mesh", [&] { return build_mesh(mc); });
    const WaveBasis basis = stage("basis", [&] { return WaveBasis(mc.p); });
    const FormEvaluator form(mesh, basis);
    const Vec3 v0 = example_direction();
    auto system = stage("assembly", [&] {
        return std::make_shared<AssembledSystem>(assemble_global(form, assemble_rhs_exact(rep.resolved.kappa, v0)));
    });
    rep.seconds_assembly = seconds_since(t0);
    rep.elements = mesh.element_count();
    rep.dofs = mesh.dof_count();

    auto matrix = std::shared_ptr<const SparseMatrix>(system, &system->matrix);
    PwlsLevelOptions lo;
    lo.economic = config.economic;
    lo.eta = rep.resolved.eta;
    LevelProblem problem = stage("partition", [&] { return make_pwls_level(form, matrix, lo); });
    PcgOptions po;
    po.rtol = config.rtol;
    po.maxit = config.maxit;
    po.flexible = config.flexible;
    SolveResult res = stage("solve", [&] { return full_solve(std::move(problem), system->rhs, bddc_options(config), po); });
    rep.solve = std::move(res.report);
    rep.err = stage("error", [&] { return l2_relative_error(mesh, basis, res.u, rep.resolved.kappa, v0); });
    rep.seconds_total = seconds_since(t_total);
    return rep;
}

std::string report_to_json(const CaseReport& r)
{
    using nlohmann::json;
    const auto& c = r.config;
    json j;
    j["schema_version"] = 1;
    j["config"] = {{"kappa", c.kappa},       {"p", c.p},
                   {"n", c.n},               {"m", c.m},
                   {"theta_f", c.theta_f},   {"theta_e", c.theta_e},
                   {"scaling", c.scaling},   {"deluxe_from_sbar", c.deluxe_from_sbar},
                   {"economic", c.economic}, {"eta", c.eta},
                   {"levels", c.levels},     {"rtol", c.rtol},
                   {"coarse_rtol", c.coarse_rtol}, {"maxit", c.maxit},
                   {"seed", c.seed},         {"flexible", c.flexible}};
    j["resolved"] = {{"kappa", r.resolved.kappa}, {"theta_f", r.resolved.theta_f}, {"theta_e", r.resolved.theta_e},
                     {"eta", r.resolved.eta},     {"h", r.resolved.h}};
    j["elements"] = r.elements;
    j["dofs"] = r.dofs;
    const auto& s = r.solve;
    j["iter"] = s.iterations;
    j["converged"] = s.converged;
    j["lambda_min"] = s.lambda_min;
    j["lambda_max"] = s.lambda_max;
    j["cond"] = s.cond;
    const CoarseCounts cc = s.levels.empty() ? CoarseCounts{} : s.levels.front().counts;
    j["pnum"] = cc.pnum;
    j["pnumF"] = cc.pnumF;
    j["pnumE"] = cc.pnumE;
    j["pnumV"] = cc.pnumV;
    j["err"] = r.err;
    j["full_residual"] = s.full_residual;
    j["residual_history"] = s.residual_history;
    json levels = json::array();
    for (const auto& l : s.levels)
        levels.push_back({{"level", l.level},
                          {"subdomains", l.subdomains},
                          {"dofs", l.dofs},
                          {"interface", l.interface_size},
                          {"pnum", l.counts.pnum},
                          {"pnumF", l.counts.pnumF},
                          {"pnumE", l.counts.pnumE},
                          {"pnumV", l.counts.pnumV},
                          {"deluxe_fallbacks", l.deluxe_fallbacks},
                          {"coarse_pcg_iterations", l.coarse_pcg_iterations},
                          {"coarse_pcg_calls", l.coarse_pcg_calls}});
    j["levels"] = levels;
    j["seconds_assembly"] = r.seconds_assembly;
    j["seconds_glob_blocks"] = s.seconds_glob_blocks;
    j["seconds_eigen"] = s.seconds_eigen;
    j["seconds_coarse"] = s.seconds_coarse;
    j["seconds_pcg"] = s.seconds_pcg;
    j["seconds_total"] = r.seconds_total;
    return j.dump(2);
}

std::string csv_header()
{
    return "kappa,p,n,m,theta_f,theta_e,scaling,economic,levels,iter,converged,lambda_min,lambda_max,cond,pnum,pnumF,"
           "pnumE,pnumV,err,seconds_assembly,seconds_eigen,seconds_coarse,seconds_pcg,seconds_total";
}

std::string report_to_csv_row(const CaseReport& r)
{
    const auto& s = r.solve;
    const CoarseCounts cc = s.levels.empty() ? CoarseCounts{} : s.levels.front().counts;
    std::ostringstream os;
    os << std::setprecision(10) << r.resolved.kappa << ',' << r.config.p << ',' << r.config.n << ',' << r.config.m << ','
       << r.resolved.theta_f << ',' << r.resolved.theta_e << ',' << r.config.scaling << ',' << (r.config.economic ? 1 : 0)
       << ',' << r.config.levels << ',' << s.iterations << ',' << (s.converged ? 1 : 0) << ',' << s.lambda_min << ','
       << s.lambda_max << ',' << s.cond << ',' << cc.pnum << ',' << cc.pnumF << ',' << cc.pnumE << ',' << cc.pnumV << ','
       << r.err << ',' << r.seconds_assembly << ',' << s.seconds_glob_blocks + s.seconds_eigen << ',' << s.seconds_coarse
       << ',' << s.seconds_pcg << ',' << r.seconds_total;
    return os.str();
}

void emit_report(const CaseReport& report, const std::string& format, const std::string& path)
{
    std::string text;
    bool append = false;
    if (format == "json") {
        text = report_to_json(report) + "\n";
    } else if (format == "csv") {
        append = !path.empty();
        const bool fresh = path.empty() || !std::ifstream(path).good() || std::ifstream(path).peek() == EOF;
        text = (fresh ? csv_header() + "\n" : std::string()) + report_to_csv_row(report) + "\n";
    } else {
        throw ConfigError("unknown report format '" + format + "' (expected json or csv)");
    }
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw Error("cannot open report file " + path);
    out << text;
    if (!out) throw Error("failed writing report file " + path);
}

} // namespace pwbddc
