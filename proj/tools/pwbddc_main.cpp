#include "CLI11.hpp"
#include "json.hpp"

#include "pwbddc/case.hpp"
#include "pwbddc/oracle.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <new>

namespace {

using pwbddc::CaseConfig;

void write_text(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw pwbddc::Error("cannot open " + path);
    out << text;
}

int run_sweep(const CaseConfig& base, const std::vector<std::string>& thetas, const std::string& target,
              const std::string& format, const std::string& out)
{
    if (format == "json") {
        std::string text = "[\n";
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            CaseConfig c = base;
            if (target != "edge") c.theta_f = thetas[i];
            if (target != "face") c.theta_e = thetas[i];
            text += pwbddc::report_to_json(pwbddc::run_case(c));
            text += i + 1 < thetas.size() ? ",\n" : "\n";
        }
        write_text(text + "]\n", out);
        return 0;
    }
    if (out.empty()) std::cout << pwbddc::csv_header() << '\n';
    for (const auto& t : thetas) {
        CaseConfig c = base;
        if (target != "edge") c.theta_f = t;
        if (target != "face") c.theta_e = t;
        const auto report = pwbddc::run_case(c);
        if (out.empty())
            std::cout << pwbddc::report_to_csv_row(report) << std::endl;
        else
            pwbddc::emit_report(report, "csv", out);
    }
    return 0;
}

int run_verify(const CaseConfig& config, const pwbddc::InvariantOptions& options, const std::string& format,
               const std::string& out)
{
    const auto checks = pwbddc::invariant_suite(config, options);
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.passed ? 0 : 1;
    if (format == "json") {
        nlohmann::json j;
        j["schema_version"] = 1;
        j["passed"] = failed == 0;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
        write_text(j.dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        os << std::scientific << std::setprecision(3);
        for (const auto& c : checks)
            os << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << c.value << "  threshold=" << c.threshold << '\n';
        os << checks.size() - failed << '/' << checks.size() << " checks passed\n";
        write_text(os.str(), out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adaptive BDDC for plane-wave least-squares Helmholtz problems"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value file mirroring the long flags; flags override it");

    CaseConfig cfg;
    std::string format = "json";
    std::string out;
    app.add_option("--kappa", cfg.kappa, "wave number, e.g. 8pi")->capture_default_str();
    app.add_option("--p", cfg.p, "plane waves per element")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--n", cfg.n, "subdomains per axis")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--m", cfg.m, "elements per subdomain per axis")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--theta-f", cfg.theta_f, "face threshold expression")->capture_default_str();
    app.add_option("--theta-e", cfg.theta_e, "edge threshold expression")->capture_default_str();
    app.add_option("--scaling", cfg.scaling, "deluxe | multiplicity")->capture_default_str();
    app.add_flag("--economic,!--no-economic", cfg.economic, "slab-restricted glob eigenproblems");
    app.add_flag("--deluxe-sbar", cfg.deluxe_from_sbar, "build deluxe scaling from the slab Schur complements");
    app.add_option("--eta", cfg.eta, "slab width expression")->capture_default_str();
    app.add_option("--levels", cfg.levels, "number of levels")->capture_default_str();
    app.add_option("--rtol", cfg.rtol, "outer PCG relative tolerance")->capture_default_str();
    app.add_option("--coarse-rtol", cfg.coarse_rtol, "inner coarse PCG tolerance")->capture_default_str();
    app.add_option("--maxit", cfg.maxit, "PCG iteration cap")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_flag("--flexible", cfg.flexible, "flexible PCG update");
    app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_flag("--deterministic,!--no-deterministic", cfg.deterministic, "ordered reductions");
    app.add_option("--format", format, "json | csv (verify: json | text)")->capture_default_str();
    app.add_option("--out", out, "output file; stdout when empty");

    auto* solve = app.add_subcommand("solve", "run one case and emit its report");
    solve->fallthrough();

    auto* sweep = app.add_subcommand("sweep", "run one case per threshold value");
    sweep->fallthrough();
    std::vector<std::string> thetas{"1", "10", "100", "1000"};
    std::string target = "both";
    sweep->add_option("--thetas", thetas, "threshold values")->delimiter(',')->capture_default_str();
    sweep->add_option("--target", target, "face | edge | both")
        ->check(CLI::IsMember({"face", "edge", "both"}))
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run the dense oracle and invariant suite");
    verify->fallthrough();
    pwbddc::InvariantOptions inv;
    verify->add_option("--samples", inv.samples, "random samples per check")->capture_default_str();
    verify->add_option("--fault", inv.scaling_fault, "factor applied to the first scaling matrix of each glob")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (format != "json" && format != "csv" && format != "text")
            throw pwbddc::ConfigError("unknown format '" + format + "'");
        if (*solve) {
            pwbddc::emit_report(pwbddc::run_case(cfg), format, out);
            return 0;
        }
        if (*sweep) return run_sweep(cfg, thetas, target, format, out);
        inv.seed = cfg.seed;
        return run_verify(cfg, inv, format, out);
    } catch (const pwbddc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const pwbddc::NoValidFactorization& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const pwbddc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 3;
    }
}
