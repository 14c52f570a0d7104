#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "wpscat/error.hpp"
#include "wpscat/numerics.hpp"

int main(int argc, char** argv)
{
    using namespace wpscat;
    using namespace wpscat::cli;

    CLI::App app{"Wave-packet scattering from layered barriers"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string format;
    bool oracle = false;
    unsigned threads = 0;
    app.add_option("--config", config_path, "Run configuration (YAML)")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_option("--format", format, "Output format (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--oracle", oracle, "snapshot: also run the Crank-Nicolson oracle");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* planewave = app.add_subcommand("planewave", "Plane-wave R(k) and T(k) with a flux audit");
    auto* snapshot = app.add_subcommand("snapshot", "Packet Psi(x, t) at the configured times");
    auto* reflectivity = app.add_subcommand("reflectivity", "Coherent (and measured) reflectivity per kbar");
    auto* convergence = app.add_subcommand("convergence", "Timed amplitude r(k, t) against its asymptote");
    auto* statops = app.add_subcommand("statops-demo", "Time-averaged density operator of a 3-level state");

    CLI11_PARSE(app, argc, argv);

    try {
        set_thread_count(threads);
        RunConfig cfg = config_path.empty() ? parse_config("") : load_config(config_path);
        CommandOptions opt;
        opt.out_dir = out_dir.empty() ? cfg.out_dir : std::filesystem::path(out_dir);
        opt.format = format.empty() ? cfg.format : (format == "json" ? Format::Json : Format::Csv);
        opt.oracle = oracle;

        if (!statops->parsed() && config_path.empty()) {
            std::cerr << "error: --config is required for this command\n";
            return 1;
        }
        Audit audit;
        if (planewave->parsed()) {
            audit = cmd_planewave(cfg, opt, std::cerr);
        } else if (snapshot->parsed()) {
            audit = cmd_snapshot(cfg, opt, std::cerr);
        } else if (reflectivity->parsed()) {
            audit = cmd_reflectivity(cfg, opt, std::cerr);
        } else if (convergence->parsed()) {
            audit = cmd_convergence(cfg, opt, std::cerr);
        } else {
            audit = cmd_statops_demo(cfg, std::cout);
        }
        for (const auto& f : audit.failures()) {
            std::cerr << "audit failed: " << f << '\n';
        }
        return audit.passed() ? 0 : kExitAuditFailure;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
