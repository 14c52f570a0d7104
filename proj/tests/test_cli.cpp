#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "check.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "wpscat/io.hpp"
#include "wpscat/numerics.hpp"
#include "wpscat/transfer.hpp"

using namespace wpscat;
using namespace wpscat::cli;

namespace {

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("wpscat_cli_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const std::string& text)
{
    try {
        parse_config(text, "run.yaml");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    return "";
}

CommandOptions options(const std::filesystem::path& dir)
{
    CommandOptions opt;
    opt.out_dir = dir;
    return opt;
}

}  // namespace

TEST_CASE("config defaults and overrides")
{
    const RunConfig d = parse_config("");
    CHECK(d.barrier.bins.size() == default_double_barrier().bins.size());
    CHECK(d.kbars == std::vector<double>{1.0});
    CHECK(d.format == Format::Csv);

    const RunConfig c = parse_config(R"(
barrier:
  bins:
    - {q: 0.5, width: 2}
  q_backing: 0.1
packet: {kbar: [0.5, 1.5], dk: 0.2, x0: -10}
grids: {k_min: 0.1, k_max: 1.0, k_count: 10, x_min: -50, x_max: 50, dx: 0.05, boundary: absorbing}
times: [0, 5]
resolution: {dk_inst: 0.05, normalize: true}
output: {dir: results, format: json}
)");
    CHECK(c.barrier.bins.size() == 1);
    CHECK(c.barrier.q_backing == 0.1);
    CHECK(c.kbars == std::vector<double>{0.5, 1.5});
    CHECK(c.packet(1.5).x0 == -10.0);
    CHECK(c.k_values().size() == 10);
    CHECK(c.boundary == Boundary::AbsorbingLayer);
    CHECK(c.times == std::vector<double>{0.0, 5.0});
    REQUIRE(c.resolution);
    CHECK(c.resolution->normalize);
    CHECK(c.out_dir == "results");
    CHECK(c.format == Format::Json);
}

TEST_CASE("config errors name the line and field")
{
    CHECK(config_error("packet:\n  kbar: 1\n  dk: 0.4\n  kbarr: 2\n").find("run.yaml:4:3: packet.kbarr: unknown key") != std::string::npos);
    CHECK(config_error("packet:\n  kbar: 1\n  dk: -0.4\n").find("run.yaml:3:7: packet.dk: must be positive") != std::string::npos);
    CHECK(config_error("grids:\n  k_count: lots\n").find("grids.k_count: expected a number") != std::string::npos);
    CHECK(config_error("grids:\n  x_min: 1\n").find("x_min and x_max go together") != std::string::npos);
    CHECK(config_error("barrier:\n  bins:\n    - {q: 1, width: 0}\n").find("run.yaml:3:7: barrier.bins[0]") != std::string::npos);
    CHECK(config_error("times: [1, -2]\n").find("times: must be non-negative") != std::string::npos);
    CHECK(config_error("output: {format: xml}\n").find("output.format") != std::string::npos);
    CHECK(config_error("packet: [1, 2\n").find("run.yaml:") != std::string::npos);
}

TEST_CASE("statops coefficients are normalized on load")
{
    const RunConfig c = parse_config("statops:\n  coefficients: [1, [0, 1]]\n  energies: [0, 2]\n");
    REQUIRE(c.statops.coefficients.size() == 2);
    CHECK(std::abs(c.statops.coefficients[1] - Complex(0.0, std::sqrt(0.5))) < 1e-15);
    CHECK(config_error("statops:\n  coefficients: [1, 1]\n  energies: [0]\n").find("one energy per coefficient") !=
          std::string::npos);
}

TEST_CASE("planewave on the default barrier passes the flux audit")
{
    const auto dir = scratch_dir("pw");
    std::ostringstream log;
    const RunConfig cfg = parse_config("grids: {k_min: 0.01, k_max: 2, k_count: 200}\n");
    const Audit audit = cmd_planewave(cfg, options(dir), log);
    CHECK(audit.passed());
    const Spectrum r = parse_spectrum_csv(slurp(dir / "R_pw.csv"));
    const Spectrum t = parse_spectrum_csv(slurp(dir / "T_pw.csv"));
    REQUIRE(r.k_values.size() == 200);
    for (std::size_t i = 0; i < r.k_values.size(); ++i) {
        CHECK(std::abs(r.values[i].real() + t.values[i].real() - 1.0) < 1e-10);
    }
    CHECK(slurp(dir / "planewave_audit.csv").find("total_reflection") == std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("planewave on the empty barrier")
{
    const auto dir = scratch_dir("pw_empty");
    std::ostringstream log;
    const RunConfig cfg = parse_config("barrier: {preset: empty}\ngrids: {k_min: 0.01, k_max: 2, k_count: 50}\n");
    CHECK(cmd_planewave(cfg, options(dir), log).passed());
    const Spectrum r = parse_spectrum_csv(slurp(dir / "R_pw.csv"));
    const Spectrum t = parse_spectrum_csv(slurp(dir / "T_pw.csv"));
    for (std::size_t i = 0; i < r.k_values.size(); ++i) {
        CHECK(r.values[i].real() == 0.0);
        CHECK(t.values[i].real() == doctest::Approx(1.0).epsilon(1e-15));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("evanescent backing rows are flagged as total reflection")
{
    const auto dir = scratch_dir("pw_evanescent");
    std::ostringstream log;
    const RunConfig cfg = parse_config("barrier: {q_backing: 1.0}\ngrids: {k_min: 0.1, k_max: 2, k_count: 20}\n");
    CHECK(cmd_planewave(cfg, options(dir), log).passed());
    std::istringstream rows(slurp(dir / "planewave_audit.csv"));
    std::string line;
    std::getline(rows, line);
    int flagged = 0;
    while (std::getline(rows, line)) {
        const double k = std::stod(line.substr(0, line.find(',')));
        const bool total = line.find("total_reflection") != std::string::npos;
        CHECK(total == (k < 1.0));
        flagged += total;
    }
    CHECK(flagged == 10);
    std::filesystem::remove_all(dir);
}

TEST_CASE("audit collects named failures")
{
    Audit a;
    a.check(true, "flux", "fine");
    CHECK(a.passed());
    a.check(false, "norm", "drift 1e-2");
    CHECK_FALSE(a.passed());
    CHECK(a.failures().front() == "norm: drift 1e-2");
}

TEST_CASE("snapshot at t = 0 is the Gaussian at x0")
{
    const auto dir = scratch_dir("snap0");
    std::ostringstream log;
    const RunConfig cfg = parse_config(R"(
barrier: {preset: empty}
packet: {kbar: 1.5, dk: 0.3, x0: -15}
grids: {x_min: -45, x_max: 15, dx: 0.05}
times: [0]
)");
    CHECK(cmd_snapshot(cfg, options(dir), log).passed());
    const WaveField f = parse_field_csv(slurp(dir / "snapshot_t0.csv"));
    std::size_t peak = 0;
    for (std::size_t i = 0; i < f.x.size(); ++i) {
        CHECK(std::abs(f.values[i] - kSuperpositionScale * free_packet_closed(f.x[i], 0.0, cfg.packet(1.5))) < 1e-6);
        if (std::abs(f.values[i]) > std::abs(f.values[peak])) {
            peak = i;
        }
    }
    CHECK(f.x[peak] == doctest::Approx(-15.0));
    std::filesystem::remove_all(dir);
}

TEST_CASE("snapshot oracle agrees with the superposition")
{
    const auto dir = scratch_dir("snap_oracle");
    std::ostringstream log;
    const RunConfig cfg = parse_config(R"(
packet: {kbar: 1.5, dk: 0.3, x0: -12}
grids: {x_min: -60, x_max: 60, dx: 0.05}
times: [0, 3]
)");
    CommandOptions opt = options(dir);
    opt.oracle = true;
    CHECK(cmd_snapshot(cfg, opt, log).passed());
    std::istringstream rows(slurp(dir / "oracle_summary.csv"));
    std::string line;
    std::getline(rows, line);
    CHECK(line == "t,distance,discrete_norm_drift");
    int n = 0;
    while (std::getline(rows, line)) {
        const double distance = std::stod(line.substr(line.find(',') + 1));
        CHECK(distance < 1e-2);
        ++n;
    }
    CHECK(n == 2);
    CHECK(std::filesystem::exists(dir / "oracle_t3.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("snapshot rejects an oracle grid that is too coarse")
{
    const auto dir = scratch_dir("snap_coarse");
    std::ostringstream log;
    const RunConfig cfg = parse_config(R"(
packet: {kbar: 1.5, dk: 0.3, x0: -12}
grids: {x_min: -60, x_max: 60, dx: 0.2}
times: [0, 3]
)");
    CommandOptions opt = options(dir);
    opt.oracle = true;
    CHECK(thrown_code([&] { cmd_snapshot(cfg, opt, log); }) == ErrorCode::StabilityViolation);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reflectivity zeros are filled by the instrument")
{
    const auto dir = scratch_dir("refl");
    std::ostringstream log;
    const RunConfig cfg = parse_config(R"(
packet: {kbar: [0.5, 1.0], dk: 0.025}
grids: {k_min: 0.0025, k_max: 2, k_count: 800}
resolution: {dk_inst: 0.05, normalize: true}
)");
    CHECK(cmd_reflectivity(cfg, options(dir), log).passed());
    const Spectrum rpw = parse_spectrum_csv(slurp(dir / "R_pw.csv"));
    const Spectrum rc = parse_spectrum_csv(slurp(dir / "R_coh_kbar1.csv"));
    const Spectrum rm = parse_spectrum_csv(slurp(dir / "R_meas_kbar1.csv"));
    std::size_t zero = 0;
    for (std::size_t i = 0; i < rpw.k_values.size(); ++i) {
        if (std::abs(rpw.k_values[i] - 1.0) < 0.05 && rpw.values[i].real() < rpw.values[zero].real()) {
            zero = i;
        }
        CHECK(rc.values[i].real() <= 1.0);
        CHECK(rm.values[i].real() <= 1.0);
    }
    CHECK(rc.values[zero].real() <= rpw.values[zero].real());
    CHECK(rm.values[zero].real() > 10.0 * rc.values[zero].real());
    CHECK(std::filesystem::exists(dir / "R_coh_kbar0.5.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("convergence on the empty barrier stays at zero")
{
    const auto dir = scratch_dir("conv_empty");
    std::ostringstream log;
    const RunConfig cfg = parse_config(R"(
barrier: {preset: empty}
packet: {kbar: 1.5, dk: 0.3, x0: -15}
grids: {k_min: 0.5, k_max: 2.5, k_count: 41}
times: [5, 20]
)");
    CHECK(cmd_convergence(cfg, options(dir), log).passed());
    for (const char* name : {"r_t5.csv", "r_t20.csv", "r_asym.csv"}) {
        const Spectrum s = parse_spectrum_csv(slurp(dir / name));
        REQUIRE(s.k_values.size() == 41);
        for (const Complex& v : s.values) {
            CHECK(std::abs(v) < 1e-6);
        }
    }
    CHECK(std::filesystem::exists(dir / "convergence_summary.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical configs give byte-identical output")
{
    const RunConfig cfg = parse_config(R"(
packet: {kbar: 1.0, dk: 0.4, x0: -15}
grids: {k_min: 0.2, k_max: 1.8, k_count: 33}
times: [10]
)");
    const auto a = scratch_dir("det_a");
    const auto b = scratch_dir("det_b");
    std::ostringstream log;
    set_thread_count(1);
    cmd_convergence(cfg, options(a), log);
    cmd_snapshot(cfg, options(a), log);
    set_thread_count(3);
    cmd_convergence(cfg, options(b), log);
    cmd_snapshot(cfg, options(b), log);
    set_thread_count(0);
    for (const char* name : {"r_t10.csv", "r_asym.csv", "convergence_summary.csv", "snapshot_t10.csv"}) {
        CHECK(slurp(a / name) == slurp(b / name));
    }
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("statops demo table")
{
    std::ostringstream out;
    const Audit audit = cmd_statops_demo(parse_config(""), out);
    CHECK(audit.passed());
    const std::string table = out.str();
    CHECK(table.find("\n6.28319,0.000000000000,0.000000000000,") != std::string::npos);
    CHECK(table.find("\ninf,") != std::string::npos);
}
