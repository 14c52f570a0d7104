#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "wpscat/error.hpp"
#include "wpscat/numerics.hpp"
#include "wpscat/statops.hpp"
#include "wpscat/transfer.hpp"

namespace wpscat::cli {

namespace {

constexpr double kFluxTolerance = 1e-10;
constexpr double kBoundTolerance = 1e-9;
constexpr double kNormTolerance = 1e-3;
constexpr double kDiscreteNormTolerance = 1e-8;

std::string suffix(const RunConfig& cfg, double kbar)
{
    return cfg.kbars.size() > 1 ? "_kbar" + short_number(kbar) : "";
}

std::string table_row(std::initializer_list<std::string> cells)
{
    std::string out;
    for (const auto& c : cells) {
        if (!out.empty()) {
            out += ',';
        }
        out += c;
    }
    return out + '\n';
}

void check_bounds(Audit& audit, const Spectrum& s, const std::string& label)
{
    for (std::size_t i = 0; i < s.k_values.size(); ++i) {
        const double v = s.values[i].real();
        if (!(v >= -kBoundTolerance && v <= 1.0 + kBoundTolerance)) {
            audit.check(false, "bounds", label + " = " + format_double(v) + " at k = " + format_double(s.k_values[i]));
            return;
        }
    }
}

std::vector<double> sorted_times(const RunConfig& cfg)
{
    if (cfg.times.empty()) {
        throw Error(ErrorCode::ConfigError, "times: at least one time is required for this command");
    }
    auto t = cfg.times;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

// Snapshot positions lo + i dx: the configured range, or the union of the
// default windows at every requested time.
struct UniformGrid {
    double lo = 0.0;
    double dx = 0.0;
    std::size_t n = 0;

    std::vector<double> nodes() const
    {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = lo + dx * static_cast<double>(i);
        }
        return x;
    }
};

UniformGrid snapshot_grid(const RunConfig& cfg, const PacketSpec& spec, const std::vector<double>& times)
{
    UniformGrid g;
    g.dx = cfg.dx.value_or(projection_step(spec, 0.0));
    double hi = 0.0;
    if (cfg.x_min) {
        g.lo = *cfg.x_min;
        hi = *cfg.x_max;
    } else {
        g.lo = INFINITY;
        hi = -INFINITY;
        for (double t : times) {
            const XWindow w = default_window(cfg.barrier, spec, t);
            g.lo = std::min(g.lo, w.lo);
            hi = std::max(hi, w.hi);
        }
    }
    g.n = static_cast<std::size_t>(std::ceil((hi - g.lo) / g.dx - 1e-9)) + 1;
    return g;
}

KGrid packet_grid(const RunConfig& cfg, const PacketSpec& spec, std::span<const double> x,
                  const std::vector<double>& times)
{
    double lo = x.front();
    double hi = x.back();
    for (double t : times) {
        const XWindow w = default_window(cfg.barrier, spec, t);
        lo = std::min(lo, w.lo);
        hi = std::max(hi, w.hi);
    }
    return kgrid(spec, std::max(cfg.k_nodes, k_nodes_for_extent(spec, hi - lo)));
}

double packet_norm(const PacketSpec& spec, const KGrid& kg)
{
    double s = 0.0;
    for (std::size_t i = 0; i < kg.nodes.size(); ++i) {
        s += kg.weights[i] * std::norm(gaussian_weight(kg.nodes[i], spec));
    }
    return 2.0 * std::numbers::pi * s;
}

void log_warnings(const PacketSpec& spec, std::ostream& log)
{
    for (const auto& w : validate(spec)) {
        log << "warning: " << w << '\n';
    }
}

}  // namespace

void Audit::check(bool ok, const std::string& invariant, const std::string& detail)
{
    if (!ok) {
        failures_.push_back(invariant + ": " + detail);
    }
}

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

Audit cmd_planewave(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    Audit audit;
    const auto ks = cfg.k_values();
    const Spectrum r = reflectivity_planewave(cfg.barrier, ks);
    const Spectrum t = transmissivity_planewave(cfg.barrier, ks);
    check_bounds(audit, r, "R_pw");

    std::string table = "k,R,T,flux_residual,flag\n";
    std::size_t flagged = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const PlaneWaveSolution s = plane_wave_amplitudes(cfg.barrier, ks[i]);
        const double R = s.reflectivity();
        const double T = s.transmissivity();
        double residual = 0.0;
        std::string flag = "ok";
        if (s.propagating_backing) {
            residual = R + s.b.real() / s.f.real() * T - 1.0;
        } else {
            residual = R - 1.0;
            flag = "total_reflection";
            ++flagged;
        }
        worst = std::max(worst, std::abs(residual));
        if (std::abs(residual) > kFluxTolerance) {
            audit.check(false, "flux", "residual " + format_double(residual) + " at k = " + format_double(ks[i]));
        }
        table += table_row({format_double(ks[i]), format_double(R), format_double(T), format_double(residual), flag});
    }
    write_spectrum(opt.out_dir, "R_pw", r, opt.format);
    write_spectrum(opt.out_dir, "T_pw", t, opt.format);
    write_atomic(opt.out_dir / "planewave_audit.csv", table);
    log << "planewave: " << ks.size() << " wave vectors, max flux residual " << format_double(worst) << ", "
        << flagged << " total-reflection rows\n";
    return audit;
}

Audit cmd_snapshot(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    Audit audit;
    const auto times = sorted_times(cfg);
    for (double kbar : cfg.kbars) {
        const PacketSpec spec = cfg.packet(kbar);
        log_warnings(spec, log);
        const UniformGrid grid_x = snapshot_grid(cfg, spec, times);
        const auto x = grid_x.nodes();
        const KGrid kg = packet_grid(cfg, spec, x, times);
        const double n0 = packet_norm(spec, kg);
        const std::string tag = suffix(cfg, kbar);

        std::vector<WaveField> fields;
        for (double t : times) {
            WaveField f = assemble_packet(cfg.barrier, spec, kg, x, t);
            const XWindow w = default_window(cfg.barrier, spec, t);
            if (x.front() <= w.lo && x.back() >= w.hi) {
                const double drift = f.norm() / n0 - 1.0;
                audit.check(std::abs(drift) <= kNormTolerance, "norm",
                            "superposition norm drift " + format_double(drift) + " at t = " + format_double(t));
            }
            write_field(opt.out_dir, "snapshot" + tag + "_t" + short_number(t), f, opt.format);
            log << "snapshot: t = " << short_number(t) << ", " << x.size() << " positions, " << kg.nodes.size()
                << " wave vectors\n";
            fields.push_back(std::move(f));
        }
        if (!opt.oracle) {
            continue;
        }

        GridConfig grid;
        grid.x_min = x.front();
        grid.x_max = x.back();
        grid.dx = grid_x.dx;
        grid.dt = cfg.dt.value_or(grid.dx * grid.dx);
        grid.boundary = cfg.boundary;
        grid.absorbing_width = cfg.absorbing_width;
        grid.absorbing_strength = cfg.absorbing_strength;
        validate_grid(grid, cfg.barrier, spec);

        // The oracle starts from the superposition at t0, or at the first
        // requested time when that is earlier.
        std::string summary = "t,distance,discrete_norm_drift\n";
        const double start = std::min(spec.t0, times.front());
        WaveField psi = assemble_packet(cfg.barrier, spec, kg, x, start);
        const double norm0 = discrete_norm(psi);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double span = times[i] - psi.time;
            if (span > 0.0) {
                const auto steps = static_cast<std::size_t>(std::ceil(span / grid.dt - 1e-9));
                GridConfig step = grid;
                step.dt = span / static_cast<double>(steps);
                psi = evolve(cfg.barrier, psi, step, steps);
                psi.time = times[i];
            }
            const double distance = compare_fields(psi, fields[i]);
            const double drift = discrete_norm(psi) / norm0 - 1.0;
            if (grid.boundary == Boundary::HardWall) {
                audit.check(std::abs(drift) <= kDiscreteNormTolerance, "norm",
                            "oracle norm drift " + format_double(drift) + " at t = " + format_double(times[i]));
            }
            write_field(opt.out_dir, "oracle" + tag + "_t" + short_number(times[i]), psi, opt.format);
            summary += table_row({format_double(times[i]), format_double(distance), format_double(drift)});
            log << "oracle: t = " << short_number(times[i]) << ", relative L2 distance " << format_double(distance)
                << '\n';
        }
        write_atomic(opt.out_dir / ("oracle_summary" + tag + ".csv"), summary);
    }
    return audit;
}

Audit cmd_reflectivity(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    Audit audit;
    const auto ks = cfg.k_values();
    const Spectrum rpw = reflectivity_planewave(cfg.barrier, ks);
    check_bounds(audit, rpw, "R_pw");
    write_spectrum(opt.out_dir, "R_pw", rpw, opt.format);
    for (double kbar : cfg.kbars) {
        const PacketSpec spec = cfg.packet(kbar);
        log_warnings(spec, log);
        const Spectrum rc = reflectivity_coherent(cfg.barrier, spec, ks);
        check_bounds(audit, rc, "R_coh(kbar = " + short_number(kbar) + ")");
        write_spectrum(opt.out_dir, "R_coh_kbar" + short_number(kbar), rc, opt.format);
        if (cfg.resolution) {
            const Spectrum rm = resolution_convolve(rc, *cfg.resolution, ks);
            check_bounds(audit, rm, "R_meas(kbar = " + short_number(kbar) + ")");
            write_spectrum(opt.out_dir, "R_meas_kbar" + short_number(kbar), rm, opt.format);
        }
        log << "reflectivity: kbar = " << short_number(kbar) << ", dk = " << short_number(cfg.dk) << '\n';
    }
    return audit;
}

Audit cmd_convergence(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log)
{
    Audit audit;
    const auto times = sorted_times(cfg);
    const auto ks = cfg.k_values();
    for (double kbar : cfg.kbars) {
        const PacketSpec spec = cfg.packet(kbar);
        log_warnings(spec, log);
        const std::string tag = suffix(cfg, kbar);

        Spectrum asym;
        asym.kind = SpectrumKind::r_t;
        asym.meta.kbar = spec.kbar;
        asym.meta.dk = spec.dk;
        asym.k_values = ks;
        double scale = 0.0;
        for (double k : ks) {
            asym.values.push_back(reflection_amplitude_asymptotic(spec, cfg.barrier, k));
            scale = std::max(scale, std::abs(asym.values.back()));
        }
        write_spectrum(opt.out_dir, "r_asym" + tag, asym, opt.format);

        std::string summary = "t,max_deviation,near_kbar_relative_deviation\n";
        for (double t : times) {
            const Spectrum r = reflection_amplitude_timed(cfg.barrier, spec, ks, t, default_window(cfg.barrier, spec, t));
            double dev = 0.0;
            double near = 0.0;
            for (std::size_t i = 0; i < ks.size(); ++i) {
                const double d = std::abs(std::abs(r.values[i]) - std::abs(asym.values[i]));
                dev = std::max(dev, d);
                if (std::abs(ks[i] - spec.kbar) <= spec.dk && scale > 0.0) {
                    near = std::max(near, d / scale);
                }
            }
            write_spectrum(opt.out_dir, "r" + tag + "_t" + short_number(t), r, opt.format);
            summary += table_row({format_double(t), format_double(dev), format_double(near)});
            log << "convergence: t = " << short_number(t) << ", max deviation " << format_double(dev)
                << ", near kbar " << format_double(near) << '\n';
        }
        write_atomic(opt.out_dir / ("convergence_summary" + tag + ".csv"), summary);
    }
    return audit;
}

Audit cmd_statops_demo(const RunConfig& cfg, std::ostream& out)
{
    Audit audit;
    const DiscreteState state(cfg.statops.coefficients, cfg.statops.energies);
    const std::size_t n = state.size();
    const auto& c = state.coefficients();
    const auto& e = state.energies();

    char buf[64];
    out << "# off-diagonal |rho_nm(T)| / |c_n c_m| against sinc((E_n - E_m) T / 2)\n";
    out << "T";
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            out << ",ratio_" << a << b << ",sinc_" << a << b;
        }
    }
    out << ",max_diag_change,purity\n";
    for (double T : cfg.statops.windows) {
        const Eigen::MatrixXcd rho = T > 0.0 ? time_averaged_density(state, T) : density_at(state, 0.0);
        out << short_number(T);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const double cc = std::abs(c[a] * std::conj(c[b]));
                const double ratio = cc > 0.0 ? (rho(a, b) / (c[a] * std::conj(c[b]))).real() : 0.0;
                const double expected = sinc((e[a] - e[b]) * T / 2.0);
                audit.check(cc == 0.0 || std::abs(ratio - expected) <= 1e-12, "sinc",
                            "pair " + std::to_string(a) + std::to_string(b) + " at T = " + short_number(T));
                std::snprintf(buf, sizeof buf, ",%.12f,%.12f", ratio, expected);
                out << buf;
            }
        }
        double diag = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            diag = std::max(diag, std::abs(rho(a, a).real() - std::norm(c[a])));
        }
        audit.check(diag <= 1e-14, "diagonal", "changed by " + format_double(diag) + " at T = " + short_number(T));
        std::snprintf(buf, sizeof buf, ",%.3e,%.12f\n", diag, purity(rho));
        out << buf;
    }
    const Eigen::MatrixXcd lim = infinite_time_density(state);
    out << "inf";
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            std::snprintf(buf, sizeof buf, ",%.12f,%.12f", std::abs(lim(a, b)), 0.0);
            out << buf;
        }
    }
    std::snprintf(buf, sizeof buf, ",%.3e,%.12f\n", 0.0, purity(lim));
    out << buf;
    return audit;
}

}  // namespace wpscat::cli
