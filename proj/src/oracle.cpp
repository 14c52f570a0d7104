#include "wpscat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wpscat/error.hpp"
#include "wpscat/numerics.hpp"

namespace wpscat {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t node_count(const GridConfig& cfg)
{
    if (!(cfg.dx > 0.0) || !(cfg.x_max > cfg.x_min)) {
        throw Error(ErrorCode::StabilityViolation, "grid needs dx > 0 and x_max > x_min");
    }
    const double n = std::round((cfg.x_max - cfg.x_min) / cfg.dx);
    if (n < 2.0) {
        throw Error(ErrorCode::StabilityViolation, "grid has fewer than three nodes");
    }
    return static_cast<std::size_t>(n) + 1;
}

// Mean of the piecewise-constant q over [a, b].
double cell_average(const BarrierProfile& p, double a, double b)
{
    const auto edges = p.edges();
    double total = 0.0;
    auto add = [&](double lo, double hi, double q) {
        lo = std::max(lo, a);
        hi = std::min(hi, b);
        if (hi > lo) {
            total += q * (hi - lo);
        }
    };
    add(-INFINITY, 0.0, p.q_fronting);
    for (std::size_t j = 0; j < p.bins.size(); ++j) {
        add(edges[j], edges[j + 1], p.bins[j].q);
    }
    add(edges.back(), INFINITY, p.q_backing);
    return total / (b - a);
}

}  // namespace

std::vector<double> grid_nodes(const GridConfig& cfg)
{
    const std::size_t n = node_count(cfg);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = cfg.x_min + cfg.dx * static_cast<double>(i);
    }
    return x;
}

void validate_grid(const GridConfig& cfg, const BarrierProfile& profile, const PacketSpec& spec)
{
    validate(profile);
    validate(spec);
    node_count(cfg);
    const double length = profile.length();
    if (cfg.x_max - cfg.x_min < 4.0 * (std::abs(spec.x0) + length)) {
        throw Error(ErrorCode::StabilityViolation, "domain narrower than 4 (|x0| + L)");
    }
    const double dx_max = 2.0 * std::numbers::pi / (spec.kbar + 6.0 * spec.dk) / 20.0;
    if (cfg.dx > dx_max) {
        throw Error(ErrorCode::StabilityViolation,
                    "dx = " + std::to_string(cfg.dx) + " exceeds " + std::to_string(dx_max) +
                        " (20 nodes per shortest wavelength)");
    }
    if (cfg.enforce_dt_heuristic && cfg.dt > cfg.dx * cfg.dx * (1.0 + 1e-12)) {
        throw Error(ErrorCode::StabilityViolation, "dt exceeds dx^2");
    }
    if (cfg.x_min > 0.0 || cfg.x_max < length) {
        throw Error(ErrorCode::StabilityViolation, "barrier region not inside the domain");
    }
}

WaveField evolve(const BarrierProfile& profile, const WaveField& initial, const GridConfig& cfg,
                 std::size_t n_steps)
{
    validate(profile);
    const std::size_t n = node_count(cfg);
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw Error(ErrorCode::StabilityViolation, "dt must be positive");
    }
    if (cfg.enforce_dt_heuristic && cfg.dt > cfg.dx * cfg.dx * (1.0 + 1e-12)) {
        throw Error(ErrorCode::StabilityViolation, "dt exceeds dx^2");
    }
    if (initial.x.size() != n || initial.values.size() != n) {
        throw Error(ErrorCode::GridMismatch, "initial field has " + std::to_string(initial.x.size()) +
                                                 " samples, grid has " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = cfg.x_min + cfg.dx * static_cast<double>(i);
        if (std::abs(initial.x[i] - xi) > 1e-9 * cfg.dx) {
            throw Error(ErrorCode::GridMismatch, "initial field is not on the configured grid", i);
        }
    }
    if (n_steps == 0) {
        return initial;
    }

    // Potential: cell-averaged q, plus the imaginary ramp when absorbing.
    std::vector<Complex> v(n);
    const double span = cfg.x_max - cfg.x_min;
    const double layer = cfg.absorbing_width * span;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = initial.x[i];
        v[i] = cell_average(profile, xi - 0.5 * cfg.dx, xi + 0.5 * cfg.dx);
        if (cfg.boundary == Boundary::AbsorbingLayer && layer > 0.0) {
            const double depth = std::max(cfg.x_min + layer - xi, xi - (cfg.x_max - layer));
            if (depth > 0.0) {
                const double s = depth / layer;
                v[i] -= kI * cfg.absorbing_strength * s * s * s * s;
            }
        }
    }

    // (1 + i dt/2 H) psi_new = (1 - i dt/2 H) psi_old, H = -D2 + V.
    const double inv_dx2 = 1.0 / (cfg.dx * cfg.dx);
    const Complex half = kI * (0.5 * cfg.dt);
    const Complex off = -half * inv_dx2;  // off-diagonal of the implicit matrix
    std::vector<Complex> diag(n);
    std::vector<Complex> rhs_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex h_ii = 2.0 * inv_dx2 + v[i];
        diag[i] = 1.0 + half * h_ii;
        rhs_diag[i] = 1.0 - half * h_ii;
    }
    // Thomas factorization: modified super-diagonal and pivots.
    std::vector<Complex> c_mod(n);
    std::vector<Complex> pivot(n);
    pivot[0] = diag[0];
    c_mod[0] = off / pivot[0];
    for (std::size_t i = 1; i < n; ++i) {
        pivot[i] = diag[i] - off * c_mod[i - 1];
        c_mod[i] = off / pivot[i];
    }

    std::vector<Complex> psi = initial.values;
    std::vector<Complex> d(n);
    for (std::size_t step = 0; step < n_steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex r = rhs_diag[i] * psi[i];
            if (i > 0) {
                r -= off * psi[i - 1];
            }
            if (i + 1 < n) {
                r -= off * psi[i + 1];
            }
            d[i] = r;
        }
        d[0] /= pivot[0];
        for (std::size_t i = 1; i < n; ++i) {
            d[i] = (d[i] - off * d[i - 1]) / pivot[i];
        }
        psi[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            psi[i] = d[i] - c_mod[i] * psi[i + 1];
        }
    }

    WaveField out;
    out.x = initial.x;
    out.values = std::move(psi);
    out.time = initial.time + cfg.dt * static_cast<double>(n_steps);

    if (cfg.boundary == Boundary::HardWall) {
        const double edge = 0.1 * span;
        const double total = out.norm();
        const double outer = out.norm_between(cfg.x_min, cfg.x_min + edge) +
                             out.norm_between(cfg.x_max - edge, cfg.x_max);
        if (outer > 1e-3 * total) {
            throw Error(ErrorCode::BoundaryContamination,
                        "outer 10% of the domain holds " + std::to_string(outer / total) +
                            " of the norm at t = " + std::to_string(out.time));
        }
    }
    return out;
}

double discrete_norm(const WaveField& field)
{
    if (field.x.size() < 2 || field.values.size() != field.x.size()) {
        throw Error(ErrorCode::InvalidArgument, "field needs at least two samples");
    }
    const double dx = (field.x.back() - field.x.front()) / static_cast<double>(field.x.size() - 1);
    double s = 0.0;
    for (const Complex& v : field.values) {
        s += std::norm(v);
    }
    return s * dx;
}

double compare_fields(const WaveField& a, const WaveField& b)
{
    if (a.x.size() != b.x.size() || a.values.size() != a.x.size() || b.values.size() != b.x.size()) {
        throw Error(ErrorCode::GridMismatch, "fields have different sample counts");
    }
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        if (std::abs(a.x[i] - b.x[i]) > 1e-12 * (1.0 + std::abs(b.x[i]))) {
            throw Error(ErrorCode::GridMismatch, "fields have different positions", i);
        }
    }
    const auto w = trapezoid_weights(b.x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < b.x.size(); ++i) {
        num += w[i] * std::norm(a.values[i] - b.values[i]);
        den += w[i] * std::norm(b.values[i]);
    }
    if (den == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "reference field is identically zero");
    }
    return std::sqrt(num / den);
}

}  // namespace wpscat
