#include "wpscat/packet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wpscat/error.hpp"
#include "wpscat/numerics.hpp"
#include "wpscat/transfer.hpp"

namespace wpscat {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Phase recurrences are re-seeded from exact values at this stride.
constexpr std::size_t kBlock = 256;

struct Superposition {
    std::vector<Complex> total;
    std::vector<Complex> incident;
    std::vector<Complex> reflected;
    std::vector<Complex> barrier;
    std::vector<Complex> transmitted;
};

void require_sorted(std::span<const double> x)
{
    if (x.empty()) {
        throw Error(ErrorCode::InvalidArgument, "position grid is empty");
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (!(x[i + 1] > x[i])) {
            throw Error(ErrorCode::InvalidArgument, "positions must be strictly increasing", i + 1);
        }
    }
}

Superposition superpose(const BarrierProfile& profile, const PacketSpec& spec,
                        const WeightFunction& weight, const KGrid& kg,
                        std::span<const double> x, double t, bool split)
{
    validate(profile);
    validate(spec);
    require_sorted(x);
    if (kg.nodes.empty() || kg.nodes.size() != kg.weights.size()) {
        throw Error(ErrorCode::InvalidArgument, "k grid nodes and weights disagree");
    }

    const std::size_t nk = kg.nodes.size();
    std::vector<StationaryState> states;
    states.reserve(nk);
    std::vector<Complex> coeff(nk);
    const double elapsed = t - spec.t0;
    for (std::size_t i = 0; i < nk; ++i) {
        const double k = kg.nodes[i];
        states.emplace_back(profile, k);
        coeff[i] = kg.weights[i] * weight(k) * std::exp(-kI * (k * spec.x0 + k * k * elapsed));
    }

    const std::size_t nx = x.size();
    const double length = profile.length();
    const bool uniform = is_uniform(x);
    const double dx = nx > 1 ? (x.back() - x.front()) / static_cast<double>(nx - 1) : 0.0;

    Superposition out;
    out.total.assign(nx, Complex{});
    if (split) {
        out.incident.assign(nx, Complex{});
        out.reflected.assign(nx, Complex{});
        out.barrier.assign(nx, Complex{});
        out.transmitted.assign(nx, Complex{});
    }

    const std::size_t n_blocks = (nx + kBlock - 1) / kBlock;
    parallel_for(n_blocks, [&](std::size_t b_begin, std::size_t b_end) {
        for (std::size_t blk = b_begin; blk < b_end; ++blk) {
            const std::size_t lo = blk * kBlock;
            const std::size_t hi = std::min(nx, lo + kBlock);
            for (std::size_t i = 0; i < nk; ++i) {
                const StationaryState& st = states[i];
                const PlaneWaveSolution& pw = st.amplitudes();
                const double fk = pw.f.real() * kg.nodes[i];
                const Complex bk = pw.b * kg.nodes[i];
                const Complex c = coeff[i];
                const Complex cr = c * pw.r;
                const Complex ct = c * pw.t;
                Complex ph_f = std::polar(1.0, fk * x[lo]);
                Complex ph_b{};
                bool b_seeded = false;
                const Complex step_f = std::polar(1.0, fk * dx);
                const Complex step_b = std::exp(kI * bk * dx);
                for (std::size_t j = lo; j < hi; ++j) {
                    if (!uniform && j > lo) {
                        ph_f = std::polar(1.0, fk * x[j]);
                        b_seeded = false;
                    }
                    const double xj = x[j];
                    if (xj < 0.0) {
                        const Complex in = c * ph_f;
                        const Complex re = cr * std::conj(ph_f);
                        out.total[j] += in + re;
                        if (split) {
                            out.incident[j] += in;
                            out.reflected[j] += re;
                        }
                    } else if (xj > length) {
                        if (!b_seeded) {
                            ph_b = std::exp(kI * bk * xj);
                            b_seeded = true;
                        }
                        const Complex tr = ct * ph_b;
                        out.total[j] += tr;
                        if (split) {
                            out.transmitted[j] += tr;
                        }
                    } else {
                        const Complex ba = c * st.inside(xj);
                        out.total[j] += ba;
                        if (split) {
                            out.barrier[j] += ba;
                        }
                    }
                    if (uniform) {
                        ph_f *= step_f;
                        if (b_seeded) {
                            ph_b *= step_b;
                        }
                    }
                }
            }
        }
    });
    return out;
}

WaveField make_field(std::span<const double> x, std::vector<Complex> values, double t)
{
    WaveField f;
    f.x.assign(x.begin(), x.end());
    f.values = std::move(values);
    f.time = t;
    return f;
}

}  // namespace

std::vector<std::string> validate(const PacketSpec& spec)
{
    if (!(spec.kbar > 0.0) || !std::isfinite(spec.kbar)) {
        throw Error(ErrorCode::InvalidArgument, "kbar must be positive and finite");
    }
    if (!(spec.dk > 0.0) || !std::isfinite(spec.dk)) {
        throw Error(ErrorCode::InvalidArgument, "dk must be positive and finite");
    }
    if (!std::isfinite(spec.x0) || !std::isfinite(spec.t0)) {
        throw Error(ErrorCode::InvalidArgument, "x0 and t0 must be finite");
    }
    std::vector<std::string> warnings;
    if (spec.kbar < 3.0 * spec.dk) {
        warnings.push_back("kbar < 3 dk: the k <= 0 cut removes a visible part of the Gaussian");
    }
    return warnings;
}

KGrid simpson_grid(double lo, double hi, std::size_t n_nodes)
{
    if (!(hi > lo)) {
        throw Error(ErrorCode::InvalidArgument, "k interval is empty");
    }
    if (n_nodes < 3) {
        throw Error(ErrorCode::InvalidArgument, "k grid needs at least three nodes");
    }
    if (n_nodes % 2 == 0) {
        ++n_nodes;
    }
    KGrid g;
    g.nodes = linspace(lo, hi, n_nodes);
    g.weights = simpson_weights(n_nodes, (hi - lo) / static_cast<double>(n_nodes - 1));
    return g;
}

KGrid kgrid(const PacketSpec& spec, std::size_t n_nodes, double half_width_in_sigmas)
{
    validate(spec);
    if (n_nodes < 16) {
        throw Error(ErrorCode::InvalidArgument, "k grid needs at least 16 nodes");
    }
    if (!(half_width_in_sigmas > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "k grid half width must be positive");
    }
    const double lo = std::max(spec.kbar - half_width_in_sigmas * spec.dk, kKFloor);
    const double hi = spec.kbar + half_width_in_sigmas * spec.dk;
    return simpson_grid(lo, hi, n_nodes);
}

std::size_t k_nodes_for_extent(const PacketSpec& spec, double extent, double half_width_in_sigmas)
{
    const double lo = std::max(spec.kbar - half_width_in_sigmas * spec.dk, kKFloor);
    const double span = spec.kbar + half_width_in_sigmas * spec.dk - lo;
    constexpr double safety = 1.25;
    const double needed = std::ceil(span * std::abs(extent) * safety / kPi) + 1.0;
    auto n = std::max<std::size_t>(kDefaultKNodes, static_cast<std::size_t>(needed));
    if (n % 2 == 0) {
        ++n;
    }
    return n;
}

double WaveField::norm() const
{
    const auto w = trapezoid_weights(x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += w[i] * std::norm(values[i]);
    }
    return s;
}

double WaveField::norm_between(double lo, double hi) const
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i] >= lo && x[i + 1] <= hi) {
            s += 0.5 * (x[i + 1] - x[i]) * (std::norm(values[i]) + std::norm(values[i + 1]));
        }
    }
    return s;
}

Complex gaussian_weight(double k, const PacketSpec& spec)
{
    if (k <= 0.0) {
        return 0.0;
    }
    const double u = (k - spec.kbar) / spec.dk;
    return std::exp(-0.5 * u * u);
}

double normalized_pdf(double k, const PacketSpec& spec)
{
    const double u = (k - spec.kbar) / spec.dk;
    return std::exp(-u * u) / (std::sqrt(kPi) * spec.dk);
}

double sigma_t(double t, const PacketSpec& spec)
{
    const double s0 = spec.sigma0();
    const double elapsed = t - spec.t0;
    return std::sqrt(s0 * s0 + 4.0 * elapsed * elapsed / (s0 * s0));
}

Complex free_packet_closed(double x, double t, const PacketSpec& spec)
{
    const double s0 = spec.sigma0();
    const double elapsed = t - spec.t0;
    const double X = x - spec.x0;
    const double Y = X - 2.0 * spec.kbar * elapsed;
    const double sigma = sigma_t(t, spec);
    const Complex c = spec.dk / std::sqrt(Complex{1.0, 2.0 * spec.dk * spec.dk * elapsed});
    const double chi = -(spec.kbar * X - spec.kbar * spec.kbar * elapsed +
                         Y * Y * elapsed / (s0 * s0 * s0 * s0 + 4.0 * elapsed * elapsed));
    return c * std::exp(-Y * Y / (2.0 * sigma * sigma)) * std::polar(1.0, -chi);
}

WaveField assemble_packet(const BarrierProfile& profile, const PacketSpec& spec,
                          const KGrid& kg, std::span<const double> x_nodes, double t)
{
    return assemble_packet(
        profile, spec, [&spec](double k) { return gaussian_weight(k, spec); }, kg, x_nodes, t);
}

WaveField assemble_packet(const BarrierProfile& profile, const PacketSpec& spec,
                          const WeightFunction& weight, const KGrid& kg,
                          std::span<const double> x_nodes, double t)
{
    auto s = superpose(profile, spec, weight, kg, x_nodes, t, false);
    return make_field(x_nodes, std::move(s.total), t);
}

FunctionalPackets functional_split(const BarrierProfile& profile, const PacketSpec& spec,
                                   const KGrid& kg, std::span<const double> x_nodes, double t)
{
    auto s = superpose(
        profile, spec, [&spec](double k) { return gaussian_weight(k, spec); }, kg, x_nodes, t,
        true);
    return {make_field(x_nodes, std::move(s.incident), t),
            make_field(x_nodes, std::move(s.reflected), t),
            make_field(x_nodes, std::move(s.barrier), t),
            make_field(x_nodes, std::move(s.transmitted), t)};
}

WaveField propagate_free_kernel(const WaveField& field, double t2)
{
    return propagate_free_kernel(field, t2, field.x);
}

WaveField propagate_free_kernel(const WaveField& field, double t2, std::span<const double> x_out)
{
    require_sorted(field.x);
    require_sorted(x_out);
    if (field.values.size() != field.x.size() || field.x.size() < 3) {
        throw Error(ErrorCode::InvalidArgument, "field needs at least three samples");
    }
    const double tau = t2 - field.time;
    const std::size_t n_in = field.x.size();

    if (tau == 0.0) {
        if (!std::equal(x_out.begin(), x_out.end(), field.x.begin(), field.x.end())) {
            throw Error(ErrorCode::InvalidArgument,
                        "zero propagation time needs the output grid to equal the input grid");
        }
        return field;
    }

    // Containment: the outer 2% of samples on each side must carry a
    // negligible share of the norm.
    const double total = field.norm();
    const std::size_t edge = std::max<std::size_t>(1, n_in / 50);
    const double left = field.norm_between(field.x.front(), field.x[edge]);
    const double right = field.norm_between(field.x[n_in - 1 - edge], field.x.back());
    if (left + right > 1e-4 * total) {
        throw Error(ErrorCode::DomainTooSmall,
                    "input field is not contained by its grid (edge share " +
                        std::to_string((left + right) / total) + ")");
    }

    // Trapezoid sums of the chirp produce images of the result shifted by
    // 4 pi tau / dx; they must fall outside everything sampled.
    double dx_max = 0.0;
    for (std::size_t i = 0; i + 1 < n_in; ++i) {
        dx_max = std::max(dx_max, field.x[i + 1] - field.x[i]);
    }
    const double span = std::max(field.x.back(), x_out.back()) - std::min(field.x.front(), x_out.front());
    const double image_shift = 4.0 * kPi * std::abs(tau) / dx_max;
    if (image_shift <= span) {
        throw Error(ErrorCode::GridTooCoarse,
                    "input spacing " + std::to_string(dx_max) + " aliases the free kernel at tau = " +
                        std::to_string(tau));
    }

    const auto w = trapezoid_weights(field.x);
    std::vector<Complex> weighted(n_in);
    for (std::size_t j = 0; j < n_in; ++j) {
        weighted[j] = w[j] * field.values[j];
    }
    const Complex norm = 1.0 / std::sqrt(4.0 * kPi * kI * tau);
    const double inv4tau = 1.0 / (4.0 * tau);

    std::vector<Complex> out(x_out.size());
    parallel_for(x_out.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Complex acc{};
            for (std::size_t j = 0; j < n_in; ++j) {
                const double d = x_out[i] - field.x[j];
                acc += weighted[j] * std::polar(1.0, d * d * inv4tau);
            }
            out[i] = norm * acc;
        }
    });
    return make_field(x_out, std::move(out), t2);
}

Complex delta_closed(double X, double T, const PacketSpec& spec)
{
    validate(spec);
    const double alpha = 1.0 / (2.0 * spec.dk * spec.dk);
    const double vg = 2.0 * spec.kbar;
    const double Y = X - vg * T;
    const double denom = 4.0 * alpha * alpha + T * T;
    const Complex prefactor = std::sqrt(2.0 * alpha / Complex{2.0 * alpha, T});
    const double envelope = std::exp(-alpha * Y * Y / (2.0 * denom));
    const double phase = spec.kbar * X - spec.kbar * spec.kbar * T + T * Y * Y / (4.0 * denom);
    return prefactor * envelope * std::polar(1.0, phase);
}

Complex delta_quadrature(double X, double T, const PacketSpec& spec, std::size_t n_nodes,
                         double half_width_in_sigmas)
{
    validate(spec);
    const KGrid g = simpson_grid(spec.kbar - half_width_in_sigmas * spec.dk,
                                 spec.kbar + half_width_in_sigmas * spec.dk, n_nodes);
    Complex acc{};
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double k = g.nodes[i];
        acc += g.weights[i] * normalized_pdf(k, spec) * std::polar(1.0, k * X - k * k * T);
    }
    return acc;
}

}  // namespace wpscat
