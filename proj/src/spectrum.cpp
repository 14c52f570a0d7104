#include "wpscat/spectrum.hpp"

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
constexpr std::size_t kBlock = 256;

void require_increasing(std::span<const double> k)
{
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        if (!(k[i + 1] > k[i])) {
            throw Error(ErrorCode::InvalidArgument, "k values must be strictly increasing", i + 1);
        }
    }
}

SpectrumMeta packet_meta(const PacketSpec& spec)
{
    SpectrumMeta m;
    m.kbar = spec.kbar;
    m.dk = spec.dk;
    return m;
}

// sign = +1 projects onto exp(i k x), -1 onto exp(-i k x).
Spectrum timed_projection(const BarrierProfile& profile, const PacketSpec& spec,
                          std::span<const double> k_values, double t, const XWindow& window,
                          double sign, SpectrumKind kind)
{
    validate(profile);
    validate(spec);
    require_increasing(k_values);
    if (k_values.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no k values requested");
    }
    if (!(k_values.front() > 0.0)) {
        throw Error(ErrorCode::ZeroWaveVector, "projection wave vectors must be positive");
    }
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
    }
    if (!(window.hi > window.lo)) {
        throw Error(ErrorCode::WindowTooSmall, "empty position window");
    }

    const double span = window.hi - window.lo;
    const double step = projection_step(spec, k_values.back());
    auto n = static_cast<std::size_t>(std::ceil(span / step)) + 1;
    if (n % 2 == 0) {
        ++n;
    }
    n = std::max<std::size_t>(n, 3);
    const auto x = linspace(window.lo, window.hi, n);
    const double dx = span / static_cast<double>(n - 1);
    const KGrid kg = kgrid(spec, k_nodes_for_extent(spec, span));
    const WaveField psi = assemble_packet(profile, spec, kg, x, t);

    const double total = psi.norm();
    const double margin = 0.05 * span;
    const double tail = std::max(psi.norm_between(window.lo, window.lo + margin),
                                 psi.norm_between(window.hi - margin, window.hi));
    if (tail > 1e-3 * total) {
        throw Error(ErrorCode::WindowTooSmall,
                    "packet tail at the window edge holds " + std::to_string(tail / total) +
                        " of the norm at t = " + std::to_string(t));
    }

    const auto w = simpson_weights(n, dx);
    std::vector<Complex> weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        weighted[j] = w[j] * psi.values[j];
    }

    const double elapsed = t - spec.t0;
    Spectrum out;
    out.k_values.assign(k_values.begin(), k_values.end());
    out.values.resize(k_values.size());
    out.kind = kind;
    out.meta = packet_meta(spec);
    out.meta.t = t;
    parallel_for(k_values.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double kx = sign * k_values[i];
            const Complex stride = std::polar(1.0, kx * dx);
            Complex acc{};
            for (std::size_t lo = 0; lo < n; lo += kBlock) {
                Complex phase = std::polar(1.0, kx * x[lo]);
                const std::size_t hi = std::min(n, lo + kBlock);
                for (std::size_t j = lo; j < hi; ++j) {
                    acc += weighted[j] * phase;
                    phase *= stride;
                }
            }
            const double k = k_values[i];
            out.values[i] = acc * std::polar(1.0, k * k * elapsed);
        }
    });
    return out;
}

}  // namespace

std::string_view to_string(SpectrumKind kind)
{
    switch (kind) {
    case SpectrumKind::R_pw: return "R_pw";
    case SpectrumKind::T_pw: return "T_pw";
    case SpectrumKind::r_t: return "r_t";
    case SpectrumKind::t_t: return "t_t";
    case SpectrumKind::R_coh: return "R_coh";
    case SpectrumKind::R_meas: return "R_meas";
    }
    return "unknown";
}

bool is_amplitude(SpectrumKind kind) { return kind == SpectrumKind::r_t || kind == SpectrumKind::t_t; }

void Spectrum::validate() const
{
    if (k_values.size() != values.size()) {
        throw Error(ErrorCode::InvalidArgument, "spectrum k and value counts differ");
    }
    require_increasing(k_values);
    if (is_amplitude(kind) || kind == SpectrumKind::T_pw) {
        return;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i].real();
        if (!(v >= 0.0 && v <= 1.0 + 1e-9)) {
            throw Error(ErrorCode::InvariantViolation,
                        std::string(to_string(kind)) + " = " + std::to_string(v) +
                            " outside [0, 1] at k = " + std::to_string(k_values[i]),
                        i);
        }
    }
}

Spectrum reflectivity_planewave(const BarrierProfile& profile, std::span<const double> k_values)
{
    require_increasing(k_values);
    Spectrum s;
    s.kind = SpectrumKind::R_pw;
    s.k_values.assign(k_values.begin(), k_values.end());
    for (double k : k_values) {
        s.values.emplace_back(plane_wave_amplitudes(profile, k).reflectivity());
    }
    return s;
}

Spectrum transmissivity_planewave(const BarrierProfile& profile, std::span<const double> k_values)
{
    require_increasing(k_values);
    Spectrum s;
    s.kind = SpectrumKind::T_pw;
    s.k_values.assign(k_values.begin(), k_values.end());
    for (double k : k_values) {
        s.values.emplace_back(plane_wave_amplitudes(profile, k).transmissivity());
    }
    return s;
}

XWindow default_window(const BarrierProfile& profile, const PacketSpec& spec, double t)
{
    const double travel = 2.0 * spec.kbar * (t - spec.t0);
    const double sigma = sigma_t(t, spec);
    return {spec.x0 - 8.0 * sigma - travel, profile.length() + travel + 8.0 * sigma};
}

double projection_step(const PacketSpec& spec, double k_max)
{
    const double k_fast = std::max(k_max, spec.kbar + 6.0 * spec.dk);
    return 2.0 * kPi / k_fast / 16.0;
}

Spectrum reflection_amplitude_timed(const BarrierProfile& profile, const PacketSpec& spec,
                                    std::span<const double> k_values, double t,
                                    const XWindow& window)
{
    return timed_projection(profile, spec, k_values, t, window, 1.0, SpectrumKind::r_t);
}

Complex reflection_amplitude_timed(const BarrierProfile& profile, const PacketSpec& spec,
                                   double k, double t, const XWindow& window)
{
    const double ks[] = {k};
    return reflection_amplitude_timed(profile, spec, ks, t, window).values.front();
}

Spectrum transmission_amplitude_timed(const BarrierProfile& profile, const PacketSpec& spec,
                                      std::span<const double> k_values, double t,
                                      const XWindow& window)
{
    return timed_projection(profile, spec, k_values, t, window, -1.0, SpectrumKind::t_t);
}

Complex reflection_amplitude_asymptotic(const PacketSpec& spec, const BarrierProfile& profile,
                                        double k)
{
    const auto pw = plane_wave_amplitudes(profile, k);
    return 2.0 * kPi * std::polar(1.0, -k * spec.x0) * gaussian_weight(k, spec) * pw.r;
}

Complex transmission_amplitude_asymptotic(const PacketSpec& spec, const BarrierProfile& profile,
                                          double k)
{
    const auto pw = plane_wave_amplitudes(profile, k);
    if (!pw.propagating_backing) {
        throw Error(ErrorCode::InvalidArgument,
                    "transmission amplitude needs propagating backing at k = " + std::to_string(k));
    }
    return 2.0 * kPi * std::polar(1.0, -k * spec.x0) * gaussian_weight(k, spec) * pw.t;
}

double gamma_norm(double dk)
{
    if (!(dk > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dk must be positive");
    }
    return dk / (4.0 * std::pow(kPi, 1.5));
}

Spectrum reflectivity_coherent(const BarrierProfile& profile, const PacketSpec& spec,
                               std::span<const double> k_values)
{
    validate(spec);
    require_increasing(k_values);
    const double gamma = gamma_norm(spec.dk);
    Spectrum s;
    s.kind = SpectrumKind::R_coh;
    s.meta = packet_meta(spec);
    s.meta.gamma = gamma;
    s.k_values.assign(k_values.begin(), k_values.end());
    for (double k : k_values) {
        const double r = plane_wave_amplitudes(profile, k).reflectivity();
        s.values.emplace_back(4.0 * kPi * kPi * gamma * normalized_pdf(k, spec) * r);
    }
    return s;
}

double instrument_kernel(double eps_offset, const ResolutionModel& model)
{
    if (model.dk_inst == 0.0) {
        throw Error(ErrorCode::ZeroWidth, "zero instrument width has no kernel; use the delta path");
    }
    if (!(model.dk_inst > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dk_inst must be >= 0");
    }
    const double u = eps_offset / model.dk_inst;
    const double g = std::exp(-u * u);
    return model.normalize ? g / (std::sqrt(kPi) * model.dk_inst) : g;
}

Spectrum resolution_convolve(const Spectrum& rcoh, const ResolutionModel& model,
                             std::span<const double> km_values)
{
    if (rcoh.k_values.size() < 2 || rcoh.values.size() != rcoh.k_values.size()) {
        throw Error(ErrorCode::InvalidArgument, "spectrum needs at least two samples");
    }
    require_increasing(rcoh.k_values);
    require_increasing(km_values);
    if (!(model.dk_inst >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dk_inst must be >= 0");
    }
    const auto& k = rcoh.k_values;
    for (std::size_t i = 0; i < km_values.size(); ++i) {
        if (km_values[i] < k.front() || km_values[i] > k.back()) {
            throw Error(ErrorCode::OutOfRange,
                        "k_m = " + std::to_string(km_values[i]) + " outside the spectrum grid", i);
        }
    }

    Spectrum out;
    out.kind = SpectrumKind::R_meas;
    out.meta = rcoh.meta;
    out.meta.dk_inst = model.dk_inst;
    out.k_values.assign(km_values.begin(), km_values.end());

    if (model.dk_inst == 0.0) {
        for (double km : km_values) {
            auto it = std::upper_bound(k.begin(), k.end(), km);
            std::size_t j = static_cast<std::size_t>(std::distance(k.begin(), it));
            j = std::clamp<std::size_t>(j, 1, k.size() - 1);
            const double a = (km - k[j - 1]) / (k[j] - k[j - 1]);
            out.values.push_back((1.0 - a) * rcoh.values[j - 1] + a * rcoh.values[j]);
        }
        return out;
    }

    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        if (k[i + 1] - k[i] > model.dk_inst / 10.0 * (1.0 + 1e-9)) {
            throw Error(ErrorCode::GridTooCoarse,
                        "spectrum spacing " + std::to_string(k[i + 1] - k[i]) +
                            " exceeds dk_inst / 10",
                        i);
        }
    }
    // The integral runs over k > 0 only.
    std::vector<double> kp;
    std::vector<Complex> vp;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] > 0.0) {
            kp.push_back(k[i]);
            vp.push_back(rcoh.values[i]);
        }
    }
    const auto w = trapezoid_weights(kp);
    out.values.resize(km_values.size());
    parallel_for(km_values.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            Complex acc{};
            for (std::size_t i = 0; i < kp.size(); ++i) {
                acc += w[i] * instrument_kernel(km_values[m] - kp[i], model) * vp[i];
            }
            out.values[m] = acc;
        }
    });
    return out;
}

}  // namespace wpscat
