#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wpscat/barrier.hpp"
#include "wpscat/packet.hpp"

namespace wpscat {

enum class SpectrumKind { R_pw, T_pw, r_t, t_t, R_coh, R_meas };

std::string_view to_string(SpectrumKind kind);
/// True for kinds whose samples are complex amplitudes.
bool is_amplitude(SpectrumKind kind);

struct SpectrumMeta {
    std::optional<double> kbar;
    std::optional<double> dk;
    std::optional<double> gamma;
    std::optional<double> t;
    std::optional<double> dk_inst;
};

/// Samples of one spectral quantity on strictly increasing wave vectors.
/// Intensity kinds store real values with zero imaginary part.
struct Spectrum {
    std::vector<double> k_values;
    std::vector<Complex> values;
    SpectrumKind kind = SpectrumKind::R_pw;
    SpectrumMeta meta;

    /// Throws InvalidArgument for unsorted k or mismatched sizes and
    /// InvariantViolation for intensities outside [0, 1 + 1e-9].
    void validate() const;
};

struct ResolutionModel {
    double dk_inst = 0.0;
    /// Divide the kernel by sqrt(pi) dk_inst so that it integrates to one.
    bool normalize = false;
};

/// Position window [lo, hi] used for timed projections.
struct XWindow {
    double lo = 0.0;
    double hi = 0.0;
};

Spectrum reflectivity_planewave(const BarrierProfile& profile, std::span<const double> k_values);
Spectrum transmissivity_planewave(const BarrierProfile& profile, std::span<const double> k_values);

/// [x0 - 8 sigma(t) - 2 kbar t, L + 2 kbar t + 8 sigma(t)].
XWindow default_window(const BarrierProfile& profile, const PacketSpec& spec, double t);

/// Position step locked to 1/16 of the shortest wavelength among k_max and
/// kbar + 6 dk.
double projection_step(const PacketSpec& spec, double k_max);

/// r(k, t) = exp(i k^2 t) times the Simpson estimate of the integral of
/// exp(i k x) Psi(x, t) over the window. The exp(i k^2 t) factor removes the
/// free phase so that r(k, t) tends to reflection_amplitude_asymptotic.
/// Throws WindowTooSmall when the outer 5% of the window on either side
/// holds more than 1e-3 of the packet norm.
Spectrum reflection_amplitude_timed(const BarrierProfile& profile, const PacketSpec& spec,
                                    std::span<const double> k_values, double t,
                                    const XWindow& window);
Complex reflection_amplitude_timed(const BarrierProfile& profile, const PacketSpec& spec,
                                   double k, double t, const XWindow& window);

/// Same projection with exp(-i k x): the transmitted-side amplitude.
Spectrum transmission_amplitude_timed(const BarrierProfile& profile, const PacketSpec& spec,
                                      std::span<const double> k_values, double t,
                                      const XWindow& window);

/// 2 pi exp(-i k x0) p(k) r_pw(k).
Complex reflection_amplitude_asymptotic(const PacketSpec& spec, const BarrierProfile& profile,
                                        double k);

/// 2 pi exp(-i k x0) p(k) t_pw(k). Derived by analogy with the reflected
/// case and checked against transmission_amplitude_timed; vacuum backing is
/// the supported configuration.
Complex transmission_amplitude_asymptotic(const PacketSpec& spec, const BarrierProfile& profile,
                                          double k);

/// gamma = dk / (4 pi^{3/2}).
double gamma_norm(double dk);

/// R_coh(k) = 4 pi^2 gamma P_coh(k) R_pw(k) = exp(-(k - kbar)^2 / dk^2) R_pw(k).
Spectrum reflectivity_coherent(const BarrierProfile& profile, const PacketSpec& spec,
                               std::span<const double> k_values);

/// exp(-eps^2 / dk_inst^2), divided by sqrt(pi) dk_inst when normalized.
/// Throws ZeroWidth for dk_inst == 0.
double instrument_kernel(double eps_offset, const ResolutionModel& model);

/// R_meas(k_m) = integral over k > 0 of P_inst(k_m - k) R_coh(k) by the
/// trapezoid rule on the grid of rcoh. With dk_inst == 0 the coherent
/// spectrum is linearly resampled. Throws GridTooCoarse if the grid spacing
/// exceeds dk_inst / 10 and OutOfRange for k_m outside the rcoh grid.
Spectrum resolution_convolve(const Spectrum& rcoh, const ResolutionModel& model,
                             std::span<const double> km_values);

}  // namespace wpscat
