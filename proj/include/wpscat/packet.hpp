#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wpscat/barrier.hpp"

namespace wpscat {

/// Gaussian wave-packet class member: mean wave vector, spread, and the
/// position the incident packet is centered on at time t0.
struct PacketSpec {
    double kbar = 1.0;
    double dk = 0.1;
    double x0 = 0.0;
    double t0 = 0.0;

    double sigma0() const { return 1.0 / dk; }
};

/// Throws InvalidArgument unless kbar > 0 and dk > 0. Returns advisory
/// warnings (currently: packet weight reaching k <= 0 when kbar < 3 dk).
std::vector<std::string> validate(const PacketSpec& spec);

/// Quadrature nodes and weights over positive wave vectors.
struct KGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr double kKFloor = 1e-4;
inline constexpr std::size_t kDefaultKNodes = 2049;

/// Composite Simpson grid on [max(kbar - h dk, 1e-4), kbar + h dk].
/// n_nodes >= 16, rounded up to odd.
KGrid kgrid(const PacketSpec& spec, std::size_t n_nodes = kDefaultKNodes,
            double half_width_in_sigmas = 6.0);

/// Same rule on [lo, hi] without any positivity clip.
KGrid simpson_grid(double lo, double hi, std::size_t n_nodes);

/// Complex samples of a wave function on sorted positions at one time.
struct WaveField {
    std::vector<double> x;
    std::vector<Complex> values;
    double time = 0.0;

    /// Trapezoid estimate of the integral of |psi|^2.
    double norm() const;
    /// Trapezoid estimate restricted to lo <= x <= hi.
    double norm_between(double lo, double hi) const;
};

/// Unnormalized amplitude exp(-(k - kbar)^2 / (2 dk^2)), zero for k <= 0.
Complex gaussian_weight(double k, const PacketSpec& spec);

/// exp(-(k - kbar)^2 / dk^2) / (sqrt(pi) dk); integrates to one over the
/// real line.
double normalized_pdf(double k, const PacketSpec& spec);

/// sigma(t) = sqrt(sigma0^2 + 4 T^2 / sigma0^2), T = t - t0.
double sigma_t(double t, const PacketSpec& spec);

/// Closed-form free packet c(t) exp(-(X - 2 kbar T)^2 / (2 sigma^2)) exp(-i chi)
/// with c(t) = dk / sqrt(1 + 2 i dk^2 T), X = x - x0. Unnormalized: c(t0) = dk.
/// The phase chi is the exact one of the Gaussian Fourier integral.
Complex free_packet_closed(double x, double t, const PacketSpec& spec);

/// The k-superposition integral of gaussian_weight equals this factor times
/// free_packet_closed.
inline constexpr double kSuperpositionScale = 2.5066282746310002;  // sqrt(2 pi)

/// Amplitude p(k) used by the superposition; defaults to gaussian_weight.
using WeightFunction = std::function<Complex(double)>;

/// Psi(x, t) = sum_i w_i p(k_i) exp(-i k_i x0) psi_k(x) exp(-i k_i^2 (t - t0)).
WaveField assemble_packet(const BarrierProfile& profile, const PacketSpec& spec,
                          const KGrid& kg, std::span<const double> x_nodes, double t);

/// Variant taking a user-supplied (e.g. tabulated) amplitude in place of
/// the Gaussian; spec still supplies x0 and t0.
WaveField assemble_packet(const BarrierProfile& profile, const PacketSpec& spec,
                          const WeightFunction& weight, const KGrid& kg,
                          std::span<const double> x_nodes, double t);

/// Region-restricted parts of the packet. Their pointwise sum is the
/// assembled packet.
struct FunctionalPackets {
    WaveField incident;     // x < 0, exp(i k (x - x0)) terms
    WaveField reflected;    // x < 0, r exp(-i k (x + x0)) terms
    WaveField barrier;      // 0 <= x <= L
    WaveField transmitted;  // x > L
};

FunctionalPackets functional_split(const BarrierProfile& profile, const PacketSpec& spec,
                                   const KGrid& kg, std::span<const double> x_nodes, double t);

/// Free propagation by direct convolution with
/// K0(x, tau) = exp(i x^2 / (4 tau)) / sqrt(4 pi i tau), trapezoid rule on the
/// input grid. Output positions default to the input positions.
/// Throws DomainTooSmall when the input is not contained by its grid and
/// GridTooCoarse when the kernel chirp aliases onto the grid.
WaveField propagate_free_kernel(const WaveField& field, double t2);
WaveField propagate_free_kernel(const WaveField& field, double t2, std::span<const double> x_out);

/// Closed-form Delta(X, T) = integral of exp(i (k X - k^2 T)) P(k) dk for the
/// normalized class density P (normalized_pdf), written with
/// alpha = 1 / (2 dk^2) and v_g = 2 kbar.
Complex delta_closed(double X, double T, const PacketSpec& spec);

/// The same integral by Simpson quadrature over kbar +- h dk.
Complex delta_quadrature(double X, double T, const PacketSpec& spec,
                         std::size_t n_nodes = kDefaultKNodes, double half_width_in_sigmas = 8.0);

/// Smallest odd k-node count whose Simpson aliasing images (spaced pi / h in
/// x) clear a field spanning `extent`, never below kDefaultKNodes.
std::size_t k_nodes_for_extent(const PacketSpec& spec, double extent,
                               double half_width_in_sigmas = 6.0);

}  // namespace wpscat
