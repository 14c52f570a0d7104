#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wpscat {

using Complex = std::complex<double>;

/*!
 * Units: the kinetic prefactor hbar/2m is fixed to one, so q (inverse
 * length squared), k (inverse length) and t (length squared) are all
 * dimensionless. Physical time is recovered as t_phys = t / (hbar/2m).
 */

/// One constant-density slab: scattering length density q (1/length^2)
/// over a finite width.
struct Bin {
    double q = 0.0;
    double width = 0.0;
};

/// Piecewise-constant barrier on [0, L] between semi-infinite fronting
/// (x < 0) and backing (x > L) media.
struct BarrierProfile {
    std::vector<Bin> bins;
    double q_fronting = 0.0;
    double q_backing = 0.0;

    /// Total thickness; zero for an empty profile (bare Fresnel step).
    double length() const;
    /// Positions of the bin edges, starting with 0 and ending with L.
    std::vector<double> edges() const;
    /// q(x) on the whole axis. Bins are half-open [x_{j-1}, x_j).
    double q_at(double x) const;
    bool empty() const { return bins.empty(); }
};

/// Returns the profile unchanged, or throws NonPositiveWidth /
/// NonFiniteDensity naming the offending bin.
const BarrierProfile& validate(const BarrierProfile& profile);

/// n = sqrt(1 - q/k^2). Below the critical wave vector the branch with
/// positive imaginary part is returned, so exp(i n k x) decays into the
/// medium. Throws ZeroWaveVector for k <= 0.
Complex refractive_index(double q, double k);

struct DensitySample {
    double x = 0.0;
    double q = 0.0;
};

/// Equal-width binning of a sampled density profile. Samples must be
/// sorted by x; a repeated x encodes a jump. Each bin gets the mean of the
/// piecewise-linear interpolant over its interval.
BarrierProfile discretize(std::span<const DensitySample> samples, int n_bins);

/// Exact jump samples of a piecewise-constant profile (two samples per
/// interior edge), suitable for feeding back into discretize().
std::vector<DensitySample> sample_profile(const BarrierProfile& profile);

/// Repo-chosen symmetric double barrier with a central well. Its plane-wave
/// reflectivity vanishes near k = 0.5085, 0.999, 1.486 and 1.994.
BarrierProfile default_double_barrier();

}  // namespace wpscat
