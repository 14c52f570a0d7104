#include "wpscat/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wpscat/error.hpp"

namespace wpscat {

double BarrierProfile::length() const
{
    double total = 0.0;
    for (const auto& bin : bins) {
        total += bin.width;
    }
    return total;
}

std::vector<double> BarrierProfile::edges() const
{
    std::vector<double> result;
    result.reserve(bins.size() + 1);
    double x = 0.0;
    result.push_back(x);
    for (const auto& bin : bins) {
        x += bin.width;
        result.push_back(x);
    }
    return result;
}

double BarrierProfile::q_at(double x) const
{
    if (x < 0.0) {
        return q_fronting;
    }
    double right = 0.0;
    for (const auto& bin : bins) {
        right += bin.width;
        if (x < right) {
            return bin.q;
        }
    }
    return q_backing;
}

const BarrierProfile& validate(const BarrierProfile& profile)
{
    for (std::size_t j = 0; j < profile.bins.size(); ++j) {
        const auto& bin = profile.bins[j];
        if (!std::isfinite(bin.width) || !(bin.width > 0.0)) {
            throw Error(ErrorCode::NonPositiveWidth,
                        "bin " + std::to_string(j) + " has width " + std::to_string(bin.width), j);
        }
        if (!std::isfinite(bin.q)) {
            throw Error(ErrorCode::NonFiniteDensity, "bin " + std::to_string(j) + " has non-finite q",
                        j);
        }
    }
    if (!std::isfinite(profile.q_fronting) || !std::isfinite(profile.q_backing)) {
        throw Error(ErrorCode::NonFiniteDensity, "fronting/backing density must be finite");
    }
    return profile;
}

Complex refractive_index(double q, double k)
{
    if (!(k > 0.0)) {
        throw Error(ErrorCode::ZeroWaveVector, "wave vector must be positive, got " + std::to_string(k));
    }
    const double n2 = 1.0 - q / (k * k);
    if (n2 >= 0.0) {
        return {std::sqrt(n2), 0.0};
    }
    return {0.0, std::sqrt(-n2)};
}

namespace {

// Integral of the piecewise-linear interpolant of the samples over [a, b].
double integrate_interpolant(std::span<const DensitySample> s, double a, double b)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double x0 = s[i].x;
        const double x1 = s[i + 1].x;
        if (x1 <= x0) {
            continue;  // jump
        }
        const double lo = std::max(a, x0);
        const double hi = std::min(b, x1);
        if (hi <= lo) {
            continue;
        }
        const double slope = (s[i + 1].q - s[i].q) / (x1 - x0);
        const double q_lo = s[i].q + slope * (lo - x0);
        const double q_hi = s[i].q + slope * (hi - x0);
        total += 0.5 * (q_lo + q_hi) * (hi - lo);
    }
    return total;
}

}  // namespace

BarrierProfile discretize(std::span<const DensitySample> samples, int n_bins)
{
    if (samples.size() < 2) {
        throw Error(ErrorCode::EmptySamples, "need at least two samples to span an interval");
    }
    if (n_bins < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_bins must be >= 1");
    }
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        if (samples[i + 1].x < samples[i].x) {
            throw Error(ErrorCode::InvalidArgument, "samples must be sorted by x");
        }
    }
    const double lo = samples.front().x;
    const double hi = samples.back().x;
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::EmptySamples, "samples do not cover a finite interval");
    }

    BarrierProfile profile;
    const double width = (hi - lo) / n_bins;
    for (int j = 0; j < n_bins; ++j) {
        const double a = lo + j * width;
        const double b = (j + 1 == n_bins) ? hi : lo + (j + 1) * width;
        profile.bins.push_back({integrate_interpolant(samples, a, b) / (b - a), b - a});
    }
    return profile;
}

std::vector<DensitySample> sample_profile(const BarrierProfile& profile)
{
    std::vector<DensitySample> out;
    double x = 0.0;
    for (const auto& bin : profile.bins) {
        out.push_back({x, bin.q});
        x += bin.width;
        out.push_back({x, bin.q});
    }
    return out;
}

BarrierProfile default_double_barrier()
{
    BarrierProfile p;
    p.bins = {{1.0, 1.75}, {0.0, 4.0}, {1.0, 1.75}};
    return p;
}

}  // namespace wpscat
