#include "wpscat/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wpscat/error.hpp"

namespace wpscat {

namespace {

constexpr Complex kI{0.0, 1.0};

// |n k w| below this uses the truncated series; s = (n k w)^2.
constexpr double kSeriesThreshold = 1e-12;

void require_positive_k(double k)
{
    if (!(k > 0.0)) {
        throw Error(ErrorCode::ZeroWaveVector, "wave vector must be positive, got " + std::to_string(k));
    }
}

}  // namespace

double TransferMatrix::det() const
{
    const double bc = b * c;
    const double err = std::fma(-b, c, bc);
    return std::fma(a, d, -bc) + err;
}

TransferMatrix operator*(const TransferMatrix& l, const TransferMatrix& r)
{
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
            l.c * r.b + l.d * r.d};
}

PhaseSpaceState operator*(const TransferMatrix& m, const PhaseSpaceState& chi)
{
    return {m.a * chi.psi + m.b * chi.dpsi_over_k, m.c * chi.psi + m.d * chi.dpsi_over_k};
}

TransferMatrix bin_matrix(double q, double width, double k)
{
    require_positive_k(k);
    if (!(width >= 0.0)) {
        throw Error(ErrorCode::NonPositiveWidth, "bin width must be >= 0");
    }
    // cos(z) and sin(z)/z with z = n k w, written in terms of s = z^2 (real).
    const double s = (k * k - q) * width * width;
    double cos_term = 1.0;
    double sinc_term = 1.0;
    if (std::abs(s) < kSeriesThreshold) {
        cos_term = 1.0 - 0.5 * s;
        sinc_term = 1.0 - s / 6.0;
    } else if (s > 0.0) {
        const double z = std::sqrt(s);
        cos_term = std::cos(z);
        sinc_term = std::sin(z) / z;
    } else {
        const double z = std::sqrt(-s);
        cos_term = std::cosh(z);
        sinc_term = std::sinh(z) / z;
    }
    return {cos_term, k * width * sinc_term, (q / k - k) * width * sinc_term, cos_term};
}

TransferMatrix compose(const BarrierProfile& profile, double k)
{
    require_positive_k(k);
    TransferMatrix m;
    for (const auto& bin : profile.bins) {
        m = bin_matrix(bin.q, bin.width, k) * m;
    }
    return m;
}

TransferMatrix partial_matrix(const BarrierProfile& profile, double k, double x)
{
    require_positive_k(k);
    const double length = profile.length();
    if (x < 0.0 || x > length) {
        throw Error(ErrorCode::OutOfRange,
                    "position " + std::to_string(x) + " outside [0, " + std::to_string(length) + "]");
    }
    TransferMatrix m;
    double left = 0.0;
    for (const auto& bin : profile.bins) {
        const double right = left + bin.width;
        if (x >= right) {
            m = bin_matrix(bin.q, bin.width, k) * m;
            left = right;
            continue;
        }
        return bin_matrix(bin.q, x - left, k) * m;
    }
    return m;
}

double PlaneWaveSolution::flux_residual() const
{
    return std::norm(r) + (b.real() / f.real()) * std::norm(t) - 1.0;
}

PlaneWaveSolution plane_wave_amplitudes(const BarrierProfile& profile, double k)
{
    require_positive_k(k);
    const Complex f = refractive_index(profile.q_fronting, k);
    if (f.imag() != 0.0 || f.real() == 0.0) {
        throw Error(ErrorCode::EvanescentFronting,
                    "k^2 <= q_fronting at k = " + std::to_string(k));
    }
    const Complex b = refractive_index(profile.q_backing, k);
    const TransferMatrix m = compose(profile, k);
    const double length = profile.length();

    PlaneWaveSolution sol;
    sol.k = k;
    sol.f = f;
    sol.b = b;
    sol.propagating_backing = b.imag() == 0.0 && b.real() > 0.0;

    const Complex den = f * b * m.b - m.c + kI * (f * m.d + b * m.a);
    sol.r = (f * b * m.b + m.c + kI * (f * m.d - b * m.a)) / den;
    sol.t = 2.0 * kI * f * std::exp(-kI * b * k * length) / den;

    if (sol.propagating_backing) {
        const double fr = f.real();
        const double br = b.real();
        sol.alpha = (br * m.a * m.a + m.c * m.c / br) / fr;
        sol.beta = fr * (br * m.b * m.b + m.d * m.d / br);
        sol.gamma = br * m.a * m.b + m.c * m.d / br;
        sol.sigma_sum = sol.alpha + sol.beta;
        const double ab = sol.alpha * sol.beta;
        if (std::abs(sol.gamma * sol.gamma - (ab - 1.0)) > 1e-10 * (1.0 + ab)) {
            throw Error(ErrorCode::InvariantViolation,
                        "gamma^2 != alpha*beta - 1 at k = " + std::to_string(k));
        }
    } else {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        sol.alpha = sol.beta = sol.gamma = sol.sigma_sum = nan;
    }
    return sol;
}

double reflectivity_via_norm(const BarrierProfile& profile, double k)
{
    require_positive_k(k);
    const Complex f = refractive_index(profile.q_fronting, k);
    if (f.imag() != 0.0 || f.real() == 0.0) {
        throw Error(ErrorCode::EvanescentFronting,
                    "k^2 <= q_fronting at k = " + std::to_string(k));
    }
    const Complex b = refractive_index(profile.q_backing, k);
    if (b.imag() != 0.0 || b.real() == 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "Hilbert-Schmidt reflectivity needs propagating backing at k = " +
                        std::to_string(k));
    }
    const TransferMatrix m = compose(profile, k);
    const double sf = std::sqrt(f.real());
    const double sb = std::sqrt(b.real());
    const TransferMatrix scaled{sb * m.a / sf, sb * m.b * sf, m.c / (sb * sf), m.d * sf / sb};
    const double hs2 = scaled.a * scaled.a + scaled.b * scaled.b + scaled.c * scaled.c +
                       scaled.d * scaled.d;
    return (hs2 - 2.0) / (hs2 + 2.0);
}

StationaryState::StationaryState(const BarrierProfile& profile, double k)
    : bins_(profile.bins), solution_(plane_wave_amplitudes(profile, k)), edges_(profile.edges())
{
    edge_states_.reserve(edges_.size());
    PhaseSpaceState chi{1.0 + solution_.r, kI * solution_.f * (1.0 - solution_.r)};
    edge_states_.push_back(chi);
    for (const auto& bin : bins_) {
        chi = bin_matrix(bin.q, bin.width, k) * chi;
        edge_states_.push_back(chi);
    }
}

Complex StationaryState::inside(double x) const
{
    // Last edge not greater than x; x == L maps to the final edge state.
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    std::size_t j = static_cast<std::size_t>(std::distance(edges_.begin(), it));
    j = std::clamp<std::size_t>(j, 1, edges_.size()) - 1;
    if (j >= bins_.size()) {
        return edge_states_.back().psi;
    }
    const double offset = x - edges_[j];
    return (bin_matrix(bins_[j].q, offset, solution_.k) * edge_states_[j]).psi;
}

Complex StationaryState::operator()(double x) const
{
    const double k = solution_.k;
    if (x < 0.0) {
        const Complex phase = kI * solution_.f * k * x;
        return std::exp(phase) + solution_.r * std::exp(-phase);
    }
    if (x > edges_.back()) {
        return solution_.t * std::exp(kI * solution_.b * k * x);
    }
    return inside(x);
}

Complex psi_stationary(const BarrierProfile& profile, double k, double x)
{
    return StationaryState(profile, k)(x);
}

}  // namespace wpscat
