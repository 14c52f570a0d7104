#pragma once

#include <complex>
#include <vector>

#include "wpscat/barrier.hpp"

namespace wpscat {

/// Real 2x2 transfer matrix acting on the phase-space state (psi, psi'/k).
/// Every matrix produced here is unimodular.
struct TransferMatrix {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    static TransferMatrix identity() { return {}; }
    /// a d - b c with a fused correction term (Kahan).
    double det() const;
};

TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs);

/// (psi, psi'/k) at one position.
struct PhaseSpaceState {
    Complex psi;
    Complex dpsi_over_k;
};

PhaseSpaceState operator*(const TransferMatrix& m, const PhaseSpaceState& chi);

/// Matrix of a single slab of density q and the given width:
///   [[cos(nkw), sin(nkw)/n], [-n sin(nkw), cos(nkw)]]
/// Evaluated through s = (k^2 - q) w^2 so the entries stay real on both
/// sides of the critical wave vector.
TransferMatrix bin_matrix(double q, double width, double k);

/// M(L) = M_J ... M_2 M_1; identity for an empty profile.
TransferMatrix compose(const BarrierProfile& profile, double k);

/// M(x) for 0 <= x <= L: completed bins left of x times a partial-width
/// matrix for the bin containing x. Throws OutOfRange otherwise.
TransferMatrix partial_matrix(const BarrierProfile& profile, double k, double x);

struct PlaneWaveSolution {
    double k = 0.0;
    Complex r;
    Complex t;
    Complex f;  // fronting index (always real here)
    Complex b;  // backing index; imaginary below the backing critical k
    bool propagating_backing = true;
    // Diagnostics from the scaled matrix; NaN when the backing is evanescent.
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double sigma_sum = 0.0;

    double reflectivity() const { return std::norm(r); }
    double transmissivity() const { return std::norm(t); }
    /// R + (b/f) T - 1; zero up to rounding for propagating backing.
    double flux_residual() const;
};

/// Plane-wave r and t with incident phase 1 at x = 0. Throws
/// EvanescentFronting if k^2 <= q_fronting.
PlaneWaveSolution plane_wave_amplitudes(const BarrierProfile& profile, double k);

/// R from the Hilbert-Schmidt norm of the f/b-scaled transfer matrix:
/// R = (Sigma - 2) / (Sigma + 2). Requires propagating fronting and backing.
double reflectivity_via_norm(const BarrierProfile& profile, double k);

/// Stationary scattering state for one k, with the transfer state cached at
/// every bin edge so that psi(x) costs one bin matrix per evaluation.
class StationaryState {
public:
    StationaryState(const BarrierProfile& profile, double k);

    Complex operator()(double x) const;

    const PlaneWaveSolution& amplitudes() const { return solution_; }
    double k() const { return solution_.k; }
    double length() const { return edges_.back(); }
    /// psi on the barrier region only; x must lie in [0, L].
    Complex inside(double x) const;

private:
    std::vector<Bin> bins_;
    PlaneWaveSolution solution_;
    std::vector<double> edges_;
    std::vector<PhaseSpaceState> edge_states_;
};

/// psi(k, x) on the whole axis:
///   x < 0:  exp(i f k x) + r exp(-i f k x)
///   x > L:  t exp(i b k x)
///   else:   first component of M(x) chi_I(0), chi_I(0) = (1 + r, i f (1 - r)).
Complex psi_stationary(const BarrierProfile& profile, double k, double x);

}  // namespace wpscat
