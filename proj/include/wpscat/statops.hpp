#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace wpscat {

/// Pure state sum_n c_n exp(-i E_n t) |phi_n> in a finite energy basis.
class DiscreteState {
public:
    /// Throws InvalidArgument for mismatched sizes, sum |c_n|^2 != 1 (1e-12)
    /// or repeated energies.
    DiscreteState(std::vector<std::complex<double>> coefficients, std::vector<double> energies);

    const std::vector<std::complex<double>>& coefficients() const { return c_; }
    const std::vector<double>& energies() const { return e_; }
    std::size_t size() const { return c_.size(); }

private:
    std::vector<std::complex<double>> c_;
    std::vector<double> e_;
};

/// rho_nm(t) = c_n conj(c_m) exp(-i (E_n - E_m) t).
Eigen::MatrixXcd density_at(const DiscreteState& state, double t);

/// Average of rho(t) over t in [-T/2, T/2]:
/// rho_nm = c_n conj(c_m) sinc((E_n - E_m) T / 2).
Eigen::MatrixXcd time_averaged_density(const DiscreteState& state, double T);

/// The T -> infinity limit diag(|c_n|^2).
Eigen::MatrixXcd infinite_time_density(const DiscreteState& state);

/// sin(x) / x with sinc(0) = 1.
double sinc(double x);

/// trace(rho^2).
double purity(const Eigen::MatrixXcd& rho);

}  // namespace wpscat
