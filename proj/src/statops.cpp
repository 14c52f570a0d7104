#include "wpscat/statops.hpp"

#include <cmath>
#include <string>

#include "wpscat/error.hpp"

namespace wpscat {

DiscreteState::DiscreteState(std::vector<std::complex<double>> coefficients, std::vector<double> energies)
    : c_(std::move(coefficients)), e_(std::move(energies))
{
    if (c_.empty() || c_.size() != e_.size()) {
        throw Error(ErrorCode::InvalidArgument, "need one energy per coefficient");
    }
    double norm = 0.0;
    for (const auto& c : c_) {
        norm += std::norm(c);
    }
    if (std::abs(norm - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "coefficients have norm " + std::to_string(norm));
    }
    for (std::size_t n = 0; n < e_.size(); ++n) {
        if (!std::isfinite(e_[n])) {
            throw Error(ErrorCode::InvalidArgument, "energy is not finite", n);
        }
        for (std::size_t m = 0; m < n; ++m) {
            if (e_[n] == e_[m]) {
                throw Error(ErrorCode::InvalidArgument,
                            "degenerate energies at " + std::to_string(m) + " and " + std::to_string(n), n);
            }
        }
    }
}

double sinc(double x)
{
    if (std::abs(x) < 1e-8) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

Eigen::MatrixXcd density_at(const DiscreteState& state, double t)
{
    const auto& c = state.coefficients();
    const auto& e = state.energies();
    const auto n = static_cast<Eigen::Index>(state.size());
    Eigen::VectorXcd psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        psi(i) = c[i] * std::polar(1.0, -e[i] * t);
    }
    return psi * psi.adjoint();
}

Eigen::MatrixXcd time_averaged_density(const DiscreteState& state, double T)
{
    if (!(T > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "averaging time must be positive");
    }
    const auto& c = state.coefficients();
    const auto& e = state.energies();
    const auto n = static_cast<Eigen::Index>(state.size());
    Eigen::MatrixXcd rho(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            rho(i, j) = c[i] * std::conj(c[j]) * sinc((e[i] - e[j]) * T / 2.0);
        }
    }
    return rho;
}

Eigen::MatrixXcd infinite_time_density(const DiscreteState& state)
{
    const auto& c = state.coefficients();
    const auto n = static_cast<Eigen::Index>(state.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rho(i, i) = std::norm(c[i]);
    }
    return rho;
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

}  // namespace wpscat
