#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "check.hpp"
#include "wpscat/statops.hpp"

using namespace wpscat;
using C = std::complex<double>;

namespace {

DiscreteState random_state(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> g;
    std::vector<C> c;
    std::vector<double> e;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        c.emplace_back(g(rng), g(rng));
        norm += std::norm(c.back());
        e.push_back(0.7 * i + 0.1 * g(rng));
    }
    for (auto& v : c) {
        v /= std::sqrt(norm);
    }
    return {c, e};
}

}  // namespace

TEST_CASE("state construction rejects bad input")
{
    CHECK(thrown_code([] { DiscreteState({C(1.0)}, {0.0, 1.0}); }) == ErrorCode::InvalidArgument);
    CHECK(thrown_code([] { DiscreteState({C(0.5), C(0.5)}, {0.0, 1.0}); }) == ErrorCode::InvalidArgument);
    const double h = std::sqrt(0.5);
    CHECK(thrown_code([&] { DiscreteState({C(h), C(h)}, {1.0, 1.0}); }) == ErrorCode::InvalidArgument);
    CHECK_NOTHROW(DiscreteState({C(h), C(0.0, h)}, {1.0, 2.0}));
}

TEST_CASE("pure-state density matrices")
{
    const DiscreteState basis({C(1.0), C(0.0), C(0.0)}, {0.0, 1.0, 2.0});
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3, 3);
    expected(0, 0) = 1.0;
    CHECK((density_at(basis, 3.7) - expected).norm() < 1e-15);

    const double h = std::sqrt(0.5);
    const DiscreteState even({C(h), C(h)}, {0.0, 1.0});
    const Eigen::MatrixXcd r0 = density_at(even, 0.0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(r0(i, j) - 0.5) < 1e-15);
        }
    }

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const DiscreteState s = random_state(rng, 6);
        const Eigen::MatrixXcd rho = density_at(s, 0.37 * trial);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK((rho * rho - rho).norm() < 1e-12);
        CHECK(std::abs(purity(rho) - 1.0) < 1e-12);
        CHECK((rho - rho.adjoint()).norm() < 1e-15);
    }
}

TEST_CASE("time averaging scales coherences by sinc")
{
    std::mt19937_64 rng(4);
    const DiscreteState s = random_state(rng, 5);
    const Eigen::MatrixXcd rho0 = density_at(s, 0.0);
    for (double T : {0.1, 1.0, 7.5, 100.0}) {
        const Eigen::MatrixXcd avg = time_averaged_density(s, T);
        CHECK(std::abs(avg.trace() - 1.0) < 1e-12);
        CHECK((avg - avg.adjoint()).norm() < 1e-15);
        for (int n = 0; n < 5; ++n) {
            CHECK(std::abs(avg(n, n) - std::norm(s.coefficients()[n])) < 1e-15);
            for (int m = 0; m < 5; ++m) {
                const double d = s.energies()[n] - s.energies()[m];
                CHECK(std::abs(avg(n, m) - rho0(n, m) * sinc(d * T / 2.0)) < 1e-15);
            }
        }
    }
    // Brute-force average over [-T/2, T/2] by the midpoint rule.
    const double T = 3.0;
    const int steps = 20000;
    Eigen::MatrixXcd brute = Eigen::MatrixXcd::Zero(5, 5);
    for (int i = 0; i < steps; ++i) {
        brute += density_at(s, -T / 2.0 + (i + 0.5) * T / steps);
    }
    brute /= steps;
    CHECK((brute - time_averaged_density(s, T)).norm() < 1e-7);
}

TEST_CASE("sinc zero removes the coherence")
{
    const double h = std::sqrt(0.5);
    const DiscreteState s({C(h), C(h)}, {0.0, 2.0});
    // Delta T / 2 = pi.
    const Eigen::MatrixXcd avg = time_averaged_density(s, std::numbers::pi);
    CHECK(std::abs(avg(0, 1)) < 1e-16);
    CHECK(thrown_code([&] { time_averaged_density(s, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("long averages become the energy-diagonal mixture")
{
    std::mt19937_64 rng(5);
    const DiscreteState s = random_state(rng, 4);
    const Eigen::MatrixXcd limit = infinite_time_density(s);
    const Eigen::MatrixXcd avg = time_averaged_density(s, 1e8);
    double off = 0.0;
    for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 4; ++m) {
            if (n != m) {
                off = std::max(off, std::abs(avg(n, m)));
            }
        }
    }
    CHECK(off < 1e-6);
    CHECK((avg - limit).norm() < 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(limit);
    std::vector<double> p;
    for (const auto& c : s.coefficients()) {
        p.push_back(std::norm(c));
    }
    std::sort(p.begin(), p.end());
    for (int i = 0; i < 4; ++i) {
        CHECK(eig.eigenvalues()(i) == doctest::Approx(p[i]).epsilon(1e-14));
    }
}

TEST_CASE("purity along full-period averaging times")
{
    // Equally spaced levels: every coherence vanishes at T = 2 pi m / gap.
    const DiscreteState ladder({C(0.6), C(0.0, 0.64), C(-0.48)}, {0.0, 1.5, 3.0});
    double mixed = 0.0;
    for (const auto& c : ladder.coefficients()) {
        mixed += std::norm(c) * std::norm(c);
    }
    double previous = 1.0 + 1e-12;
    for (int m = 1; m <= 20; ++m) {
        const double p = purity(time_averaged_density(ladder, 2.0 * std::numbers::pi * m / 1.5));
        CHECK(p <= previous + 1e-12);
        CHECK(p == doctest::Approx(mixed).epsilon(1e-12));
        previous = p;
    }

    // Generic levels: the excess purity stays under a bound that decays as 1/T^2.
    std::mt19937_64 rng(6);
    const DiscreteState s = random_state(rng, 4);
    double floor_purity = 0.0;
    for (const auto& c : s.coefficients()) {
        floor_purity += std::norm(c) * std::norm(c);
    }
    double min_gap = 1e300;
    for (std::size_t n = 0; n < s.size(); ++n) {
        for (std::size_t m = 0; m < n; ++m) {
            min_gap = std::min(min_gap, std::abs(s.energies()[n] - s.energies()[m]));
        }
    }
    for (int m = 1; m <= 40; ++m) {
        const double T = 2.0 * std::numbers::pi * m / min_gap;
        double bound = 0.0;
        for (std::size_t n = 0; n < s.size(); ++n) {
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (n != k) {
                    const double d = s.energies()[n] - s.energies()[k];
                    bound += std::norm(s.coefficients()[n]) * std::norm(s.coefficients()[k]) * 4.0 / (d * d * T * T);
                }
            }
        }
        const double p = purity(time_averaged_density(s, T));
        CHECK(p >= floor_purity - 1e-14);
        CHECK(p - floor_purity <= bound + 1e-14);
    }
}
