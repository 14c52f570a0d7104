#include <doctest.h>

#include <cmath>
#include <random>

#include "check.hpp"
#include "oracles.hpp"
#include "wpscat/numerics.hpp"
#include "wpscat/spectrum.hpp"
#include "wpscat/transfer.hpp"

using namespace wpscat;

namespace {

// Wave vector of the R_pw zero of the default barrier near k0.
double resonance_near(double k0)
{
    const BarrierProfile p = default_double_barrier();
    double lo = k0 - 0.02;
    double hi = k0 + 0.02;
    for (int it = 0; it < 200; ++it) {
        const double a = lo + (hi - lo) / 3.0;
        const double b = hi - (hi - lo) / 3.0;
        if (plane_wave_amplitudes(p, a).reflectivity() < plane_wave_amplitudes(p, b).reflectivity()) {
            hi = b;
        } else {
            lo = a;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gamma normalization")
{
    CHECK(gamma_norm(0.025) == doctest::Approx(0.0011220).epsilon(1e-4));
    CHECK(gamma_norm(0.25) == doctest::Approx(0.011220).epsilon(1e-4));
    for (double dk : {0.025, 0.25, 1.0}) {
        const PacketSpec s{1.0, dk, 0.0, 0.0};
        CHECK(4.0 * oracle::pi * oracle::pi * gamma_norm(dk) * normalized_pdf(1.0, s) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(thrown_code([] { gamma_norm(0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("coherent reflectivity is bounded and inherits plane-wave zeros")
{
    const BarrierProfile p = default_double_barrier();
    const auto k = linspace(0.01, 2.5, 2000);
    for (double dk : {0.025, 0.25}) {
        for (double kbar : {0.25, 0.5, 0.75, 1.0, 1.25}) {
            const PacketSpec s{kbar, dk, 0.0, 0.0};
            const Spectrum r = reflectivity_coherent(p, s, k);
            CHECK_NOTHROW(r.validate());
            for (std::size_t i = 0; i < k.size(); ++i) {
                const double u = (k[i] - kbar) / dk;
                const double expected = std::exp(-u * u) * plane_wave_amplitudes(p, k[i]).reflectivity();
                CHECK(std::abs(r.values[i].real() - expected) < 1e-14);
            }
        }
    }
    for (double k0 : {0.5085, 0.999}) {
        const double kz = resonance_near(k0);
        const double z[] = {kz};
        const Spectrum r = reflectivity_coherent(p, PacketSpec{k0, 0.025, 0.0, 0.0}, z);
        CHECK(r.values[0].real() < 1e-12);
    }
}

TEST_CASE("asymptotic amplitudes")
{
    const BarrierProfile p = default_double_barrier();
    const PacketSpec a{1.0, 0.4, -15.0, 0.0};
    const PacketSpec b{1.0, 0.4, -40.0, 0.0};
    for (double k : {0.3, 0.8, 1.0, 1.6}) {
        CHECK(std::abs(reflection_amplitude_asymptotic(a, p, k)) ==
              doctest::Approx(std::abs(reflection_amplitude_asymptotic(b, p, k))).epsilon(1e-14));
    }
    CHECK(std::abs(reflection_amplitude_asymptotic(a, p, 1.0)) ==
          doctest::Approx(2.0 * oracle::pi * std::abs(plane_wave_amplitudes(p, 1.0).r)).epsilon(1e-14));
    CHECK(std::abs(reflection_amplitude_asymptotic(a, p, resonance_near(0.5085))) < 1e-5);
    CHECK(std::abs(reflection_amplitude_asymptotic(a, BarrierProfile{}, 1.2)) < 1e-15);
    const Complex free_t = transmission_amplitude_asymptotic(a, BarrierProfile{}, 1.2);
    const Complex expected = 2.0 * oracle::pi * std::polar(1.0, 1.2 * 15.0) * gaussian_weight(1.2, a);
    CHECK(std::abs(free_t - expected) < 1e-14);
    BarrierProfile wall;
    wall.q_backing = 4.0;
    CHECK(thrown_code([&] { transmission_amplitude_asymptotic(a, wall, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("timed reflection amplitude without a reflector stays small")
{
    const PacketSpec s{1.0, 0.2, -20.0, 0.0};
    const auto k = linspace(0.6, 1.4, 41);
    const Spectrum r = reflection_amplitude_timed(BarrierProfile{}, s, k, 30.0,
                                                  default_window(BarrierProfile{}, s, 30.0));
    CHECK(r.kind == SpectrumKind::r_t);
    REQUIRE(r.meta.t.has_value());
    for (const Complex& v : r.values) {
        CHECK(std::abs(v) < 1e-6);
    }
}

TEST_CASE("timed reflection amplitude approaches the asymptote for a single bin")
{
    BarrierProfile p;
    p.bins = {{0.5, 1.0}};
    const PacketSpec s{1.0, 0.2, -20.0, 0.0};
    const auto k = linspace(0.8, 1.2, 9);
    const double t = 40.0;
    const Spectrum r = reflection_amplitude_timed(p, s, k, t, default_window(p, s, t));
    double peak = 0.0;
    for (double ki : k) {
        peak = std::max(peak, std::abs(reflection_amplitude_asymptotic(s, p, ki)));
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
        CHECK(std::abs(r.values[i] - reflection_amplitude_asymptotic(s, p, k[i])) < 1e-3 * peak);
    }
    CHECK(std::abs(reflection_amplitude_timed(p, s, 1.0, t, default_window(p, s, t)) - r.values[4]) < 1e-12);
}

TEST_CASE("timed transmission amplitude converges to its asymptote")
{
    BarrierProfile p;
    p.bins = {{0.6, 1.5}};
    const PacketSpec s{1.0, 0.4, -15.0, 0.0};
    const double k[] = {s.kbar};
    const double t = 150.0;
    const Spectrum tt = transmission_amplitude_timed(p, s, k, t, default_window(p, s, t));
    const Complex asym = transmission_amplitude_asymptotic(s, p, s.kbar);
    CHECK(std::abs(tt.values[0] - asym) < 0.05 * std::abs(asym));
}

TEST_CASE("timed projection rejects a window that cuts the packet")
{
    const PacketSpec s{1.0, 0.2, -20.0, 0.0};
    const BarrierProfile p = default_double_barrier();
    const double k[] = {1.0};
    CHECK(thrown_code([&] { reflection_amplitude_timed(p, s, k, 10.0, XWindow{-25.0, 10.0}); }) ==
          ErrorCode::WindowTooSmall);
    const double bad[] = {0.0};
    CHECK(thrown_code([&] { reflection_amplitude_timed(p, s, bad, 10.0, default_window(p, s, 10.0)); }) ==
          ErrorCode::ZeroWaveVector);
}

TEST_CASE("instrument kernel")
{
    const ResolutionModel m{0.05, false};
    CHECK(instrument_kernel(0.0, m) == 1.0);
    CHECK(instrument_kernel(0.05, m) == doctest::Approx(std::exp(-1.0)));
    CHECK(instrument_kernel(-0.031, m) == instrument_kernel(0.031, m));
    CHECK(thrown_code([] { instrument_kernel(0.1, ResolutionModel{0.0, false}); }) == ErrorCode::ZeroWidth);
    const ResolutionModel n{0.05, true};
    const auto e = linspace(-0.5, 0.5, 2001);
    const auto w = trapezoid_weights(e);
    double total = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        total += w[i] * instrument_kernel(e[i], n);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("resolution convolution of a constant")
{
    Spectrum c;
    c.kind = SpectrumKind::R_coh;
    c.k_values = linspace(0.01, 3.0, 3001);
    c.values.assign(c.k_values.size(), Complex(0.3));
    const ResolutionModel m{0.05, false};
    const double km[] = {1.0, 1.5, 2.0};
    const Spectrum r = resolution_convolve(c, m, km);
    CHECK(r.kind == SpectrumKind::R_meas);
    REQUIRE(r.meta.dk_inst.has_value());
    for (const Complex& v : r.values) {
        CHECK(v.real() == doctest::Approx(0.3 * std::sqrt(oracle::pi) * 0.05).epsilon(1e-6));
    }
}

TEST_CASE("resolution convolution is linear")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    Spectrum a;
    Spectrum b;
    a.k_values = b.k_values = linspace(0.01, 2.0, 801);
    for (std::size_t i = 0; i < a.k_values.size(); ++i) {
        a.values.emplace_back(u(rng));
        b.values.emplace_back(u(rng));
    }
    Spectrum sum = a;
    for (std::size_t i = 0; i < sum.values.size(); ++i) {
        sum.values[i] = 2.0 * a.values[i] + 3.0 * b.values[i];
    }
    const ResolutionModel m{0.05, true};
    const auto km = linspace(0.2, 1.8, 33);
    const Spectrum ra = resolution_convolve(a, m, km);
    const Spectrum rb = resolution_convolve(b, m, km);
    const Spectrum rs = resolution_convolve(sum, m, km);
    for (std::size_t i = 0; i < km.size(); ++i) {
        CHECK(std::abs(rs.values[i] - (2.0 * ra.values[i] + 3.0 * rb.values[i])) < 1e-13);
    }
}

TEST_CASE("resolution convolution approaches the coherent spectrum as the width shrinks")
{
    const BarrierProfile p = default_double_barrier();
    const PacketSpec s{1.0, 0.25, 0.0, 0.0};
    const Spectrum rc = reflectivity_coherent(p, s, linspace(0.01, 2.5, 24901));
    const auto km = linspace(0.6, 1.4, 17);
    double previous = 1.0;
    // Gaussian smoothing error falls like dk_inst^2.
    for (double w : {0.04, 0.02, 0.01, 0.005, 0.0025}) {
        const Spectrum rm = resolution_convolve(rc, ResolutionModel{w, true}, km);
        double worst = 0.0;
        for (std::size_t i = 0; i < km.size(); ++i) {
            const double direct = reflectivity_coherent(p, s, std::span<const double>(&km[i], 1)).values[0].real();
            worst = std::max(worst, std::abs(rm.values[i].real() - direct));
        }
        CHECK(worst < previous / 3.0);
        previous = worst;
    }
    CHECK(previous < 1e-3);
    const Spectrum exact = resolution_convolve(rc, ResolutionModel{0.0, false}, km);
    for (std::size_t i = 0; i < km.size(); ++i) {
        const double direct = reflectivity_coherent(p, s, std::span<const double>(&km[i], 1)).values[0].real();
        CHECK(std::abs(exact.values[i].real() - direct) < 1e-6);
    }
}

TEST_CASE("instrument resolution fills reflectivity zeros")
{
    const BarrierProfile p = default_double_barrier();
    const auto k = linspace(0.01, 2.0, 4000);
    for (double k0 : {0.5085, 0.999}) {
        const double kz = resonance_near(k0);
        const PacketSpec s{k0, 0.025, 0.0, 0.0};
        const Spectrum rc = reflectivity_coherent(p, s, k);
        const double z[] = {kz};
        CHECK(reflectivity_coherent(p, s, z).values[0].real() < 1e-12);
        const Spectrum rm = resolution_convolve(rc, ResolutionModel{0.05, false}, z);
        CHECK(rm.values[0].real() > 1e-6);
    }
}

TEST_CASE("resolution convolution guards its grid")
{
    Spectrum c;
    c.k_values = linspace(0.1, 2.0, 20);
    c.values.assign(20, Complex(0.5));
    const double km[] = {1.0};
    CHECK(thrown_code([&] { resolution_convolve(c, ResolutionModel{0.05, false}, km); }) == ErrorCode::GridTooCoarse);
    const double outside[] = {2.5};
    CHECK(thrown_code([&] { resolution_convolve(c, ResolutionModel{0.0, false}, outside); }) == ErrorCode::OutOfRange);
}

TEST_CASE("spectrum validation")
{
    Spectrum s;
    s.kind = SpectrumKind::R_pw;
    s.k_values = {0.1, 0.2};
    s.values = {Complex(0.5), Complex(1.2)};
    CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvariantViolation);
    s.values[1] = 0.9;
    CHECK_NOTHROW(s.validate());
    s.k_values = {0.2, 0.1};
    CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    const BarrierProfile p = default_double_barrier();
    const auto k = linspace(0.05, 3.0, 300);
    const Spectrum r = reflectivity_planewave(p, k);
    const Spectrum t = transmissivity_planewave(p, k);
    for (std::size_t i = 0; i < k.size(); ++i) {
        CHECK(r.values[i].real() + t.values[i].real() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("late-time amplitude is within 2% of the asymptote near kbar")
{
    const BarrierProfile p = default_double_barrier();
    const PacketSpec s{1.0, 0.4, -15.0, 0.0};
    const auto ks = linspace(0.2, 1.8, 161);
    const double t = 500.0;
    const Spectrum r = reflection_amplitude_timed(p, s, ks, t, default_window(p, s, t));
    double scale = 0.0;
    std::vector<double> asym;
    for (double k : ks) {
        asym.push_back(std::abs(reflection_amplitude_asymptotic(s, p, k)));
        scale = std::max(scale, asym.back());
    }
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (std::abs(ks[i] - s.kbar) <= s.dk) {
            CHECK(std::abs(std::abs(r.values[i]) - asym[i]) < 0.02 * scale);
        }
    }
}
