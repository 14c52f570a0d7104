#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wpscat/barrier.hpp"
#include "wpscat/io.hpp"
#include "wpscat/oracle.hpp"
#include "wpscat/packet.hpp"
#include "wpscat/spectrum.hpp"

namespace wpscat::cli {

struct StatopsConfig {
    std::vector<std::complex<double>> coefficients;
    std::vector<double> energies;
    std::vector<double> windows;
};

/// Parsed run configuration. The schema is documented in docs/config.md.
struct RunConfig {
    BarrierProfile barrier;

    std::vector<double> kbars;
    double dk = 0.1;
    double x0 = 0.0;
    double t0 = 0.0;

    double k_min = 0.005;
    double k_max = 2.0;
    std::size_t k_count = 400;
    /// Packet quadrature nodes; 0 picks a count from the position extent.
    std::size_t k_nodes = 0;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::optional<double> dx;
    std::optional<double> dt;
    Boundary boundary = Boundary::HardWall;
    double absorbing_width = 0.1;
    double absorbing_strength = 1.0;

    std::vector<double> times;
    std::optional<ResolutionModel> resolution;

    std::filesystem::path out_dir = "out";
    Format format = Format::Csv;

    StatopsConfig statops;

    PacketSpec packet(double kbar) const { return {kbar, dk, x0, t0}; }
    std::vector<double> k_values() const;
};

/// Throws Error(ConfigError) with "<source>:<line>:<column>: <field>: <problem>".
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace wpscat::cli
