#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace wpscat::cli {

struct CommandOptions {
    std::filesystem::path out_dir;
    Format format = Format::Csv;
    bool oracle = false;
};

/// Collected invariant failures. Each entry starts with the invariant name.
class Audit {
public:
    void check(bool ok, const std::string& invariant, const std::string& detail);
    bool passed() const { return failures_.empty(); }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    std::vector<std::string> failures_;
};

/// Exit codes: 0 success, 1 configuration or numerical error, 2 audit failure.
inline constexpr int kExitAuditFailure = 2;

Audit cmd_planewave(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
Audit cmd_snapshot(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
Audit cmd_reflectivity(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
Audit cmd_convergence(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
Audit cmd_statops_demo(const RunConfig& cfg, std::ostream& out);

/// "%g" rendering used in output file names.
std::string short_number(double v);

}  // namespace wpscat::cli
