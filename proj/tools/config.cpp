#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

#include "wpscat/error.hpp"
#include "wpscat/numerics.hpp"

namespace wpscat::cli {

namespace {

class Parser {
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& problem) const
    {
        std::ostringstream msg;
        msg << source_;
        const YAML::Mark mark = node.Mark();
        if (mark.line >= 0) {
            msg << ':' << mark.line + 1 << ':' << mark.column + 1;
        }
        msg << ": " << field << ": " << problem;
        throw Error(ErrorCode::ConfigError, msg.str());
    }

    void check_keys(const YAML::Node& block, const std::string& name, const std::set<std::string>& allowed) const
    {
        if (!block.IsMap()) {
            fail(block, name, "expected a mapping");
        }
        for (const auto& kv : block) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) {
                fail(kv.first, name + "." + key, "unknown key");
            }
        }
    }

    double number(const YAML::Node& node, const std::string& field) const
    {
        if (!node.IsScalar()) {
            fail(node, field, "expected a number");
        }
        double v = 0.0;
        try {
            v = node.as<double>();
        } catch (const YAML::Exception&) {
            fail(node, field, "expected a number, got '" + node.Scalar() + "'");
        }
        if (!std::isfinite(v)) {
            fail(node, field, "must be finite");
        }
        return v;
    }

    double positive(const YAML::Node& node, const std::string& field) const
    {
        const double v = number(node, field);
        if (!(v > 0.0)) {
            fail(node, field, "must be positive");
        }
        return v;
    }

    std::size_t count(const YAML::Node& node, const std::string& field) const
    {
        const double v = number(node, field);
        if (v < 0.0 || v != std::floor(v)) {
            fail(node, field, "expected a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }

    bool boolean(const YAML::Node& node, const std::string& field) const
    {
        try {
            return node.as<bool>();
        } catch (const YAML::Exception&) {
            fail(node, field, "expected true or false");
        }
    }

    std::string text(const YAML::Node& node, const std::string& field) const
    {
        if (!node.IsScalar()) {
            fail(node, field, "expected a string");
        }
        return node.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& node, const std::string& field) const
    {
        std::vector<double> out;
        if (node.IsScalar()) {
            out.push_back(number(node, field));
        } else if (node.IsSequence()) {
            for (std::size_t i = 0; i < node.size(); ++i) {
                out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
            }
        } else {
            fail(node, field, "expected a number or a list of numbers");
        }
        return out;
    }

    std::complex<double> complex_number(const YAML::Node& node, const std::string& field) const
    {
        if (node.IsScalar()) {
            return number(node, field);
        }
        if (node.IsSequence() && node.size() == 2) {
            return {number(node[0], field + "[0]"), number(node[1], field + "[1]")};
        }
        fail(node, field, "expected a number or a [re, im] pair");
    }

private:
    std::string source_;
};

void parse_barrier(const Parser& p, const YAML::Node& node, RunConfig& cfg)
{
    p.check_keys(node, "barrier", {"preset", "bins", "q_fronting", "q_backing"});
    if (node["preset"] && node["bins"]) {
        p.fail(node, "barrier", "give either preset or bins, not both");
    }
    if (const auto preset = node["preset"]) {
        const std::string name = p.text(preset, "barrier.preset");
        if (name == "default") {
            cfg.barrier = default_double_barrier();
        } else if (name == "empty") {
            cfg.barrier = {};
        } else {
            p.fail(preset, "barrier.preset", "unknown preset '" + name + "' (default, empty)");
        }
    }
    if (const auto bins = node["bins"]) {
        if (!bins.IsSequence()) {
            p.fail(bins, "barrier.bins", "expected a list of {q, width}");
        }
        cfg.barrier.bins.clear();
        for (std::size_t i = 0; i < bins.size(); ++i) {
            const std::string field = "barrier.bins[" + std::to_string(i) + "]";
            p.check_keys(bins[i], field, {"q", "width"});
            if (!bins[i]["q"] || !bins[i]["width"]) {
                p.fail(bins[i], field, "needs both q and width");
            }
            cfg.barrier.bins.push_back({p.number(bins[i]["q"], field + ".q"), p.number(bins[i]["width"], field + ".width")});
        }
    }
    if (node["q_fronting"]) {
        cfg.barrier.q_fronting = p.number(node["q_fronting"], "barrier.q_fronting");
    }
    if (node["q_backing"]) {
        cfg.barrier.q_backing = p.number(node["q_backing"], "barrier.q_backing");
    }
    try {
        validate(cfg.barrier);
    } catch (const Error& e) {
        if (e.index() && node["bins"] && *e.index() < node["bins"].size()) {
            p.fail(node["bins"][*e.index()], "barrier.bins[" + std::to_string(*e.index()) + "]", e.what());
        }
        p.fail(node, "barrier", e.what());
    }
}

void parse_packet(const Parser& p, const YAML::Node& node, RunConfig& cfg)
{
    p.check_keys(node, "packet", {"kbar", "dk", "x0", "t0"});
    if (!node["kbar"] || !node["dk"]) {
        p.fail(node, "packet", "kbar and dk are required");
    }
    cfg.kbars = p.numbers(node["kbar"], "packet.kbar");
    if (cfg.kbars.empty()) {
        p.fail(node["kbar"], "packet.kbar", "needs at least one value");
    }
    cfg.dk = p.positive(node["dk"], "packet.dk");
    if (node["x0"]) {
        cfg.x0 = p.number(node["x0"], "packet.x0");
    }
    if (node["t0"]) {
        cfg.t0 = p.number(node["t0"], "packet.t0");
    }
    for (std::size_t i = 0; i < cfg.kbars.size(); ++i) {
        try {
            validate(cfg.packet(cfg.kbars[i]));
        } catch (const Error& e) {
            p.fail(node["kbar"], "packet.kbar", e.what());
        }
    }
}

void parse_grids(const Parser& p, const YAML::Node& node, RunConfig& cfg)
{
    p.check_keys(node, "grids", {"k_min", "k_max", "k_count", "k_nodes", "x_min", "x_max", "dx", "dt", "boundary",
                                 "absorbing_width", "absorbing_strength"});
    if (node["k_min"]) {
        cfg.k_min = p.positive(node["k_min"], "grids.k_min");
    }
    if (node["k_max"]) {
        cfg.k_max = p.positive(node["k_max"], "grids.k_max");
    }
    if (!(cfg.k_max > cfg.k_min)) {
        p.fail(node, "grids.k_max", "must exceed k_min");
    }
    if (node["k_count"]) {
        cfg.k_count = p.count(node["k_count"], "grids.k_count");
        if (cfg.k_count < 2) {
            p.fail(node["k_count"], "grids.k_count", "needs at least 2 points");
        }
    }
    if (node["k_nodes"]) {
        cfg.k_nodes = p.count(node["k_nodes"], "grids.k_nodes");
    }
    if (node["x_min"]) {
        cfg.x_min = p.number(node["x_min"], "grids.x_min");
    }
    if (node["x_max"]) {
        cfg.x_max = p.number(node["x_max"], "grids.x_max");
    }
    if (cfg.x_min.has_value() != cfg.x_max.has_value()) {
        p.fail(node, "grids", "x_min and x_max go together");
    }
    if (cfg.x_min && !(*cfg.x_max > *cfg.x_min)) {
        p.fail(node["x_max"], "grids.x_max", "must exceed x_min");
    }
    if (node["dx"]) {
        cfg.dx = p.positive(node["dx"], "grids.dx");
    }
    if (node["dt"]) {
        cfg.dt = p.positive(node["dt"], "grids.dt");
    }
    if (node["boundary"]) {
        const std::string b = p.text(node["boundary"], "grids.boundary");
        if (b == "hard_wall") {
            cfg.boundary = Boundary::HardWall;
        } else if (b == "absorbing") {
            cfg.boundary = Boundary::AbsorbingLayer;
        } else {
            p.fail(node["boundary"], "grids.boundary", "expected hard_wall or absorbing");
        }
    }
    if (node["absorbing_width"]) {
        cfg.absorbing_width = p.positive(node["absorbing_width"], "grids.absorbing_width");
        if (cfg.absorbing_width >= 0.5) {
            p.fail(node["absorbing_width"], "grids.absorbing_width", "must be below 0.5");
        }
    }
    if (node["absorbing_strength"]) {
        cfg.absorbing_strength = p.positive(node["absorbing_strength"], "grids.absorbing_strength");
    }
}

void parse_resolution(const Parser& p, const YAML::Node& node, RunConfig& cfg)
{
    p.check_keys(node, "resolution", {"dk_inst", "normalize"});
    if (!node["dk_inst"]) {
        p.fail(node, "resolution", "dk_inst is required");
    }
    ResolutionModel m;
    m.dk_inst = p.number(node["dk_inst"], "resolution.dk_inst");
    if (m.dk_inst < 0.0) {
        p.fail(node["dk_inst"], "resolution.dk_inst", "must be non-negative");
    }
    if (node["normalize"]) {
        m.normalize = p.boolean(node["normalize"], "resolution.normalize");
    }
    cfg.resolution = m;
}

void parse_output(const Parser& p, const YAML::Node& node, RunConfig& cfg)
{
    p.check_keys(node, "output", {"dir", "format"});
    if (node["dir"]) {
        cfg.out_dir = p.text(node["dir"], "output.dir");
    }
    if (node["format"]) {
        const std::string f = p.text(node["format"], "output.format");
        if (f == "csv") {
            cfg.format = Format::Csv;
        } else if (f == "json") {
            cfg.format = Format::Json;
        } else {
            p.fail(node["format"], "output.format", "expected csv or json");
        }
    }
}

void parse_statops(const Parser& p, const YAML::Node& node, RunConfig& cfg)
{
    p.check_keys(node, "statops", {"coefficients", "energies", "windows"});
    if (!node["coefficients"] || !node["energies"]) {
        p.fail(node, "statops", "coefficients and energies are required");
    }
    const auto c = node["coefficients"];
    if (!c.IsSequence()) {
        p.fail(c, "statops.coefficients", "expected a list");
    }
    cfg.statops.coefficients.clear();
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        cfg.statops.coefficients.push_back(p.complex_number(c[i], "statops.coefficients[" + std::to_string(i) + "]"));
        total += std::norm(cfg.statops.coefficients.back());
    }
    if (!(total > 0.0)) {
        p.fail(c, "statops.coefficients", "all coefficients are zero");
    }
    for (auto& v : cfg.statops.coefficients) {
        v /= std::sqrt(total);
    }
    cfg.statops.energies = p.numbers(node["energies"], "statops.energies");
    if (cfg.statops.energies.size() != cfg.statops.coefficients.size()) {
        p.fail(node["energies"], "statops.energies", "needs one energy per coefficient");
    }
    if (node["windows"]) {
        cfg.statops.windows = p.numbers(node["windows"], "statops.windows");
        for (double w : cfg.statops.windows) {
            if (!(w >= 0.0)) {
                p.fail(node["windows"], "statops.windows", "must be non-negative");
            }
        }
    }
}

}  // namespace

std::vector<double> RunConfig::k_values() const
{
    return linspace(k_min, k_max, k_count);
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::ConfigError, source + ":" + std::to_string(e.mark.line + 1) + ":" +
                                                std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    const Parser p(source);
    RunConfig cfg;
    cfg.barrier = default_double_barrier();
    cfg.kbars = {1.0};
    cfg.statops.coefficients = {{0.6, 0.0}, {0.0, 0.64}, {0.48, 0.0}};
    cfg.statops.energies = {0.0, 1.0, 2.5};
    cfg.statops.windows = {0.0, 1.0, 2.0, 4.0, 6.283185307179586, 10.0, 100.0, 1000.0};
    if (!root || root.IsNull()) {
        return cfg;
    }
    p.check_keys(root, "config", {"barrier", "packet", "grids", "times", "resolution", "output", "statops"});
    if (root["barrier"]) {
        parse_barrier(p, root["barrier"], cfg);
    }
    if (root["packet"]) {
        parse_packet(p, root["packet"], cfg);
    }
    if (root["grids"]) {
        parse_grids(p, root["grids"], cfg);
    }
    if (root["times"]) {
        cfg.times = p.numbers(root["times"], "times");
        for (double t : cfg.times) {
            if (t < 0.0) {
                p.fail(root["times"], "times", "must be non-negative");
            }
        }
    }
    if (root["resolution"]) {
        parse_resolution(p, root["resolution"], cfg);
    }
    if (root["output"]) {
        parse_output(p, root["output"], cfg);
    }
    if (root["statops"]) {
        parse_statops(p, root["statops"], cfg);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ConfigError, path.string() + ": cannot open");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

}  // namespace wpscat::cli
