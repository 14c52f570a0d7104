#include "wpscat/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "wpscat/error.hpp"

namespace wpscat {

namespace {

using nlohmann::json;

void append_meta(std::string& out, const char* key, const std::optional<double>& v)
{
    if (v) {
        out += ' ';
        out += key;
        out += '=';
        out += format_double(*v);
    }
}

json meta_json(const SpectrumMeta& m)
{
    json j = json::object();
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) {
            j[key] = *v;
        }
    };
    put("kbar", m.kbar);
    put("dk", m.dk);
    put("gamma", m.gamma);
    put("t", m.t);
    put("dk_inst", m.dk_inst);
    return j;
}

SpectrumKind kind_from_string(const std::string& s)
{
    for (SpectrumKind k : {SpectrumKind::R_pw, SpectrumKind::T_pw, SpectrumKind::r_t, SpectrumKind::t_t,
                           SpectrumKind::R_coh, SpectrumKind::R_meas}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown spectrum kind '" + s + "'");
}

std::vector<double> split_numbers(const std::string& line, std::size_t line_no)
{
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::InvalidArgument, "cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error(ErrorCode::InvalidArgument, "failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string spectrum_csv(const Spectrum& s)
{
    std::string out = "# kind=";
    out += to_string(s.kind);
    append_meta(out, "kbar", s.meta.kbar);
    append_meta(out, "dk", s.meta.dk);
    append_meta(out, "gamma", s.meta.gamma);
    append_meta(out, "t", s.meta.t);
    append_meta(out, "dk_inst", s.meta.dk_inst);
    out += '\n';
    const bool amp = is_amplitude(s.kind);
    out += amp ? "k,re,im,abs\n" : "k,value\n";
    for (std::size_t i = 0; i < s.k_values.size(); ++i) {
        out += format_double(s.k_values[i]);
        out += ',';
        if (amp) {
            out += format_double(s.values[i].real());
            out += ',';
            out += format_double(s.values[i].imag());
            out += ',';
            out += format_double(std::abs(s.values[i]));
        } else {
            out += format_double(s.values[i].real());
        }
        out += '\n';
    }
    return out;
}

std::string spectrum_json(const Spectrum& s)
{
    json j;
    j["kind"] = std::string(to_string(s.kind));
    j["meta"] = meta_json(s.meta);
    j["k"] = s.k_values;
    std::vector<double> re;
    std::vector<double> im;
    for (const Complex& v : s.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    if (is_amplitude(s.kind)) {
        j["re"] = re;
        j["im"] = im;
    } else {
        j["value"] = re;
    }
    return j.dump(1) + "\n";
}

Spectrum parse_spectrum_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    Spectrum s;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool amp = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream tokens(line.substr(1));
            std::string tok;
            while (tokens >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) {
                    continue;
                }
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "kind") {
                    s.kind = kind_from_string(val);
                } else if (key == "kbar") {
                    s.meta.kbar = std::stod(val);
                } else if (key == "dk") {
                    s.meta.dk = std::stod(val);
                } else if (key == "gamma") {
                    s.meta.gamma = std::stod(val);
                } else if (key == "t") {
                    s.meta.t = std::stod(val);
                } else if (key == "dk_inst") {
                    s.meta.dk_inst = std::stod(val);
                }
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            amp = line.rfind("k,re", 0) == 0;
            continue;
        }
        const auto v = split_numbers(line, line_no);
        if (v.size() != (amp ? 4u : 2u)) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": wrong column count");
        }
        s.k_values.push_back(v[0]);
        s.values.emplace_back(v[1], amp ? v[2] : 0.0);
    }
    return s;
}

std::string field_csv(const WaveField& f)
{
    std::string out = "# t=" + format_double(f.time) + "\nx,re,im,abs\n";
    for (std::size_t i = 0; i < f.x.size(); ++i) {
        out += format_double(f.x[i]);
        out += ',';
        out += format_double(f.values[i].real());
        out += ',';
        out += format_double(f.values[i].imag());
        out += ',';
        out += format_double(std::abs(f.values[i]));
        out += '\n';
    }
    return out;
}

std::string field_json(const WaveField& f)
{
    json j;
    j["t"] = f.time;
    j["x"] = f.x;
    std::vector<double> re;
    std::vector<double> im;
    for (const Complex& v : f.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    j["re"] = re;
    j["im"] = im;
    return j.dump(1) + "\n";
}

WaveField parse_field_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    WaveField f;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto pos = line.find("t=");
            if (pos != std::string::npos) {
                f.time = std::stod(line.substr(pos + 2));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto v = split_numbers(line, line_no);
        if (v.size() != 4) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": wrong column count");
        }
        f.x.push_back(v[0]);
        f.values.emplace_back(v[1], v[2]);
    }
    return f;
}

std::filesystem::path write_spectrum(const std::filesystem::path& dir, const std::string& stem,
                                     const Spectrum& s, Format format)
{
    const bool csv = format == Format::Csv;
    const auto path = dir / (stem + (csv ? ".csv" : ".json"));
    write_atomic(path, csv ? spectrum_csv(s) : spectrum_json(s));
    return path;
}

std::filesystem::path write_field(const std::filesystem::path& dir, const std::string& stem,
                                  const WaveField& f, Format format)
{
    const bool csv = format == Format::Csv;
    const auto path = dir / (stem + (csv ? ".csv" : ".json"));
    write_atomic(path, csv ? field_csv(f) : field_json(f));
    return path;
}

}  // namespace wpscat
