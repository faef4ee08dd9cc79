#pragma once

/**
 * @file config.hpp
 * @brief Run configuration shared by every CLI subcommand.
 *
 * Precedence, lowest to highest: built-in defaults, the flat config file,
 * command-line flags. The file holds one `key = value` pair per line; `#`
 * starts a comment and keys use the flag spelling without the leading dashes
 * (`t-end`, `tol-norm`, ...). Underscores are accepted in place of dashes.
 */

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "oscillator.hpp"

namespace logosc {

enum class Spacing { Log, Linear };

struct Tolerances {
    double ode = 1e-9;              ///< Pinney integrator local tolerance
    double trajectory_ode = 1e-10;  ///< classical integrator local tolerance
    double pinney = 1e-9;           ///< normalized closed-form residual
    double numeric = 1e-6;          ///< numeric vs closed-form ρ, relative sup
    double norm = 1e-8;
    double ortho = 1e-8;
    double schrodinger = 1e-5;
    double observables = 1e-7;  ///< oracle vs closed form, relative
    double c11 = 1e-9;
    double identity = 1e-9;
    double coherent = 1e-9;
    double orbit = 1e-6;
    double envelope = 0.02;
    double crossing = 1e-8;
    double trajectory = 1e-6;
};

struct RunConfig {
    std::string family = "all";
    double m0 = 1.0;
    double k0 = 100.0;
    double t0 = 1.0;
    double hbar = 1.0;
    std::vector<int> n_list{0, 1, 2};
    std::optional<double> t_start;  ///< defaults to t0
    std::optional<double> t_end;    ///< defaults to 100·t0
    int t_count = 200;
    Spacing spacing = Spacing::Log;
    double q_half_width = 0.0;  ///< 0 selects a window from the state width
    int q_count = 201;
    double q0 = 1.0;
    double v0 = 0.0;
    int samples = 2000;
    std::string out = "out";
    Tolerances tol;

    [[nodiscard]] double start() const { return t_start.value_or(t0); }
    [[nodiscard]] double end() const { return t_end.value_or(100.0 * t0); }

    /// Families selected by `family`; "all" expands to the three log-periodic cases.
    [[nodiscard]] std::vector<Family> families() const {
        const std::string lowered = lower(family);
        if (lowered == "all") return {Family::CaseA, Family::CaseB, Family::CaseC};
        const auto f = parse_family(lowered);
        if (!f || *f == Family::UserDefined) {
            throw Error(ErrorCode::UnsupportedFamily, "unknown family '" + family + "'");
        }
        return {*f};
    }

    [[nodiscard]] OscillatorSpec spec(Family f) const { return OscillatorSpec::make(f, m0, k0, t0, hbar); }

    /// Every setting that shapes the output, in a fixed order; `out` is excluded.
    [[nodiscard]] std::string canonical(Family f) const {
        using csv::format_number;
        std::string key = "family=" + std::string(to_string(f));
        key += ";m0=" + format_number(m0) + ";k0=" + format_number(k0) + ";t0=" + format_number(t0) +
               ";hbar=" + format_number(hbar) + ";n=";
        for (int n : n_list) key += std::to_string(n) + ",";
        key += ";t=" + format_number(start()) + ":" + format_number(end()) + ":" + std::to_string(t_count) +
               (spacing == Spacing::Log ? ":log" : ":linear");
        key += ";q=" + format_number(q_half_width) + ":" + std::to_string(q_count);
        key += ";q0=" + format_number(q0) + ";v0=" + format_number(v0) + ";samples=" + std::to_string(samples);
        for (const auto& [name, ptr] : tolerance_fields()) key += ";tol-" + std::string(name) + "=" + format_number(tol.*ptr);
        return key;
    }

    /// Stable 12-hex-digit tag of `canonical(f)`, used in output file names.
    [[nodiscard]] std::string parameter_hash(Family f) const { return csv::hex_tag(csv::fnv1a(canonical(f))); }

    /// Time grid described by t-start, t-end, t-count and spacing.
    [[nodiscard]] std::vector<double> time_grid() const {
        std::vector<double> g(static_cast<std::size_t>(t_count));
        const double a = start();
        const double b = end();
        const double last = static_cast<double>(t_count - 1);
        for (int i = 0; i < t_count; ++i) {
            const double s = i / last;
            g[static_cast<std::size_t>(i)] =
                spacing == Spacing::Log ? a * std::exp(s * std::log(b / a)) : a + s * (b - a);
        }
        g.front() = a;
        g.back() = b;
        return g;
    }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be a positive finite number");
            }
        };
        positive(m0, "m0");
        positive(k0, "k0");
        positive(t0, "t0");
        positive(hbar, "hbar");
        if (!(start() > 0.0)) throw Error(ErrorCode::NonPositiveTime, "t-start must be > 0");
        if (!(end() > start())) throw Error(ErrorCode::InvalidConfig, "t-end must exceed t-start");
        if (t_count < 2) throw Error(ErrorCode::InvalidConfig, "t-count must be >= 2");
        if (q_count < 2) throw Error(ErrorCode::InvalidConfig, "q-count must be >= 2");
        if (samples < 2) throw Error(ErrorCode::InvalidConfig, "samples must be >= 2");
        if (q_half_width < 0.0) throw Error(ErrorCode::InvalidConfig, "q-max must be >= 0");
        if (n_list.empty()) throw Error(ErrorCode::InvalidConfig, "n list is empty");
        for (int n : n_list) {
            if (n < 0) throw Error(ErrorCode::InvalidConfig, "n must be >= 0");
        }
        if (!(tol.ode >= 1e-12 && tol.ode <= 1e-3)) {
            throw Error(ErrorCode::InvalidConfig, "tol-ode must lie in [1e-12, 1e-3]");
        }
        if (!(tol.trajectory_ode > 0.0 && tol.trajectory_ode <= 1e-3)) {
            throw Error(ErrorCode::InvalidConfig, "tol-trajectory-ode must lie in (0, 1e-3]");
        }
        for (const auto& [name, ptr] : tolerance_fields()) {
            const double v = tol.*ptr;
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw Error(ErrorCode::InvalidConfig, "tol-" + std::string(name) + " must be positive");
            }
        }
        (void)families();
    }

    /// Flag suffix → member, for the `--tol-*` family.
    static const std::vector<std::pair<std::string_view, double Tolerances::*>>& tolerance_fields() {
        static const std::vector<std::pair<std::string_view, double Tolerances::*>> fields = {
            {"ode", &Tolerances::ode},
            {"trajectory-ode", &Tolerances::trajectory_ode},
            {"pinney", &Tolerances::pinney},
            {"numeric", &Tolerances::numeric},
            {"norm", &Tolerances::norm},
            {"ortho", &Tolerances::ortho},
            {"schrodinger", &Tolerances::schrodinger},
            {"observables", &Tolerances::observables},
            {"c11", &Tolerances::c11},
            {"identity", &Tolerances::identity},
            {"coherent", &Tolerances::coherent},
            {"orbit", &Tolerances::orbit},
            {"envelope", &Tolerances::envelope},
            {"crossing", &Tolerances::crossing},
            {"trajectory", &Tolerances::trajectory},
        };
        return fields;
    }

    static std::string lower(std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

inline double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw Error(ErrorCode::InvalidConfig, "'" + key + "' expects a number, got '" + value + "'");
    }
    return out;
}

inline int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw Error(ErrorCode::InvalidConfig, "'" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

}  // namespace config_detail

/// Parses a comma- or space-separated list of non-negative integers; `a-b` expands to a range.
inline std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::stringstream ss(text);
    while (ss >> token) {
        std::stringstream parts(token);
        std::string item;
        while (std::getline(parts, item, ',')) {
            if (item.empty()) continue;
            const auto dash = item.find('-', 1);
            if (dash != std::string::npos) {
                const int a = config_detail::parse_int("n", item.substr(0, dash));
                const int b = config_detail::parse_int("n", item.substr(dash + 1));
                if (b < a) throw Error(ErrorCode::InvalidConfig, "empty n range '" + item + "'");
                for (int k = a; k <= b; ++k) out.push_back(k);
            } else {
                out.push_back(config_detail::parse_int("n", item));
            }
        }
    }
    if (out.empty()) throw Error(ErrorCode::InvalidConfig, "n list is empty");
    return out;
}

inline Spacing parse_spacing(const std::string& text) {
    const std::string s = RunConfig::lower(text);
    if (s == "log") return Spacing::Log;
    if (s == "linear" || s == "lin") return Spacing::Linear;
    throw Error(ErrorCode::InvalidConfig, "spacing must be 'log' or 'linear', got '" + text + "'");
}

/// Applies one key/value pair. Unknown keys are rejected.
inline void apply_setting(RunConfig& cfg, std::string key, const std::string& value) {
    using config_detail::parse_double;
    using config_detail::parse_int;
    std::replace(key.begin(), key.end(), '_', '-');
    key = RunConfig::lower(key);
    if (key == "family") cfg.family = value;
    else if (key == "m0") cfg.m0 = parse_double(key, value);
    else if (key == "k0") cfg.k0 = parse_double(key, value);
    else if (key == "t0") cfg.t0 = parse_double(key, value);
    else if (key == "hbar") cfg.hbar = parse_double(key, value);
    else if (key == "n") cfg.n_list = parse_n_list(value);
    else if (key == "t-start") cfg.t_start = parse_double(key, value);
    else if (key == "t-end") cfg.t_end = parse_double(key, value);
    else if (key == "t-count") cfg.t_count = parse_int(key, value);
    else if (key == "spacing") cfg.spacing = parse_spacing(value);
    else if (key == "q-max") cfg.q_half_width = parse_double(key, value);
    else if (key == "q-count") cfg.q_count = parse_int(key, value);
    else if (key == "q0") cfg.q0 = parse_double(key, value);
    else if (key == "v0") cfg.v0 = parse_double(key, value);
    else if (key == "samples") cfg.samples = parse_int(key, value);
    else if (key == "out") cfg.out = value;
    else if (key.rfind("tol-", 0) == 0) {
        const std::string name = key.substr(4);
        for (const auto& [field, ptr] : RunConfig::tolerance_fields()) {
            if (field == name) {
                cfg.tol.*ptr = parse_double(key, value);
                return;
            }
        }
        throw Error(ErrorCode::InvalidConfig, "unknown tolerance '" + key + "'");
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
}

inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string stripped = config_detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidConfig,
                        "config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = config_detail::trim(std::string_view(stripped).substr(0, eq));
        std::string value = config_detail::trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": empty key");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    for (const auto& [k, v] : parse_config_text(buffer.str())) apply_setting(cfg, k, v);
}

}  // namespace logosc
