// Copyright 2026 The protq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment runner: JSON configs, deterministic parallel sweeps, CSV + JSON
// output. Data files never contain timestamps or wall times; those go to
// timing.csv, which is the only nondeterministic file a run writes.

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "protq/classifier.hpp"
#include "protq/fit.hpp"
#include "protq/lattice.hpp"
#include "protq/pauli.hpp"
#include "protq/protocols.hpp"
#include "protq/schedule.hpp"
#include "protq/spectrum.hpp"

namespace protq {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char *kVersion = "0.1.0";

/// Invalid configuration; the message starts with the offending field.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(const std::string &field, const std::string &what) : std::invalid_argument(field + ": " + what), field_(field) {}
    [[nodiscard]] const std::string &field() const { return field_; }

   private:
    std::string field_;
};

enum class ExperimentKind { InitSweep, ManipSweep, SplittingScan, SpectrumFlow, Classify };

inline const char *kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::InitSweep: return "init_sweep";
        case ExperimentKind::ManipSweep: return "manip_sweep";
        case ExperimentKind::SplittingScan: return "splitting_scan";
        case ExperimentKind::SpectrumFlow: return "spectrum_flow";
        case ExperimentKind::Classify: return "classify";
    }
    return "?";
}

inline ExperimentKind parse_kind(const std::string &s) {
    for (auto k : {ExperimentKind::InitSweep, ExperimentKind::ManipSweep, ExperimentKind::SplittingScan,
                   ExperimentKind::SpectrumFlow, ExperimentKind::Classify}) {
        if (s == kind_name(k)) return k;
    }
    throw ConfigError("kind", "unknown experiment kind '" + s + "'");
}

enum class NoiseType { None, Directional, RandomOrientation, CouplingFluctuation };

inline const char *noise_type_name(NoiseType t) {
    switch (t) {
        case NoiseType::None: return "none";
        case NoiseType::Directional: return "directional";
        case NoiseType::RandomOrientation: return "random_orientation";
        case NoiseType::CouplingFluctuation: return "coupling_fluctuation";
    }
    return "?";
}

struct NoiseConfig {
    NoiseType type = NoiseType::None;
    Axis axis = Axis::X;                  // directional only
    std::vector<double> amplitudes{0.0};  // f, or epsilon for coupling fluctuations

    /// Random models consume seeds; the others run once per point with seed 0.
    [[nodiscard]] bool stochastic() const {
        return type == NoiseType::RandomOrientation || type == NoiseType::CouplingFluctuation;
    }
    [[nodiscard]] NoiseSpec realize(double amplitude, std::uint64_t seed) const {
        switch (type) {
            case NoiseType::None: return NoNoise{};
            case NoiseType::Directional: return DirectionalNoise{axis, amplitude};
            case NoiseType::RandomOrientation: return RandomOrientationNoise{amplitude, seed};
            case NoiseType::CouplingFluctuation: return CouplingFluctuationNoise{amplitude, seed};
        }
        return NoNoise{};
    }
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    ExperimentKind kind = ExperimentKind::InitSweep;
    int n = 2;
    double j_x = 1.0;
    double j_y = 1.0;

    // init_sweep
    std::vector<double> taus{5.0, 10.0, 20.0, 50.0, 100.0};
    std::size_t trace_samples = 0;

    // manip_sweep; duration is in units of 1/gap of the uniform lattice
    Axis pulse_axis = Axis::Y;
    std::vector<double> g_max{0.01, 0.02, 0.04};
    double duration_gap_units = 50.0;
    Envelope envelope = Envelope::Sin2;
    double skew = 1.5;
    std::optional<double> calibrate_angle;
    std::optional<std::pair<double, double>> angle_fit_window;  // g range of the theta(g) slope

    // splitting_scan
    Axis field_axis = Axis::X;
    std::vector<double> fields{0.001, 0.002, 0.005, 0.01, 0.02};

    // spectrum_flow
    double spectrum_tau = 100.0;
    std::size_t spectrum_samples = 201;
    std::size_t levels = 6;

    // classify
    std::vector<std::string> strings{"Y11 Y12"};
    std::vector<std::pair<Axis, Axis>> predictions{{Axis::Y, Axis::X}};

    NoiseConfig noise;
    double step_factor = kMaxStepFactor;
    bool check_convergence = true;
    std::vector<std::uint64_t> seeds{1};
    std::string output = "out";
};

// ---------------------------------------------------------------------------
// JSON <-> config.

namespace detail {

using nlohmann::json;

inline void require_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "must be an object");
    for (const auto &[key, _] : j.items()) {
        bool ok = false;
        for (const char *a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
    }
}

template <class T>
T get_field(const json &j, const std::string &field) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(field, std::string("wrong type (") + e.what() + ")");
    }
}

inline Axis get_axis(const json &j, const std::string &field) {
    const auto s = get_field<std::string>(j, field);
    try {
        return parse_axis(s);
    } catch (const std::exception &) {
        throw ConfigError(field, "expected one of X, Y, Z, got '" + s + "'");
    }
}

inline std::string axis_string(Axis a) { return std::string(1, axis_name(a)); }

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json &j) {
    using detail::get_field;
    ExperimentConfig c;
    detail::require_keys(j, "", {"schema_version", "kind", "lattice", "init", "pulse", "splitting", "spectrum",
                                 "classify", "noise", "integrator", "seeds", "output"});
    if (!j.contains("schema_version")) throw ConfigError("schema_version", "missing");
    c.schema_version = get_field<int>(j["schema_version"], "schema_version");
    if (c.schema_version != kSchemaVersion) {
        throw ConfigError("schema_version", "unsupported version " + std::to_string(c.schema_version));
    }
    if (!j.contains("kind")) throw ConfigError("kind", "missing");
    c.kind = parse_kind(get_field<std::string>(j["kind"], "kind"));
    if (j.contains("lattice")) {
        const auto &l = j["lattice"];
        detail::require_keys(l, "lattice", {"n", "j_x", "j_y"});
        if (l.contains("n")) c.n = get_field<int>(l["n"], "lattice.n");
        if (l.contains("j_x")) c.j_x = get_field<double>(l["j_x"], "lattice.j_x");
        if (l.contains("j_y")) c.j_y = get_field<double>(l["j_y"], "lattice.j_y");
    }
    if (j.contains("init")) {
        const auto &s = j["init"];
        detail::require_keys(s, "init", {"taus", "trace_samples"});
        if (s.contains("taus")) c.taus = get_field<std::vector<double>>(s["taus"], "init.taus");
        if (s.contains("trace_samples")) c.trace_samples = get_field<std::size_t>(s["trace_samples"], "init.trace_samples");
    }
    if (j.contains("pulse")) {
        const auto &p = j["pulse"];
        detail::require_keys(p, "pulse",
                             {"axis", "g_max", "duration_gap_units", "envelope", "skew", "calibrate_angle",
                              "angle_fit_window"});
        if (p.contains("axis")) c.pulse_axis = detail::get_axis(p["axis"], "pulse.axis");
        if (p.contains("g_max")) c.g_max = get_field<std::vector<double>>(p["g_max"], "pulse.g_max");
        if (p.contains("duration_gap_units")) {
            c.duration_gap_units = get_field<double>(p["duration_gap_units"], "pulse.duration_gap_units");
        }
        if (p.contains("envelope")) {
            const auto s = get_field<std::string>(p["envelope"], "pulse.envelope");
            try {
                c.envelope = parse_envelope(s);
            } catch (const std::exception &) {
                throw ConfigError("pulse.envelope", "expected sin2 or skewed_sin2, got '" + s + "'");
            }
        }
        if (p.contains("skew")) c.skew = get_field<double>(p["skew"], "pulse.skew");
        if (p.contains("calibrate_angle") && !p["calibrate_angle"].is_null()) {
            c.calibrate_angle = get_field<double>(p["calibrate_angle"], "pulse.calibrate_angle");
        }
        if (p.contains("angle_fit_window") && !p["angle_fit_window"].is_null()) {
            const auto w = get_field<std::vector<double>>(p["angle_fit_window"], "pulse.angle_fit_window");
            if (w.size() != 2) throw ConfigError("pulse.angle_fit_window", "expected [g_lo, g_hi]");
            c.angle_fit_window = std::pair{w[0], w[1]};
        }
    }
    if (j.contains("splitting")) {
        const auto &s = j["splitting"];
        detail::require_keys(s, "splitting", {"axis", "fields"});
        if (s.contains("axis")) c.field_axis = detail::get_axis(s["axis"], "splitting.axis");
        if (s.contains("fields")) c.fields = get_field<std::vector<double>>(s["fields"], "splitting.fields");
    }
    if (j.contains("spectrum")) {
        const auto &s = j["spectrum"];
        detail::require_keys(s, "spectrum", {"tau", "samples", "levels"});
        if (s.contains("tau")) c.spectrum_tau = get_field<double>(s["tau"], "spectrum.tau");
        if (s.contains("samples")) c.spectrum_samples = get_field<std::size_t>(s["samples"], "spectrum.samples");
        if (s.contains("levels")) c.levels = get_field<std::size_t>(s["levels"], "spectrum.levels");
    }
    if (j.contains("classify")) {
        const auto &s = j["classify"];
        detail::require_keys(s, "classify", {"strings", "predict"});
        if (s.contains("strings")) c.strings = get_field<std::vector<std::string>>(s["strings"], "classify.strings");
        if (s.contains("predict")) {
            c.predictions.clear();
            for (const auto &pair : get_field<std::vector<std::vector<std::string>>>(s["predict"], "classify.predict")) {
                if (pair.size() != 2) throw ConfigError("classify.predict", "entries are [u, v] axis pairs");
                c.predictions.emplace_back(detail::get_axis(pair[0], "classify.predict"),
                                           detail::get_axis(pair[1], "classify.predict"));
            }
        }
    }
    if (j.contains("noise")) {
        const auto &s = j["noise"];
        detail::require_keys(s, "noise", {"type", "axis", "amplitudes"});
        if (s.contains("type")) {
            const auto t = get_field<std::string>(s["type"], "noise.type");
            bool found = false;
            for (auto nt : {NoiseType::None, NoiseType::Directional, NoiseType::RandomOrientation,
                            NoiseType::CouplingFluctuation}) {
                if (t == noise_type_name(nt)) {
                    c.noise.type = nt;
                    found = true;
                }
            }
            if (!found) throw ConfigError("noise.type", "unknown noise type '" + t + "'");
        }
        if (s.contains("axis")) c.noise.axis = detail::get_axis(s["axis"], "noise.axis");
        if (s.contains("amplitudes")) {
            c.noise.amplitudes = get_field<std::vector<double>>(s["amplitudes"], "noise.amplitudes");
        }
    }
    if (j.contains("integrator")) {
        const auto &s = j["integrator"];
        detail::require_keys(s, "integrator", {"step_factor", "check_convergence"});
        if (s.contains("step_factor")) c.step_factor = get_field<double>(s["step_factor"], "integrator.step_factor");
        if (s.contains("check_convergence")) {
            c.check_convergence = get_field<bool>(s["check_convergence"], "integrator.check_convergence");
        }
    }
    if (j.contains("seeds")) c.seeds = get_field<std::vector<std::uint64_t>>(j["seeds"], "seeds");
    if (j.contains("output")) c.output = get_field<std::string>(j["output"], "output");
    return c;
}

/// Canonical form of a config: every field, resolved defaults included.
/// `output` is left out so that the hash depends only on what is computed.
inline nlohmann::json config_to_json(const ExperimentConfig &c) {
    using nlohmann::json;
    json j;
    j["schema_version"] = c.schema_version;
    j["kind"] = kind_name(c.kind);
    j["lattice"] = {{"n", c.n}, {"j_x", c.j_x}, {"j_y", c.j_y}};
    j["init"] = {{"taus", c.taus}, {"trace_samples", c.trace_samples}};
    j["pulse"] = {{"axis", detail::axis_string(c.pulse_axis)},
                  {"g_max", c.g_max},
                  {"duration_gap_units", c.duration_gap_units},
                  {"envelope", envelope_name(c.envelope)},
                  {"skew", c.skew},
                  {"calibrate_angle", c.calibrate_angle ? json(*c.calibrate_angle) : json(nullptr)},
                  {"angle_fit_window", c.angle_fit_window
                                           ? json::array({c.angle_fit_window->first, c.angle_fit_window->second})
                                           : json(nullptr)}};
    j["splitting"] = {{"axis", detail::axis_string(c.field_axis)}, {"fields", c.fields}};
    j["spectrum"] = {{"tau", c.spectrum_tau}, {"samples", c.spectrum_samples}, {"levels", c.levels}};
    json preds = json::array();
    for (const auto &[u, v] : c.predictions) preds.push_back({detail::axis_string(u), detail::axis_string(v)});
    j["classify"] = {{"strings", c.strings}, {"predict", preds}};
    j["noise"] = {{"type", noise_type_name(c.noise.type)},
                  {"axis", detail::axis_string(c.noise.axis)},
                  {"amplitudes", c.noise.amplitudes}};
    j["integrator"] = {{"step_factor", c.step_factor}, {"check_convergence", c.check_convergence}};
    j["seeds"] = c.seeds;
    return j;
}

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig &c) {
    const std::string text = config_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(j);
}

/// Parses "1,2,5-8" into {1, 2, 5, 6, 7, 8}.
inline std::vector<std::uint64_t> parse_seed_list(const std::string &text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    auto to_u64 = [&](const std::string &s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("seeds", "bad seed '" + s + "' in '" + text + "'");
        }
        return static_cast<std::uint64_t>(std::stoull(s));
    };
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(to_u64(item));
        } else {
            const auto lo = to_u64(item.substr(0, dash)), hi = to_u64(item.substr(dash + 1));
            if (hi < lo || hi - lo > 1000000) throw ConfigError("seeds", "bad range '" + item + "'");
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        }
    }
    if (out.empty()) throw ConfigError("seeds", "empty seed list");
    return out;
}

// ---------------------------------------------------------------------------
// Validation.

namespace detail {

inline double uniform_gap(const LatticeSpec &lattice) {
    return extract_logical_basis(build_protection_hamiltonian(lattice), build_symmetry_operators(lattice)).gap;
}

inline void check_positive_list(const std::vector<double> &v, const std::string &field, bool allow_zero) {
    if (v.empty()) throw ConfigError(field, "must not be empty");
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0)) {
            throw ConfigError(field, "entries must be finite and " + std::string(allow_zero ? ">= 0" : "> 0"));
        }
    }
}

}  // namespace detail

/// Checks every numeric field against the preconditions of the module it
/// feeds; throws ConfigError naming the field. Returns the uniform-lattice gap.
inline double validate_config(const ExperimentConfig &c) {
    std::optional<LatticeSpec> lattice;
    try {
        lattice.emplace(c.n, c.j_x, c.j_y);
    } catch (const std::invalid_argument &e) {
        throw ConfigError("lattice", e.what());
    }
    if (!(c.step_factor > 0.0) || c.step_factor > kMaxStepFactor) {
        throw ConfigError("integrator.step_factor", "must lie in (0, " + std::to_string(kMaxStepFactor) + "]");
    }
    if (c.seeds.empty()) throw ConfigError("seeds", "must not be empty");
    std::set<std::uint64_t> unique(c.seeds.begin(), c.seeds.end());
    if (unique.size() != c.seeds.size()) throw ConfigError("seeds", "duplicate seed");

    if (c.noise.type != NoiseType::None) {
        detail::check_positive_list(c.noise.amplitudes, "noise.amplitudes", true);
        for (double a : c.noise.amplitudes) {
            try {
                validate_noise(c.noise.realize(a, 0));
            } catch (const std::invalid_argument &e) {
                throw ConfigError("noise.amplitudes", e.what());
            }
        }
    }
    const double gap = detail::uniform_gap(*lattice);
    switch (c.kind) {
        case ExperimentKind::InitSweep:
            detail::check_positive_list(c.taus, "init.taus", false);
            break;
        case ExperimentKind::ManipSweep: {
            if (c.pulse_axis == Axis::Z) throw ConfigError("pulse.axis", "manipulations along Z are not supported");
            if (!(c.duration_gap_units > 0.0)) throw ConfigError("pulse.duration_gap_units", "must be > 0");
            if (!(c.skew > 0.0)) throw ConfigError("pulse.skew", "must be > 0");
            if (c.calibrate_angle) {
                if (!(*c.calibrate_angle > 0.0 && *c.calibrate_angle < std::numbers::pi / 2)) {
                    throw ConfigError("pulse.calibrate_angle", "must lie in (0, pi/2)");
                }
            } else {
                detail::check_positive_list(c.g_max, "pulse.g_max", true);
                for (double g : c.g_max) {
                    if (g >= gap) {
                        throw ConfigError("pulse.g_max", "value " + std::to_string(g) + " is not below the gap " +
                                                             std::to_string(gap));
                    }
                }
            }
            if (c.angle_fit_window && !(c.angle_fit_window->first > 0.0 &&
                                        c.angle_fit_window->second > c.angle_fit_window->first)) {
                throw ConfigError("pulse.angle_fit_window", "expected 0 < g_lo < g_hi");
            }
            break;
        }
        case ExperimentKind::SplittingScan:
            detail::check_positive_list(c.fields, "splitting.fields", true);
            for (double h : c.fields) {
                if (h >= 0.5 * gap) throw ConfigError("splitting.fields", "fields must stay below half the gap");
            }
            if (c.noise.type != NoiseType::None && c.noise.type != NoiseType::CouplingFluctuation) {
                throw ConfigError("noise.type", "splitting scans accept only none or coupling_fluctuation");
            }
            break;
        case ExperimentKind::SpectrumFlow:
            if (!(c.spectrum_tau > 0.0)) throw ConfigError("spectrum.tau", "must be > 0");
            if (c.spectrum_samples < 2) throw ConfigError("spectrum.samples", "must be >= 2");
            if (c.levels < 2 || static_cast<Eigen::Index>(c.levels) > lattice->dim()) {
                throw ConfigError("spectrum.levels", "must lie in [2, 2^(n^2)]");
            }
            if (c.noise.type != NoiseType::None) throw ConfigError("noise.type", "spectrum flows are noiseless");
            break;
        case ExperimentKind::Classify:
            for (const auto &s : c.strings) {
                try {
                    PauliString::parse(s).validate(c.n);
                } catch (const std::exception &e) {
                    throw ConfigError("classify.strings", "'" + s + "': " + e.what());
                }
            }
            for (const auto &[u, v] : c.predictions) {
                if (u == Axis::Z) throw ConfigError("classify.predict", "manipulation axis Z is not supported");
            }
            break;
    }
    return gap;
}

// ---------------------------------------------------------------------------
// Worker pool and output.

/// --threads wins over THREADS, which wins over the hardware count.
inline int resolve_threads(std::optional<int> flag) {
    if (flag) {
        if (*flag < 1) throw ConfigError("threads", "must be >= 1");
        return *flag;
    }
    if (const char *env = std::getenv("THREADS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw ConfigError("THREADS", std::string("bad value '") + env + "'");
        return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..count-1) on `threads` workers; results come back in index
/// order whatever the scheduling. The first exception (lowest index) is
/// rethrown after all workers stop.
template <class Fn>
auto parallel_map(std::size_t count, int threads, Fn &&fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto k = static_cast<std::size_t>(std::max(1, threads));
    if (k == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(k, count); ++t) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto &s : slots) out.push_back(std::move(*s));
    return out;
}

using CsvCell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

/// Headered table; doubles print in %.16e (17 significant digits).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    void add(std::vector<CsvCell> row) {
        if (row.size() != header.size()) throw std::logic_error("csv row width does not match the header");
        rows.push_back(std::move(row));
    }

    [[nodiscard]] static std::string format(const CsvCell &cell) {
        return std::visit(
            [](const auto &v) -> std::string {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    if (std::isnan(v)) return "nan";
                    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "%.16e", v);
                    return buf;
                } else if constexpr (std::is_same_v<T, std::string>) {
                    if (v.find_first_of(",\"\n") == std::string::npos) return v;
                    std::string q = "\"";
                    for (char ch : v) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
                    return q + "\"";
                } else {
                    return std::to_string(v);
                }
            },
            cell);
    }

    [[nodiscard]] std::string str() const {
        std::string out;
        for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
        out += "\n";
        for (const auto &row : rows) {
            for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + format(row[k]);
            out += "\n";
        }
        return out;
    }
};

struct RunOutput {
    std::string config_hash;
    CsvTable results;
    std::optional<CsvTable> trace;  // init sweeps with trace_samples > 0
    nlohmann::json summary;
    std::vector<double> task_seconds;
    std::size_t failures = 0;
};

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

/// results.csv, summary.json, optional trace.csv, and timing.csv (wall time
/// per task, the only nondeterministic file).
inline void write_outputs(const RunOutput &r, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "results.csv", r.results.str());
    if (r.trace) write_text(dir / "trace.csv", r.trace->str());
    write_text(dir / "summary.json", r.summary.dump(2) + "\n");
    CsvTable timing{{"task", "wall_seconds"}, {}};
    for (std::size_t k = 0; k < r.task_seconds.size(); ++k) {
        timing.add({static_cast<std::uint64_t>(k), r.task_seconds[k]});
    }
    write_text(dir / "timing.csv", timing.str());
}

// ---------------------------------------------------------------------------
// Experiments.

namespace detail {

inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline double safe_slope(const std::vector<double> &x, const std::vector<double> &y, double inner_fraction = 1.0) {
    try {
        return fit_loglog(x, y, inner_fraction).slope;
    } catch (const std::invalid_argument &) {
        return std::nan("");
    }
}

template <class Task>
struct Timed {
    Task value;
    double seconds = 0.0;
};

template <class Fn>
auto timed_map(std::size_t count, int threads, Fn &&fn) {
    return parallel_map(count, threads, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        auto v = fn(i);
        return Timed<decltype(v)>{std::move(v), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    });
}

inline nlohmann::json base_summary(const ExperimentConfig &c, const std::string &hash) {
    return {{"config_hash", hash},
            {"kind", kind_name(c.kind)},
            {"schema_version", kSchemaVersion},
            {"config", config_to_json(c)},
            {"versions",
             {{"protq", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                           "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
}

inline std::vector<double> noise_amplitudes(const NoiseConfig &n) {
    return n.type == NoiseType::None ? std::vector<double>{0.0} : n.amplitudes;
}

inline std::vector<std::uint64_t> noise_seeds(const ExperimentConfig &c) {
    return c.noise.stochastic() ? c.seeds : std::vector<std::uint64_t>{0};
}

// init_sweep ----------------------------------------------------------------

inline RunOutput run_init_sweep(const ExperimentConfig &c, const std::string &hash, int threads) {
    const LatticeSpec lattice(c.n, c.j_x, c.j_y);
    struct Point {
        double tau, f;
        std::uint64_t seed;
    };
    std::vector<Point> points;
    for (double tau : c.taus) {
        for (double f : noise_amplitudes(c.noise)) {
            for (auto seed : noise_seeds(c)) points.push_back({tau, f, seed});
        }
    }
    struct Outcome {
        InitializationResult result;
        std::string status = "ok";
    };
    const auto outcomes = timed_map(points.size(), threads, [&](std::size_t i) {
        Outcome o;
        try {
            InitializationOptions opts;
            opts.trace_samples = c.trace_samples;
            opts.step_factor = c.step_factor;
            opts.check_convergence = c.check_convergence;
            o.result = run_initialization(lattice, Schedule::with_tau(points[i].tau),
                                          c.noise.realize(points[i].f, points[i].seed), opts);
        } catch (const std::exception &e) {
            o.status = std::string("error: ") + e.what();
            o.result.final_error = std::nan("");
            o.result.norm_drift = std::nan("");
            o.result.convergence_deficit = std::nan("");
        }
        return o;
    });

    RunOutput out;
    out.config_hash = hash;
    out.results.header = {"config_hash", "tau", "noise", "f", "seed", "final_error", "norm_drift",
                          "convergence_deficit", "status"};
    if (c.trace_samples > 0) out.trace = CsvTable{{"tau", "f", "seed", "t", "error"}, {}};
    double max_drift = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto &o = outcomes[i].value;
        out.task_seconds.push_back(outcomes[i].seconds);
        if (o.status != "ok") ++out.failures;
        out.results.add({hash, points[i].tau, std::string(noise_type_name(c.noise.type)), points[i].f,
                         points[i].seed, o.result.final_error, o.result.norm_drift, o.result.convergence_deficit,
                         o.status});
        if (std::isfinite(o.result.norm_drift)) max_drift = std::max(max_drift, o.result.norm_drift);
        if (out.trace) {
            for (const auto &tp : o.result.trace) out.trace->add({points[i].tau, points[i].f, points[i].seed, tp.t, tp.error});
        }
    }

    nlohmann::json groups = nlohmann::json::array();
    for (double f : noise_amplitudes(c.noise)) {
        nlohmann::json g;
        g["f"] = f;
        std::vector<double> taus, medians;
        nlohmann::json per_tau = nlohmann::json::array();
        for (double tau : c.taus) {
            std::vector<double> errs;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (points[i].tau == tau && points[i].f == f && std::isfinite(outcomes[i].value.result.final_error)) {
                    errs.push_back(outcomes[i].value.result.final_error);
                }
            }
            if (errs.empty()) continue;
            const double med = median(errs);
            taus.push_back(tau);
            medians.push_back(med);
            per_tau.push_back({{"tau", tau},
                               {"median", med},
                               {"q25", quantile(errs, 0.25)},
                               {"q75", quantile(errs, 0.75)},
                               {"samples", errs.size()}});
        }
        g["per_tau"] = per_tau;
        if (!medians.empty()) {
            const auto best = std::min_element(medians.begin(), medians.end()) - medians.begin();
            g["min_median"] = medians[best];
            g["argmin_tau"] = taus[best];
            // Order taus ascending for the monotonicity flag; 1e-13 absorbs roundoff at the error floor.
            std::vector<std::size_t> idx(taus.size());
            for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return taus[a] < taus[b]; });
            bool monotone = true;
            for (std::size_t k = 1; k < idx.size(); ++k) monotone = monotone && medians[idx[k]] <= medians[idx[k - 1]] + 1e-13;
            g["monotone_nonincreasing"] = monotone;
        }
        groups.push_back(g);
    }
    out.summary = base_summary(c, hash);
    out.summary["groups"] = groups;
    out.summary["max_norm_drift"] = max_drift;
    return out;
}

// manip_sweep ---------------------------------------------------------------

inline RunOutput run_manip_sweep(const ExperimentConfig &c, const std::string &hash, int threads, double gap) {
    const LatticeSpec lattice(c.n, c.j_x, c.j_y);
    PulseSpec base;
    base.axis = c.pulse_axis;
    base.duration = c.duration_gap_units / gap;
    base.envelope = c.envelope;
    base.skew = c.skew;
    ManipulationOptions mopts;
    mopts.step_factor = c.step_factor;
    mopts.check_convergence = c.check_convergence;

    nlohmann::json calibration = nullptr;
    std::vector<double> gs = c.g_max;
    if (c.calibrate_angle) {
        ManipulationOptions copts = mopts;
        copts.check_convergence = false;  // the calibrated pulse is rerun with the configured checks below
        const Calibration cal = calibrate_g_max(lattice, base, *c.calibrate_angle, copts, 0.01, 1e-9);
        calibration = {{"target_angle", *c.calibrate_angle}, {"g_max", cal.g_max}, {"angle", cal.angle},
                       {"evaluations", cal.evaluations}};
        gs = {cal.g_max};
    }

    struct Point {
        double g, f;
        std::uint64_t seed;
        bool reference;
    };
    std::vector<Point> points;
    for (double g : gs) {
        points.push_back({g, 0.0, 0, true});
        if (c.noise.type == NoiseType::None) continue;
        for (double f : c.noise.amplitudes) {
            for (auto seed : noise_seeds(c)) points.push_back({g, f, seed, false});
        }
    }
    struct Outcome {
        LogicalDecomposition d;
        RotationReport rot;
        double norm_drift = std::nan("");
        double deficit = std::nan("");
        std::string status = "ok";
    };
    const auto outcomes = timed_map(points.size(), threads, [&](std::size_t i) {
        Outcome o;
        PulseSpec p = base;
        p.g_max = points[i].g;
        const NoiseSpec noise = points[i].reference ? NoiseSpec{NoNoise{}} : c.noise.realize(points[i].f, points[i].seed);
        try {
            const ManipulationResult r = run_manipulation(lattice, p, noise, mopts);
            o.d = r.decomposition;
            o.norm_drift = r.norm_drift;
            o.deficit = r.convergence_deficit;
        } catch (const std::exception &e) {
            o.status = std::string("error: ") + e.what();
            o.d.leakage = std::nan("");
            return o;
        }
        try {
            o.rot = rotation_axis_angle(o.d, 1e-3);
        } catch (const std::exception &e) {
            o.status = std::string("error: ") + e.what();
            o.rot.angle = std::nan("");
        }
        return o;
    });

    RunOutput out;
    out.config_hash = hash;
    out.results.header = {"config_hash", "g_max", "noise", "f", "seed", "abs_alpha_1", "abs_alpha_x", "abs_alpha_y",
                          "abs_alpha_z", "dev_alpha_1", "dev_alpha_x", "dev_alpha_y", "dev_alpha_z", "leakage",
                          "angle", "angle_deviation", "axis_x", "axis_y", "axis_z", "norm_drift",
                          "convergence_deficit", "status"};
    std::map<double, std::size_t> reference_of;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].reference) reference_of[points[i].g] = i;
    }
    double max_drift = 0.0;
    struct Row {
        std::array<double, 4> abs{}, dev{};
        double angle_dev = 0.0, axis_dev = 0.0;
    };
    std::vector<Row> rows(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto &o = outcomes[i].value;
        const auto &ref = outcomes[reference_of.at(points[i].g)].value;
        out.task_seconds.push_back(outcomes[i].seconds);
        if (o.status != "ok") ++out.failures;
        Row &r = rows[i];
        const auto a = o.d.alphas(), ar = ref.d.alphas();
        for (int k = 0; k < 4; ++k) {
            r.abs[k] = o.status == "ok" ? std::abs(a[k]) : std::nan("");
            r.dev[k] = std::abs(r.abs[k] - std::abs(ar[k]));
        }
        r.angle_dev = std::abs(o.rot.angle - ref.rot.angle);
        for (int k = 0; k < 3; ++k) r.axis_dev = std::max(r.axis_dev, std::abs(o.rot.axis[k] - ref.rot.axis[k]));
        if (std::isfinite(o.norm_drift)) max_drift = std::max(max_drift, o.norm_drift);
        out.results.add({hash, points[i].g, std::string(points[i].reference ? "none" : noise_type_name(c.noise.type)),
                         points[i].f, points[i].seed, r.abs[0], r.abs[1], r.abs[2], r.abs[3], r.dev[0], r.dev[1],
                         r.dev[2], r.dev[3], o.d.leakage, o.rot.angle, r.angle_dev, o.rot.axis[0], o.rot.axis[1],
                         o.rot.axis[2], o.norm_drift, o.deficit, o.status});
    }

    out.summary = base_summary(c, hash);
    out.summary["gap"] = gap;
    out.summary["duration"] = base.duration;
    out.summary["calibration"] = calibration;
    out.summary["max_norm_drift"] = max_drift;

    // Noiseless references: angle law and Rabi-like fit.
    std::vector<double> ref_g, ref_angle, ref_a1, ref_axis, ref_sign, fit_g, fit_angle;
    double max_off_axis = 0.0, max_leak = 0.0;
    const int axis_index = c.pulse_axis == Axis::X ? 1 : 3;
    const int off1 = c.pulse_axis == Axis::X ? 2 : 1, off2 = c.pulse_axis == Axis::X ? 3 : 2;
    for (const auto &[g, i] : reference_of) {
        const auto &o = outcomes[i].value;
        if (o.status != "ok") continue;
        ref_g.push_back(g);
        ref_angle.push_back(o.rot.angle);
        ref_a1.push_back(rows[i].abs[0]);
        ref_axis.push_back(rows[i].abs[axis_index]);
        ref_sign.push_back(o.rot.axis[axis_index - 1]);
        max_off_axis = std::max({max_off_axis, rows[i].abs[off1], rows[i].abs[off2]});
        max_leak = std::max(max_leak, o.d.leakage);
        if (!c.angle_fit_window || (g >= c.angle_fit_window->first && g <= c.angle_fit_window->second)) {
            fit_g.push_back(g);
            fit_angle.push_back(o.rot.angle);
        }
    }
    nlohmann::json noiseless;
    noiseless["max_off_axis_alpha"] = max_off_axis;
    noiseless["max_leakage"] = max_leak;
    noiseless["angle_slope"] = json_number(safe_slope(fit_g, fit_angle));
    nlohmann::json rabi = nullptr;
    if (ref_g.size() >= 6) {
        try {
            const RabiFit fit = fit_rabi_oscillation(ref_g, ref_a1, ref_axis, 4, ref_sign);
            rabi = {{"residual", fit.residual}, {"coefficients", fit.coefficients}};
        } catch (const std::invalid_argument &) {
        }
    }
    noiseless["rabi_fit"] = rabi;
    out.summary["noiseless"] = noiseless;

    // Noise deviations: median over seeds per f, log-log slopes per g.
    nlohmann::json per_g = nlohmann::json::array();
    if (c.noise.type != NoiseType::None) {
        for (const auto &[g, ref_index] : reference_of) {
            std::vector<double> fs;
            std::array<std::vector<double>, 5> med;  // dev 1, x, y, z, angle
            double max_axis_dev = 0.0;
            for (double f : c.noise.amplitudes) {
                std::array<std::vector<double>, 5> samples;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    if (points[i].reference || points[i].g != g || points[i].f != f) continue;
                    if (outcomes[i].value.status != "ok") continue;
                    for (int k = 0; k < 4; ++k) samples[k].push_back(rows[i].dev[k]);
                    samples[4].push_back(rows[i].angle_dev);
                    max_axis_dev = std::max(max_axis_dev, rows[i].axis_dev);
                }
                if (samples[0].empty()) continue;
                fs.push_back(f);
                for (int k = 0; k < 5; ++k) med[k].push_back(median(samples[k]));
            }
            nlohmann::json entry;
            entry["g_max"] = g;
            entry["f"] = fs;
            entry["median_dev_alpha_x"] = med[1];
            entry["median_dev_alpha_y"] = med[2];
            entry["median_dev_alpha_z"] = med[3];
            entry["median_angle_deviation"] = med[4];
            entry["slopes"] = {{"alpha_1", json_number(safe_slope(fs, med[0]))},
                               {"alpha_x", json_number(safe_slope(fs, med[1]))},
                               {"alpha_y", json_number(safe_slope(fs, med[2]))},
                               {"alpha_z", json_number(safe_slope(fs, med[3]))},
                               {"angle", json_number(safe_slope(fs, med[4]))}};
            entry["max_axis_deviation"] = max_axis_dev;
            per_g.push_back(entry);
        }
        const ScalingPrediction pred =
            predict_dominant_scaling(c.pulse_axis, c.noise.type == NoiseType::Directional ? c.noise.axis : c.pulse_axis, c.n);
        if (c.noise.type == NoiseType::Directional) {
            nlohmann::json exps;
            for (auto cls : {LogicalClass::TauX, LogicalClass::TauY, LogicalClass::TauZ}) {
                const auto &t = pred.term(cls);
                exps[logical_class_name(cls)] = t.reachable ? nlohmann::json(t.f_exponent) : nlohmann::json(nullptr);
            }
            out.summary["predicted_f_exponents"] = exps;
        }
    }
    out.summary["noise_deviation"] = per_g;
    return out;
}

// splitting_scan ------------------------------------------------------------

inline RunOutput run_splitting_scan(const ExperimentConfig &c, const std::string &hash, int threads) {
    const LatticeSpec lattice(c.n, c.j_x, c.j_y);
    const auto amps = noise_amplitudes(c.noise);
    const auto seeds = noise_seeds(c);
    struct Point {
        double eps;
        std::uint64_t seed;
    };
    std::vector<Point> points;
    for (double e : amps) {
        for (auto s : seeds) points.push_back({e, s});
    }
    struct Outcome {
        SplittingScan scan;
        std::string status = "ok";
    };
    const auto outcomes = timed_map(points.size(), threads, [&](std::size_t i) {
        Outcome o;
        try {
            const CouplingProfile profile = realized_couplings(lattice, c.noise.realize(points[i].eps, points[i].seed));
            o.scan = ground_splitting_scan(lattice, c.field_axis, c.fields, &profile);
        } catch (const std::exception &e) {
            o.status = std::string("error: ") + e.what();
        }
        return o;
    });
    RunOutput out;
    out.config_hash = hash;
    out.results.header = {"config_hash", "axis", "h", "noise", "epsilon", "seed", "splitting", "status"};
    nlohmann::json scans = nlohmann::json::array();
    double max_zero_field = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto &o = outcomes[i].value;
        out.task_seconds.push_back(outcomes[i].seconds);
        if (o.status != "ok") {
            ++out.failures;
            out.results.add({hash, detail::axis_string(c.field_axis), std::nan(""),
                             std::string(noise_type_name(c.noise.type)), points[i].eps, points[i].seed, std::nan(""),
                             o.status});
            continue;
        }
        for (const auto &p : o.scan.points) {
            out.results.add({hash, detail::axis_string(c.field_axis), p.h, std::string(noise_type_name(c.noise.type)),
                             points[i].eps, points[i].seed, p.splitting, o.status});
            if (p.h == 0.0) max_zero_field = std::max(max_zero_field, p.splitting);
        }
        scans.push_back({{"epsilon", points[i].eps},
                         {"seed", points[i].seed},
                         {"slope", json_number(o.scan.slope)},
                         {"gap", o.scan.gap}});
    }
    out.summary = base_summary(c, hash);
    out.summary["scans"] = scans;
    out.summary["max_zero_field_splitting"] = max_zero_field;
    return out;
}

// spectrum_flow -------------------------------------------------------------

inline RunOutput run_spectrum_flow(const ExperimentConfig &c, const std::string &hash) {
    const LatticeSpec lattice(c.n, c.j_x, c.j_y);
    const Schedule schedule = Schedule::with_tau(c.spectrum_tau);
    std::vector<double> times;
    for (std::size_t k = 0; k < c.spectrum_samples; ++k) {
        times.push_back(schedule.t_final * static_cast<double>(k) / static_cast<double>(c.spectrum_samples - 1));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto samples = instantaneous_spectrum(lattice, schedule, times);
    RunOutput out;
    out.config_hash = hash;
    out.task_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    out.results.header = {"config_hash", "t", "ramp", "sector_gap"};
    for (std::size_t k = 0; k < c.levels; ++k) out.results.header.push_back("E" + std::to_string(k));
    double min_gap = std::numeric_limits<double>::infinity(), t_min = 0.0;
    for (const auto &s : samples) {
        std::vector<CsvCell> row{hash, s.t, s.ramp, s.sector_gap};
        for (std::size_t k = 0; k < c.levels; ++k) row.emplace_back(s.levels[static_cast<Eigen::Index>(k)]);
        out.results.add(std::move(row));
        if (s.sector_gap < min_gap) {
            min_gap = s.sector_gap;
            t_min = s.t;
        }
    }
    out.summary = base_summary(c, hash);
    out.summary["min_sector_gap"] = min_gap;
    out.summary["t_of_min_sector_gap"] = t_min;
    out.summary["final_gap"] = samples.back().levels[2] - samples.back().levels[0];
    return out;
}

// classify ------------------------------------------------------------------

inline nlohmann::json prediction_json(const ScalingPrediction &p) {
    nlohmann::json terms = nlohmann::json::object();
    for (auto cls : {LogicalClass::Identity, LogicalClass::TauX, LogicalClass::TauY, LogicalClass::TauZ}) {
        const auto &t = p.term(cls);
        nlohmann::json j{{"relevant", t.relevant}, {"reachable", t.reachable}};
        if (t.reachable) {
            j["noise_order"] = t.noise_order;
            j["manipulation_order"] = t.manipulation_order;
            j["f_exponent"] = t.f_exponent;
            j["g_exponent"] = t.g_exponent;
            j["gap_exponent"] = t.gap_exponent;
        }
        terms[logical_class_name(cls)] = j;
    }
    return {{"u", detail::axis_string(p.manipulation_axis)},
            {"v", detail::axis_string(p.noise_axis)},
            {"n", p.n},
            {"parallel", p.parallel},
            {"manipulation_order", p.manipulation_order},
            {"manipulated_class", logical_class_name(p.manipulated_class)},
            {"terms", terms}};
}

inline RunOutput run_classify(const ExperimentConfig &c, const std::string &hash) {
    const LatticeSpec lattice(c.n, c.j_x, c.j_y);
    const LogicalBasis basis =
        extract_logical_basis(build_protection_hamiltonian(lattice), build_symmetry_operators(lattice));
    RunOutput out;
    out.config_hash = hash;
    out.results.header = {"config_hash", "string", "row_action", "column_action", "logical_class", "oracle_agrees",
                          "oracle_residual", "coefficient_re", "coefficient_im"};
    nlohmann::json verdicts = nlohmann::json::array();
    std::size_t disagreements = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto &text : c.strings) {
        const PauliString s = PauliString::parse(text);
        const ClassifierVerdict v = classify_string(s, c.n);
        const OracleResult o = logical_projection_oracle(s, lattice, basis);
        if (!o.agrees) ++disagreements;
        out.results.add({hash, s.str(), std::string(sector_action_name(v.row_action)),
                         std::string(sector_action_name(v.col_action)), std::string(logical_class_name(v.logical_class)),
                         static_cast<std::int64_t>(o.agrees), o.residual, o.coefficient.real(), o.coefficient.imag()});
        verdicts.push_back({{"string", s.str()},
                            {"row_action", sector_action_name(v.row_action)},
                            {"column_action", sector_action_name(v.col_action)},
                            {"class", logical_class_name(v.logical_class)},
                            {"oracle_agrees", o.agrees}});
    }
    nlohmann::json preds = nlohmann::json::array();
    for (const auto &[u, v] : c.predictions) preds.push_back(prediction_json(predict_dominant_scaling(u, v, c.n)));
    out.task_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    out.summary = base_summary(c, hash);
    out.summary["verdicts"] = verdicts;
    out.summary["predictions"] = preds;
    out.summary["minimum_effective_order"] = {{"X", minimum_effective_order(Axis::X, c.n)},
                                              {"Y", minimum_effective_order(Axis::Y, c.n)}};
    out.summary["oracle_disagreements"] = disagreements;
    out.failures = disagreements;
    return out;
}

}  // namespace detail

/// Validates, runs and returns all outputs in memory; nothing is written.
inline RunOutput run_config(const ExperimentConfig &c, int threads = 1) {
    const double gap = validate_config(c);
    const std::string hash = config_hash(c);
    RunOutput out;
    switch (c.kind) {
        case ExperimentKind::InitSweep: out = detail::run_init_sweep(c, hash, threads); break;
        case ExperimentKind::ManipSweep: out = detail::run_manip_sweep(c, hash, threads, gap); break;
        case ExperimentKind::SplittingScan: out = detail::run_splitting_scan(c, hash, threads); break;
        case ExperimentKind::SpectrumFlow: out = detail::run_spectrum_flow(c, hash); break;
        case ExperimentKind::Classify: out = detail::run_classify(c, hash); break;
    }
    out.summary["failures"] = out.failures;
    return out;
}

// ---------------------------------------------------------------------------
// Canned figure configs.

struct FigureConfig {
    std::string name;
    ExperimentConfig config;
    std::string columns;  // documentation of the plot-ready CSV
};

/// One config per figure panel. fig1_bottom uses 20 seeds and taus
/// log-spaced over [5, 200]; fig2 calibrates the pulse to a pi/8 rotation.
inline std::vector<FigureConfig> figure_configs() {
    std::vector<FigureConfig> out;
    {
        ExperimentConfig c;
        c.kind = ExperimentKind::InitSweep;
        c.taus = {100.0};
        c.trace_samples = 500;
        out.push_back({"fig1_top", c, "trace.csv: t, error = 1 - F(t) for tau = 100, no noise"});
    }
    {
        ExperimentConfig c;
        c.kind = ExperimentKind::SpectrumFlow;
        c.spectrum_tau = 100.0;
        c.spectrum_samples = 201;
        c.levels = 6;
        out.push_back({"fig1_inset", c, "results.csv: t, ramp f(t), sector_gap, E0..E5 in units of J"});
    }
    {
        ExperimentConfig c;
        c.kind = ExperimentKind::InitSweep;
        c.taus = logspace(5.0, 200.0, 9);
        c.noise.type = NoiseType::RandomOrientation;
        c.noise.amplitudes = {1e-3, 1e-2};
        c.seeds.clear();
        for (std::uint64_t s = 1; s <= 20; ++s) c.seeds.push_back(s);
        out.push_back({"fig1_bottom", c,
                       "results.csv: tau, f, seed, final_error; summary.json: median and IQR per (f, tau)"});
    }
    {
        ExperimentConfig c;
        c.kind = ExperimentKind::ManipSweep;
        c.pulse_axis = Axis::Y;
        c.envelope = Envelope::SkewedSin2;
        c.duration_gap_units = 200.0;
        c.calibrate_angle = std::numbers::pi / 8;
        c.noise.type = NoiseType::Directional;
        c.noise.axis = Axis::X;
        c.noise.amplitudes = logspace(1e-4, 1e-2, 9);
        out.push_back({"fig2", c, "results.csv: f, dev_alpha_x, dev_alpha_y, dev_alpha_z; summary.json: slopes"});
    }
    return out;
}

}  // namespace protq
