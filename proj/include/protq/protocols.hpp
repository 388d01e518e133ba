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

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "protq/dynamics.hpp"
#include "protq/fit.hpp"
#include "protq/lattice.hpp"
#include "protq/schedule.hpp"
#include "protq/spectrum.hpp"

namespace protq {

// ---------------------------------------------------------------------------
// Noise models. All amplitudes are in units of J and static over a run.

struct NoNoise {};
/// f S^v.
struct DirectionalNoise {
    Axis axis = Axis::X;
    double amplitude = 0.0;
};
/// f sum_k n_k . sigma_k with one fixed unit vector n_k per site, drawn
/// uniformly on the sphere.
struct RandomOrientationNoise {
    double amplitude = 0.0;
    std::uint64_t seed = 0;
};
/// Each row coupling J_x and column coupling J_y scaled by (1 + eps_k) with
/// eps_k uniform in [-epsilon, epsilon].
struct CouplingFluctuationNoise {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

using NoiseSpec = std::variant<NoNoise, DirectionalNoise, RandomOrientationNoise, CouplingFluctuationNoise>;

inline void validate_noise(const NoiseSpec &noise) {
    std::visit(
        [](const auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DirectionalNoise> || std::is_same_v<T, RandomOrientationNoise>) {
                if (!(n.amplitude >= 0.0)) throw std::invalid_argument("noise amplitude must be >= 0");
            } else if constexpr (std::is_same_v<T, CouplingFluctuationNoise>) {
                if (!(n.epsilon >= 0.0) || n.epsilon >= 1.0) {
                    throw std::invalid_argument("coupling fluctuation epsilon must lie in [0, 1)");
                }
            }
        },
        noise);
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne draw;
/// identical on every platform for a given seed, unlike std distributions.
class UnitRng {
   public:
    explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::array<double, 3> unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

   private:
    std::mt19937_64 engine_;
};

/// Couplings actually realized on the device under `noise`.
inline CouplingProfile realized_couplings(const LatticeSpec &lattice, const NoiseSpec &noise) {
    CouplingProfile profile = CouplingProfile::uniform(lattice);
    if (const auto *c = std::get_if<CouplingFluctuationNoise>(&noise)) {
        UnitRng rng(c->seed);
        for (auto &j : profile.row_j_x) j *= 1.0 + rng.uniform(-c->epsilon, c->epsilon);
        for (auto &j : profile.col_j_y) j *= 1.0 + rng.uniform(-c->epsilon, c->epsilon);
    }
    return profile;
}

/// Static single-spin noise term, if any.
inline std::optional<DenseOperator> noise_operator(const LatticeSpec &lattice, const NoiseSpec &noise) {
    if (const auto *d = std::get_if<DirectionalNoise>(&noise)) {
        if (d->amplitude == 0.0) return std::nullopt;
        return d->amplitude * build_collective_field(lattice, d->axis);
    }
    if (const auto *r = std::get_if<RandomOrientationNoise>(&noise)) {
        if (r->amplitude == 0.0) return std::nullopt;
        UnitRng rng(r->seed);
        std::vector<std::array<double, 3>> dirs(lattice.spins());
        for (auto &d : dirs) d = rng.unit_vector();
        return r->amplitude * build_site_field(lattice, dirs);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Initialization.

/// Every spin in the sigma^y = -1 eigenstate (|0> - i|1>)/sqrt(2).
inline StateVector prepare_product_state(const LatticeSpec &lattice) {
    const double amp = std::pow(std::sqrt(0.5), lattice.spins());
    StateVector psi(lattice.dim());
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
        // (-i)^(number of spins in |1>)
        switch (std::popcount(static_cast<std::uint64_t>(x)) % 4) {
            case 0: psi[x] = {amp, 0.0}; break;
            case 1: psi[x] = {0.0, -amp}; break;
            case 2: psi[x] = {-amp, 0.0}; break;
            default: psi[x] = {0.0, amp}; break;
        }
    }
    return psi;
}

struct TracePoint {
    double t = 0.0;
    double error = 0.0;  // 1 - F(t)
    double norm = 1.0;
};

struct InitializationResult {
    std::vector<TracePoint> trace;
    double final_error = 0.0;
    double norm_drift = 0.0;
    double convergence_deficit = 0.0;
    std::vector<int> p_sector;
};

struct InitializationOptions {
    /// Trace points between 0 and t_final (0 = endpoints only).
    std::size_t trace_samples = 0;
    double step_factor = kMaxStepFactor;
    bool check_convergence = true;
};

/// Evolves the ferromagnetic product state under
/// H_t = f(t) H0 + (1 - f(t)) S^y + noise and tracks 1 - |<0_L|psi(t)>|^2.
inline InitializationResult run_initialization(const LatticeSpec &lattice, const Schedule &schedule,
                                               const NoiseSpec &noise, const InitializationOptions &opts = {}) {
    schedule.validate();
    validate_noise(noise);
    const DenseOperator h0 = build_protection_hamiltonian(lattice, realized_couplings(lattice, noise));
    const LogicalBasis basis = extract_logical_basis(h0, build_symmetry_operators(lattice));

    DrivenHamiltonian h(lattice.dim());
    h.add(h0, [schedule](double t) { return schedule_eval(schedule, t); });
    h.add(build_collective_field(lattice, Axis::Y), [schedule](double t) { return 1.0 - schedule_eval(schedule, t); });
    if (auto op = noise_operator(lattice, noise)) h.add(*op);

    InitializationResult result;
    result.p_sector = basis.p_sector;
    EvolveOptions eo;
    eo.step_factor = opts.step_factor;
    eo.check_convergence = opts.check_convergence;
    eo.energy_offset = basis.ground_energy;
    const Eigen::VectorXcd target = basis.zero_l;
    eo.observer = [&](double t, const Eigen::MatrixXcd &states) {
        const StateVector psi = states.col(0);
        result.trace.push_back({t, 1.0 - fidelity(target, psi), psi.norm()});
    };
    const StateVector psi0 = prepare_product_state(lattice);
    if (opts.trace_samples > 0) {
        // Probe the step count first so trace points land on steps.
        const double bound = h.norm_bound(0.0, schedule.t_final, eo.energy_offset);
        const auto steps = static_cast<std::size_t>(std::ceil(schedule.t_final * bound / opts.step_factor - 1e-9));
        eo.observe_every = std::max<std::size_t>(1, steps / opts.trace_samples);
    }
    const EvolveResult r = evolve_state(psi0, h, 0.0, schedule.t_final, eo);
    result.final_error = 1.0 - fidelity(target, r.states.col(0));
    result.norm_drift = r.norm_drift;
    result.convergence_deficit = r.convergence_deficit;
    return result;
}

// ---------------------------------------------------------------------------
// Manipulation.

/// Effective logical map U = alpha_1 I + alpha_x tau^x + alpha_y tau^y +
/// alpha_z tau^z, with leakage = 1 - (|alpha_1|^2 + ... + |alpha_z|^2).
struct LogicalDecomposition {
    cplx alpha_1{1.0, 0.0};
    cplx alpha_x{0.0, 0.0};
    cplx alpha_y{0.0, 0.0};
    cplx alpha_z{0.0, 0.0};
    double leakage = 0.0;
    Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity();

    [[nodiscard]] std::array<cplx, 4> alphas() const { return {alpha_1, alpha_x, alpha_y, alpha_z}; }
};

inline const Eigen::Matrix2cd &tau_matrix(Axis a) {
    static const Eigen::Matrix2cd x = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    static const Eigen::Matrix2cd y = (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    static const Eigen::Matrix2cd z = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    switch (a) {
        case Axis::X: return x;
        case Axis::Y: return y;
        default: return z;
    }
}

/// Decomposes a 2x2 logical block over {I, tau^x, tau^y, tau^z} and fixes the
/// global phase: alpha_1 real and >= 0 when |alpha_1| > 1e-12, otherwise the
/// largest alpha real and positive.
inline LogicalDecomposition decompose_logical_block(const Eigen::Matrix2cd &block) {
    std::array<cplx, 4> a{block.trace() / 2.0, (tau_matrix(Axis::X) * block).trace() / 2.0,
                          (tau_matrix(Axis::Y) * block).trace() / 2.0, (tau_matrix(Axis::Z) * block).trace() / 2.0};
    std::size_t ref = 0;
    if (std::abs(a[0]) <= 1e-12) {
        for (std::size_t k = 1; k < 4; ++k) {
            if (std::abs(a[k]) > std::abs(a[ref])) ref = k;
        }
    }
    cplx gauge{1.0, 0.0};
    if (std::abs(a[ref]) > 0.0) gauge = std::conj(a[ref]) / std::abs(a[ref]);
    LogicalDecomposition d;
    d.alpha_1 = a[0] * gauge;
    d.alpha_x = a[1] * gauge;
    d.alpha_y = a[2] * gauge;
    d.alpha_z = a[3] * gauge;
    d.alpha_1 = cplx(d.alpha_1.real(), ref == 0 ? 0.0 : d.alpha_1.imag());
    d.block = block * gauge;
    double weight = 0.0;
    for (const auto &x : a) weight += std::norm(x);
    d.leakage = 1.0 - weight;
    return d;
}

struct ManipulationOptions {
    double step_factor = kMaxStepFactor;
    bool check_convergence = true;
    /// Leakage above this flags a non-adiabatic pulse.
    double max_leakage = 1e-3;
    /// Propagate inside the conserved P (u = Y) or Q (u = X) sectors when the
    /// noise respects them; the result is unchanged, the cost drops ~2^n-fold.
    bool use_symmetry_sectors = true;
};

struct ManipulationResult {
    LogicalDecomposition decomposition;
    double gap = 0.0;
    double norm_drift = 0.0;
    double convergence_deficit = 0.0;
};

class NonAdiabaticError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct DrivenTerm {
    DenseOperator op;
    std::function<double(double)> coefficient;
};

inline DrivenHamiltonian assemble(const std::vector<DrivenTerm> &terms, Eigen::Index dim) {
    DrivenHamiltonian h(dim);
    for (const auto &t : terms) h.add(t.op, t.coefficient);
    return h;
}

/// True when the static noise commutes with the symmetry family conserved by
/// a pulse along `pulse_axis` (P_i for Y, Q_j for X).
inline bool noise_preserves_family(const NoiseSpec &noise, Axis pulse_axis) {
    return std::visit(
        [pulse_axis](const auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DirectionalNoise>) {
                return n.amplitude == 0.0 || n.axis == pulse_axis;
            } else if constexpr (std::is_same_v<T, RandomOrientationNoise>) {
                return n.amplitude == 0.0;
            } else {
                return true;
            }
        },
        noise);
}

/// Evolves each column inside the joint eigenspace of `family` it lies in.
inline EvolveResult evolve_in_sectors(const Eigen::MatrixXcd &states, const std::vector<DrivenTerm> &terms,
                                      const std::vector<DenseOperator> &family, double t0, double t1,
                                      const EvolveOptions &opts) {
    EvolveResult out;
    out.states.resize(states.rows(), states.cols());
    for (Eigen::Index col = 0; col < states.cols(); ++col) {
        const Eigen::VectorXcd v = states.col(col);
        std::vector<int> signs;
        for (const auto &s : family) {
            const Eigen::VectorXcd sv = s.matrix() * v;
            const double ev = v.dot(sv).real();
            const int sign = ev >= 0.0 ? 1 : -1;
            if ((sv - static_cast<double>(sign) * v).norm() > kRelationTolerance) {
                throw std::logic_error("evolve_in_sectors: state is not a symmetry eigenstate");
            }
            signs.push_back(sign);
        }
        const Eigen::MatrixXcd basis = symmetry_sector_basis(family, signs);
        std::vector<DrivenTerm> restricted;
        for (const auto &t : terms) {
            Eigen::MatrixXcd m = basis.adjoint() * t.op.matrix() * basis;
            m = 0.5 * (m + m.adjoint()).eval();
            restricted.push_back({DenseOperator(std::move(m), true), t.coefficient});
        }
        const EvolveResult r =
            evolve_states(basis.adjoint() * v, assemble(restricted, basis.cols()), t0, t1, opts);
        out.states.col(col) = basis * r.states;
        out.dt = std::max(out.dt, r.dt);
        out.steps += r.steps;
        out.norm_drift = std::max(out.norm_drift, r.norm_drift);
        out.convergence_deficit = col == 0 ? r.convergence_deficit : std::max(out.convergence_deficit, r.convergence_deficit);
    }
    return out;
}

}  // namespace detail

/// Applies H(t) = H0 + g(t) S^u + noise over [0, T] to both logical states
/// and decomposes the logical block <a_L|U|b_L> after removing exp(-i E_g T).
///
/// The logical basis is that of the protection Hamiltonian actually realized,
/// so coupling fluctuations shift the basis while single-spin noise does not.
inline ManipulationResult run_manipulation(const LatticeSpec &lattice, const PulseSpec &pulse, const NoiseSpec &noise,
                                           const ManipulationOptions &opts = {}) {
    pulse.validate();
    validate_noise(noise);
    const DenseOperator h0 = build_protection_hamiltonian(lattice, realized_couplings(lattice, noise));
    const LogicalBasis basis = extract_logical_basis(h0, build_symmetry_operators(lattice));
    if (pulse.g_max >= basis.gap) {
        throw std::domain_error("pulse amplitude g_max = " + std::to_string(pulse.g_max) +
                                " is not below the gap " + std::to_string(basis.gap));
    }

    std::vector<detail::DrivenTerm> terms;
    terms.push_back({h0, {}});
    terms.push_back({build_collective_field(lattice, pulse.axis), [pulse](double t) { return schedule_eval(pulse, t); }});
    if (auto op = noise_operator(lattice, noise)) terms.push_back({*op, {}});

    EvolveOptions eo;
    eo.step_factor = opts.step_factor;
    eo.check_convergence = opts.check_convergence;
    eo.energy_offset = basis.ground_energy;
    const Eigen::MatrixXcd logical = basis.columns();
    EvolveResult r;
    if (opts.use_symmetry_sectors && detail::noise_preserves_family(noise, pulse.axis)) {
        // Sector eigenstates: |0_L>, |1_L> for the P family; |+->_L for the Q family.
        const SymmetryOperators syms = build_symmetry_operators(lattice);
        const std::vector<DenseOperator> &family = pulse.axis == Axis::Y ? syms.p : syms.q;
        Eigen::Matrix2cd c = Eigen::Matrix2cd::Identity();
        if (pulse.axis == Axis::X) {
            c << 1.0, 1.0, 1.0, -1.0;
            c /= std::sqrt(2.0);
        }
        r = detail::evolve_in_sectors(logical * c, terms, family, 0.0, pulse.duration, eo);
        r.states = r.states * c.adjoint();
    } else {
        r = evolve_states(logical, detail::assemble(terms, lattice.dim()), 0.0, pulse.duration, eo);
    }

    const Eigen::Matrix2cd block =
        (logical.adjoint() * r.states) * std::exp(cplx{0.0, basis.ground_energy * pulse.duration});
    ManipulationResult out;
    out.decomposition = decompose_logical_block(block);
    out.gap = basis.gap;
    out.norm_drift = r.norm_drift;
    out.convergence_deficit = r.convergence_deficit;
    if (out.decomposition.leakage > opts.max_leakage) {
        throw NonAdiabaticError("leakage " + std::to_string(out.decomposition.leakage) +
                                " out of the logical doublet: pulse is not adiabatic");
    }
    return out;
}

/// Logical rotation U = e^{i phase} (cos(angle) I + i sin(angle) axis . tau).
///
/// The gauge takes cos(angle) >= 0, so angle lies in [0, pi/2] and the axis
/// carries the sense of rotation. When angle is 0 the axis is undefined and
/// reported as zero with axis_defined = false.
struct RotationReport {
    std::array<double, 3> axis{0.0, 0.0, 0.0};
    double angle = 0.0;
    double phase = 0.0;
    bool axis_defined = false;
};

inline RotationReport rotation_axis_angle(const LogicalDecomposition &d, double unitarity_tolerance = 1e-6) {
    if (std::abs(d.leakage) > unitarity_tolerance) {
        throw std::domain_error("logical block is not unitary within tolerance (leakage " +
                                std::to_string(d.leakage) + ")");
    }
    const Eigen::Matrix2cd gram = d.block.adjoint() * d.block;
    if (max_abs_entry(gram - Eigen::Matrix2cd::Identity()) > 10 * unitarity_tolerance) {
        throw std::domain_error("logical block is not unitary within tolerance");
    }
    // alpha_1^2 - sum alpha_k^2 = e^{2 i phase} for a unitary block.
    const cplx z = d.alpha_1 * d.alpha_1 - d.alpha_x * d.alpha_x - d.alpha_y * d.alpha_y - d.alpha_z * d.alpha_z;
    double phase = 0.5 * std::arg(z);
    cplx g = std::exp(cplx{0.0, -phase});
    if ((d.alpha_1 * g).real() < 0.0) {
        phase += std::numbers::pi;
        g = -g;
    }
    const double c = (d.alpha_1 * g).real();
    const std::array<double, 3> s{(d.alpha_x * g).imag(), (d.alpha_y * g).imag(), (d.alpha_z * g).imag()};
    const double sn = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    RotationReport rep;
    rep.phase = std::remainder(phase, 2.0 * std::numbers::pi);
    rep.angle = std::atan2(sn, c);
    if (sn > 1e-12) {
        rep.axis_defined = true;
        for (int k = 0; k < 3; ++k) rep.axis[k] = s[k] / sn;
    }
    return rep;
}

/// Bisection for the g_max that produces `target_angle`, tolerance in radians.
/// Leakage up to `opts.max_leakage` is tolerated when reading the angle.
///
/// The bracket grows from `g_start` by doubling until the angle exceeds the
/// target; the angle must be monotonic inside the resulting bracket.
struct Calibration {
    double g_max = 0.0;
    double angle = 0.0;
    int evaluations = 0;
};

inline Calibration calibrate_g_max(const LatticeSpec &lattice, PulseSpec pulse, double target_angle,
                                   const ManipulationOptions &opts = {}, double g_start = 0.01,
                                   double tolerance = 1e-6) {
    if (!(target_angle > 0.0) || target_angle >= 0.5 * std::numbers::pi) {
        throw std::invalid_argument("calibration target angle must lie in (0, pi/2)");
    }
    Calibration cal;
    auto angle_at = [&](double g) {
        pulse.g_max = g;
        ++cal.evaluations;
        return rotation_axis_angle(run_manipulation(lattice, pulse, NoNoise{}, opts).decomposition, opts.max_leakage).angle;
    };
    double lo = 0.0, hi = g_start;
    double a_hi = angle_at(hi);
    while (a_hi < target_angle) {
        lo = hi;
        hi *= 2.0;
        a_hi = angle_at(hi);  // throws once g_max reaches the gap
    }
    double mid = 0.5 * (lo + hi), a_mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        a_mid = angle_at(mid);
        if (std::abs(a_mid - target_angle) < tolerance) break;
        (a_mid < target_angle ? lo : hi) = mid;
    }
    cal.g_max = mid;
    cal.angle = a_mid;
    return cal;
}

/// Rabi-like check of a noiseless amplitude sweep: the folded angles
/// atan2(|alpha_axis|, |alpha_1|) are unwrapped into a monotonic theta(g),
/// fitted by a polynomial in g^2, and the fitted cos/sin pair is compared with
/// the measured moduli.
///
/// `axis_sign` (optional) is the rotation-axis component along the pulse
/// direction. Under the cos >= 0 gauge it flips sign where theta crosses
/// pi/2, which fixes theta mod pi; theta is then unwrapped by continuity.
/// Without it the smallest branch not below the previous angle is taken,
/// which cannot see a crossing of pi/2 between samples.
struct RabiFit {
    std::vector<double> theta;         // unwrapped angle per point
    std::vector<double> coefficients;  // of g^2, g^4, ...
    double residual = 0.0;             // max deviation of |cos|, |sin| from the moduli
};

inline RabiFit fit_rabi_oscillation(const std::vector<double> &g, const std::vector<double> &abs_alpha_1,
                                    const std::vector<double> &abs_alpha_axis, int degree = 4,
                                    const std::vector<double> &axis_sign = {}) {
    if (g.size() != abs_alpha_1.size() || g.size() != abs_alpha_axis.size() ||
        (!axis_sign.empty() && axis_sign.size() != g.size())) {
        throw std::invalid_argument("fit_rabi_oscillation: inputs differ in length");
    }
    for (std::size_t k = 1; k < g.size(); ++k) {
        if (!(g[k] > g[k - 1])) throw std::invalid_argument("fit_rabi_oscillation: g must increase");
    }
    RabiFit out;
    double prev = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double folded = std::atan2(abs_alpha_axis[k], abs_alpha_1[k]);  // in [0, pi/2]
        double best = std::numeric_limits<double>::infinity();
        if (!axis_sign.empty()) {
            const double base = axis_sign[k] < 0.0 ? std::numbers::pi - folded : folded;  // theta mod pi
            best = base + std::numbers::pi * std::round((prev - base) / std::numbers::pi);
        } else {
            for (int m = 0; m < 64 && best == std::numeric_limits<double>::infinity(); ++m) {
                for (double c : {m * std::numbers::pi - folded, m * std::numbers::pi + folded}) {
                    if (c >= prev - 1e-9 && c < best) best = c;
                }
            }
        }
        out.theta.push_back(best);
        prev = best;
    }
    std::vector<int> powers;
    for (int k = 1; k <= degree; ++k) powers.push_back(2 * k);
    out.coefficients = fit_powers(g, out.theta, powers);
    for (std::size_t k = 0; k < g.size(); ++k) {
        double th = 0.0;
        for (std::size_t p = 0; p < powers.size(); ++p) th += out.coefficients[p] * std::pow(g[k], powers[p]);
        out.residual = std::max({out.residual, std::abs(std::abs(std::cos(th)) - abs_alpha_1[k]),
                                 std::abs(std::abs(std::sin(th)) - abs_alpha_axis[k])});
    }
    return out;
}

struct NoiseDeviationRow {
    double f = 0.0;
    std::array<double, 4> abs_alpha{};  // |alpha_1|, |alpha_x|, |alpha_y|, |alpha_z|
    std::array<double, 4> deviation{};  // | |alpha| - |alpha_ref| |
    double angle = 0.0;
    double angle_deviation = 0.0;
    std::array<double, 3> axis{};
    double leakage = 0.0;
};

struct NoiseDeviationSweep {
    LogicalDecomposition reference;
    double reference_angle = 0.0;
    std::vector<NoiseDeviationRow> rows;
    /// Log-log slopes of deviation vs f for alpha_x, alpha_y, alpha_z and the
    /// angle; NaN where fewer than two nonzero points exist.
    std::array<double, 3> slopes{};
    double angle_slope = 0.0;
};

/// Deviations of |alpha| from the noiseless pulse under directional noise f S^v.
inline NoiseDeviationSweep sweep_noise_deviation(const LatticeSpec &lattice, const PulseSpec &pulse, Axis noise_axis,
                                                 const std::vector<double> &amplitudes,
                                                 const ManipulationOptions &opts = {}) {
    NoiseDeviationSweep out;
    out.reference = run_manipulation(lattice, pulse, NoNoise{}, opts).decomposition;
    out.reference_angle = rotation_axis_angle(out.reference).angle;
    const auto ref = out.reference.alphas();
    for (double f : amplitudes) {
        const LogicalDecomposition d =
            run_manipulation(lattice, pulse, DirectionalNoise{noise_axis, f}, opts).decomposition;
        NoiseDeviationRow row;
        row.f = f;
        const auto a = d.alphas();
        for (int k = 0; k < 4; ++k) {
            row.abs_alpha[k] = std::abs(a[k]);
            row.deviation[k] = std::abs(std::abs(a[k]) - std::abs(ref[k]));
        }
        row.leakage = d.leakage;
        const RotationReport rep = rotation_axis_angle(d, 1e-3);
        row.angle = rep.angle;
        row.axis = rep.axis;
        row.angle_deviation = std::abs(rep.angle - out.reference_angle);
        out.rows.push_back(row);
    }
    auto slope_of = [&](auto pick) {
        std::vector<double> xs, ys;
        for (const auto &r : out.rows) {
            xs.push_back(r.f);
            ys.push_back(pick(r));
        }
        try {
            return fit_loglog(xs, ys).slope;
        } catch (const std::invalid_argument &) {
            return std::nan("");
        }
    };
    for (int k = 0; k < 3; ++k) out.slopes[k] = slope_of([k](const NoiseDeviationRow &r) { return r.deviation[k + 1]; });
    out.angle_slope = slope_of([](const NoiseDeviationRow &r) { return r.angle_deviation; });
    return out;
}

}  // namespace protq
