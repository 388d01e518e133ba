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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "protq/pauli.hpp"

namespace protq {

enum class RampForm { GaussianComplement };
enum class Envelope { Sin2, SkewedSin2 };

inline const char *envelope_name(Envelope e) { return e == Envelope::Sin2 ? "sin2" : "skewed_sin2"; }

inline Envelope parse_envelope(std::string_view s) {
    if (s == "sin2") return Envelope::Sin2;
    if (s == "skewed_sin2") return Envelope::SkewedSin2;
    throw std::invalid_argument("unknown envelope '" + std::string(s) + "'");
}

/// Ramp f(t) switching on the protection Hamiltonian over [0, t_final].
struct Schedule {
    double tau = 100.0;
    double t_final = 500.0;
    RampForm form = RampForm::GaussianComplement;

    /// Default window [0, 5 tau].
    static Schedule with_tau(double tau) {
        if (!(tau > 0.0)) throw std::invalid_argument("schedule tau must be > 0");
        return {tau, 5.0 * tau, RampForm::GaussianComplement};
    }

    void validate() const {
        if (!(tau > 0.0)) throw std::invalid_argument("schedule tau must be > 0");
        if (!(t_final > 0.0)) throw std::invalid_argument("schedule t_final must be > 0");
    }
};

/// Gate function g(t) for S^u during a manipulation over [0, duration].
///
/// Sin2: g_max sin^2(pi t/T). SkewedSin2: g_max sin^2(pi (t/T)^p) with p =
/// `skew`; it reaches g_max at t/T = 2^(-1/p) and is not symmetric under
/// t -> T - t.
struct PulseSpec {
    Axis axis = Axis::X;
    double g_max = 0.1;
    double duration = 60.0;
    Envelope envelope = Envelope::Sin2;
    double skew = 1.5;

    void validate() const {
        if (axis == Axis::Z) throw std::invalid_argument("manipulation axis must be X or Y");
        if (!(g_max >= 0.0)) throw std::invalid_argument("pulse g_max must be >= 0");
        if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be > 0");
        if (envelope == Envelope::SkewedSin2 && !(skew > 0.0)) throw std::invalid_argument("pulse skew must be > 0");
    }
};

inline double schedule_eval(const Schedule &s, double t) {
    if (t < 0.0) throw std::domain_error("schedule evaluated at negative time");
    const double x = t / s.tau;
    return -std::expm1(-x * x);
}

inline double schedule_eval(const PulseSpec &p, double t) {
    if (t < 0.0) throw std::domain_error("pulse evaluated at negative time");
    if (t >= p.duration) return 0.0;
    double s = t / p.duration;
    if (p.envelope == Envelope::SkewedSin2) s = std::pow(s, p.skew);
    const double v = std::sin(std::numbers::pi * s);
    return p.g_max * v * v;
}

}  // namespace protq
