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
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "protq/lattice.hpp"
#include "protq/spectrum.hpp"

namespace protq {

using StateVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Maximum allowed norm drift over a run.
inline constexpr double kNormDriftTolerance = 1e-9;
/// Maximum allowed overlap deficit between a run and its half-step rerun.
inline constexpr double kConvergenceTolerance = 1e-10;
/// Largest admissible dt * ||H - offset||.
inline constexpr double kMaxStepFactor = 0.01;

/// Raised when the integrator's own accuracy monitors trip.
class IntegratorError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// H(t) = sum_k c_k(t) A_k with fixed hermitian A_k.
///
/// Terms are stored sparse for the matrix-vector products; each keeps the
/// extreme eigenvalues of its operator for the step-size bound.
class DrivenHamiltonian {
   public:
    struct Term {
        SparseOperator sparse;
        Eigen::MatrixXcd dense;  // used instead of `sparse` when the operator is well filled
        bool is_dense = false;
        std::function<double(double)> coefficient;  // empty = constant 1
        double lambda_min = 0.0;
        double lambda_max = 0.0;
    };

    explicit DrivenHamiltonian(Eigen::Index dim) : dim_(dim) {}

    DrivenHamiltonian &add(const DenseOperator &a, std::function<double(double)> coefficient = {}) {
        if (a.dim() != dim_) throw std::invalid_argument("hamiltonian term has the wrong dimension");
        const Eigen::VectorXd e = eigenvalues(a);
        Term term;
        term.sparse = a.matrix().sparseView(0.0, 0.0);
        term.sparse.makeCompressed();
        // Small or well-filled operators run faster as dense products.
        if (dim_ <= 64 || static_cast<double>(term.sparse.nonZeros()) > 0.2 * static_cast<double>(a.matrix().size())) {
            term.is_dense = true;
            term.dense = a.matrix();
            term.sparse = SparseOperator();
        }
        term.coefficient = std::move(coefficient);
        term.lambda_min = e[0];
        term.lambda_max = e[e.size() - 1];
        terms_.push_back(std::move(term));
        return *this;
    }

    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] const std::vector<Term> &terms() const { return terms_; }

    [[nodiscard]] static double coefficient_at(const Term &term, double t) {
        return term.coefficient ? term.coefficient(t) : 1.0;
    }

    /// out = (H(t) - offset) in.
    void apply(double t, double offset, const Eigen::MatrixXcd &in, Eigen::MatrixXcd &out,
               Eigen::MatrixXcd &scratch) const {
        out.noalias() = -offset * in;
        for (const auto &term : terms_) {
            const double c = coefficient_at(term, t);
            if (c == 0.0) continue;
            if (term.is_dense) {
                scratch.noalias() = term.dense * in;
            } else {
                scratch.noalias() = term.sparse * in;
            }
            out += c * scratch;
        }
    }

    /// Upper bound on ||H(t) - offset|| over [t0, t1] from per-term eigenvalue
    /// intervals (Weyl), sampled on a fine grid with a 1% margin.
    [[nodiscard]] double norm_bound(double t0, double t1, double offset) const {
        constexpr int kSamples = 4096;
        double bound = 0.0;
        for (int s = 0; s <= kSamples; ++s) {
            const double t = t0 + (t1 - t0) * s / kSamples;
            double lo = -offset, hi = -offset;
            for (const auto &term : terms_) {
                const double c = coefficient_at(term, t);
                lo += std::min(c * term.lambda_min, c * term.lambda_max);
                hi += std::max(c * term.lambda_min, c * term.lambda_max);
            }
            bound = std::max({bound, std::abs(lo), std::abs(hi)});
        }
        return 1.01 * bound;
    }

   private:
    Eigen::Index dim_;
    std::vector<Term> terms_;
};

struct EvolveOptions {
    /// Fixed step; 0 picks step_factor / ||H - energy_offset||.
    double dt = 0.0;
    double step_factor = kMaxStepFactor;
    /// Constant subtracted from H during stepping; the returned states carry
    /// the corresponding phase exp(-i offset (t1 - t0)), so results are exact
    /// states of H itself.
    double energy_offset = 0.0;
    bool check_convergence = true;
    /// Called with (t, states) every `observe_every` steps, and at t0 and t1.
    std::function<void(double, const Eigen::MatrixXcd &)> observer;
    std::size_t observe_every = 0;
};

struct EvolveResult {
    Eigen::MatrixXcd states;
    double dt = 0.0;
    std::size_t steps = 0;
    double norm_drift = 0.0;
    double convergence_deficit = 0.0;  // NaN when the check is disabled
};

namespace detail {

inline double max_norm_drift(const Eigen::MatrixXcd &states, const Eigen::VectorXd &initial_norms) {
    double drift = 0.0;
    for (Eigen::Index c = 0; c < states.cols(); ++c) {
        drift = std::max(drift, std::abs(states.col(c).norm() - initial_norms[c]));
    }
    return drift;
}

/// Fixed-step classical RK4 for i dpsi/dt = (H(t) - offset) psi.
inline Eigen::MatrixXcd rk4(const DrivenHamiltonian &h, Eigen::MatrixXcd psi, double t0, double dt, std::size_t steps,
                            double offset, const EvolveOptions *observe, double &drift,
                            const Eigen::VectorXd &initial_norms) {
    const cplx minus_i{0.0, -1.0};
    Eigen::MatrixXcd k1(psi.rows(), psi.cols()), k2(k1.rows(), k1.cols()), k3(k1.rows(), k1.cols()),
        k4(k1.rows(), k1.cols()), tmp(k1.rows(), k1.cols()), scratch(k1.rows(), k1.cols());
    auto emit = [&](double t) {
        if (!observe || !observe->observer) return;
        drift = std::max(drift, max_norm_drift(psi, initial_norms));
        const Eigen::MatrixXcd physical = psi * std::exp(cplx{0.0, -offset * (t - t0)});
        observe->observer(t, physical);
    };
    emit(t0);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        h.apply(t, offset, psi, k1, scratch);
        k1 *= minus_i;
        tmp = psi + (0.5 * dt) * k1;
        h.apply(t + 0.5 * dt, offset, tmp, k2, scratch);
        k2 *= minus_i;
        tmp = psi + (0.5 * dt) * k2;
        h.apply(t + 0.5 * dt, offset, tmp, k3, scratch);
        k3 *= minus_i;
        tmp = psi + dt * k3;
        h.apply(t + dt, offset, tmp, k4, scratch);
        k4 *= minus_i;
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (observe && observe->observe_every > 0 && (s + 1) % observe->observe_every == 0 && s + 1 < steps) {
            emit(t0 + static_cast<double>(s + 1) * dt);
        }
    }
    const double t1 = t0 + static_cast<double>(steps) * dt;
    emit(t1);
    drift = std::max(drift, max_norm_drift(psi, initial_norms));
    return psi * std::exp(cplx{0.0, -offset * (t1 - t0)});
}

}  // namespace detail

/// Propagates each column of `psi0` from t0 to t1 under H(t).
///
/// Throws IntegratorError if the norm drifts by more than 1e-9 or if a rerun
/// at dt/2 disagrees with the result by an overlap deficit above 1e-10.
inline EvolveResult evolve_states(const Eigen::MatrixXcd &psi0, const DrivenHamiltonian &h, double t0, double t1,
                                  const EvolveOptions &opts = {}) {
    if (psi0.rows() != h.dim()) throw std::invalid_argument("state dimension does not match the hamiltonian");
    if (!(t1 >= t0)) throw std::invalid_argument("evolution window must satisfy t1 >= t0");
    Eigen::VectorXd norms(psi0.cols());
    for (Eigen::Index c = 0; c < psi0.cols(); ++c) {
        norms[c] = psi0.col(c).norm();
        if (std::abs(norms[c] - 1.0) > kNormDriftTolerance) {
            throw std::invalid_argument("initial state is not normalized");
        }
    }
    EvolveResult result;
    if (t1 == t0) {
        result.states = psi0;
        return result;
    }
    const double bound = h.norm_bound(t0, t1, opts.energy_offset);
    const double span = t1 - t0;
    double dt = opts.dt;
    if (dt <= 0.0) {
        if (!(opts.step_factor > 0.0) || opts.step_factor > kMaxStepFactor) {
            throw std::invalid_argument("step_factor must lie in (0, 0.01]");
        }
        dt = bound > 0.0 ? opts.step_factor / bound : span;
    } else if (bound > 0.0 && dt * bound > kMaxStepFactor * (1.0 + 1e-12)) {
        throw std::invalid_argument("dt = " + std::to_string(dt) + " exceeds 0.01 / ||H|| = " +
                                    std::to_string(kMaxStepFactor / bound));
    }
    const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    result.steps = std::max<std::size_t>(steps, 1);
    result.dt = span / static_cast<double>(result.steps);

    double drift = 0.0;
    result.states = detail::rk4(h, psi0, t0, result.dt, result.steps, opts.energy_offset, &opts, drift, norms);
    result.norm_drift = drift;
    if (drift > kNormDriftTolerance) {
        throw IntegratorError("norm drift " + std::to_string(drift) + " exceeds 1e-9; step too large");
    }
    result.convergence_deficit = std::nan("");
    if (opts.check_convergence) {
        double fine_drift = 0.0;
        const Eigen::MatrixXcd fine = detail::rk4(h, psi0, t0, 0.5 * result.dt, 2 * result.steps,
                                                  opts.energy_offset, nullptr, fine_drift, norms);
        double deficit = 0.0;
        for (Eigen::Index c = 0; c < fine.cols(); ++c) {
            const double ov = std::norm(fine.col(c).dot(result.states.col(c))) /
                              (fine.col(c).squaredNorm() * result.states.col(c).squaredNorm());
            deficit = std::max(deficit, 1.0 - ov);
        }
        result.convergence_deficit = deficit;
        if (deficit > kConvergenceTolerance) {
            throw IntegratorError("step-halving check failed: overlap deficit " + std::to_string(deficit));
        }
    }
    return result;
}

inline EvolveResult evolve_state(const StateVector &psi0, const DrivenHamiltonian &h, double t0, double t1,
                                 const EvolveOptions &opts = {}) {
    return evolve_states(Eigen::MatrixXcd(psi0), h, t0, t1, opts);
}

/// |<a|b>|^2.
inline double fidelity(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::min(1.0, std::norm(a.dot(b)));
}

}  // namespace protq
