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
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "protq/fit.hpp"
#include "protq/lattice.hpp"
#include "protq/schedule.hpp"

namespace protq {

/// Levels closer than this (units of J) are treated as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-8;

struct SpectralData {
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::MatrixXcd eigenvectors;  // orthonormal columns
};

inline void require_hermitian(const DenseOperator &h) {
    if (!h.is_hermitian()) throw std::invalid_argument("diagonalization requires a hermitian operator");
}

inline SpectralData diagonalize(const DenseOperator &h) {
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Eigen::VectorXd eigenvalues(const DenseOperator &h) {
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    return solver.eigenvalues();
}

/// The protected doublet of H0 with a fixed phase convention.
///
/// zero_l lies in the P-sector of the ferromagnetic sigma^y = -1 product state
/// (every p_i = (-1)^N); one_l = Q_1 zero_l; the largest-magnitude amplitude of
/// zero_l is real and positive.
struct LogicalBasis {
    Eigen::VectorXcd zero_l;
    Eigen::VectorXcd one_l;
    double gap = 0.0;            // ground doublet to first excited level
    double ground_energy = 0.0;  // mean of the doublet
    std::vector<int> p_sector;   // eigenvalues p_i of zero_l

    [[nodiscard]] Eigen::MatrixXcd columns() const {
        Eigen::MatrixXcd m(zero_l.size(), 2);
        m.col(0) = zero_l;
        m.col(1) = one_l;
        return m;
    }
};

/// Makes the first largest-magnitude amplitude real and positive.
inline void fix_global_phase(Eigen::VectorXcd &v) {
    const double max_abs = v.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) >= max_abs - 1e-10) {
            v *= std::conj(v[k]) / std::abs(v[k]);
            v[k] = std::abs(v[k]);
            return;
        }
    }
}

inline LogicalBasis extract_logical_basis(const DenseOperator &h0, const SymmetryOperators &syms) {
    const SpectralData spec = diagonalize(h0);
    const auto &e = spec.eigenvalues;
    if (e.size() < 3) throw std::invalid_argument("logical basis needs at least three levels");
    if (e[1] - e[0] > kDegeneracyThreshold || e[2] - e[1] <= kDegeneracyThreshold) {
        throw std::domain_error("ground level is not exactly two-fold degenerate (E1-E0 = " +
                                std::to_string(e[1] - e[0]) + ", E2-E1 = " + std::to_string(e[2] - e[1]) + ")");
    }
    const Eigen::MatrixXcd ground = spec.eigenvectors.leftCols(2);

    // Every P_i must map the doublet into itself.
    for (std::size_t i = 0; i < syms.p.size(); ++i) {
        const Eigen::MatrixXcd pg = syms.p[i].matrix() * ground;
        const Eigen::MatrixXcd block = ground.adjoint() * pg;
        if (max_abs_entry(pg - ground * block) > 1e-8) {
            throw std::domain_error("P_" + std::to_string(i + 1) + " does not preserve the ground doublet");
        }
    }

    const int n = static_cast<int>(syms.p.size());
    const int sector = (n % 2 == 0) ? 1 : -1;
    const Eigen::Matrix2cd p1_block = ground.adjoint() * syms.p.front().matrix() * ground;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> block_solver(p1_block);
    const auto &pv = block_solver.eigenvalues();
    if (std::abs(pv[0] + 1.0) > 1e-8 || std::abs(pv[1] - 1.0) > 1e-8) {
        throw std::domain_error("P_1 does not split the ground doublet into +-1 sectors");
    }
    LogicalBasis basis;
    basis.zero_l = ground * block_solver.eigenvectors().col(sector > 0 ? 1 : 0);
    basis.zero_l.normalize();
    fix_global_phase(basis.zero_l);
    basis.one_l = syms.q.front().matrix() * basis.zero_l;

    for (std::size_t i = 0; i < syms.p.size(); ++i) {
        const Eigen::VectorXcd pz = syms.p[i].matrix() * basis.zero_l;
        const double val = pz.dot(basis.zero_l).real() >= 0 ? 1.0 : -1.0;  // <pz|z> = p_i
        if ((pz - val * basis.zero_l).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::domain_error("zero_l is not an eigenstate of P_" + std::to_string(i + 1));
        }
        basis.p_sector.push_back(static_cast<int>(val));
    }
    basis.gap = e[2] - e[0];
    basis.ground_energy = 0.5 * (e[0] + e[1]);
    return basis;
}

/// Orthonormal basis (columns) of the joint eigenspace {S_k = signs[k]} of
/// commuting involutions S_k.
inline Eigen::MatrixXcd symmetry_sector_basis(const std::vector<DenseOperator> &symmetries,
                                              const std::vector<int> &signs) {
    if (symmetries.empty() || symmetries.size() != signs.size()) {
        throw std::invalid_argument("symmetry_sector_basis: one sign per symmetry is required");
    }
    const Eigen::Index dim = symmetries.front().dim();
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t k = 0; k < symmetries.size(); ++k) {
        if (signs[k] != 1 && signs[k] != -1) throw std::invalid_argument("symmetry_sector_basis: sign must be +-1");
        if (symmetries[k].dim() != dim) throw std::invalid_argument("symmetry_sector_basis: dimension mismatch");
        proj = 0.5 * (proj + static_cast<double>(signs[k]) * (symmetries[k].matrix() * proj));
    }
    proj = 0.5 * (proj + proj.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj);
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetry_sector_basis: eigensolver failed");
    const Eigen::VectorXd &e = es.eigenvalues();
    Eigen::Index first = 0;
    while (first < dim && e[first] < 0.5) ++first;
    if (first == dim) throw std::domain_error("symmetry_sector_basis: empty sector");
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (std::abs(e[k] - (k < first ? 0.0 : 1.0)) > kRelationTolerance) {
            throw std::domain_error("symmetry_sector_basis: symmetries do not commute");
        }
    }
    return es.eigenvectors().rightCols(dim - first);
}

struct SplittingPoint {
    double h = 0.0;
    double splitting = 0.0;
};

struct SplittingScan {
    std::vector<SplittingPoint> points;
    double slope = 0.0;  // log-log, NaN when fewer than two positive points
    double gap = 0.0;    // unperturbed gap
};

/// Splitting of the two lowest levels of H0 + h S^axis for each h.
inline SplittingScan ground_splitting_scan(const LatticeSpec &lattice, Axis axis, const std::vector<double> &amplitudes,
                                           const CouplingProfile *couplings = nullptr) {
    const DenseOperator h0 = couplings ? build_protection_hamiltonian(lattice, *couplings)
                                       : build_protection_hamiltonian(lattice);
    const DenseOperator field = build_collective_field(lattice, axis);
    const Eigen::VectorXd e0 = eigenvalues(h0);
    SplittingScan scan;
    scan.gap = e0[2] - e0[0];
    for (double h : amplitudes) {
        if (!(h >= 0.0) || h >= 0.5 * scan.gap) {
            throw std::domain_error("splitting scan amplitude " + std::to_string(h) + " outside [0, gap/2)");
        }
        const Eigen::VectorXd e = eigenvalues(h0 + h * field);
        const double split = e[1] - e[0];
        if (e[2] - e[1] <= split) {
            throw std::domain_error("level crossing: perturbation closes the main gap at h = " + std::to_string(h));
        }
        scan.points.push_back({h, split});
    }
    std::vector<double> xs, ys;
    for (const auto &p : scan.points) {
        xs.push_back(p.h);
        ys.push_back(p.splitting);
    }
    try {
        scan.slope = fit_loglog(xs, ys).slope;
    } catch (const std::invalid_argument &) {
        scan.slope = std::nan("");
    }
    return scan;
}

struct SpectrumSample {
    double t = 0.0;
    double ramp = 0.0;
    Eigen::VectorXd levels;  // ascending, in units of J_x
    /// First excitation above the lowest level inside the P sector of the
    /// ferromagnetic S^y ground state (p_i = (-1)^n), in units of J_x. This is
    /// the gap that controls adiabaticity: P_i are conserved along the ramp.
    double sector_gap = 0.0;
};

/// Spectrum of H_t = f(t) H0 + (1 - f(t)) S^y at each sample time.
inline std::vector<SpectrumSample> instantaneous_spectrum(const LatticeSpec &lattice, const Schedule &schedule,
                                                          const std::vector<double> &sample_times) {
    schedule.validate();
    const DenseOperator h0 = build_protection_hamiltonian(lattice);
    const DenseOperator sy = build_collective_field(lattice, Axis::Y);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    const Eigen::MatrixXcd sector =
        symmetry_sector_basis(syms.p, std::vector<int>(lattice.n(), lattice.n() % 2 == 0 ? 1 : -1));
    std::vector<SpectrumSample> out;
    out.reserve(sample_times.size());
    for (double t : sample_times) {
        if (t < 0.0 || t > schedule.t_final) {
            throw std::domain_error("spectrum sample time " + std::to_string(t) + " outside [0, t_final]");
        }
        const double f = schedule_eval(schedule, t);
        const DenseOperator h = f * h0 + (1.0 - f) * sy;
        Eigen::MatrixXcd restricted = sector.adjoint() * h.matrix() * sector;
        restricted = 0.5 * (restricted + restricted.adjoint()).eval();
        const Eigen::VectorXd in_sector = eigenvalues(DenseOperator(std::move(restricted), true));
        out.push_back({t, f, eigenvalues(h) / lattice.j_x(), (in_sector[1] - in_sector[0]) / lattice.j_x()});
    }
    return out;
}

}  // namespace protq
