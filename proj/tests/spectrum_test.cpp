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

#include <gtest/gtest.h>

#include "protq/fit.hpp"
#include "protq/protocols.hpp"
#include "protq/spectrum.hpp"

using namespace protq;

namespace {

Eigen::Matrix2cd block_of(const LogicalBasis &b, const DenseOperator &op) {
    const Eigen::MatrixXcd l = b.columns();
    return l.adjoint() * op.matrix() * l;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace

TEST(diagonalize, collective_field_multiset) {
    LatticeSpec lattice(2);
    const SpectralData s = diagonalize(build_collective_field(lattice, Axis::Y));
    const std::vector<double> expected{-4, -2, -2, -2, -2, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 4};
    for (int k = 0; k < 16; ++k) EXPECT_NEAR(s.eigenvalues[k], expected[k], 1e-12);
}

TEST(diagonalize, residuals_and_orthonormality) {
    for (int n : {2, 3}) {
        LatticeSpec lattice(n);
        const DenseOperator h = build_protection_hamiltonian(lattice) + 0.05 * build_collective_field(lattice, Axis::X);
        const SpectralData s = diagonalize(h);
        const Eigen::MatrixXcd r = h.matrix() * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal();
        EXPECT_LT(max_abs_entry(r), 1e-10);
        EXPECT_LT(max_abs_entry(s.eigenvectors.adjoint() * s.eigenvectors -
                                Eigen::MatrixXcd::Identity(lattice.dim(), lattice.dim())),
                  1e-12);
        for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) EXPECT_LE(s.eigenvalues[k - 1], s.eigenvalues[k]);
    }
}

TEST(diagonalize, scaled_identity) {
    const DenseOperator c(2.5 * Eigen::MatrixXcd::Identity(8, 8), true);
    const Eigen::VectorXd e = eigenvalues(c);
    for (Eigen::Index k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(e[k], 2.5);
}

TEST(diagonalize, rejects_non_hermitian) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(diagonalize(DenseOperator(m, false)), std::invalid_argument);
}

TEST(logical_basis, n2_conventions) {
    LatticeSpec lattice(2);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    const DenseOperator h0 = build_protection_hamiltonian(lattice);
    const LogicalBasis b = extract_logical_basis(h0, syms);
    EXPECT_EQ(b.p_sector, (std::vector<int>{1, 1}));
    EXPECT_NEAR(b.gap, 2.0 * (std::sqrt(2.0) - 1.0), 1e-9);
    EXPECT_NEAR(b.ground_energy, -4.0 - 2.0 * std::sqrt(2.0), 1e-10);

    const Eigen::VectorXcd q1z = syms.q[0].matrix() * b.zero_l;
    EXPECT_LT(std::abs(b.zero_l.dot(q1z)), 1e-12);
    EXPECT_LT(std::abs(b.one_l.dot(q1z) - 1.0), 1e-12);

    // Both states are ground eigenvectors, orthonormal.
    for (const auto &v : {b.zero_l, b.one_l}) {
        EXPECT_LT(max_abs_entry(h0.matrix() * v - b.ground_energy * v), 1e-10);
        EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    }
    EXPECT_LT(std::abs(b.zero_l.dot(b.one_l)), 1e-12);

    // Global phase: the largest amplitude of |0_L> is real positive.
    Eigen::Index k;
    b.zero_l.cwiseAbs().maxCoeff(&k);
    EXPECT_EQ(b.zero_l[k].imag(), 0.0);
    EXPECT_GT(b.zero_l[k].real(), 0.0);
}

TEST(logical_basis, logical_operators_realized) {
    for (int n : {2, 3}) {
        LatticeSpec lattice(n);
        const SymmetryOperators syms = build_symmetry_operators(lattice);
        const LogicalBasis b = extract_logical_basis(build_protection_hamiltonian(lattice), syms);
        for (int k = 0; k < n; ++k) {
            const double sign = b.p_sector[k];
            EXPECT_LT(max_abs_entry(block_of(b, syms.p[k]) - sign * pauli_z()), 1e-9) << "P_" << k + 1;
            // Q_j Q_1 is a logical identity up to a sign fixed by the phases.
            const Eigen::Matrix2cd q = block_of(b, syms.q[k]);
            EXPECT_LT(std::min(max_abs_entry(q - pauli_x()), max_abs_entry(q + pauli_x())), 1e-9) << "Q_" << k + 1;
        }
        EXPECT_LT(max_abs_entry(block_of(b, syms.q[0]) - pauli_x()), 1e-9);
        for (std::size_t i = 0; i < b.p_sector.size(); ++i) {
            EXPECT_LT(max_abs_entry(syms.p[i].matrix() * b.one_l + b.p_sector[i] * b.one_l), 1e-10);
        }
    }
}

TEST(logical_basis, n3_sector_is_odd) {
    LatticeSpec lattice(3);
    const LogicalBasis b = extract_logical_basis(build_protection_hamiltonian(lattice), build_symmetry_operators(lattice));
    EXPECT_EQ(b.p_sector, (std::vector<int>{-1, -1, -1}));
    EXPECT_GT(b.gap, 0.5);
}

TEST(logical_basis, deterministic_and_rotation_independent) {
    LatticeSpec lattice(2);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    const DenseOperator h0 = build_protection_hamiltonian(lattice);
    const LogicalBasis a = extract_logical_basis(h0, syms);
    const LogicalBasis b = extract_logical_basis(h0, syms);
    EXPECT_EQ(max_abs_entry(a.zero_l - b.zero_l), 0.0);
    // An affine map of H0 changes the solver's internal doublet rotation but
    // not the physical states or their phase convention.
    const LogicalBasis c = extract_logical_basis(3.0 * h0 + DenseOperator::identity(16), syms);
    EXPECT_NEAR(std::abs(a.zero_l.dot(c.zero_l)), 1.0, 1e-12);
    EXPECT_LT(max_abs_entry(a.zero_l - c.zero_l), 1e-10);
    EXPECT_LT(max_abs_entry(a.one_l - c.one_l), 1e-10);
}

TEST(logical_basis, rejects_wrong_degeneracy) {
    LatticeSpec lattice(2);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    EXPECT_THROW(extract_logical_basis(build_collective_field(lattice, Axis::Y), syms), std::domain_error);
    EXPECT_THROW(extract_logical_basis(build_protection_hamiltonian(lattice) + 0.1 * build_collective_field(lattice, Axis::X),
                                       syms),
                 std::domain_error);
}

TEST(logical_basis, rejects_symmetry_violation) {
    LatticeSpec lattice(2);
    SymmetryOperators fake = build_symmetry_operators(lattice);
    fake.p[0] = build_pauli_string(lattice, PauliString::parse("X11"));
    EXPECT_THROW(extract_logical_basis(build_protection_hamiltonian(lattice), fake), std::domain_error);
}

TEST(symmetry_sector_basis, projects_onto_joint_eigenspace) {
    LatticeSpec lattice(3);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    const std::vector<int> signs{1, -1, 1};
    const Eigen::MatrixXcd v = symmetry_sector_basis(syms.p, signs);
    EXPECT_EQ(v.cols(), 64);
    EXPECT_LT(max_abs_entry(v.adjoint() * v - Eigen::MatrixXcd::Identity(64, 64)), 1e-12);
    for (int k = 0; k < 3; ++k) EXPECT_LT(max_abs_entry(syms.p[k].matrix() * v - signs[k] * v), 1e-12);
    EXPECT_THROW(symmetry_sector_basis(syms.p, {1, 1}), std::invalid_argument);
    EXPECT_THROW(symmetry_sector_basis(syms.p, {1, 2, 1}), std::invalid_argument);
    // P_1 and Q_1 anticommute: no joint eigenspace.
    EXPECT_THROW(symmetry_sector_basis({syms.p[0], syms.q[0]}, {1, 1}), std::domain_error);
}

TEST(ground_splitting_scan, power_law_n2) {
    LatticeSpec lattice(2);
    const SplittingScan scan = ground_splitting_scan(lattice, Axis::X, logspace(1e-3, 1e-1, 9));
    EXPECT_NEAR(scan.slope, 2.0, 0.1);
    EXPECT_NEAR(scan.gap, 2.0 * (std::sqrt(2.0) - 1.0), 1e-9);
}

TEST(ground_splitting_scan, power_law_n3) {
    LatticeSpec lattice(3);
    const SplittingScan scan = ground_splitting_scan(lattice, Axis::X, logspace(1e-3, 1e-1, 7));
    EXPECT_NEAR(scan.slope, 3.0, 0.15);
}

TEST(ground_splitting_scan, zero_field_and_errors) {
    LatticeSpec lattice(2);
    const SplittingScan scan = ground_splitting_scan(lattice, Axis::Y, {0.0});
    EXPECT_LT(scan.points[0].splitting, 1e-12);
    EXPECT_TRUE(std::isnan(scan.slope));
    EXPECT_THROW(ground_splitting_scan(lattice, Axis::X, {0.5}), std::domain_error);
    EXPECT_THROW(ground_splitting_scan(lattice, Axis::X, {-1e-3}), std::domain_error);
}

TEST(ground_splitting_scan, coupling_fluctuations_keep_degeneracy) {
    for (int n : {2, 3}) {
        LatticeSpec lattice(n);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const CouplingProfile p = realized_couplings(lattice, CouplingFluctuationNoise{0.1, seed});
            const SplittingScan scan = ground_splitting_scan(lattice, Axis::X, {0.0}, &p);
            EXPECT_LT(scan.points[0].splitting, 1e-12) << "n=" << n << " seed=" << seed;
        }
    }
}

TEST(instantaneous_spectrum, endpoints) {
    LatticeSpec lattice(2);
    const Schedule s = Schedule::with_tau(10.0);
    const auto samples = instantaneous_spectrum(lattice, s, {0.0, s.t_final});
    const Eigen::VectorXd sy = eigenvalues(build_collective_field(lattice, Axis::Y));
    const Eigen::VectorXd h0 = eigenvalues(build_protection_hamiltonian(lattice));
    EXPECT_LT((samples[0].levels - sy).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((samples[1].levels - h0).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(samples[1].sector_gap, 2.0 * (std::sqrt(2.0) - 1.0), 1e-8);
    // S^y inside the sector: single flips change a row parity, so the first
    // excitation flips two spins of one row, -4 -> 0.
    EXPECT_NEAR(samples[0].sector_gap, 4.0, 1e-12);
}

TEST(instantaneous_spectrum, no_crossing_along_ramp) {
    LatticeSpec lattice(2);
    const Schedule s = Schedule::with_tau(100.0);
    std::vector<double> times;
    for (int k = 0; k <= 2000; ++k) times.push_back(s.t_final * k / 2000.0);
    double min_gap = 1e9;
    for (const auto &p : instantaneous_spectrum(lattice, s, times)) min_gap = std::min(min_gap, p.sector_gap);
    EXPECT_GT(min_gap, 0.5);
}

TEST(instantaneous_spectrum, normalized_by_j) {
    LatticeSpec lattice(2, 2.0, 2.0);
    const auto s = instantaneous_spectrum(lattice, Schedule::with_tau(1.0), {5.0});
    EXPECT_NEAR(s[0].levels[2] - s[0].levels[0], 2.0 * (std::sqrt(2.0) - 1.0), 1e-8);
    EXPECT_THROW(instantaneous_spectrum(lattice, Schedule::with_tau(1.0), {6.0}), std::domain_error);
}
