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

#include <random>

#include "protq/lattice.hpp"
#include "protq/pauli.hpp"
#include "protq/spectrum.hpp"

using namespace protq;

namespace {

// Independent construction: explicit Kronecker products of 2x2 matrices in
// row-major site order, (1,1) outermost.
Eigen::MatrixXcd pauli2(Axis a) {
    Eigen::MatrixXcd m(2, 2);
    const cplx i{0.0, 1.0};
    switch (a) {
        case Axis::X: m << 0, 1, 1, 0; break;
        case Axis::Y: m << 0, -i, i, 0; break;
        case Axis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
    return out;
}

Eigen::MatrixXcd kron_string(int n, const PauliString &s) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            auto it = s.factors().find({i, j});
            m = kron(m, it == s.factors().end() ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(2, 2)) : pauli2(it->second));
        }
    }
    return m;
}

PauliString random_string(std::mt19937_64 &rng, int n, int max_weight) {
    PauliString s;
    std::vector<Site> sites;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) sites.push_back({i, j});
    }
    std::shuffle(sites.begin(), sites.end(), rng);
    const int w = static_cast<int>(rng() % static_cast<std::uint64_t>(max_weight + 1));
    for (int k = 0; k < w; ++k) s.set(sites[k], static_cast<Axis>(rng() % 3));
    return s;
}

double commutator(const DenseOperator &a, const DenseOperator &b) {
    return max_abs_entry(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double anticommutator(const DenseOperator &a, const DenseOperator &b) {
    return max_abs_entry(a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

}  // namespace

TEST(pauli_string, parse_and_print_round_trip) {
    const PauliString s = PauliString::parse("Y11 X21 Z12");
    EXPECT_EQ(s.weight(), 3u);
    EXPECT_EQ(s.str(), "Y11 Z12 X21");
    EXPECT_EQ(PauliString::parse(s.str()), s);
    EXPECT_EQ(PauliString::parse("Y1,1 X2,1 Z1,2"), s);
    EXPECT_TRUE(PauliString::parse("I").is_identity());
    EXPECT_TRUE(PauliString::parse("").is_identity());
    EXPECT_EQ(PauliString().str(), "I");
}

TEST(pauli_string, rejects_duplicates_and_bad_sites) {
    PauliString s;
    s.set({1, 1}, Axis::X);
    EXPECT_THROW(s.set({1, 1}, Axis::Y), std::invalid_argument);
    EXPECT_THROW(s.set({0, 1}, Axis::Y), std::out_of_range);
    EXPECT_THROW(PauliString::parse("Y11 X11"), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("Q11"), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("Y1"), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("Y3,3").validate(2), std::out_of_range);
    EXPECT_NO_THROW(PauliString::parse("Y3,3").validate(3));
    LatticeSpec lattice(2);
    EXPECT_THROW(build_pauli_string(lattice, PauliString::parse("X31")), std::out_of_range);
}

TEST(lattice_spec, validates_construction) {
    EXPECT_THROW(LatticeSpec(1), std::invalid_argument);
    EXPECT_THROW(LatticeSpec(4), std::invalid_argument);  // 16 spins over the dense budget
    EXPECT_THROW(LatticeSpec(2, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(LatticeSpec(2, 1.0, -1.0), std::invalid_argument);
    LatticeSpec l3(3);
    EXPECT_EQ(l3.dim(), 512);
    EXPECT_EQ(l3.spins(), 9);
}

TEST(dense_operator, hermitian_flag_is_checked) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(DenseOperator(m, true), std::invalid_argument);
    EXPECT_NO_THROW(DenseOperator(m, false));
    EXPECT_THROW(DenseOperator(Eigen::MatrixXcd::Zero(2, 3), false), std::invalid_argument);
    EXPECT_THROW(DenseOperator::identity(2) + DenseOperator::identity(4), std::invalid_argument);
}

TEST(build_pauli_string, identity_and_single_site) {
    LatticeSpec lattice(2);
    const DenseOperator id = build_pauli_string(lattice, PauliString());
    EXPECT_EQ(max_abs_entry(id.matrix() - Eigen::MatrixXcd::Identity(16, 16)), 0.0);

    const DenseOperator x = build_pauli_string(lattice, PauliString::parse("X11"));
    EXPECT_LT(max_abs_entry(x.matrix() * x.matrix() - Eigen::MatrixXcd::Identity(16, 16)), kExactTolerance);
    EXPECT_EQ(x.matrix().trace(), cplx(0.0, 0.0));
}

TEST(build_pauli_string, matches_kronecker_oracle) {
    std::mt19937_64 rng(7);
    for (int n : {2, 3}) {
        LatticeSpec lattice(n);
        for (int trial = 0; trial < (n == 2 ? 200 : 25); ++trial) {
            const PauliString s = random_string(rng, n, n * n);
            EXPECT_EQ(max_abs_entry(build_pauli_string(lattice, s).matrix() - kron_string(n, s)), 0.0) << s.str();
        }
    }
}

TEST(build_pauli_string, unitary_hermitian_involutive) {
    std::mt19937_64 rng(11);
    LatticeSpec lattice(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXcd m = build_pauli_string(lattice, random_string(rng, 3, 9)).matrix();
        const auto id = Eigen::MatrixXcd::Identity(512, 512);
        EXPECT_LT(max_abs_entry(m - m.adjoint()), kExactTolerance);
        EXPECT_LT(max_abs_entry(m * m - id), kExactTolerance);
        EXPECT_LT(max_abs_entry(m * m.adjoint() - id), kExactTolerance);
    }
}

TEST(build_pauli_string, homomorphism_on_disjoint_sites) {
    std::mt19937_64 rng(3);
    LatticeSpec lattice(2);
    for (int trial = 0; trial < 100; ++trial) {
        const PauliString a = random_string(rng, 2, 4);
        PauliString b;
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                if (!a.factors().contains({i, j}) && rng() % 2) b.set({i, j}, static_cast<Axis>(rng() % 3));
            }
        }
        PauliString u = a;
        for (const auto &[site, axis] : b.factors()) u.set(site, axis);
        const auto lhs = build_pauli_string(lattice, u).matrix();
        const auto rhs = (build_pauli_string(lattice, a).matrix() * build_pauli_string(lattice, b).matrix()).eval();
        EXPECT_LT(max_abs_entry(lhs - rhs), kExactTolerance);
    }
}

TEST(build_pauli_string, full_row_is_p_symmetry) {
    LatticeSpec lattice(2);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    EXPECT_EQ(max_abs_entry(build_pauli_string(lattice, PauliString::parse("Y11 Y12")).matrix() - syms.p[0].matrix()), 0.0);
    EXPECT_EQ(max_abs_entry(build_pauli_string(lattice, PauliString::parse("X12 X22")).matrix() - syms.q[1].matrix()), 0.0);
}

TEST(symmetry_operators, algebra_holds_exhaustively) {
    for (int n : {2, 3}) {
        LatticeSpec lattice(n);
        const SymmetryOperators syms = build_symmetry_operators(lattice);
        const auto id = Eigen::MatrixXcd::Identity(lattice.dim(), lattice.dim());
        for (int a = 0; a < n; ++a) {
            EXPECT_LT(max_abs_entry(syms.p[a].matrix() * syms.p[a].matrix() - id), kExactTolerance);
            EXPECT_LT(max_abs_entry(syms.q[a].matrix() * syms.q[a].matrix() - id), kExactTolerance);
            for (int b = 0; b < n; ++b) {
                EXPECT_LT(commutator(syms.p[a], syms.p[b]), kExactTolerance);
                EXPECT_LT(commutator(syms.q[a], syms.q[b]), kExactTolerance);
                EXPECT_LT(anticommutator(syms.p[a], syms.q[b]), kExactTolerance);
            }
        }
    }
}

TEST(protection_hamiltonian, commutes_with_symmetries) {
    for (int n : {2, 3}) {
        LatticeSpec lattice(n);
        const DenseOperator h0 = build_protection_hamiltonian(lattice);
        EXPECT_TRUE(h0.is_hermitian());
        const SymmetryOperators syms = build_symmetry_operators(lattice);
        for (int k = 0; k < n; ++k) {
            EXPECT_LT(commutator(h0, syms.p[k]), kExactTolerance);
            EXPECT_LT(commutator(h0, syms.q[k]), kExactTolerance);
        }
    }
}

// Pair-coupling form: each row/column contributes -(J/2)(sum sigma)^2, i.e.
// -J per unordered pair plus the constant -(J/2) n. Built here from squares
// of explicit sums to pin the normalization and the kept constant.
TEST(protection_hamiltonian, equals_squared_line_sums) {
    const int n = 2;
    LatticeSpec lattice(n, 0.7, 1.3);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 1; i <= n; ++i) {
        Eigen::MatrixXcd row = Eigen::MatrixXcd::Zero(16, 16), col = Eigen::MatrixXcd::Zero(16, 16);
        for (int j = 1; j <= n; ++j) {
            PauliString x, y;
            x.set({i, j}, Axis::X);
            y.set({j, i}, Axis::Y);
            row += kron_string(n, x);
            col += kron_string(n, y);
        }
        h -= 0.5 * 0.7 * row * row;
        h -= 0.5 * 1.3 * col * col;
    }
    EXPECT_LT(max_abs_entry(build_protection_hamiltonian(lattice).matrix() - h), 1e-13);
}

TEST(protection_hamiltonian, gap_and_degeneracy_n2) {
    LatticeSpec lattice(2);
    const Eigen::VectorXd e = eigenvalues(build_protection_hamiltonian(lattice));
    EXPECT_LT(e[1] - e[0], 1e-10);
    EXPECT_NEAR(e[2] - e[0], 2.0 * (std::sqrt(2.0) - 1.0), 1e-9);
    // Every level is two-fold degenerate.
    for (Eigen::Index k = 0; k + 1 < e.size(); k += 2) EXPECT_LT(e[k + 1] - e[k], 1e-10);
}

TEST(protection_hamiltonian, rejects_bad_profile) {
    LatticeSpec lattice(2);
    CouplingProfile p = CouplingProfile::uniform(lattice);
    p.row_j_x.pop_back();
    EXPECT_THROW(build_protection_hamiltonian(lattice, p), std::invalid_argument);
}

TEST(collective_field, spectrum_and_symmetries) {
    LatticeSpec lattice(2);
    const DenseOperator sy = build_collective_field(lattice, Axis::Y);
    const Eigen::VectorXd e = eigenvalues(sy);
    const std::vector<double> expected{-4, -2, -2, -2, -2, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 4};
    for (int k = 0; k < 16; ++k) EXPECT_NEAR(e[k], expected[k], 1e-12);

    const SymmetryOperators syms = build_symmetry_operators(lattice);
    const DenseOperator sx = build_collective_field(lattice, Axis::X);
    for (int k = 0; k < 2; ++k) {
        EXPECT_LT(commutator(sy, syms.p[k]), kExactTolerance);
        EXPECT_LT(commutator(sx, syms.q[k]), kExactTolerance);
        EXPECT_GT(commutator(sx, syms.p[k]), 0.1);
    }
}

TEST(collective_field, is_sum_of_single_sites) {
    LatticeSpec lattice(3);
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(512, 512);
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                PauliString s;
                s.set({i, j}, a);
                sum += kron_string(3, s);
            }
        }
        EXPECT_EQ(max_abs_entry(build_collective_field(lattice, a).matrix() - sum), 0.0);
    }
}

TEST(site_field, directions_per_site) {
    LatticeSpec lattice(2);
    std::vector<std::array<double, 3>> dirs(4, {0.0, 1.0, 0.0});
    EXPECT_LT(max_abs_entry(build_site_field(lattice, dirs).matrix() - build_collective_field(lattice, Axis::Y).matrix()),
              1e-15);
    dirs.pop_back();
    EXPECT_THROW(build_site_field(lattice, dirs), std::invalid_argument);
}

TEST(algebra_relation, classifies_pairs) {
    LatticeSpec lattice(2);
    const SymmetryOperators syms = build_symmetry_operators(lattice);
    EXPECT_EQ(algebra_relation(syms.p[0], syms.p[1]), Relation::Commute);
    EXPECT_EQ(algebra_relation(syms.p[0], syms.q[0]), Relation::Anticommute);
    const DenseOperator x = build_pauli_string(lattice, PauliString::parse("X11"));
    const DenseOperator y = build_pauli_string(lattice, PauliString::parse("Y11"));
    EXPECT_EQ(algebra_relation(x, y), Relation::Anticommute);
    EXPECT_EQ(algebra_relation(x, x + build_pauli_string(lattice, PauliString::parse("Z11"))), Relation::Neither);
    EXPECT_STREQ(relation_name(Relation::Anticommute), "anticommute");
}

TEST(algebra_relation, errors) {
    LatticeSpec l2(2), l3(3);
    const SymmetryOperators s2 = build_symmetry_operators(l2), s3 = build_symmetry_operators(l3);
    EXPECT_THROW(algebra_relation(s2.p[0], s3.p[0]), std::invalid_argument);
    const DenseOperator zero(Eigen::MatrixXcd::Zero(16, 16), true);
    EXPECT_THROW(algebra_relation(zero, s2.p[0]), std::domain_error);
}
