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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "protq/pauli.hpp"

namespace protq {

using cplx = std::complex<double>;

/// Entrywise tolerance for exact operator identities.
inline constexpr double kExactTolerance = 1e-12;
/// Entrywise tolerance for (anti)commutation classification.
inline constexpr double kRelationTolerance = 1e-10;
/// Dense-matrix budget: at most this many spins.
inline constexpr int kMaxSpins = 12;

/// N x N lattice with the two couplings of the protection Hamiltonian.
///
/// Couplings are pair couplings: J_x multiplies each sigma^x sigma^x pair on a
/// row, J_y each sigma^y sigma^y pair on a column. Energies are in units of
/// J_x (hbar = 1).
class LatticeSpec {
   public:
    explicit LatticeSpec(int n, double j_x = 1.0, double j_y = 1.0) : n_(n), j_x_(j_x), j_y_(j_y) {
        if (n < 2) throw std::invalid_argument("lattice side n must be >= 2, got " + std::to_string(n));
        if (n * n > kMaxSpins) {
            throw std::invalid_argument("lattice " + std::to_string(n) + "x" + std::to_string(n) +
                                        " exceeds the dense budget of " + std::to_string(kMaxSpins) + " spins");
        }
        if (!(j_x > 0.0)) throw std::invalid_argument("coupling j_x must be > 0");
        if (!(j_y > 0.0)) throw std::invalid_argument("coupling j_y must be > 0");
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] double j_x() const { return j_x_; }
    [[nodiscard]] double j_y() const { return j_y_; }
    [[nodiscard]] int spins() const { return n_ * n_; }
    [[nodiscard]] Eigen::Index dim() const { return Eigen::Index{1} << spins(); }

    /// Bit of the basis index that stores the spin at `s` ((1,1) is the most
    /// significant factor of the tensor product).
    [[nodiscard]] int bit_of(Site s) const { return spins() - 1 - ((s.row - 1) * n_ + (s.col - 1)); }

   private:
    int n_;
    double j_x_;
    double j_y_;
};

/// Dense complex operator on the full 2^(N^2)-dimensional space.
class DenseOperator {
   public:
    DenseOperator() = default;

    /// If `hermitian` is set the matrix is checked against its adjoint.
    DenseOperator(Eigen::MatrixXcd m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("operator matrix must be square");
        if (hermitian_) {
            double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
            if (dev >= kExactTolerance) {
                throw std::invalid_argument("operator flagged hermitian deviates from its adjoint by " +
                                            std::to_string(dev));
            }
        }
    }

    static DenseOperator identity(Eigen::Index dim) { return {Eigen::MatrixXcd::Identity(dim, dim), true}; }

    [[nodiscard]] const Eigen::MatrixXcd &matrix() const { return m_; }
    [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
    [[nodiscard]] bool is_hermitian() const { return hermitian_; }

    friend DenseOperator operator+(const DenseOperator &a, const DenseOperator &b) {
        check_same_dim(a, b);
        return {a.m_ + b.m_, a.hermitian_ && b.hermitian_};
    }
    friend DenseOperator operator-(const DenseOperator &a, const DenseOperator &b) {
        check_same_dim(a, b);
        return {a.m_ - b.m_, a.hermitian_ && b.hermitian_};
    }
    friend DenseOperator operator*(double c, const DenseOperator &a) { return {c * a.m_, a.hermitian_}; }
    friend DenseOperator operator*(const DenseOperator &a, const DenseOperator &b) {
        check_same_dim(a, b);
        return {a.m_ * b.m_, false};
    }

    static void check_same_dim(const DenseOperator &a, const DenseOperator &b) {
        if (a.dim() != b.dim()) {
            throw std::invalid_argument("operator dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                        std::to_string(b.dim()));
        }
    }

   private:
    Eigen::MatrixXcd m_;
    bool hermitian_ = false;
};

inline double max_abs_entry(const Eigen::MatrixXcd &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Matrix of a Pauli string. Each string is a signed permutation: column x has
/// a single entry at row x ^ flip_mask.
inline DenseOperator build_pauli_string(const LatticeSpec &lattice, const PauliString &s) {
    s.validate(lattice.n());
    const Eigen::Index dim = lattice.dim();
    std::uint64_t flip = 0;
    std::uint64_t y_mask = 0;
    std::uint64_t z_mask = 0;
    for (const auto &[site, axis] : s.factors()) {
        const std::uint64_t bit = std::uint64_t{1} << lattice.bit_of(site);
        if (axis != Axis::Z) flip |= bit;
        if (axis == Axis::Y) y_mask |= bit;
        if (axis == Axis::Z) z_mask |= bit;
    }
    const int y_count = std::popcount(y_mask);
    // sigma^y |s> = i (-1)^s |1-s>, so a string with k Y factors picks up
    // i^k (-1)^(number of Y sites in state 1).
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx y_phase = kIPow[y_count % 4];
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        const auto ux = static_cast<std::uint64_t>(x);
        const int sign_bits = std::popcount(ux & (y_mask | z_mask));
        const double sign = (sign_bits % 2 == 0) ? 1.0 : -1.0;
        m(static_cast<Eigen::Index>(ux ^ flip), x) = sign * y_phase;
    }
    return {std::move(m), true};
}

/// Per-row and per-column couplings. Rows carry the sigma^x terms, columns the
/// sigma^y terms.
struct CouplingProfile {
    std::vector<double> row_j_x;
    std::vector<double> col_j_y;

    static CouplingProfile uniform(const LatticeSpec &lattice) {
        return {std::vector<double>(lattice.n(), lattice.j_x()), std::vector<double>(lattice.n(), lattice.j_y())};
    }
};

/// H0 = -sum_i (J_x/2) (sum_j sigma^x_ij)^2 - sum_j (J_y/2) (sum_i sigma^y_ij)^2.
///
/// The constant from sigma^2 = 1 is kept: each squared row/column sum
/// contributes N plus twice the pair sum.
inline DenseOperator build_protection_hamiltonian(const LatticeSpec &lattice, const CouplingProfile &couplings) {
    const int n = lattice.n();
    if (static_cast<int>(couplings.row_j_x.size()) != n || static_cast<int>(couplings.col_j_y.size()) != n) {
        throw std::invalid_argument("coupling profile must have one entry per row and per column");
    }
    const Eigen::Index dim = lattice.dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    double constant = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double j = couplings.row_j_x[i - 1];
        constant -= 0.5 * j * n;
        for (int a = 1; a <= n; ++a) {
            for (int b = a + 1; b <= n; ++b) {
                PauliString pair;
                pair.set({i, a}, Axis::X).set({i, b}, Axis::X);
                h -= j * build_pauli_string(lattice, pair).matrix();
            }
        }
    }
    for (int jcol = 1; jcol <= n; ++jcol) {
        const double j = couplings.col_j_y[jcol - 1];
        constant -= 0.5 * j * n;
        for (int a = 1; a <= n; ++a) {
            for (int b = a + 1; b <= n; ++b) {
                PauliString pair;
                pair.set({a, jcol}, Axis::Y).set({b, jcol}, Axis::Y);
                h -= j * build_pauli_string(lattice, pair).matrix();
            }
        }
    }
    h.diagonal().array() += constant;
    return {std::move(h), true};
}

inline DenseOperator build_protection_hamiltonian(const LatticeSpec &lattice) {
    return build_protection_hamiltonian(lattice, CouplingProfile::uniform(lattice));
}

struct SymmetryOperators {
    std::vector<DenseOperator> p;  // P_1..P_n, sigma^y along rows
    std::vector<DenseOperator> q;  // Q_1..Q_n, sigma^x along columns
};

inline SymmetryOperators build_symmetry_operators(const LatticeSpec &lattice) {
    SymmetryOperators out;
    for (int k = 1; k <= lattice.n(); ++k) {
        out.p.push_back(build_pauli_string(lattice, row_string(lattice.n(), k, Axis::Y)));
        out.q.push_back(build_pauli_string(lattice, column_string(lattice.n(), k, Axis::X)));
    }
    return out;
}

/// S^u = sum over all sites of sigma^u.
inline DenseOperator build_collective_field(const LatticeSpec &lattice, Axis axis) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim());
    for (int i = 1; i <= lattice.n(); ++i) {
        for (int j = 1; j <= lattice.n(); ++j) {
            PauliString s;
            s.set({i, j}, axis);
            m += build_pauli_string(lattice, s).matrix();
        }
    }
    return {std::move(m), true};
}

/// Single-site field with an arbitrary direction per site: sum_k n_k . sigma_k.
inline DenseOperator build_site_field(const LatticeSpec &lattice, const std::vector<std::array<double, 3>> &dirs) {
    if (static_cast<int>(dirs.size()) != lattice.spins()) {
        throw std::invalid_argument("site field needs one direction per spin");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim());
    int k = 0;
    for (int i = 1; i <= lattice.n(); ++i) {
        for (int j = 1; j <= lattice.n(); ++j, ++k) {
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                const double c = dirs[k][static_cast<int>(a)];
                if (c == 0.0) continue;
                PauliString s;
                s.set({i, j}, a);
                m += c * build_pauli_string(lattice, s).matrix();
            }
        }
    }
    return {std::move(m), true};
}

enum class Relation { Commute, Anticommute, Neither };

inline const char *relation_name(Relation r) {
    switch (r) {
        case Relation::Commute: return "commute";
        case Relation::Anticommute: return "anticommute";
        case Relation::Neither: return "neither";
    }
    return "?";
}

inline Relation algebra_relation(const DenseOperator &a, const DenseOperator &b) {
    DenseOperator::check_same_dim(a, b);
    const Eigen::MatrixXcd ab = a.matrix() * b.matrix();
    const Eigen::MatrixXcd ba = b.matrix() * a.matrix();
    const bool commute = max_abs_entry(ab - ba) < kRelationTolerance;
    const bool anticommute = max_abs_entry(ab + ba) < kRelationTolerance;
    if (commute && anticommute) {
        throw std::domain_error("relation is ambiguous: operators both commute and anticommute (zero operand)");
    }
    if (commute) return Relation::Commute;
    if (anticommute) return Relation::Anticommute;
    return Relation::Neither;
}

}  // namespace protq
