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
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "protq/lattice.hpp"
#include "protq/pauli.hpp"
#include "protq/protocols.hpp"
#include "protq/spectrum.hpp"

namespace protq {

/// Effect of an operator on one family of symmetry eigenvalues.
enum class SectorAction { PreserveAll, FlipAll, Mixed };

/// Effective logical operator a string induces inside the protected doublet.
enum class LogicalClass { Identity, TauX, TauY, TauZ, Null };

inline const char *sector_action_name(SectorAction a) {
    switch (a) {
        case SectorAction::PreserveAll: return "PreserveAll";
        case SectorAction::FlipAll: return "FlipAll";
        case SectorAction::Mixed: return "Mixed";
    }
    return "?";
}

inline const char *logical_class_name(LogicalClass c) {
    switch (c) {
        case LogicalClass::Identity: return "Identity";
        case LogicalClass::TauX: return "TauX";
        case LogicalClass::TauY: return "TauY";
        case LogicalClass::TauZ: return "TauZ";
        case LogicalClass::Null: return "Null";
    }
    return "?";
}

struct ClassifierVerdict {
    SectorAction row_action = SectorAction::PreserveAll;  // on the p_i
    SectorAction col_action = SectorAction::PreserveAll;  // on the q_j
    LogicalClass logical_class = LogicalClass::Identity;
};

/// Rows act on p_i, columns on q_j:
///   (Preserve, Preserve) -> I      (Preserve, Flip) -> tau^z
///   (Flip, Preserve)     -> tau^x  (Flip, Flip)     -> tau^y
/// and any Mixed action leaves the doublet (Null).
inline LogicalClass logical_class_of(SectorAction rows, SectorAction cols) {
    if (rows == SectorAction::Mixed || cols == SectorAction::Mixed) return LogicalClass::Null;
    if (rows == SectorAction::PreserveAll) {
        return cols == SectorAction::PreserveAll ? LogicalClass::Identity : LogicalClass::TauZ;
    }
    return cols == SectorAction::PreserveAll ? LogicalClass::TauX : LogicalClass::TauY;
}

namespace detail {

inline SectorAction aggregate(std::uint64_t flip_mask, int n) {
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    if (flip_mask == 0) return SectorAction::PreserveAll;
    if (flip_mask == all) return SectorAction::FlipAll;
    return SectorAction::Mixed;
}

/// sigma^u anticommutes with the sigma^y product of its row unless u = Y, and
/// with the sigma^x product of its column unless u = X.
inline bool flips_row(Axis a) { return a != Axis::Y; }
inline bool flips_col(Axis a) { return a != Axis::X; }

}  // namespace detail

/// Parity counting only; no matrices.
inline ClassifierVerdict classify_string(const PauliString &s, int n) {
    if (n < 1 || n > 32) throw std::invalid_argument("classifier lattice side out of range");
    s.validate(n);
    std::uint64_t rows = 0, cols = 0;
    for (const auto &[site, axis] : s.factors()) {
        if (detail::flips_row(axis)) rows ^= std::uint64_t{1} << (site.row - 1);
        if (detail::flips_col(axis)) cols ^= std::uint64_t{1} << (site.col - 1);
    }
    ClassifierVerdict v;
    v.row_action = detail::aggregate(rows, n);
    v.col_action = detail::aggregate(cols, n);
    v.logical_class = logical_class_of(v.row_action, v.col_action);
    return v;
}

/// Product of two strings up to phase (site-wise Pauli multiplication).
inline PauliString pauli_product(const PauliString &a, const PauliString &b) {
    std::map<Site, Axis> merged = a.factors();
    for (const auto &[site, axis] : b.factors()) {
        auto it = merged.find(site);
        if (it == merged.end()) {
            merged.emplace(site, axis);
        } else if (it->second == axis) {
            merged.erase(it);
        } else {
            // XY ~ Z, YZ ~ X, ZX ~ Y: the remaining axis.
            it->second = static_cast<Axis>(3 - static_cast<int>(it->second) - static_cast<int>(axis));
        }
    }
    PauliString out;
    for (const auto &[site, axis] : merged) out.set(site, axis);
    return out;
}

/// Pauli multiplication table on classes, Null absorbing.
inline LogicalClass class_product(LogicalClass a, LogicalClass b) {
    if (a == LogicalClass::Null || b == LogicalClass::Null) return LogicalClass::Null;
    if (a == LogicalClass::Identity) return b;
    if (b == LogicalClass::Identity) return a;
    if (a == b) return LogicalClass::Identity;
    const int sum = static_cast<int>(a) + static_cast<int>(b);  // TauX=1, TauY=2, TauZ=3
    return static_cast<LogicalClass>(6 - sum);
}

struct OracleResult {
    Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
    LogicalClass predicted = LogicalClass::Null;
    cplx coefficient{0.0, 0.0};  // block = coefficient * predicted operator
    double residual = 0.0;
    bool agrees = false;
};

inline Eigen::Matrix2cd logical_class_matrix(LogicalClass c) {
    switch (c) {
        case LogicalClass::Identity: return Eigen::Matrix2cd::Identity();
        case LogicalClass::TauX: return tau_matrix(Axis::X);
        case LogicalClass::TauY: return tau_matrix(Axis::Y);
        case LogicalClass::TauZ: return tau_matrix(Axis::Z);
        case LogicalClass::Null: break;
    }
    return Eigen::Matrix2cd::Zero();
}

/// Brute-force check of the classifier: projects the dense string onto the
/// doublet and tests that the block is a multiple of the predicted operator
/// (zero for Null) within 1e-10.
inline OracleResult logical_projection_oracle(const PauliString &s, const LatticeSpec &lattice,
                                              const LogicalBasis &basis) {
    if (basis.zero_l.size() != lattice.dim()) throw std::invalid_argument("logical basis belongs to another lattice");
    const DenseOperator op = build_pauli_string(lattice, s);
    const Eigen::MatrixXcd l = basis.columns();
    OracleResult r;
    r.block = l.adjoint() * op.matrix() * l;
    r.predicted = classify_string(s, lattice.n()).logical_class;
    const Eigen::Matrix2cd e = logical_class_matrix(r.predicted);
    if (r.predicted != LogicalClass::Null) r.coefficient = (e.adjoint() * r.block).trace() / 2.0;
    r.residual = max_abs_entry(r.block - r.coefficient * e);
    r.agrees = r.residual < kRelationTolerance;
    return r;
}

namespace detail {

using ParityState = std::pair<std::uint64_t, std::uint64_t>;  // (row flips, column flips)

/// Parity states reachable with exactly m single-site sigma^axis factors, for
/// m = 0..max_order.
inline std::vector<std::set<ParityState>> reachable_parities(Axis axis, int n, int max_order) {
    std::vector<std::set<ParityState>> out(max_order + 1);
    out[0].insert({0, 0});
    for (int m = 1; m <= max_order; ++m) {
        for (const auto &[r, c] : out[m - 1]) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    out[m].insert({flips_row(axis) ? r ^ (std::uint64_t{1} << i) : r,
                                   flips_col(axis) ? c ^ (std::uint64_t{1} << j) : c});
                }
            }
        }
    }
    return out;
}

inline ParityState target_parity(LogicalClass c, int n) {
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    switch (c) {
        case LogicalClass::TauX: return {all, 0};
        case LogicalClass::TauY: return {all, all};
        case LogicalClass::TauZ: return {0, all};
        default: return {0, 0};
    }
}

}  // namespace detail

/// Smallest number of sigma^u factors whose product acts nontrivially inside
/// the doublet (class TauX, TauY or TauZ).
inline int minimum_effective_order(Axis u, int n) {
    if (n < 1 || n > 10) throw std::invalid_argument("minimum_effective_order: lattice side out of range");
    const int max_order = 2 * n + 2;
    const auto reach = detail::reachable_parities(u, n, max_order);
    for (int m = 1; m <= max_order; ++m) {
        for (LogicalClass c : {LogicalClass::TauX, LogicalClass::TauY, LogicalClass::TauZ}) {
            if (reach[m].contains(detail::target_parity(c, n))) return m;
        }
    }
    throw std::logic_error("no nontrivial product of single-site factors exists");
}

/// Leading deviation g^m f^k / Delta^(m+k-1) of one logical class, normalized
/// by the noiseless manipulation effect g^M / Delta^(M-1):
///   (f)^f_exponent (g_max)^g_exponent (Delta)^gap_exponent.
struct ScalingTerm {
    LogicalClass logical_class = LogicalClass::Identity;
    bool relevant = true;   // false for the Identity entry
    bool reachable = true;  // false when no finite order reaches the class
    int noise_order = 0;
    int manipulation_order = 0;
    int f_exponent = 0;
    int g_exponent = 0;
    int gap_exponent = 0;
};

struct ScalingPrediction {
    Axis manipulation_axis = Axis::Y;
    Axis noise_axis = Axis::X;
    int n = 2;
    int manipulation_order = 0;  // M of the noiseless effect
    LogicalClass manipulated_class = LogicalClass::TauZ;
    bool parallel = false;
    /// Indexed by LogicalClass Identity, TauX, TauY, TauZ.
    std::array<ScalingTerm, 4> terms{};

    [[nodiscard]] const ScalingTerm &term(LogicalClass c) const { return terms.at(static_cast<std::size_t>(c)); }
};

/// Leading noise power for each logical class when manipulating along u with
/// static noise along v, from the minimal orders at which products of
/// manipulation and noise factors satisfy each class's parity condition.
inline ScalingPrediction predict_dominant_scaling(Axis u, Axis v, int n) {
    if (u == Axis::Z) throw std::invalid_argument("manipulations along Z are not supported");
    if (n < 2 || n > 8) throw std::invalid_argument("predict_dominant_scaling: lattice side out of range");
    ScalingPrediction p;
    p.manipulation_axis = u;
    p.noise_axis = v;
    p.n = n;
    p.parallel = (u == v);
    p.manipulation_order = minimum_effective_order(u, n);
    p.manipulated_class = (u == Axis::X) ? LogicalClass::TauX : LogicalClass::TauZ;

    const int max_order = 2 * n + 2;
    const auto reach_u = detail::reachable_parities(u, n, max_order);
    const auto reach_v = detail::reachable_parities(v, n, max_order);
    for (LogicalClass c : {LogicalClass::Identity, LogicalClass::TauX, LogicalClass::TauY, LogicalClass::TauZ}) {
        ScalingTerm t;
        t.logical_class = c;
        t.relevant = (c != LogicalClass::Identity);
        t.reachable = false;
        const auto target = detail::target_parity(c, n);
        for (int k = 1; k <= max_order && !t.reachable; ++k) {
            for (int m = 0; m <= max_order && !t.reachable; ++m) {
                for (const auto &[rv, cv] : reach_v[k]) {
                    if (reach_u[m].contains({rv ^ target.first, cv ^ target.second})) {
                        t.reachable = true;
                        t.noise_order = k;
                        t.manipulation_order = m;
                        break;
                    }
                }
            }
        }
        if (t.reachable) {
            t.f_exponent = t.noise_order;
            t.g_exponent = t.manipulation_order - p.manipulation_order;
            t.gap_exponent = p.manipulation_order - t.manipulation_order - t.noise_order;
        }
        p.terms[static_cast<std::size_t>(c)] = t;
    }
    return p;
}

}  // namespace protq
