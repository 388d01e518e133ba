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

#include "protq/classifier.hpp"

using namespace protq;

namespace {

LogicalClass class_of(const std::string &s, int n) { return classify_string(PauliString::parse(s), n).logical_class; }

struct Fixture {
    LatticeSpec lattice;
    LogicalBasis basis;
    explicit Fixture(int n)
        : lattice(n),
          basis(extract_logical_basis(build_protection_hamiltonian(lattice), build_symmetry_operators(lattice))) {}
};

PauliString string_from_digits(int n, std::uint64_t code) {
    // Base-4 digits per site: 0 = identity, 1..3 = X, Y, Z.
    PauliString s;
    for (int k = 0; k < n * n; ++k, code >>= 2) {
        const int d = static_cast<int>(code & 3);
        if (d != 0) s.set({k / n + 1, k % n + 1}, static_cast<Axis>(d - 1));
    }
    return s;
}

}  // namespace

TEST(classify, worked_examples) {
    EXPECT_EQ(class_of("Y11 Y12", 2), LogicalClass::TauZ);
    EXPECT_EQ(class_of("X11 X21", 2), LogicalClass::TauX);
    EXPECT_EQ(class_of("Y11", 2), LogicalClass::Null);
    EXPECT_EQ(class_of("X11", 2), LogicalClass::Null);
    EXPECT_EQ(class_of("Z11 Z22", 2), LogicalClass::TauY);
}

TEST(classify, verdict_fields) {
    const ClassifierVerdict v = classify_string(PauliString::parse("Y21 Y22 Y23"), 3);
    EXPECT_EQ(v.row_action, SectorAction::PreserveAll);
    EXPECT_EQ(v.col_action, SectorAction::FlipAll);
    EXPECT_EQ(v.logical_class, LogicalClass::TauZ);
    const ClassifierVerdict m = classify_string(PauliString::parse("X11 X12"), 3);
    EXPECT_EQ(m.row_action, SectorAction::PreserveAll);  // two flips of row 1 cancel
    EXPECT_EQ(m.col_action, SectorAction::PreserveAll);
    EXPECT_EQ(m.logical_class, LogicalClass::Identity);
    EXPECT_EQ(classify_string(PauliString{}, 2).logical_class, LogicalClass::Identity);
    EXPECT_THROW(classify_string(PauliString::parse("X33"), 2), std::out_of_range);
}

TEST(classify, symmetries_map_to_logical_operators) {
    for (int n : {2, 3, 4, 7}) {
        for (int k = 1; k <= n; ++k) {
            EXPECT_EQ(classify_string(row_string(n, k), n).logical_class, LogicalClass::TauZ);
            EXPECT_EQ(classify_string(column_string(n, k), n).logical_class, LogicalClass::TauX);
            EXPECT_EQ(classify_string(pauli_product(row_string(n, k), column_string(n, 1)), n).logical_class,
                      LogicalClass::TauY);
        }
    }
}

TEST(classify, oracle_worked_examples) {
    Fixture f(2);
    for (const char *s : {"Y11 Y12", "X11 X21", "Y11", "Z11 Z22", "X12 X22", "Y21 Y22"}) {
        const OracleResult r = logical_projection_oracle(PauliString::parse(s), f.lattice, f.basis);
        EXPECT_TRUE(r.agrees) << s << " residual " << r.residual;
    }
    const OracleResult z = logical_projection_oracle(PauliString::parse("Y11 Y12"), f.lattice, f.basis);
    EXPECT_NEAR(std::abs(z.coefficient), 1.0, 1e-10);
    const OracleResult null = logical_projection_oracle(PauliString::parse("Y11"), f.lattice, f.basis);
    EXPECT_LT(max_abs_entry(null.block), 1e-10);
}

TEST(classify, exhaustive_against_projection_n2) {
    Fixture f(2);
    int count = 0;
    for (std::uint64_t code = 0; code < 256; ++code) {
        const PauliString s = string_from_digits(2, code);
        const OracleResult r = logical_projection_oracle(s, f.lattice, f.basis);
        EXPECT_TRUE(r.agrees) << s.str() << " predicted " << logical_class_name(r.predicted) << " residual "
                              << r.residual;
        ++count;
    }
    EXPECT_EQ(count, 256);
}

TEST(classify, random_strings_against_projection_n3) {
    Fixture f(3);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> site(0, 8), axis(0, 2), weight(0, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        PauliString s;
        const int w = weight(rng);
        while (static_cast<int>(s.weight()) < w) {
            const int k = site(rng);
            if (!s.factors().contains({k / 3 + 1, k % 3 + 1})) s.set({k / 3 + 1, k % 3 + 1}, static_cast<Axis>(axis(rng)));
        }
        const OracleResult r = logical_projection_oracle(s, f.lattice, f.basis);
        EXPECT_TRUE(r.agrees) << s.str() << " residual " << r.residual;
    }
}

TEST(classify, products_compose_classes) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const PauliString a = string_from_digits(3, rng() & ((1ull << 18) - 1));
        const PauliString b = string_from_digits(3, rng() & ((1ull << 18) - 1));
        const LogicalClass ca = classify_string(a, 3).logical_class;
        const LogicalClass cb = classify_string(b, 3).logical_class;
        if (ca == LogicalClass::Null || cb == LogicalClass::Null) continue;
        EXPECT_EQ(classify_string(pauli_product(a, b), 3).logical_class, class_product(ca, cb))
            << a.str() << " * " << b.str();
    }
}

TEST(classify, class_product_table) {
    using C = LogicalClass;
    EXPECT_EQ(class_product(C::TauX, C::TauZ), C::TauY);
    EXPECT_EQ(class_product(C::TauY, C::TauX), C::TauZ);
    EXPECT_EQ(class_product(C::TauZ, C::TauY), C::TauX);
    EXPECT_EQ(class_product(C::TauX, C::TauX), C::Identity);
    EXPECT_EQ(class_product(C::Identity, C::TauY), C::TauY);
    EXPECT_EQ(class_product(C::Null, C::Identity), C::Null);
}

TEST(classify, pauli_product_sitewise) {
    EXPECT_EQ(pauli_product(PauliString::parse("X11 Y12"), PauliString::parse("Y11 Y12 Z21")).str(), "Z11 Z21");
    EXPECT_EQ(pauli_product(PauliString::parse("X11"), PauliString::parse("X11")).str(), "I");
}

TEST(effective_order, matches_lattice_side) {
    EXPECT_EQ(minimum_effective_order(Axis::Y, 2), 2);
    EXPECT_EQ(minimum_effective_order(Axis::X, 2), 2);
    EXPECT_EQ(minimum_effective_order(Axis::Y, 3), 3);
    EXPECT_EQ(minimum_effective_order(Axis::X, 5), 5);
    // sigma^z flips both; a diagonal of n factors reaches tau^y.
    EXPECT_EQ(minimum_effective_order(Axis::Z, 4), 4);
    EXPECT_THROW(minimum_effective_order(Axis::Y, 0), std::invalid_argument);
}

TEST(scaling_prediction, perpendicular_noise_n2) {
    const ScalingPrediction p = predict_dominant_scaling(Axis::Y, Axis::X, 2);
    EXPECT_EQ(p.manipulation_order, 2);
    EXPECT_EQ(p.manipulated_class, LogicalClass::TauZ);
    EXPECT_FALSE(p.parallel);
    EXPECT_FALSE(p.term(LogicalClass::Identity).relevant);
    const ScalingTerm &x = p.term(LogicalClass::TauX);
    EXPECT_TRUE(x.reachable);
    EXPECT_EQ(x.f_exponent, 2);
    EXPECT_EQ(x.manipulation_order, 0);
    EXPECT_EQ(x.g_exponent, -2);
    EXPECT_EQ(x.gap_exponent, 0);
    EXPECT_EQ(p.term(LogicalClass::TauY).f_exponent, 2);
    EXPECT_EQ(p.term(LogicalClass::TauZ).f_exponent, 2);
}

TEST(scaling_prediction, perpendicular_noise_n3) {
    const ScalingPrediction p = predict_dominant_scaling(Axis::Y, Axis::X, 3);
    EXPECT_EQ(p.manipulation_order, 3);
    EXPECT_EQ(p.term(LogicalClass::TauX).f_exponent, 3);
    EXPECT_EQ(p.term(LogicalClass::TauX).g_exponent, -3);
}

TEST(scaling_prediction, parallel_noise_is_first_order) {
    for (int n : {2, 3, 4}) {
        for (Axis u : {Axis::X, Axis::Y}) {
            const ScalingPrediction p = predict_dominant_scaling(u, u, n);
            EXPECT_TRUE(p.parallel);
            const LogicalClass manipulated = u == Axis::X ? LogicalClass::TauX : LogicalClass::TauZ;
            EXPECT_EQ(p.manipulated_class, manipulated);
            const ScalingTerm &t = p.term(manipulated);
            EXPECT_TRUE(t.reachable);
            EXPECT_EQ(t.f_exponent, 1);
            EXPECT_EQ(t.g_exponent, n - 1 - n);  // one noise factor replaces one pulse factor
            for (LogicalClass c : {LogicalClass::TauX, LogicalClass::TauY, LogicalClass::TauZ}) {
                if (c != manipulated) EXPECT_FALSE(p.term(c).reachable) << logical_class_name(c);
            }
        }
    }
    EXPECT_THROW(predict_dominant_scaling(Axis::Z, Axis::X, 2), std::invalid_argument);
}
