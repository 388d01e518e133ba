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

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace protq {

enum class Axis : std::uint8_t { X, Y, Z };

inline char axis_name(Axis a) {
    switch (a) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

inline Axis parse_axis(std::string_view s) {
    if (s == "X" || s == "x") return Axis::X;
    if (s == "Y" || s == "y") return Axis::Y;
    if (s == "Z" || s == "z") return Axis::Z;
    throw std::invalid_argument("unknown axis '" + std::string(s) + "'");
}

/// Lattice site, 1-based (row, col).
struct Site {
    int row = 1;
    int col = 1;

    friend auto operator<=>(const Site &, const Site &) = default;
};

/// Product of single-spin Pauli factors on distinct sites; identity elsewhere.
///
/// Factors are kept ordered by site (row-major), so two strings with the same
/// factors compare equal regardless of insertion order. Site validity against
/// a particular lattice is checked by `validate`, since a string by itself does
/// not know the lattice size.
class PauliString {
   public:
    PauliString() = default;

    /// Adds a factor. Throws if the site already carries one.
    PauliString &set(Site site, Axis axis) {
        if (site.row < 1 || site.col < 1) {
            throw std::out_of_range("Pauli factor site indices are 1-based");
        }
        auto [it, inserted] = factors_.emplace(site, axis);
        if (!inserted) {
            throw std::invalid_argument("duplicate Pauli factor at site (" + std::to_string(site.row) + "," +
                                        std::to_string(site.col) + ")");
        }
        return *this;
    }

    [[nodiscard]] const std::map<Site, Axis> &factors() const { return factors_; }
    [[nodiscard]] std::size_t weight() const { return factors_.size(); }
    [[nodiscard]] bool is_identity() const { return factors_.empty(); }

    void validate(int n) const {
        for (const auto &[site, axis] : factors_) {
            if (site.row > n || site.col > n) {
                throw std::out_of_range("Pauli factor at (" + std::to_string(site.row) + "," +
                                        std::to_string(site.col) + ") lies outside the " + std::to_string(n) + "x" +
                                        std::to_string(n) + " lattice");
            }
        }
    }

    /// Text form "Y11 Y12"; the identity prints as "I".
    [[nodiscard]] std::string str() const {
        if (factors_.empty()) return "I";
        std::string out;
        for (const auto &[site, axis] : factors_) {
            if (!out.empty()) out += ' ';
            out += axis_name(axis);
            out += std::to_string(site.row);
            out += std::to_string(site.col);
        }
        return out;
    }

    /// Parses "Y11 Y12" (single-digit row/col) or "Y1,1 X10,2" (comma form).
    /// "I" or the empty string is the identity.
    static PauliString parse(std::string_view text) {
        PauliString s;
        std::istringstream in{std::string(text)};
        std::string tok;
        while (in >> tok) {
            if (tok == "I") continue;
            if (tok.size() < 3) throw std::invalid_argument("malformed Pauli factor '" + tok + "'");
            Axis axis = parse_axis(tok.substr(0, 1));
            std::string rest = tok.substr(1);
            Site site;
            try {
                if (auto comma = rest.find(','); comma != std::string::npos) {
                    site = {std::stoi(rest.substr(0, comma)), std::stoi(rest.substr(comma + 1))};
                } else if (rest.size() == 2) {
                    site = {rest[0] - '0', rest[1] - '0'};
                } else {
                    throw std::invalid_argument("");
                }
            } catch (const std::logic_error &) {
                throw std::invalid_argument("malformed Pauli factor '" + tok + "'");
            }
            s.set(site, axis);
        }
        return s;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;

   private:
    std::map<Site, Axis> factors_;
};

/// Row i of sigma^y factors: the P_i symmetry.
inline PauliString row_string(int n, int row, Axis axis = Axis::Y) {
    PauliString s;
    for (int j = 1; j <= n; ++j) s.set({row, j}, axis);
    return s;
}

/// Column j of sigma^x factors: the Q_j symmetry.
inline PauliString column_string(int n, int col, Axis axis = Axis::X) {
    PauliString s;
    for (int i = 1; i <= n; ++i) s.set({i, col}, axis);
    return s;
}

}  // namespace protq
