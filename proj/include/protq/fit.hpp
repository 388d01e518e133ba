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
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace protq {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: x and y differ in length");
    if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx, x.size()};
}

/// Log-log slope of y against x, restricted to the inner `inner_fraction` of
/// the log(x) range. Points with non-positive x or y are skipped.
inline LineFit fit_loglog(std::span<const double> x, std::span<const double> y, double inner_fraction = 0.8) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: x and y differ in length");
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] > 0.0 && y[k] > 0.0) {
            lx.push_back(std::log(x[k]));
            ly.push_back(std::log(y[k]));
        }
    }
    if (lx.size() < 2) throw std::invalid_argument("fit_loglog: fewer than two positive points");
    const auto [lo_it, hi_it] = std::minmax_element(lx.begin(), lx.end());
    const double lo = *lo_it, hi = *hi_it;
    const double margin = 0.5 * (1.0 - inner_fraction) * (hi - lo);
    std::vector<double> fx, fy;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        if (lx[k] >= lo + margin - 1e-12 && lx[k] <= hi - margin + 1e-12) {
            fx.push_back(lx[k]);
            fy.push_back(ly[k]);
        }
    }
    if (fx.size() < 2) throw std::invalid_argument("fit_loglog: fewer than two points inside the fit window");
    return fit_line(fx, fy);
}

/// Least squares y = sum_k c_k x^powers[k]; returns the c_k.
inline std::vector<double> fit_powers(std::span<const double> x, std::span<const double> y,
                                      std::span<const int> powers) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_powers: x and y differ in length");
    if (powers.empty() || x.size() < powers.size()) throw std::invalid_argument("fit_powers: underdetermined fit");
    Eigen::MatrixXd a(x.size(), powers.size());
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < powers.size(); ++k) a(i, k) = std::pow(x[i], powers[k]);
        b[i] = y[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

/// `count` points spaced evenly in log between `lo` and `hi` inclusive.
inline std::vector<double> logspace(double lo, double hi, int count) {
    if (count < 2 || lo <= 0.0 || hi <= lo) throw std::invalid_argument("logspace: bad range");
    std::vector<double> out(count);
    const double a = std::log(lo), b = std::log(hi);
    for (int k = 0; k < count; ++k) out[k] = std::exp(a + (b - a) * k / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

/// Linear-interpolated quantile (type 7), q in [0, 1].
inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto k = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(k);
    if (k + 1 >= v.size()) return v.back();
    return v[k] + frac * (v[k + 1] - v[k]);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace protq
