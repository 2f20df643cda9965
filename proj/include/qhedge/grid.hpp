#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qhedge {

// Continuous piecewise-linear function on [t.front(), t.back()].
// Used for the time-change psi and the drift gamma of the Gaussian model.
struct PiecewiseLinear {
    std::vector<double> t;
    std::vector<double> v;

    PiecewiseLinear() = default;
    PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
        : t(std::move(knots)), v(std::move(values)) {
        if (t.size() < 2 || t.size() != v.size())
            throw std::invalid_argument("piecewise-linear grid needs >= 2 matching knots");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1]))
                throw std::invalid_argument("piecewise-linear knots must be strictly increasing");
    }

    std::size_t segments() const { return t.size() - 1; }

    std::size_t segment_index(double x) const {
        auto it = std::upper_bound(t.begin(), t.end(), x);
        std::size_t k = static_cast<std::size_t>(it - t.begin());
        if (k == 0) return 0;
        if (k >= t.size()) return t.size() - 2;
        return k - 1;
    }

    double slope(std::size_t k) const { return (v[k + 1] - v[k]) / (t[k + 1] - t[k]); }

    double operator()(double x) const {
        std::size_t k = segment_index(x);
        return v[k] + slope(k) * (x - t[k]);
    }

    bool nondecreasing() const {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1]) return false;
        return true;
    }
};

// Right-open piecewise-constant function: value[k] on [t[k], t[k+1]).
struct PiecewiseConstant {
    std::vector<double> t;  // n+1 knots
    std::vector<double> v;  // n values

    PiecewiseConstant() = default;
    PiecewiseConstant(std::vector<double> knots, std::vector<double> values)
        : t(std::move(knots)), v(std::move(values)) {
        if (t.size() < 2 || t.size() != v.size() + 1)
            throw std::invalid_argument("piecewise-constant grid needs n+1 knots for n values");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1]))
                throw std::invalid_argument("piecewise-constant knots must be strictly increasing");
    }

    std::size_t segments() const { return v.size(); }

    double operator()(double x) const {
        auto it = std::upper_bound(t.begin(), t.end(), x);
        std::size_t k = static_cast<std::size_t>(it - t.begin());
        if (k == 0) return v.front();
        if (k >= t.size()) return v.back();
        return v[k - 1];
    }
};

}  // namespace qhedge
