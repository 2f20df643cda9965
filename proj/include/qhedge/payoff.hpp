#pragma once

#include <optional>
#include <vector>

#include "qhedge/model.hpp"

namespace qhedge {

// Finite complex measure mu on the Fourier side: f(x) = int e^{iux} mu(du).
// Atoms plus an optional density sampled on a uniform grid u0 + j*du
// (integrated with trapezoid weights).
struct ComplexMeasure {
    struct Atom {
        double u;
        cplx w;
    };
    struct Density {
        double u0 = 0.0;
        double du = 0.0;
        std::vector<cplx> value;

        double u_at(std::size_t j) const { return u0 + du * static_cast<double>(j); }
    };

    std::vector<Atom> atoms;
    std::optional<Density> density;

    double total_variation() const;
    // mu(-du) = conj(mu(du)) within 1e-12, i.e. f is real-valued.
    bool hermitian() const;
};

// f(x) = int e^{iux} mu(du).
cplx fourier_eval(const ComplexMeasure& mu, double x);

// Measure for the payoff f(x) = e^x (K - e^x)_+, built from the closed-form
// Fourier transform K^{2-iu} / ((1-iu)(2-iu)) as a density on |u| <= truncation.
// The construction validates itself by reconstructing the payoff on a test
// grid and throws TruncationTooTight above 1e-3 sup error.
ComplexMeasure self_quanto_put(double K, double truncation = 500.0,
                               double grid_step = 0.05);

// Pushforward of mu under u -> c*u (used by the OU payoff re-mapping).
ComplexMeasure scale_argument(const ComplexMeasure& mu, double c);

}  // namespace qhedge
