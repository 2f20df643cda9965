#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhedge/grid.hpp"

namespace qhedge {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Levy triplet and model families
// ---------------------------------------------------------------------------

struct JumpAtom {
    double x;
    double weight;  // > 0
};

// Jump density sampled on a strictly increasing grid over a truncated
// support; integrals against it use the trapezoid rule on that grid.
struct JumpDensity {
    std::vector<double> x;
    std::vector<double> value;  // >= 0
};

struct LevyTriplet {
    double drift = 0.0;       // b, with truncation 1_{|x|<=1}
    double gaussian = 0.0;    // c >= 0
    std::vector<JumpAtom> atoms;
    std::optional<JumpDensity> density;
};

struct PoissonParams {
    double lambda;  // > 0
};

// X_1 ~ NIG(theta, beta, delta, mu), theta > |beta| > 0, delta > 0.
struct NigParams {
    double theta, beta, delta, mu;
};

// X_1 ~ VG(theta, beta, delta, mu), theta > 0, beta > 0, delta != 0.
struct VgParams {
    double theta, beta, delta, mu;
};

struct LevyModel {
    std::variant<PoissonParams, NigParams, VgParams, LevyTriplet> family;
};

// X_t = gamma(t) + W_{psi(t)}, psi nondecreasing.
struct TimeChangedBrownian {
    PiecewiseLinear gamma;
    PiecewiseLinear psi;
};

// X_t = int_0^t gamma_s dLambda_s with piecewise-constant weight gamma.
struct WienerLevy {
    LevyModel base;
    PiecewiseConstant weight;
};

struct ModelSpec;

// X_t = exp(-rate * t) * Xtilde_t for an additive base process Xtilde.
// Not itself a PII; supported through the OU strategy transform only.
struct OUWrapper {
    double rate;
    std::shared_ptr<const ModelSpec> base;
};

struct ModelSpec {
    std::variant<TimeChangedBrownian, LevyModel, WienerLevy, OUWrapper> family;
};

// Per-unit-time Levy data normalized so that c + int x^2 F(dx) = 1.
// Available for the families with a tractable jump representation
// (Poisson, VG, custom triplet, Gaussian); used by the derivative-identity
// cross-check and the bound suite.
struct NormalizedJumps {
    double gaussian = 0.0;  // normalized c_t
    std::vector<JumpAtom> atoms;
    std::optional<JumpDensity> density;
};

// ---------------------------------------------------------------------------
// Model: validated spec plus the log-characteristic function Psi_t(u)
// and its first two u-derivatives.
//
// For every supported additive family, t -> Psi_t(u) is piecewise linear
// in t between the model's breakpoints, so all time integrals downstream
// are exact segment sums. The *_rate accessors return the constant
// d/dt densities on the segment containing t (right-open convention).
// ---------------------------------------------------------------------------
class Model {
  public:
    explicit Model(ModelSpec spec);

    const ModelSpec& spec() const { return spec_; }
    const std::string& tag() const { return tag_; }

    bool is_levy() const;
    bool is_additive() const;  // false only for the OU wrapper

    cplx psi(double t, double u) const;
    cplx psi_d1(double t, double u) const;
    cplx psi_d2(double t, double u) const;

    // Sorted breakpoints of the piecewise-linear time structure on [0, T],
    // always containing 0 and T. Throws UnsupportedModel for OU wrappers.
    std::vector<double> breakpoints(double T) const;

    // Constant segment densities, evaluated at any t inside the segment:
    //   psi_rate   = dPsi_t(u)/dt
    //   zeta_rate  = dPsi'_t(u)/dt
    //   xi_rate    = dPsi''_t(u)/dt
    //   drift_rate = dPsi'_t(0)/dt           (purely imaginary)
    //   var_rate   = d(-Psi''_t(0))/dt >= 0
    cplx psi_rate(double t, double u) const;
    cplx zeta_rate(double t, double u) const;
    cplx xi_rate(double t, double u) const;
    cplx drift_rate(double t) const;
    double var_rate(double t) const;

    // Normalized jump structure at time t; throws UnsupportedModel for
    // families without a tractable Levy density (NIG, Wiener-Levy).
    NormalizedJumps normalized_jumps(double t) const;

  private:
    ModelSpec spec_;
    std::string tag_;
};

// Unit-time log-characteristic exponent of a Levy family and derivatives.
cplx levy_exponent(const LevyModel& m, double u);
cplx levy_exponent_d1(const LevyModel& m, double u);
cplx levy_exponent_d2(const LevyModel& m, double u);

// Convenience builders.
Model make_poisson(double lambda);
Model make_nig(double theta, double beta, double delta, double mu);
Model make_vg(double theta, double beta, double delta, double mu);
Model make_custom(LevyTriplet triplet);
Model make_brownian(PiecewiseLinear gamma, PiecewiseLinear psi);
Model make_wiener_levy(LevyModel base, PiecewiseConstant weight);
Model make_ou(double rate, Model base);

}  // namespace qhedge
