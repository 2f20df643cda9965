#pragma once

#include <cstddef>

#include "qhedge/operators.hpp"

namespace qhedge {

struct ErrorReport {
    double j0 = 0.0;             // variance of the optimal hedging error
    double imag_residual = 0.0;  // max |Im| seen in the (u,v) reduction
    std::size_t kernel_evals = 0;
};

struct RiskOptions {
    // density-type measures are resampled to |u| <= density_trunc with this
    // step before the double quadrature (the e_{t,T} decay justifies it)
    double density_trunc = 40.0;
    double density_step = 0.2;
};

// nu_t(u,v) = Psi_t(u+v) - Psi_t(u) - Psi_t(v).
cplx nu(const OperatorContext& ctx, double t, double u, double v);

// Gamma_t(u,v) = nu_t(u,v) - int_0^t delta_s(u) delta_s(v) d(-Psi''_s(0)).
cplx gamma_bracket(const OperatorContext& ctx, double t, double u, double v);

// J0(u,v): the time integral
//   int_0^T exp(-(K_T - K_t)) e^{i int_t^T (delta(u)+delta(v)) dPsi'(0)}
//           eps_{t,T}(u) eps_{t,T}(v) dGamma_t(u,v),
// evaluated segment-exactly (per-segment constant rates, closed-form
// exponential integrals).
cplx j0_kernel(const OperatorContext& ctx, double u, double v);

// J0 = int int dmu(u) dmu(v) J0(u,v); real and >= 0 for Hermitian mu.
ErrorReport variance_error(const OperatorContext& ctx, const ComplexMeasure& mu,
                           const RiskOptions& opt = {});

}  // namespace qhedge
