#pragma once

#include <vector>

#include "qhedge/calculus.hpp"
#include "qhedge/model.hpp"
#include "qhedge/payoff.hpp"

namespace qhedge {

// Everything the Fourier-multiplier operators need about one (model, T)
// pair: the structure condition, the base measure, and shared tolerances.
// Construction throws SCViolated when the structure condition fails.
struct OperatorContext {
    Model model;
    double T;
    StructureCondition sc;
    BaseMeasure base;

    double quad_tol = 1e-8;    // absolute tolerance for mu-quadratures
    double trunc_tol = 1e-12;  // per-t density truncation on |eps * density|

    OperatorContext(Model m, double horizon);
};

// Expectation operator: exp(Psi_T(u) - Psi_t(u)); |epsilon| <= 1.
cplx epsilon(const OperatorContext& ctx, double t, double u);

// Derivative operator, segment-wise i(zeta(u) - zeta(0)) / var rate; 0 on
// zero-variance segments.
cplx delta_op(const OperatorContext& ctx, double t, double u);

// Exponent i int_t^T delta_s(u) dPsi'_s(0), exact per-segment sum.
cplx phase(const OperatorContext& ctx, double t, double u);

// The four kernel point-evaluators:
//   e = int eps e^{iux} dmu                 (conditional expectation)
//   d = int delta eps e^{iux} dmu           (KW integrand)
//   h = int e^{phase} eps e^{iux} dmu       (FS value)
//   k = int e^{phase} delta eps e^{iux} dmu (FS integrand)
cplx kernel_e(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x);
cplx kernel_d(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x);
cplx kernel_h(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x);
cplx kernel_k(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x);

struct KernelValues {
    cplx e, d, h, k;
};
KernelValues kernel_all(const OperatorContext& ctx, const ComplexMeasure& mu,
                        double t, double x);

// Right-hand side of the pathwise derivative identity
//   c_t g'(x) + int (g(x+y) - g(x)) y F_t(dy),  g = kernel_e(t, .),
// with the normalized characteristics; cross-check for kernel_d.
cplx derivative_identity_check(const OperatorContext& ctx, const ComplexMeasure& mu,
                               double t, double x);

// Precomputed kernel table on a (t, x) grid: linear interpolation in x,
// piecewise-constant in t keyed to the slice at or below t.
class KernelTable {
  public:
    KernelTable(const OperatorContext& ctx, const ComplexMeasure& mu,
                std::vector<double> times, double x_lo, double x_hi, std::size_t nx);

    const std::vector<double>& times() const { return t_; }
    double x_lo() const { return x0_; }
    double x_hi() const { return x0_ + dx_ * static_cast<double>(nx_ - 1); }
    bool covers(double x) const { return x >= x_lo() && x <= x_hi(); }

    cplx e_at(double t, double x) const { return at(e_, t, x); }
    cplx d_at(double t, double x) const { return at(d_, t, x); }
    cplx h_at(double t, double x) const { return at(h_, t, x); }
    cplx k_at(double t, double x) const { return at(k_, t, x); }

  private:
    cplx at(const std::vector<std::vector<cplx>>& tab, double t, double x) const;

    std::vector<double> t_;
    double x0_, dx_;
    std::size_t nx_;
    std::vector<std::vector<cplx>> e_, d_, h_, k_;
};

// Default x-range: E[X_T] +/- 8 sd, from Psi'(0) and Psi''(0).
void default_x_range(const Model& model, double T, double& x_lo, double& x_hi);

}  // namespace qhedge
