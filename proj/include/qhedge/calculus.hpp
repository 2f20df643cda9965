#pragma once

#include <string>
#include <vector>

#include "qhedge/model.hpp"

namespace qhedge {

// Structure-condition verdict together with the drift density alpha_t and
// the mean-variance trade-off K_t, both piecewise data on the model's
// breakpoints over [0, T].
struct StructureCondition {
    bool satisfied = false;
    std::string reason;  // empty when satisfied

    std::vector<double> t;        // breakpoints, t.front()=0, t.back()=T
    std::vector<double> alpha_v;  // alpha on [t[k], t[k+1])
    std::vector<double> K_knots;  // K at the breakpoints, K_knots[0]=0
    double T = 0.0;
    double K_T = 0.0;

    double alpha(double s) const;
    double K(double s) const;  // linear between breakpoints (alpha^2 * var rate)
};

// The time base measure d(-Psi''_t(0)) on [0, T]: constant density per
// breakpoint segment. Total mass equals Var(X_T).
struct BaseMeasure {
    std::vector<double> t;     // breakpoints
    std::vector<double> rate;  // density on [t[k], t[k+1])

    double mass() const;
    double rate_at(double s) const;
};

// Verdict never throws for additive models; alpha/K are populated only when
// satisfied. OU wrappers are rejected (UnsupportedModel).
StructureCondition check_sc(const Model& model, double T);

// K_t; requires sc.satisfied (throws SCViolated otherwise).
double mvt(const StructureCondition& sc, double t);

BaseMeasure base_measure(const Model& model, double T);

// Cor. densities of the characteristics against dt and d(-Psi''(0)):
//   first_density  zeta_s(u) = d Psi'_s(u) / ds
//   second_density xi_s(u)   = d Psi''_s(u) / d Psi''_s(0),  xi_s(0) = 1
cplx first_density(const Model& model, double s, double u);
cplx second_density(const Model& model, double s, double u);

}  // namespace qhedge
