#pragma once

#include <functional>
#include <memory>

#include "qhedge/operators.hpp"

namespace qhedge {

// Kunita-Watanabe decomposition against the martingale part:
//   f(X_T) = V0 + int Z dM + O_T.
class KWDecomposition {
  public:
    KWDecomposition(std::shared_ptr<const OperatorContext> ctx, ComplexMeasure mu);

    double V0() const { return v0_; }
    double imag_residual() const { return imag_residual_; }
    cplx V(double t, double x) const;  // E[f(X_T) | X_t = x]
    cplx Z(double t, double x) const;

    const OperatorContext& ctx() const { return *ctx_; }
    const ComplexMeasure& payoff() const { return mu_; }

  private:
    std::shared_ptr<const OperatorContext> ctx_;
    ComplexMeasure mu_;
    double v0_, imag_residual_;
};

// Foellmer-Schweizer decomposition against the full semimartingale:
//   f(X_T) = H0 + int xi dX + L_T.
class FSDecomposition {
  public:
    FSDecomposition(std::shared_ptr<const OperatorContext> ctx, ComplexMeasure mu);

    double H0() const { return h0_; }
    double imag_residual() const { return imag_residual_; }
    cplx H(double t, double x) const;
    cplx xi(double t, double x) const;

    const OperatorContext& ctx() const { return *ctx_; }
    const ComplexMeasure& payoff() const { return mu_; }

  private:
    std::shared_ptr<const OperatorContext> ctx_;
    ComplexMeasure mu_;
    double h0_, imag_residual_;
};

KWDecomposition kw(std::shared_ptr<const OperatorContext> ctx, ComplexMeasure mu);
FSDecomposition fs(std::shared_ptr<const OperatorContext> ctx, ComplexMeasure mu);

// Strategy for the OU process X_t = e^{-rate t} Xtilde_t, from a
// decomposition built on the additive base Xtilde with the re-mapped payoff
// mu_tilde = scale_argument(mu, e^{-rate T}):  Z_t(x) = e^{rate t} Ztilde_t(e^{rate t} x).
using StrategyMap = std::function<cplx(double, double)>;
StrategyMap ou_transform(const KWDecomposition& base, double rate);
StrategyMap ou_transform(const FSDecomposition& base, double rate);

}  // namespace qhedge
