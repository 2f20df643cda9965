#include "qhedge/decompose.hpp"

#include <cmath>

#include "qhedge/errors.hpp"

namespace qhedge {

KWDecomposition::KWDecomposition(std::shared_ptr<const OperatorContext> ctx,
                                 ComplexMeasure mu)
    : ctx_(std::move(ctx)), mu_(std::move(mu)) {
    cplx v0 = kernel_e(*ctx_, mu_, 0.0, 0.0);
    v0_ = v0.real();
    imag_residual_ = std::abs(v0.imag());
}

cplx KWDecomposition::V(double t, double x) const { return kernel_e(*ctx_, mu_, t, x); }
cplx KWDecomposition::Z(double t, double x) const { return kernel_d(*ctx_, mu_, t, x); }

FSDecomposition::FSDecomposition(std::shared_ptr<const OperatorContext> ctx,
                                 ComplexMeasure mu)
    : ctx_(std::move(ctx)), mu_(std::move(mu)) {
    cplx h0 = kernel_h(*ctx_, mu_, 0.0, 0.0);
    h0_ = h0.real();
    imag_residual_ = std::abs(h0.imag());
}

cplx FSDecomposition::H(double t, double x) const { return kernel_h(*ctx_, mu_, t, x); }
cplx FSDecomposition::xi(double t, double x) const { return kernel_k(*ctx_, mu_, t, x); }

KWDecomposition kw(std::shared_ptr<const OperatorContext> ctx, ComplexMeasure mu) {
    return KWDecomposition(std::move(ctx), std::move(mu));
}

FSDecomposition fs(std::shared_ptr<const OperatorContext> ctx, ComplexMeasure mu) {
    return FSDecomposition(std::move(ctx), std::move(mu));
}

namespace {

template <class D>
StrategyMap ou_transform_impl(const D& base, double rate,
                              cplx (D::*strategy)(double, double) const) {
    // copy the decomposition so the returned map owns its inputs
    auto held = std::make_shared<D>(base);
    return [held, rate, strategy](double t, double x) -> cplx {
        double s = std::exp(rate * t);
        return s * (held.get()->*strategy)(t, s * x);
    };
}

}  // namespace

StrategyMap ou_transform(const KWDecomposition& base, double rate) {
    return ou_transform_impl(base, rate, &KWDecomposition::Z);
}

StrategyMap ou_transform(const FSDecomposition& base, double rate) {
    return ou_transform_impl(base, rate, &FSDecomposition::xi);
}

}  // namespace qhedge
