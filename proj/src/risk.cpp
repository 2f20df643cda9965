#include "qhedge/risk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qhedge/errors.hpp"

namespace qhedge {

namespace {

const cplx I{0.0, 1.0};

}  // namespace

cplx nu(const OperatorContext& ctx, double t, double u, double v) {
    const Model& m = ctx.model;
    return m.psi(t, u + v) - m.psi(t, u) - m.psi(t, v);
}

cplx gamma_bracket(const OperatorContext& ctx, double t, double u, double v) {
    cplx acc = nu(ctx, t, u, v);
    const auto& bp = ctx.sc.t;
    for (std::size_t k = 0; k + 1 < bp.size() && bp[k] < t; ++k) {
        double hi = std::min(t, bp[k + 1]);
        double mid = 0.5 * (bp[k] + hi);
        acc -= delta_op(ctx, mid, u) * delta_op(ctx, mid, v) *
               ctx.model.var_rate(mid) * (hi - bp[k]);
    }
    return acc;
}

cplx j0_kernel(const OperatorContext& ctx, double u, double v) {
    if (v < u) std::swap(u, v);  // bitwise symmetry in (u, v)
    const auto& bp = ctx.sc.t;
    const Model& m = ctx.model;
    std::size_t ns = bp.size() - 1;

    // per-segment rates
    std::vector<cplx> rho(ns), grate(ns), crate(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        double mid = 0.5 * (bp[k] + bp[k + 1]);
        double mr = m.var_rate(mid);
        cplx du_ = delta_op(ctx, mid, u), dv_ = delta_op(ctx, mid, v);
        double krate = ctx.sc.alpha_v[k] * ctx.sc.alpha_v[k] * mr;
        rho[k] = -krate + I * (du_ + dv_) * m.drift_rate(mid) + m.psi_rate(mid, u) +
                 m.psi_rate(mid, v);
        crate[k] = m.psi_rate(mid, u + v);
        grate[k] = crate[k] - m.psi_rate(mid, u) - m.psi_rate(mid, v) - du_ * dv_ * mr;
    }

    // Psi_t(u+v) prefix at the left endpoint of each segment
    std::vector<cplx> P(ns, cplx(0.0));
    for (std::size_t k = 0; k + 1 < ns; ++k)
        P[k + 1] = P[k] + crate[k] * (bp[k + 1] - bp[k]);

    // full exponent E(t) = Psi_t(u+v) + int_t^T rho; the backward part is
    // accumulated from T, the forward part comes from the prefix table
    cplx total = 0.0;
    cplx E_hi = 0.0;  // int_{bp[k+1]}^T rho, starting with 0 at T
    for (std::size_t k = ns; k-- > 0;) {
        double dt = bp[k + 1] - bp[k];
        // int over the segment of e^{E(t)} with
        // E(t) = P[k] + crate_k (t - bp[k]) + E_hi + rho_k (bp[k+1] - t)
        cplx A_lo = P[k] + E_hi + rho[k] * dt;        // exponent at bp[k]
        cplx A_hi = P[k] + crate[k] * dt + E_hi;      // exponent at bp[k+1]
        cplx slope = crate[k] - rho[k];
        cplx z = slope * dt;
        // endpoint exponentials are bounded, so difference quotient is safe
        cplx seg = (std::abs(z) > 1e-5)
                       ? (std::exp(A_hi) - std::exp(A_lo)) / slope
                       : std::exp(A_lo) * dt * (1.0 + 0.5 * z * (1.0 + z / 3.0));
        total += grate[k] * seg;
        E_hi += rho[k] * dt;
    }
    return total;
}

ErrorReport variance_error(const OperatorContext& ctx, const ComplexMeasure& mu,
                           const RiskOptions& opt) {
    // flatten mu to a list of (u, weight) nodes; densities are resampled to a
    // coarse grid first
    std::vector<double> us;
    std::vector<cplx> ws;
    for (const auto& a : mu.atoms) {
        us.push_back(a.u);
        ws.push_back(a.w);
    }
    if (mu.density) {
        const auto& d = *mu.density;
        double lo = d.u0, hi = d.u_at(d.value.size() - 1);
        lo = std::max(lo, -opt.density_trunc);
        hi = std::min(hi, opt.density_trunc);
        std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / opt.density_step)) + 1;
        for (std::size_t j = 0; j < n; ++j) {
            double u = lo + opt.density_step * static_cast<double>(j);
            // linear interpolation on the stored grid
            double rel = (u - d.u0) / d.du;
            std::size_t i0 = static_cast<std::size_t>(std::clamp(
                std::floor(rel), 0.0, static_cast<double>(d.value.size() - 2)));
            double fr = std::clamp(rel - static_cast<double>(i0), 0.0, 1.0);
            cplx val = d.value[i0] * (1.0 - fr) + d.value[i0 + 1] * fr;
            double w = (j == 0 || j + 1 == n) ? 0.5 * opt.density_step : opt.density_step;
            us.push_back(u);
            ws.push_back(val * w);
        }
    }

    ErrorReport rep;
    cplx acc = 0.0;
    std::size_t n = us.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            cplx kval = j0_kernel(ctx, us[a], us[b]);
            ++rep.kernel_evals;
            cplx term = ws[a] * ws[b] * kval;
            acc += (a == b) ? term : 2.0 * term;
        }
    }
    rep.imag_residual = std::abs(acc.imag());
    double tv = mu.total_variation();
    double tol = 1e-10 * (1.0 + tv * tv * std::exp(2.0 * ctx.sc.K_T));
    double j0 = acc.real();
    if (j0 < -tol) {
        std::ostringstream os;
        os << "hedging-error variance " << j0 << " below -" << tol;
        throw NegativeVariance(os.str());
    }
    rep.j0 = std::max(0.0, j0);
    return rep;
}

}  // namespace qhedge
