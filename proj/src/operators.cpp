#include "qhedge/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhedge/errors.hpp"

namespace qhedge {

namespace {

const cplx I{0.0, 1.0};

double trap_w(std::size_t j, std::size_t n, double du) {
    return (j == 0 || j + 1 == n) ? 0.5 * du : du;
}

// Composite Simpson weights; only valid when n is odd.
double simp_w(std::size_t j, std::size_t n, double du) {
    if (j == 0 || j + 1 == n) return du / 3.0;
    return (j % 2 == 1) ? 4.0 * du / 3.0 : 2.0 * du / 3.0;
}

}  // namespace

OperatorContext::OperatorContext(Model m, double horizon)
    : model(std::move(m)), T(horizon), sc(check_sc(model, horizon)),
      base(base_measure(model, horizon)) {
    if (!sc.satisfied) throw SCViolated(sc.reason);
}

cplx epsilon(const OperatorContext& ctx, double t, double u) {
    return std::exp(ctx.model.psi(ctx.T, u) - ctx.model.psi(t, u));
}

cplx delta_op(const OperatorContext& ctx, double t, double u) {
    double m = ctx.model.var_rate(t);
    if (m <= 0.0) return 0.0;  // the process is constant on this segment
    return I * (ctx.model.zeta_rate(t, u) - ctx.model.drift_rate(t)) / (-m);
}

cplx phase(const OperatorContext& ctx, double t, double u) {
    const auto& bp = ctx.sc.t;
    cplx acc = 0.0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        if (bp[k + 1] <= t) continue;
        double lo = std::max(t, bp[k]);
        double mid = 0.5 * (lo + bp[k + 1]);
        acc += I * delta_op(ctx, mid, u) * ctx.model.drift_rate(mid) * (bp[k + 1] - lo);
    }
    return acc;
}

namespace {

// Shared integration of all four kernels at one (t, x). The density part is
// accumulated with Simpson weights on the full grid and on the half grid;
// the Richardson discrepancy |fine - coarse|/15 is the error estimate.
KernelValues integrate_kernels(const OperatorContext& ctx, const ComplexMeasure& mu,
                               double t, double x, bool certify) {
    cplx ae = 0, ad = 0, ah = 0, ak = 0;        // atoms
    cplx te = 0, td = 0, th = 0, tk = 0;        // density, trapezoid fallback
    cplx se = 0, sd = 0, sh = 0, sk = 0;        // density, Simpson fine
    cplx ce = 0, cd = 0, ch = 0, ck = 0;        // density, Simpson half grid
    auto contribute = [&](double u, cplx w, cplx& oe, cplx& od, cplx& oh, cplx& ok,
                          cplx eiux) {
        cplx eps = epsilon(ctx, t, u);
        cplx dl = delta_op(ctx, t, u);
        cplx phf = std::exp(phase(ctx, t, u));
        cplx ce = w * eps * eiux;
        oe += ce;
        od += ce * dl;
        oh += ce * phf;
        ok += ce * phf * dl;
    };
    for (const auto& a : mu.atoms)
        contribute(a.u, a.w, ae, ad, ah, ak, std::exp(I * a.u * x));
    bool have_simpson = false;
    if (mu.density) {
        const auto& den = *mu.density;
        std::size_t n = den.value.size();
        // fine Simpson needs odd n; the half grid reuses every other point
        have_simpson = (n >= 5) && (n % 2 == 1) && (((n - 1) / 2) % 2 == 0);
        std::size_t nc = have_simpson ? (n - 1) / 2 + 1 : 0;
        cplx ex = std::exp(I * den.u0 * x);
        cplx step = std::exp(I * den.du * x);
        for (std::size_t j = 0; j < n; ++j, ex *= step) {
            double u = den.u_at(j);
            cplx eps = epsilon(ctx, t, u);
            cplx w = den.value[j];
            if (std::abs(eps) * std::abs(w) < ctx.trunc_tol) continue;
            cplx dl = delta_op(ctx, t, u);
            cplx phf = std::exp(phase(ctx, t, u));
            cplx fe = w * eps * ex;
            cplx fd = fe * dl, fh = fe * phf, fk = fh * dl;
            if (have_simpson) {
                double ws = simp_w(j, n, den.du);
                se += ws * fe; sd += ws * fd; sh += ws * fh; sk += ws * fk;
                if (j % 2 == 0) {
                    double wc = simp_w(j / 2, nc, 2.0 * den.du);
                    ce += wc * fe; cd += wc * fd; ch += wc * fh; ck += wc * fk;
                }
            } else {
                double wt = trap_w(j, n, den.du);
                te += wt * fe; td += wt * fd; th += wt * fh; tk += wt * fk;
            }
        }
        if (certify && have_simpson) {
            double err = std::max({std::abs(se - ce), std::abs(sd - cd),
                                   std::abs(sh - ch), std::abs(sk - ck)}) /
                         15.0;
            if (err > ctx.quad_tol) {
                std::ostringstream os;
                os << "kernel quadrature error estimate " << err
                   << " exceeds tolerance " << ctx.quad_tol << " at t=" << t
                   << ", x=" << x;
                throw QuadratureFailure(os.str());
            }
        }
    }
    if (have_simpson) return {ae + se, ad + sd, ah + sh, ak + sk};
    return {ae + te, ad + td, ah + th, ak + tk};
}

}  // namespace

KernelValues kernel_all(const OperatorContext& ctx, const ComplexMeasure& mu,
                        double t, double x) {
    return integrate_kernels(ctx, mu, t, x, true);
}

cplx kernel_e(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x) {
    return kernel_all(ctx, mu, t, x).e;
}
cplx kernel_d(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x) {
    return kernel_all(ctx, mu, t, x).d;
}
cplx kernel_h(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x) {
    return kernel_all(ctx, mu, t, x).h;
}
cplx kernel_k(const OperatorContext& ctx, const ComplexMeasure& mu, double t, double x) {
    return kernel_all(ctx, mu, t, x).k;
}

cplx derivative_identity_check(const OperatorContext& ctx, const ComplexMeasure& mu,
                               double t, double x) {
    NormalizedJumps nj = ctx.model.normalized_jumps(t);
    auto g = [&](double y) { return kernel_e(ctx, mu, t, y); };
    cplx out = 0.0;
    if (nj.gaussian != 0.0) {
        const double h = 1e-3;  // 4th-order central difference
        cplx gp = (-g(x + 2 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2 * h)) /
                  (12.0 * h);
        out += nj.gaussian * gp;
    }
    cplx gx = g(x);
    for (const auto& a : nj.atoms) out += (g(x + a.x) - gx) * a.x * a.weight;
    if (nj.density) {
        const auto& d = *nj.density;
        for (std::size_t j = 0; j < d.x.size(); ++j) {
            double w = (j == 0)                  ? 0.5 * (d.x[1] - d.x[0])
                       : (j + 1 == d.x.size())   ? 0.5 * (d.x[j] - d.x[j - 1])
                                                 : 0.5 * (d.x[j + 1] - d.x[j - 1]);
            out += (g(x + d.x[j]) - gx) * d.x[j] * d.value[j] * w;
        }
    }
    return out;
}

KernelTable::KernelTable(const OperatorContext& ctx, const ComplexMeasure& mu,
                         std::vector<double> times, double x_lo, double x_hi,
                         std::size_t nx)
    : t_(std::move(times)), x0_(x_lo), nx_(nx) {
    if (nx_ < 2) throw Error("kernel table needs >= 2 x points");
    dx_ = (x_hi - x_lo) / static_cast<double>(nx_ - 1);
    std::size_t nt = t_.size();
    e_.assign(nt, {}); d_.assign(nt, {}); h_.assign(nt, {}); k_.assign(nt, {});

    for (std::size_t it = 0; it < nt; ++it) {
        double t = t_[it];
        auto& Se = e_[it]; auto& Sd = d_[it]; auto& Sh = h_[it]; auto& Sk = k_[it];
        Se.assign(nx_, 0.0); Sd.assign(nx_, 0.0); Sh.assign(nx_, 0.0); Sk.assign(nx_, 0.0);

        // atoms: direct per-(atom, x) accumulation
        for (const auto& a : mu.atoms) {
            cplx eps = epsilon(ctx, t, a.u);
            cplx dl = delta_op(ctx, t, a.u);
            cplx phf = std::exp(phase(ctx, t, a.u));
            cplx we = a.w * eps, wd = we * dl, wh = we * phf, wk = wh * dl;
            cplx ex = std::exp(I * a.u * x0_), step = std::exp(I * a.u * dx_);
            for (std::size_t ix = 0; ix < nx_; ++ix, ex *= step) {
                Se[ix] += we * ex; Sd[ix] += wd * ex;
                Sh[ix] += wh * ex; Sk[ix] += wk * ex;
            }
        }
        if (!mu.density) continue;
        const auto& den = *mu.density;
        std::size_t n = den.value.size();
        bool simpson = (n >= 3) && (n % 2 == 1);

        // slice weights with per-t truncation window on |eps * density|
        std::vector<cplx> we(n), wd(n), wh(n), wk(n);
        std::size_t jlo = n, jhi = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double u = den.u_at(j);
            cplx eps = epsilon(ctx, t, u);
            if (std::abs(eps) * std::abs(den.value[j]) < ctx.trunc_tol) {
                we[j] = wd[j] = wh[j] = wk[j] = 0.0;
                continue;
            }
            jlo = std::min(jlo, j);
            jhi = std::max(jhi, j);
            double wq = simpson ? simp_w(j, n, den.du) : trap_w(j, n, den.du);
            cplx dl = delta_op(ctx, t, u);
            cplx phf = std::exp(phase(ctx, t, u));
            we[j] = wq * den.value[j] * eps;
            wd[j] = we[j] * dl;
            wh[j] = we[j] * phf;
            wk[j] = wh[j] * dl;
        }
        if (jlo > jhi) continue;
        double ulo = den.u_at(jlo);
        for (std::size_t ix = 0; ix < nx_; ++ix) {
            double x = x0_ + dx_ * static_cast<double>(ix);
            cplx ex = std::exp(I * ulo * x), step = std::exp(I * den.du * x);
            cplx ae = 0, ad = 0, ah = 0, ak = 0;
            for (std::size_t j = jlo; j <= jhi; ++j, ex *= step) {
                ae += we[j] * ex; ad += wd[j] * ex;
                ah += wh[j] * ex; ak += wk[j] * ex;
            }
            Se[ix] += ae; Sd[ix] += ad; Sh[ix] += ah; Sk[ix] += ak;
        }
    }
}

cplx KernelTable::at(const std::vector<std::vector<cplx>>& tab, double t,
                     double x) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t k = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    double rel = (x - x0_) / dx_;
    double fl = std::floor(rel);
    std::size_t ix = static_cast<std::size_t>(std::clamp(fl, 0.0,
                         static_cast<double>(nx_ - 2)));
    double frac = std::clamp(rel - static_cast<double>(ix), 0.0, 1.0);
    return tab[k][ix] * (1.0 - frac) + tab[k][ix + 1] * frac;
}

void default_x_range(const Model& model, double T, double& x_lo, double& x_hi) {
    double mean = model.psi_d1(T, 0.0).imag();
    double sd = std::sqrt(std::max(0.0, -model.psi_d2(T, 0.0).real()));
    x_lo = mean - 8.0 * sd;
    x_hi = mean + 8.0 * sd;
}

}  // namespace qhedge
