#include "qhedge/payoff.hpp"

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

}  // namespace

double ComplexMeasure::total_variation() const {
    double tv = 0.0;
    for (const auto& a : atoms) tv += std::abs(a.w);
    if (density) {
        const auto& d = *density;
        for (std::size_t j = 0; j < d.value.size(); ++j)
            tv += std::abs(d.value[j]) * trap_w(j, d.value.size(), d.du);
    }
    return tv;
}

bool ComplexMeasure::hermitian() const {
    const double tol = 1e-12;
    for (const auto& a : atoms) {
        cplx mirror = 0.0;
        for (const auto& b : atoms)
            if (std::abs(b.u + a.u) < tol * (1.0 + std::abs(a.u))) mirror += b.w;
        if (std::abs(mirror - std::conj(a.w)) > tol * (1.0 + std::abs(a.w))) return false;
    }
    if (density) {
        const auto& d = *density;
        std::size_t n = d.value.size();
        if (n == 0) return true;
        // grid must be symmetric about 0
        if (std::abs(d.u0 + d.u_at(n - 1)) > tol * (1.0 + std::abs(d.u0))) return false;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(d.value[j] - std::conj(d.value[n - 1 - j])) >
                tol * (1.0 + std::abs(d.value[j])))
                return false;
    }
    return true;
}

cplx fourier_eval(const ComplexMeasure& mu, double x) {
    cplx f = 0.0;
    for (const auto& a : mu.atoms) f += a.w * std::exp(I * a.u * x);
    if (mu.density) {
        const auto& d = *mu.density;
        std::size_t n = d.value.size();
        // e^{iux} along the uniform grid by complex-multiply recurrence
        cplx e = std::exp(I * d.u0 * x);
        cplx step = std::exp(I * d.du * x);
        for (std::size_t j = 0; j < n; ++j, e *= step)
            f += d.value[j] * e * trap_w(j, n, d.du);
    }
    return f;
}

ComplexMeasure self_quanto_put(double K, double truncation, double grid_step) {
    if (!(K > 0.0)) throw Error("self_quanto_put: K must be > 0");
    ComplexMeasure mu;
    ComplexMeasure::Density d;
    std::size_t n = 2 * static_cast<std::size_t>(std::llround(truncation / grid_step)) + 1;
    d.du = grid_step;
    d.u0 = -grid_step * static_cast<double>((n - 1) / 2);
    d.value.resize(n);
    const double lk = std::log(K);
    for (std::size_t j = 0; j < n; ++j) {
        double u = d.u_at(j);
        // (1/2pi) * K^{2-iu} / ((1-iu)(2-iu))
        cplx num = K * K * std::exp(-I * u * lk);
        d.value[j] = num / (cplx(1.0, -u) * cplx(2.0, -u)) / (2.0 * M_PI);
    }
    mu.density = std::move(d);

    // reconstruction oracle on the payoff's active range
    double worst = 0.0;
    for (double x = lk - 7.0; x <= lk + 1.0 + 1e-9; x += 0.25) {
        double exact = std::exp(x) * std::max(K - std::exp(x), 0.0);
        worst = std::max(worst, std::abs(fourier_eval(mu, x).real() - exact));
    }
    if (worst > 1e-3) {
        std::ostringstream os;
        os << "self_quanto_put: reconstruction error " << worst
           << " exceeds 1e-3; widen the truncation or refine the grid";
        throw TruncationTooTight(os.str());
    }
    return mu;
}

ComplexMeasure scale_argument(const ComplexMeasure& mu, double c) {
    if (c == 0.0) throw Error("scale_argument: scale must be nonzero");
    ComplexMeasure out;
    for (const auto& a : mu.atoms) out.atoms.push_back({c * a.u, a.w});
    if (mu.density) {
        ComplexMeasure::Density d = *mu.density;
        d.u0 *= c;
        d.du *= c;
        for (auto& v : d.value) v /= std::abs(c);
        if (c < 0.0) {
            std::reverse(d.value.begin(), d.value.end());
            d.u0 = c * mu.density->u_at(mu.density->value.size() - 1);
            d.du = -d.du;
        }
        out.density = std::move(d);
    }
    return out;
}

}  // namespace qhedge
