#include "qhedge/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qhedge/errors.hpp"

namespace qhedge {

namespace {

const cplx I{0.0, 1.0};

// Trapezoid weights for a (possibly non-uniform) grid.
double trap_w(const std::vector<double>& x, std::size_t j) {
    if (x.size() < 2) return 0.0;
    if (j == 0) return 0.5 * (x[1] - x[0]);
    if (j + 1 == x.size()) return 0.5 * (x[j] - x[j - 1]);
    return 0.5 * (x[j + 1] - x[j - 1]);
}

void validate_triplet(const LevyTriplet& tr) {
    if (tr.gaussian < 0.0) throw Error("custom triplet: gaussian part must be >= 0");
    for (const auto& a : tr.atoms)
        if (!(a.weight > 0.0)) throw Error("custom triplet: jump weights must be > 0");
    if (tr.density) {
        const auto& d = *tr.density;
        if (d.x.size() != d.value.size() || d.x.size() < 2)
            throw Error("custom triplet: density grid and values must match, size >= 2");
        for (std::size_t j = 1; j < d.x.size(); ++j)
            if (!(d.x[j] > d.x[j - 1]))
                throw Error("custom triplet: density grid must be strictly increasing");
        for (double v : d.value)
            if (v < 0.0) throw Error("custom triplet: density must be >= 0");
    }
}

// NIG helper: gamma_z = sqrt(theta^2 - (beta + iu)^2), principal branch.
cplx nig_gamma(const NigParams& p, double u) {
    cplx z = p.beta + I * u;
    return std::sqrt(cplx(p.theta * p.theta) - z * z);
}

// VG helper: g(u) = theta - i beta u + u^2/2 (Re g >= theta > 0, so the
// principal log of theta/g never crosses the cut).
cplx vg_g(const VgParams& p, double u) {
    return cplx(p.theta + 0.5 * u * u, -p.beta * u);
}

struct LevyDerivs {
    cplx psi, d1, d2;
};

LevyDerivs custom_derivs(const LevyTriplet& tr, double u) {
    LevyDerivs r;
    r.psi = I * tr.drift * u - 0.5 * tr.gaussian * u * u;
    r.d1 = I * tr.drift - tr.gaussian * u;
    r.d2 = -tr.gaussian;
    auto add_jump = [&](double x, double w) {
        cplx e = std::exp(I * u * x);
        double cut = (std::abs(x) <= 1.0) ? x : 0.0;
        r.psi += w * (e - 1.0 - I * u * cut);
        r.d1 += w * (I * x * e - I * cut);
        r.d2 += w * (-x * x * e);
    };
    for (const auto& a : tr.atoms) add_jump(a.x, a.weight);
    if (tr.density) {
        const auto& d = *tr.density;
        for (std::size_t j = 0; j < d.x.size(); ++j)
            add_jump(d.x[j], d.value[j] * trap_w(d.x, j));
    }
    return r;
}

}  // namespace

cplx levy_exponent(const LevyModel& m, double u) {
    return std::visit(
        [&](const auto& p) -> cplx {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PoissonParams>) {
                return p.lambda * (std::exp(I * u) - 1.0);
            } else if constexpr (std::is_same_v<T, NigParams>) {
                double g0 = std::sqrt(p.theta * p.theta - p.beta * p.beta);
                return I * p.mu * u + p.delta * (g0 - nig_gamma(p, u));
            } else if constexpr (std::is_same_v<T, VgParams>) {
                return I * p.mu * u + p.delta * std::log(p.theta / vg_g(p, u));
            } else {
                return custom_derivs(p, u).psi;
            }
        },
        m.family);
}

cplx levy_exponent_d1(const LevyModel& m, double u) {
    return std::visit(
        [&](const auto& p) -> cplx {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PoissonParams>) {
                return I * p.lambda * std::exp(I * u);
            } else if constexpr (std::is_same_v<T, NigParams>) {
                return I * p.mu + I * p.delta * (p.beta + I * u) / nig_gamma(p, u);
            } else if constexpr (std::is_same_v<T, VgParams>) {
                // d/du log(theta/g) = -g'/g with g' = u - i beta
                return I * p.mu - p.delta * cplx(u, -p.beta) / vg_g(p, u);
            } else {
                return custom_derivs(p, u).d1;
            }
        },
        m.family);
}

cplx levy_exponent_d2(const LevyModel& m, double u) {
    return std::visit(
        [&](const auto& p) -> cplx {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PoissonParams>) {
                return -p.lambda * std::exp(I * u);
            } else if constexpr (std::is_same_v<T, NigParams>) {
                cplx g = nig_gamma(p, u);
                return -p.delta * p.theta * p.theta / (g * g * g);
            } else if constexpr (std::is_same_v<T, VgParams>) {
                cplx g = vg_g(p, u), gp = cplx(u, -p.beta);
                return -p.delta * (g - gp * gp) / (g * g);
            } else {
                return custom_derivs(p, u).d2;
            }
        },
        m.family);
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) {
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, TimeChangedBrownian>) {
                tag_ = "brownian";
                if (fam.gamma.t.empty() || fam.psi.t.empty())
                    throw Error("brownian model: gamma and psi grids required");
                if (!fam.psi.nondecreasing())
                    throw Error("brownian model: psi must be nondecreasing");
            } else if constexpr (std::is_same_v<T, LevyModel>) {
                std::visit(
                    [&](const auto& p) {
                        using P = std::decay_t<decltype(p)>;
                        if constexpr (std::is_same_v<P, PoissonParams>) {
                            tag_ = "poisson";
                            if (!(p.lambda > 0.0)) throw Error("poisson: lambda must be > 0");
                        } else if constexpr (std::is_same_v<P, NigParams>) {
                            tag_ = "nig";
                            if (!(p.theta > std::abs(p.beta)) || !(std::abs(p.beta) > 0.0))
                                throw Error("nig: requires theta > |beta| > 0");
                            if (!(p.delta > 0.0)) throw Error("nig: delta must be > 0");
                        } else if constexpr (std::is_same_v<P, VgParams>) {
                            tag_ = "vg";
                            if (!(p.theta > 0.0)) throw Error("vg: theta must be > 0");
                            if (!(p.beta > 0.0)) throw Error("vg: beta must be > 0");
                            if (p.delta == 0.0) throw Error("vg: delta must be nonzero");
                        } else {
                            tag_ = "custom";
                            validate_triplet(p);
                        }
                    },
                    fam.family);
            } else if constexpr (std::is_same_v<T, WienerLevy>) {
                tag_ = "wiener_levy";
                if (fam.weight.t.empty()) throw Error("wiener_levy: weight grid required");
            } else {
                tag_ = "ou";
                if (!fam.base) throw Error("ou wrapper: base model required");
                if (std::holds_alternative<OUWrapper>(fam.base->family))
                    throw Error("ou wrapper: nested OU wrappers not supported");
            }
        },
        spec_.family);
}

bool Model::is_levy() const { return std::holds_alternative<LevyModel>(spec_.family); }
bool Model::is_additive() const { return !std::holds_alternative<OUWrapper>(spec_.family); }

cplx Model::psi(double t, double u) const {
    return std::visit(
        [&](const auto& fam) -> cplx {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, TimeChangedBrownian>) {
                return I * fam.gamma(t) * u - 0.5 * u * u * fam.psi(t);
            } else if constexpr (std::is_same_v<T, LevyModel>) {
                return t * levy_exponent(fam, u);
            } else if constexpr (std::is_same_v<T, WienerLevy>) {
                // Psi_t(u) = int_0^t Psi_Lambda(u gamma_s) ds, exact on segments
                cplx acc = 0.0;
                const auto& w = fam.weight;
                for (std::size_t k = 0; k < w.segments() && w.t[k] < t; ++k) {
                    double dt = std::min(t, w.t[k + 1]) - w.t[k];
                    acc += dt * levy_exponent(fam.base, u * w.v[k]);
                }
                if (t > w.t.back()) acc += (t - w.t.back()) * levy_exponent(fam.base, u * w.v.back());
                return acc;
            } else {
                // marginal law of X_t = e^{-at} Xtilde_t
                return Model(*fam.base).psi(t, u * std::exp(-fam.rate * t));
            }
        },
        spec_.family);
}

cplx Model::psi_d1(double t, double u) const {
    return std::visit(
        [&](const auto& fam) -> cplx {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, TimeChangedBrownian>) {
                return I * fam.gamma(t) - u * fam.psi(t);
            } else if constexpr (std::is_same_v<T, LevyModel>) {
                return t * levy_exponent_d1(fam, u);
            } else if constexpr (std::is_same_v<T, WienerLevy>) {
                cplx acc = 0.0;
                const auto& w = fam.weight;
                for (std::size_t k = 0; k < w.segments() && w.t[k] < t; ++k) {
                    double dt = std::min(t, w.t[k + 1]) - w.t[k];
                    acc += dt * w.v[k] * levy_exponent_d1(fam.base, u * w.v[k]);
                }
                if (t > w.t.back())
                    acc += (t - w.t.back()) * w.v.back() * levy_exponent_d1(fam.base, u * w.v.back());
                return acc;
            } else {
                double s = std::exp(-fam.rate * t);
                return s * Model(*fam.base).psi_d1(t, u * s);
            }
        },
        spec_.family);
}

cplx Model::psi_d2(double t, double u) const {
    return std::visit(
        [&](const auto& fam) -> cplx {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, TimeChangedBrownian>) {
                return -fam.psi(t);
            } else if constexpr (std::is_same_v<T, LevyModel>) {
                return t * levy_exponent_d2(fam, u);
            } else if constexpr (std::is_same_v<T, WienerLevy>) {
                cplx acc = 0.0;
                const auto& w = fam.weight;
                for (std::size_t k = 0; k < w.segments() && w.t[k] < t; ++k) {
                    double dt = std::min(t, w.t[k + 1]) - w.t[k];
                    acc += dt * w.v[k] * w.v[k] * levy_exponent_d2(fam.base, u * w.v[k]);
                }
                if (t > w.t.back())
                    acc += (t - w.t.back()) * w.v.back() * w.v.back() *
                           levy_exponent_d2(fam.base, u * w.v.back());
                return acc;
            } else {
                double s = std::exp(-fam.rate * t);
                return s * s * Model(*fam.base).psi_d2(t, u * s);
            }
        },
        spec_.family);
}

std::vector<double> Model::breakpoints(double T) const {
    if (!(T > 0.0)) throw Error("horizon must be > 0");
    std::set<double> pts{0.0, T};
    std::visit(
        [&](const auto& fam) {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, TimeChangedBrownian>) {
                for (double s : fam.gamma.t)
                    if (s > 0.0 && s < T) pts.insert(s);
                for (double s : fam.psi.t)
                    if (s > 0.0 && s < T) pts.insert(s);
            } else if constexpr (std::is_same_v<F, WienerLevy>) {
                if (fam.weight.t.back() < T)
                    throw Error("wiener_levy: weight grid does not cover [0,T]");
                for (double s : fam.weight.t)
                    if (s > 0.0 && s < T) pts.insert(s);
            } else if constexpr (std::is_same_v<F, OUWrapper>) {
                throw UnsupportedModel("OU wrapper has no additive segment structure");
            }
        },
        spec_.family);
    return {pts.begin(), pts.end()};
}

cplx Model::psi_rate(double t, double u) const {
    return std::visit(
        [&](const auto& fam) -> cplx {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, TimeChangedBrownian>) {
                double gp = fam.gamma.slope(fam.gamma.segment_index(t));
                double pp = fam.psi.slope(fam.psi.segment_index(t));
                return I * gp * u - 0.5 * u * u * pp;
            } else if constexpr (std::is_same_v<F, LevyModel>) {
                return levy_exponent(fam, u);
            } else if constexpr (std::is_same_v<F, WienerLevy>) {
                return levy_exponent(fam.base, u * fam.weight(t));
            } else {
                throw UnsupportedModel("OU wrapper has no additive segment structure");
            }
        },
        spec_.family);
}

cplx Model::zeta_rate(double t, double u) const {
    return std::visit(
        [&](const auto& fam) -> cplx {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, TimeChangedBrownian>) {
                double gp = fam.gamma.slope(fam.gamma.segment_index(t));
                double pp = fam.psi.slope(fam.psi.segment_index(t));
                return I * gp - u * pp;
            } else if constexpr (std::is_same_v<F, LevyModel>) {
                return levy_exponent_d1(fam, u);
            } else if constexpr (std::is_same_v<F, WienerLevy>) {
                double g = fam.weight(t);
                return g * levy_exponent_d1(fam.base, u * g);
            } else {
                throw UnsupportedModel("OU wrapper has no additive segment structure");
            }
        },
        spec_.family);
}

cplx Model::xi_rate(double t, double u) const {
    return std::visit(
        [&](const auto& fam) -> cplx {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, TimeChangedBrownian>) {
                return -fam.psi.slope(fam.psi.segment_index(t));
            } else if constexpr (std::is_same_v<F, LevyModel>) {
                return levy_exponent_d2(fam, u);
            } else if constexpr (std::is_same_v<F, WienerLevy>) {
                double g = fam.weight(t);
                return g * g * levy_exponent_d2(fam.base, u * g);
            } else {
                throw UnsupportedModel("OU wrapper has no additive segment structure");
            }
        },
        spec_.family);
}

cplx Model::drift_rate(double t) const { return zeta_rate(t, 0.0); }

double Model::var_rate(double t) const {
    double v = -xi_rate(t, 0.0).real();
    if (v < 0.0) throw Error("negative variance rate: psi'' sign broken");
    return v;
}

NormalizedJumps Model::normalized_jumps(double t) const {
    return std::visit(
        [&](const auto& fam) -> NormalizedJumps {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, TimeChangedBrownian>) {
                return NormalizedJumps{1.0, {}, std::nullopt};
            } else if constexpr (std::is_same_v<F, LevyModel>) {
                (void)t;
                return std::visit(
                    [&](const auto& p) -> NormalizedJumps {
                        using P = std::decay_t<decltype(p)>;
                        if constexpr (std::is_same_v<P, PoissonParams>) {
                            // F = lambda * delta_1, variance rate lambda
                            return NormalizedJumps{0.0, {{1.0, 1.0}}, std::nullopt};
                        } else if constexpr (std::is_same_v<P, VgParams>) {
                            // difference-of-gammas Levy density
                            //   k(x) = delta e^{-x/r}/x   (x > 0)
                            //        = delta e^{x/s}/|x|  (x < 0)
                            double bt = p.beta / p.theta;
                            double r = 0.5 * (bt + std::sqrt(bt * bt + 2.0 / p.theta));
                            double s = r - bt;
                            double var = p.delta * (p.theta + p.beta * p.beta) /
                                         (p.theta * p.theta);
                            JumpDensity d;
                            auto side = [&](double scale, int sign) {
                                const int n = 20000;
                                double lo = 1e-8 * scale, hi = 45.0 * scale;
                                double ratio = std::pow(hi / lo, 1.0 / (n - 1));
                                std::vector<double> xs(n);
                                for (int j = 0; j < n; ++j)
                                    xs[j] = lo * std::pow(ratio, j);
                                if (sign < 0) {
                                    std::reverse(xs.begin(), xs.end());
                                    for (double& x : xs) x = -x;
                                }
                                for (double x : xs) {
                                    double ax = std::abs(x);
                                    d.x.push_back(x);
                                    d.value.push_back(std::abs(p.delta) *
                                                      std::exp(-ax / scale) / ax / var);
                                }
                            };
                            side(s, -1);
                            side(r, +1);
                            return NormalizedJumps{0.0, {}, std::move(d)};
                        } else if constexpr (std::is_same_v<P, LevyTriplet>) {
                            LevyDerivs d0 = custom_derivs(p, 0.0);
                            double var = -d0.d2.real();
                            if (!(var > 0.0))
                                throw UnsupportedModel(
                                    "custom triplet: zero variance, no normalized jumps");
                            NormalizedJumps nj;
                            nj.gaussian = p.gaussian / var;
                            for (const auto& a : p.atoms)
                                nj.atoms.push_back({a.x, a.weight / var});
                            if (p.density) {
                                nj.density = p.density;
                                for (double& v : nj.density->value) v /= var;
                            }
                            return nj;
                        } else {
                            throw UnsupportedModel(
                                "NIG has no tractable truncated Levy density here");
                        }
                    },
                    fam.family);
            } else {
                throw UnsupportedModel("no normalized jump structure for this family");
            }
        },
        spec_.family);
}

Model make_poisson(double lambda) {
    return Model{ModelSpec{LevyModel{PoissonParams{lambda}}}};
}
Model make_nig(double theta, double beta, double delta, double mu) {
    return Model{ModelSpec{LevyModel{NigParams{theta, beta, delta, mu}}}};
}
Model make_vg(double theta, double beta, double delta, double mu) {
    return Model{ModelSpec{LevyModel{VgParams{theta, beta, delta, mu}}}};
}
Model make_custom(LevyTriplet triplet) {
    return Model{ModelSpec{LevyModel{std::move(triplet)}}};
}
Model make_brownian(PiecewiseLinear gamma, PiecewiseLinear psi) {
    return Model{ModelSpec{TimeChangedBrownian{std::move(gamma), std::move(psi)}}};
}
Model make_wiener_levy(LevyModel base, PiecewiseConstant weight) {
    return Model{ModelSpec{WienerLevy{std::move(base), std::move(weight)}}};
}
Model make_ou(double rate, Model base) {
    return Model{ModelSpec{OUWrapper{rate, std::make_shared<ModelSpec>(base.spec())}}};
}

}  // namespace qhedge
