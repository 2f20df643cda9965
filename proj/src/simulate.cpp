#include "qhedge/simulate.hpp"

#include <cmath>
#include <random>

#include "qhedge/errors.hpp"

namespace qhedge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// per-path stream so results do not depend on scheduling
std::mt19937_64 path_engine(std::uint64_t seed, std::size_t path) {
    return std::mt19937_64(splitmix64(seed + 0x632BE59BD9B4E019ULL *
                                                 (static_cast<std::uint64_t>(path) + 1)));
}

// inverse-Gaussian(mean, shape) via Michael-Schucany-Haas
double sample_ig(std::mt19937_64& eng, double mean, double shape) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    double y = nd(eng);
    y *= y;
    double x = mean + mean * mean * y / (2.0 * shape) -
               mean / (2.0 * shape) *
                   std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
    if (ud(eng) <= mean / (mean + x)) return x;
    return mean * mean / x;
}

struct LevySampler {
    // draws one increment of the Levy family over dt
    virtual double draw(std::mt19937_64& eng, double dt) const = 0;
    virtual ~LevySampler() = default;
};

struct PoissonSampler : LevySampler {
    double lambda;
    explicit PoissonSampler(double l) : lambda(l) {}
    double draw(std::mt19937_64& eng, double dt) const override {
        std::poisson_distribution<long> pd(lambda * dt);
        return static_cast<double>(pd(eng));
    }
};

struct VgSampler : LevySampler {
    // difference of gammas: X = mu dt + G(delta dt, r) - G(delta dt, s)
    double mu, delta, r, s;
    explicit VgSampler(const VgParams& p) : mu(p.mu), delta(p.delta) {
        if (!(p.delta > 0.0)) throw UnsupportedModel("vg sampler needs delta > 0");
        double bt = p.beta / p.theta;
        r = 0.5 * (bt + std::sqrt(bt * bt + 2.0 / p.theta));
        s = r - bt;
    }
    double draw(std::mt19937_64& eng, double dt) const override {
        std::gamma_distribution<double> gp(delta * dt, r), gm(delta * dt, s);
        return mu * dt + gp(eng) - gm(eng);
    }
};

struct NigSampler : LevySampler {
    // inverse-Gaussian subordinated Brownian motion
    double mu, beta, delta, g0;
    explicit NigSampler(const NigParams& p)
        : mu(p.mu), beta(p.beta), delta(p.delta),
          g0(std::sqrt(p.theta * p.theta - p.beta * p.beta)) {}
    double draw(std::mt19937_64& eng, double dt) const override {
        double z = sample_ig(eng, delta * dt / g0, delta * delta * dt * dt);
        std::normal_distribution<double> nd;
        return mu * dt + beta * z + std::sqrt(z) * nd(eng);
    }
};

std::unique_ptr<LevySampler> make_levy_sampler(const LevyModel& m) {
    return std::visit(
        [](const auto& p) -> std::unique_ptr<LevySampler> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, PoissonParams>)
                return std::make_unique<PoissonSampler>(p.lambda);
            else if constexpr (std::is_same_v<P, VgParams>)
                return std::make_unique<VgSampler>(p);
            else if constexpr (std::is_same_v<P, NigParams>)
                return std::make_unique<NigSampler>(p);
            else
                throw UnsupportedModel("no exact sampler for custom Levy triplets");
        },
        m.family);
}

}  // namespace

PathBatch simulate_paths(const Model& model, const std::vector<double>& grid,
                         std::size_t n_paths, std::uint64_t seed) {
    if (grid.size() < 2) throw Error("simulation grid needs >= 2 times");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw Error("simulation grid must increase");

    PathBatch batch;
    batch.t = grid;
    batch.n_paths = n_paths;
    batch.seed = seed;
    batch.model_tag = model.tag();
    std::size_t ns = grid.size() - 1;
    batch.incr.resize(n_paths * ns);

    std::visit(
        [&](const auto& fam) {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, TimeChangedBrownian>) {
                for (std::size_t p = 0; p < n_paths; ++p) {
                    auto eng = path_engine(seed, p);
                    std::normal_distribution<double> nd;
                    for (std::size_t k = 0; k < ns; ++k) {
                        double dg = fam.gamma(grid[k + 1]) - fam.gamma(grid[k]);
                        double dp = fam.psi(grid[k + 1]) - fam.psi(grid[k]);
                        batch.incr[p * ns + k] = dg + std::sqrt(std::max(0.0, dp)) * nd(eng);
                    }
                }
            } else if constexpr (std::is_same_v<F, LevyModel>) {
                auto sampler = make_levy_sampler(fam);
                for (std::size_t p = 0; p < n_paths; ++p) {
                    auto eng = path_engine(seed, p);
                    for (std::size_t k = 0; k < ns; ++k)
                        batch.incr[p * ns + k] = sampler->draw(eng, grid[k + 1] - grid[k]);
                }
            } else if constexpr (std::is_same_v<F, WienerLevy>) {
                auto sampler = make_levy_sampler(fam.base);
                for (std::size_t p = 0; p < n_paths; ++p) {
                    auto eng = path_engine(seed, p);
                    for (std::size_t k = 0; k < ns; ++k) {
                        double g = fam.weight(grid[k]);
                        batch.incr[p * ns + k] =
                            g * sampler->draw(eng, grid[k + 1] - grid[k]);
                    }
                }
            } else {
                throw UnsupportedModel("no exact sampler for OU wrappers");
            }
        },
        model.spec().family);
    return batch;
}

namespace {

double eval_xi(const FSDecomposition& dec, const KernelTable* table, double t,
               double x) {
    if (table && table->covers(x)) return table->k_at(t, x).real();
    return dec.xi(t, x).real();
}

double eval_h(const FSDecomposition& dec, const KernelTable* table, double t,
              double x) {
    if (table && table->covers(x)) return table->h_at(t, x).real();
    return dec.H(t, x).real();
}

}  // namespace

BacktestReport backtest(const FSDecomposition& dec, StrategyKind kind,
                        const PathBatch& batch, double analytic_j0,
                        const KernelTable* table) {
    const OperatorContext& ctx = dec.ctx();
    const ComplexMeasure& mu = dec.payoff();
    double h0 = dec.H0();
    std::size_t ns = batch.steps();

    double sum = 0.0, sumsq = 0.0;
    for (std::size_t p = 0; p < batch.n_paths; ++p) {
        double x = 0.0, gains = 0.0;
        for (std::size_t k = 0; k < ns; ++k) {
            double t = batch.t[k];
            double v = eval_xi(dec, table, t, x);
            if (kind == StrategyKind::VoFeedback)
                v += ctx.sc.alpha(t) * (eval_h(dec, table, t, x) - h0 - gains);
            double dx = batch.increment(p, k);
            gains += v * dx;
            x += dx;
        }
        double err = fourier_eval(mu, x).real() - h0 - gains;
        double e2 = err * err;
        sum += e2;
        sumsq += e2 * e2;
    }
    double n = static_cast<double>(batch.n_paths);
    BacktestReport rep;
    rep.n_paths = batch.n_paths;
    rep.steps = ns;
    rep.realized_mse = sum / n;
    double var = std::max(0.0, sumsq / n - rep.realized_mse * rep.realized_mse);
    rep.se = std::sqrt(var / n);
    rep.analytic_j0 = analytic_j0;
    rep.h0_used = h0;
    rep.strategy = (kind == StrategyKind::FsPure) ? "fs-pure" : "vo-feedback";
    rep.seed = batch.seed;
    return rep;
}

double orthogonality_check(const FSDecomposition& dec, const PathBatch& batch,
                           const KernelTable* table) {
    const OperatorContext& ctx = dec.ctx();
    const ComplexMeasure& mu = dec.payoff();
    double h0 = dec.H0();
    std::size_t ns = batch.steps();
    double T = batch.t.back();
    double mean_xt = ctx.model.psi_d1(T, 0.0).imag();

    double sum = 0.0, sumsq = 0.0;
    for (std::size_t p = 0; p < batch.n_paths; ++p) {
        double x = 0.0, gains = 0.0;
        for (std::size_t k = 0; k < ns; ++k) {
            double v = eval_xi(dec, table, batch.t[k], x);
            double dx = batch.increment(p, k);
            gains += v * dx;
            x += dx;
        }
        double resid = fourier_eval(mu, x).real() - h0 - gains;
        double w = resid * (x - mean_xt);
        sum += w;
        sumsq += w * w;
    }
    double n = static_cast<double>(batch.n_paths);
    double mean = sum / n;
    double var = std::max(1e-300, sumsq / n - mean * mean);
    return mean / std::sqrt(var / n);
}

}  // namespace qhedge
