#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qhedge/decompose.hpp"
#include "qhedge/operators.hpp"

namespace qhedge {

struct PathBatch {
    std::vector<double> t;  // 0 = t0 < ... < tN = T
    std::size_t n_paths = 0;
    std::vector<double> incr;  // row-major, n_paths x (t.size()-1)
    std::uint64_t seed = 0;
    std::string model_tag;

    std::size_t steps() const { return t.size() - 1; }
    double increment(std::size_t path, std::size_t k) const {
        return incr[path * steps() + k];
    }
};

// Exact-in-distribution increments per step; reproducible per (seed, path)
// independent of path ordering. Throws UnsupportedModel for families
// without an exact sampler (custom triplets, OU wrappers).
PathBatch simulate_paths(const Model& model, const std::vector<double>& grid,
                         std::size_t n_paths, std::uint64_t seed);

enum class StrategyKind { FsPure, VoFeedback };

struct BacktestReport {
    std::size_t n_paths = 0;
    std::size_t steps = 0;
    double realized_mse = 0.0;
    double se = 0.0;  // standard error of the mse estimate
    double analytic_j0 = 0.0;
    double h0_used = 0.0;
    std::string strategy;
    std::uint64_t seed = 0;
};

// Realized hedging error eps = f(X_T) - H0 - sum_k v_k (X_{t_{k+1}} - X_{t_k})
// with v evaluated at the left endpoint. fs-pure: v = xi(t_k, X_{t_k});
// vo-feedback adds alpha_t (H(t_k, X_{t_k}) - H0 - G_k). A kernel table
// covering the path range speeds evaluation; out-of-range states fall back
// to direct kernel evaluation.
BacktestReport backtest(const FSDecomposition& dec, StrategyKind kind,
                        const PathBatch& batch, double analytic_j0,
                        const KernelTable* table = nullptr);

// t-statistic of the Monte Carlo covariance between the fs-pure residual
// L_T and the martingale part M_T = X_T - E[X_T].
double orthogonality_check(const FSDecomposition& dec, const PathBatch& batch,
                           const KernelTable* table = nullptr);

}  // namespace qhedge
