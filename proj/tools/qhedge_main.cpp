#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhedge/calculus.hpp"
#include "qhedge/config.hpp"
#include "qhedge/decompose.hpp"
#include "qhedge/errors.hpp"
#include "qhedge/risk.hpp"
#include "qhedge/simulate.hpp"

using json = nlohmann::ordered_json;
using namespace qhedge;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    // optional overrides
    long long seed = -1;
    long long paths = -1;
    long long steps = -1;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_sim_overrides) {
    cmd->add_option("--config", a.config_path, "run configuration file")->required();
    cmd->add_option("--out", a.out_path, "output path (default: stdout)");
    cmd->add_option("--format", a.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_sim_overrides) {
        cmd->add_option("--seed", a.seed, "override simulate.seed");
        cmd->add_option("--paths", a.paths, "override simulate.paths");
        cmd->add_option("--steps", a.steps, "override simulate.steps");
    }
}

RunConfig load(const CommonArgs& a) {
    RunConfig cfg = parse_config_file(a.config_path);
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
    if (a.paths > 0) cfg.paths = static_cast<std::size_t>(a.paths);
    if (a.steps > 0) cfg.steps = static_cast<std::size_t>(a.steps);
    return cfg;
}

void emit(const CommonArgs& a, const std::string& text) {
    if (a.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(a.out_path);
    if (!out) throw Error("cannot open output file '" + a.out_path + "'");
    out << text;
}

std::shared_ptr<OperatorContext> make_ctx(const RunConfig& cfg) {
    auto ctx = std::make_shared<OperatorContext>(cfg.make_model(), cfg.horizon);
    ctx->quad_tol = cfg.quad_tol;
    ctx->trunc_tol = cfg.trunc_tol;
    return ctx;
}

int cmd_model_inspect(const CommonArgs& a) {
    RunConfig cfg = load(a);
    Model model = cfg.make_model();
    StructureCondition sc = check_sc(model, cfg.horizon);
    cplx p1 = model.psi_d1(cfg.horizon, 0.0);
    cplx p2 = model.psi_d2(cfg.horizon, 0.0);
    json out;
    out["schema"] = "qhedge.model_inspect.v1";
    out["model"] = model.tag();
    out["horizon"] = cfg.horizon;
    out["psi_d1_at_0"] = {p1.real(), p1.imag()};
    out["psi_d2_at_0"] = {p2.real(), p2.imag()};
    out["sc_satisfied"] = sc.satisfied;
    if (!sc.satisfied) {
        out["sc_reason"] = sc.reason;
    } else {
        json alpha = json::array();
        for (std::size_t k = 0; k < sc.alpha_v.size(); ++k)
            alpha.push_back({{"t_lo", sc.t[k]}, {"t_hi", sc.t[k + 1]},
                             {"alpha", sc.alpha_v[k]}});
        out["alpha"] = alpha;
        out["K_T"] = sc.K_T;
    }
    emit(a, out.dump(2));
    return 0;
}

int cmd_decompose(const CommonArgs& a) {
    RunConfig cfg = load(a);
    auto ctx = make_ctx(cfg);
    ComplexMeasure mu = cfg.make_payoff();
    KWDecomposition kwd = kw(ctx, mu);
    FSDecomposition fsd = fs(ctx, mu);

    double xlo, xhi;
    default_x_range(ctx->model, ctx->T, xlo, xhi);
    const std::size_t nt = 11, nx = std::max<std::size_t>(2, cfg.x_points);
    std::ostringstream csv;
    csv << "t,x,xi,Z,H,V\n";
    for (std::size_t it = 0; it < nt; ++it) {
        double t = ctx->T * static_cast<double>(it) / static_cast<double>(nt - 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            double x = xlo + (xhi - xlo) * static_cast<double>(ix) /
                                 static_cast<double>(nx - 1);
            KernelValues kv = kernel_all(*ctx, mu, t, x);
            csv << t << "," << x << "," << kv.k.real() << "," << kv.d.real() << ","
                << kv.h.real() << "," << kv.e.real() << "\n";
        }
    }
    if (a.format == "csv") {
        emit(a, csv.str());
        return 0;
    }
    json out;
    out["schema"] = "qhedge.decompose.v1";
    out["H0"] = fsd.H0();
    out["V0"] = kwd.V0();
    out["imag_residual"] = std::max(fsd.imag_residual(), kwd.imag_residual());
    out["table_csv"] = csv.str();
    emit(a, out.dump(2));
    return 0;
}

int cmd_hedge_error(const CommonArgs& a) {
    RunConfig cfg = load(a);
    auto ctx = make_ctx(cfg);
    ComplexMeasure mu = cfg.make_payoff();
    RiskOptions opt;
    opt.density_trunc = cfg.density_trunc;
    opt.density_step = cfg.density_step;
    ErrorReport rep = variance_error(*ctx, mu, opt);
    json out;
    out["schema"] = "qhedge.hedge_error.v1";
    out["j0"] = rep.j0;
    out["imag_residual"] = rep.imag_residual;
    out["kernel_evals"] = rep.kernel_evals;
    emit(a, out.dump(2));
    return 0;
}

int cmd_backtest(const CommonArgs& a) {
    RunConfig cfg = load(a);
    auto ctx = make_ctx(cfg);
    ComplexMeasure mu = cfg.make_payoff();
    FSDecomposition fsd = fs(ctx, mu);
    RiskOptions opt;
    opt.density_trunc = cfg.density_trunc;
    opt.density_step = cfg.density_step;
    double j0 = variance_error(*ctx, mu, opt).j0;

    std::vector<double> grid(cfg.steps + 1);
    for (std::size_t k = 0; k <= cfg.steps; ++k)
        grid[k] = cfg.horizon * static_cast<double>(k) / static_cast<double>(cfg.steps);
    PathBatch batch = simulate_paths(ctx->model, grid, cfg.paths, cfg.seed);

    double xlo, xhi;
    default_x_range(ctx->model, ctx->T, xlo, xhi);
    KernelTable table(*ctx, mu, grid, xlo, xhi, cfg.x_points);
    StrategyKind kind = (cfg.strategy == "fs-pure") ? StrategyKind::FsPure
                                                    : StrategyKind::VoFeedback;
    BacktestReport rep = backtest(fsd, kind, batch, j0, &table);

    json out;
    out["schema"] = "qhedge.backtest.v1";
    out["n_paths"] = rep.n_paths;
    out["steps"] = rep.steps;
    out["realized_mse"] = rep.realized_mse;
    out["se"] = rep.se;
    out["analytic_j0"] = rep.analytic_j0;
    out["h0_used"] = rep.h0_used;
    out["strategy"] = rep.strategy;
    out["seed"] = rep.seed;
    emit(a, out.dump(2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit quadratic hedging for Fourier-representable payoffs"};
    app.require_subcommand(1);

    std::ostringstream keys;
    keys << "config keys:";
    for (const auto& k : config_keys()) keys << " " << k;
    app.footer(keys.str());

    CommonArgs a_inspect, a_dec, a_err, a_bt;
    CLI::App* model = app.add_subcommand("model", "model-level diagnostics");
    model->require_subcommand(1);
    CLI::App* inspect =
        model->add_subcommand("inspect", "print psi'(0), psi''(0), alpha, K_T, SC verdict");
    add_common(inspect, a_inspect, false);
    CLI::App* dec = app.add_subcommand("decompose", "KW/FS decomposition and strategy table");
    add_common(dec, a_dec, false);
    CLI::App* herr = app.add_subcommand("hedge-error", "analytic variance-optimal error J0");
    add_common(herr, a_err, false);
    CLI::App* bt = app.add_subcommand("backtest", "Monte Carlo hedging backtest");
    add_common(bt, a_bt, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) return cmd_model_inspect(a_inspect);
        if (dec->parsed()) return cmd_decompose(a_dec);
        if (herr->parsed()) return cmd_hedge_error(a_err);
        if (bt->parsed()) return cmd_backtest(a_bt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
