#include "qhedge/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "qhedge/errors.hpp"

namespace qhedge {

namespace {

const std::vector<std::string> kKeys = {
    "model",          "model.lambda",    "model.theta",   "model.beta",
    "model.delta",    "model.mu",        "model.gamma",   "model.psi",
    "model.weight",   "model.base",      "model.drift",   "model.gaussian",
    "model.atoms",    "horizon",         "payoff",        "payoff.atoms",
    "payoff.K",       "payoff.truncation", "payoff.step",
    "numeric.quad_tol", "numeric.trunc_tol", "numeric.density_trunc",
    "numeric.density_step", "numeric.x_points",
    "simulate.paths", "simulate.steps",  "simulate.seed", "simulate.strategy",
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    }
}

// "a:b, c:d, ..." -> list of pairs
std::vector<std::pair<double, double>> parse_pairs(const std::string& key,
                                                   const std::string& v) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("key '" + key + "': expected 't:value' pairs, got '" +
                              item + "'");
        out.emplace_back(to_double(key, trim(item.substr(0, colon))),
                         to_double(key, trim(item.substr(colon + 1))));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty pair list");
    return out;
}

PiecewiseLinear parse_pwl(const std::string& key, const std::string& v) {
    auto pairs = parse_pairs(key, v);
    std::vector<double> t, val;
    for (auto& [a, b] : pairs) {
        t.push_back(a);
        val.push_back(b);
    }
    try {
        return PiecewiseLinear(std::move(t), std::move(val));
    } catch (const std::exception& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        if (cfg.raw.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        cfg.raw[key] = value;
    }

    auto get = [&](const std::string& k) -> const std::string* {
        auto it = cfg.raw.find(k);
        return it == cfg.raw.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("horizon")) cfg.horizon = to_double("horizon", *v);
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be > 0");
    if (const auto* v = get("model")) cfg.model_family = *v;
    if (const auto* v = get("numeric.quad_tol")) cfg.quad_tol = to_double("numeric.quad_tol", *v);
    if (const auto* v = get("numeric.trunc_tol")) cfg.trunc_tol = to_double("numeric.trunc_tol", *v);
    if (const auto* v = get("numeric.density_trunc"))
        cfg.density_trunc = to_double("numeric.density_trunc", *v);
    if (const auto* v = get("numeric.density_step"))
        cfg.density_step = to_double("numeric.density_step", *v);
    if (const auto* v = get("numeric.x_points"))
        cfg.x_points = static_cast<std::size_t>(to_u64("numeric.x_points", *v));
    if (const auto* v = get("simulate.paths"))
        cfg.paths = static_cast<std::size_t>(to_u64("simulate.paths", *v));
    if (const auto* v = get("simulate.steps"))
        cfg.steps = static_cast<std::size_t>(to_u64("simulate.steps", *v));
    if (const auto* v = get("simulate.seed")) cfg.seed = to_u64("simulate.seed", *v);
    if (const auto* v = get("simulate.strategy")) {
        if (*v != "fs-pure" && *v != "vo-feedback")
            throw ConfigError("simulate.strategy must be 'fs-pure' or 'vo-feedback'");
        cfg.strategy = *v;
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Model RunConfig::make_model() const {
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = raw.find(k);
        return it == raw.end() ? nullptr : &it->second;
    };
    auto need = [&](const std::string& k) -> const std::string& {
        const auto* v = get(k);
        if (!v) throw ConfigError("model family '" + model_family +
                                  "' requires key '" + k + "'");
        return *v;
    };
    try {
        if (model_family == "poisson") {
            return make_poisson(to_double("model.lambda", need("model.lambda")));
        } else if (model_family == "nig" || model_family == "vg") {
            double th = to_double("model.theta", need("model.theta"));
            double be = to_double("model.beta", need("model.beta"));
            double de = to_double("model.delta", need("model.delta"));
            double mu = get("model.mu") ? to_double("model.mu", *get("model.mu")) : 0.0;
            return model_family == "nig" ? make_nig(th, be, de, mu)
                                         : make_vg(th, be, de, mu);
        } else if (model_family == "brownian") {
            return make_brownian(parse_pwl("model.gamma", need("model.gamma")),
                                 parse_pwl("model.psi", need("model.psi")));
        } else if (model_family == "wiener_levy") {
            const std::string& base = need("model.base");
            LevyModel lm;
            if (base == "poisson")
                lm.family = PoissonParams{to_double("model.lambda", need("model.lambda"))};
            else if (base == "vg" || base == "nig") {
                double th = to_double("model.theta", need("model.theta"));
                double be = to_double("model.beta", need("model.beta"));
                double de = to_double("model.delta", need("model.delta"));
                double mu = get("model.mu") ? to_double("model.mu", *get("model.mu")) : 0.0;
                if (base == "vg")
                    lm.family = VgParams{th, be, de, mu};
                else
                    lm.family = NigParams{th, be, de, mu};
            } else
                throw ConfigError("model.base must be poisson|nig|vg");
            auto pairs = parse_pairs("model.weight", need("model.weight"));
            std::vector<double> t, v;
            for (auto& [a, b] : pairs) {
                t.push_back(a);
                v.push_back(b);
            }
            v.pop_back();  // last knot is the right edge of the final segment
            return make_wiener_levy(std::move(lm), PiecewiseConstant(std::move(t), std::move(v)));
        } else if (model_family == "custom") {
            LevyTriplet tr;
            if (get("model.drift")) tr.drift = to_double("model.drift", *get("model.drift"));
            if (get("model.gaussian"))
                tr.gaussian = to_double("model.gaussian", *get("model.gaussian"));
            if (get("model.atoms"))
                for (auto& [x, w] : parse_pairs("model.atoms", *get("model.atoms")))
                    tr.atoms.push_back({x, w});
            return make_custom(std::move(tr));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model construction failed: ") + e.what());
    }
    throw ConfigError("unknown or missing model family '" + model_family + "'");
}

ComplexMeasure RunConfig::make_payoff() const {
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = raw.find(k);
        return it == raw.end() ? nullptr : &it->second;
    };
    const auto* kind = get("payoff");
    if (!kind) throw ConfigError("missing key 'payoff'");
    if (*kind == "atoms") {
        const auto* a = get("payoff.atoms");
        if (!a) throw ConfigError("payoff 'atoms' requires key 'payoff.atoms'");
        ComplexMeasure mu;
        for (auto& [u, w] : parse_pairs("payoff.atoms", *a)) mu.atoms.push_back({u, w});
        return mu;
    } else if (*kind == "self_quanto_put") {
        double K = get("payoff.K") ? to_double("payoff.K", *get("payoff.K")) : 1.0;
        double tr = get("payoff.truncation")
                        ? to_double("payoff.truncation", *get("payoff.truncation"))
                        : 500.0;
        double st = get("payoff.step") ? to_double("payoff.step", *get("payoff.step"))
                                       : 0.05;
        return self_quanto_put(K, tr, st);
    }
    throw ConfigError("payoff must be 'atoms' or 'self_quanto_put'");
}

}  // namespace qhedge
