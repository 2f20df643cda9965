#include "qhedge/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhedge/errors.hpp"

namespace qhedge {

namespace {

std::size_t segment_of(const std::vector<double>& t, double s) {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t k = static_cast<std::size_t>(it - t.begin());
    if (k == 0) return 0;
    if (k >= t.size()) return t.size() - 2;
    return k - 1;
}

}  // namespace

double StructureCondition::alpha(double s) const {
    if (!satisfied) throw SCViolated(reason);
    return alpha_v[segment_of(t, s)];
}

double StructureCondition::K(double s) const {
    if (!satisfied) throw SCViolated(reason);
    std::size_t k = segment_of(t, s);
    double slope = (K_knots[k + 1] - K_knots[k]) / (t[k + 1] - t[k]);
    return K_knots[k] + slope * (std::clamp(s, t.front(), t.back()) - t[k]);
}

double BaseMeasure::mass() const {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) m += rate[k] * (t[k + 1] - t[k]);
    return m;
}

double BaseMeasure::rate_at(double s) const { return rate[segment_of(t, s)]; }

StructureCondition check_sc(const Model& model, double T) {
    StructureCondition sc;
    sc.T = T;
    sc.t = model.breakpoints(T);
    sc.satisfied = true;
    sc.K_knots.assign(1, 0.0);
    for (std::size_t k = 0; k + 1 < sc.t.size(); ++k) {
        double mid = 0.5 * (sc.t[k] + sc.t[k + 1]);
        cplx drift = model.drift_rate(mid);
        double m = model.var_rate(mid);
        // dPsi'(0) is purely imaginary; any real part is a rate bug
        if (std::abs(drift.real()) > 1e-12 * (1.0 + std::abs(drift))) {
            sc.satisfied = false;
            sc.reason = "drift rate has a nonzero real part";
            break;
        }
        double a;
        if (m > 0.0) {
            a = drift.imag() / m;
        } else if (std::abs(drift.imag()) <= 1e-14) {
            a = 0.0;  // the process is constant on this segment
        } else {
            std::ostringstream os;
            os << "drift charges the zero-variance segment [" << sc.t[k] << ", "
               << sc.t[k + 1] << ")";
            sc.satisfied = false;
            sc.reason = os.str();
            break;
        }
        sc.alpha_v.push_back(a);
        sc.K_knots.push_back(sc.K_knots.back() + a * a * m * (sc.t[k + 1] - sc.t[k]));
    }
    if (!sc.satisfied) {
        sc.alpha_v.clear();
        sc.K_knots.clear();
        return sc;
    }
    sc.K_T = sc.K_knots.back();
    return sc;
}

double mvt(const StructureCondition& sc, double t) { return sc.K(t); }

BaseMeasure base_measure(const Model& model, double T) {
    BaseMeasure b;
    b.t = model.breakpoints(T);
    for (std::size_t k = 0; k + 1 < b.t.size(); ++k)
        b.rate.push_back(model.var_rate(0.5 * (b.t[k] + b.t[k + 1])));
    return b;
}

cplx first_density(const Model& model, double s, double u) {
    return model.zeta_rate(s, u);
}

cplx second_density(const Model& model, double s, double u) {
    double m = model.var_rate(s);
    if (m <= 0.0) return 1.0;  // convention on null segments
    return -model.xi_rate(s, u) / m;
}

}  // namespace qhedge
