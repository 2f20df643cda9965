#include <cmath>

#include "doctest.h"
#include "qhedge/errors.hpp"
#include "qhedge/model.hpp"

using namespace qhedge;

namespace {

const cplx I{0.0, 1.0};

// 4th-order central difference in u
cplx fd1(const Model& m, double t, double u, double h = 1e-4) {
    return (-m.psi(t, u + 2 * h) + 8.0 * m.psi(t, u + h) - 8.0 * m.psi(t, u - h) +
            m.psi(t, u - 2 * h)) /
           (12.0 * h);
}

}  // namespace

TEST_CASE("poisson log-characteristic function") {
    Model m = make_poisson(2.0);
    CHECK(std::abs(m.psi(1.0, 0.0)) == 0.0);
    // lambda (e^{i pi} - 1) = -4
    CHECK(std::abs(m.psi(1.0, M_PI) - cplx(-4.0, 0.0)) < 1e-12);

    Model m3 = make_poisson(3.0);
    CHECK(std::abs(m3.psi_d1(1.0, 0.0) - cplx(0.0, 3.0)) < 1e-14);
    CHECK(std::abs(m3.psi_d2(1.0, 0.0) - cplx(-3.0, 0.0)) < 1e-14);
}

TEST_CASE("time-changed brownian psi") {
    Model m = make_brownian(PiecewiseLinear({0, 2}, {0, 2}), PiecewiseLinear({0, 2}, {0, 2}));
    // gamma(t)=t, psi(t)=t: Psi_1(1) = i - 1/2
    CHECK(std::abs(m.psi(1.0, 1.0) - cplx(-0.5, 1.0)) < 1e-14);
    CHECK(std::abs(m.psi_d2(1.5, 0.7) - cplx(-1.5, 0.0)) < 1e-14);
}

TEST_CASE("nig closed-form derivatives at zero") {
    Model m = make_nig(2.0, 1.0, 1.0, 0.0);
    // Psi'(0) = i delta beta / gamma_0 = i / sqrt(3)
    CHECK(std::abs(m.psi_d1(1.0, 0.0) - I / std::sqrt(3.0)) < 1e-12);
    // Psi''(0) = -delta theta^2 / gamma_0^3 = -4 / (3 sqrt(3))
    CHECK(m.psi_d2(1.0, 0.0).real() == doctest::Approx(-0.7698003589195012).epsilon(1e-12));
    CHECK(std::abs(m.psi_d2(1.0, 0.0).imag()) < 1e-14);
}

TEST_CASE("vg closed-form derivatives at zero") {
    Model m = make_vg(2.0, 1.0, 1.0, 0.0);
    CHECK(std::abs(m.psi_d1(1.0, 0.0) - cplx(0.0, 0.5)) < 1e-13);
    CHECK(std::abs(m.psi_d2(1.0, 0.0) - cplx(-0.75, 0.0)) < 1e-13);
}

TEST_CASE("derivatives match finite differences of psi") {
    for (const Model& m : {make_nig(2.0, 1.0, 1.0, 0.3), make_vg(2.0, 1.0, 1.0, 0.3)}) {
        for (double u = -5.0; u <= 5.0; u += 0.5) {
            cplx num = fd1(m, 1.0, u);
            cplx ana = m.psi_d1(1.0, u);
            CHECK(std::abs(num - ana) < 1e-6 * (1.0 + std::abs(ana)));
        }
    }
}

TEST_CASE("psi invariants: zero at u=0, conjugate symmetry, levy scaling") {
    std::vector<Model> models = {make_poisson(1.5), make_nig(3.0, -1.0, 0.7, 0.2),
                                 make_vg(2.0, 1.0, 1.0, -0.5)};
    for (const auto& m : models) {
        for (double t : {0.3, 1.0, 2.0}) {
            CHECK(std::abs(m.psi(t, 0.0)) < 1e-15);
            for (double u : {0.5, 1.7, 4.0}) {
                CHECK(std::abs(std::conj(m.psi(t, u)) - m.psi(t, -u)) < 1e-12);
                CHECK(std::abs(m.psi(t, u) - t * m.psi(1.0, u)) < 1e-12 * (1.0 + t));
            }
        }
        CHECK(std::abs(m.psi_d2(1.0, 0.0).imag()) < 1e-13);
        CHECK(m.psi_d2(1.0, 0.0).real() <= 0.0);
    }
}

TEST_CASE("variance is nondecreasing in t") {
    Model m = make_brownian(PiecewiseLinear({0, 1, 2}, {0, 0.3, 0.3}),
                            PiecewiseLinear({0, 1, 2}, {0, 1, 1}));
    double prev = 0.0;
    for (double t = 0.0; t <= 2.0; t += 0.1) {
        double v = -m.psi_d2(t, 0.0).real();
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("custom triplet derivatives agree with finite differences") {
    LevyTriplet tr;
    tr.drift = 0.2;
    tr.gaussian = 0.5;
    tr.atoms = {{1.0, 0.4}, {-0.7, 0.3}};
    Model m = make_custom(tr);
    for (double u : {0.0, 0.8, -2.3}) {
        CHECK(std::abs(fd1(m, 1.0, u) - m.psi_d1(1.0, u)) < 1e-8);
    }
    CHECK(m.psi_d2(1.0, 0.0).real() ==
          doctest::Approx(-(0.5 + 0.4 + 0.3 * 0.49)).epsilon(1e-12));
}

TEST_CASE("wiener-levy psi is the weighted segment sum") {
    LevyModel base{PoissonParams{2.0}};
    Model m = make_wiener_levy(base, PiecewiseConstant({0.0, 0.5, 1.0}, {1.0, 3.0}));
    double u = 0.9;
    cplx expected = 0.5 * levy_exponent(base, u) + 0.5 * levy_exponent(base, 3.0 * u);
    CHECK(std::abs(m.psi(1.0, u) - expected) < 1e-13);
    cplx expected_d1 =
        0.5 * levy_exponent_d1(base, u) + 0.5 * 3.0 * levy_exponent_d1(base, 3.0 * u);
    CHECK(std::abs(m.psi_d1(1.0, u) - expected_d1) < 1e-13);
    CHECK(std::abs(fd1(m, 1.0, u) - m.psi_d1(1.0, u)) < 1e-7);
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(make_poisson(0.0), Error);
    CHECK_THROWS_AS(make_nig(1.0, 1.5, 1.0, 0.0), Error);   // theta <= |beta|
    CHECK_THROWS_AS(make_nig(2.0, 0.0, 1.0, 0.0), Error);   // beta = 0
    CHECK_THROWS_AS(make_nig(2.0, 1.0, -1.0, 0.0), Error);  // delta <= 0
    CHECK_THROWS_AS(make_vg(-1.0, 1.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(make_vg(2.0, 1.0, 0.0, 0.0), Error);
    CHECK_THROWS_AS(
        make_brownian(PiecewiseLinear({0, 1}, {0, 0}), PiecewiseLinear({0, 1}, {1, 0})),
        Error);  // psi decreasing
    LevyTriplet bad;
    bad.gaussian = -1.0;
    CHECK_THROWS_AS(make_custom(bad), Error);
}

TEST_CASE("ou wrapper exposes marginal psi but no segment structure") {
    Model base = make_brownian(PiecewiseLinear({0, 1}, {0, 0}), PiecewiseLinear({0, 1}, {0, 1}));
    Model ou = make_ou(0.5, base);
    CHECK_FALSE(ou.is_additive());
    // law of e^{-at} W_{psi(t)}: Psi_t(u) = -u^2 e^{-2at} psi(t) / 2
    double t = 0.8, u = 1.3;
    double s = std::exp(-0.5 * t);
    CHECK(std::abs(ou.psi(t, u) - cplx(-0.5 * u * u * s * s * t, 0.0)) < 1e-13);
    CHECK_THROWS_AS(ou.breakpoints(1.0), UnsupportedModel);
    CHECK_THROWS_AS(ou.normalized_jumps(0.5), UnsupportedModel);
}

TEST_CASE("normalized jumps integrate to unit second moment") {
    SUBCASE("poisson") {
        auto nj = make_poisson(3.0).normalized_jumps(0.5);
        CHECK(nj.gaussian == 0.0);
        REQUIRE(nj.atoms.size() == 1);
        CHECK(nj.atoms[0].x == 1.0);
        CHECK(nj.atoms[0].weight == 1.0);
    }
    SUBCASE("vg") {
        auto nj = make_vg(2.0, 1.0, 1.0, 0.0).normalized_jumps(0.5);
        REQUIRE(nj.density.has_value());
        const auto& d = *nj.density;
        double m2 = 0.0;
        for (std::size_t j = 0; j < d.x.size(); ++j) {
            double w = (j == 0)                ? 0.5 * (d.x[1] - d.x[0])
                       : (j + 1 == d.x.size()) ? 0.5 * (d.x[j] - d.x[j - 1])
                                               : 0.5 * (d.x[j + 1] - d.x[j - 1]);
            m2 += d.x[j] * d.x[j] * d.value[j] * w;
        }
        CHECK(m2 == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("nig unsupported") {
        CHECK_THROWS_AS(make_nig(2.0, 1.0, 1.0, 0.0).normalized_jumps(0.5),
                        UnsupportedModel);
    }
}
