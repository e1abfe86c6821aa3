#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "laguerre/errors.hpp"
#include "laguerre/laws.hpp"
#include "laguerre/specfun.hpp"

using namespace laguerre;
using std::numbers::pi;

namespace {

// int_0^inf dy1 int_0^y1 dy2 f(y1, y2)
template <class F>
double chamber_integral(F f, double y_max, double tol = 1e-11) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(
        [&](double y1) {
            if (y1 <= 0.0) return 0.0;
            return ts.integrate([&](double y2) { return y2 > 0.0 && y2 < y1 ? f(y1, y2) : 0.0; }, 0.0, y1, tol);
        },
        0.0, y_max, tol);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("laplace transform closed form") {
    auto central = LaguerreModel::from_spectrum(1.7, {0.0});
    CHECK(laplace_transform(central, 0.8, HermitianMatrix::diagonal({0.3})) ==
          doctest::Approx(std::pow(1 + 2 * 0.8 * 0.3, -1.7)).epsilon(1e-14));
    auto model = LaguerreModel::from_spectrum(2.5, {1.0, 2.0});
    CHECK(laplace_transform(model, 1.0, HermitianMatrix::zero(2)) == 1.0);
    // u = c I reduces to the trace: BESQ(2 delta m, tr x)
    const double c = 0.4;
    CHECK(laplace_transform(model, 1.0, HermitianMatrix::diagonal({c, c})) ==
          doctest::Approx(std::pow(1 + 2 * c, -5.0) * std::exp(-3.0 * c / (1 + 2 * c))).epsilon(1e-14));
    // non-commuting x and u
    Eigen::MatrixXcd x(2, 2), u(2, 2);
    x << 1.0, cdouble(0.3, 0.2), cdouble(0.3, -0.2), 2.0;
    u << 0.3, cdouble(0.05, -0.1), cdouble(0.05, 0.1), 0.1;
    LaguerreModel mx(2, 2.5, HermitianMatrix(x));
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2) + 2.0 * u;
    const double expect = std::pow(a.determinant().real(), -2.5) * std::exp(-(x * a.inverse() * u).trace().real());
    CHECK(laplace_transform(mx, 1.0, HermitianMatrix(u)) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("m = 1 transition density is the BESQ kernel and integrates to one") {
    const double delta = 1.6, t = 0.7, x = 1.3;
    auto model = LaguerreModel::from_spectrum(delta, {x});
    const double nu = delta - 1;
    for (double y : {0.1, 0.9, 2.5, 7.0}) {
        const double expect = std::pow(y / x, nu / 2) * std::exp(-(x + y) / (2 * t)) *
                              std::cyl_bessel_i(nu, std::sqrt(x * y) / t) / (2 * t);
        CHECK(transition_density(model, t, HermitianMatrix::diagonal({x}), HermitianMatrix::diagonal({y})) ==
              doctest::Approx(expect).epsilon(1e-12));
        CHECK(eigen_semigroup(1, delta, t, {x}, {y}) == doctest::Approx(expect).epsilon(1e-12));
    }
    boost::math::quadrature::exp_sinh<double> es;
    double mass = es.integrate([&](double y) {
        return transition_density(model, t, HermitianMatrix::diagonal({x}), HermitianMatrix::diagonal({y}));
    });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(transition_density(LaguerreModel::from_spectrum(0.9, {1.0, 1.0}), 1.0,
                                       HermitianMatrix::diagonal({1.0, 1.0}), HermitianMatrix::diagonal({1.0, 2.0})),
                    DomainError);
}

TEST_CASE("central transition density and the Weyl constant") {
    // from zero: exp(-tr y / 2t) det(y)^{delta - m} / ((2t)^{m delta} Gamma_m(delta))
    const double delta = 2.5, t = 0.8;
    auto model = LaguerreModel::from_spectrum(delta, {0.0, 0.0});
    Eigen::MatrixXcd y(2, 2);
    y << 1.5, cdouble(0.2, 0.4), cdouble(0.2, -0.4), 0.7;
    HermitianMatrix yh(y);
    const double expect = std::exp(-yh.trace() / (2 * t)) * std::pow(yh.determinant(), delta - 2) /
                          (std::pow(2 * t, 2 * delta) * gamma_multivariate(delta, 2));
    CHECK(transition_density(model, t, HermitianMatrix::zero(2), yh) == doctest::Approx(expect).epsilon(1e-13));
    // flat measure over the chamber carries weyl_constant V^2
    auto f = [&](double a, double b) {
        return weyl_constant(2) * (a - b) * (a - b) *
               transition_density(model, t, HermitianMatrix::zero(2), HermitianMatrix::diagonal({a, b}));
    };
    CHECK(chamber_integral(f, 60.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(weyl_constant(1) == 1.0);
    CHECK(weyl_constant(2) == doctest::Approx(pi));
}

TEST_CASE("eigenvalue semigroup equals the unitary average of the transition density") {
    // q_t(x, l) = weyl V(l)^2 (2t)^{-m delta} / Gamma_m(delta) e^{-tr(x + l)/2t} det(l)^{nu} 0F1(delta; x/4t^2, l)
    const double delta = 2.5, t = 1.0;
    const SpectrumVector x{2.0, 1.0};
    for (auto l : {SpectrumVector{3.0, 0.5}, SpectrumVector{1.2, 1.1}, SpectrumVector{6.0, 2.0}}) {
        const double pref = weyl_constant(2) * std::pow(l[0] - l[1], 2) / (std::pow(2 * t, 2 * delta) * gamma_multivariate(delta, 2)) *
                            std::exp(-(3.0 + l[0] + l[1]) / (2 * t)) * std::pow(l[0] * l[1], delta - 2);
        const double avg = two_matrix_determinantal({}, {delta - 2}, x.scaled(1 / (4 * t * t)), l).value;
        CHECK(eigen_semigroup(2, delta, t, x, l) == doctest::Approx(pref * avg).epsilon(1e-10));
    }
}

TEST_CASE("eigenvalue semigroup normalizes and is nonnegative") {
    const double delta = 2.5, t = 1.0;
    const SpectrumVector x{2.0, 1.0};
    auto q = [&](double a, double b) { return eigen_semigroup(2, delta, t, x, {a, b}); };
    CHECK(chamber_integral(q, 80.0) == doctest::Approx(1.0).epsilon(1e-8));
    for (double a = 0.05; a < 20; a *= 1.7)
        for (double b = 0.01; b < a; b *= 2.3) CHECK(q(a, b) >= 0.0);
    // boundary start x_2 = 0 and a coincident start (jittered)
    auto q0 = [&](double a, double b) { return eigen_semigroup(2, delta, t, {2.0, 0.0}, {a, b}); };
    CHECK(chamber_integral(q0, 80.0) == doctest::Approx(1.0).epsilon(1e-8));
    bool jittered = false;
    const double qc = eigen_semigroup(2, delta, t, {1.5, 1.5}, {2.0, 1.0}, &jittered);
    CHECK(jittered);
    CHECK(qc == doctest::Approx(eigen_semigroup(2, delta, t, {1.5 + 1e-4, 1.5 - 1e-4}, {2.0, 1.0})).epsilon(1e-6));
}

TEST_CASE("Laplace transform of the transition density") {
    // E exp(-c tr X_t) as a chamber integral of the eigenvalue density
    const double delta = 2.5, t = 1.0, c = 0.35;
    auto model = LaguerreModel::from_spectrum(delta, {2.0, 1.0});
    auto f = [&](double a, double b) { return std::exp(-c * (a + b)) * eigen_semigroup(2, delta, t, {2.0, 1.0}, {a, b}); };
    CHECK(chamber_integral(f, 80.0) ==
          doctest::Approx(laplace_transform(model, t, HermitianMatrix::diagonal({c, c}))).epsilon(1e-8));
}

TEST_CASE("Hartman-Watson Laplace transform") {
    CHECK(hw_laplace(0.0, {0.7, 0.2}) == 1.0);
    // m = 1: I_nu / I_0
    for (double z : {0.01, 0.5, 3.0, 20.0})
        for (double nu : {0.25, 0.5, 1.0, 2.3}) {
            const double x = 2 * std::sqrt(z);
            CHECK(std::abs(hw_laplace(nu, {z}) - std::cyl_bessel_i(nu, x) / std::cyl_bessel_i(0.0, x)) < 1e-10);
        }
    // m = 2: determinant form against the Bessel ratio
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.01, 6.0);
    for (int i = 0; i < 30; ++i) {
        const double z1 = U(rng), z2 = U(rng), nu = U(rng) / 3;
        if (std::abs(z1 - z2) < 1e-3) continue;
        const double expect = hw_laplace_bessel(nu, 2 * std::sqrt(std::max(z1, z2)), 2 * std::sqrt(std::min(z1, z2)));
        CHECK(hw_laplace(nu, {z1, z2}) == doctest::Approx(expect).epsilon(1e-10));
    }
    // reference values for l = (2, 1)
    CHECK(hw_laplace_bessel(0.25, 2, 1) == doctest::Approx(0.7667099958840655).epsilon(1e-13));
    CHECK(hw_laplace_bessel(0.5, 2, 1) == doctest::Approx(0.5334337747783874).epsilon(1e-13));
    CHECK(hw_laplace_bessel(1.0, 2, 1) == doctest::Approx(0.20545051136312686).epsilon(1e-13));
    // equal-eigenvalue limit, l = 1.5
    CHECK(hw_laplace_equal(0.25, 1.5) == doctest::Approx(0.790960280097342934642).epsilon(1e-13));
    CHECK(hw_laplace_equal(0.5, 1.5) == doctest::Approx(0.567969189144310102485).epsilon(1e-13));
    CHECK(hw_laplace_equal(1.0, 1.5) == doctest::Approx(0.233033343776953295639).epsilon(1e-13));
    CHECK(hw_laplace(0.5, {0.5625, 0.5625}) == doctest::Approx(hw_laplace_equal(0.5, 1.5)).epsilon(1e-6));
    // strictly decreasing in nu
    double prev = 1.0;
    for (double nu = 0.1; nu < 4; nu += 0.1) {
        const double v = hw_laplace(nu, {1.3, 0.4});
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("equal-eigenvalue kernel") {
    // int_0^1 z sqrt(1 - z^2) e^{-az} dz, mpmath
    const std::pair<double, double> ref[] = {
        {0.1, 0.31434899587007811237},   {2.0, 0.11445255806542118322},
        {20.0, 0.0024810015247639828955}, {55.0, 0.00033025012022378539422},
        {80.0, 0.00015617670040295005366}, {1000.0, 9.9999699998499968499e-7},
        {1e6, 9.99999999997e-13}};
    for (auto [a, g] : ref) CHECK(hw_equal_kernel(a) == doctest::Approx(g).epsilon(1e-11));
    CHECK(hw_equal_kernel(0.0) == doctest::Approx(1.0 / 3));
}

TEST_CASE("Hartman-Watson density, distinct eigenvalues") {
    const HWQuery q{2.0, 1.0, 2.0};
    CHECK(q.p() == 1.0);
    const HWResult r = hw_density_m2(q);
    CHECK_FALSE(r.contour);
    CHECK(r.cells > 0);
    CHECK(r.value == doctest::Approx(0.2533606).epsilon(1e-6));
    CHECK(hw_density_m2({2.0, 1.0, 1.0}).value == doctest::Approx(0.0879932).epsilon(1e-5));
    // real line and deformed path agree where both are accurate
    QuadratureSpec real, deformed;
    real.contour_below = 0.0;
    deformed.contour_below = 10.0;
    for (double v : {1.2, 1.8, 3.0}) {
        const HWResult a = hw_density_m2({2.0, 1.0, v}, real), b = hw_density_m2({2.0, 1.0, v}, deformed);
        CHECK_FALSE(a.contour);
        CHECK(b.contour);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
    }
    // essential singularity at zero
    CHECK(std::abs(hw_density_m2({2.0, 1.0, 0.05}).value) < 1e-30);
    CHECK(hw_density_m2({2.0, 1.0, 0.5}).value == doctest::Approx(1.5934e-6).epsilon(1e-3));
    CHECK_THROWS_AS(hw_density_m2({1.0, 2.0, 1.0}), DomainError);
    QuadratureSpec capped;
    capped.max_subdivisions = 3;
    CHECK_THROWS_AS(hw_density_m2({2.0, 1.0, 1.0}, capped), QuadratureError);
}

TEST_CASE("Hartman-Watson density integrates to its Laplace transform") {
    const std::vector<double> nus{0.25, 0.5, 1.0};
    const HWIntegrals d = hw_integrals(2.0, 1.0, nus);
    CHECK(d.normalization == doctest::Approx(1.0).epsilon(1e-8));
    for (size_t i = 0; i < nus.size(); ++i)
        CHECK(std::abs(d.laplace[i] - hw_laplace_bessel(nus[i], 2.0, 1.0)) < 1e-8);
    const HWIntegrals e = hw_integrals(1.5, 1.5, nus);
    CHECK(e.normalization == doctest::Approx(1.0).epsilon(1e-8));
    for (size_t i = 0; i < nus.size(); ++i) CHECK(std::abs(e.laplace[i] - hw_laplace_equal(nus[i], 1.5)) < 1e-8);
}

TEST_CASE("equal-eigenvalue density is the confluent limit") {
    for (double v : {1.0, 2.0, 5.0})
        CHECK(rel(hw_density_m2({1.5, 1.5 * (1 - 1e-3), v}).value, hw_density_equal(1.5, v).value) < 1e-2);
    // p -> 0 of the distinct formula at the geometric mean
    const double l1 = 1.5 * (1 + 1e-6), l2 = 1.5 / (1 + 1e-6);
    CHECK(rel(hw_density_m2({l1, l2, 2.0}).value, hw_density_equal(1.5, 2.0).value) < 1e-8);
}

TEST_CASE("T0 tail") {
    const SpectrumVector x{2.0, 1.0};
    // mpmath, nu = 1/2
    const std::pair<double, double> ref[] = {{0.25, 0.906159744251469782338},
                                             {0.5, 0.697244146699102135227},
                                             {1.0, 0.450874660112924681896},
                                             {2.0, 0.259187094915440429009},
                                             {1e3, 0.000600030849182496341623}};
    for (auto [t, v] : ref) CHECK(t0_tail(2, 0.5, x, t) == doctest::Approx(v).epsilon(1e-11));
    CHECK(t0_tail(2, 0.5, x, 1e-3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t0_tail(2, 0.5, {2.0, 2.0}, 1.0) == doctest::Approx(0.579613213525454231).epsilon(1e-8));
    double prev = 1.0;
    for (double t = 0.1; t < 100; t *= 1.3) {
        const double v = t0_tail(2, 0.5, x, t);
        CHECK(v < prev);
        prev = v;
    }
    // m = 1: regularized lower incomplete gamma
    for (double nu : {0.2, 0.5, 0.9})
        for (double t : {0.05, 0.3, 1.0, 4.0, 50.0})
            CHECK(std::abs(t0_tail(1, nu, {1.7}, t) - boost::math::gamma_p(nu, 1.7 / (2 * t))) < 1e-10);
    CHECK_THROWS_AS(t0_tail(2, 1.2, x, 1.0), DomainError);
    CHECK_THROWS_AS(t0_tail(2, 0.5, {1.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("S0 density") {
    const double nu = 0.5;
    CHECK(s0_density(nu, 2, 1, 0.3) == doctest::Approx(0.836336748984285944795).epsilon(1e-12));
    CHECK(s0_density(nu, 2, 1, 1.0) == doctest::Approx(0.358780305049895685066).epsilon(1e-12));
    CHECK(s0_density(nu, 2, 1, 2.0) == doctest::Approx(0.108582279889468029605).epsilon(1e-12));
    CHECK(s0_density(nu, 2, 2, 0.7) == doctest::Approx(0.525703909372789372555).epsilon(1e-12));
    // both branches across lambda1 u = 30
    CHECK(s0_density(nu, 2, 1, 15.0 - 1e-9) == doctest::Approx(s0_density(nu, 2, 1, 15.0 + 1e-9)).epsilon(1e-9));

    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    for (auto [l1, l2] : {std::pair{2.0, 1.0}, std::pair{2.0, 2.0}, std::pair{5.0, 0.3}}) {
        auto f = [&](double u) { return s0_density(nu, l1, l2, u); };
        CHECK(ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity()) ==
              doctest::Approx(1.0).epsilon(1e-9));
        for (double t : {0.5, 1.0, 2.0})
            CHECK(std::abs(ts.integrate(f, 0.0, 1 / (2 * t)) - t0_tail(2, nu, {l1, l2}, t)) < 1e-9);
    }
    for (double u = 1e-3; u <= 1e3; u *= 1.5) CHECK(s0_density(nu, 2, 1, u) >= 0.0);
    // leading power u^{2 nu - 1} in both cases
    for (double nu2 : {0.3, 0.5, 0.8})
        for (auto [l1, l2] : {std::pair{2.0, 1.0}, std::pair{1.5, 1.5}}) {
            const double slope = std::log(s0_density(nu2, l1, l2, 1e-3) / s0_density(nu2, l1, l2, 1e-4)) / std::log(10.0);
            CHECK(std::abs(slope - (2 * nu2 - 1)) < 1e-2);
        }
}

TEST_CASE("determinant moments") {
    auto model = LaguerreModel::from_spectrum(2.5, {1.0, 1.0});
    CHECK(det_moment(model, 1.0, 0.0) == 1.0);
    // delta = 2.5, x = I, t = 1: E det X_1 = E X11 X22 - E|X12|^2 = 36 - 14
    CHECK(det_moment(model, 1.0, 1.0) == doctest::Approx(22.0).epsilon(1e-12));
    auto central = LaguerreModel::from_spectrum(2.5, {0.0, 0.0});
    CHECK(det_moment(central, 0.7, 1.3) ==
          doctest::Approx(std::pow(1.4, 2.6) * gamma_multivariate_ratio(3.8, 2.5, 2)).epsilon(1e-12));
    // m = 1: E X_t = x + 2 delta t
    CHECK(det_moment(LaguerreModel::from_spectrum(1.3, {0.8}), 2.0, 1.0) == doctest::Approx(0.8 + 5.2).epsilon(1e-12));
    CHECK_THROWS_AS(det_moment(model, 1.0, -1.6), PoleError);
}

TEST_CASE("Girsanov weight") {
    auto model = LaguerreModel::from_spectrum(2.0, {2.0, 1.0});
    const MatrixPath p = simulate_matrix_gram(model, 0.01, 1.0, 3);
    CHECK(girsanov_weight(p, 0.0) == 1.0);
    CHECK(girsanov_weight(p, 0.5) > 0.0);
    EigenPath e;
    e.times = {0.0, 0.5, 1.0};
    e.lambdas = {{2.0, 1.0}, {2.0, 1.0}, {4.0, 1.0}};
    TraceInverseIntegral acc;
    for (size_t k = 0; k < 3; ++k) acc.push(e.times[k], SpectrumVector(e.lambdas[k]));
    CHECK(acc.integral() == doctest::Approx(0.5 * 1.5 + 0.25 * (1.5 + 1.25)));
    CHECK(girsanov_weight(e, 0.6) == doctest::Approx(std::pow(2.0, 0.3) * std::exp(-0.18 * acc.integral())));
    e.lambdas[1] = {2.0, 0.0};
    CHECK_THROWS_AS(girsanov_weight(e, 0.5), SingularStateError);
}
