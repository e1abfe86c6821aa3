// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when a gating criterion fails; criterion 11 is reported but never gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "laguerre/errors.hpp"
#include "laguerre/laws.hpp"
#include "laguerre/mc.hpp"
#include "laguerre/specfun.hpp"
#include "laguerre/symfun.hpp"

using namespace laguerre;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

HermitianMatrix diag(std::vector<double> d) { return HermitianMatrix::diagonal(d); }

SpectrumVector random_spectrum(std::mt19937_64& g, int m, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(m);
    for (double& x : v) x = u(g);
    return SpectrumVector(v);
}

std::string z_list(const std::vector<McReport>& rs) {
    std::string s;
    for (const auto& r : rs) s += (s.empty() ? "" : " ") + sci(r.z);
    return "z = [" + s + "]";
}

Outcome series_vs_determinant() {
    std::mt19937_64 g(1001);
    double worst = 0.0;
    for (int m : {2, 3})
        for (int rep = 0; rep < 50; ++rep) {
            const SpectrumVector x = random_spectrum(g, m, 0.0, 0.8);
            const double b = m + 0.5 + 0.01 * rep;
            const SeriesOptions opt{1e-14, 60, true};
            worst = std::max(worst, rel(gross_richards({}, {b}, x).value, hyp_matrix_series({}, {b}, x, opt).value));
            worst = std::max(worst, rel(gross_richards({0.7}, {b}, x).value, hyp_matrix_series({0.7}, {b}, x, opt).value));
        }
    return {worst < 1e-8, "max relative deviation " + sci(worst)};
}

Outcome zonal_completeness() {
    std::mt19937_64 g(1002);
    std::normal_distribution<double> n01;
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m)
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::MatrixXcd a(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) a(i, j) = cdouble(n01(g), n01(g));
            const HermitianMatrix x(a * a.adjoint());
            const SpectrumVector s = x.spectrum();
            for (int k = 0; k <= 6; ++k) {
                double sum = 0.0;
                for (const auto& tau : enumerate_partitions(k, m)) sum += zonal(tau, s);
                worst = std::max(worst, rel(sum, std::pow(x.trace(), k)));
            }
        }
    return {worst < 1e-10, "max relative error " + sci(worst)};
}

Outcome laplace_mc() {
    const LaguerreModel model(2, 2.5, diag({1, 2}));
    const McReport r = check_laplace(model, 1.0, diag({0.3, 0.1}), 100000, 3, {1e-3, 1});
    return {r.pass, "estimate " + sci(r.estimate) + " reference " + sci(r.reference) + " z = " + sci(r.z)};
}

Outcome chamber_normalization() {
    boost::math::quadrature::tanh_sinh<double> ts;
    const SpectrumVector x{2.0, 1.0};
    auto q = [&](double y1, double y2) { return eigen_semigroup(2, 2.5, 1.0, x, SpectrumVector{y1, y2}); };
    const double total = ts.integrate(
        [&](double y1) {
            if (y1 <= 0.0) return 0.0;
            return ts.integrate([&](double y2) { return y2 > 0.0 && y2 < y1 ? q(y1, y2) : 0.0; }, 0.0, y1, 1e-11);
        },
        0.0, 80.0, 1e-11);
    return {std::abs(total - 1.0) <= 1e-4, "integral " + sci(total) + ", |error| " + sci(std::abs(total - 1.0))};
}

Outcome hartman_watson() {
    const std::vector<double> nus{0.25, 0.5, 1.0};
    double worst = 0.0;
    const HWIntegrals d = hw_integrals(2.0, 1.0, nus);
    worst = std::max(worst, std::abs(d.normalization - 1.0));
    for (size_t i = 0; i < nus.size(); ++i)
        worst = std::max(worst, std::abs(d.laplace[i] - hw_laplace_bessel(nus[i], 2.0, 1.0)));
    const HWIntegrals e = hw_integrals(1.5, 1.5, nus);
    worst = std::max(worst, std::abs(e.normalization - 1.0));
    for (size_t i = 0; i < nus.size(); ++i)
        worst = std::max(worst, std::abs(e.laplace[i] - hw_laplace_equal(nus[i], 1.5)));
    return {worst <= 1e-3, "max |error| over normalization and Laplace values " + sci(worst)};
}

Outcome t0_mc() {
    const auto rs = check_t0(LaguerreModel::from_spectrum(1.5, {2, 1}), {0.25, 0.5, 1.0, 2.0}, 10000, 6, {1e-5, 1});
    bool ok = true;
    for (const auto& r : rs) ok = ok && r.pass;
    return {ok, z_list(rs) + " (binomial)"};
}

Outcome s0_duality() {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    const double nu = 0.5;
    auto f = [&](double u) { return s0_density(nu, 2.0, 1.0, u); };
    double worst = std::abs(ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity()) - 1.0);
    for (double t : {0.5, 1.0, 2.0})
        worst = std::max(worst, std::abs(ts.integrate(f, 0.0, 1.0 / (2.0 * t)) - t0_tail(2, nu, {2.0, 1.0}, t)));
    return {worst <= 1e-6, "max |error| " + sci(worst)};
}

Outcome girsanov_mc() {
    const McReport r = check_girsanov(LaguerreModel(2, 2.0, diag({2, 1})), 0.5, 1.0, diag({0.3, 0.1}), 100000, 8, {1e-3, 1});
    return {r.pass, "estimate " + sci(r.estimate) + " reference " + sci(r.reference) + " z = " + sci(r.z)};
}

Outcome non_collision() {
    const LaguerreModel model = LaguerreModel::from_spectrum(2.0, {2.0, 1.0});
    double min_gap = std::numeric_limits<double>::infinity();
    try {
        for (long p = 0; p < 1000; ++p)
            stream_eigen(model, 1e-4, 10000, 9, p, [&](int, const SmallVector& lam) {
                min_gap = std::min(min_gap, lam(0) - lam(1));
                return true;
            });
    } catch (const CollisionError& e) {
        return {false, e.what()};
    }
    return {min_gap > 0.0, "min gap " + sci(min_gap)};
}

Outcome m1_reductions() {
    double worst_t0 = 0.0, worst_hw = 0.0;
    for (double nu : {0.2, 0.5, 0.8})
        for (double x : {0.3, 1.0, 2.5})
            for (double t : {0.1, 0.5, 1.0, 4.0})
                worst_t0 = std::max(worst_t0, std::abs(t0_tail(1, nu, {x}, t) - boost::math::gamma_p(nu, x / (2.0 * t))));
    for (double nu : {0.0, 0.25, 0.5, 1.0, 2.5})
        for (double z : {0.01, 0.5, 2.0, 10.0, 50.0}) {
            const double l = 2.0 * std::sqrt(z);
            const double ref = boost::math::cyl_bessel_i(nu, l) / boost::math::cyl_bessel_i(0.0, l);
            worst_hw = std::max(worst_hw, std::abs(hw_laplace(nu, {z}) - ref));
        }
    return {worst_t0 < 1e-10 && worst_hw < 1e-10,
            "t0 vs incomplete gamma " + sci(worst_t0) + ", Laplace vs Bessel ratio " + sci(worst_hw)};
}

Outcome log_asymptotic() {
    const auto rs = check_log_asymptotic(LaguerreModel(2, 2.0, diag({1, 1})), {1e4}, {0.5, 1.0}, 10000, 11, {1e-3, 1});
    bool ok = true;
    std::string s;
    for (const auto& r : rs) {
        ok = ok && r.pass;
        s += (s.empty() ? "" : "; ") + std::string("estimate ") + sci(r.estimate) + " reference " + sci(r.reference);
    }
    return {ok, s + "; " + z_list(rs) + " (|z| <= 4)"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
        bool gating;
    };
    const std::vector<Criterion> all = {
        {1, "determinant vs zonal series for 0F1 and 1F1", series_vs_determinant, true},
        {2, "zonal completeness (tr X)^k", zonal_completeness, true},
        {3, "Laplace transform MC, 1e5 paths", laplace_mc, true},
        {4, "eigenvalue density normalization", chamber_normalization, true},
        {5, "Hartman-Watson normalization and Laplace oracle", hartman_watson, true},
        {6, "T0 survival MC, 1e4 paths, dt = 1e-5", t0_mc, true},
        {7, "S0/T0 duality and S0 normalization", s0_duality, true},
        {8, "change of measure MC, 1e5 paths", girsanov_mc, true},
        {9, "non-collision, 1e3 eigenvalue paths", non_collision, true},
        {10, "m = 1 reductions", m1_reductions, true},
        {11, "log-time asymptotic law (stretch, non-gating)", log_asymptotic, false},
    };
    bool ok = true;
    for (const auto& c : all) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d: %s  %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (c.gating && !o.pass) ok = false;
    }
    return ok ? 0 : 1;
}
