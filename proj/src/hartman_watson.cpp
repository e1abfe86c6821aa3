// Density of the generalized Hartman-Watson law for m = 2.
//
// f(v) = s v / (pi sqrt(2 pi v^3)) N(v) / D with s = sqrt(l1 l2), p = l1 - l2,
//   N(v) = int_0^inf h(y) e^{-2(y^2 - pi^2)/v} sinh(y) sin(4 pi y / v) dy,
//   h(y) = int_0^1 z sinh(p sqrt(1 - z^2))/p e^{-2 s z cosh y} dz,
//   D    = int_0^1 int_0^{pi/2} u cosh(p u cos t) I_0(2 s u sin t) dt du.
// For v >= 1 N is summed over half-period cells on the real line. For v < 1 the
// factor e^{2 pi^2 / v} destroys the real-line sum, and N is taken as the
// imaginary part of the same integral of h(y) sinh(y) e^{-2(y - i pi)^2 / v}
// along S + i pi -> S + i pi/2 -> inf + i pi/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "laguerre/errors.hpp"
#include "laguerre/laws.hpp"
#include "laguerre/quadrature.hpp"
#include "laguerre/specfun.hpp"

namespace laguerre {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

double sinhc(double p, double x) { return p == 0.0 ? x : std::sinh(p * x) / p; }

struct Kernel {
    double s = 0.0, p = 0.0;
    bool equal = false;

    // e^{-shift} int_0^1 z sinhc(p, sqrt(1 - z^2)) e^{-az} dz with z = cos(psi).
    template <class T>
    T z_integral(T a, double shift) const {
        // graded panels resolve decay toward z = 0; oscillation and growth set the subdivision
        const double re = std::real(a), mag = std::abs(std::imag(a)) + std::max(0.0, -re);
        if (std::imag(a) == 0.0 && re > 1e4) {
            // even expansion of sinhc(p, sqrt(1 - z^2)) about z = 0
            const double c0 = sinhc(p, 1.0), c2 = -0.5 * std::cosh(p);
            return T(c0 / (re * re) + 6.0 * c2 / (re * re * re * re)) * std::exp(-shift);
        }
        std::vector<double> br{0.0, pi / 2};
        if (re > 2.0)
            for (double d = 1.0 / re; d < pi / 2; d *= 2.0) br.push_back(pi / 2 - d);
        std::sort(br.begin(), br.end());
        const GaussRule& g = gauss_rule(16);
        auto f = [&](double psi) {
            const double z = std::cos(psi), r = std::sin(psi);
            return T(z * r * sinhc(p, r)) * std::exp(-a * z - shift);
        };
        T total{};
        for (size_t k = 0; k + 1 < br.size(); ++k) {
            const double lo = br[k], hi = br[k + 1];
            const int n = std::max(1, static_cast<int>(std::ceil(mag * (hi - lo) / 4.0)));
            for (int j = 0; j < n; ++j) total += gauss_panel(g, lo + (hi - lo) * j / n, lo + (hi - lo) * (j + 1) / n, f);
        }
        return total;
    }

    double h_real(double y) const {
        const double a = 2.0 * s * std::cosh(y);
        return equal ? hw_equal_kernel(a) : z_integral<double>(a, 0.0);
    }

    double denominator() const {
        if (equal) return pi / 4 * hyp_scalar({{0.5}, {1.0, 2.0}}, s * s, 1e-15);
        const GaussRule& g = gauss_rule(20);
        const int n = 1 + static_cast<int>(std::ceil((2.0 * s + p) / 4.0));
        CompensatedSum<> acc;
        for (int iu = 0; iu < n; ++iu)
            for (int it = 0; it < n; ++it) {
                const double u0 = double(iu) / n, u1 = double(iu + 1) / n;
                const double t0 = pi / 2 * it / n, t1 = pi / 2 * (it + 1) / n;
                acc.add(gauss_panel(g, u0, u1, [&](double u) {
                    return gauss_panel(g, t0, t1, [&](double t) {
                        return u * std::cosh(p * u * std::cos(t)) * bessel_i(0.0, 2.0 * s * u * std::sin(t));
                    });
                }));
            }
        return acc.value();
    }
};

void check_cells(long cells, const QuadratureSpec& spec) {
    if (cells > spec.max_subdivisions)
        throw QuadratureError("Hartman-Watson y-integral needs " + std::to_string(cells) +
                              " cells, above the cap of " + std::to_string(spec.max_subdivisions));
}

HWResult real_line(const Kernel& k, double v, double pref, const QuadratureSpec& spec) {
    // tail bound: |h| <= sinhc(p, 1) / a^2 and sinh(y) / cosh(y)^2 <= 2 e^{-y}; f decays like v^{-3/2}
    const double target = spec.envelope_factor * spec.abs_tol * std::min(1.0, std::pow(v, -1.5));
    auto tail = [&](double y) {
        return pref * sinhc(k.p, 1.0) / (2.0 * k.s * k.s) * std::min(1.0, 4.0 * pi * (y + 1.0) / v) *
               std::exp(-y - 2.0 * (y * y - pi * pi) / v);
    };
    double y_max = 1.0;
    while (tail(y_max) > target && y_max < 80.0) y_max += 0.25;

    double width = std::min(0.5, spec.oscillation_aware ? v / 4.0 : 0.5);
    const long cells = static_cast<long>(std::ceil(y_max / width));
    check_cells(cells, spec);
    const GaussRule& g = gauss_rule(16);
    auto f = [&](double y) {
        const double e = -2.0 * (y * y - pi * pi) / v;
        const double env = 0.5 * (std::exp(y + e) - std::exp(-y + e));
        return k.h_real(y) * env * std::sin(4.0 * pi * y / v);
    };
    CompensatedSum<> acc;
    for (long c = 0; c < cells; ++c) acc.add(gauss_panel(g, c * width, std::min((c + 1) * width, y_max), f));
    return {pref * acc.value(), static_cast<int>(cells), y_max, false};
}

HWResult contour(const Kernel& k, double v, double pref, const QuadratureSpec& spec) {
    const double w = 1.0 / v;
    // S minimizes the bound -2 w S^2 + w pi^2/2 + 2 s cosh S of the integrand on the vertical leg
    double S = 0.0, best = 1e300;
    for (double x = 0.0; x <= 20.0; x += 0.01) {
        const double e = -2.0 * w * x * x + 2.0 * k.s * std::cosh(x);
        if (e < best) best = e, S = x;
    }
    auto F = [&](cplx y) {
        const cplx a = 2.0 * k.s * std::cosh(y);
        const double shift = std::max(0.0, -a.real());
        const cplx d = y - cplx(0.0, pi);
        return k.z_integral<cplx>(a, shift) * std::sinh(y) * std::exp(-2.0 * w * d * d + shift);
    };
    const GaussRule& g = gauss_rule(16);
    CompensatedSum<cplx> acc;
    long cells = 0;

    // vertical leg y = S + i phi, phi from pi down to pi/2
    const int nv = std::max(2, static_cast<int>(std::ceil(pi / 2 * (4.0 * w * S + 2.0 * k.s * std::cosh(S) + 4.0) / 4.0)));
    check_cells(nv, spec);
    for (int j = 0; j < nv; ++j) {
        const double a = pi - pi / 2 * j / nv, b = pi - pi / 2 * (j + 1) / nv;
        acc.add(cplx(0.0, 1.0) * gauss_panel(g, a, b, [&](double phi) { return F(cplx(S, phi)); }));
    }
    cells += nv;

    // horizontal leg y = x + i pi/2; there |h| <= sinhc(p, 1) / 2
    const double target = spec.envelope_factor * spec.abs_tol;
    double L = S + 0.05;
    while (pref * sinhc(k.p, 1.0) * std::exp(L - 2.0 * w * (L * L - pi * pi / 4)) > target && L < S + 40.0) L += 0.05;
    for (double x = S; x < L;) {
        const double width = std::min(0.5, 4.0 / (2.0 * pi * w + 2.0 * k.s * std::cosh(x) + 1.0));
        const double b = std::min(L, x + width);
        acc.add(gauss_panel(g, x, b, [&](double t) { return F(cplx(t, pi / 2)); }));
        x = b;
        check_cells(++cells, spec);
    }
    return {pref * acc.value().imag(), static_cast<int>(cells), L, true};
}

HWResult density(const Kernel& k, double D, double v, const QuadratureSpec& spec) {
    if (!(v > 0.0)) throw DomainError("Hartman-Watson density needs v > 0");
    const double pref = k.s * v / (pi * std::sqrt(2.0 * pi * v * v * v)) / D;
    return v >= spec.contour_below ? real_line(k, v, pref, spec) : contour(k, v, pref, spec);
}

Kernel make_kernel(double l1, double l2) {
    Kernel k;
    k.s = std::sqrt(l1 * l2);
    k.p = l1 - l2;
    k.equal = k.p == 0.0;
    return k;
}

}  // namespace

double hw_equal_kernel(double a) {
    if (a == 0.0) return 1.0 / 3.0;
    if (a <= 50.0) return 1.0 / 3.0 + pi / 2 * struve_l_minus_i(2.0, a) / a;
    // asymptotic series of L_2 - I_2 with the leading term cancelled against 1/3
    double term = -2.0 / a, sum = term;
    for (int k = 1; k < 200; ++k) {
        const double next = term * -(k + 0.5) * (1.5 - k) * 4.0 / (a * a);
        if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-17 * std::abs(sum)) break;
        term = next;
        sum += term;
    }
    return -sum / (2.0 * a);
}

HWResult hw_density_m2(const HWQuery& q, const QuadratureSpec& spec) {
    if (!(q.lambda1 > q.lambda2 && q.lambda2 > 0.0))
        throw DomainError("hw_density_m2 needs lambda1 > lambda2 > 0");
    const Kernel k = make_kernel(q.lambda1, q.lambda2);
    return density(k, k.denominator(), q.v, spec);
}

HWResult hw_density_equal(double lambda, double v, const QuadratureSpec& spec) {
    if (!(lambda > 0.0)) throw DomainError("hw_density_equal needs lambda > 0");
    const Kernel k = make_kernel(lambda, lambda);
    return density(k, k.denominator(), v, spec);
}

HWIntegrals hw_integrals(double lambda1, double lambda2, const std::vector<double>& nus,
                         const QuadratureSpec& spec) {
    if (!(lambda1 >= lambda2 && lambda2 > 0.0)) throw DomainError("hw_integrals needs lambda1 >= lambda2 > 0");
    const Kernel k = make_kernel(lambda1, lambda2);
    const double D = k.denominator();
    // v = q^{-2}, dv = 2 q^{-3} dq; f(v) ~ v^{-3/2} keeps the integrand bounded at q = 0
    const double q_max = 2.4, width = 0.05;
    const GaussRule& g = gauss_rule(12);
    HWIntegrals r;
    CompensatedSum<> norm;
    std::vector<CompensatedSum<>> lap(nus.size());
    const int panels = static_cast<int>(std::lround(q_max / width));
    for (int c = 0; c < panels; ++c) {
        const double lo = c * width, hi = lo + width;
        for (size_t i = 0; i < g.x.size(); ++i) {
            const double q = 0.5 * (lo + hi) + 0.5 * width * g.x[i], wq = 0.5 * width * g.w[i];
            const double v = 1.0 / (q * q);
            const double fj = density(k, D, v, spec).value * 2.0 / (q * q * q) * wq;
            norm.add(fj);
            for (size_t j = 0; j < nus.size(); ++j) lap[j].add(fj * std::exp(-nus[j] * nus[j] * v / 2.0));
            ++r.evaluations;
        }
    }
    r.normalization = norm.value();
    for (auto& l : lap) r.laplace.push_back(l.value());
    return r;
}

}  // namespace laguerre
