#include "laguerre/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "laguerre/errors.hpp"
#include "laguerre/quadrature.hpp"

namespace laguerre {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr int kScalarTermCap = 500;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double lgamma_pos(double x) { return boost::math::lgamma(x); }

}  // namespace

double gamma_multivariate(double a, int m) {
    double r = std::pow(kPi, 0.5 * m * (m - 1));
    for (int j = 1; j <= m; ++j) {
        double x = a - j + 1;
        if (is_nonpositive_integer(x)) throw PoleError("gamma_multivariate: pole at a - j + 1 = " + std::to_string(x));
        r *= boost::math::tgamma(x);
    }
    return r;
}

double gamma_multivariate_ratio(double a, double b, int m) {
    double log_r = 0.0;
    int sign = 1;
    for (int j = 1; j <= m; ++j) {
        double xa = a - j + 1, xb = b - j + 1;
        if (is_nonpositive_integer(xa) || is_nonpositive_integer(xb))
            throw PoleError("gamma_multivariate_ratio: pole");
        int sa = 1, sb = 1;
        log_r += boost::math::lgamma(xa, &sa) - boost::math::lgamma(xb, &sb);
        sign *= sa * sb;
    }
    return sign * std::exp(log_r);
}

// ---------------------------------------------------------------- Bessel I

namespace {

// sum_k (z^2/4)^k / (k! (nu+1)_k)
double bessel_i_series_core(double nu, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < kScalarTermCap; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k
double bessel_i_asymptotic_scaled(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        double t = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * z);
        if (std::abs(t) > std::abs(prev)) break;
        term = t;
        prev = t;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * kPi * z);
}

bool use_bessel_asymptotic(double nu, double z) { return z > std::max(30.0, 2.0 * nu * nu); }

double normalize_order(double nu) {
    if (nu <= -1.0) {
        if (nu == std::floor(nu)) return -nu;
        throw DomainError("bessel_i: order must exceed -1 or be an integer");
    }
    return nu;
}

}  // namespace

double bessel_i(double nu, double z) {
    nu = normalize_order(nu);
    if (z < 0.0) throw DomainError("bessel_i: z must be nonnegative");
    if (z == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 || nu == std::floor(nu) ? 0.0 : std::numeric_limits<double>::infinity());
    if (use_bessel_asymptotic(nu, z)) return std::exp(z) * bessel_i_asymptotic_scaled(nu, z);
    return std::exp(nu * std::log(0.5 * z) - boost::math::lgamma(nu + 1.0)) * bessel_i_series_core(nu, z);
}

double bessel_i_scaled(double nu, double z) {
    nu = normalize_order(nu);
    if (z < 0.0) throw DomainError("bessel_i_scaled: z must be nonnegative");
    if (z == 0.0) return bessel_i(nu, 0.0);
    if (use_bessel_asymptotic(nu, z)) return bessel_i_asymptotic_scaled(nu, z);
    return std::exp(nu * std::log(0.5 * z) - boost::math::lgamma(nu + 1.0) - z) * bessel_i_series_core(nu, z);
}

// ---------------------------------------------------------------- Struve L

double struve_l(double nu, double z) {
    if (z < 0.0) throw DomainError("struve_l: z must be nonnegative");
    if (z == 0.0) return 0.0;
    const double h = 0.5 * z;
    double term = std::exp((nu + 1.0) * std::log(h) - lgamma_pos(1.5) - lgamma_pos(nu + 1.5));
    double sum = term;
    for (int k = 0; k < kScalarTermCap; ++k) {
        term *= h * h / ((k + 1.5) * (k + nu + 1.5));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double struve_l_minus_i(double nu, double z) {
    if (z < 0.0) throw DomainError("struve_l_minus_i: z must be nonnegative");
    if (nu <= -0.5) throw DomainError("struve_l_minus_i: order must exceed -1/2");
    if (z <= 8.0) return struve_l(nu, z) - bessel_i(nu, z);
    if (z > 60.0) {
        // M_nu(z) ~ (1/pi) sum_k (-1)^{k+1} Gamma(k+1/2) (z/2)^{nu-2k-1} / Gamma(nu+1/2-k)
        double sum = 0.0, prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 100; ++k) {
            double g = nu + 0.5 - k;
            if (is_nonpositive_integer(g)) continue;
            double t = ((k % 2) ? 1.0 : -1.0) * boost::math::tgamma(k + 0.5) *
                       std::pow(0.5 * z, nu - 2.0 * k - 1.0) / boost::math::tgamma(g);
            if (std::abs(t) > std::abs(prev)) break;
            prev = t;
            sum += t;
            if (std::abs(t) < 1e-17 * std::abs(sum)) break;
        }
        return sum / kPi;
    }
    // M_nu(z) = -(2 (z/2)^nu / (sqrt(pi) Gamma(nu+1/2))) int_0^{pi/2} cos^{2nu}(th) e^{-z sin th} dth
    auto f = [&](double th) { return std::pow(std::cos(th), 2.0 * nu) * std::exp(-z * std::sin(th)); };
    // panels graded on the decay scale 1/z; cos^{2 nu} is non-smooth at pi/2 unless 2 nu is an integer
    const bool smooth = 2.0 * nu == std::floor(2.0 * nu);
    const GaussRule& g = gauss_rule(20);
    double integral = 0.0, lo = 0.0;
    for (double d = 1.0 / z; lo < 0.5 * kPi; d *= 2.0) {
        const double hi = std::min(d, 0.5 * kPi);
        if (hi == 0.5 * kPi && !smooth)
            integral += boost::math::quadrature::tanh_sinh<double>().integrate(f, lo, hi, 1e-15);
        else
            integral += gauss_panel(g, lo, hi, f);
        lo = hi;
    }
    return -2.0 * std::exp(nu * std::log(0.5 * z) - lgamma_pos(nu + 0.5)) / std::sqrt(kPi) * integral;
}

// ---------------------------------------------------------------- scalar pFq

namespace {

double pfq_series(const std::vector<double>& a, const std::vector<double>& b, double z, double tol) {
    for (double bj : b)
        if (is_nonpositive_integer(bj)) throw PoleError("hyp_scalar: denominator parameter is a non-positive integer");
    double term = 1.0, sum = 1.0, comp = 0.0;
    int quiet = 0;
    for (int k = 0; k < kScalarTermCap; ++k) {
        double r = z / (k + 1.0);
        for (double ai : a) r *= ai + k;
        for (double bj : b) r /= bj + k;
        term *= r;
        double s = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
        sum = s;
        if (term == 0.0) return sum + comp;
        // once the ratio is below one the tail is bounded by a geometric series
        double ar = std::abs(r);
        if (ar < 1.0 && std::abs(term) * ar / (1.0 - ar) <= tol * std::abs(sum + comp)) {
            if (++quiet >= 2) return sum + comp;
        } else {
            quiet = 0;
        }
    }
    throw NonConvergedError("hyp_scalar: series not converged within term cap");
}

}  // namespace

double hyp1f1_scaled(double a, double b, double z, double tol) {
    if (z < 0.0) throw DomainError("hyp1f1_scaled: z must be nonnegative");
    if (is_nonpositive_integer(b)) throw PoleError("hyp1f1_scaled: b is a non-positive integer");
    if (z <= 60.0 || is_nonpositive_integer(a)) return std::exp(-z) * pfq_series({a}, {b}, z, tol);
    // e^{-z} 1F1(a;b;z) ~ Gamma(b)/Gamma(a) z^{a-b} sum_k (b-a)_k (1-a)_k / (k! z^k)
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        double t = term * (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z);
        if (std::abs(t) > std::abs(prev)) break;
        term = t;
        prev = t;
        sum += t;
        if (std::abs(t) <= 1e-17 * std::abs(sum)) break;
    }
    int sb = 1, sa = 1;
    double lg = boost::math::lgamma(b, &sb) - boost::math::lgamma(a, &sa) + (a - b) * std::log(z);
    return sa * sb * std::exp(lg) * sum;
}

double hyp_scalar(const ScalarHypParams& params, double z, double tol) {
    const size_t p = params.a.size(), q = params.b.size();
    if (p > q + 1) throw DivergenceError("hyp_scalar: p > q + 1");
    if (p == q + 1 && std::abs(z) >= 1.0) throw DivergenceError("hyp_scalar: |z| >= 1 for p = q + 1");
    if (z == 0.0) return 1.0;
    if (p == 1 && q == 1 && z < 0.0) {
        const double a = params.a[0], b = params.b[0];
        // Kummer: 1F1(a;b;z) = e^z 1F1(b-a;b;-z). Polynomial cases keep the direct series.
        if (!is_nonpositive_integer(a)) return hyp1f1_scaled(b - a, b, -z, tol);
    }
    if (p == 0 && q == 1 && z > 100.0 && params.b[0] > 0.0) {
        // 0F1(;b;z) = Gamma(b) z^{(1-b)/2} I_{b-1}(2 sqrt z)
        const double b = params.b[0], r = std::sqrt(z);
        return std::exp(std::lgamma(b) + (1.0 - b) * std::log(r) + 2.0 * r + std::log(bessel_i_scaled(b - 1.0, 2.0 * r)));
    }
    return pfq_series(params.a, params.b, z, tol);
}

// ---------------------------------------------------------------- determinants

SpectrumVector jitter_spectrum(const SpectrumVector& x, bool* changed) {
    if (changed) *changed = false;
    const double scale = x.max_abs();
    const int m = x.size();
    if (m < 2 || scale == 0.0) return x;
    std::vector<double> v = x.values;
    bool any = false;
    int i = 0;
    while (i < m) {
        int j = i + 1;
        while (j < m && v[j - 1] - v[j] < 1e-7 * scale) ++j;
        const int c = j - i;
        if (c >= 2) {
            any = true;
            double mean = 0.0;
            for (int k = i; k < j; ++k) mean += v[k];
            mean /= c;
            const double h = (c == 2 ? 1e-6 : 1e-3) * scale;
            for (int k = i; k < j; ++k) v[k] = mean + h * (0.5 * (c - 1) - (k - i));
        }
        i = j;
    }
    if (changed) *changed = any;
    return any ? SpectrumVector(std::move(v)) : x;
}

namespace {

double vandermonde(const SpectrumVector& x) {
    double v = 1.0;
    for (int i = 0; i < x.size(); ++i)
        for (int j = i + 1; j < x.size(); ++j) v *= x[i] - x[j];
    return v;
}

}  // namespace

DetValue vandermonde_ratio(const SpectrumVector& x0, const std::function<double(int, double)>& f) {
    DetValue r;
    const SpectrumVector x = jitter_spectrum(x0, &r.jittered);
    const int m = x.size();
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = f(j, x[i]);
    r.value = a.determinant() / vandermonde(x);
    return r;
}

DetValue gross_richards(const std::vector<double>& a, const std::vector<double>& b, const SpectrumVector& x,
                        double tol) {
    const int m = x.size();
    if (x.max_abs() == 0.0) return {1.0, false};
    return vandermonde_ratio(x, [&](int j, double xi) {
        ScalarHypParams p{a, b};
        for (double& v : p.a) v -= j;
        for (double& v : p.b) v -= j;
        return std::pow(xi, m - 1 - j) * hyp_scalar(p, xi, tol);
    });
}

namespace {

DetValue two_spectrum_det(const SpectrumVector& b0, const SpectrumVector& c0, double prefactor,
                          const std::function<double(double)>& f) {
    if (b0.size() != c0.size()) throw DomainError("spectra must have equal size");
    DetValue r;
    bool jb = false, jc = false;
    const SpectrumVector b = jitter_spectrum(b0, &jb), c = jitter_spectrum(c0, &jc);
    r.jittered = jb || jc;
    const int m = b.size();
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = f(b[i] * c[j]);
    r.value = prefactor * a.determinant() / (vandermonde(b) * vandermonde(c));
    return r;
}

// log prod_{j=1}^m Gamma(a - j + 1), no pi factor
double log_gamma_tilde(double a, int m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += lgamma_pos(a - j + 1);
    return s;
}

}  // namespace

DetValue two_matrix_determinantal(const std::vector<double>& mu, const std::vector<double>& phi,
                                  const SpectrumVector& b, const SpectrumVector& c, double tol) {
    const int m = b.size();
    for (double v : mu)
        if (v <= -1.0) throw DomainError("two_matrix_determinantal: mu must exceed -1");
    for (double v : phi)
        if (v <= -1.0) throw DomainError("two_matrix_determinantal: phi must exceed -1");
    if (b.max_abs() == 0.0 || c.max_abs() == 0.0) return {1.0, false};
    double lp = log_gamma_tilde(m, m);
    for (double f : phi) lp += log_gamma_tilde(m + f, m) - m * lgamma_pos(f + 1.0);
    for (double u : mu) lp += m * lgamma_pos(u + 1.0) - log_gamma_tilde(m + u, m);
    ScalarHypParams p;
    for (double u : mu) p.a.push_back(u + 1.0);
    for (double f : phi) p.b.push_back(f + 1.0);
    return two_spectrum_det(b, c, std::exp(lp), [&](double z) { return hyp_scalar(p, z, tol); });
}

DetValue harish_chandra_0f0(const SpectrumVector& b, const SpectrumVector& c) {
    double pref = 1.0;
    for (int k = 2; k < b.size(); ++k) pref *= k;
    if (b.max_abs() == 0.0 || c.max_abs() == 0.0) return {1.0, false};
    return two_spectrum_det(b, c, pref, [](double z) { return std::exp(z); });
}

}  // namespace laguerre
