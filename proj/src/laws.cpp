#include "laguerre/laws.hpp"

#include <cmath>
#include <numbers>

#include "laguerre/errors.hpp"
#include "laguerre/specfun.hpp"

namespace laguerre {

namespace {

void require_size(const HermitianMatrix& a, int m, const char* what) {
    if (a.size() != m) throw DomainError(std::string(what) + " has the wrong size");
}

double vandermonde_product(const SpectrumVector& x) {
    double v = 1.0;
    for (int i = 0; i < x.size(); ++i)
        for (int j = i + 1; j < x.size(); ++j) v *= x[i] - x[j];
    return v;
}

// Spectrum of x^{1/2} y x^{1/2}, the eigenvalues of xy.
SpectrumVector product_spectrum(const HermitianMatrix& x, const HermitianMatrix& y) {
    const Eigen::MatrixXcd r = x.sqrt_positive().matrix();
    return HermitianMatrix(r * y.matrix() * r, 1e-9).spectrum();
}

// BESQ(2(nu + 1)) transition density from x to y over time t.
double besq_density(double nu, double t, double x, double y) {
    if (x == 0.0)
        return std::exp(-y / (2 * t) + nu * std::log(y / (2 * t)) - std::lgamma(nu + 1)) / (2 * t);
    const double sx = std::sqrt(x), sy = std::sqrt(y);
    return std::pow(y / x, nu / 2) * std::exp(-(sx - sy) * (sx - sy) / (2 * t)) *
           bessel_i_scaled(nu, sx * sy / t) / (2 * t);
}

}  // namespace

double laplace_transform(const LaguerreModel& model, double t, const HermitianMatrix& u) {
    const int m = model.m;
    require_size(u, m, "u");
    if (t < 0) throw DomainError("laplace_transform needs t >= 0");
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m) + 2 * t * u.matrix();
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success) throw DomainError("I + 2tu is not positive definite");
    double log_det = 0.0;
    for (int i = 0; i < m; ++i) log_det += 2 * std::log(llt.matrixL()(i, i).real());
    const double tr = (model.x0.matrix() * llt.solve(u.matrix())).trace().real();
    return std::exp(-model.delta * log_det - tr);
}

double transition_density(const LaguerreModel& model, double t, const HermitianMatrix& x,
                          const HermitianMatrix& y) {
    const int m = model.m;
    const double delta = model.delta;
    if (delta <= m - 1) throw DomainError("transition density needs delta > m - 1");
    if (!(t > 0)) throw DomainError("transition density needs t > 0");
    require_size(x, m, "x");
    require_size(y, m, "y");
    const SpectrumVector ys = y.spectrum();
    if (ys[m - 1] <= 0.0) return 0.0;
    double log_det_y = 0.0;
    for (double v : ys.values) log_det_y += std::log(v);
    const double log_pref = -m * delta * std::log(2 * t) - std::log(gamma_multivariate(delta, m)) -
                            (x.trace() + y.trace()) / (2 * t) + (delta - m) * log_det_y;
    const SpectrumVector z = product_spectrum(x, y).scaled(1.0 / (4 * t * t));
    // 0F1(delta; z) <= exp(2 sum sqrt(z_i)): beyond this the density underflows
    double growth = 0.0;
    for (double v : z.values) growth += 2 * std::sqrt(std::max(v, 0.0));
    if (log_pref + growth < -800.0) return 0.0;
    DetValue f = gross_richards({}, {delta}, z);
    if (f.jittered && z.max_abs() < 20.0) f.value = hyp_matrix_series({}, {delta}, z).value;
    return std::exp(log_pref) * f.value;
}

double eigen_semigroup(int m, double delta, double t, const SpectrumVector& x, const SpectrumVector& y,
                       bool* jittered) {
    const double nu = delta - m;
    if (nu <= -1) throw DomainError("eigenvalue semigroup needs delta > m - 1");
    if (x.size() != m || y.size() != m) throw DomainError("spectra must have size m");
    if (!(t > 0)) throw DomainError("eigenvalue semigroup needs t > 0");
    if (y[m - 1] <= 0.0 || y.min_gap() <= 0.0) return 0.0;
    const DetValue d = vandermonde_ratio(x, [&](int j, double xi) { return besq_density(nu, t, xi, y[j]); });
    if (jittered) *jittered = d.jittered;
    return vandermonde_product(y) * d.value;
}

double weyl_constant(int m) {
    double c = std::pow(std::numbers::pi, m * (m - 1) / 2.0);
    for (int k = 1; k < m; ++k) c /= std::tgamma(k + 1.0);
    return c;
}

double hw_laplace(double nu, const SpectrumVector& z) {
    const int m = z.size();
    if (nu < 0) throw DomainError("hw_laplace needs nu >= 0");
    if (nu == 0.0) return 1.0;
    double log_det = 0.0;
    for (double v : z.values) {
        if (v < 0) throw DomainError("hw_laplace needs a nonnegative spectrum");
        log_det += std::log(v);
    }
    return gamma_multivariate_ratio(m, m + nu, m) * std::exp(nu / 2 * log_det) *
           gross_richards({}, {m + nu}, z).value / gross_richards({}, {double(m)}, z).value;
}

double hw_laplace_bessel(double nu, double l1, double l2) {
    auto I = [](double n, double x) { return bessel_i_scaled(n, x); };
    return (l1 * I(nu + 1, l1) * I(nu, l2) - l2 * I(nu + 1, l2) * I(nu, l1)) /
           (l1 * I(1, l1) * I(0, l2) - l2 * I(1, l2) * I(0, l1));
}

double hw_laplace_equal(double nu, double l) {
    auto I = [l](double n) { return bessel_i_scaled(n, l); };
    return (I(nu) * I(nu) - I(nu + 1) * I(nu - 1)) / (I(0) * I(0) - I(1) * I(1));
}

double t0_tail(int m, double nu, const SpectrumVector& x, double t) {
    if (!(nu > 0 && nu < 1)) throw DomainError("t0_tail needs 0 < nu < 1");
    if (!(t > 0)) throw DomainError("t0_tail needs t > 0");
    if (x.size() != m) throw DomainError("x must have size m");
    if (x[m - 1] <= 0) throw DomainError("t0_tail needs a positive definite start");
    double log_det = 0.0;
    for (double v : x.values) log_det += std::log(v / (2 * t));
    return gamma_multivariate_ratio(m, m + nu, m) * std::exp(nu * log_det) *
           gross_richards({nu}, {m + nu}, x.scaled(-1.0 / (2 * t))).value;
}

double s0_density(double nu, double lambda1, double lambda2, double u) {
    if (!(nu > 0 && nu < 1)) throw DomainError("s0_density needs 0 < nu < 1");
    if (!(lambda1 >= lambda2 && lambda2 > 0)) throw DomainError("s0_density needs lambda1 >= lambda2 > 0");
    if (u <= 0) return 0.0;
    const double lg = std::lgamma(nu) + std::lgamma(nu + 1);
    if (lambda1 - lambda2 < 1e-7 * lambda1) {
        const double l = 0.5 * (lambda1 + lambda2);
        return 2 * std::exp(2 * nu * std::log(l) + (2 * nu - 1) * std::log(u) - l * u - lg - std::log(nu + 1)) *
               hyp_scalar({{nu - 1}, {nu + 2}}, -l * u);
    }
    // e^{-(l1 + l2) u} (1F1(2; nu+1; l1 u) - 1F1(2; nu+1; l2 u)) / (l1 - l2)
    double diff;
    if (lambda1 * u <= 30.0) {
        double c = 1.0, dd = 0.0, pw2 = 1.0, sum = 0.0;
        for (int k = 1; k < 1000; ++k) {
            c *= (1.0 + k) / ((nu + k) * k) * u;
            dd = lambda1 * dd + pw2;  // (l1^k - l2^k) / (l1 - l2)
            pw2 *= lambda2;
            const double term = c * dd;
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        diff = std::exp(-(lambda1 + lambda2) * u) * sum;
    } else {
        diff = (std::exp(-lambda2 * u) * hyp1f1_scaled(2, nu + 1, lambda1 * u) -
                std::exp(-lambda1 * u) * hyp1f1_scaled(2, nu + 1, lambda2 * u)) /
               (lambda1 - lambda2);
    }
    return std::exp(nu * std::log(lambda1 * lambda2) + (2 * nu - 2) * std::log(u) - lg) * diff;
}

double det_moment(const LaguerreModel& model, double t, double s) {
    const int m = model.m;
    const double delta = model.delta;
    for (int j = 1; j <= m; ++j)
        if (s + delta - j + 1 <= 0 || delta - j + 1 <= 0)
            throw PoleError("det_moment outside the gamma domain s + delta > m - 1");
    if (!(t > 0)) throw DomainError("det_moment needs t > 0");
    if (s == 0.0) return 1.0;
    const SpectrumVector z = model.x0.spectrum().scaled(-1.0 / (2 * t));
    DetValue f = gross_richards({-s}, {delta}, z);
    if (f.jittered && z.max_abs() < 20.0) f.value = hyp_matrix_series({-s}, {delta}, z).value;
    return std::exp(m * s * std::log(2 * t)) * gamma_multivariate_ratio(s + delta, delta, m) * f.value;
}

void TraceInverseIntegral::push(double t, const SpectrumVector& spectrum) {
    double log_det = 0.0, tr = 0.0;
    for (double v : spectrum.values) {
        if (!(v >= 1e-12)) throw SingularStateError("state with eigenvalue below 1e-12 at t = " + std::to_string(t));
        log_det += std::log(v);
        tr += 1.0 / v;
    }
    push(t, log_det, tr);
}

void TraceInverseIntegral::push(double t, double log_det, double trace_inverse) {
    if (!started_) {
        started_ = true;
        log_det0_ = log_det;
    } else {
        integral_ += 0.5 * (t - t_prev_) * (f_prev_ + trace_inverse);
    }
    t_prev_ = t;
    f_prev_ = trace_inverse;
    log_det_ = log_det;
}

double TraceInverseIntegral::weight(double nu) const {
    return std::exp(nu / 2 * (log_det_ - log_det0_) - nu * nu / 2 * integral_);
}

double girsanov_weight(const MatrixPath& path, double nu) {
    TraceInverseIntegral acc;
    for (size_t k = 0; k < path.states.size(); ++k) acc.push(path.times[k], path.states[k].spectrum());
    return acc.weight(nu);
}

double girsanov_weight(const EigenPath& path, double nu) {
    TraceInverseIntegral acc;
    for (size_t k = 0; k < path.lambdas.size(); ++k) acc.push(path.times[k], SpectrumVector(path.lambdas[k]));
    return acc.weight(nu);
}

}  // namespace laguerre
