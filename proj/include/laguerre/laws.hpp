#pragma once

// Closed-form laws of the Laguerre process.

#include <vector>

#include "laguerre/process.hpp"
#include "laguerre/symfun.hpp"

namespace laguerre {

// E exp(-tr(u X_t)) = det(I + 2tu)^{-delta} exp(-tr(x0 (I + 2tu)^{-1} u))
double laplace_transform(const LaguerreModel& model, double t, const HermitianMatrix& u);

// Density of X_t with respect to the flat measure on Hermitian matrices.
// Needs delta > m - 1; x may be zero.
double transition_density(const LaguerreModel& model, double t, const HermitianMatrix& x,
                          const HermitianMatrix& y);

// Density of the ordered eigenvalues of X_t on the chamber y_1 > ... > y_m > 0,
// started from the spectrum x (delta = m + nu, nu > -1). Coincident x values
// are jittered; *jittered reports it.
double eigen_semigroup(int m, double delta, double t, const SpectrumVector& x, const SpectrumVector& y,
                       bool* jittered = nullptr);

// Lebesgue volume element of Hermitian matrices over the chamber:
// dY = weyl_constant(m) V(y)^2 dy dU, with dU the Haar probability measure.
double weyl_constant(int m);

// Hartman-Watson Laplace transform E[exp(-nu^2/2 int tr X^{-1}) | X_t = y] as
// Gamma_m(m)/Gamma_m(m+nu) det(z)^{nu/2} 0F1(m+nu; z) / 0F1(m; z), z = spec(xy)/4t^2.
double hw_laplace(double nu, const SpectrumVector& z);
// m = 2 in terms of l_i = 2 sqrt(z_i).
double hw_laplace_bessel(double nu, double l1, double l2);
// l1 = l2 = l.
double hw_laplace_equal(double nu, double l);

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    // Neglected y-tail bounded by envelope_factor * abs_tol.
    double envelope_factor = 1e-3;
    int max_subdivisions = 200000;
    // Cells no wider than a half-period of sin(4 pi y / v).
    bool oscillation_aware = true;
    // v below this uses the deformed path
    double contour_below = 1.0;
};

struct HWQuery {
    double lambda1 = 0.0, lambda2 = 0.0;  // eigenvalues of sqrt(xy), t = 1
    double v = 0.0;
    double p() const { return lambda1 - lambda2; }
};

struct HWResult {
    double value = 0.0;
    int cells = 0;        // Gauss panels used for the y-integral
    double y_max = 0.0;   // truncation point on the real line or the deformed path
    bool contour = false; // evaluated on the deformed path (small v)
};

// Density of int_0^1 tr(X_s^{-1}) ds given X_0 = x, X_1 = y for m = 2, delta = 2.
HWResult hw_density_m2(const HWQuery& q, const QuadratureSpec& spec = {});
HWResult hw_density_equal(double lambda, double v, const QuadratureSpec& spec = {});

// int_0^1 z sqrt(1 - z^2) e^{-az} dz, the equal-eigenvalue kernel.
double hw_equal_kernel(double a);

struct HWIntegrals {
    double normalization = 0.0;
    std::vector<double> laplace;  // int e^{-nu^2 v / 2} f(v) dv for each requested nu
    int evaluations = 0;
};

// Integrals over v in q = v^{-1/2}. lambda1 == lambda2 selects the equal case.
HWIntegrals hw_integrals(double lambda1, double lambda2, const std::vector<double>& nus,
                         const QuadratureSpec& spec = {});

// P(T_0 > t) for delta = m - nu, 0 < nu < 1.
double t0_tail(int m, double nu, const SpectrumVector& x, double t);

// Density of S_0 = 1 / (2 T_0) for m = 2, delta = 2 - nu; x = (lambda1, lambda2).
double s0_density(double nu, double lambda1, double lambda2, double u);

// E det(X_t)^s = (2t)^{ms} Gamma_m(s+delta)/Gamma_m(delta) 1F1(-s; delta; -x/2t)
double det_moment(const LaguerreModel& model, double t, double s);

// Accumulates the additive functional int tr(X_s^{-1}) ds by the trapezoid rule.
class TraceInverseIntegral {
public:
    // Throws SingularStateError when the smallest eigenvalue is below 1e-12.
    void push(double t, const SpectrumVector& spectrum);
    void push(double t, double log_det, double trace_inverse);
    double integral() const { return integral_; }
    // (det X_t / det x)^{nu/2} exp(-nu^2/2 int tr X^{-1})
    double weight(double nu) const;

private:
    bool started_ = false;
    double t_prev_ = 0.0, f_prev_ = 0.0, log_det0_ = 0.0, log_det_ = 0.0, integral_ = 0.0;
};

double girsanov_weight(const MatrixPath& path, double nu);
double girsanov_weight(const EigenPath& path, double nu);

}  // namespace laguerre
