#pragma once

// Scalar special functions and determinantal evaluators of matrix-argument
// hypergeometric functions.

#include <functional>
#include <vector>

#include "laguerre/symfun.hpp"

namespace laguerre {

// pi^{m(m-1)/2} prod_{j=1}^m Gamma(a - j + 1)
double gamma_multivariate(double a, int m);
// Gamma_m(a) / Gamma_m(b), evaluated in log space; the pi factors cancel.
double gamma_multivariate_ratio(double a, double b, int m);

// Modified Bessel I_nu for z >= 0 and nu > -1 (negative integer orders by symmetry).
double bessel_i(double nu, double z);
// exp(-z) I_nu(z)
double bessel_i_scaled(double nu, double z);

// Modified Struve function L_nu.
double struve_l(double nu, double z);
// L_nu(z) - I_nu(z), accurate for large z where both grow like e^z.
double struve_l_minus_i(double nu, double z);

struct ScalarHypParams {
    std::vector<double> a;
    std::vector<double> b;
};

// Scalar pFq by its power series; 1F1 with negative argument goes through Kummer.
double hyp_scalar(const ScalarHypParams& params, double z, double tol = 1e-12);
// exp(-z) 1F1(a; b; z) for z >= 0, without overflow.
double hyp1f1_scaled(double a, double b, double z, double tol = 1e-12);

struct DetValue {
    double value = 0.0;
    bool jittered = false;  // a near-degenerate spectrum was perturbed
};

// det(f(j, x_i)) / V(X) with jitter on coincident eigenvalues. j is the
// 0-based column index.
DetValue vandermonde_ratio(const SpectrumVector& x, const std::function<double(int, double)>& f);

// det(x_i^{m-j} pFq(a - j + 1; b - j + 1; x_i)) / V(X)
// Entries are summed to machine precision since the determinant cancels.
DetValue gross_richards(const std::vector<double>& a, const std::vector<double>& b, const SpectrumVector& x,
                        double tol = 1e-16);

// pFq(m + mu; m + phi; B, C) through a single determinant of scalar pFq(mu + 1; phi + 1; b_l c_f).
DetValue two_matrix_determinantal(const std::vector<double>& mu, const std::vector<double>& phi,
                                  const SpectrumVector& b, const SpectrumVector& c, double tol = 1e-16);

// 0F0(B, C) = prod_{k<m} k! det(e^{b_i c_j}) / (V(B) V(C))
DetValue harish_chandra_0f0(const SpectrumVector& b, const SpectrumVector& c);

// Spectrum with coincident clusters spread out symmetrically around their mean.
// Returns the input unchanged when no two values are within 1e-7 relative.
SpectrumVector jitter_spectrum(const SpectrumVector& x, bool* changed = nullptr);

}  // namespace laguerre
