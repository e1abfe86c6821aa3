#pragma once

// Partitions, Schur and zonal polynomials, generalized Pochhammer symbols and
// matrix-argument hypergeometric series. Matrix arguments enter only through
// their (real) spectra.

#include <initializer_list>
#include <string>
#include <vector>

namespace laguerre {

struct Partition {
    std::vector<int> parts;  // non-increasing, trailing zeros stripped

    Partition() = default;
    Partition(std::initializer_list<int> p);
    explicit Partition(std::vector<int> p);

    int weight() const;
    int length() const { return static_cast<int>(parts.size()); }
    // Part i (0-based); zero past the length.
    int operator[](int i) const { return i < length() ? parts[i] : 0; }
    Partition conjugate() const;
    std::string str() const;

    bool operator==(const Partition& o) const { return parts == o.parts; }
};

// Eigenvalues of a Hermitian argument, kept in non-increasing order.
struct SpectrumVector {
    std::vector<double> values;

    SpectrumVector() = default;
    SpectrumVector(std::initializer_list<double> v);
    explicit SpectrumVector(std::vector<double> v);

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
    double max_abs() const;
    // Smallest gap between neighbours; +inf for a single value.
    double min_gap() const;
    SpectrumVector scaled(double c) const;
};

// All partitions of k with at most m parts, lexicographically decreasing.
std::vector<Partition> enumerate_partitions(int k, int m);

// (a)_tau = prod_i (a - i + 1)_{tau_i}, i = 1..m, as rising factorials.
double gen_pochhammer(double a, const Partition& tau, int m);

// Bialternant formula, switching to Jacobi-Trudi on near-coincident values.
double schur(const Partition& tau, const SpectrumVector& x);
double schur_bialternant(const Partition& tau, const SpectrumVector& x);
// det(h_{tau_i - i + j})
double schur_jacobi_trudi(const Partition& tau, const SpectrumVector& x);
// det(e_{tau'_i - i + j}), the dual form
double schur_jacobi_trudi_dual(const Partition& tau, const SpectrumVector& x);

// Complete and elementary symmetric polynomials h_0..h_n, e_0..e_n.
std::vector<double> complete_symmetric(const SpectrumVector& x, int n);
std::vector<double> elementary_symmetric(const SpectrumVector& x, int n);

// d_tau = s_tau(1,...,1) by the hook-content style product.
double schur_dimension(const Partition& tau, int m);

// C_tau(X) = k! d_tau / (m)_tau * s_tau(X)
double zonal(const Partition& tau, const SpectrumVector& x);

struct SeriesOptions {
    double tol = 1e-12;
    int max_weight = 60;
    bool strict = true;  // throw NonConvergedError when not converged
};

struct SeriesResult {
    double value = 0.0;
    double tail = 0.0;  // absolute sum of the last weight layer
    int max_weight = 0;
    bool converged = false;
};

// pFq(a; b; X) = sum_k sum_{|tau|=k} prod (a_i)_tau / prod (b_j)_tau * C_tau(X) / k!
SeriesResult hyp_matrix_series(const std::vector<double>& a, const std::vector<double>& b,
                               const SpectrumVector& x, const SeriesOptions& opt = {});

// Two-argument kernel C_tau(B) C_tau(C) / (C_tau(I) k!).
SeriesResult hyp_matrix_series_two(const std::vector<double>& a, const std::vector<double>& b,
                                   const SpectrumVector& bs, const SpectrumVector& cs,
                                   const SeriesOptions& opt = {});

}  // namespace laguerre
