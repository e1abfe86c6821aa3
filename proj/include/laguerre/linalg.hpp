#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "laguerre/symfun.hpp"

namespace laguerre {

using cdouble = std::complex<double>;

// Stack-allocated matrices for the simulation hot loops.
constexpr int kMaxSimSize = 8;
using SmallCMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxSimSize, kMaxSimSize>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxSimSize, 1>;

class HermitianMatrix {
public:
    HermitianMatrix() = default;
    // Throws DomainError when a is not square or not Hermitian within tol (relative to its norm).
    explicit HermitianMatrix(const Eigen::MatrixXcd& a, double tol = 1e-12);
    static HermitianMatrix diagonal(const std::vector<double>& d);
    static HermitianMatrix zero(int m);

    int size() const { return static_cast<int>(a_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return a_; }
    cdouble operator()(int i, int j) const { return a_(i, j); }

    SpectrumVector spectrum() const;
    double min_eigenvalue() const;
    double trace() const;
    double determinant() const;
    // U diag(f(lambda)) U^*
    HermitianMatrix apply(double (*f)(double)) const;
    HermitianMatrix positive_part() const;
    HermitianMatrix sqrt_positive() const;

    HermitianMatrix operator+(const HermitianMatrix& o) const;

private:
    Eigen::MatrixXcd a_;
};

// Closed forms for m <= 2, Eigen's solver otherwise. Eigenvalues in decreasing order.
void hermitian_eigenvalues(const SmallCMatrix& x, SmallVector& evals);
// sqrt(X^+); optionally reports the smallest eigenvalue of X before truncation.
SmallCMatrix psd_sqrt(const SmallCMatrix& x, double* min_eig = nullptr);
SmallCMatrix small_matrix(const HermitianMatrix& h);
// max(X, 0)
SmallCMatrix positive_part(const SmallCMatrix& x);
// Sets the lower triangle to the conjugate of the upper and zeroes the diagonal imaginary parts.
void make_hermitian(SmallCMatrix& x);

}  // namespace laguerre
