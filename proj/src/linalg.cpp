#include "laguerre/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "laguerre/errors.hpp"

namespace laguerre {

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& a, double tol) : a_(a) {
    if (a.rows() != a.cols()) throw DomainError("HermitianMatrix: matrix is not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw DomainError("HermitianMatrix: matrix is not Hermitian");
    a_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) a(i, i) = d[i];
    return HermitianMatrix(a);
}

HermitianMatrix HermitianMatrix::zero(int m) { return HermitianMatrix(Eigen::MatrixXcd::Zero(m, m)); }

SpectrumVector HermitianMatrix::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a_, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& e = es.eigenvalues();
    return SpectrumVector(std::vector<double>(e.data(), e.data() + e.size()));
}

double HermitianMatrix::min_eigenvalue() const {
    if (size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double HermitianMatrix::trace() const { return a_.trace().real(); }

double HermitianMatrix::determinant() const {
    double d = 1.0;
    for (double v : spectrum().values) d *= v;
    return d;
}

HermitianMatrix HermitianMatrix::apply(double (*f)(double)) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a_);
    Eigen::VectorXd v = es.eigenvalues();
    for (int i = 0; i < v.size(); ++i) v(i) = f(v(i));
    Eigen::MatrixXcd r = es.eigenvectors() * v.cast<cdouble>().asDiagonal() * es.eigenvectors().adjoint();
    return HermitianMatrix(0.5 * (r + r.adjoint()));
}

HermitianMatrix HermitianMatrix::positive_part() const {
    return apply([](double x) { return std::max(x, 0.0); });
}

HermitianMatrix HermitianMatrix::sqrt_positive() const {
    return apply([](double x) { return std::sqrt(std::max(x, 0.0)); });
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
    if (o.size() != size()) throw DomainError("HermitianMatrix: size mismatch");
    return HermitianMatrix(a_ + o.a_);
}

namespace {

// lambda_+ >= lambda_- of [[a, c], [conj c, b]]
void eig2(double a, double b, cdouble c, double& lp, double& lm) {
    const double mid = 0.5 * (a + b);
    const double r = std::hypot(0.5 * (a - b), std::abs(c));
    lp = mid + r;
    lm = mid - r;
}

// f(X) = f(l-) I + dd (X - l- I) for a 2x2 Hermitian X, dd the divided difference.
SmallCMatrix apply2(const SmallCMatrix& x, double fm, double dd, double lm) {
    SmallCMatrix r(2, 2);
    r(0, 0) = fm + dd * (x(0, 0).real() - lm);
    r(1, 1) = fm + dd * (x(1, 1).real() - lm);
    r(0, 1) = dd * x(0, 1);
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

}  // namespace

void hermitian_eigenvalues(const SmallCMatrix& x, SmallVector& evals) {
    const int m = static_cast<int>(x.rows());
    evals.resize(m);
    if (m == 1) {
        evals(0) = x(0, 0).real();
    } else if (m == 2) {
        eig2(x(0, 0).real(), x(1, 1).real(), x(0, 1), evals(0), evals(1));
    } else {
        Eigen::SelfAdjointEigenSolver<SmallCMatrix> es(x, Eigen::EigenvaluesOnly);
        for (int i = 0; i < m; ++i) evals(i) = es.eigenvalues()(m - 1 - i);
    }
}

SmallCMatrix psd_sqrt(const SmallCMatrix& x, double* min_eig) {
    const int m = static_cast<int>(x.rows());
    if (m == 1) {
        const double v = x(0, 0).real();
        if (min_eig) *min_eig = v;
        SmallCMatrix r(1, 1);
        r(0, 0) = std::sqrt(std::max(v, 0.0));
        return r;
    }
    if (m == 2) {
        double lp, lm;
        eig2(x(0, 0).real(), x(1, 1).real(), x(0, 1), lp, lm);
        if (min_eig) *min_eig = lm;
        if (lp <= 0.0) return SmallCMatrix::Zero(2, 2);
        const double sp = std::sqrt(lp);
        if (lm >= 0.0) {
            const double sm = std::sqrt(lm);
            return apply2(x, sm, 1.0 / (sp + sm), lm);
        }
        return apply2(x, 0.0, sp / (lp - lm), lm);
    }
    Eigen::SelfAdjointEigenSolver<SmallCMatrix> es(x);
    SmallVector v = es.eigenvalues();
    if (min_eig) *min_eig = v(0);
    for (int i = 0; i < m; ++i) v(i) = std::sqrt(std::max(v(i), 0.0));
    SmallCMatrix r = es.eigenvectors() * v.cast<cdouble>().asDiagonal() * es.eigenvectors().adjoint();
    make_hermitian(r);
    return r;
}

SmallCMatrix small_matrix(const HermitianMatrix& h) {
    SmallCMatrix x(h.size(), h.size());
    for (int i = 0; i < h.size(); ++i)
        for (int j = 0; j < h.size(); ++j) x(i, j) = h(i, j);
    return x;
}

SmallCMatrix positive_part(const SmallCMatrix& x) {
    const int m = static_cast<int>(x.rows());
    if (m == 1) {
        SmallCMatrix r(1, 1);
        r(0, 0) = std::max(x(0, 0).real(), 0.0);
        return r;
    }
    if (m == 2) {
        double lp, lm;
        eig2(x(0, 0).real(), x(1, 1).real(), x(0, 1), lp, lm);
        if (lm >= 0.0) return x;
        if (lp <= 0.0) return SmallCMatrix::Zero(2, 2);
        return apply2(x, 0.0, lp / (lp - lm), lm);
    }
    Eigen::SelfAdjointEigenSolver<SmallCMatrix> es(x);
    SmallVector v = es.eigenvalues();
    if (v(0) >= 0.0) return x;
    for (int i = 0; i < m; ++i) v(i) = std::max(v(i), 0.0);
    SmallCMatrix r = es.eigenvectors() * v.cast<cdouble>().asDiagonal() * es.eigenvectors().adjoint();
    make_hermitian(r);
    return r;
}

void make_hermitian(SmallCMatrix& x) {
    const int m = static_cast<int>(x.rows());
    for (int i = 0; i < m; ++i) {
        x(i, i) = x(i, i).real();
        for (int j = i + 1; j < m; ++j) x(j, i) = std::conj(x(i, j));
    }
}

}  // namespace laguerre
