#include "laguerre/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "laguerre/errors.hpp"

namespace laguerre {

Partition::Partition(std::initializer_list<int> p) : Partition(std::vector<int>(p)) {}

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0) throw DomainError("partition part is negative");
        if (i > 0 && parts[i] > parts[i - 1]) throw DomainError("partition parts must be non-increasing");
    }
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
}

int Partition::weight() const {
    int w = 0;
    for (int p : parts) w += p;
    return w;
}

Partition Partition::conjugate() const {
    std::vector<int> c(parts.empty() ? 0 : parts[0], 0);
    for (int p : parts)
        for (int j = 0; j < p; ++j) ++c[j];
    return Partition(std::move(c));
}

std::string Partition::str() const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
    os << ')';
    return os.str();
}

SpectrumVector::SpectrumVector(std::initializer_list<double> v) : SpectrumVector(std::vector<double>(v)) {}

SpectrumVector::SpectrumVector(std::vector<double> v) : values(std::move(v)) {
    std::sort(values.begin(), values.end(), std::greater<double>());
}

double SpectrumVector::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double SpectrumVector::min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < values.size(); ++i) g = std::min(g, values[i - 1] - values[i]);
    return g;
}

SpectrumVector SpectrumVector::scaled(double c) const {
    std::vector<double> v = values;
    for (double& x : v) x *= c;
    return SpectrumVector(std::move(v));
}

namespace {

void partitions_rec(int remaining, int max_part, int slots, std::vector<int>& cur,
                    std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (slots == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(remaining - p, p, slots - 1, cur, out);
        cur.pop_back();
    }
}

double vandermonde(const std::vector<double>& x) {
    double v = 1.0;
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j) v *= x[i] - x[j];
    return v;
}

}  // namespace

std::vector<Partition> enumerate_partitions(int k, int m) {
    if (k < 0 || m < 1) throw DomainError("enumerate_partitions requires k >= 0, m >= 1");
    std::vector<Partition> out;
    std::vector<int> cur;
    partitions_rec(k, k, m, cur, out);
    return out;
}

double gen_pochhammer(double a, const Partition& tau, int m) {
    if (tau.length() > m) throw DomainError("partition longer than ambient size");
    double r = 1.0;
    for (int i = 0; i < tau.length(); ++i) {
        double base = a - i;
        for (int j = 0; j < tau.parts[i]; ++j) r *= base + j;
    }
    return r;
}

std::vector<double> complete_symmetric(const SpectrumVector& x, int n) {
    std::vector<double> h(n + 1, 0.0);
    h[0] = 1.0;
    for (double xi : x.values)
        for (int k = 1; k <= n; ++k) h[k] += xi * h[k - 1];
    return h;
}

std::vector<double> elementary_symmetric(const SpectrumVector& x, int n) {
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (double xi : x.values)
        for (int k = n; k >= 1; --k) e[k] += xi * e[k - 1];
    return e;
}

double schur_bialternant(const Partition& tau, const SpectrumVector& x) {
    const int m = x.size();
    if (tau.length() > m) return 0.0;
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = std::pow(x[i], tau[j] + m - 1 - j);
    return a.determinant() / vandermonde(x.values);
}

double schur_jacobi_trudi(const Partition& tau, const SpectrumVector& x) {
    if (tau.length() > x.size()) return 0.0;
    const int l = tau.length();
    if (l == 0) return 1.0;
    const std::vector<double> h = complete_symmetric(x, tau[0] + l);
    Eigen::MatrixXd a(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            int idx = tau[i] - i + j;
            a(i, j) = idx < 0 ? 0.0 : h[idx];
        }
    return a.determinant();
}

double schur_jacobi_trudi_dual(const Partition& tau, const SpectrumVector& x) {
    if (tau.length() > x.size()) return 0.0;
    const Partition c = tau.conjugate();
    const int l = c.length();
    if (l == 0) return 1.0;
    const std::vector<double> e = elementary_symmetric(x, x.size());
    Eigen::MatrixXd a(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            int idx = c[i] - i + j;
            a(i, j) = (idx < 0 || idx > x.size()) ? 0.0 : e[idx];
        }
    return a.determinant();
}

double schur(const Partition& tau, const SpectrumVector& x) {
    if (tau.length() > x.size()) return 0.0;
    if (tau.length() == 0) return 1.0;
    const double scale = x.max_abs();
    if (scale == 0.0) return 0.0;
    if (x.min_gap() <= 1e-8 * scale) return schur_jacobi_trudi(tau, x);
    return schur_bialternant(tau, x);
}

double schur_dimension(const Partition& tau, int m) {
    if (tau.length() > m) return 0.0;
    double d = 1.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) d *= double(tau[i] - tau[j] + j - i) / double(j - i);
    return d;
}

double zonal(const Partition& tau, const SpectrumVector& x) {
    const int m = x.size();
    if (tau.length() > m) return 0.0;
    double c = schur_dimension(tau, m) / gen_pochhammer(m, tau, m);
    for (int i = 2; i <= tau.weight(); ++i) c *= i;
    return c * schur(tau, x);
}

namespace {

// Shared driver: term(tau) returns the weight-layer contribution of tau.
SeriesResult sum_by_weight(int m, const SeriesOptions& opt,
                           const std::function<double(const Partition&)>& term) {
    SeriesResult r;
    double acc = 0.0, comp = 0.0;
    int quiet = 0;
    for (int k = 0; k <= opt.max_weight; ++k) {
        double layer = 0.0, layer_abs = 0.0;
        for (const Partition& tau : enumerate_partitions(k, m)) {
            double t = term(tau);
            layer += t;
            layer_abs += std::abs(t);
        }
        // Neumaier accumulation across layers
        double s = acc + layer;
        comp += std::abs(acc) >= std::abs(layer) ? (acc - s) + layer : (layer - s) + acc;
        acc = s;
        r.max_weight = k;
        r.tail = layer_abs;
        if (k > 0 && layer_abs <= opt.tol * std::abs(acc + comp)) {
            if (++quiet >= 2) {
                r.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    r.value = acc + comp;
    if (!r.converged && opt.strict)
        throw NonConvergedError("matrix hypergeometric series not converged at weight " +
                                std::to_string(opt.max_weight));
    return r;
}

double pochhammer_ratio(const std::vector<double>& a, const std::vector<double>& b, const Partition& tau,
                        int m) {
    double c = 1.0;
    for (double ai : a) c *= gen_pochhammer(ai, tau, m);
    for (double bj : b) {
        double d = gen_pochhammer(bj, tau, m);
        if (d == 0.0) throw PoleError("denominator Pochhammer symbol vanishes for " + tau.str());
        c /= d;
    }
    return c;
}

void check_domain(size_t p, size_t q, double radius) {
    if (p > q + 1) throw DivergenceError("pFq series diverges for p > q + 1");
    if (p == q + 1 && radius >= 1.0) throw DivergenceError("p = q + 1 series requires spectral radius < 1");
}

}  // namespace

SeriesResult hyp_matrix_series(const std::vector<double>& a, const std::vector<double>& b,
                               const SpectrumVector& x, const SeriesOptions& opt) {
    check_domain(a.size(), b.size(), x.max_abs());
    const int m = x.size();
    return sum_by_weight(m, opt, [&](const Partition& tau) {
        double c = pochhammer_ratio(a, b, tau, m);
        if (c == 0.0) return 0.0;
        return c * schur_dimension(tau, m) / gen_pochhammer(m, tau, m) * schur(tau, x);
    });
}

SeriesResult hyp_matrix_series_two(const std::vector<double>& a, const std::vector<double>& b,
                                   const SpectrumVector& bs, const SpectrumVector& cs,
                                   const SeriesOptions& opt) {
    if (bs.size() != cs.size()) throw DomainError("spectra must have equal size");
    check_domain(a.size(), b.size(), bs.max_abs() * cs.max_abs());
    const int m = bs.size();
    return sum_by_weight(m, opt, [&](const Partition& tau) {
        double c = pochhammer_ratio(a, b, tau, m);
        if (c == 0.0) return 0.0;
        return c * schur(tau, bs) * schur(tau, cs) / gen_pochhammer(m, tau, m);
    });
}

}  // namespace laguerre
