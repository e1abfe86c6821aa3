#include "laguerre/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "laguerre/errors.hpp"
#include "laguerre/io.hpp"

namespace laguerre {

LaguerreModel::LaguerreModel(int m_, double delta_, const HermitianMatrix& x0_) : m(m_), delta(delta_), x0(x0_) {
    if (m < 1) throw ConfigError("model: m must be >= 1");
    if (m > kMaxSimSize) throw ConfigError("model: m must be <= " + std::to_string(kMaxSimSize));
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("model: delta must be a finite number >= 0");
    if (x0.size() != m) throw ConfigError("model: initial state has the wrong size");
    const double scale = std::max(1.0, x0.matrix().cwiseAbs().maxCoeff());
    if (x0.min_eigenvalue() < -1e-12 * scale) throw ConfigError("model: initial state is not positive semidefinite");
}

LaguerreModel LaguerreModel::from_spectrum(double delta, const std::vector<double>& x0) {
    if (x0.empty()) throw ConfigError("model: empty initial spectrum");
    return LaguerreModel(static_cast<int>(x0.size()), delta, HermitianMatrix::diagonal(x0));
}

std::string LaguerreModel::describe() const {
    std::ostringstream os;
    os << "m=" << m << " delta=" << format_double(delta) << " nu=" << format_double(nu()) << " x0_spectrum=[";
    auto s = x0.spectrum();
    for (int i = 0; i < s.size(); ++i) os << (i ? "," : "") << format_double(s[i]);
    os << "]";
    return os.str();
}

int step_count(double dt, double T) {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(T >= dt)) throw ConfigError("T must be at least dt");
    const double n = std::round(T / dt);
    if (std::abs(n * dt - T) > 1e-9 * T) throw ConfigError("T must be an integer multiple of dt");
    return static_cast<int>(n);
}

// ------------------------------------------------------------------ steppers

MatrixEulerStepper::MatrixEulerStepper(int m, double delta, double dt)
    : m_(m), delta_(delta), dt_(dt), sdt_(std::sqrt(dt)) {}

double MatrixEulerStepper::step(SmallCMatrix& x, const double* z) const {
    double min_eig = 0.0;
    const SmallCMatrix s = psd_sqrt(x, &min_eig);
    SmallCMatrix db(m_, m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) db(i, j) = cdouble(z[2 * (i * m_ + j)], z[2 * (i * m_ + j) + 1]) * sdt_;
    const SmallCMatrix y = s * db;
    x += y + y.adjoint();
    for (int i = 0; i < m_; ++i) x(i, i) += 2.0 * delta_ * dt_;
    make_hermitian(x);
    return min_eig;
}

EigenEulerStepper::EigenEulerStepper(int m, double delta, double dt)
    : m_(m), delta_(delta), dt_(dt), sdt_(std::sqrt(dt)) {}

double EigenEulerStepper::step(SmallVector& lam, const double* z) const {
    double pos[kMaxSimSize], inc[kMaxSimSize];
    for (int i = 0; i < m_; ++i) pos[i] = std::max(lam(i), 0.0);
    for (int i = 0; i < m_; ++i) {
        double d = 0.0;
        for (int k = 0; k < m_; ++k)
            if (k != i) d += (pos[i] + pos[k]) / (lam(i) - lam(k));
        d *= 2.0;
        d /= 1.0 + dt_ * std::abs(d);
        inc[i] = 2.0 * std::sqrt(pos[i]) * z[i] * sdt_ + (2.0 * delta_ + d) * dt_;
    }
    for (int i = 0; i < m_; ++i) lam(i) += inc[i];
    std::sort(lam.data(), lam.data() + m_, std::greater<double>());
    for (int i = 1; i < m_; ++i)
        if (!(lam(i - 1) > lam(i))) throw CollisionError("eigenvalue collision in the Euler scheme");
    return lam(m_ - 1);
}

GramStepper::GramStepper(const LaguerreModel& model, double dt) : m_(model.m), sdt_(std::sqrt(dt)) {
    const double n = std::round(model.delta);
    if (std::abs(n - model.delta) > 1e-12 || n < model.m)
        throw ConfigError("Gram construction needs an integer delta >= m");
    n_ = static_cast<int>(n);
    b0_ = Eigen::MatrixXcd::Zero(n_, m_);
    b0_.topRows(m_) = model.x0.sqrt_positive().matrix();
}

void GramStepper::step(Eigen::MatrixXcd& b, const double* z) const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < m_; ++j) b(i, j) += cdouble(z[2 * (i * m_ + j)], z[2 * (i * m_ + j) + 1]) * sdt_;
}

void GramStepper::step(Eigen::MatrixXcd& b, const double* z, double dt) const {
    const double sdt = std::sqrt(dt);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < m_; ++j) b(i, j) += cdouble(z[2 * (i * m_ + j)], z[2 * (i * m_ + j) + 1]) * sdt;
}

SmallCMatrix gram_small(const Eigen::MatrixXcd& b) {
    const int m = static_cast<int>(b.cols());
    SmallCMatrix g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) g(i, j) = b.col(i).dot(b.col(j));
    make_hermitian(g);
    return g;
}

HermitianMatrix GramStepper::gram(const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd g = b.adjoint() * b;
    return HermitianMatrix(0.5 * (g + g.adjoint()));
}

// ------------------------------------------------------------------ paths

namespace {

HermitianMatrix from_small(const SmallCMatrix& x) {
    Eigen::MatrixXcd a(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) a(i, j) = x(i, j);
    return HermitianMatrix(a);
}

double raw_min(const SmallCMatrix& x) {
    SmallVector e;
    hermitian_eigenvalues(x, e);
    return e(e.size() - 1);
}

}  // namespace

MatrixPath simulate_matrix(const LaguerreModel& model, double dt, double T, uint64_t seed, uint64_t path) {
    const int n = step_count(dt, T);
    MatrixPath p;
    p.seed = {seed, path};
    p.times.reserve(n + 1);
    p.states.reserve(n + 1);
    stream_matrix(model, dt, n, seed, path, [&](int k, const SmallCMatrix& x) {
        p.times.push_back(k * dt);
        p.states.push_back(from_small(positive_part(x)));
        p.raw_min_eigen.push_back(raw_min(x));
        return true;
    });
    return p;
}

MatrixPath simulate_matrix_gram(const LaguerreModel& model, double dt, double T, uint64_t seed, uint64_t path) {
    const int n = step_count(dt, T);
    MatrixPath p;
    p.seed = {seed, path};
    stream_gram(model, dt, n, seed, path, [&](int k, const Eigen::MatrixXcd& b) {
        HermitianMatrix g = GramStepper::gram(b);
        p.times.push_back(k * dt);
        p.raw_min_eigen.push_back(g.min_eigenvalue());
        p.states.push_back(std::move(g));
        return true;
    });
    return p;
}

EigenPath simulate_eigen(const LaguerreModel& model, double dt, double T, uint64_t seed, uint64_t path) {
    const int n = step_count(dt, T);
    EigenPath p;
    p.seed = {seed, path};
    stream_eigen(model, dt, n, seed, path, [&](int k, const SmallVector& lam) {
        std::vector<double> v(model.m);
        for (int i = 0; i < model.m; ++i) v[i] = std::max(lam(i), 0.0);
        p.times.push_back(k * dt);
        p.lambdas.push_back(std::move(v));
        p.raw_last.push_back(lam(model.m - 1));
        return true;
    });
    return p;
}

std::optional<double> detect_t0(const EigenPath& path) {
    const auto& r = path.raw_last;
    if (r.empty()) return std::nullopt;
    if (r[0] <= 0.0) return path.times[0];
    for (size_t k = 1; k < r.size(); ++k) {
        if (r[k] <= 0.0) {
            const double w = r[k - 1] / (r[k - 1] - r[k]);
            return path.times[k - 1] + w * (path.times[k] - path.times[k - 1]);
        }
    }
    return std::nullopt;
}

MatrixPath superpose(const MatrixPath& a, const MatrixPath& b) {
    if (a.times != b.times) throw GridMismatchError("superpose: time grids differ");
    if (a.seed.master_seed == b.seed.master_seed && a.seed.path_index == b.seed.path_index)
        throw DomainError("superpose: paths share a random stream and are not independent");
    if (!a.states.empty() && a.states[0].size() != b.states[0].size())
        throw DomainError("superpose: matrix sizes differ");
    MatrixPath s;
    s.times = a.times;
    s.seed = a.seed;
    for (size_t k = 0; k < a.states.size(); ++k) {
        s.states.push_back(a.states[k] + b.states[k]);
        s.raw_min_eigen.push_back(s.states.back().min_eigenvalue());
    }
    return s;
}

void write_eigen_csv(std::ostream& os, const EigenPath& p) {
    const size_t m = p.lambdas.empty() ? 0 : p.lambdas[0].size();
    os << "t";
    for (size_t i = 0; i < m; ++i) os << ",lambda" << i + 1;
    os << "\n";
    for (size_t k = 0; k < p.times.size(); ++k) {
        os << format_double(p.times[k]);
        for (double v : p.lambdas[k]) os << ',' << format_double(v);
        os << "\n";
    }
}

void write_matrix_csv(std::ostream& os, const MatrixPath& p) {
    const int m = p.states.empty() ? 0 : p.states[0].size();
    os << "t";
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) os << ",re_" << i + 1 << j + 1 << ",im_" << i + 1 << j + 1;
    os << "\n";
    for (size_t k = 0; k < p.times.size(); ++k) {
        os << format_double(p.times[k]);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                os << ',' << format_double(p.states[k](i, j).real()) << ',' << format_double(p.states[k](i, j).imag());
        os << "\n";
    }
}

}  // namespace laguerre
