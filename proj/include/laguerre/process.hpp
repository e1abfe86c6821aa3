#pragma once

// Laguerre process simulation: Euler schemes for the matrix SDE and for the
// eigenvalue system, plus the exact Gram construction for integer dimension.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "laguerre/errors.hpp"
#include "laguerre/linalg.hpp"
#include "laguerre/rng.hpp"

namespace laguerre {

struct LaguerreModel {
    int m = 1;
    double delta = 0.0;
    HermitianMatrix x0;

    LaguerreModel() = default;
    // Throws ConfigError on a non-Hermitian, non-PSD or mis-sized start.
    LaguerreModel(int m, double delta, const HermitianMatrix& x0);
    static LaguerreModel from_spectrum(double delta, const std::vector<double>& x0);

    double nu() const { return delta - m; }
    bool strong_solution() const { return delta >= m; }       // stays in the interior
    bool distinct_eigen_regime() const { return delta > m - 1; }
    std::string describe() const;
};

struct SeedRecord {
    uint64_t master_seed = 0;
    uint64_t path_index = 0;
};

struct MatrixPath {
    std::vector<double> times;
    std::vector<HermitianMatrix> states;  // positive parts of the raw iterates
    std::vector<double> raw_min_eigen;    // smallest eigenvalue before projection
    SeedRecord seed;
};

struct EigenPath {
    std::vector<double> times;
    std::vector<std::vector<double>> lambdas;  // non-increasing, clipped at zero
    std::vector<double> raw_last;              // lambda_m before clipping
    SeedRecord seed;
};

// X <- X + sqrt(X^+) dB + dB^* sqrt(X^+) + 2 delta dt I, then Hermitian symmetrization.
// Consumes 2 m^2 normals per step: entries of dB row-major, real part then imaginary part.
class MatrixEulerStepper {
public:
    MatrixEulerStepper(int m, double delta, double dt);
    int normals_per_step() const { return 2 * m_ * m_; }
    // Returns the smallest eigenvalue of X before the step.
    double step(SmallCMatrix& x, const double* z) const;

private:
    int m_;
    double delta_, dt_, sdt_;
};

// Full-truncation Euler for the ordered eigenvalues. The interaction term
// 2 sum_k (l_i^+ + l_k^+)/(l_i - l_k) is tamed as D / (1 + dt |D|); the constant
// drift 2 delta is not. Consumes m normals per step.
class EigenEulerStepper {
public:
    EigenEulerStepper(int m, double delta, double dt);
    int normals_per_step() const { return m_; }
    // Updates lam (raw values, re-sorted) and returns the raw smallest value.
    double step(SmallVector& lam, const double* z) const;

private:
    int m_;
    double delta_, dt_, sdt_;
};

// Exact law for integer delta = n >= m: X = B^* B with B an n x m complex
// Brownian matrix, B_0 = [sqrt(x0); 0]. Consumes 2 n m normals per step.
class GramStepper {
public:
    GramStepper(const LaguerreModel& model, double dt);
    int normals_per_step() const { return 2 * n_ * m_; }
    void reset(Eigen::MatrixXcd& b) const { b = b0_; }
    void step(Eigen::MatrixXcd& b, const double* z) const;
    // Step of length dt instead of the construction step.
    void step(Eigen::MatrixXcd& b, const double* z, double dt) const;
    static HermitianMatrix gram(const Eigen::MatrixXcd& b);

private:
    int n_, m_;
    double sdt_;
    Eigen::MatrixXcd b0_;
};

// Number of Euler steps for horizon T; throws ConfigError unless dt > 0 and T >= dt.
int step_count(double dt, double T);

MatrixPath simulate_matrix(const LaguerreModel& model, double dt, double T, uint64_t seed, uint64_t path = 0);
MatrixPath simulate_matrix_gram(const LaguerreModel& model, double dt, double T, uint64_t seed, uint64_t path = 0);
// Requires a strictly ordered start when m >= 2.
EigenPath simulate_eigen(const LaguerreModel& model, double dt, double T, uint64_t seed, uint64_t path = 0);

// Streaming forms of the simulators. visit(k, state) sees the raw iterate after
// step k (k = 0 is the start); returning false ends the path. Normals are drawn
// exactly as in simulate_*, so streamed and stored paths agree.
template <class Visit>
void stream_matrix(const LaguerreModel& model, double dt, int steps, uint64_t seed, uint64_t path, Visit&& visit) {
    MatrixEulerStepper st(model.m, model.delta, dt);
    NormalStream rng(seed, path);
    double z[2 * kMaxSimSize * kMaxSimSize];
    SmallCMatrix x = small_matrix(model.x0);
    if (!visit(0, static_cast<const SmallCMatrix&>(x))) return;
    for (int k = 1; k <= steps; ++k) {
        rng.fill(z, st.normals_per_step());
        st.step(x, z);
        if (!visit(k, static_cast<const SmallCMatrix&>(x))) return;
    }
}

template <class Visit>
void stream_eigen(const LaguerreModel& model, double dt, int steps, uint64_t seed, uint64_t path, Visit&& visit) {
    const SpectrumVector s0 = model.x0.spectrum();
    if (model.m >= 2 && !(s0.min_gap() > 0.0))
        throw DomainError("simulate_eigen: initial eigenvalues must be distinct");
    EigenEulerStepper st(model.m, model.delta, dt);
    NormalStream rng(seed, path);
    double z[kMaxSimSize];
    SmallVector lam(model.m);
    for (int i = 0; i < model.m; ++i) lam(i) = s0[i];
    if (!visit(0, static_cast<const SmallVector&>(lam))) return;
    for (int k = 1; k <= steps; ++k) {
        rng.fill(z, model.m);
        st.step(lam, z);
        if (!visit(k, static_cast<const SmallVector&>(lam))) return;
    }
}

template <class Visit>
void stream_gram(const LaguerreModel& model, double dt, int steps, uint64_t seed, uint64_t path, Visit&& visit) {
    GramStepper st(model, dt);
    NormalStream rng(seed, path);
    std::vector<double> z(st.normals_per_step());
    Eigen::MatrixXcd b;
    st.reset(b);
    if (!visit(0, static_cast<const Eigen::MatrixXcd&>(b))) return;
    for (int k = 1; k <= steps; ++k) {
        rng.fill(z.data(), static_cast<int>(z.size()));
        st.step(b, z.data());
        if (!visit(k, static_cast<const Eigen::MatrixXcd&>(b))) return;
    }
}

// B^* B into fixed storage.
SmallCMatrix gram_small(const Eigen::MatrixXcd& b);

// First time lambda_m reaches zero, interpolated linearly inside the crossing step.
std::optional<double> detect_t0(const EigenPath& path);

// Pointwise sum of two independent paths on one grid.
MatrixPath superpose(const MatrixPath& a, const MatrixPath& b);

// CSV: t,lambda1..lambdam  /  t,re_ij,im_ij (upper triangle, row-major).
void write_eigen_csv(std::ostream& os, const EigenPath& p);
void write_matrix_csv(std::ostream& os, const MatrixPath& p);

}  // namespace laguerre
