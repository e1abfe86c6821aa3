#pragma once

// Monte Carlo checks of the closed-form laws against simulated paths.

#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "laguerre/laws.hpp"
#include "laguerre/process.hpp"

namespace laguerre {

struct McOptions {
    double dt = 0.0;  // 0 selects 1e-4 times the horizon
    int threads = 1;
};

struct McReport {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double reference = 0.0;
    double z = 0.0;
    long paths = 0;
    uint64_t seed = 0;
    // |z| bound, or the p-value floor for chi-square checks
    double threshold = 3.0;
    double p_value = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    bool gating = true;
    std::string note;
};

// Paths below this count are flagged as underpowered.
constexpr long kMinPaths = 1000;

// f(i) for i in [0, n) on up to `threads` workers, stored by index. The first
// exception by path index is rethrown after all workers finish.
template <class R, class F>
std::vector<R> run_paths(long n, int threads, F&& f) {
    std::vector<R> out(static_cast<size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
    std::atomic<long> next{0};
    constexpr long chunk = 64;
    auto worker = [&] {
        for (long lo; (lo = next.fetch_add(chunk)) < n;)
            for (long i = lo; i < std::min(n, lo + chunk); ++i) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
    };
    const int w = static_cast<int>(std::max(1L, std::min<long>(std::max(1, threads), (n + chunk - 1) / chunk)));
    if (w == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < w; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

// Sample mean and standard error, summed in index order.
MeanSe mean_se(const std::vector<double>& xs);

// Fills z and pass from |estimate - reference| / se <= threshold.
McReport make_report(const std::string& name, const MeanSe& m, double reference, long paths, uint64_t seed,
                     double threshold = 3.0);

// E exp(-tr(u X_t)) from matrix Euler paths.
McReport check_laplace(const LaguerreModel& model, double t, const HermitianMatrix& u, long n_paths, uint64_t seed,
                       const McOptions& opt = {});

// E exp(-u tr X_t) against the BESQ(2 delta m, tr x) transform.
McReport check_trace_besq(const LaguerreModel& model, double t, double u, long n_paths, uint64_t seed,
                          const McOptions& opt = {});

// X + Y from independent paths (streams 2i and 2i + 1) against the summed model.
McReport check_additivity(const LaguerreModel& a, const LaguerreModel& b, double t, const HermitianMatrix& u,
                          long n_paths, uint64_t seed, const McOptions& opt = {});

// Survival frequencies P(T_0 > t) from eigenvalue paths stopped at T_0, with
// binomial standard errors from t0_tail. Times past the horizon are censored
// and reported as non-gating.
std::vector<McReport> check_t0(const LaguerreModel& model, const std::vector<double>& t_grid, long n_paths,
                               uint64_t seed, const McOptions& opt = {}, double horizon = 0.0);

struct DensityBin {
    int group = 0;  // chi-square cell after merging
    double y1_lo = 0.0, y1_hi = 0.0, y2_lo = 0.0, y2_hi = 0.0;
    long observed = 0;
    double expected = 0.0;
};

// Chi-square of the simulated ordered spectrum at time t against eigen_semigroup
// cell masses, for m = 1 or 2. Each axis is cut into `bins` equal pieces up to
// E tr X_t plus one unbounded piece; cells expected below 20 are pooled.
McReport check_eigen_density(const LaguerreModel& model, double t, int bins, long n_paths, uint64_t seed,
                             const McOptions& opt = {}, std::vector<DensityBin>* table = nullptr);

// E[w exp(-tr(u X_t))] under the exact Gram law with delta = m, w the change of
// measure to delta = m + nu; compared with laplace_transform at delta = m + nu.
McReport check_girsanov(const LaguerreModel& base, double nu, double t, const HermitianMatrix& u, long n_paths,
                        uint64_t seed, const McOptions& opt = {});

// E exp(-theta A_t), A_t = 4 / (m log t)^2 int_0^t tr(X_s^{-1}) ds, against
// exp(-sqrt(2 theta)) for delta = m. The grid is uniform up to time 1 and
// geometric (ratio 1.001) beyond. Reports are non-gating.
std::vector<McReport> check_log_asymptotic(const LaguerreModel& model, const std::vector<double>& t_values,
                                           const std::vector<double>& thetas, long n_paths, uint64_t seed,
                                           const McOptions& opt = {});

// E g(t1 - s, X_s) at each s in `times`, with g(r, x) = E_x exp(-tr(u X_r));
// the reference is g(t1, x0) throughout.
std::vector<McReport> check_martingale(const LaguerreModel& model, double t1, const HermitianMatrix& u,
                                       const std::vector<double>& times, long n_paths, uint64_t seed,
                                       const McOptions& opt = {});

// E det(X_t)^s against det_moment.
McReport check_det_moment(const LaguerreModel& model, double t, double s, long n_paths, uint64_t seed,
                          const McOptions& opt = {});

std::string reports_to_json(const std::vector<McReport>& reports);
void write_density_csv(std::ostream& os, const std::vector<DensityBin>& table);

}  // namespace laguerre
