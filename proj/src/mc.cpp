#include "laguerre/mc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "laguerre/errors.hpp"
#include "laguerre/io.hpp"
#include "laguerre/quadrature.hpp"

namespace laguerre {

namespace {

double resolve_dt(const McOptions& opt, double horizon) { return opt.dt > 0.0 ? opt.dt : 1e-4 * horizon; }

std::string tag(const std::string& name, double value) { return name + "=" + format_double(value); }

void flag_power(McReport& r) {
    if (r.paths < kMinPaths) r.note += (r.note.empty() ? "" : "; ") + std::string("underpowered run");
}

// tr(u x) for Hermitian u and x
double trace_product(const SmallCMatrix& u, const SmallCMatrix& x) { return (u * x).trace().real(); }

// int tr((B^* B)^{-1}) over one Gram step by the trapezoid rule, halving the step
// with exact Brownian bridge midpoints while the smallest eigenvalue at an end
// is below kBridgeRatio times the step. Bridge normals come from their own stream.
constexpr double kBridgeRatio = 10.0;

struct GramPoint {
    double lam_min = 0.0, trace_inverse = 0.0, log_det = 0.0;
};

// Spectral data of B^* B from B, accurate when B is close to singular.
GramPoint gram_point(const Eigen::MatrixXcd& b, double t) {
    GramPoint p;
    if (b.rows() == 2 && b.cols() == 2) {
        const double tr = b.squaredNorm();
        const double det = std::norm(b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0));
        const double lam_max = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
        p.lam_min = det / lam_max;
        p.trace_inverse = tr / det;
        p.log_det = std::log(det);
    } else {
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues();
        p.lam_min = sv(sv.size() - 1) * sv(sv.size() - 1);
        for (int i = 0; i < sv.size(); ++i) {
            p.trace_inverse += 1.0 / (sv(i) * sv(i));
            p.log_det += 2.0 * std::log(sv(i));
        }
    }
    if (!(p.lam_min > 0.0)) throw SingularStateError("singular Gram state at t = " + format_double(t));
    return p;
}

// Grid states below 1e-12 are rejected as in girsanov_weight.
GramPoint grid_point(const Eigen::MatrixXcd& b, double t) {
    const GramPoint p = gram_point(b, t);
    if (!(p.lam_min >= 1e-12)) throw SingularStateError("state with eigenvalue below 1e-12 at t = " + format_double(t));
    return p;
}

class BridgeTrapezoid {
public:
    BridgeTrapezoid(uint64_t seed, uint64_t path) : rng_(seed, path | (uint64_t(1) << 63)) {}

    double step(const Eigen::MatrixXcd& ba, const Eigen::MatrixXcd& bb, const GramPoint& pa, const GramPoint& pb,
                double ta, double h, int depth = 0) {
        if (std::min(pa.lam_min, pb.lam_min) >= kBridgeRatio * h || depth >= 40)
            return 0.5 * h * (pa.trace_inverse + pb.trace_inverse);
        Eigen::MatrixXcd bm = 0.5 * (ba + bb);
        const double sd = std::sqrt(h / 4.0);
        for (int i = 0; i < bm.rows(); ++i)
            for (int j = 0; j < bm.cols(); ++j) {
                const double re = rng_.next(), im = rng_.next();
                bm(i, j) += cdouble(re, im) * sd;
            }
        const GramPoint pm = gram_point(bm, ta + h / 2);
        return step(ba, bm, pa, pm, ta, h / 2, depth + 1) + step(bm, bb, pm, pb, ta + h / 2, h / 2, depth + 1);
    }

private:
    NormalStream rng_;
};

// Terminal positive part of a matrix Euler path.
SmallCMatrix terminal_matrix(const LaguerreModel& model, double dt, int steps, uint64_t seed, uint64_t path) {
    SmallCMatrix out;
    stream_matrix(model, dt, steps, seed, path, [&](int k, const SmallCMatrix& x) {
        if (k == steps) out = positive_part(x);
        return true;
    });
    return out;
}

// Composite Gauss-Legendre on [a, b] with panels no wider than 1, graded toward a = 0.
template <class F>
double integrate(double a, double b, F&& f) {
    const GaussRule& g = gauss_rule(12);
    std::vector<double> br;
    if (a == 0.0) {
        const double first = std::min(1.0, b);
        for (int k = 12; k >= 1; --k) br.push_back(first * std::ldexp(1.0, -k));
        br.insert(br.begin(), 0.0);
        a = first;
    }
    const int n = std::max(1, static_cast<int>(std::ceil(b - a)));
    for (int j = 0; j <= n; ++j) br.push_back(a + (b - a) * j / n);
    CompensatedSum<> acc;
    for (size_t k = 0; k + 1 < br.size(); ++k)
        if (br[k + 1] > br[k]) acc.add(gauss_panel(g, br[k], br[k + 1], f));
    return acc.value();
}

}  // namespace

MeanSe mean_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 2) throw DomainError("mean_se needs at least two samples");
    CompensatedSum<> s;
    for (double x : xs) s.add(x);
    const double mean = s.value() / n;
    CompensatedSum<> q;
    for (double x : xs) q.add((x - mean) * (x - mean));
    return {mean, std::sqrt(q.value() / (n - 1.0) / n)};
}

McReport make_report(const std::string& name, const MeanSe& m, double reference, long paths, uint64_t seed,
                     double threshold) {
    McReport r;
    r.name = name;
    r.estimate = m.mean;
    r.se = m.se;
    r.reference = reference;
    r.paths = paths;
    r.seed = seed;
    r.threshold = threshold;
    const double diff = m.mean - reference;
    if (m.se > 0.0)
        r.z = diff / m.se;
    else
        // deterministic estimate: agreement up to rounding
        r.z = std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(reference))
                  ? 0.0
                  : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.pass = std::abs(r.z) <= threshold;
    flag_power(r);
    return r;
}

McReport check_laplace(const LaguerreModel& model, double t, const HermitianMatrix& u, long n_paths, uint64_t seed,
                       const McOptions& opt) {
    if (u.size() != model.m) throw DomainError("check_laplace: u has the wrong size");
    const double dt = resolve_dt(opt, t);
    const int steps = step_count(dt, t);
    const SmallCMatrix us = small_matrix(u);
    auto v = run_paths<double>(n_paths, opt.threads, [&](long i) {
        return std::exp(-trace_product(us, terminal_matrix(model, dt, steps, seed, i)));
    });
    McReport r = make_report("laplace", mean_se(v), laplace_transform(model, t, u), n_paths, seed);
    r.note = model.describe() + " " + tag("t", t) + " " + tag("dt", dt) + (r.note.empty() ? "" : "; " + r.note);
    return r;
}

McReport check_trace_besq(const LaguerreModel& model, double t, double u, long n_paths, uint64_t seed,
                          const McOptions& opt) {
    const double dt = resolve_dt(opt, t);
    const int steps = step_count(dt, t);
    auto v = run_paths<double>(n_paths, opt.threads, [&](long i) {
        return std::exp(-u * terminal_matrix(model, dt, steps, seed, i).trace().real());
    });
    const double a = 1.0 + 2.0 * t * u;
    const double ref = std::exp(-model.delta * model.m * std::log(a) - u * model.x0.trace() / a);
    McReport r = make_report("trace_besq", mean_se(v), ref, n_paths, seed);
    r.note = model.describe() + " " + tag("t", t) + " " + tag("u", u) + (r.note.empty() ? "" : "; " + r.note);
    return r;
}

McReport check_additivity(const LaguerreModel& a, const LaguerreModel& b, double t, const HermitianMatrix& u,
                          long n_paths, uint64_t seed, const McOptions& opt) {
    if (a.m != b.m) throw DomainError("check_additivity: matrix sizes differ");
    if (u.size() != a.m) throw DomainError("check_additivity: u has the wrong size");
    const double dt = resolve_dt(opt, t);
    const int steps = step_count(dt, t);
    const SmallCMatrix us = small_matrix(u);
    auto v = run_paths<double>(n_paths, opt.threads, [&](long i) {
        const SmallCMatrix x = terminal_matrix(a, dt, steps, seed, 2 * i) + terminal_matrix(b, dt, steps, seed, 2 * i + 1);
        return std::exp(-trace_product(us, x));
    });
    const LaguerreModel sum(a.m, a.delta + b.delta, a.x0 + b.x0);
    McReport r = make_report("additivity", mean_se(v), laplace_transform(sum, t, u), n_paths, seed);
    r.note = sum.describe() + " " + tag("t", t) + (r.note.empty() ? "" : "; " + r.note);
    return r;
}

std::vector<McReport> check_t0(const LaguerreModel& model, const std::vector<double>& t_grid, long n_paths,
                               uint64_t seed, const McOptions& opt, double horizon) {
    const double nu = model.m - model.delta;
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("check_t0 needs delta = m - nu with 0 < nu < 1");
    if (t_grid.empty()) throw DomainError("check_t0 needs a time grid");
    if (horizon <= 0.0) horizon = *std::max_element(t_grid.begin(), t_grid.end());
    const double dt = resolve_dt(opt, horizon);
    const int steps = step_count(dt, horizon);
    const SpectrumVector x = model.x0.spectrum();
    auto hits = run_paths<double>(n_paths, opt.threads, [&](long i) {
        double hit = std::numeric_limits<double>::infinity(), prev = x[model.m - 1];
        stream_eigen(model, dt, steps, seed, i, [&](int k, const SmallVector& lam) {
            const double raw = lam(model.m - 1);
            if (k > 0 && raw <= 0.0) {
                hit = (k - 1 + prev / (prev - raw)) * dt;
                return false;
            }
            prev = raw;
            return true;
        });
        return hit;
    });
    std::vector<McReport> out;
    for (double t : t_grid) {
        long alive = 0;
        for (double h : hits) alive += h > std::min(t, horizon);
        const double p = t0_tail(model.m, nu, x, t);
        const double freq = double(alive) / double(n_paths);
        McReport r = make_report("t0_tail", {freq, std::sqrt(p * (1.0 - p) / double(n_paths))}, p, n_paths, seed);
        std::string note = model.describe() + " " + tag("t", t) + " " + tag("dt", dt) + " binomial se";
        if (t > horizon) {
            r.gating = false;
            note += "; censored: t beyond the simulated horizon " + format_double(horizon);
        }
        r.note = note + (r.note.empty() ? "" : "; " + r.note);
        out.push_back(r);
    }
    return out;
}

McReport check_eigen_density(const LaguerreModel& model, double t, int bins, long n_paths, uint64_t seed,
                             const McOptions& opt, std::vector<DensityBin>* table) {
    const int m = model.m;
    if (m != 1 && m != 2) throw DomainError("check_eigen_density supports m = 1 and m = 2");
    if (bins < 2) throw DomainError("check_eigen_density needs at least two bins per axis");
    const SpectrumVector x = model.x0.spectrum();
    if (m == 2 && !(x.min_gap() > 0.0)) throw DomainError("check_eigen_density needs distinct initial eigenvalues");
    const double dt = resolve_dt(opt, t);
    const int steps = step_count(dt, t);

    // edges 0 < h/bins < ... < h, then [h, inf), h = E tr X_t
    const double h = 2.0 * model.delta * m * t + model.x0.trace();
    const double cap = 3.0 * h + 40.0 * t;
    std::vector<double> edges;
    for (int k = 0; k <= bins; ++k) edges.push_back(h * k / bins);
    edges.push_back(cap);
    const int nb = bins + 1;
    auto locate = [&](double y) {
        const int k = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), y) - edges.begin()) - 1;
        return std::clamp(k, 0, nb - 1);
    };

    auto q = [&](double y1, double y2) {
        return m == 1 ? eigen_semigroup(1, model.delta, t, x, SpectrumVector({y1}))
                      : eigen_semigroup(2, model.delta, t, x, SpectrumVector({y1, y2}));
    };
    std::vector<DensityBin> cells;
    for (int i = 0; i < nb; ++i) {
        if (m == 1) {
            DensityBin b;
            b.y1_lo = edges[i], b.y1_hi = edges[i + 1];
            b.expected = integrate(b.y1_lo, b.y1_hi, [&](double y) { return q(y, 0.0); });
            cells.push_back(b);
            continue;
        }
        for (int j = 0; j <= i; ++j) {
            DensityBin b;
            b.y1_lo = edges[i], b.y1_hi = edges[i + 1], b.y2_lo = edges[j], b.y2_hi = edges[j + 1];
            b.expected = integrate(b.y1_lo, b.y1_hi, [&](double y1) {
                const double hi = std::min(y1, b.y2_hi);
                return hi > b.y2_lo ? integrate(b.y2_lo, hi, [&](double y2) { return q(y1, y2); }) : 0.0;
            });
            cells.push_back(b);
        }
    }
    auto cell_index = [&](int i, int j) { return m == 1 ? i : i * (i + 1) / 2 + j; };
    for (auto& c : cells) c.expected *= double(n_paths);

    auto idx = run_paths<int>(n_paths, opt.threads, [&](long p) {
        int out = 0;
        stream_eigen(model, dt, steps, seed, p, [&](int k, const SmallVector& lam) {
            if (k == steps) {
                const int i = locate(std::max(lam(0), 0.0));
                out = m == 1 ? cell_index(i, 0) : cell_index(i, std::min(i, locate(std::max(lam(1), 0.0))));
            }
            return true;
        });
        return out;
    });
    for (int c : idx) ++cells[c].observed;

    // cells expected below 20 share one group; a small pool joins the smallest group
    constexpr double kMinExpected = 20.0;
    int groups = 0;
    const int pool = -1;
    for (auto& c : cells) c.group = c.expected >= kMinExpected ? groups++ : pool;
    double pooled = 0.0;
    for (const auto& c : cells)
        if (c.group == pool) pooled += c.expected;
    if (pooled > 0.0) {
        int target = groups;
        if (pooled < kMinExpected && groups > 0) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : cells)
                if (c.group != pool && c.expected < best) best = c.expected, target = c.group;
        } else {
            ++groups;
        }
        for (auto& c : cells)
            if (c.group == pool) c.group = target;
    }
    std::vector<double> obs(groups, 0.0), exp(groups, 0.0);
    for (const auto& c : cells) {
        obs[c.group] += double(c.observed);
        exp[c.group] += c.expected;
    }
    CompensatedSum<> chi;
    for (int g = 0; g < groups; ++g) chi.add((obs[g] - exp[g]) * (obs[g] - exp[g]) / exp[g]);
    const int df = groups - 1;
    if (df < 1) throw DomainError("check_eigen_density: too few paths for a chi-square test");

    McReport r;
    r.name = "eigen_density";
    r.estimate = chi.value();
    r.reference = df;
    r.se = std::sqrt(2.0 * df);
    r.z = (r.estimate - df) / r.se;
    r.paths = n_paths;
    r.seed = seed;
    r.threshold = 0.01;
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), r.estimate));
    r.pass = r.p_value > r.threshold;
    r.note = model.describe() + " " + tag("t", t) + " " + tag("dt", dt) + " chi-square df=" + std::to_string(df);
    flag_power(r);
    if (table) *table = cells;
    return r;
}

McReport check_girsanov(const LaguerreModel& base, double nu, double t, const HermitianMatrix& u, long n_paths,
                        uint64_t seed, const McOptions& opt) {
    if (base.delta != base.m) throw DomainError("check_girsanov needs a base model with delta = m");
    if (!(nu >= 0.0)) throw DomainError("check_girsanov needs nu >= 0");
    if (u.size() != base.m) throw DomainError("check_girsanov: u has the wrong size");
    if (!(base.x0.min_eigenvalue() > 0.0)) throw DomainError("check_girsanov needs a positive definite start");
    const double dt = resolve_dt(opt, t);
    const int steps = step_count(dt, t);
    const SmallCMatrix us = small_matrix(u);
    struct Sample {
        double value = 0.0, log_weight = 0.0;
    };
    auto s = run_paths<Sample>(n_paths, opt.threads, [&](long i) {
        BridgeTrapezoid bridge(seed, i);
        Eigen::MatrixXcd prev;
        GramPoint p_prev;
        double integral = 0.0, log_det0 = 0.0, f = 0.0, lw = 0.0;
        stream_gram(base, dt, steps, seed, i, [&](int k, const Eigen::MatrixXcd& b) {
            const GramPoint p = grid_point(b, k * dt);
            if (k == 0) log_det0 = p.log_det;
            else integral += bridge.step(prev, b, p_prev, p, (k - 1) * dt, dt);
            prev = b;
            p_prev = p;
            if (k == steps) {
                f = std::exp(-trace_product(us, gram_small(b)));
                lw = nu / 2 * (p.log_det - log_det0) - nu * nu / 2 * integral;
            }
            return true;
        });
        return Sample{std::exp(lw) * f, lw};
    });
    std::vector<double> v(s.size());
    // the weight is positive exactly when its logarithm is finite; tiny weights underflow
    double min_lw = std::numeric_limits<double>::infinity();
    bool finite = true;
    for (size_t i = 0; i < s.size(); ++i) {
        v[i] = s[i].value;
        min_lw = std::min(min_lw, s[i].log_weight);
        finite = finite && std::isfinite(s[i].log_weight);
    }
    const LaguerreModel target(base.m, base.m + nu, base.x0);
    McReport r = make_report("girsanov", mean_se(v), laplace_transform(target, t, u), n_paths, seed);
    r.note = target.describe() + " " + tag("t", t) + " " + tag("dt", dt) + " min log weight " + format_double(min_lw) +
             (finite ? "" : " (non-finite)") + (r.note.empty() ? "" : "; " + r.note);
    if (!finite) r.pass = false;
    return r;
}

std::vector<McReport> check_log_asymptotic(const LaguerreModel& model, const std::vector<double>& t_values,
                                           const std::vector<double>& thetas, long n_paths, uint64_t seed,
                                           const McOptions& opt) {
    if (model.delta != model.m) throw DomainError("check_log_asymptotic needs delta = m");
    if (t_values.empty()) throw DomainError("check_log_asymptotic needs at least one time");
    for (double t : t_values)
        if (!(t > 1.0)) throw DomainError("check_log_asymptotic needs times above 1");
    if (!(model.x0.min_eigenvalue() > 0.0)) throw DomainError("check_log_asymptotic needs a positive definite start");
    std::vector<double> ts = t_values;
    std::sort(ts.begin(), ts.end());
    const double dt = opt.dt > 0.0 ? opt.dt : 1e-3;

    std::vector<double> grid{0.0};
    const int n_unit = step_count(dt, 1.0);
    for (int k = 1; k <= n_unit; ++k) grid.push_back(k * dt);
    std::vector<size_t> marks;
    for (double t : ts) {
        while (grid.back() * 1.001 < t) grid.push_back(grid.back() * 1.001);
        grid.push_back(t);
        marks.push_back(grid.size() - 1);
    }

    const int m = model.m;
    const GramStepper st(model, dt);
    auto a = run_paths<std::vector<double>>(n_paths, opt.threads, [&](long i) {
        NormalStream rng(seed, i);
        std::vector<double> z(st.normals_per_step());
        Eigen::MatrixXcd b;
        st.reset(b);
        BridgeTrapezoid bridge(seed, i);
        Eigen::MatrixXcd prev = b;
        GramPoint p_prev = grid_point(b, 0.0);
        double integral = 0.0;
        std::vector<double> out;
        size_t mark = 0;
        for (size_t k = 1; k < grid.size(); ++k) {
            const double h = grid[k] - grid[k - 1];
            rng.fill(z.data(), static_cast<int>(z.size()));
            st.step(b, z.data(), h);
            const GramPoint p = grid_point(b, grid[k]);
            integral += bridge.step(prev, b, p_prev, p, grid[k - 1], h);
            prev = b;
            p_prev = p;
            if (mark < marks.size() && k == marks[mark]) {
                const double l = m * std::log(grid[k]);
                out.push_back(4.0 / (l * l) * integral);
                ++mark;
            }
        }
        return out;
    });
    std::vector<McReport> out;
    for (size_t j = 0; j < ts.size(); ++j)
        for (double theta : thetas) {
            std::vector<double> v(a.size());
            for (size_t i = 0; i < a.size(); ++i) v[i] = std::exp(-theta * a[i][j]);
            McReport r = make_report("log_asymptotic", mean_se(v), std::exp(-std::sqrt(2.0 * theta)), n_paths, seed, 4.0);
            r.gating = false;
            r.note = model.describe() + " " + tag("t", ts[j]) + " " + tag("theta", theta) + " " + tag("dt", dt) +
                     " stretch" + (r.note.empty() ? "" : "; " + r.note);
            out.push_back(r);
        }
    return out;
}

std::vector<McReport> check_martingale(const LaguerreModel& model, double t1, const HermitianMatrix& u,
                                       const std::vector<double>& times, long n_paths, uint64_t seed,
                                       const McOptions& opt) {
    if (u.size() != model.m) throw DomainError("check_martingale: u has the wrong size");
    const double dt = resolve_dt(opt, t1);
    const int steps = step_count(dt, t1);
    const int m = model.m;
    // g(r, x) = det(I + 2ru)^{-delta} exp(-tr(x (I + 2ru)^{-1} u))
    std::vector<int> at;
    std::vector<SmallCMatrix> kernel;
    std::vector<double> scale;
    for (double s : times) {
        if (!(s >= 0.0 && s <= t1)) throw DomainError("check_martingale: times must lie in [0, t1]");
        const double k = std::round(s / dt);
        if (std::abs(k * dt - s) > 1e-9 * std::max(1.0, t1)) throw DomainError("check_martingale: times must be multiples of dt");
        at.push_back(static_cast<int>(k));
        const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m) + 2.0 * (t1 - s) * u.matrix();
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        const Eigen::MatrixXcd c = lu.solve(u.matrix());
        SmallCMatrix cs(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) cs(i, j) = c(i, j);
        kernel.push_back(cs);
        scale.push_back(std::exp(-model.delta * std::log(lu.determinant().real())));
    }
    auto v = run_paths<std::vector<double>>(n_paths, opt.threads, [&](long i) {
        std::vector<double> out(at.size());
        stream_matrix(model, dt, steps, seed, i, [&](int k, const SmallCMatrix& x) {
            for (size_t j = 0; j < at.size(); ++j)
                if (at[j] == k) out[j] = scale[j] * std::exp(-trace_product(kernel[j], positive_part(x)));
            return true;
        });
        return out;
    });
    const double ref = laplace_transform(model, t1, u);
    std::vector<McReport> out;
    for (size_t j = 0; j < at.size(); ++j) {
        std::vector<double> col(v.size());
        for (size_t i = 0; i < v.size(); ++i) col[i] = v[i][j];
        McReport r = make_report("martingale", mean_se(col), ref, n_paths, seed);
        r.note = model.describe() + " " + tag("t1", t1) + " " + tag("s", times[j]) + " " + tag("dt", dt) +
                 (r.note.empty() ? "" : "; " + r.note);
        out.push_back(r);
    }
    return out;
}

McReport check_det_moment(const LaguerreModel& model, double t, double s, long n_paths, uint64_t seed,
                          const McOptions& opt) {
    const double ref = det_moment(model, t, s);
    const double dt = resolve_dt(opt, t);
    const int steps = step_count(dt, t);
    auto v = run_paths<double>(n_paths, opt.threads, [&](long i) {
        const SmallCMatrix x = terminal_matrix(model, dt, steps, seed, i);
        return std::pow(std::max(x.determinant().real(), 0.0), s);
    });
    McReport r = make_report("det_moment", mean_se(v), ref, n_paths, seed);
    r.note = model.describe() + " " + tag("t", t) + " " + tag("s", s) + " " + tag("dt", dt) +
             (r.note.empty() ? "" : "; " + r.note);
    return r;
}

std::string reports_to_json(const std::vector<McReport>& reports) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["name"] = r.name;
        j["estimate"] = r.estimate;
        j["se"] = r.se;
        j["reference"] = r.reference;
        j["z"] = r.z;
        j["paths"] = r.paths;
        j["seed"] = r.seed;
        j["threshold"] = r.threshold;
        if (std::isfinite(r.p_value)) j["p_value"] = r.p_value;
        j["pass"] = r.pass;
        j["gating"] = r.gating;
        j["note"] = r.note;
        a.push_back(j);
    }
    return a.dump(2) + "\n";
}

void write_density_csv(std::ostream& os, const std::vector<DensityBin>& table) {
    os << "group,y1_lo,y1_hi,y2_lo,y2_hi,observed,expected\n";
    for (const auto& b : table)
        os << b.group << ',' << format_double(b.y1_lo) << ',' << format_double(b.y1_hi) << ','
           << format_double(b.y2_lo) << ',' << format_double(b.y2_hi) << ',' << b.observed << ','
           << format_double(b.expected) << "\n";
}

}  // namespace laguerre
