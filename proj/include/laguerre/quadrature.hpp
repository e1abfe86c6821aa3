#pragma once

// Fixed-order Gauss-Legendre panels and compensated summation.

#include <cmath>
#include <complex>
#include <vector>

namespace laguerre {

// Neumaier's variant of Kahan summation.
template <class T = double>
class CompensatedSum {
public:
    void add(T x) {
        T s = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - s) + x : (x - s) + sum_;
        sum_ = s;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{}, comp_{};
};

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};

// Supported orders: 8, 12, 16, 20, 32.
const GaussRule& gauss_rule(int n);

template <class F>
auto gauss_panel(const GaussRule& g, double a, double b, F&& f) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    decltype(f(a)) s{};
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
    return s * h;
}

}  // namespace laguerre
