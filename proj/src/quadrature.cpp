#include "laguerre/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "laguerre/errors.hpp"

namespace laguerre {

namespace {

template <unsigned N>
GaussRule make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& xa = G::abscissa();
    const auto& wa = G::weights();
    GaussRule r;
    for (size_t i = 0; i < xa.size(); ++i) {
        r.x.push_back(xa[i]);
        r.w.push_back(wa[i]);
        if (xa[i] != 0.0) {
            r.x.push_back(-xa[i]);
            r.w.push_back(wa[i]);
        }
    }
    return r;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    static const GaussRule r8 = make_rule<8>(), r12 = make_rule<12>(), r16 = make_rule<16>(),
                           r20 = make_rule<20>(), r32 = make_rule<32>();
    switch (n) {
        case 8: return r8;
        case 12: return r12;
        case 16: return r16;
        case 20: return r20;
        case 32: return r32;
        default: throw DomainError("unsupported Gauss-Legendre order " + std::to_string(n));
    }
}

}  // namespace laguerre
