#include <cmath>
#include <cstdio>

#include "diophex/dioph.hpp"
#include "diophex/errors.hpp"
#include "diophex/lattice.hpp"

namespace diophex::dioph {

FlowPoint flow_shortest(const RealMatrix& M, double t) {
    if (!(t >= 0) || !std::isfinite(t)) throw DomainError("flow time must be finite and >= 0");
    const std::size_t m = M.m(), n = M.n(), cols = M.cols();
    const auto I = pivot_columns(M);
    std::vector<std::size_t> J;
    for (std::size_t c = 0; c < cols; ++c)
        if (std::find(I.begin(), I.end(), c) == I.end()) J.push_back(c);

    // e^{t/m} stretches the Mq block; keep enough bits to see the q_J block.
    const double extra = t * (1.0 / static_cast<double>(m) + 1.0 / static_cast<double>(n)) / std::log(2.0);
    const unsigned prec = M.precision() + 32 * static_cast<unsigned>(std::ceil(extra / 32.0));
    const Real tt = Real::from_double(t, prec);
    const Real up = exp(tt / Real::from_double(static_cast<double>(m), prec));
    const Real down = exp(-tt / Real::from_double(static_cast<double>(n), prec));

    lattice::Basis basis(cols, std::vector<Real>(cols, Real(prec)));
    for (std::size_t k = 0; k < cols; ++k)
        for (std::size_t i = 0; i < m; ++i) basis[k][i] = M(i, k).with_precision(prec) * up;
    for (std::size_t c = 0; c < n; ++c) basis[J[c]][m + c] = down;

    const auto sv = lattice::shortest_vector(basis, prec);
    FlowPoint p;
    p.t = t;
    p.systole = sv.length;
    p.q = sv.coefficients;
    for (const auto& v : p.q) {
        if (sgn(v) == 0) continue;
        if (sgn(v) < 0)
            for (auto& x : p.q) x = -x;
        break;
    }
    p.precision = sv.precision;
    return p;
}

std::vector<FlowPoint> flow_trace(const RealMatrix& M, double t_max, double t_min) {
    if (!(t_min > 0) || !(t_max >= 0)) throw DomainError("flow grid needs t_min > 0 and t_max >= 0");
    std::vector<FlowPoint> out{flow_shortest(M, 0.0)};
    for (double t = t_min; t <= t_max * (1 + 1e-12); t *= 2) out.push_back(flow_shortest(M, t));
    return out;
}

std::string flow_csv(std::span<const FlowPoint> trace) {
    std::string out = "t,log_systole,witness_vector\n";
    char buf[64];
    for (const auto& p : trace) {
        std::snprintf(buf, sizeof buf, "%.6g,%.12g,", p.t, log(p.systole).to_double());
        out += buf;
        std::string w = "[";
        for (std::size_t i = 0; i < p.q.size(); ++i) w += (i ? " " : "") + p.q[i].get_str();
        out += w + "]\n";
    }
    return out;
}

}  // namespace diophex::dioph
