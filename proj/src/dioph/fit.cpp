#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "diophex/dioph.hpp"
#include "diophex/errors.hpp"

namespace diophex::dioph {

namespace {

std::string fmt(double v, int digits = 6) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double log_quality(const BestApproxRecord& r) { return log(r.quality).to_double(); }

}  // namespace

ExponentEstimate fit_exponent(std::span<const BestApproxRecord> records, std::pair<double, double> window,
                              unsigned precision_bits) {
    ExponentEstimate e;
    e.window = window;
    e.precision_bits = precision_bits;
    std::vector<const BestApproxRecord*> used;
    for (const auto& r : records) {
        const auto nq = static_cast<double>(r.norm_q);
        if (nq >= window.first && nq <= window.second) used.push_back(&r);
    }
    e.records_used = used.size();
    // An exact relation settles the exponent however few records there are.
    if (std::any_of(used.begin(), used.end(), [](const auto* r) { return r->exact_zero; })) {
        e.infinite = true;
        e.beta_hat = std::numeric_limits<double>::infinity();
        return e;
    }
    if (used.size() < 5)
        throw DomainError("fit_exponent needs at least 5 records in the window, got " + std::to_string(used.size()));

    // (log ‖q‖, -log quality); for equal norms keep the best quality.
    std::vector<std::pair<double, double>> pts;
    for (const auto* r : used) pts.emplace_back(std::log(static_cast<double>(r->norm_q)), -log_quality(*r));
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> uniq;
    for (const auto& p : pts) {
        if (!uniq.empty() && uniq.back().first == p.first) {
            uniq.back().second = std::max(uniq.back().second, p.second);
        } else {
            uniq.push_back(p);
        }
    }

    // Upper hull, monotone chain.
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : uniq) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
            if (cross >= 0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    e.hull_points = hull.size();

    double slope = 0, icept = hull.front().second;
    if (hull.size() >= 2) {
        double mx = 0, my = 0;
        for (const auto& [x, y] : hull) {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(hull.size());
        my /= static_cast<double>(hull.size());
        double sxx = 0, sxy = 0;
        for (const auto& [x, y] : hull) {
            sxx += (x - mx) * (x - mx);
            sxy += (x - mx) * (y - my);
        }
        slope = sxy / sxx;
        icept = my - slope * mx;
    }
    double ss = 0;
    for (const auto& [x, y] : hull) ss += (y - icept - slope * x) * (y - icept - slope * x);
    e.residual = std::sqrt(ss / static_cast<double>(hull.size()));
    e.beta_hat = std::max(0.0, slope);
    return e;
}

DirichletReport dirichlet_from_records(const RealMatrix& M, std::uint64_t T,
                                       std::span<const BestApproxRecord> records, double tolerance) {
    DirichletReport d;
    d.m = M.m();
    d.n = M.n();
    d.floor = static_cast<double>(d.n) / static_cast<double>(d.m);
    d.tolerance = tolerance;
    d.pigeonhole_constant = M.norm_inf();
    if (!records.empty()) d.method = records.front().method;

    const auto sh = shells(T);
    std::vector<double> logD;
    double running = std::numeric_limits<double>::infinity();
    for (const auto& s : sh) {
        for (const auto& r : records)
            if (r.shell == s.j) {
                if (r.exact_zero) d.infinite = true;
                running = std::min(running, log_quality(r));
            }
        d.radius.push_back(s.hi);
        d.best.push_back(std::exp(running));
        logD.push_back(running);
    }
    if (d.infinite) {
        d.envelope_exponent = std::numeric_limits<double>::infinity();
        return d;
    }

    // Rigorous pigeonhole: some 0 < ‖q‖∞ ≤ X has ‖Mq‖∞ ≤ ‖M‖∞ X^{-n/m}.
    double sum = 0;
    for (std::size_t j = 0; j < sh.size(); ++j) {
        const double lx = std::log(static_cast<double>(d.radius[j]));
        if (logD[j] > std::log(d.pigeonhole_constant) - d.floor * lx + 1e-9) d.pigeonhole_ok = false;
        sum += logD[j] + d.floor * lx;
    }
    const double logC = sum / static_cast<double>(sh.size());
    d.fitted_constant = std::exp(logC);

    // Largest exponent β with D_j ≤ C X_j^{-β} over the upper half of the shells.
    double env = -std::numeric_limits<double>::infinity();
    for (std::size_t j = (sh.size() + 1) / 2; j < sh.size(); ++j) {
        const double lx = std::log(static_cast<double>(d.radius[j]));
        if (lx <= 0) continue;
        env = std::max(env, (logC - logD[j]) / lx);
    }
    d.envelope_exponent = std::isfinite(env) ? env : 0.0;
    d.floor_ok = d.envelope_exponent >= d.floor - tolerance;
    return d;
}

DirichletReport dirichlet_check(const RealMatrix& M, std::uint64_t T, Method method, double tolerance) {
    const auto recs = best_approx(M, T, method);
    return dirichlet_from_records(M, T, recs, tolerance);
}

Report records_report(std::span<const BestApproxRecord> records) {
    Report r;
    r.add("shells", records.size());
    for (const auto& rec : records) {
        std::string line = "q=" + format_q(rec.q) + " norm=" + std::to_string(rec.norm_q) +
                           " quality=" + (rec.exact_zero ? std::string("0") : rec.quality.to_string(12)) +
                           " method=" + to_string(rec.method);
        if (rec.exact_zero) line += " exact_zero";
        if (rec.floored) line += " below_precision";
        r.add("shell_" + std::to_string(rec.shell), line);
    }
    return r;
}

Report estimate_report(const ExponentEstimate& e, double floor, double tolerance) {
    Report r;
    r.add("beta_hat", e.infinite ? std::string("+inf (exact integer relation)") : fmt(e.beta_hat, 8));
    r.add("window", "[" + fmt(e.window.first, 12) + ", " + fmt(e.window.second, 12) + "]");
    r.add("records_used", e.records_used);
    r.add("hull_points", e.hull_points);
    r.add("residual", fmt(e.residual));
    r.add("precision_bits", e.precision_bits);
    r.add("dirichlet_floor", fmt(floor));
    r.add("floor_tolerance", fmt(tolerance));
    r.add("floor_ok", e.infinite || e.beta_hat >= floor - tolerance);
    return r;
}

Report dirichlet_text(const DirichletReport& d) {
    Report r;
    r.add("shape", std::to_string(d.m) + "x" + std::to_string(d.m + d.n));
    r.add("dirichlet_floor", fmt(d.floor));
    r.add("tolerance", fmt(d.tolerance));
    r.add("method", to_string(d.method));
    if (d.infinite) {
        r.add("envelope_exponent", "+inf (exact integer relation)");
        return r;
    }
    r.add("envelope_exponent", fmt(d.envelope_exponent, 8));
    r.add("fitted_constant", fmt(d.fitted_constant));
    r.add("pigeonhole_constant", fmt(d.pigeonhole_constant));
    r.add("pigeonhole_bound_holds", d.pigeonhole_ok);
    r.add("floor_ok", d.floor_ok);
    for (std::size_t j = 0; j < d.best.size(); ++j)
        r.add("best_within_" + std::to_string(d.radius[j]), fmt(d.best[j], 10));
    return r;
}

}  // namespace diophex::dioph
