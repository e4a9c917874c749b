#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "diophex/dioph.hpp"
#include "diophex/errors.hpp"
#include "diophex/lattice.hpp"

namespace diophex::dioph {

namespace {

using Dense = std::vector<std::vector<double>>;

// Inverse by Gauss–Jordan with partial pivoting; empty when singular.
Dense invert(Dense a) {
    const std::size_t n = a.size();
    Dense inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        if (a[p][c] == 0) return {};
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        const double d = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const double f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

double abs_det(Dense a) {
    const std::size_t n = a.size();
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        if (a[p][c] == 0) return 0;
        std::swap(a[p], a[c]);
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return std::fabs(det);
}

double inf_norm(const Dense& a) {
    double best = 0;
    for (const auto& row : a) {
        double s = 0;
        for (double x : row) s += std::fabs(x);
        best = std::max(best, s);
    }
    return best;
}

struct Pivot {
    std::vector<std::size_t> I, J;
    Dense P;         // x* = P·q_J solves M_I x + M_J q_J = 0
    double inv_norm; // ‖M_I^{-1}‖∞
};

Pivot choose_pivot(const Dense& Md, std::size_t m, std::size_t cols) {
    std::vector<std::size_t> best_I;
    double best = 0;
    std::vector<std::size_t> idx(m);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == m) {
            Dense sub(m, std::vector<double>(m));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < m; ++k) sub[i][k] = Md[i][idx[k]];
            const double d = abs_det(sub);
            if (d > best) {
                best = d;
                best_I = idx;
            }
            return;
        }
        for (std::size_t c = start; c < cols; ++c) {
            idx[pos] = c;
            rec(pos + 1, c + 1);
        }
    };
    rec(0, 0);
    if (best_I.empty()) throw DomainError("matrix must have full row rank");
    Pivot pv;
    pv.I = best_I;
    for (std::size_t c = 0; c < cols; ++c)
        if (std::find(best_I.begin(), best_I.end(), c) == best_I.end()) pv.J.push_back(c);
    Dense MI(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) MI[i][k] = Md[i][pv.I[k]];
    const Dense inv = invert(MI);
    if (inv.empty()) throw DomainError("matrix must have full row rank");
    pv.inv_norm = inf_norm(inv);
    pv.P.assign(m, std::vector<double>(pv.J.size(), 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < pv.J.size(); ++c) {
            double s = 0;
            for (std::size_t k = 0; k < m; ++k) s += inv[i][k] * Md[k][pv.J[c]];
            pv.P[i][c] = -s;
        }
    return pv;
}

Dense to_dense(const RealMatrix& M) {
    Dense d(M.m(), std::vector<double>(M.cols()));
    for (std::size_t i = 0; i < M.m(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) d[i][j] = M.to_double(i, j);
    return d;
}

// Visits every nonzero v ∈ [-X, X]^n whose first nonzero coordinate is positive.
template <class F>
void for_each_half_box(std::size_t n, long long X, F&& fn) {
    std::vector<long long> v(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(v.begin(), v.end(), 0);
        v[k] = 1;
        for (std::size_t t = k + 1; t < n; ++t) v[t] = -X;
        while (true) {
            fn(v);
            std::size_t t = n - 1;
            while (v[t] == X && t > k) --t;
            if (v[t] == X) break;
            ++v[t];
            for (std::size_t u = t + 1; u < n; ++u) v[u] = -X;
        }
    }
}

}  // namespace

std::vector<std::size_t> pivot_columns(const RealMatrix& M) {
    const Dense Md = to_dense(M);
    const std::size_t m = M.m();
    Dense lead(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) lead[i][k] = Md[i][k];
    if (abs_det(lead) > 1e-12 * std::pow(std::max(1.0, M.norm_inf()), static_cast<double>(m))) {
        std::vector<std::size_t> I(m);
        for (std::size_t k = 0; k < m; ++k) I[k] = k;
        return I;
    }
    return choose_pivot(Md, m, M.cols()).I;
}

double exhaustive_work(const RealMatrix& M, std::uint64_t T) {
    double work = 0;
    for (const auto& sh : shells(T)) work += std::pow(2.0 * static_cast<double>(sh.hi) + 1, static_cast<double>(M.n()));
    return work;
}

std::vector<BestApproxRecord> best_approx_exhaustive(const RealMatrix& M, std::uint64_t T, std::uint64_t budget) {
    const double work = exhaustive_work(M, T);
    if (work > static_cast<double>(budget))
        throw BudgetError("exhaustive search needs ~" + std::to_string(static_cast<long long>(work)) +
                          " steps, budget " + std::to_string(budget) + "; use --method lll");
    const std::size_t m = M.m(), n = M.n(), cols = M.cols();
    const Dense Md = to_dense(M);
    const Pivot pv = choose_pivot(Md, m, cols);
    const double normM = M.norm_inf();
    const double Pnorm = inf_norm(pv.P);

    std::vector<BestApproxRecord> out;
    for (const auto& sh : shells(T)) {
        const long long X = sh.hi, Xprev = sh.lo;
        const double err = static_cast<double>(m + n + 3) * 0x1p-52 * normM * static_cast<double>(X);
        const double slack = 1e-12 * (1 + Pnorm * static_cast<double>(X)) + 1e-9;
        std::vector<long long> q(cols, 0);

        auto quality_d = [&]() {
            double best = 0;
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0;
                for (std::size_t c = 0; c < cols; ++c) s += Md[i][c] * static_cast<double>(q[c]);
                best = std::max(best, std::fabs(s));
            }
            return best;
        };
        auto in_shell = [&](long long maxJ) {
            long long mx = maxJ;
            for (std::size_t k = 0; k < m; ++k) mx = std::max(mx, std::llabs(q[pv.I[k]]));
            return mx > Xprev && mx <= X;
        };
        auto set_J = [&](const std::vector<long long>& qJ) {
            long long mx = 0;
            for (std::size_t c = 0; c < n; ++c) {
                q[pv.J[c]] = qJ[c];
                mx = std::max(mx, std::llabs(qJ[c]));
            }
            return mx;
        };
        std::vector<double> xs(m);
        auto solve = [&](const std::vector<long long>& qJ) {
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0;
                for (std::size_t c = 0; c < n; ++c) s += pv.P[i][c] * static_cast<double>(qJ[c]);
                xs[i] = s;
            }
        };

        // Pass 1: a cheap upper bound Q on the shell minimum from rounding.
        std::fill(q.begin(), q.end(), 0);
        q[pv.I[0]] = X;
        double Q = quality_d();
        auto pass1 = [&](const std::vector<long long>& qJ) {
            const long long mj = set_J(qJ);
            solve(qJ);
            for (std::size_t k = 0; k < m; ++k) {
                const double r = std::nearbyint(xs[k]);
                if (std::fabs(r) > static_cast<double>(X)) return;
                q[pv.I[k]] = static_cast<long long>(r);
            }
            if (in_shell(mj)) Q = std::min(Q, quality_d());
        };
        for_each_half_box(n, X, pass1);

        // Pass 2: every q_I within reach of x*, screening in double and
        // refining near-ties exactly (or at working precision).
        double best_d = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, std::vector<long long>>> pending;
        std::optional<BestApproxRecord> best;
        auto collapse = [&]() {
            for (auto& [qd, cand] : pending) {
                if (qd > best_d + 2 * err) continue;
                BestApproxRecord r = make_record(M, cand, Method::exhaustive, sh.j);
                if (!best || record_better(r, *best)) best = std::move(r);
            }
            pending.clear();
        };
        std::vector<long long> lo(m), hi(m);
        auto scan = [&](long long mj) {
            const double radius = pv.inv_norm * (std::min(Q, best_d) + 2 * err) + slack;
            for (std::size_t k = 0; k < m; ++k) {
                lo[k] = std::max<long long>(-X, static_cast<long long>(std::ceil(xs[k] - radius)));
                hi[k] = std::min<long long>(X, static_cast<long long>(std::floor(xs[k] + radius)));
                if (lo[k] > hi[k]) return;
                q[pv.I[k]] = lo[k];
            }
            while (true) {
                if (in_shell(mj)) {
                    const double qd = quality_d();
                    if (qd <= best_d + 2 * err) {
                        if (qd < best_d) {
                            best_d = qd;
                            std::erase_if(pending, [&](const auto& p) { return p.first > best_d + 2 * err; });
                        }
                        pending.emplace_back(qd, q);
                        if (pending.size() > 512) collapse();
                    }
                }
                std::size_t k = m;
                while (k > 0) {
                    --k;
                    if (q[pv.I[k]] < hi[k]) {
                        ++q[pv.I[k]];
                        for (std::size_t u = k + 1; u < m; ++u) q[pv.I[u]] = lo[u];
                        break;
                    }
                    if (k == 0) return;
                }
            }
        };
        for_each_half_box(n, X, [&](const std::vector<long long>& qJ) {
            const long long mj = set_J(qJ);
            solve(qJ);
            scan(mj);
        });
        {
            // q_J = 0: only q_I, sign fixed by its first nonzero coordinate.
            const std::vector<long long> zero(n, 0);
            set_J(zero);
            std::fill(xs.begin(), xs.end(), 0.0);
            scan(0);
        }
        collapse();
        if (best) out.push_back(std::move(*best));
    }
    return out;
}

std::vector<BestApproxRecord> best_approx_lll(const RealMatrix& M, std::uint64_t T) {
    const std::size_t m = M.m(), n = M.n(), cols = M.cols();
    const unsigned prec = std::max(M.precision(), kDefaultPrecision);
    const long double R2 = static_cast<long double>(2 * m + n) * (1 + 1e-6L);
    std::vector<BestApproxRecord> out;
    for (const auto& sh : shells(T)) {
        const Real invX = Real::from_double(1.0, prec) / Real::from_integer(Integer(static_cast<long>(sh.hi)), prec);
        long e = -static_cast<long>(sh.j * n / m) - 2;
        std::optional<BestApproxRecord> best;
        for (int attempt = 0; attempt < 400 && !best; ++attempt, e += 2) {
            const Real Q = ldexp(Real::from_double(1.0, prec), e);
            lattice::Basis basis(cols, std::vector<Real>(m + cols, Real(prec)));
            for (std::size_t k = 0; k < cols; ++k) {
                for (std::size_t i = 0; i < m; ++i) basis[k][i] = M(i, k).with_precision(prec) / Q;
                basis[k][m + k] = invX;
            }
            const auto red = lattice::lll_reduce(basis, 0.99, prec);
            const auto pts = lattice::enumerate_ball(red.basis, R2, 20'000'000);
            for (const auto& z : pts) {
                std::vector<long long> q(cols, 0);
                long long mx = 0;
                bool ok = true;
                for (std::size_t k = 0; k < cols && ok; ++k) {
                    Integer s = 0;
                    for (std::size_t i = 0; i < cols; ++i) s += Integer(static_cast<long>(z[i])) * red.transform[i][k];
                    if (!s.fits_slong_p()) {
                        ok = false;
                        break;
                    }
                    q[k] = s.get_si();
                    mx = std::max(mx, std::llabs(q[k]));
                }
                if (!ok || mx <= sh.lo || mx > sh.hi) continue;
                BestApproxRecord r = make_record(M, std::move(q), Method::lll, sh.j);
                if (r.quality > Q) continue;
                if (!best || record_better(r, *best)) best = std::move(r);
            }
        }
        if (!best) throw BudgetError("lattice search found no vector in shell " + std::to_string(sh.j));
        out.push_back(std::move(*best));
    }
    return out;
}

std::vector<BestApproxRecord> best_approx(const RealMatrix& M, std::uint64_t T, Method method) {
    if (method == Method::automatic)
        method = exhaustive_work(M, T) <= kAutoExhaustiveLimit ? Method::exhaustive : Method::lll;
    return method == Method::exhaustive ? best_approx_exhaustive(M, T) : best_approx_lll(M, T);
}

}  // namespace diophex::dioph
