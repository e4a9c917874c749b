#include <cmath>
#include <unordered_set>

#include "diophex/errors.hpp"
#include "diophex/nilexp.hpp"

namespace diophex::nilexp {

namespace {

// Unitriangular d×d matrices are stored by their strictly upper entries,
// row by row.
struct Layout {
    std::size_t d;
    std::size_t at(std::size_t i, std::size_t j) const { return i * d - i * (i + 1) / 2 + (j - i - 1); }
    std::size_t size() const { return d * (d - 1) / 2; }
};

struct IntOps {
    using T = std::int64_t;
    static T mul(T a, T b) {
        T r;
        if (__builtin_mul_overflow(a, b, &r)) throw DomainError("ball enumeration: integer entry overflow");
        return r;
    }
    static T add(T a, T b) {
        T r;
        if (__builtin_add_overflow(a, b, &r)) throw DomainError("ball enumeration: integer entry overflow");
        return r;
    }
    static Rational to_rational(T a) { return Rational(static_cast<long>(a)); }
    static std::size_t hash(T a) { return std::hash<T>{}(a); }
};

struct RatOps {
    using T = Rational;
    static T mul(const T& a, const T& b) { return a * b; }
    static T add(const T& a, const T& b) { return a + b; }
    static Rational to_rational(const T& a) { return a; }
    static std::size_t hash(const T& a) {
        return mpz_get_ui(a.get_num_mpz_t()) * 31 + mpz_get_ui(a.get_den_mpz_t()) + static_cast<std::size_t>(sgn(a) + 1);
    }
};

template <class Ops>
struct ElemHash {
    std::size_t operator()(const std::vector<typename Ops::T>& v) const {
        std::size_t h = v.size();
        for (const auto& x : v) h ^= Ops::hash(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

template <class Ops>
std::vector<BallLevel> enumerate_balls(const Layout& lay, const std::vector<std::vector<typename Ops::T>>& steps,
                                       std::size_t n_max, std::uint64_t budget) {
    using Elem = std::vector<typename Ops::T>;
    const std::size_t d = lay.d;
    auto multiply = [&](const Elem& a, const Elem& b) {
        Elem c(lay.size());
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                auto v = Ops::add(a[lay.at(i, j)], b[lay.at(i, j)]);
                for (std::size_t l = i + 1; l < j; ++l) v = Ops::add(v, Ops::mul(a[lay.at(i, l)], b[lay.at(l, j)]));
                c[lay.at(i, j)] = v;
            }
        return c;
    };
    auto distance = [&](const Elem& a) {
        Rational best = 0;
        for (const auto& x : a) {
            const Rational ax = abs(Ops::to_rational(x));
            if (ax > best) best = ax;
        }
        return best;
    };

    std::unordered_set<Elem, ElemHash<Ops>> all;
    const Elem identity(lay.size());
    all.insert(identity);
    std::vector<Elem> frontier{identity};
    std::vector<BallLevel> levels;
    levels.push_back({0, 1, std::nullopt, true});
    std::optional<Rational> min_d;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<Elem> next;
        for (const auto& f : frontier)
            for (const auto& s : steps) {
                Elem p = multiply(f, s);
                if (!all.insert(p).second) continue;
                const Rational dist = distance(p);
                if (!min_d || dist < *min_d) min_d = dist;
                next.push_back(std::move(p));
                if (all.size() > budget)
                    throw BudgetError("ball enumeration: |S^" + std::to_string(n) + "| exceeds budget " +
                                      std::to_string(budget));
            }
        frontier = std::move(next);
        levels.push_back({n, all.size(), min_d, false});
    }
    return levels;
}

RationalMatrix unitriangular_inverse(const RationalMatrix& g) {
    const std::size_t d = g.rows();
    RationalMatrix N = g;
    for (std::size_t i = 0; i < d; ++i) N(i, i) = 0;
    // (I + N)^{-1} = Σ (-N)^j.
    RationalMatrix out = RationalMatrix::identity(d), power = RationalMatrix::identity(d);
    for (std::size_t j = 1; j < d; ++j) {
        power = power * N;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) out(a, b) += (j % 2 ? -1 : 1) * power(a, b);
    }
    return out;
}

}  // namespace

std::vector<RationalMatrix> integral_heisenberg_generators() {
    RationalMatrix a = RationalMatrix::identity(3), b = RationalMatrix::identity(3);
    a(0, 1) = 1;
    b(1, 2) = 1;
    return {a, b};
}

std::vector<RationalMatrix> parse_generators(std::string_view text) {
    std::vector<RationalMatrix> out;
    std::string block;
    auto flush = [&] {
        if (block.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(exactlin::parse_matrix(block));
        block.clear();
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        const auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        const bool comment = line.find_first_not_of(" \t\r") != std::string_view::npos &&
                             line[line.find_first_not_of(" \t\r")] == '#';
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            flush();
        else if (!comment)
            block += std::string(line) + "\n";
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    flush();
    if (out.empty()) throw ParseError("generator file contains no matrices");
    return out;
}

BallReport group_ball_check(const GroupSpec& g, const std::vector<RationalMatrix>& generators, std::size_t n_max,
                            double beta, std::uint64_t budget) {
    if (generators.empty()) throw DomainError("ball check needs at least one generator");
    if (2 * generators.size() + 1 > 7)
        throw ScaleError("ball check: |S| = " + std::to_string(2 * generators.size() + 1) + " exceeds 7");
    const std::size_t d = generators.front().rows();
    if (d < 2) throw DimensionError("ball check: generators must be at least 2x2");
    bool integral = true;
    for (const auto& s : generators) {
        if (s.rows() != d || s.cols() != d) throw DimensionError("ball check: generators must be square of equal size");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                if (i == j && s(i, j) != 1) throw DomainError("ball check: generators must be unitriangular");
                if (i > j && s(i, j) != 0) throw DomainError("ball check: generators must be upper triangular");
                if (s(i, j).get_den() != 1 || !s(i, j).get_num().fits_slong_p()) integral = false;
            }
    }
    std::vector<RationalMatrix> steps;
    for (const auto& s : generators) {
        steps.push_back(s);
        steps.push_back(unitriangular_inverse(s));
    }

    const Layout lay{d};
    std::vector<BallLevel> levels;
    if (integral) {
        std::vector<std::vector<std::int64_t>> st;
        for (const auto& s : steps) {
            std::vector<std::int64_t> e(lay.size());
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) e[lay.at(i, j)] = s(i, j).get_num().get_si();
            st.push_back(e);
        }
        levels = enumerate_balls<IntOps>(lay, st, n_max, budget);
    } else {
        std::vector<std::vector<Rational>> st;
        for (const auto& s : steps) {
            std::vector<Rational> e(lay.size());
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) e[lay.at(i, j)] = s(i, j);
            st.push_back(e);
        }
        levels = enumerate_balls<RatOps>(lay, st, n_max, budget);
    }

    BallReport r;
    r.beta = beta;
    r.all_diophantine = true;
    for (auto& lv : levels) {
        // inf d(1, γ) > |S^n|^{-β}, compared in logs.
        lv.diophantine = !lv.min_distance ||
                         std::log(lv.min_distance->get_d()) > -beta * std::log(static_cast<double>(lv.size));
        r.all_diophantine = r.all_diophantine && lv.diophantine;
    }
    r.levels = std::move(levels);

    // Least-squares slope of log |S^n| against log n on the upper half.
    const std::size_t lo = std::max<std::size_t>(1, (n_max + 1) / 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t n = lo; n <= n_max; ++n) {
        const double x = std::log(static_cast<double>(n)), y = std::log(static_cast<double>(r.levels[n].size));
        sx += x, sy += y, sxx += x * x, sxy += x * y, cnt += 1;
    }
    const double den = cnt * sxx - sx * sx;
    r.growth_exponent = den > 0 ? (cnt * sxy - sx * sy) / den : 0.0;
    r.bass_guivarch = freelie::bass_guivarch(freelie::build_algebra(g.tag(), static_cast<unsigned>(generators.size())));
    return r;
}

Report ball_report(const BallReport& r) {
    Report rep;
    rep.add("distance", "sup-norm of gamma - I")
        .add("beta", r.beta)
        .add("n_max", r.levels.empty() ? 0 : r.levels.back().n);
    for (const auto& lv : r.levels) {
        if (lv.n == 0) continue;
        rep.add("level_" + std::to_string(lv.n),
                "size=" + std::to_string(lv.size) +
                    " inf_dist=" + (lv.min_distance ? lv.min_distance->get_str() : std::string("none")) +
                    " diophantine=" + (lv.diophantine ? "true" : "false"));
    }
    rep.add("growth_exponent", r.growth_exponent)
        .add("bass_guivarch", r.bass_guivarch)
        .add("growth_relative_error",
             r.bass_guivarch ? std::abs(r.growth_exponent - double(r.bass_guivarch)) / double(r.bass_guivarch) : 0.0)
        .add("beta_diophantine", r.all_diophantine);
    return rep;
}

}  // namespace diophex::nilexp
