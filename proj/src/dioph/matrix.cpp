#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "diophex/dioph.hpp"
#include "diophex/errors.hpp"

namespace diophex::dioph {

namespace {

struct Value {
    Real r;
    std::optional<Rational> q;
};

class ExprParser {
public:
    ExprParser(std::string_view s, unsigned prec) : s_(s), prec_(prec) {}

    Value run() {
        Value v = expr();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("bad matrix entry '" + std::string(s_) + "': " + what);
    }
    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    Value exact(const Rational& q) const { return {Real::from_rational(q, prec_), q}; }

    Value expr() {
        Value v = term();
        while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            const char op = s_[pos_++];
            Value w = term();
            if (v.q && w.q) {
                v = exact(op == '+' ? Rational(*v.q + *w.q) : Rational(*v.q - *w.q));
            } else {
                v = {op == '+' ? v.r + w.r : v.r - w.r, std::nullopt};
            }
        }
        return v;
    }

    Value term() {
        Value v = factor();
        while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
            const char op = s_[pos_++];
            Value w = factor();
            if (op == '/' && w.r.is_zero()) fail("division by zero");
            if (v.q && w.q) {
                v = exact(op == '*' ? Rational(*v.q * *w.q) : Rational(*v.q / *w.q));
            } else {
                v = {op == '*' ? v.r * w.r : v.r / w.r, std::nullopt};
            }
        }
        return v;
    }

    Value factor() {
        if (eat('-')) {
            Value v = factor();
            if (v.q) return exact(-*v.q);
            return {-v.r, std::nullopt};
        }
        if (eat('+')) return factor();
        return primary();
    }

    Value primary() {
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            Value v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Value number() {
        std::string digits;
        long frac = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
        if (eat('.')) {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits += s_[pos_++];
                ++frac;
            }
        }
        if (digits.empty()) fail("malformed number");
        long e10 = 0;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
            (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+')) {
            ++pos_;
            bool neg = false;
            if (s_[pos_] == '-' || s_[pos_] == '+') neg = s_[pos_++] == '-';
            std::string ed;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ed += s_[pos_++];
            if (ed.empty() || ed.size() > 4) fail("malformed exponent");
            e10 = std::stol(ed) * (neg ? -1 : 1);
        }
        const long shift = e10 - frac;
        if (shift > 1000 || shift < -1000) fail("exponent out of range");
        Integer num(digits), scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
        return exact(shift >= 0 ? Rational(num * scale) : exactlin::ratio(num, scale));
    }

    Value identifier() {
        std::string name;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) name += s_[pos_++];
        const Real one = Real::from_double(1.0, prec_);
        if (name == "pi") return {Real::pi(prec_), std::nullopt};
        if (name == "e") return {exp(one), std::nullopt};
        if (name == "phi") return {(one + sqrt(Real::from_double(5.0, prec_))) / Real::from_double(2.0, prec_), std::nullopt};
        if (!eat('(')) fail("unknown name '" + name + "'");
        Value arg = expr();
        if (!eat(')')) fail("missing ')'");
        if (name == "sqrt") {
            if (arg.r.sign() < 0) fail("sqrt of a negative number");
            return {sqrt(arg.r), std::nullopt};
        }
        if (name == "cbrt") return {cbrt(arg.r), std::nullopt};
        if (name == "exp") return {exp(arg.r), std::nullopt};
        if (name == "log") {
            if (arg.r.sign() <= 0) fail("log of a non-positive number");
            return {log(arg.r), std::nullopt};
        }
        fail("unknown function '" + name + "'");
    }

    std::string_view s_;
    unsigned prec_;
    std::size_t pos_ = 0;
};

unsigned checked_precision(unsigned p) {
    if (p < 64) throw DomainError("working precision must be at least 64 bits");
    return p;
}

}  // namespace

Real evaluate_expression(std::string_view token, unsigned precision, std::optional<Rational>* exact) {
    Value v = ExprParser(token, precision).run();
    if (!v.r.is_finite()) throw ParseError("matrix entry '" + std::string(token) + "' is not finite");
    if (exact) *exact = v.q;
    return v.r;
}

RealMatrix::RealMatrix(std::size_t m, std::size_t cols, unsigned precision)
    : m_(m), cols_(cols), precision_(checked_precision(precision)) {
    if (m == 0 || cols <= m)
        throw DimensionError("need an m x (m+n) matrix with m >= 1, n >= 1; got " + std::to_string(m) + "x" +
                             std::to_string(cols));
}

RealMatrix RealMatrix::from_rational(const RationalMatrix& a, unsigned precision) {
    RealMatrix M(a.rows(), a.cols(), precision);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            M.entries_.push_back(Real::from_rational(a(i, j), precision));
            M.tokens_.push_back(a(i, j).get_str());
        }
    M.exact_ = a;
    return M;
}

RealMatrix RealMatrix::from_doubles(std::size_t rows, std::size_t cols, std::span<const double> values,
                                    unsigned precision) {
    RealMatrix M(rows, cols, precision);
    if (values.size() != rows * cols) throw DimensionError("from_doubles: value count does not match shape");
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
        M.entries_.push_back(Real::from_double(v, precision));
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        M.tokens_.emplace_back(buf);
    }
    return M;
}

RealMatrix RealMatrix::parse(std::string_view text, unsigned precision) {
    checked_precision(precision);
    std::vector<std::vector<std::string>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> row;
        std::string tok;
        while (ls >> tok) row.push_back(tok);
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row " + std::to_string(rows.size() + 1) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix text contains no rows");
    if (rows.front().size() <= rows.size())
        throw ParseError("matrix must have more columns than rows (m x (m+n), n >= 1)");
    RealMatrix M(rows.size(), rows.front().size(), precision);
    RationalMatrix exact(M.m_, M.cols_);
    bool all_exact = true;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            std::optional<Rational> q;
            M.entries_.push_back(evaluate_expression(rows[i][j], precision, &q));
            M.tokens_.push_back(rows[i][j]);
            if (q) {
                exact(i, j) = *q;
            } else {
                all_exact = false;
            }
        }
    if (all_exact) M.exact_ = std::move(exact);
    return M;
}

std::string RealMatrix::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    feed(std::to_string(m_) + "x" + std::to_string(cols_));
    for (const auto& t : tokens_) feed(t);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double RealMatrix::norm_inf() const {
    double best = 0;
    for (std::size_t i = 0; i < m_; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::fabs(to_double(i, j));
        best = std::max(best, s);
    }
    return best;
}

std::string to_string(Method m) {
    switch (m) {
        case Method::exhaustive: return "exhaustive";
        case Method::lll: return "lll";
        case Method::automatic: return "auto";
    }
    return "?";
}

Method parse_method(std::string_view s) {
    if (s == "exhaustive") return Method::exhaustive;
    if (s == "lll") return Method::lll;
    if (s == "auto") return Method::automatic;
    throw ParseError("unknown method '" + std::string(s) + "' (exhaustive, lll, auto)");
}

std::vector<Shell> shells(std::uint64_t T) {
    if (T < 1) throw DomainError("max norm T must be >= 1");
    if (T > (1ULL << 40)) throw BudgetError("max norm T above 2^40 is not supported");
    std::vector<Shell> out;
    for (unsigned j = 0;; ++j) {
        const long long hi = std::min<long long>(1LL << j, static_cast<long long>(T));
        const long long lo = j == 0 ? 0 : (1LL << (j - 1));
        out.push_back({j, lo, hi});
        if (hi == static_cast<long long>(T)) break;
    }
    return out;
}

BestApproxRecord make_record(const RealMatrix& M, std::vector<long long> q, Method method, unsigned shell) {
    for (long long v : q) {
        if (v == 0) continue;
        if (v < 0)
            for (auto& x : q) x = -x;
        break;
    }
    BestApproxRecord r;
    r.method = method;
    r.shell = shell;
    for (long long v : q) r.norm_q = std::max(r.norm_q, v < 0 ? -v : v);
    if (r.norm_q == 0) throw DomainError("best-approximation vector must be nonzero");
    const unsigned p = M.precision();
    if (M.exact()) {
        const auto& A = *M.exact();
        Rational best = 0;
        for (std::size_t i = 0; i < A.rows(); ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < A.cols(); ++j)
                if (q[j] != 0) s += A(i, j) * Rational(static_cast<long>(q[j]));
            if (abs(s) > best) best = abs(s);
        }
        r.quality = Real::from_rational(best, p);
        r.exact_zero = sgn(best) == 0;
    } else {
        Real best(p);
        for (std::size_t i = 0; i < M.m(); ++i) {
            Real s(p);
            for (std::size_t j = 0; j < M.cols(); ++j)
                if (q[j] != 0) s += mul_integer(M(i, j), Integer(static_cast<long>(q[j])));
            const Real a = abs(s);
            if (a > best) best = a;
        }
        // Below this, rounding of the stored entries could account for all of it.
        const Real floor = ldexp(Real::from_double(M.norm_inf() * static_cast<double>(r.norm_q), p),
                                 -static_cast<long>(p) + 4);
        if (best < floor) {
            best = floor;
            r.floored = true;
        }
        r.quality = best;
    }
    r.q = std::move(q);
    return r;
}

bool record_better(const BestApproxRecord& a, const BestApproxRecord& b) {
    if (a.quality < b.quality) return true;
    if (b.quality < a.quality) return false;
    if (a.norm_q != b.norm_q) return a.norm_q < b.norm_q;
    return a.q < b.q;
}

std::vector<BestApproxRecord> improving(std::span<const BestApproxRecord> records) {
    std::vector<const BestApproxRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->norm_q < b->norm_q; });
    std::vector<BestApproxRecord> out;
    for (const auto* r : sorted)
        if (out.empty() || r->quality < out.back().quality) out.push_back(*r);
    return out;
}

std::string format_q(std::span<const long long> q) {
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
    return s + ")";
}

std::string format_q(std::span<const Integer> q) {
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + q[i].get_str();
    return s + ")";
}

}  // namespace diophex::dioph
