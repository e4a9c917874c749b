#include "diophex/exactlin.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "diophex/errors.hpp"

namespace diophex::exactlin {

std::string ExtRational::to_string() const {
    return infinite_ ? std::string("inf") : value_.get_str();
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows) {
    if (rows.empty()) return {};
    RationalMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw DimensionError("ragged rows in matrix");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalVector RationalMatrix::column(std::size_t j) const {
    RationalVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RationalVector RationalMatrix::apply(std::span<const Rational> v) const {
    if (v.size() != cols_) throw DimensionError("matrix-vector size mismatch");
    RationalVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < cols_; ++j)
            if (sgn(v[j]) != 0 && sgn((*this)(i, j)) != 0) acc += (*this)(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

bool RationalMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product size mismatch");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t l = 0; l < a.cols_; ++l) {
            const Rational& x = a(i, l);
            if (sgn(x) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (sgn(b(l, j)) != 0) c(i, j) += x * b(l, j);
        }
    return c;
}

namespace {

using IntegerRows = std::vector<std::vector<Integer>>;

// Clears denominators row by row; row scaling leaves the row space intact.
IntegerRows integer_rows(const RationalMatrix& m) {
    IntegerRows out(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer l = 1;
        for (const Rational& x : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Rational& x = m(i, j);
            out[i][j] = x.get_num() * (l / x.get_den());
        }
    }
    return out;
}

// Fraction-free (Bareiss) forward elimination in place. Returns the pivot
// columns; rows [0, pivots.size()) hold an integer echelon form.
std::vector<std::size_t> bareiss_echelon(IntegerRows& a, std::size_t cols, int* sign = nullptr) {
    std::vector<std::size_t> pivots;
    Integer prev = 1;
    std::size_t r = 0;
    int s = 1;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && sgn(a[p][c]) == 0) ++p;
        if (p == a.size()) continue;
        if (p != r) {
            std::swap(a[p], a[r]);
            s = -s;
        }
        const Integer& piv = a[r][c];
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            const Integer lead = a[i][c];
            for (std::size_t j = c + 1; j < cols; ++j) {
                a[i][j] = piv * a[i][j] - lead * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = piv;
        pivots.push_back(c);
        ++r;
    }
    if (sign != nullptr) *sign = s;
    return pivots;
}

}  // namespace

RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots_out) {
    IntegerRows a = integer_rows(m);
    const std::vector<std::size_t> pivots = bareiss_echelon(a, m.cols());
    const std::size_t r = pivots.size();
    RationalMatrix out(r, m.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = Rational(a[i][j], a[i][pivots[i]]);
            out(i, j).canonicalize();
        }
    // Back substitution to clear entries above pivots.
    for (std::size_t i = r; i-- > 0;) {
        const std::size_t pc = pivots[i];
        for (std::size_t k = 0; k < i; ++k) {
            const Rational f = out(k, pc);
            if (sgn(f) == 0) continue;
            for (std::size_t j = pc; j < m.cols(); ++j)
                if (sgn(out(i, j)) != 0) out(k, j) -= f * out(i, j);
        }
    }
    if (pivots_out != nullptr) *pivots_out = pivots;
    return out;
}

std::size_t rank(const RationalMatrix& m) {
    IntegerRows a = integer_rows(m);
    return bareiss_echelon(a, m.cols()).size();
}

Rational determinant(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    // Clear denominators row-wise, remember the scaling.
    Rational scale = 1;
    IntegerRows a(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Integer l = 1;
        for (const Rational& x : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        scale *= Rational(l);
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
    }
    int sign = 1;
    const std::vector<std::size_t> pivots = bareiss_echelon(a, n, &sign);
    if (pivots.size() < n) return 0;
    Rational det(a[n - 1][n - 1] * sign);
    det /= scale;
    return det;
}

RationalSubspace RationalSubspace::span(std::size_t ambient, const std::vector<RationalVector>& vectors) {
    RationalSubspace w(ambient);
    if (vectors.empty()) return w;
    for (const auto& v : vectors)
        if (v.size() != ambient) throw DimensionError("vector length differs from ambient dimension");
    const RationalMatrix r = rref(RationalMatrix::from_rows(vectors));
    for (std::size_t i = 0; i < r.rows(); ++i) w.basis_.emplace_back(r.row(i).begin(), r.row(i).end());
    return w;
}

RationalSubspace RationalSubspace::full(std::size_t ambient) {
    RationalSubspace w(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
        RationalVector e(ambient);
        e[i] = 1;
        w.basis_.push_back(std::move(e));
    }
    return w;
}

RationalMatrix RationalSubspace::basis_matrix() const {
    if (basis_.empty()) return RationalMatrix(0, ambient_);
    return RationalMatrix::from_rows(basis_);
}

std::vector<std::size_t> RationalSubspace::pivots() const {
    std::vector<std::size_t> p;
    for (const auto& b : basis_) {
        std::size_t j = 0;
        while (sgn(b[j]) == 0) ++j;
        p.push_back(j);
    }
    return p;
}

bool RationalSubspace::contains(std::span<const Rational> v) const {
    if (v.size() != ambient_) throw DimensionError("vector length differs from ambient dimension");
    // Reduce v by the echelon basis: coefficients are read off at pivots.
    RationalVector rest(v.begin(), v.end());
    for (const auto& b : basis_) {
        std::size_t p = 0;
        while (sgn(b[p]) == 0) ++p;
        const Rational c = rest[p];
        if (sgn(c) == 0) continue;
        for (std::size_t j = p; j < ambient_; ++j)
            if (sgn(b[j]) != 0) rest[j] -= c * b[j];
    }
    return std::all_of(rest.begin(), rest.end(), [](const Rational& x) { return sgn(x) == 0; });
}

bool RationalSubspace::contains(const RationalSubspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionError("ambient dimension mismatch");
    if (other.dim() > dim()) return false;
    return std::all_of(other.basis_.begin(), other.basis_.end(),
                       [this](const RationalVector& v) { return contains(v); });
}

std::string RationalSubspace::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (i) os << "; ";
        os << format_vector(basis_[i]);
    }
    os << "]";
    return os.str();
}

bool operator<(const RationalSubspace& a, const RationalSubspace& b) {
    if (a.ambient_ != b.ambient_) return a.ambient_ < b.ambient_;
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.basis_ < b.basis_;
}

std::size_t SubspaceHash::operator()(const RationalSubspace& w) const {
    std::size_t h = std::hash<std::size_t>{}(w.ambient_dim() * 131 + w.dim());
    for (const auto& v : w.basis())
        for (const auto& x : v) {
            const std::size_t hx = mpz_get_ui(x.get_num_mpz_t()) * 31 + mpz_get_ui(x.get_den_mpz_t()) +
                                   static_cast<std::size_t>(sgn(x) + 1);
            h ^= hx + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
    return h;
}

RationalSubspace kernel(const RationalMatrix& m) {
    std::vector<std::size_t> pivots;
    const RationalMatrix r = rref(m, &pivots);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<RationalVector> vecs;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
        vecs.push_back(std::move(v));
    }
    return RationalSubspace::span(m.cols(), vecs);
}

RationalSubspace row_space(const RationalMatrix& m) {
    std::vector<RationalVector> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
    return RationalSubspace::span(m.cols(), rows);
}

RationalSubspace subspace_sum(const RationalSubspace& a, const RationalSubspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspace_sum: ambient dimension mismatch");
    std::vector<RationalVector> all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return RationalSubspace::span(a.ambient_dim(), all);
}

RationalSubspace subspace_intersect(const RationalSubspace& a, const RationalSubspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionError("subspace_intersect: ambient dimension mismatch");
    const std::size_t n = a.ambient_dim();
    if (a.is_zero() || b.is_zero()) return RationalSubspace(n);
    // Solve x·A = y·B: kernel of the n × (da+db) system [A^T | -B^T].
    const std::size_t da = a.dim(), db = b.dim();
    RationalMatrix sys(n, da + db);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < da; ++i) sys(j, i) = a.basis()[i][j];
        for (std::size_t i = 0; i < db; ++i) sys(j, da + i) = -b.basis()[i][j];
    }
    const RationalSubspace ker = kernel(sys);
    std::vector<RationalVector> vecs;
    for (const auto& k : ker.basis()) {
        RationalVector v(n);
        for (std::size_t i = 0; i < da; ++i)
            if (sgn(k[i]) != 0)
                for (std::size_t j = 0; j < n; ++j) v[j] += k[i] * a.basis()[i][j];
        vecs.push_back(std::move(v));
    }
    return RationalSubspace::span(n, vecs);
}

std::size_t image_dim(const RationalMatrix& m, const RationalSubspace& w) {
    if (w.ambient_dim() != m.cols()) throw DimensionError("image_dim: W ambient differs from M columns");
    if (w.is_zero()) return 0;
    return rank(w.basis_matrix() * m.transpose());
}

RationalSubspace image(const RationalMatrix& m, const RationalSubspace& w) {
    if (w.ambient_dim() != m.cols()) throw DimensionError("image: W ambient differs from M columns");
    if (w.is_zero()) return RationalSubspace(m.rows());
    return row_space(w.basis_matrix() * m.transpose());
}

RationalSubspace preimage(const RationalMatrix& m, const RationalSubspace& u) {
    if (u.ambient_dim() != m.rows()) throw DimensionError("preimage: U ambient differs from M rows");
    // v ∈ M^{-1}(U) iff every annihilator of U kills M v.
    const RationalSubspace ann = kernel(u.basis_matrix());
    if (ann.is_zero()) return RationalSubspace::full(m.cols());
    return kernel(ann.basis_matrix() * m);
}

RationalVector pluecker(const RationalSubspace& w) {
    const std::size_t d = w.dim(), n = w.ambient_dim();
    if (d == 0) throw DomainError("pluecker: zero subspace has no Plücker coordinates");
    RationalVector out;
    std::vector<std::size_t> cols(d);
    for (std::size_t i = 0; i < d; ++i) cols[i] = i;
    while (true) {
        RationalMatrix sub(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) sub(i, j) = w.basis()[i][cols[j]];
        out.push_back(determinant(sub));
        // Next combination in lexicographic order.
        std::size_t i = d;
        while (i > 0 && cols[i - 1] == n - d + i - 1) --i;
        if (i == 0) break;
        ++cols[i - 1];
        for (std::size_t j = i; j < d; ++j) cols[j] = cols[j - 1] + 1;
    }
    auto first = std::find_if(out.begin(), out.end(), [](const Rational& x) { return sgn(x) != 0; });
    const Rational lead = *first;
    for (auto& x : out) x /= lead;
    return out;
}

std::vector<Integer> primitive_integer_vector(std::span<const Rational> v) {
    Integer l = 1;
    for (const Rational& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> out(v.size());
    Integer g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i].get_num() * (l / v[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
    }
    if (sgn(g) == 0) throw DomainError("primitive_integer_vector: zero vector");
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return out;
}

Rational parse_rational(std::string_view token) {
    std::string s(token);
    if (s.empty()) throw ParseError("empty rational token");
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("not a rational: '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer n(num), d(den);
    if (sgn(d) == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

RationalMatrix parse_matrix(std::string_view text) {
    std::vector<RationalVector> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        RationalVector row;
        std::string tok;
        while (ls >> tok) row.push_back(parse_rational(tok));
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row " + std::to_string(rows.size() + 1) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix text contains no rows");
    return RationalMatrix::from_rows(rows);
}

std::string format_matrix(const RationalMatrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m(i, j).get_str();
        }
        os << '\n';
    }
    return os.str();
}

std::string format_vector(std::span<const Rational> v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i].get_str();
    }
    os << ")";
    return os.str();
}

}  // namespace diophex::exactlin
