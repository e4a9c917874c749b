#include <algorithm>
#include <map>
#include <sstream>

#include "diophex/errors.hpp"
#include "diophex/freelie.hpp"

namespace diophex::freelie {

std::string FamilyTag::to_string() const {
    switch (kind) {
        case FamilyKind::FreeNilpotent:
            return "free_nilpotent(" + std::to_string(a) + "," + std::to_string(b) + ")";
        case FamilyKind::Heisenberg:
            return "heisenberg(" + std::to_string(a) + ")";
        case FamilyKind::TwoStep:
            return "two_step(" + std::to_string(a) + "," + std::to_string(b) + ")";
        case FamilyKind::Unitriangular:
            return "unitriangular(" + std::to_string(a) + ")";
    }
    return "?";
}

GradedLieAlgebra::GradedLieAlgebra(std::string name, std::vector<unsigned> degrees, std::vector<std::string> labels)
    : name_(std::move(name)), degrees_(std::move(degrees)), labels_(std::move(labels)) {
    if (labels_.size() != degrees_.size()) throw DimensionError("one label per basis element required");
    if (!std::is_sorted(degrees_.begin(), degrees_.end()) || (!degrees_.empty() && degrees_.front() == 0))
        throw DomainError("basis degrees must be positive and non-decreasing");
    const unsigned s = degrees_.empty() ? 0 : degrees_.back();
    graded_dims_.assign(s, 0);
    for (unsigned d : degrees_) ++graded_dims_[d - 1];
    table_.resize(dim() * dim());
}

std::size_t GradedLieAlgebra::degree_offset(unsigned d) const {
    std::size_t off = 0;
    for (unsigned e = 1; e < d; ++e) off += graded_dims_[e - 1];
    return off;
}

void GradedLieAlgebra::set_bracket(std::size_t i, std::size_t j, std::vector<Term> value) {
    std::vector<Term> neg = value;
    for (auto& t : neg) t.coeff = -t.coeff;
    table_[i * dim() + j] = std::move(value);
    table_[j * dim() + i] = std::move(neg);
}

RationalVector GradedLieAlgebra::bracket(std::span<const Rational> x, std::span<const Rational> y) const {
    if (x.size() != dim() || y.size() != dim()) throw DimensionError("bracket: coordinate length mismatch");
    RationalVector out(dim());
    Rational c;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (sgn(y[j]) == 0) continue;
            const auto& terms = table_[i * dim() + j];
            if (terms.empty()) continue;
            c = x[i] * y[j];
            for (const Term& t : terms) out[t.index] += c * t.coeff;
        }
    }
    return out;
}

RationalVector GradedLieAlgebra::basis_vector(std::size_t i) const {
    RationalVector v(dim());
    v[i] = 1;
    return v;
}

namespace {

// Lie polynomials as elements of the free associative algebra.
using Poly = std::map<Word, std::int64_t>;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw DomainError("Lie polynomial coefficient overflow");
    return r;
}

Poly commutator(const Poly& p, const Poly& q) {
    Poly out;
    for (const auto& [u, a] : p)
        for (const auto& [v, b] : q) {
            Word uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            Word vu = v;
            vu.insert(vu.end(), u.begin(), u.end());
            const std::int64_t c = checked_mul(a, b);
            out[uv] += c;
            out[vu] -= c;
        }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

}  // namespace

GradedLieAlgebra free_nilpotent(unsigned k, unsigned s) {
    if (k == 0 || s == 0) throw DomainError("free_nilpotent requires k >= 1 and s >= 1");
    const LyndonBasis basis(k, s);
    std::vector<unsigned> degrees;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        degrees.push_back(basis[i].degree);
        labels.push_back(basis.bracketing(i));
    }
    GradedLieAlgebra alg("free_nilpotent(" + std::to_string(k) + "," + std::to_string(s) + ")", degrees, labels);
    alg.tag = FamilyTag{FamilyKind::FreeNilpotent, k, s};

    std::vector<Poly> expansion(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const LyndonElement& e = basis[i];
        if (e.left < 0) {
            expansion[i][e.word] = 1;
        } else {
            expansion[i] = commutator(expansion[static_cast<std::size_t>(e.left)],
                                      expansion[static_cast<std::size_t>(e.right)]);
        }
    }
    // Decompose [P_i, P_j] on the Lyndon basis: the smallest word of a Lie
    // polynomial is Lyndon and P_w = w + (larger words).
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            if (basis[i].degree + basis[j].degree > s) continue;
            Poly f = commutator(expansion[i], expansion[j]);
            std::vector<GradedLieAlgebra::Term> terms;
            while (!f.empty()) {
                const auto& [w, c] = *f.begin();
                const auto idx = basis.index_of(w);
                if (!idx) throw DomainError("Lyndon decomposition failed on word " + word_string(w));
                const std::int64_t coeff = c;
                terms.push_back({static_cast<std::uint32_t>(*idx), Rational(coeff)});
                for (const auto& [u, a] : expansion[*idx]) f[u] -= checked_mul(coeff, a);
                std::erase_if(f, [](const auto& kv) { return kv.second == 0; });
            }
            std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
            alg.set_bracket(i, j, std::move(terms));
        }
    return alg;
}

GradedLieAlgebra heisenberg(unsigned dimension) {
    if (dimension < 3 || dimension % 2 == 0) throw DomainError("heisenberg dimension must be odd and >= 3");
    const unsigned m = (dimension - 1) / 2;
    std::vector<unsigned> degrees(2 * m, 1);
    degrees.push_back(2);
    std::vector<std::string> labels;
    for (unsigned i = 1; i <= m; ++i) labels.push_back("X" + std::to_string(i));
    for (unsigned i = 1; i <= m; ++i) labels.push_back("Y" + std::to_string(i));
    labels.emplace_back("Z");
    GradedLieAlgebra alg("heisenberg(" + std::to_string(dimension) + ")", degrees, labels);
    alg.tag = FamilyTag{FamilyKind::Heisenberg, dimension, 0};
    for (unsigned i = 0; i < m; ++i) alg.set_bracket(i, m + i, {{2 * m, Rational(1)}});
    return alg;
}

GradedLieAlgebra two_step(unsigned d, unsigned p) {
    if (d < 2) throw DomainError("two_step needs at least 2 generators");
    const std::size_t pairs = std::size_t{d} * (d - 1) / 2;
    if (p < 1 || p > pairs)
        throw DomainError("two_step(" + std::to_string(d) + "," + std::to_string(p) + "): need 1 <= p <= " +
                          std::to_string(pairs));
    const GradedLieAlgebra free = free_nilpotent(d, 2);
    std::vector<unsigned> degrees(d, 1);
    degrees.insert(degrees.end(), p, 2);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < d + std::size_t{p}; ++i) labels.push_back(free.label(i));
    GradedLieAlgebra alg("two_step(" + std::to_string(d) + "," + std::to_string(p) + ")", degrees, labels);
    alg.tag = FamilyTag{FamilyKind::TwoStep, d, p};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            std::vector<GradedLieAlgebra::Term> kept;
            for (const auto& t : free.bracket_of(i, j))
                if (t.index < d + std::size_t{p}) kept.push_back(t);
            alg.set_bracket(i, j, std::move(kept));
        }
    return alg;
}

GradedLieAlgebra unitriangular(unsigned n) {
    if (n < 2) throw DomainError("unitriangular needs n >= 2");
    struct Entry {
        unsigned i, j;
    };
    std::vector<Entry> entries;
    for (unsigned gap = 1; gap < n; ++gap)
        for (unsigned i = 0; i + gap < n; ++i) entries.push_back({i, i + gap});
    std::vector<unsigned> degrees;
    std::vector<std::string> labels;
    std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
    for (std::size_t e = 0; e < entries.size(); ++e) {
        degrees.push_back(entries[e].j - entries[e].i);
        labels.push_back("E" + std::to_string(entries[e].i + 1) + std::to_string(entries[e].j + 1));
        index[entries[e].i][entries[e].j] = static_cast<int>(e);
    }
    GradedLieAlgebra alg("unitriangular(" + std::to_string(n) + ")", degrees, labels);
    alg.tag = FamilyTag{FamilyKind::Unitriangular, n, 0};
    // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
    for (std::size_t a = 0; a < entries.size(); ++a)
        for (std::size_t b = a + 1; b < entries.size(); ++b) {
            const auto [i, j] = entries[a];
            const auto [k, l] = entries[b];
            std::vector<GradedLieAlgebra::Term> terms;
            if (j == k) terms.push_back({static_cast<std::uint32_t>(index[i][l]), Rational(1)});
            if (l == i) terms.push_back({static_cast<std::uint32_t>(index[k][j]), Rational(-1)});
            if (!terms.empty()) alg.set_bracket(a, b, std::move(terms));
        }
    return alg;
}

GradedLieAlgebra target_algebra(const FamilyTag& tag) {
    switch (tag.kind) {
        case FamilyKind::FreeNilpotent:
            return free_nilpotent(tag.a, tag.b);
        case FamilyKind::Heisenberg:
            return heisenberg(tag.a);
        case FamilyKind::TwoStep:
            return two_step(tag.a, tag.b);
        case FamilyKind::Unitriangular:
            return unitriangular(tag.a);
    }
    throw UnsupportedError("unsupported family tag");
}

unsigned relatively_free_class(const FamilyTag& tag) {
    switch (tag.kind) {
        case FamilyKind::FreeNilpotent:
            // Every degree-d Schur component of the free Lie algebra has at
            // most d-1 rows (d >= 3), so g >= s-1 generators carry no extra
            // laws in degrees <= s.
            if (tag.a < 2 || tag.b < 2 || (tag.b >= 3 && tag.a + 1 < tag.b))
                throw UnsupportedError("free:" + std::to_string(tag.a) + ":" + std::to_string(tag.b) +
                                       " needs s >= 2 and m >= max(2, s-1) generators");
            return tag.b;
        case FamilyKind::Heisenberg:
        case FamilyKind::TwoStep:
            return 2;
        case FamilyKind::Unitriangular:
            if (tag.a < 3) throw UnsupportedError("ut:n needs n >= 3 (UT(2) is abelian)");
            return tag.a - 1;
    }
    throw UnsupportedError("unsupported family tag");
}

GradedLieAlgebra build_algebra(const FamilyTag& tag, unsigned k) {
    if (k == 0) throw DomainError("build_algebra requires k >= 1");
    return free_nilpotent(k, relatively_free_class(tag));
}

std::vector<RationalVector> evaluate_all(const LyndonBasis& words, const GradedLieAlgebra& target,
                                         std::span<const RationalVector> x) {
    if (x.size() != words.generators())
        throw DimensionError("evaluate: expected " + std::to_string(words.generators()) + " arguments, got " +
                             std::to_string(x.size()));
    for (const auto& xi : x)
        if (xi.size() != target.dim()) throw DimensionError("evaluate: argument is not in the target algebra");
    std::vector<RationalVector> values(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const LyndonElement& e = words[i];
        values[i] = e.left < 0 ? x[e.word.front()]
                               : target.bracket(values[static_cast<std::size_t>(e.left)],
                                                values[static_cast<std::size_t>(e.right)]);
    }
    return values;
}

std::vector<RationalVector> evaluate_basis(const LyndonBasis& words, const GradedLieAlgebra& target,
                                           std::span<const RationalVector> x, unsigned degree) {
    if (degree == 0 || degree > words.max_degree()) throw DomainError("evaluate_basis: degree out of range");
    std::vector<RationalVector> all = evaluate_all(words, target, x);
    const auto first = all.begin() + static_cast<std::ptrdiff_t>(words.degree_offset(degree));
    return {std::make_move_iterator(first),
            std::make_move_iterator(first + static_cast<std::ptrdiff_t>(words.degree_count(degree)))};
}

std::uint64_t bass_guivarch(const GradedLieAlgebra& a) {
    std::uint64_t alpha = 0;
    for (std::size_t d = 1; d <= a.graded_dims().size(); ++d) alpha += d * a.graded_dims()[d - 1];
    return alpha;
}

std::string dump_algebra(const GradedLieAlgebra& a) {
    std::ostringstream os;
    os << "algebra: " << a.name() << "\n";
    os << "degrees:";
    for (auto d : a.graded_dims()) os << ' ' << d;
    os << "\nbasis:";
    for (std::size_t i = 0; i < a.dim(); ++i) os << ' ' << a.label(i);
    os << "\nconstants:\n";
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j)
            for (const auto& t : a.bracket_of(i, j)) os << i << ' ' << j << ' ' << t.index << ' ' << t.coeff << '\n';
    return os.str();
}

}  // namespace diophex::freelie
