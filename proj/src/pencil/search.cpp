// Depth-first search over height-closed flats.
//
// For W ⊆ Q^N let cl(W) = ∩_j M_j^{-1}(M_j W): the largest subspace with the
// same images as W under every sample, so φ(cl W) = φ(W). The height-closed
// flat hcl(W) is the span of the height vectors inside cl(W). Every subspace
// spanned by height vectors lies in the flat of the same φ reached by adding
// its spanning vectors one at a time, and the pencil exponent only grows when
// W grows at fixed φ, so the maximum over spanned subspaces is a maximum over
// flats. Children with φ >= m are never explored: their ratio is at most n/m.

#include <algorithm>
#include <unordered_set>

#include "diophex/errors.hpp"
#include "diophex/pencil.hpp"
#include "modp.hpp"

namespace diophex::pencil {

using exactlin::SubspaceHash;

namespace {

using Vec = std::vector<std::uint64_t>;

class FlatSearch {
public:
    FlatSearch(const MatrixFamily& f, const SearchOptions& opt) : f_(f), opt_(opt), N_(f.ambient()), m_(f.m()) {
        const auto count = height_vector_count(N_, opt.height);
        if (!count || *count > opt.budget) throw BudgetError("height-vector set exceeds the search budget");
        vectors_ = height_vectors(N_, opt.height);
        for (const auto& v : vectors_) {
            Vec r(N_);
            for (std::size_t i = 0; i < N_; ++i) r[i] = modp::from_long(v[i]);
            vectors_p_.push_back(std::move(r));
        }
        // Row scaling leaves every image dimension unchanged.
        for (const auto& s : f.samples()) {
            std::vector<Vec> rows;
            for (std::size_t i = 0; i < s.rows(); ++i) {
                exactlin::Integer l = 1;
                for (const auto& x : s.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
                Vec r(N_);
                for (std::size_t j = 0; j < N_; ++j)
                    r[j] = modp::from_integer(s(i, j).get_num() * (l / s(i, j).get_den()));
                rows.push_back(std::move(r));
            }
            samples_p_.push_back(std::move(rows));
        }
    }

    SearchResult run() {
        SearchResult res;
        const RationalSubspace full = RationalSubspace::full(N_);
        consider(res, {full, family_rank(f_, full)}, true);
        for (const auto& w : opt_.extra_candidates) {
            if (w.ambient_dim() != N_) throw DimensionError("extra candidate has the wrong ambient dimension");
            if (w.is_zero()) continue;
            charge(1);
            consider(res, {w, family_rank(f_, w)}, true);
        }

        const RationalSubspace root = height_closure(RationalSubspace(N_));
        visited_.insert(root);
        std::vector<RationalSubspace> stack{root};
        if (!root.is_zero()) consider(res, {root, 0}, true);
        while (!stack.empty()) {
            RationalSubspace node = std::move(stack.back());
            stack.pop_back();
            expand(res, node, stack);
        }
        res.flats_visited = visited_.size();
        res.evaluations = work_;
        std::sort(res.obstructions.begin(), res.obstructions.end(), pencil_before);
        res.obstructions.erase(std::unique(res.obstructions.begin(), res.obstructions.end()),
                               res.obstructions.end());
        return res;
    }

private:
    void charge(std::uint64_t units) {
        work_ += units;
        if (work_ > opt_.budget) throw BudgetError("pencil search exceeded its budget of " +
                                                   std::to_string(opt_.budget) + " evaluations");
    }

    void consider(SearchResult& res, const Pencil& p, bool may_obstruct) {
        const ExtRational e = pencil_exponent(p);
        if (res.best_pencil.W.ambient_dim() == 0 || e > res.best ||
            (e == res.best && pencil_before(p, res.best_pencil))) {
            res.best = e;
            res.best_pencil = p;
        }
        if (may_obstruct && obstruction_holds(p.W.dim(), p.r, m_, f_.n())) res.obstructions.push_back(p);
    }

    std::vector<std::size_t> image_dims(const RationalSubspace& w) const {
        std::vector<std::size_t> d;
        for (const auto& s : f_.samples()) d.push_back(exactlin::image_dim(s, w));
        return d;
    }

    // ∩_j M_j^{-1}(M_j W) as the kernel of the stacked pulled-back annihilators.
    RationalSubspace closure(const RationalSubspace& w) const {
        std::vector<RationalVector> rows;
        for (const auto& s : f_.samples()) {
            const RationalSubspace img = exactlin::image(s, w);
            if (img.dim() == m_) continue;
            const RationalSubspace ann = exactlin::kernel(img.basis_matrix());
            for (const auto& a : ann.basis()) {
                RationalVector row(N_);
                for (std::size_t i = 0; i < m_; ++i) {
                    if (sgn(a[i]) == 0) continue;
                    for (std::size_t j = 0; j < N_; ++j)
                        if (sgn(s(i, j)) != 0) row[j] += a[i] * s(i, j);
                }
                rows.push_back(std::move(row));
            }
        }
        if (rows.empty()) return RationalSubspace::full(N_);
        return exactlin::kernel(RationalMatrix::from_rows(rows));
    }

    // Span of the height vectors in cl(W); W itself must be spanned by
    // height vectors.
    RationalSubspace height_closure(const RationalSubspace& w) {
        const RationalSubspace c = closure(w);
        if (c.dim() == w.dim()) return w;
        if (c.dim() == N_) return c;  // the unit vectors are height vectors
        const std::size_t d = c.dim();
        const auto h = static_cast<long>(opt_.height);
        const auto count = height_vector_count(d, opt_.height);
        if (!count) throw BudgetError("closure too large to enumerate");
        charge(*count);
        // A vector of c is determined by its pivot coordinates, which must be
        // integers of size <= h; its first nonzero entry is the first nonzero
        // pivot coordinate.
        const auto piv = c.pivots();
        std::vector<RationalVector> found = w.basis();
        std::vector<long> a(d, -h);
        while (true) {
            std::size_t first = 0;
            while (first < d && a[first] == 0) ++first;
            if (first < d && a[first] > 0) {
                RationalVector v(N_);
                for (std::size_t i = 0; i < d; ++i)
                    if (a[i])
                        for (std::size_t j = piv[i]; j < N_; ++j) v[j] += a[i] * c.basis()[i][j];
                const bool ok = std::all_of(v.begin(), v.end(), [h](const Rational& x) {
                    return x.get_den() == 1 && abs(x.get_num()) <= h;
                });
                if (ok) found.push_back(std::move(v));
            }
            std::size_t i = d;
            while (i > 0 && a[i - 1] == h) a[--i] = -h;
            if (i == 0) break;
            ++a[i - 1];
        }
        return RationalSubspace::span(N_, found);
    }

    struct Screen {
        bool valid = true;
        modp::Echelon basis;
        std::vector<modp::Echelon> images;
    };

    Screen screen_for(const RationalSubspace& w) const {
        Screen s;
        s.images.resize(samples_p_.size());
        for (const auto& b : w.basis()) {
            Vec r(N_);
            for (std::size_t j = 0; j < N_; ++j) {
                const auto x = modp::from_rational(b[j]);
                if (!x) {
                    s.valid = false;
                    return s;
                }
                r[j] = *x;
            }
            s.basis.insert(r);
            for (std::size_t k = 0; k < samples_p_.size(); ++k) s.images[k].insert(apply(k, r));
        }
        return s;
    }

    Vec apply(std::size_t k, const Vec& v) const {
        Vec out(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            std::uint64_t acc = 0;
            const Vec& row = samples_p_[k][i];
            for (std::size_t j = 0; j < N_; ++j)
                if (v[j] && row[j]) acc = modp::add(acc, modp::mul(row[j], v[j]));
            out[i] = acc;
        }
        return out;
    }

    // Lower bound for φ(W + v) from the reduction mod p.
    std::size_t screened_rank(const Screen& s, const Vec& v) const {
        std::size_t best = 0;
        for (std::size_t k = 0; k < samples_p_.size(); ++k) {
            std::size_t r = s.images[k].rank();
            if (r < m_ && !modp::is_zero(s.images[k].residue(apply(k, v)))) ++r;
            best = std::max(best, r);
            if (best >= m_) break;
        }
        return best;
    }

    void expand(SearchResult& res, const RationalSubspace& node, std::vector<RationalSubspace>& stack) {
        const std::vector<std::size_t> dims = image_dims(node);
        const std::size_t phi = node.is_zero() ? 0 : *std::max_element(dims.begin(), dims.end());
        const bool uniform = std::all_of(dims.begin(), dims.end(), [phi](std::size_t d) { return d == phi; });
        // With every sample at rank φ, leaving the flat raises some rank.
        if (uniform && phi + 1 >= m_) return;

        const Screen scr = screen_for(node);
        for (std::size_t idx = 0; idx < vectors_.size(); ++idx) {
            charge(1);
            const auto& vp = vectors_p_[idx];
            if (scr.valid) {
                if (modp::is_zero(scr.basis.residue(vp)) &&
                    node.contains(RationalVector(vectors_[idx].begin(), vectors_[idx].end())))
                    continue;
                if (screened_rank(scr, vp) >= m_) continue;
            }
            const RationalVector v(vectors_[idx].begin(), vectors_[idx].end());
            if (!scr.valid && node.contains(v)) continue;
            std::vector<RationalVector> span = node.basis();
            span.push_back(v);
            const RationalSubspace w = RationalSubspace::span(N_, span);
            charge(f_.samples().size());
            const std::size_t r = family_rank(f_, w);
            if (r >= m_) continue;
            RationalSubspace flat = height_closure(w);
            if (!visited_.insert(flat).second) continue;
            consider(res, {flat, r}, true);
            stack.push_back(std::move(flat));
        }
    }

    const MatrixFamily& f_;
    const SearchOptions& opt_;
    std::size_t N_;
    std::size_t m_;
    std::vector<std::vector<long>> vectors_;
    std::vector<Vec> vectors_p_;
    std::vector<std::vector<Vec>> samples_p_;
    std::unordered_set<RationalSubspace, SubspaceHash> visited_;
    std::uint64_t work_ = 0;
};

}  // namespace

SearchResult max_pencil_search(const MatrixFamily& f, const SearchOptions& opt) {
    if (opt.height < 1) throw DomainError("height bound must be at least 1");
    return FlatSearch(f, opt).run();
}

}  // namespace diophex::pencil
