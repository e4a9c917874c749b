#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "diophex/errors.hpp"
#include "diophex/nilexp.hpp"

namespace diophex::nilexp {

namespace {

constexpr std::size_t kMaxVectors = 4096;

using Vec = std::vector<unsigned>;

unsigned inv_mod(unsigned a, unsigned p) {
    // p is small, Fermat is fine.
    unsigned long long r = 1, b = a % p;
    for (unsigned e = p - 2; e; e >>= 1, b = b * b % p)
        if (e & 1) r = r * b % p;
    return static_cast<unsigned>(r);
}

bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Reduced row echelon form of the given rows; zero rows dropped.
std::vector<Vec> fp_rref(std::vector<Vec> rows, unsigned p, std::size_t dim) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < dim && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const unsigned s = inv_mod(rows[r][c], p);
        for (auto& x : rows[r]) x = x * s % p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const unsigned f = rows[i][c];
            for (std::size_t j = 0; j < dim; ++j) rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

Vec apply(const FpMatrix& a, const Vec& v, unsigned p) {
    Vec out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        unsigned long long acc = 0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += static_cast<unsigned long long>(a[i][j]) * v[j];
        out[i] = static_cast<unsigned>(acc % p);
    }
    return out;
}

FpSubspace make(std::vector<Vec> rows, unsigned p, std::size_t dim) {
    return FpSubspace{dim, fp_rref(std::move(rows), p, dim)};
}

// Indexes every subspace of F_p^dim by canonical basis and by member set.
class Lattice {
public:
    Lattice(unsigned p, std::size_t dim) : p_(p), dim_(dim) {
        total_ = 1;
        for (std::size_t i = 0; i < dim; ++i) total_ *= p;
        subspaces_ = all_subspaces(p, dim);
        for (std::size_t i = 0; i < subspaces_.size(); ++i) {
            by_basis_.emplace(subspaces_[i], i);
            members_.push_back(member_set(subspaces_[i]));
            by_members_.emplace(members_.back(), i);
        }
    }

    const std::vector<FpSubspace>& subspaces() const { return subspaces_; }
    std::size_t size() const { return subspaces_.size(); }
    std::size_t vector_count() const { return total_; }

    Vec decode(std::size_t code) const {
        Vec v(dim_);
        for (std::size_t i = 0; i < dim_; ++i, code /= p_) v[i] = static_cast<unsigned>(code % p_);
        return v;
    }

    std::size_t index(const FpSubspace& w) const { return by_basis_.at(w); }
    bool contains(std::size_t w, std::size_t code) const { return members_[w][code]; }

    std::size_t sum(std::size_t a, std::size_t b) const {
        auto rows = subspaces_[a].basis;
        rows.insert(rows.end(), subspaces_[b].basis.begin(), subspaces_[b].basis.end());
        return index(make(std::move(rows), p_, dim_));
    }
    std::size_t add_vector(std::size_t a, const Vec& v) const {
        auto rows = subspaces_[a].basis;
        rows.push_back(v);
        return index(make(std::move(rows), p_, dim_));
    }
    std::size_t intersect(std::size_t a, std::size_t b) const {
        std::vector<bool> m(total_);
        for (std::size_t c = 0; c < total_; ++c) m[c] = members_[a][c] && members_[b][c];
        return by_members_.at(m);
    }
    std::size_t image(const FpMatrix& g, std::size_t a) const {
        std::vector<Vec> rows;
        for (const auto& v : subspaces_[a].basis) rows.push_back(apply(g, v, p_));
        return index(make(std::move(rows), p_, dim_));
    }

private:
    std::vector<bool> member_set(const FpSubspace& w) const {
        std::vector<bool> m(total_);
        std::size_t combos = 1;
        for (std::size_t i = 0; i < w.dim(); ++i) combos *= p_;
        for (std::size_t c = 0; c < combos; ++c) {
            Vec v(dim_, 0);
            std::size_t t = c;
            for (const auto& b : w.basis) {
                const unsigned coeff = static_cast<unsigned>(t % p_);
                t /= p_;
                for (std::size_t j = 0; j < dim_; ++j) v[j] = (v[j] + coeff * b[j]) % p_;
            }
            std::size_t code = 0;
            for (std::size_t j = dim_; j-- > 0;) code = code * p_ + v[j];
            m[code] = true;
        }
        return m;
    }

    unsigned p_;
    std::size_t dim_;
    std::size_t total_;
    std::vector<FpSubspace> subspaces_;
    std::map<FpSubspace, std::size_t> by_basis_;
    std::vector<std::vector<bool>> members_;
    std::unordered_map<std::vector<bool>, std::size_t> by_members_;
};

void validate(const FiniteActionInstance& inst) {
    if (!is_prime(inst.p)) throw DomainError("finite action: p = " + std::to_string(inst.p) + " is not prime");
    if (inst.dim == 0) throw DomainError("finite action: dim must be positive");
    std::size_t total = 1;
    for (std::size_t i = 0; i < inst.dim; ++i) {
        total *= inst.p;
        if (total > kMaxVectors)
            throw ScaleError("finite action: p^dim exceeds " + std::to_string(kMaxVectors));
    }
    if (!inst.phi) throw DomainError("finite action: phi is not set");
    for (const auto& g : inst.group) {
        if (g.size() != inst.dim) throw DimensionError("finite action: group element has wrong size");
        for (const auto& row : g) {
            if (row.size() != inst.dim) throw DimensionError("finite action: group element has wrong size");
            for (auto x : row)
                if (x >= inst.p) throw DomainError("finite action: entries must lie in [0, p)");
        }
        if (make(g, inst.p, inst.dim).dim() != inst.dim)
            throw HypothesisError("finite action: group element is not invertible mod p");
    }
}

FpMatrix permutation(std::size_t dim, const std::vector<std::size_t>& image_of) {
    FpMatrix m(dim, Vec(dim, 0));
    for (std::size_t j = 0; j < dim; ++j) m[image_of[j]][j] = 1;
    return m;
}

}  // namespace

std::string FpSubspace::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (i) os << "; ";
        os << "(";
        for (std::size_t j = 0; j < basis[i].size(); ++j) os << (j ? "," : "") << basis[i][j];
        os << ")";
    }
    os << "]";
    return os.str();
}

std::vector<FpSubspace> all_subspaces(unsigned p, std::size_t dim) {
    std::vector<FpSubspace> out;
    for (std::size_t r = 0; r <= dim; ++r) {
        // Pivot sets in lexicographic order.
        std::vector<bool> mask(dim, false);
        std::fill(mask.begin(), mask.begin() + static_cast<long>(r), true);
        do {
            std::vector<std::size_t> piv;
            for (std::size_t j = 0; j < dim; ++j)
                if (mask[j]) piv.push_back(j);
            // Free positions: right of the row's pivot, not a pivot column.
            std::vector<std::pair<std::size_t, std::size_t>> free;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = piv[i] + 1; j < dim; ++j)
                    if (!mask[j]) free.emplace_back(i, j);
            std::vector<unsigned> val(free.size(), 0);
            while (true) {
                FpSubspace w{dim, std::vector<Vec>(r, Vec(dim, 0))};
                for (std::size_t i = 0; i < r; ++i) w.basis[i][piv[i]] = 1;
                for (std::size_t f = 0; f < free.size(); ++f) w.basis[free[f].first][free[f].second] = val[f];
                out.push_back(std::move(w));
                std::size_t f = 0;
                while (f < val.size() && ++val[f] == p) val[f++] = 0;
                if (f == val.size()) break;
            }
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    return out;
}

unsigned fp_image_dim(unsigned p, const FpMatrix& a, const FpSubspace& w) {
    std::vector<Vec> rows;
    for (const auto& v : w.basis) rows.push_back(apply(a, v, p));
    return static_cast<unsigned>(fp_rref(std::move(rows), p, a.size()).size());
}

SubmodularReport submodular_min_check(const FiniteActionInstance& inst) {
    validate(inst);
    const Lattice lat(inst.p, inst.dim);
    const auto& subs = lat.subspaces();
    std::vector<unsigned> phi(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) phi[i] = inst.phi(subs[i]);

    // Monotonicity on covering pairs W ⊂ W + v.
    for (std::size_t i = 0; i < subs.size(); ++i)
        for (std::size_t c = 0; c < lat.vector_count(); ++c) {
            if (lat.contains(i, c)) continue;
            const std::size_t j = lat.add_vector(i, lat.decode(c));
            if (phi[j] < phi[i])
                throw HypothesisError("phi is not non-decreasing: phi(" + subs[i].to_string() + ") = " +
                                      std::to_string(phi[i]) + " > phi(" + subs[j].to_string() +
                                      ") = " + std::to_string(phi[j]));
        }
    for (std::size_t i = 0; i < subs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const std::size_t s = lat.sum(i, j), t = lat.intersect(i, j);
            if (phi[s] + phi[t] > phi[i] + phi[j])
                throw HypothesisError("phi is not submodular at W1 = " + subs[i].to_string() +
                                      ", W2 = " + subs[j].to_string());
        }
    std::vector<bool> invariant(subs.size(), true);
    for (const auto& g : inst.group)
        for (std::size_t i = 0; i < subs.size(); ++i) {
            const std::size_t j = lat.image(g, i);
            if (phi[j] != phi[i])
                throw HypothesisError("phi is not invariant under the group at W = " + subs[i].to_string());
            if (j != i) invariant[i] = false;
        }

    SubmodularReport r;
    r.subspaces = subs.size();
    bool first = true;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i].dim() == 0) continue;
        const Rational q = exactlin::ratio(phi[i], subs[i].dim());
        if (first || q < r.min_ratio) {
            r.min_ratio = q;
            r.minimizers.clear();
            first = false;
        }
        if (q == r.min_ratio) r.minimizers.push_back(subs[i]);
    }
    for (const auto& w : r.minimizers)
        if (invariant[lat.index(w)]) r.invariant_minimizers.push_back(w);
    r.invariant_minimizer_found = !r.invariant_minimizers.empty();
    return r;
}

Report submodular_report(const FiniteActionInstance& inst, const SubmodularReport& r) {
    Report rep;
    rep.add("instance", inst.description)
        .add("field", "F_" + std::to_string(inst.p))
        .add("dim", inst.dim)
        .add("group_generators", inst.group.size())
        .add("subspaces", r.subspaces)
        .add("hypotheses", "non-decreasing, submodular, G-invariant (verified exhaustively)")
        .add("min_ratio", r.min_ratio.get_str())
        .add("minimizers", r.minimizers.size())
        .add("invariant_minimizers", r.invariant_minimizers.size());
    if (r.invariant_minimizer_found) rep.add("invariant_witness", r.invariant_minimizers.front().to_string());
    rep.add("verdict", r.invariant_minimizer_found ? "invariant minimizer found" : "no invariant minimizer");
    return rep;
}

FiniteActionInstance cyclic_f2_instance() {
    FiniteActionInstance inst;
    inst.p = 2;
    inst.dim = 4;
    const FpMatrix P = permutation(4, {1, 2, 3, 0});
    FpMatrix A = P;
    for (std::size_t i = 0; i < 4; ++i) A[i][i] ^= 1U;
    inst.group = {P};
    inst.phi = [A](const FpSubspace& w) { return fp_image_dim(2, A, w); };
    inst.description = "F_2^4, cyclic shift P of order 4, phi(W) = dim (I+P)W";
    return inst;
}

FiniteActionInstance planted_nonsubmodular_instance() {
    FiniteActionInstance inst;
    inst.p = 2;
    inst.dim = 3;
    inst.group = {permutation(3, {1, 2, 0})};
    inst.phi = [](const FpSubspace& w) { return w.dim() >= 2 ? 2U : 0U; };
    inst.description = "F_2^3, cyclic shift, phi(W) = 2 if dim W >= 2 else 0";
    return inst;
}

FiniteActionInstance trivial_group_instance() {
    FiniteActionInstance inst;
    inst.p = 3;
    inst.dim = 3;
    const FpMatrix A{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}};
    inst.phi = [A](const FpSubspace& w) { return fp_image_dim(3, A, w); };
    inst.description = "F_3^3, trivial group, phi(W) = dim AW with A = diag(1,1,0)";
    return inst;
}

FiniteActionInstance identity_phi_instance() {
    FiniteActionInstance inst;
    inst.p = 2;
    inst.dim = 3;
    inst.group = {permutation(3, {1, 2, 0})};
    inst.phi = [](const FpSubspace& w) { return static_cast<unsigned>(w.dim()); };
    inst.description = "F_2^3, cyclic shift, phi(W) = dim W";
    return inst;
}

FiniteActionInstance builtin_instance(std::string_view name) {
    if (name == "f2-cyclic4") return cyclic_f2_instance();
    if (name == "planted-nonsubmodular") return planted_nonsubmodular_instance();
    if (name == "trivial-group") return trivial_group_instance();
    if (name == "identity-phi") return identity_phi_instance();
    throw ParseError("unknown instance '" + std::string(name) +
                     "' (expected f2-cyclic4, planted-nonsubmodular, trivial-group or identity-phi)");
}

}  // namespace diophex::nilexp
