#pragma once

// Exact linear algebra over Q: matrices, subspaces in canonical echelon
// form, kernels, sums/intersections and Plücker coordinates.

#include <compare>
#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace diophex::exactlin {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// a/b in lowest terms (mpq_class's two-argument constructor does not reduce).
inline Rational ratio(const Integer& a, const Integer& b) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

/// A rational number or +infinity.
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(const Rational& v) : value_(v) {}  // NOLINT: implicit by design of the value type
    ExtRational(long v) : value_(v) {}             // NOLINT

    static ExtRational infinity() {
        ExtRational r;
        r.infinite_ = true;
        return r;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    /// Only meaningful when finite.
    const Rational& value() const { return value_; }

    std::string to_string() const;

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        if (a.infinite_) return std::strong_ordering::greater;
        if (b.infinite_) return std::strong_ordering::less;
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    bool infinite_ = false;
    Rational value_ = 0;
};

/// Dense row-major matrix of rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix from_rows(const std::vector<RationalVector>& rows);
    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Rational> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    RationalVector column(std::size_t j) const;

    RationalMatrix transpose() const;
    RationalVector apply(std::span<const Rational> v) const;
    bool is_zero() const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Subspace of Q^ambient stored as its reduced row-echelon basis. Two
/// subspaces are equal iff their stored bases are identical.
class RationalSubspace {
public:
    RationalSubspace() = default;
    /// The zero subspace of Q^ambient.
    explicit RationalSubspace(std::size_t ambient) : ambient_(ambient) {}

    static RationalSubspace span(std::size_t ambient, const std::vector<RationalVector>& vectors);
    static RationalSubspace full(std::size_t ambient);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    bool is_zero() const { return basis_.empty(); }
    const std::vector<RationalVector>& basis() const { return basis_; }
    RationalMatrix basis_matrix() const;
    std::vector<std::size_t> pivots() const;

    bool contains(std::span<const Rational> v) const;
    bool contains(const RationalSubspace& other) const;

    std::string to_string() const;

    friend bool operator==(const RationalSubspace& a, const RationalSubspace& b) = default;
    /// Ascending dim, then lexicographic basis.
    friend bool operator<(const RationalSubspace& a, const RationalSubspace& b);

private:
    std::size_t ambient_ = 0;
    std::vector<RationalVector> basis_;
};

struct SubspaceHash {
    std::size_t operator()(const RationalSubspace& w) const;
};

/// Reduced row-echelon form; `pivots` receives the pivot columns.
RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Rank over Q (fraction-free elimination).
std::size_t rank(const RationalMatrix& m);

Rational determinant(const RationalMatrix& m);

/// ker M as a subspace of Q^cols.
RationalSubspace kernel(const RationalMatrix& m);

/// Row space of M.
RationalSubspace row_space(const RationalMatrix& m);

RationalSubspace subspace_sum(const RationalSubspace& a, const RationalSubspace& b);
RationalSubspace subspace_intersect(const RationalSubspace& a, const RationalSubspace& b);

/// dim M·W.
std::size_t image_dim(const RationalMatrix& m, const RationalSubspace& w);

/// Image M·W as a subspace of Q^rows.
RationalSubspace image(const RationalMatrix& m, const RationalSubspace& w);

/// Preimage {v : M v ∈ U}.
RationalSubspace preimage(const RationalMatrix& m, const RationalSubspace& u);

/// dim×dim minors of the basis over lexicographically ordered column
/// subsets, scaled so the first nonzero entry is 1.
RationalVector pluecker(const RationalSubspace& w);

/// Coprime integer multiple of v (sign preserved). v must be nonzero.
std::vector<Integer> primitive_integer_vector(std::span<const Rational> v);

Rational parse_rational(std::string_view token);

/// Rows separated by newlines, entries `p/q` or `p`, `#` comments, blank
/// lines ignored.
RationalMatrix parse_matrix(std::string_view text);
std::string format_matrix(const RationalMatrix& m);
std::string format_vector(std::span<const Rational> v);

}  // namespace diophex::exactlin
