#include "diophex/pencil.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "diophex/errors.hpp"

namespace diophex::pencil {

using exactlin::SubspaceHash;

std::string Pencil::to_string() const {
    return "W=" + W.to_string() + " r=" + std::to_string(r);
}

bool obstruction_holds(std::size_t dim_w, std::size_t r, std::size_t m, std::size_t n) {
    if (dim_w == 0) throw DomainError("obstruction_holds: dim W must be at least 1");
    if (r == 0) return true;
    // dim_w/r - 1 > n/m  <=>  m·(dim_w - r) > n·r
    return exactlin::ratio(dim_w, r) - 1 > exactlin::ratio(n, m);
}

ExtRational pencil_exponent(const Pencil& p) {
    if (p.r == 0) return ExtRational::infinity();
    return ExtRational(Rational(exactlin::ratio(p.W.dim(), p.r) - 1));
}

bool pencil_before(const Pencil& a, const Pencil& b) {
    const ExtRational ea = pencil_exponent(a), eb = pencil_exponent(b);
    if (ea != eb) return ea > eb;
    if (a.W.dim() != b.W.dim()) return a.W.dim() < b.W.dim();
    if (a.W.basis() != b.W.basis()) return a.W.basis() < b.W.basis();
    return a.r < b.r;
}

MatrixFamily::MatrixFamily(std::size_t m, std::size_t n, std::vector<RationalMatrix> samples, std::string label)
    : m_(m), n_(n), samples_(std::move(samples)), label_(std::move(label)) {
    if (m_ == 0) throw DimensionError("matrix family needs m >= 1");
    if (samples_.empty()) throw DomainError("matrix family needs at least one sample");
    for (std::size_t i = 0; i < samples_.size(); ++i)
        if (samples_[i].rows() != m_ || samples_[i].cols() != m_ + n_)
            throw DimensionError("sample " + std::to_string(i + 1) + " is " + std::to_string(samples_[i].rows()) +
                                 "x" + std::to_string(samples_[i].cols()) + ", expected " + std::to_string(m_) +
                                 "x" + std::to_string(m_ + n_));
}

namespace {

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string strip_comment(std::string line) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    return line;
}

}  // namespace

MatrixFamily MatrixFamily::parse(std::string_view text, std::string label) {
    std::istringstream in{std::string(text)};
    std::string line;
    long m = -1, n = -1;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_comment(line);
        if (blank(line)) continue;
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> m >> n) || (hs >> extra) || m < 1 || n < 0)
            throw ParseError("family header must be 'm n' with m >= 1, n >= 0 (line " + std::to_string(lineno) + ")");
        break;
    }
    if (m < 1) throw ParseError("family file has no header");

    std::vector<std::string> blocks;
    std::string current;
    while (std::getline(in, line)) {
        if (blank(line)) {
            if (!current.empty()) blocks.push_back(std::move(current));
            current.clear();
            continue;
        }
        const std::string body = strip_comment(line);
        if (blank(body)) continue;
        current += body + "\n";
    }
    if (!current.empty()) blocks.push_back(std::move(current));

    const auto mm = static_cast<std::size_t>(m), nn = static_cast<std::size_t>(n);
    std::vector<RationalMatrix> samples;
    for (const std::string& b : blocks) {
        const RationalMatrix all = exactlin::parse_matrix(b);
        if (all.cols() != mm + nn)
            throw ParseError("sample has " + std::to_string(all.cols()) + " columns, expected " +
                             std::to_string(mm + nn));
        if (all.rows() % mm != 0)
            throw ParseError("sample block has " + std::to_string(all.rows()) + " rows, not a multiple of m = " +
                             std::to_string(mm));
        for (std::size_t s = 0; s < all.rows(); s += mm) {
            RationalMatrix one(mm, mm + nn);
            for (std::size_t i = 0; i < mm; ++i)
                for (std::size_t j = 0; j < mm + nn; ++j) one(i, j) = all(s + i, j);
            samples.push_back(std::move(one));
        }
    }
    if (samples.empty()) throw ParseError("family file contains no samples");
    return MatrixFamily(mm, nn, std::move(samples), std::move(label));
}

std::string MatrixFamily::format() const {
    std::string out = std::to_string(m_) + " " + std::to_string(n_) + "\n";
    for (const auto& s : samples_) out += "\n" + exactlin::format_matrix(s);
    return out;
}

std::size_t family_rank(const MatrixFamily& f, const RationalSubspace& w) {
    if (w.ambient_dim() != f.ambient()) throw DimensionError("subspace ambient differs from family columns");
    std::size_t best = 0;
    for (const auto& s : f.samples()) {
        best = std::max(best, exactlin::image_dim(s, w));
        if (best == std::min(f.m(), w.dim())) break;
    }
    return best;
}

bool pencil_contains(const MatrixFamily& f, const Pencil& p) {
    if (p.W.ambient_dim() != f.ambient()) throw DimensionError("pencil ambient differs from family columns");
    return std::all_of(f.samples().begin(), f.samples().end(),
                       [&](const RationalMatrix& s) { return exactlin::image_dim(s, p.W) <= p.r; });
}

std::optional<std::uint64_t> height_vector_count(std::size_t dim, std::size_t height) {
    unsigned __int128 total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        total *= 2 * height + 1;
        if (total > (static_cast<unsigned __int128>(1) << 63)) return std::nullopt;
    }
    return static_cast<std::uint64_t>((total - 1) / 2);
}

std::vector<std::vector<long>> height_vectors(std::size_t dim, std::size_t height) {
    const auto h = static_cast<long>(height);
    std::vector<std::vector<long>> out;
    std::vector<long> v(dim, -h);
    // Odometer over [-h, h]^dim, keeping vectors whose first nonzero is positive.
    while (true) {
        std::size_t first = 0;
        while (first < dim && v[first] == 0) ++first;
        if (first < dim && v[first] > 0) {
            long g = 0;
            for (long x : v) g = std::gcd(g, x);
            if (g == 1) out.push_back(v);
        }
        std::size_t i = dim;
        while (i > 0 && v[i - 1] == h) v[--i] = -h;
        if (i == 0) break;
        ++v[i - 1];
    }
    return out;
}

std::vector<Pencil> enumerate_rational_pencils(const MatrixFamily& f, std::size_t height_bound,
                                               std::uint64_t budget) {
    if (height_bound < 1) throw DomainError("height bound must be at least 1");
    const std::size_t N = f.ambient();
    const auto count = height_vector_count(N, height_bound);
    if (!count || *count > budget) throw BudgetError("height-vector set exceeds the enumeration budget");

    std::vector<RationalVector> gens;
    for (const auto& v : height_vectors(N, height_bound)) gens.emplace_back(v.begin(), v.end());

    std::vector<Pencil> out;
    std::unordered_set<RationalSubspace, SubspaceHash> seen;
    std::deque<RationalSubspace> frontier{RationalSubspace(N)};
    std::uint64_t visited = 0;
    while (!frontier.empty()) {
        const RationalSubspace w = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& v : gens) {
            if (w.contains(v)) continue;
            std::vector<RationalVector> span = w.basis();
            span.push_back(v);
            RationalSubspace next = RationalSubspace::span(N, span);
            if (!seen.insert(next).second) continue;
            if (++visited > budget) throw BudgetError("pencil enumeration exceeded its budget");
            const std::size_t r = family_rank(f, next);
            // φ is non-decreasing, so nothing above a rank-m subspace can
            // beat the full-space ratio n/m.
            if (r >= f.m()) continue;
            if (obstruction_holds(next.dim(), r, f.m(), f.n())) out.push_back({next, r});
            frontier.push_back(std::move(next));
        }
    }
    std::sort(out.begin(), out.end(), pencil_before);
    return out;
}

ExponentBounds bounds(const MatrixFamily& f, const SearchOptions& opt) {
    if (opt.height < 1) throw DomainError("height bound must be at least 1");
    const SearchResult s = max_pencil_search(f, opt);
    ExponentBounds b;
    const ExtRational base(f.dirichlet_exponent());
    b.lower = std::max(base, s.best);
    b.upper = b.lower;
    if (s.best > base) b.witness = s.best_pencil;
    b.height = opt.height;
    b.flats_visited = s.flats_visited;
    b.evaluations = s.evaluations;
    return b;
}

HullSpan hull_span(const MatrixFamily& f) {
    HullSpan h;
    std::vector<RationalVector> pl;
    for (std::size_t i = 0; i < f.samples().size(); ++i) {
        const RationalSubspace k = exactlin::kernel(f.samples()[i]);
        if (i == 0) {
            h.kernel_dim = k.dim();
            if (k.dim() == 0) throw DomainError("hull_span: samples have trivial kernel");
        } else if (k.dim() != h.kernel_dim) {
            throw DegenerateSampleError("hull_span: sample " + std::to_string(i + 1) + " has kernel dimension " +
                                        std::to_string(k.dim()) + ", sample 1 has " +
                                        std::to_string(h.kernel_dim) + "; stratify the family first");
        }
        pl.push_back(exactlin::pluecker(k));
    }
    const RationalSubspace span = RationalSubspace::span(pl.front().size(), pl);
    h.span_dim = span.dim();
    h.basis = span.basis();
    return h;
}

bool hull_contains(const HullSpan& h, const RationalMatrix& m) {
    const RationalSubspace k = exactlin::kernel(m);
    if (k.dim() != h.kernel_dim || k.dim() == 0) return false;
    const RationalVector p = exactlin::pluecker(k);
    if (h.basis.empty() || p.size() != h.basis.front().size()) return false;
    return RationalSubspace::span(p.size(), h.basis).contains(p);
}

ExtremalityReport extremality_report(const MatrixFamily& f, std::size_t height_bound, std::uint64_t budget) {
    SearchOptions o;
    o.height = height_bound;
    o.budget = budget;
    const SearchResult s = max_pencil_search(f, o);
    ExtremalityReport e;
    e.height = height_bound;
    e.violating = s.obstructions;
    e.obstruction_found = !e.violating.empty();
    return e;
}

namespace {

std::string certification(const MatrixFamily& f, std::size_t height) {
    return "rational W spanned by integer vectors of sup-norm <= " + std::to_string(height) + ", over " +
           std::to_string(f.samples().size()) + " exact samples";
}

}  // namespace

Report bounds_report(const MatrixFamily& f, const ExponentBounds& b) {
    Report r;
    r.add("family", f.label().empty() ? std::string("unnamed") : f.label());
    r.add("m", f.m()).add("n", f.n()).add("samples", f.samples().size());
    r.add("dirichlet_exponent", f.dirichlet_exponent().get_str());
    r.add("height", b.height);
    r.add("lower", b.lower.to_string());
    r.add("upper", b.upper.to_string());
    r.add("witness_W_basis", b.witness ? b.witness->W.to_string() : std::string("none"));
    r.add("witness_r", b.witness ? std::to_string(b.witness->r) : std::string("none"));
    r.add("certified", certification(f, b.height));
    r.add("flats_visited", b.flats_visited).add("evaluations", b.evaluations);
    return r;
}

Report extremality_text(const MatrixFamily& f, const ExtremalityReport& e) {
    Report r;
    r.add("height", e.height);
    if (!e.obstruction_found) {
        r.add("extremality", "no obstruction up to height " + std::to_string(e.height));
    } else {
        r.add("extremality", "obstructed");
        r.add("violating_pencils", e.violating.size());
        for (std::size_t i = 0; i < e.violating.size(); ++i)
            r.add("pencil_" + std::to_string(i + 1),
                  e.violating[i].to_string() + " exponent=" + pencil_exponent(e.violating[i]).to_string());
    }
    r.add("certified", certification(f, e.height));
    return r;
}

}  // namespace diophex::pencil
