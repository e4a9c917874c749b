#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "diophex/errors.hpp"
#include "diophex/nilexp.hpp"
#include "diophex/random.hpp"

namespace diophex::nilexp {

namespace {

unsigned parse_count(std::string_view tok, std::string_view descriptor) {
    unsigned v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty())
        throw ParseError("bad group descriptor '" + std::string(descriptor) + "': '" + std::string(tok) +
                         "' is not a count");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool is_free_class2(const FamilyTag& t) { return t.kind == FamilyKind::FreeNilpotent && t.b == 2; }
bool is_free_23(const FamilyTag& t) { return t.kind == FamilyKind::FreeNilpotent && t.a == 2 && t.b == 3; }

std::uint64_t pairs(unsigned g) { return static_cast<std::uint64_t>(g) * (g - 1) / 2; }

// Σ_d d · witt(k, d): the Bass–Guivarc'h exponent of the free nilpotent algebra.
std::uint64_t free_alpha(unsigned k, unsigned s) {
    std::uint64_t a = 0;
    for (unsigned d = 1; d <= s; ++d) a += d * freelie::witt_dimension(k, d);
    return a;
}

struct WordMapContext {
    freelie::LyndonBasis words;
    freelie::GradedLieAlgebra target;
    unsigned s;
    std::size_t m;
    std::size_t top_offset;

    WordMapContext(const GroupSpec& g, unsigned k)
        : words(k, g.s()), target(freelie::target_algebra(g.tag())), s(g.s()), m(g.m()),
          top_offset(target.degree_offset(g.s())) {}

    std::size_t N() const { return words.degree_count(s); }

    RationalMatrix evaluate(std::span<const exactlin::RationalVector> x) const {
        const auto vals = freelie::evaluate_basis(words, target, x, s);
        RationalMatrix out(m, vals.size());
        for (std::size_t c = 0; c < vals.size(); ++c)
            for (std::size_t i = 0; i < m; ++i) out(i, c) = vals[c][top_offset + i];
        return out;
    }
};

}  // namespace

GroupSpec::GroupSpec(FamilyTag tag) : tag_(tag) {
    const auto target = freelie::target_algebra(tag_);
    s_ = freelie::relatively_free_class(tag_);
    if (target.nilpotency_class() != s_)
        throw UnsupportedError(descriptor() + ": class of G differs from the class of its relatively free algebra");
    m_ = target.graded_dims().back();
    ab_ = static_cast<unsigned>(target.graded_dims().front());
}

GroupSpec GroupSpec::parse(std::string_view descriptor) {
    const auto parts = split(descriptor, ':');
    const auto& kind = parts[0];
    auto want = [&](std::size_t n) {
        if (parts.size() != n + 1)
            throw ParseError("bad group descriptor '" + std::string(descriptor) + "': " + std::string(kind) +
                             " takes " + std::to_string(n) + " parameter(s)");
    };
    FamilyTag t;
    if (kind == "heisenberg") {
        want(1);
        t = {FamilyKind::Heisenberg, parse_count(parts[1], descriptor), 0};
    } else if (kind == "two_step") {
        want(2);
        t = {FamilyKind::TwoStep, parse_count(parts[1], descriptor), parse_count(parts[2], descriptor)};
    } else if (kind == "ut") {
        want(1);
        t = {FamilyKind::Unitriangular, parse_count(parts[1], descriptor), 0};
    } else if (kind == "free") {
        want(2);
        t = {FamilyKind::FreeNilpotent, parse_count(parts[1], descriptor), parse_count(parts[2], descriptor)};
    } else {
        throw ParseError("unknown group family '" + std::string(kind) +
                         "' (expected heisenberg, two_step, ut or free)");
    }
    return GroupSpec(t);
}

std::string GroupSpec::descriptor() const {
    switch (tag_.kind) {
        case FamilyKind::Heisenberg: return "heisenberg:" + std::to_string(tag_.a);
        case FamilyKind::TwoStep: return "two_step:" + std::to_string(tag_.a) + ":" + std::to_string(tag_.b);
        case FamilyKind::Unitriangular: return "ut:" + std::to_string(tag_.a);
        case FamilyKind::FreeNilpotent: return "free:" + std::to_string(tag_.a) + ":" + std::to_string(tag_.b);
    }
    return {};
}

unsigned GroupSpec::k_threshold() const {
    switch (tag_.kind) {
        case FamilyKind::Heisenberg: return tag_.a - 1;
        case FamilyKind::TwoStep: return tag_.a;
        case FamilyKind::Unitriangular: return tag_.a - 1;
        case FamilyKind::FreeNilpotent: return tag_.a;
    }
    return 0;
}

std::string GroupSpec::threshold_text() const {
    const std::string t = std::to_string(k_threshold());
    switch (tag_.kind) {
        case FamilyKind::Heisenberg: return "k >= 2m (m = " + std::to_string((tag_.a - 1) / 2) + ")";
        case FamilyKind::TwoStep: return "k >= dim G/[G,G] = " + t;
        case FamilyKind::Unitriangular: return "k >= n-1 = " + t;
        case FamilyKind::FreeNilpotent:
            return "k >= " + t + " (number of generators of G; assumed, not stated with the formula)";
    }
    return {};
}

void GroupSpec::require_k(unsigned k) const {
    if (k < k_threshold())
        throw ThresholdError(descriptor() + ": k = " + std::to_string(k) + " is below the threshold " +
                             threshold_text());
}

bool has_closed_formula(const GroupSpec& g) {
    const auto& t = g.tag();
    switch (t.kind) {
        case FamilyKind::Heisenberg:
        case FamilyKind::TwoStep: return true;
        case FamilyKind::Unitriangular: return t.a == 3 || t.a == 4;
        case FamilyKind::FreeNilpotent: return is_free_class2(t) || is_free_23(t);
    }
    return false;
}

Rational beta_closed(const GroupSpec& g, unsigned k) {
    if (!has_closed_formula(g)) throw UnsupportedError("no closed formula for " + g.descriptor());
    g.require_k(k);
    const auto& t = g.tag();
    const Rational K(k);
    const Rational inv = 1 / K;
    auto two_step = [&](std::uint64_t p) -> Rational { return (1 - inv) / Rational(p) - 2 * inv * inv; };
    switch (t.kind) {
        case FamilyKind::Heisenberg: return two_step(1);
        case FamilyKind::TwoStep: return two_step(t.b);
        case FamilyKind::Unitriangular:
            if (t.a == 3) return two_step(1);
            return (K * K * K - K - 3) / (K * K * K + K * K - K);
        case FamilyKind::FreeNilpotent:
            if (is_free_class2(t)) return two_step(pairs(t.a));
            return (K * K * K - K - 6) / (2 * (K * K * K + K * K - K));
    }
    throw UnsupportedError("no closed formula for " + g.descriptor());
}

Rational beta_limit(const GroupSpec& g) {
    if (!has_closed_formula(g)) throw UnsupportedError("no closed formula for " + g.descriptor());
    const auto& t = g.tag();
    switch (t.kind) {
        case FamilyKind::Heisenberg: return 1;
        case FamilyKind::TwoStep: return exactlin::ratio(1, t.b);
        case FamilyKind::Unitriangular: return 1;
        case FamilyKind::FreeNilpotent:
            if (is_free_class2(t)) return exactlin::ratio(1, pairs(t.a));
            return exactlin::ratio(1, 2);
    }
    return 0;
}

RationalMatrix evaluate_word_map(const GroupSpec& g, unsigned k, std::span<const exactlin::RationalVector> x) {
    return WordMapContext(g, k).evaluate(x);
}

WordMapFamily word_map_family(const GroupSpec& g, unsigned k, std::size_t sample_count, std::uint64_t seed) {
    g.require_k(k);
    const WordMapContext ctx(g, k);
    WordMapFamily out{k, ctx.N(), ctx.m, free_alpha(k, g.s()), {}, pencil::MatrixFamily(1, 0, {RationalMatrix(1, 1)}), 0};
    if (sample_count < out.N + 1)
        throw DomainError("word_map_family: need at least N+1 = " + std::to_string(out.N + 1) + " samples");
    if (out.N < out.m)
        throw DegenerateSampleError(g.descriptor() + ", k = " + std::to_string(k) + ": N = " +
                                    std::to_string(out.N) + " < m, every sample has rank < m");
    const std::size_t off = ctx.words.degree_offset(ctx.s);
    for (std::size_t c = 0; c < out.N; ++c) out.column_labels.push_back(ctx.words.bracketing(off + c));

    Rng rng(seed);
    std::vector<RationalMatrix> samples;
    const std::size_t max_attempts = 100 * sample_count;
    std::size_t attempts = 0;
    while (samples.size() < sample_count) {
        if (++attempts > max_attempts)
            throw DegenerateSampleError(g.descriptor() + ": too many rank-deficient word-map samples");
        std::vector<exactlin::RationalVector> x(k, exactlin::RationalVector(ctx.target.dim()));
        for (auto& xi : x)
            for (auto& c : xi) c = rng.uniform_int(-5, 5);
        RationalMatrix M = ctx.evaluate(x);
        if (exactlin::rank(M) < out.m) {
            ++out.degenerate_resampled;
            continue;
        }
        samples.push_back(std::move(M));
    }
    out.family = pencil::MatrixFamily(out.m, out.N - out.m, std::move(samples),
                                      "word-map " + g.descriptor() + " k=" + std::to_string(k));
    return out;
}

std::vector<RationalMatrix> substitution_action(const GroupSpec& g, unsigned k) {
    g.require_k(k);
    const unsigned s = g.s();
    const freelie::LyndonBasis words(k, s);
    const auto F = freelie::free_nilpotent(k, s);
    const std::size_t N = words.degree_count(s);
    const std::size_t off = F.degree_offset(s);

    // Each substitution is given by the images of the generators as
    // combinations of generators.
    std::vector<std::vector<exactlin::RationalVector>> subs;
    auto generator = [&](std::size_t i) { return F.basis_vector(i); };
    {
        std::vector<exactlin::RationalVector> x;
        for (unsigned i = 0; i < k; ++i) x.push_back(generator(i));
        auto swap = x;
        std::swap(swap[0], swap[1]);
        subs.push_back(swap);
        if (k > 2) {
            std::vector<exactlin::RationalVector> cyc;
            for (unsigned i = 0; i < k; ++i) cyc.push_back(generator((i + 1) % k));
            subs.push_back(cyc);
        }
        auto transvection = x;
        for (std::size_t c = 0; c < transvection[0].size(); ++c) transvection[0][c] += x[1][c];
        subs.push_back(transvection);
        auto dilation = x;
        for (auto& c : dilation[0]) c *= 2;
        subs.push_back(dilation);
    }

    std::vector<RationalMatrix> out;
    for (const auto& x : subs) {
        const auto vals = freelie::evaluate_basis(words, F, x, s);
        RationalMatrix T(N, N);
        for (std::size_t c = 0; c < N; ++c)
            for (std::size_t i = 0; i < N; ++i) T(i, c) = vals[c][off + i];
        out.push_back(std::move(T));
    }
    return out;
}

std::vector<RationalSubspace> invariant_subspaces(const GroupSpec& g, unsigned k) {
    g.require_k(k);
    const std::size_t N = freelie::witt_dimension(k, g.s());
    if (N > kMaxWordMapDim)
        throw ScaleError("invariant_subspaces: N = " + std::to_string(N) + " exceeds the desk-scale limit " +
                         std::to_string(kMaxWordMapDim));
    const auto maps = substitution_action(g, k);

    auto cyclic = [&](const exactlin::RationalVector& seed) {
        std::vector<exactlin::RationalVector> gens{seed};
        auto w = RationalSubspace::span(N, gens);
        std::vector<exactlin::RationalVector> queue{seed};
        while (!queue.empty()) {
            const auto v = queue.back();
            queue.pop_back();
            for (const auto& T : maps) {
                auto tv = T.apply(v);
                if (w.contains(tv)) continue;
                gens.push_back(tv);
                w = RationalSubspace::span(N, gens);
                queue.push_back(std::move(tv));
            }
        }
        return w;
    };

    std::vector<RationalSubspace> list;
    std::unordered_set<RationalSubspace, exactlin::SubspaceHash> seen;
    auto add = [&](RationalSubspace w) {
        if (seen.insert(w).second) list.push_back(std::move(w));
    };
    add(RationalSubspace(N));
    add(RationalSubspace::full(N));
    for (std::size_t i = 0; i < N; ++i) {
        exactlin::RationalVector e(N);
        e[i] = 1;
        add(cyclic(e));
        for (std::size_t j = i + 1; j < N; ++j)
            for (int sign : {1, -1}) {
                auto v = e;
                v[j] = sign;
                add(cyclic(v));
            }
    }
    // Lattice closure.
    constexpr std::size_t kMaxLattice = 4096;
    for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            add(exactlin::subspace_sum(list[i], list[j]));
            add(exactlin::subspace_intersect(list[i], list[j]));
            if (list.size() > kMaxLattice)
                throw BudgetError("invariant_subspaces: lattice exceeds " + std::to_string(kMaxLattice) +
                                  " elements");
        }
    std::sort(list.begin(), list.end());
    return list;
}

PencilExponent beta_via_pencils(const GroupSpec& g, unsigned k, std::size_t height_bound, std::uint64_t seed,
                                std::uint64_t budget) {
    g.require_k(k);
    const std::size_t N = freelie::witt_dimension(k, g.s());
    if (N > kMaxWordMapDim)
        throw ScaleError("beta_via_pencils: N = " + std::to_string(N) + " exceeds the desk-scale limit " +
                         std::to_string(kMaxWordMapDim));
    const auto wm = word_map_family(g, k, N + 2, seed);

    pencil::SearchOptions opt;
    opt.height = height_bound;
    opt.budget = budget;
    opt.extra_candidates = invariant_subspaces(g, k);

    PencilExponent out;
    out.N = wm.N;
    out.m = wm.m;
    out.alpha = wm.alpha;
    out.samples = wm.family.samples().size();
    out.degenerate_resampled = wm.degenerate_resampled;
    out.invariant_candidates = opt.extra_candidates.size();
    out.height = height_bound;

    const auto res = pencil::max_pencil_search(wm.family, opt);
    out.beta_matrix = res.best;
    out.witness = res.best_pencil;
    out.flats_visited = res.flats_visited;
    if (res.best.is_infinite())
        out.beta_k = ExtRational::infinity();
    else
        out.beta_k = Rational(exactlin::ratio(g.s(), wm.alpha) * res.best.value());
    if (has_closed_formula(g)) {
        out.closed = beta_closed(g, k);
        out.calibrated = out.beta_k.is_finite() && out.beta_k.value() == *out.closed;
    }
    return out;
}

Report pencil_exponent_report(const GroupSpec& g, unsigned k, const PencilExponent& p) {
    Report r;
    r.add("group", g.descriptor())
        .add("k", k)
        .add("threshold", g.threshold_text())
        .add("class_s", g.s())
        .add("m", p.m)
        .add("N", p.N)
        .add("alpha", p.alpha)
        .add("samples", p.samples)
        .add("degenerate_resampled", p.degenerate_resampled)
        .add("height", p.height)
        .add("invariant_candidates", p.invariant_candidates)
        .add("flats_visited", p.flats_visited)
        .add("beta_matrix", p.beta_matrix.to_string())
        .add("conversion", "beta_k = (s/alpha) * beta_matrix")
        .add("beta_pencil", p.beta_k.to_string())
        .add("beta_closed", p.closed ? p.closed->get_str() : std::string("n/a"))
        .add("witness_W_dim", p.witness.W.dim())
        .add("witness_r", p.witness.r)
        .add("witness_W_basis", p.witness.W.to_string())
        .add("witness_is_full_space", p.witness.W.dim() == p.N);
    if (!p.closed)
        r.add("calibration", "no closed formula");
    else
        r.add("calibration", p.calibrated ? "OK" : "MISMATCH");
    return r;
}

}  // namespace diophex::nilexp
