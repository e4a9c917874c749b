#include <algorithm>
#include <map>

#include "diophex/errors.hpp"
#include "diophex/freelie.hpp"

namespace diophex::freelie {

namespace {

int moebius(unsigned n) {
    int mu = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

}  // namespace

std::uint64_t witt_dimension(unsigned k, unsigned d) {
    if (k == 0 || d == 0) throw DomainError("witt_dimension requires k >= 1 and d >= 1");
    exactlin::Integer sum = 0;
    for (unsigned e = 1; e <= d; ++e) {
        if (d % e) continue;
        const int mu = moebius(d / e);
        if (mu == 0) continue;
        exactlin::Integer pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), k, e);
        sum += mu * pw;
    }
    sum /= d;
    if (!sum.fits_ulong_p()) throw DomainError("witt_dimension overflows 64 bits");
    return sum.get_ui();
}

bool is_lyndon(const Word& w) {
    if (w.empty()) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end()))
            return false;
    return true;
}

std::vector<Word> lyndon_words(unsigned k, unsigned max_len) {
    if (k == 0 || max_len == 0) return {};
    if (k > 255) throw DomainError("lyndon_words supports at most 255 letters");
    // Duval's generation in lexicographic order.
    std::vector<Word> out;
    Word w{0};
    while (!w.empty()) {
        out.push_back(w);
        const std::size_t m = w.size();
        while (w.size() < max_len) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == k - 1) w.pop_back();
        if (!w.empty()) ++w.back();
    }
    std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
    return out;
}

std::pair<Word, Word> standard_factorization(const Word& w) {
    if (w.size() < 2) throw DomainError("standard_factorization needs a word of length >= 2");
    for (std::size_t i = 1; i < w.size(); ++i) {
        Word v(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
        if (is_lyndon(v)) return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)), v};
    }
    throw DomainError("no proper Lyndon suffix");  // unreachable: last letter is Lyndon
}

std::string word_string(const Word& w) {
    std::string s;
    for (auto c : w) {
        if (c < 26) {
            s.push_back(static_cast<char>('a' + c));
        } else {
            s += "x" + std::to_string(c + 1);
        }
    }
    return s;
}

LyndonBasis::LyndonBasis(unsigned k, unsigned s) : k_(k), s_(s) {
    if (k == 0 || s == 0) throw DomainError("LyndonBasis requires k >= 1 and s >= 1");
    const std::vector<Word> words = lyndon_words(k, s);
    std::map<Word, std::size_t> index;
    offsets_.assign(s + 1, 0);
    for (const Word& w : words) {
        LyndonElement e;
        e.word = w;
        e.degree = static_cast<unsigned>(w.size());
        if (w.size() >= 2) {
            auto [u, v] = standard_factorization(w);
            e.left = static_cast<int>(index.at(u));
            e.right = static_cast<int>(index.at(v));
        }
        index.emplace(w, elements_.size());
        elements_.push_back(std::move(e));
        ++offsets_[w.size()];
    }
    for (unsigned d = 1; d <= s; ++d) offsets_[d] += offsets_[d - 1];
}

std::optional<std::size_t> LyndonBasis::index_of(const Word& w) const {
    if (w.empty() || w.size() > s_) return std::nullopt;
    const auto first = elements_.begin() + static_cast<std::ptrdiff_t>(degree_offset(static_cast<unsigned>(w.size())));
    const auto last = first + static_cast<std::ptrdiff_t>(degree_count(static_cast<unsigned>(w.size())));
    auto it = std::lower_bound(first, last, w, [](const LyndonElement& e, const Word& x) { return e.word < x; });
    if (it == last || it->word != w) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
}

std::string LyndonBasis::bracketing(std::size_t i) const {
    const LyndonElement& e = elements_[i];
    if (e.left < 0) return word_string(e.word);
    return "[" + bracketing(static_cast<std::size_t>(e.left)) + "," + bracketing(static_cast<std::size_t>(e.right)) +
           "]";
}

}  // namespace diophex::freelie
