#pragma once

// Empirical diophantine exponents: best approximations per dyadic shell of
// ‖q‖∞, by exhaustive search or by lattice reduction, the diagonal flow on
// u_M Z^{m+n}, and slope fitting. Sup-norms for both q and Mq throughout.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diophex/exactlin.hpp"
#include "diophex/real.hpp"
#include "diophex/report.hpp"

namespace diophex::dioph {

using exactlin::Integer;
using exactlin::Rational;
using exactlin::RationalMatrix;

/// m × (m+n) real matrix, n ≥ 1. Entries are held at `precision` bits; when
/// every entry was given as an exact rational the exact matrix is kept too,
/// and only then can a quality be declared exactly zero.
class RealMatrix {
public:
    static RealMatrix from_rational(const RationalMatrix& m, unsigned precision = kDefaultPrecision);
    /// Row-major doubles; never exact.
    static RealMatrix from_doubles(std::size_t rows, std::size_t cols, std::span<const double> values,
                                   unsigned precision = kDefaultPrecision);
    /// Same line format as exactlin::parse_matrix; entries may be expressions
    /// such as (1+sqrt(5))/2 or 1.25e-3. Constants pi, e, phi; functions
    /// sqrt, cbrt, exp, log. Throws ParseError.
    static RealMatrix parse(std::string_view text, unsigned precision = kDefaultPrecision);

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return cols_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return cols_ - m_; }
    unsigned precision() const { return precision_; }
    const Real& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    double to_double(std::size_t i, std::size_t j) const { return (*this)(i, j).to_double(); }
    bool is_exact() const { return exact_.has_value(); }
    const std::optional<RationalMatrix>& exact() const { return exact_; }
    /// Entries as written (or canonical text for constructed matrices).
    const std::vector<std::string>& tokens() const { return tokens_; }
    /// FNV-1a of the shape and tokens, hex.
    std::string hash() const;
    /// Max row abs-sum.
    double norm_inf() const;

private:
    RealMatrix(std::size_t m, std::size_t cols, unsigned precision);

    std::size_t m_ = 0, cols_ = 0;
    unsigned precision_ = kDefaultPrecision;
    std::vector<Real> entries_;
    std::vector<std::string> tokens_;
    std::optional<RationalMatrix> exact_;
};

/// Value of one matrix token. `exact` is set when no constant or function
/// was used.
Real evaluate_expression(std::string_view token, unsigned precision, std::optional<Rational>* exact = nullptr);

enum class Method { exhaustive, lll, automatic };
std::string to_string(Method m);
Method parse_method(std::string_view s);

struct BestApproxRecord {
    std::vector<long long> q;  // first nonzero coordinate positive
    long long norm_q = 0;      // ‖q‖∞
    Real quality;              // ‖Mq‖∞
    bool exact_zero = false;   // Mq = 0 proven in exact arithmetic
    bool floored = false;      // below working precision; quality set to the floor
    Method method = Method::exhaustive;
    unsigned shell = 0;
};

/// Shell j covers (2^{j-1}, 2^j] ∩ [1, T] (shell 0 is norm 1); j = 0..ceil(log2 T).
struct Shell {
    unsigned j;
    long long lo;  // exclusive
    long long hi;  // inclusive
};
std::vector<Shell> shells(std::uint64_t T);

/// Columns playing the role of I in (I|A): the leading m when they are
/// invertible, else the m-subset maximizing |det M_I|. Throws DomainError
/// when M is not of full row rank.
std::vector<std::size_t> pivot_columns(const RealMatrix& M);

/// ‖Mq‖∞ with exact-zero detection (rational M) or flooring (real M).
BestApproxRecord make_record(const RealMatrix& M, std::vector<long long> q, Method method, unsigned shell);
/// Quality, then smaller norm, then lexicographic q.
bool record_better(const BestApproxRecord& a, const BestApproxRecord& b);

inline constexpr std::uint64_t kDefaultSearchBudget = 400'000'000;
inline constexpr double kAutoExhaustiveLimit = 5e7;

/// Predicted number of inner steps of the exhaustive search.
double exhaustive_work(const RealMatrix& M, std::uint64_t T);

/// Per-shell minimizers by scanning q_J over the box and solving for the
/// pivot coordinates. Throws BudgetError when the predicted work exceeds `budget`.
std::vector<BestApproxRecord> best_approx_exhaustive(const RealMatrix& M, std::uint64_t T,
                                                     std::uint64_t budget = kDefaultSearchBudget);
/// Per-shell minimizers by LLL plus enumeration in the lattice
/// {(Mq/Q, q/X)}; exact shell minima, Q raised until one is found.
std::vector<BestApproxRecord> best_approx_lll(const RealMatrix& M, std::uint64_t T);
std::vector<BestApproxRecord> best_approx(const RealMatrix& M, std::uint64_t T, Method method);

/// Running-best subsequence: strictly decreasing quality along increasing norm.
std::vector<BestApproxRecord> improving(std::span<const BestApproxRecord> records);

struct FlowPoint {
    double t = 0;
    Real systole;                      // Euclidean length of the shortest vector of g_t u_M Z^{m+n}
    std::vector<Integer> q;            // the q realizing it
    unsigned precision = 0;
};

/// g_t = diag(e^{t/m} on Mq, e^{-t/n} on q_J) applied to u_M Z^{m+n}, where J
/// are the non-pivot columns (the last n when M = (I|A)).
FlowPoint flow_shortest(const RealMatrix& M, double t);
/// t = 0 and t_min·2^i up to t_max.
std::vector<FlowPoint> flow_trace(const RealMatrix& M, double t_max, double t_min = 0.125);
/// Columns t, log_systole, witness_vector.
std::string flow_csv(std::span<const FlowPoint> trace);

struct ExponentEstimate {
    double beta_hat = 0;
    bool infinite = false;
    std::pair<double, double> window{0, 0};
    std::size_t records_used = 0;
    std::size_t hull_points = 0;
    double residual = 0;
    unsigned precision_bits = 0;
};

/// Least-squares slope of -log quality against log norm over the vertices of
/// the upper hull of the points with norm in `window`; +∞ on an exact zero.
/// Otherwise throws DomainError with fewer than 5 records in the window.
ExponentEstimate fit_exponent(std::span<const BestApproxRecord> records, std::pair<double, double> window,
                              unsigned precision_bits = kDefaultPrecision);

struct DirichletReport {
    std::size_t m = 0, n = 0;
    double floor = 0;  // n/m
    double tolerance = 0.15;
    bool infinite = false;
    double envelope_exponent = 0;
    double fitted_constant = 0;       // C with D_j ≈ C·2^{-j n/m}
    double pigeonhole_constant = 0;   // ‖M‖∞, a proven bound
    bool pigeonhole_ok = true;
    bool floor_ok = true;
    std::vector<double> best;         // D_j, best quality with ‖q‖∞ ≤ 2^j
    std::vector<long long> radius;    // min(2^j, T)
    Method method = Method::exhaustive;
};

DirichletReport dirichlet_check(const RealMatrix& M, std::uint64_t T, Method method = Method::automatic,
                                double tolerance = 0.15);
DirichletReport dirichlet_from_records(const RealMatrix& M, std::uint64_t T,
                                       std::span<const BestApproxRecord> records, double tolerance = 0.15);

std::string format_q(std::span<const long long> q);
std::string format_q(std::span<const Integer> q);
Report records_report(std::span<const BestApproxRecord> records);
Report estimate_report(const ExponentEstimate& e, double floor, double tolerance);
Report dirichlet_text(const DirichletReport& d);

}  // namespace diophex::dioph
