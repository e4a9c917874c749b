#include "diophex/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "diophex/dioph.hpp"
#include "diophex/errors.hpp"
#include "diophex/nilexp.hpp"
#include "diophex/pencil.hpp"

#ifndef DIOPHEX_VERSION
#define DIOPHEX_VERSION "dev"
#endif

namespace diophex::cli {

namespace {

struct Common {
    std::uint64_t seed = 1;
    unsigned precision = kDefaultPrecision;
    std::string out;
};

struct EstimateArgs {
    std::string matrix;
    std::uint64_t max_norm = 10000;
    std::string method = "auto";
    double window_min = 1;
    double window_max = 0;  // 0: up to max-norm
    double tolerance = 0.15;
    std::uint64_t budget = dioph::kDefaultSearchBudget;
};

struct PencilArgs {
    std::string family;
    std::size_t height = 1;
    std::uint64_t budget = 20'000'000;
};

struct NilpotentArgs {
    std::string group;
    unsigned k = 0;
    bool via_pencils = false;
    std::size_t height = 1;
    std::uint64_t budget = 20'000'000;
};

struct FlowArgs {
    std::string matrix;
    double t_max = 8;
    double t_min = 0.125;
};

struct SubmodularArgs {
    std::string instance = "f2-cyclic4";
};

struct BallArgs {
    std::string generators;
    std::string group = "heisenberg:3";
    std::size_t n_max = 12;
    double beta = 1.0;
    std::uint64_t budget = 10'000'000;
};

struct Outcome {
    int status = kExitOk;
    std::string text;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Header shared by every report: tool, command and the full config, in the
// order the options were declared.
Report header(const CLI::App& sub) {
    Report r;
    r.add("tool", "diophex " + version());
    r.add("command", sub.get_name());
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (name == "help") continue;
        std::string value;
        if (opt->get_expected_max() == 0) {
            value = opt->count() ? "true" : "false";
        } else if (opt->count()) {
            for (const auto& s : opt->results()) value += (value.empty() ? "" : " ") + s;
        } else {
            value = opt->get_default_str().empty() ? "none" : opt->get_default_str();
        }
        r.add("config." + name, value);
    }
    return r;
}

Outcome cmd_estimate(const CLI::App& sub, const Common& c, const EstimateArgs& a) {
    using namespace dioph;
    const auto M = RealMatrix::parse(read_file(a.matrix), c.precision);
    Method method = parse_method(a.method);
    if (method == Method::automatic)
        method = exhaustive_work(M, a.max_norm) <= kAutoExhaustiveLimit ? Method::exhaustive : Method::lll;
    const auto recs = method == Method::exhaustive ? best_approx_exhaustive(M, a.max_norm, a.budget)
                                                   : best_approx_lll(M, a.max_norm);
    const auto imp = improving(recs);
    const double wmax = a.window_max > 0 ? a.window_max : static_cast<double>(a.max_norm);
    const auto est = fit_exponent(imp, {a.window_min, wmax}, c.precision);
    const auto dir = dirichlet_from_records(M, a.max_norm, recs, a.tolerance);

    Report r = header(sub);
    r.add("matrix_hash", M.hash());
    r.add("shape", std::to_string(M.m()) + "x" + std::to_string(M.cols()) + " (m=" + std::to_string(M.m()) +
                       ", n=" + std::to_string(M.n()) + ")");
    r.add("exact_input", M.is_exact());
    r.add("method", to_string(method));
    r.add("precision_bits", c.precision);
    r.add("norm", "sup for q and Mq");
    r.merge(records_report(recs));
    r.add("improving_records", imp.size());
    r.merge(estimate_report(est, dir.floor, a.tolerance));
    r.add("dirichlet_envelope_exponent",
          dir.infinite ? std::string("+inf (exact integer relation)") : fmt(dir.envelope_exponent));
    r.add("dirichlet_pigeonhole_bound_holds", dir.pigeonhole_ok);
    r.add("certification", method == Method::exhaustive
                               ? "shell minima exact for norm <= " + std::to_string(a.max_norm) +
                                     "; double screening with error bound, exact or working-precision refinement"
                               : "shell minima exact for norm <= " + std::to_string(a.max_norm) +
                                     "; LLL plus complete enumeration, working precision");
    r.add("zero_detection", M.is_exact() ? "exact rational arithmetic" : "disabled for non-rational input");
    return {kExitOk, r.str()};
}

Outcome cmd_pencil(const CLI::App& sub, const Common&, const PencilArgs& a) {
    if (a.height == 0) throw CLI::ValidationError("--height", "height must be >= 1");
    const auto fam = pencil::MatrixFamily::parse(read_file(a.family),
                                                 std::filesystem::path(a.family).filename().string());
    pencil::SearchOptions o;
    o.height = a.height;
    o.budget = a.budget;
    const auto b = pencil::bounds(fam, o);
    Report r = header(sub);
    r.merge(pencil::bounds_report(fam, b));
    return {kExitOk, r.str()};
}

Outcome cmd_nilpotent(const CLI::App& sub, const Common& c, const NilpotentArgs& a) {
    using namespace nilexp;
    const auto g = GroupSpec::parse(a.group);
    g.require_k(a.k);
    Report r = header(sub);
    r.add("group", g.descriptor());
    r.add("k", a.k);
    r.add("threshold", g.threshold_text());
    if (has_closed_formula(g)) {
        r.add("beta_closed", beta_closed(g, a.k).get_str());
        r.add("beta_limit", beta_limit(g).get_str());
    } else {
        r.add("beta_closed", "no closed formula");
    }
    int status = kExitOk;
    if (a.via_pencils) {
        const auto p = beta_via_pencils(g, a.k, a.height, c.seed, a.budget);
        r.merge(pencil_exponent_report(g, a.k, p), "pencil.");
        r.add("certification", "pencil maximum over height <= " + std::to_string(a.height) +
                                   " flats plus substitution-invariant subspaces");
        if (p.closed && !p.calibrated) status = kExitMismatch;
    }
    return {status, r.str()};
}

Outcome cmd_flow(const CLI::App& sub, const Common& c, const FlowArgs& a) {
    const auto M = dioph::RealMatrix::parse(read_file(a.matrix), c.precision);
    const auto trace = dioph::flow_trace(M, a.t_max, a.t_min);
    Report r = header(sub);
    r.add("matrix_hash", M.hash());
    r.add("precision_bits", c.precision);
    r.add("weights", "e^{t/m} on Mq, e^{-t/n} on q_J");
    r.add("norm", "euclidean");
    r.add("certification", "systole by LLL plus complete enumeration below the first reduced vector");
    std::string text;
    for (const auto& [k, v] : r.entries()) text += "# " + k + ": " + v + "\n";
    return {kExitOk, text + dioph::flow_csv(trace)};
}

Outcome cmd_submodular(const CLI::App& sub, const Common&, const SubmodularArgs& a) {
    const auto inst = nilexp::builtin_instance(a.instance);
    Report r = header(sub);
    r.add("certification", "exhaustive over every subspace of F_p^d");
    try {
        const auto res = nilexp::submodular_min_check(inst);
        r.merge(nilexp::submodular_report(inst, res));
        return {kExitOk, r.str()};
    } catch (const HypothesisError& e) {
        r.add("instance", inst.description);
        r.add("verdict", std::string("hypotheses rejected: ") + e.what());
        return {kExitUsage, r.str()};
    }
}

Outcome cmd_ball(const CLI::App& sub, const Common&, const BallArgs& a) {
    const auto g = nilexp::GroupSpec::parse(a.group);
    const auto gens = a.generators.empty() ? nilexp::integral_heisenberg_generators()
                                           : nilexp::parse_generators(read_file(a.generators));
    const auto res = nilexp::group_ball_check(g, gens, a.n_max, a.beta, a.budget);
    Report r = header(sub);
    r.add("generators", a.generators.empty() ? std::string("builtin integral Heisenberg") : a.generators);
    r.merge(nilexp::ball_report(res));
    r.add("certification", "exact enumeration of S^n for n <= " + std::to_string(a.n_max));
    return {kExitOk, r.str()};
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--precision-bits", c.precision, "working precision in bits (>= 64)")->capture_default_str();
    sub->add_option("--out", c.out, "write the report here instead of stdout");
}

}  // namespace

std::string version() { return DIOPHEX_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Diophantine exponents of matrices, matrix families and nilpotent groups", "diophex");
    app.set_version_flag("--version", "diophex " + version());
    app.require_subcommand(1);

    Common common;
    EstimateArgs est;
    PencilArgs pen;
    NilpotentArgs nil;
    FlowArgs flow;
    SubmodularArgs subm;
    BallArgs ball;

    auto* s_est = app.add_subcommand("estimate", "estimate beta(M) from best approximations");
    s_est->add_option("--matrix", est.matrix, "matrix file")->required();
    s_est->add_option("--max-norm", est.max_norm, "largest ‖q‖∞ searched")->capture_default_str()
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    s_est->add_option("--method", est.method, "exhaustive, lll or auto")->capture_default_str()
        ->check(CLI::IsMember({"auto", "exhaustive", "lll"}));
    s_est->add_option("--window-min", est.window_min, "smallest norm used in the fit")->capture_default_str();
    s_est->add_option("--window-max", est.window_max, "largest norm used in the fit (0: max-norm)")
        ->capture_default_str();
    s_est->add_option("--tolerance", est.tolerance, "allowed shortfall below n/m")->capture_default_str();
    s_est->add_option("--budget", est.budget, "exhaustive search step budget")->capture_default_str();
    add_common(s_est, common);

    auto* s_pen = app.add_subcommand("pencil", "pencil bounds for a sampled matrix family");
    s_pen->add_option("--family", pen.family, "family file")->required();
    s_pen->add_option("--height", pen.height, "height bound of rational subspaces")->capture_default_str();
    s_pen->add_option("--budget", pen.budget, "subspace evaluation budget")->capture_default_str();
    add_common(s_pen, common);

    auto* s_nil = app.add_subcommand("nilpotent", "exponent beta_k of a nilpotent group");
    s_nil->add_option("--group", nil.group, "heisenberg:<dim>, two_step:<d>:<p>, ut:<n> or free:<g>:<s>")
        ->required();
    s_nil->add_option("--k", nil.k, "number of generators")->required();
    s_nil->add_flag("--via-pencils", nil.via_pencils, "recompute through pencils of the word map");
    s_nil->add_option("--height", nil.height, "height bound for the pencil search")->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
    s_nil->add_option("--budget", nil.budget, "subspace evaluation budget")->capture_default_str();
    add_common(s_nil, common);

    auto* s_flow = app.add_subcommand("flow", "systole trace of the diagonal flow");
    s_flow->add_option("--matrix", flow.matrix, "matrix file")->required();
    s_flow->add_option("--t-max", flow.t_max, "last flow time")->capture_default_str()
        ->check(CLI::Range(0.0, 200.0));
    s_flow->add_option("--t-min", flow.t_min, "first positive flow time; later ones double")
        ->capture_default_str()->check(CLI::PositiveNumber);
    add_common(s_flow, common);

    auto* s_sub = app.add_subcommand("check-submodular", "minimize phi(W)/dim W over all subspaces");
    s_sub->add_option("--instance", subm.instance, "builtin instance")->capture_default_str()
        ->check(CLI::IsMember({"f2-cyclic4", "planted-nonsubmodular", "trivial-group", "identity-phi"}));
    add_common(s_sub, common);

    auto* s_ball = app.add_subcommand("ball", "check that balls S^n stay away from the identity");
    s_ball->add_option("--generators", ball.generators, "generator file (default: integral Heisenberg)");
    s_ball->add_option("--group", ball.group, "group whose growth exponent is compared")->capture_default_str();
    s_ball->add_option("--n-max", ball.n_max, "largest ball radius")->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
    s_ball->add_option("--beta", ball.beta, "exponent to verify")->capture_default_str();
    s_ball->add_option("--budget", ball.budget, "element budget")->capture_default_str();
    add_common(s_ball, common);

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Outcome o;
        const CLI::App* sub = app.get_subcommands().front();
        if (sub == s_est) o = cmd_estimate(*sub, common, est);
        else if (sub == s_pen) o = cmd_pencil(*sub, common, pen);
        else if (sub == s_nil) o = cmd_nilpotent(*sub, common, nil);
        else if (sub == s_flow) o = cmd_flow(*sub, common, flow);
        else if (sub == s_sub) o = cmd_submodular(*sub, common, subm);
        else o = cmd_ball(*sub, common, ball);

        if (common.out.empty()) {
            out << o.text;
        } else {
            std::ofstream f(common.out);
            if (!f) throw ParseError("cannot write '" + common.out + "'");
            f << o.text;
        }
        return o.status;
    } catch (const CLI::ValidationError& e) {
        err << "diophex: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BudgetError& e) {
        err << "diophex: budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ScaleError& e) {
        err << "diophex: beyond desk scale: " << e.what() << "\n";
        return kExitBudget;
    } catch (const Error& e) {
        err << "diophex: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace diophex::cli
