#include "sqnm/cli/app.hpp"

#include "sqnm/completion.hpp"
#include "sqnm/error.hpp"
#include "sqnm/factorize.hpp"
#include "sqnm/harness.hpp"
#include "sqnm/io/matrix_io.hpp"
#include "sqnm/io/report.hpp"
#include "sqnm/linalg/decompositions.hpp"
#include "sqnm/linalg/random.hpp"
#include "sqnm/schatten.hpp"
#include "sqnm/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <future>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

namespace sqnm::cli {

namespace {

using io::Json;
__extension__ typedef __int128 i128;

Rational reduce(i128 num, i128 den) {
    if (den == 0) fail(ErrorKind::Parse, "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    constexpr i128 limit = std::numeric_limits<std::int64_t>::max();
    if (num > limit || -num > limit || den > limit) fail(ErrorKind::Parse, "rational out of range");
    return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Decimal literal "[-+]digits[.digits]" as an exact fraction.
Rational parse_decimal(std::string_view text, std::string_view whole) {
    auto bad = [&] { fail(ErrorKind::Parse, "not a rational number: '" + std::string(whole) + "'"); };
    if (text.empty()) bad();
    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    i128 num = 0;
    i128 den = 1;
    bool seen_digit = false;
    bool seen_point = false;
    int digits = 0;
    for (char c : text) {
        if (c == '.') {
            if (seen_point) bad();
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') bad();
        if (++digits > 18) fail(ErrorKind::Parse, "too many digits in '" + std::string(whole) + "'");
        num = num * 10 + (c - '0');
        if (seen_point) den *= 10;
        seen_digit = true;
    }
    if (!seen_digit) bad();
    return reduce(negative ? -num : num, den);
}

std::string trimmed(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Config {
    std::string command;
    std::string input;
    std::string format;
    std::string p_text = "1/2";
    std::string parts_text;
    std::optional<std::size_t> d;
    std::optional<double> lambda;
    std::optional<double> lambda_rel;
    std::size_t m = 60;
    std::size_t n = 60;
    std::size_t rank = 4;
    double fraction = 0.5;
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    std::size_t restarts = 20;
    std::optional<std::size_t> max_iters;
    std::optional<double> eps0;
    std::string output;
    std::string save_factors;
    bool no_timing = false;
};

struct Prepared {
    double p = 0.0;
    std::optional<ExponentSplit> split;
};

Prepared prepare_exponents(const Config& cfg, bool need_split) {
    const Rational p = parse_rational(cfg.p_text);
    Prepared out{p.value(), std::nullopt};
    if (!need_split) return out;
    if (cfg.parts_text.empty()) {
        out.split = equal_split(out.p);
        return out;
    }
    const auto parts = parse_rational_list(cfg.parts_text);
    std::vector<double> values;
    for (const auto& r : parts) {
        if (r.num <= 0) fail(ErrorKind::InvalidExponent, "factor exponents must be positive");
        values.push_back(r.value());
    }
    if (p.num > 0 && !harmonic_identity_exact(p, parts)) {
        fail(ErrorKind::SplitMismatch, "sum of 1/p_i over parts '" + cfg.parts_text + "' differs from 1/p = " +
                                           std::to_string(p.den) + "/" + std::to_string(p.num));
    }
    out.split = make_split(out.p, std::move(values));
    return out;
}

Json echo_config(const Config& cfg) {
    Json c;
    c["input"] = cfg.input.empty() ? Json(nullptr) : Json(cfg.input);
    c["p"] = cfg.p_text;
    c["parts"] = cfg.parts_text.empty() ? Json(nullptr) : Json(cfg.parts_text);
    c["d"] = cfg.d ? Json(*cfg.d) : Json(nullptr);
    c["lambda"] = cfg.lambda ? Json(*cfg.lambda) : Json(nullptr);
    c["lambda_rel"] = cfg.lambda_rel ? Json(*cfg.lambda_rel) : Json(nullptr);
    c["m"] = cfg.m;
    c["n"] = cfg.n;
    c["rank"] = cfg.rank;
    c["fraction"] = cfg.fraction;
    c["seed"] = cfg.seed;
    c["trials"] = cfg.trials;
    c["restarts"] = cfg.restarts;
    c["max_iters"] = cfg.max_iters ? Json(*cfg.max_iters) : Json(nullptr);
    return c;
}

DenseMatrix source_matrix(const Config& cfg) {
    if (cfg.input.empty()) return gen_lowrank(cfg.m, cfg.n, cfg.rank, cfg.seed);
    const auto format = cfg.format.empty() ? io::format_from_extension(cfg.input) : io::parse_format(cfg.format);
    return io::load_matrix(cfg.input, format);
}

std::size_t default_inner_dim(const Config& cfg, const DenseMatrix& x) {
    if (cfg.d) return *cfg.d;
    return std::max<std::size_t>(1, numerical_rank(singular_values(x)));
}

Json save_factor_files(const Config& cfg, const FactorSet& fs) {
    Json files = Json::array();
    if (cfg.save_factors.empty()) return files;
    for (std::size_t i = 0; i < fs.arity(); ++i) {
        const std::string path = cfg.save_factors + "_U" + std::to_string(i + 1) + ".mtx";
        io::save_matrix(path, fs.factors[i], io::MatrixFormat::MatrixMarket);
        files.push_back(path);
    }
    return files;
}

Json split_json(const ExponentSplit& split) {
    Json j;
    j["p"] = split.p();
    j["parts"] = std::vector<double>(split.parts().begin(), split.parts().end());
    return j;
}

Json cmd_norm(const Config& cfg) {
    const DenseMatrix x = source_matrix(cfg);
    const Prepared e = prepare_exponents(cfg, false);
    Json r;
    r["metrics"]["norm"] = schatten_norm(x, SchattenExponent(e.p));
    r["metrics"]["iterations"] = 0;
    r["shape"] = {x.rows(), x.cols()};
    return r;
}

Json cmd_factorize(const Config& cfg) {
    const DenseMatrix x = source_matrix(cfg);
    const Prepared e = prepare_exponents(cfg, true);
    const std::size_t d = default_inner_dim(cfg, x);
    const FactorSet fs = optimal_factors(x, *e.split, d);
    const double norm = schatten_norm(x, SchattenExponent(e.p));
    const double product = product_objective(fs, *e.split);

    Json r;
    r["split"] = split_json(*e.split);
    r["metrics"]["norm"] = norm;
    r["metrics"]["product_objective"] = product;
    r["metrics"]["weighted_sum_objective"] = weighted_sum_objective(fs, *e.split);
    r["metrics"]["gap"] = product - norm;
    r["metrics"]["rel_error"] = relative_frobenius_error(fs.product(), x);
    r["metrics"]["iterations"] = 0;
    r["factor_files"] = save_factor_files(cfg, fs);
    return r;
}

Json cmd_verify(const Config& cfg) {
    const DenseMatrix x = source_matrix(cfg);
    const Prepared e = prepare_exponents(cfg, true);
    const std::size_t d = default_inner_dim(cfg, x);
    const VerificationReport audit = bound_audit(x, *e.split, d, cfg.trials, cfg.seed);

    Json r;
    r["split"] = split_json(*e.split);
    r["metrics"]["norm"] = audit.target_norm;
    r["metrics"]["best_found"] = audit.best_found;
    r["metrics"]["gap"] = audit.gap;
    r["metrics"]["iterations"] = audit.trials;
    r["metrics"]["discarded"] = audit.discarded;
    r["metrics"]["min_young_gap"] = audit.min_young_gap;
    r["metrics"]["bound_holds"] = audit.converged;

    if (e.split->all_convex() && cfg.restarts > 0) {
        const VerificationReport search =
            local_min_search(x, *e.split, d, cfg.restarts, cfg.max_iters.value_or(500), derive_seed(cfg.seed, 1));
        Json& ls = r["local_search"];
        ls["best_found"] = search.best_found;
        ls["gap"] = search.gap;
        ls["relative_gap"] = search.target_norm > 0.0 ? search.gap / search.target_norm : 0.0;
        ls["attained"] = search.converged;
        ls["outer_iterations"] = search.outer_iterations;
        ls["restarts"] = search.trials;
    }
    return r;
}

struct CompletionSetup {
    DenseMatrix truth;
    CompletionProblem problem;
};

CompletionSetup completion_setup(const Config& cfg, const ExponentSplit& split) {
    SyntheticInstance inst;
    if (cfg.input.empty()) {
        inst = gen_instance(cfg.m, cfg.n, cfg.rank, cfg.fraction, cfg.seed);
    } else {
        inst.truth = source_matrix(cfg);
        inst.mask = gen_mask(inst.truth.rows(), inst.truth.cols(), cfg.fraction, derive_seed(cfg.seed, 1));
        inst.observed = project_observed(inst.truth, inst.mask);
    }
    double lambda = 0.0;
    if (cfg.lambda) {
        lambda = *cfg.lambda;
    } else {
        lambda = relative_lambda(inst.observed, inst.mask, cfg.lambda_rel.value_or(1e-4));
    }
    const std::size_t d = cfg.d.value_or(std::min(inst.truth.rows(), inst.truth.cols()));
    CompletionProblem prob{inst.observed, inst.mask, lambda, PenaltySpec{split, d}};
    prob.validate();
    return {std::move(inst.truth), std::move(prob)};
}

Json solver_json(const SolveReport& rep, const DenseMatrix& truth, double runtime, bool no_timing) {
    Json s;
    s["rel_error"] = relative_frobenius_error(rep.estimate(), truth);
    s["final_objective"] = rep.final_objective;
    s["iterations"] = rep.iterations;
    s["converged"] = rep.converged;
    s["runtime_seconds"] = no_timing ? 0.0 : runtime;
    s["objective_trace"] = rep.objective_trace;
    return s;
}

Json cmd_complete(const Config& cfg) {
    const Prepared e = prepare_exponents(cfg, true);
    const CompletionSetup setup = completion_setup(cfg, *e.split);
    const SolveOptions options{cfg.max_iters.value_or(2000), 1e-8};
    const SolveReport rep = factored_complete(setup.problem, options);

    Json solver = solver_json(rep, setup.truth, 0.0, true);
    Json r;
    r["split"] = split_json(*e.split);
    r["lambda"] = setup.problem.lambda;
    r["observed_entries"] = setup.problem.mask.observed_count();
    r["objective_trace"] = solver["objective_trace"];
    r["metrics"]["rel_error"] = solver["rel_error"];
    r["metrics"]["iterations"] = rep.iterations;
    r["metrics"]["final_objective"] = rep.final_objective;
    r["metrics"]["converged"] = rep.converged;
    r["factor_files"] = save_factor_files(cfg, rep.factors);
    return r;
}

Json cmd_bench(const Config& cfg) {
    const Prepared e = prepare_exponents(cfg, true);
    const CompletionSetup setup = completion_setup(cfg, *e.split);
    const std::size_t iters = cfg.max_iters.value_or(2000);
    const double eps0 = cfg.eps0.value_or(std::max(1e-8, std::pow(spectral_norm(setup.problem.observed), 2.0)));

    using Timed = std::pair<SolveReport, double>;
    auto factored = std::async(std::launch::async, [&]() -> Timed {
        const auto start = std::chrono::steady_clock::now();
        SolveReport rep = factored_complete(setup.problem, SolveOptions{iters, 1e-8});
        return {std::move(rep), seconds_since(start)};
    });
    auto irls = std::async(std::launch::async, [&]() -> Timed {
        const auto start = std::chrono::steady_clock::now();
        IrlsOptions options;
        options.max_iters = iters;
        SolveReport rep = irls_baseline(setup.problem, e.split->p(), eps0, options);
        return {std::move(rep), seconds_since(start)};
    });
    const Timed f = factored.get();
    const Timed b = irls.get();

    Json r;
    r["split"] = split_json(*e.split);
    r["lambda"] = setup.problem.lambda;
    r["eps0"] = eps0;
    r["solvers"]["factored"] = solver_json(f.first, setup.truth, f.second, cfg.no_timing);
    r["solvers"]["irls"] = solver_json(b.first, setup.truth, b.second, cfg.no_timing);
    r["metrics"]["rel_error"] = r["solvers"]["factored"]["rel_error"];
    r["metrics"]["iterations"] = f.first.iterations + b.first.iterations;
    return r;
}

void add_common(CLI::App* sub, Config& cfg) {
    sub->add_option("--input", cfg.input, "Input matrix file (omit to generate a synthetic low-rank matrix)")
        ->check(CLI::ExistingFile);
    sub->add_option("--format", cfg.format, "Input format: matrix-market or csv (default: by extension)");
    sub->add_option("--p", cfg.p_text, "Target exponent p, e.g. 0.5 or 2/3")->capture_default_str();
    sub->add_option("--m", cfg.m, "Rows of the synthetic matrix")->capture_default_str();
    sub->add_option("--n", cfg.n, "Columns of the synthetic matrix")->capture_default_str();
    sub->add_option("--rank", cfg.rank, "Rank of the synthetic matrix")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--output", cfg.output, "Write the JSON report here instead of stdout");
    sub->add_flag("--no-timing", cfg.no_timing, "Report runtime_seconds as 0 for byte-reproducible output");
}

void add_split(CLI::App* sub, Config& cfg) {
    sub->add_option("--parts", cfg.parts_text, "Factor exponents, comma-separated rationals (default: equal split)");
    sub->add_option("--d", cfg.d, "Inner dimension of the factorization");
}

void add_completion(CLI::App* sub, Config& cfg) {
    add_split(sub, cfg);
    auto* lam = sub->add_option("--lambda", cfg.lambda, "Absolute regularization weight");
    auto* rel = sub->add_option("--lambda-rel", cfg.lambda_rel, "Weight relative to ||P_Omega(D)||_F (default 1e-4)");
    lam->excludes(rel);
    sub->add_option("--fraction", cfg.fraction, "Observed fraction of entries")->capture_default_str();
    sub->add_option("--max-iters", cfg.max_iters, "Iteration cap per solver (default 2000)");
    sub->add_option("--save-factors", cfg.save_factors, "Write factors as <prefix>_U<i>.mtx");
}

std::string scan_output(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--output" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--output=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

void emit(const Json& report, const std::string& output, std::ostream& out) {
    if (output.empty()) {
        out << io::render_report(report);
    } else {
        io::save_report(report, output);
    }
}

int report_error(const std::string& command, std::string_view kind, const std::string& message,
                 const std::string& output, std::ostream& err, int code) {
    err << "error (" << kind << "): " << message << '\n';
    if (!output.empty()) {
        Json j;
        j["command"] = command.empty() ? Json(nullptr) : Json(command);
        j["error"]["kind"] = std::string(kind);
        j["error"]["message"] = message;
        try {
            io::save_report(j, output);
        } catch (const std::exception& e) {
            err << "error (io): " << e.what() << '\n';
        }
    }
    return code;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const std::string s = trimmed(text);
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s, s);
    const Rational a = parse_decimal(trimmed(std::string_view(s).substr(0, slash)), s);
    const Rational b = parse_decimal(trimmed(std::string_view(s).substr(slash + 1)), s);
    if (b.num == 0) fail(ErrorKind::Parse, "zero denominator in '" + s + "'");
    return reduce(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

std::vector<Rational> parse_rational_list(std::string_view text) {
    std::vector<Rational> out;
    std::string_view rest = text;
    for (;;) {
        const auto comma = rest.find(',');
        out.push_back(parse_rational(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

bool harmonic_identity_exact(const Rational& p, const std::vector<Rational>& parts) {
    // Accumulate sum_i den_i / num_i and compare with den_p / num_p.
    Rational sum{0, 1};
    for (const auto& r : parts) {
        if (r.num == 0) return false;
        sum = reduce(static_cast<i128>(sum.num) * r.num + static_cast<i128>(r.den) * sum.den,
                     static_cast<i128>(sum.den) * r.num);
    }
    if (p.num == 0) return false;
    return sum == reduce(p.den, p.num);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Schatten quasi-norm factorization toolkit", "sqnm"};
    app.require_subcommand(1);

    auto* norm = app.add_subcommand("norm", "Schatten-p (quasi-)norm of a matrix");
    add_common(norm, cfg);
    auto* factorize = app.add_subcommand("factorize", "Closed-form optimal factorization");
    add_common(factorize, cfg);
    add_split(factorize, cfg);
    factorize->add_option("--save-factors", cfg.save_factors, "Write factors as <prefix>_U<i>.mtx");
    auto* verify = app.add_subcommand("verify", "Certify the factored minimum numerically");
    add_common(verify, cfg);
    add_split(verify, cfg);
    verify->add_option("--trials", cfg.trials, "Random feasible factorizations to audit")->capture_default_str();
    verify->add_option("--restarts", cfg.restarts, "Local-search restarts (all-convex splits only, 0 to skip)")
        ->capture_default_str();
    verify->add_option("--max-iters", cfg.max_iters, "Iterations per local-search stage (default 500)");
    auto* complete = app.add_subcommand("complete", "Factored Schatten-p matrix completion");
    add_common(complete, cfg);
    add_completion(complete, cfg);
    auto* bench = app.add_subcommand("bench", "Factored solver versus the IRLS baseline on one problem");
    add_common(bench, cfg);
    add_completion(bench, cfg);
    bench->add_option("--eps0", cfg.eps0, "Initial IRLS smoothing (default sigma_max(P_Omega(D))^2)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::string command;
        for (auto* sub : app.get_subcommands()) command = sub->get_name();
        return report_error(command, "usage", e.what(), scan_output(args), err, 2);
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        const auto start = std::chrono::steady_clock::now();
        Json report;
        if (cfg.command == "norm") report = cmd_norm(cfg);
        else if (cfg.command == "factorize") report = cmd_factorize(cfg);
        else if (cfg.command == "verify") report = cmd_verify(cfg);
        else if (cfg.command == "complete") report = cmd_complete(cfg);
        else report = cmd_bench(cfg);
        report["command"] = cfg.command;
        report["config"] = echo_config(cfg);
        report["metrics"]["runtime_seconds"] = cfg.no_timing ? 0.0 : seconds_since(start);
        emit(report, cfg.output, out);
        return 0;
    } catch (const Error& e) {
        return report_error(cfg.command, to_string(e.kind()), e.what(), cfg.output, err, 1);
    } catch (const std::exception& e) {
        return report_error(cfg.command, "internal", e.what(), cfg.output, err, 1);
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace sqnm::cli
