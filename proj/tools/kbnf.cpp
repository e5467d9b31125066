// Command-line front end for the reduction library.
//
// Subcommands: smith, hnf, homology, gen, bench, verify.  Matrix files use
// the plain-text format of matrix_io.hpp.  Exit codes: 0 success, 1 usage
// or parse error, 2 verification failure, 3 operation budget exhausted.
//
// Output is deterministic for fixed inputs; the only nondeterministic
// lines are timings, and --no-timing suppresses them so golden-file tests
// stay stable.

#include "CLI11.hpp"
#include "kbnf/kbnf.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitBudget = 3;

struct BudgetFlags {
    std::optional<std::uint64_t> max_ops;
    std::optional<double> seconds;

    kbnf::SmithOptions to_options(bool with_transforms) const {
        kbnf::SmithOptions opt;
        opt.with_transforms = with_transforms;
        if (max_ops) opt.max_ops = *max_ops;
        if (seconds) opt.time_budget = std::chrono::duration<double>(*seconds);
        return opt;
    }
};

void add_budget_flags(CLI::App& cmd, BudgetFlags& b) {
    cmd.add_option("--budget", b.max_ops,
                   "Elementary-operation cap (0 = unlimited; default: 10^8 for kb1, "
                   "unlimited otherwise)");
    cmd.add_option("--budget-seconds", b.seconds, "Wall-clock cap in seconds");
}

kbnf::KbVariant parse_variant(const std::string& name) {
    const std::optional<kbnf::KbVariant> v = kbnf::variant_from_name(name);
    if (!v) throw CLI::ValidationError("--variant", "unknown variant '" + name + "'");
    return *v;
}

// "260 - 5 - 0 seconds": per-pass wall times floored to whole seconds.
std::string pass_times_string(const kbnf::SmithStats& stats) {
    std::string out;
    for (const auto& d : stats.per_pass_durations) {
        if (!out.empty()) out += " - ";
        out += std::to_string(static_cast<long long>(d.count()));
    }
    return out + " seconds";
}

int report_budget_exhausted(const kbnf::BudgetDiagnostics& diag) {
    std::fprintf(stderr,
                 "budget exhausted: ops=%" PRIu64
                 " columns=%zu mean-digits-below-diagonal=%zu hnf-invocations=%zu\n",
                 diag.ops_used, diag.columns_processed, diag.mean_digits_below_diagonal,
                 diag.hnf_invocations);
    return kExitBudget;
}

int cmd_smith(const std::string& input, kbnf::KbVariant variant, bool transforms,
              const std::string& s_out, const std::string& u_out, const std::string& v_out,
              bool stats, bool no_timing, const BudgetFlags& budget) {
    const bool want_transforms = transforms || !u_out.empty() || !v_out.empty();
    const kbnf::ExactMatrix m = kbnf::read_matrix_file(input);

    const auto t0 = std::chrono::steady_clock::now();
    const kbnf::SmithOutcome out = kbnf::smith(m, variant, budget.to_options(want_transforms));
    const std::chrono::duration<double> total = std::chrono::steady_clock::now() - t0;
    if (!out.ok()) return report_budget_exhausted(*out.budget_exhausted);

    const kbnf::SmithDecomposition& dec = *out.decomposition;
    std::cout << kbnf::render_run_length(dec.run_length) << '\n';
    if (stats) {
        std::cout << "passes: " << dec.stats.hnf_invocations << '\n';
        if (!no_timing) std::cout << "pass times: " << pass_times_string(dec.stats) << '\n';
    }
    if (!no_timing) std::printf("total seconds: %.2f\n", total.count());

    if (!s_out.empty()) kbnf::write_matrix_file(s_out, dec.s);
    if (!u_out.empty()) kbnf::write_matrix_file(u_out, *dec.u);
    if (!v_out.empty()) kbnf::write_matrix_file(v_out, *dec.v);
    return kExitOk;
}

int cmd_hnf(const std::string& input, int style, const std::string& output) {
    const kbnf::ExactMatrix m = kbnf::read_matrix_file(input);
    const kbnf::HermiteResult res = style == 1 ? kbnf::hnf1(m) : kbnf::hnf2(m);

    std::cout << "rank: " << res.rank << '\n';
    std::cout << "diagonal:";
    const std::size_t n = std::min(res.matrix.rows(), res.matrix.cols());
    kbnf::Int product = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        std::cout << ' ' << res.matrix(i, i);
        if (i <= res.rank) product *= res.matrix(i, i);
    }
    std::cout << '\n';
    std::cout << "diagonal product: " << product << '\n';

    if (!output.empty()) kbnf::write_matrix_file(output, res.matrix);
    return kExitOk;
}

int cmd_homology(const std::string& dprime_path, const std::string& d_path,
                 kbnf::KbVariant variant, const std::string& generators_out, bool no_timing) {
    const kbnf::ExactMatrix dprime = kbnf::read_matrix_file(dprime_path);
    const kbnf::ExactMatrix d = kbnf::read_matrix_file(d_path);

    const auto t0 = std::chrono::steady_clock::now();
    kbnf::HomologyResult h;
    try {
        h = kbnf::homology_group(dprime, d, variant);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitVerification;
    }
    const std::chrono::duration<double> total = std::chrono::steady_clock::now() - t0;

    std::cout << kbnf::group_string(h) << '\n';
    if (!no_timing) std::printf("total seconds: %.2f\n", total.count());

    if (!generators_out.empty()) {
        // Columns are the generator cycles, in group_string order: torsion
        // generators first, then the free ones.
        const std::size_t n = dprime.cols(), g = h.generators.size();
        std::ofstream out(generators_out);
        if (!out) throw std::runtime_error("cannot open " + generators_out + " for writing");
        out << "generators: " << g << '\n';
        for (std::size_t j = 0; j < g; ++j) {
            out << "order: " << h.orders[j] << '\n';
            out << kbnf::render_generator_sparse(h.generators[j]) << '\n';
        }
        out.flush();
        if (!out) throw std::runtime_error("write to " + generators_out + " failed");
    }
    return kExitOk;
}

int cmd_gen(const std::string& config_text, std::uint64_t seed, const std::string& out_dir) {
    const kbnf::ExperimentConfig config = kbnf::parse_experiment_config(config_text);
    std::filesystem::create_directories(out_dir);

    std::ofstream manifest(out_dir + "/manifest.txt");
    if (!manifest) throw std::runtime_error("cannot open manifest in " + out_dir);
    manifest << "config: " << kbnf::config_string(config) << '\n';
    manifest << "seed: " << seed << '\n';

    for (std::size_t i = 1; i <= config.repetitions; ++i) {
        // Stream index i-1 keeps instance files aligned with the 1-based
        // instance numbers the bench harness reports for the same seed.
        const kbnf::GeneratedInstance inst = kbnf::generate_instance(config, seed, i - 1);
        char name[32];
        std::snprintf(name, sizeof name, "instance-%04zu.mat", i);
        kbnf::write_matrix_file(out_dir + "/" + name, inst.matrix);
        manifest << "instance: " << i << " file: " << name << " seed: " << inst.seed
                 << " planted: " << kbnf::render_run_length(inst.planted_smith) << '\n';
    }
    manifest.flush();
    if (!manifest) throw std::runtime_error("manifest write failed");
    return kExitOk;
}

int cmd_bench(const std::string& config_text, std::uint64_t seed, const std::string& variants_text,
              const BudgetFlags& budget, std::size_t jobs, bool kv, bool no_timing) {
    const kbnf::ExperimentConfig config = kbnf::parse_experiment_config(config_text);

    std::vector<kbnf::KbVariant> variants;
    std::size_t pos = 0;
    while (pos <= variants_text.size()) {
        const std::size_t comma = variants_text.find(',', pos);
        const std::string tok = variants_text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        variants.push_back(parse_variant(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }

    kbnf::ExperimentOptions opt;
    if (budget.max_ops) opt.max_ops = *budget.max_ops;
    if (budget.seconds) opt.time_budget = std::chrono::duration<double>(*budget.seconds);
    opt.jobs = jobs;

    const kbnf::ExperimentReport report = kbnf::run_experiment(config, seed, variants, opt);
    std::cout << (kv ? kbnf::render_kv(report, !no_timing)
                     : kbnf::render_text(report, !no_timing));

    for (const auto& rec : report.records)
        if (!rec.budget_exhausted && !rec.verified) return kExitVerification;
    return kExitOk;
}

int cmd_verify(const std::string& d_path, const std::string& s_path, const std::string& u_path,
               const std::string& v_path) {
    const kbnf::ExactMatrix d = kbnf::read_matrix_file(d_path);

    kbnf::SmithDecomposition dec;
    dec.s = kbnf::read_matrix_file(s_path);
    dec.u = kbnf::read_matrix_file(u_path);
    dec.v = kbnf::read_matrix_file(v_path);
    for (std::size_t i = 1; i <= std::min(dec.s.rows(), dec.s.cols()); ++i)
        if (dec.s(i, i) != 0) ++dec.rank;

    const kbnf::VerificationReport rep = kbnf::verify_decomposition(d, dec);
    std::cout << "product: " << (rep.product_ok ? "ok" : "FAIL") << '\n';
    std::cout << "determinants: " << (rep.dets_ok ? "ok" : "FAIL") << '\n';
    std::cout << "divisor chain: " << (rep.chain_ok ? "ok" : "FAIL") << '\n';
    if (rep.minor_gcd_checked)
        std::cout << "minor gcd: " << (rep.minor_gcd_ok ? "ok" : "FAIL") << '\n';
    std::cout << "verification: " << (rep.ok() ? "PASS" : "FAIL") << '\n';
    return rep.ok() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Hermite/Smith reduction toolkit"};
    app.require_subcommand(1);

    // smith
    std::string smith_input, smith_variant = "kb3", smith_s, smith_u, smith_v;
    bool smith_transforms = false, smith_stats = false, smith_no_timing = false;
    BudgetFlags smith_budget;
    CLI::App* smith = app.add_subcommand("smith", "Smith normal form of a matrix file");
    smith->add_option("input", smith_input, "Matrix file")->required();
    smith->add_option("--variant", smith_variant, "kb1, kb2, or kb3 (default kb3)");
    smith->add_flag("--transforms", smith_transforms,
                    "Track the unimodular transforms (requires --u-out and --v-out)");
    smith->add_option("--s-out", smith_s, "Write the Smith matrix here");
    smith->add_option("--u-out", smith_u, "Write the right transform here");
    smith->add_option("--v-out", smith_v, "Write the left transform here");
    smith->add_flag("--stats", smith_stats, "Print pass count and per-pass times");
    smith->add_flag("--no-timing", smith_no_timing, "Suppress timing lines");
    add_budget_flags(*smith, smith_budget);

    // hnf
    std::string hnf_input, hnf_output;
    int hnf_style = 1;
    CLI::App* hnf = app.add_subcommand("hnf", "Hermite normal form of a matrix file");
    hnf->add_option("input", hnf_input, "Matrix file")->required();
    hnf->add_option("--style", hnf_style, "1 = column-style lower, 2 = row-style upper")
        ->check(CLI::Range(1, 2));
    hnf->add_option("--output", hnf_output, "Write the reduced matrix here");

    // homology
    std::string hom_dprime, hom_d, hom_variant = "kb3", hom_generators;
    bool hom_no_timing = false;
    CLI::App* hom = app.add_subcommand("homology", "Homology group ker d' / im d");
    hom->add_option("dprime", hom_dprime, "Boundary matrix d' (the kernel one)")->required();
    hom->add_option("d", hom_d, "Boundary matrix d (the image one)")->required();
    hom->add_option("--variant", hom_variant, "kb1, kb2, or kb3 (default kb3)");
    hom->add_option("--generators", hom_generators, "Write generator cycles here");
    hom->add_flag("--no-timing", hom_no_timing, "Suppress timing lines");

    // gen
    std::string gen_config, gen_out = ".";
    std::uint64_t gen_seed = 0;
    CLI::App* gen = app.add_subcommand("gen", "Generate benchmark instances");
    gen->add_option("--config", gen_config, "repetitions,rows,cols,rank,diag_max,steps,alpha_max")
        ->required();
    gen->add_option("--seed", gen_seed, "Base seed (required; no implicit entropy)")->required();
    gen->add_option("--out", gen_out, "Output directory (default .)");

    // bench
    std::string bench_config, bench_variants = "kb1,kb2,kb3";
    std::uint64_t bench_seed = 0;
    std::size_t bench_jobs = 1;
    bool bench_kv = false, bench_no_timing = false;
    BudgetFlags bench_budget;
    CLI::App* bench = app.add_subcommand("bench", "Run a reduction experiment");
    bench->add_option("--config", bench_config, "repetitions,rows,cols,rank,diag_max,steps,alpha_max")
        ->required();
    bench->add_option("--seed", bench_seed, "Base seed (required; no implicit entropy)")->required();
    bench->add_option("--variants", bench_variants, "Comma-separated variant list");
    bench->add_option("--jobs", bench_jobs, "Worker threads over instance/variant tasks");
    bench->add_flag("--kv", bench_kv, "Key-value report format instead of text");
    bench->add_flag("--no-timing", bench_no_timing, "Suppress timing fields");
    add_budget_flags(*bench, bench_budget);

    // verify
    std::string ver_d, ver_s, ver_u, ver_v;
    CLI::App* ver = app.add_subcommand("verify", "Check s == v * d * u and the divisor chain");
    ver->add_option("d", ver_d, "Original matrix file")->required();
    ver->add_option("s", ver_s, "Smith matrix file")->required();
    ver->add_option("u", ver_u, "Right transform file")->required();
    ver->add_option("v", ver_v, "Left transform file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (smith->parsed()) {
            if (smith_transforms && (smith_u.empty() || smith_v.empty()))
                throw std::invalid_argument("--transforms requires --u-out and --v-out");
            return cmd_smith(smith_input, parse_variant(smith_variant), smith_transforms, smith_s,
                             smith_u, smith_v, smith_stats, smith_no_timing, smith_budget);
        }
        if (hnf->parsed()) return cmd_hnf(hnf_input, hnf_style, hnf_output);
        if (hom->parsed())
            return cmd_homology(hom_dprime, hom_d, parse_variant(hom_variant), hom_generators,
                                hom_no_timing);
        if (gen->parsed()) return cmd_gen(gen_config, gen_seed, gen_out);
        if (bench->parsed())
            return cmd_bench(bench_config, bench_seed, bench_variants, bench_budget, bench_jobs,
                             bench_kv, bench_no_timing);
        if (ver->parsed()) return cmd_verify(ver_d, ver_s, ver_u, ver_v);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
