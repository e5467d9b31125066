#pragma once

// Seeded generation of Smith-nontrivial benchmark matrices, and the
// experiment harness comparing the reduction variants on them.
//
// An instance starts as a rows x cols matrix whose first `rank` diagonal
// entries are random in [1, diag_max], then gets scrambled by a fixed
// number of equivalence-preserving elementary steps.  The planted
// invariant factors are therefore known exactly, which turns every
// benchmark run into a correctness check as well.
//
// Randomness comes from SplitMix64 with the published constants, so a
// (config, seed) pair produces bit-identical matrices on any platform.
// Per-instance streams are derived by mixing the instance index into the
// seed; instances are independent and may be solved in parallel.

#include "kbnf/matrix.hpp"
#include "kbnf/smith.hpp"

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace kbnf {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

// SplitMix64: state advances by the golden-ratio increment, output is the
// finalizer mix of the new state.
class SeededRng {
  public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    explicit SeededRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGamma;
        return detail::mix64(state_);
    }

    // Uniform on [lo, hi], both ends included, unbiased by rejection.
    long long uniform(long long lo, long long hi) {
        assert(lo <= hi);
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t z = next();
        while (z >= limit) z = next();
        return lo + static_cast<long long>(z % span);
    }

    // 1-based index draw.
    std::size_t index(std::size_t count) {
        return static_cast<std::size_t>(uniform(1, static_cast<long long>(count)));
    }

    std::size_t index_other_than(std::size_t count, std::size_t avoid) {
        assert(count >= 2);
        std::size_t i = index(count);
        while (i == avoid) i = index(count);
        return i;
    }

  private:
    std::uint64_t state_;
};

// Independent stream for instance `index` of a run seeded with `seed`.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
    return detail::mix64(seed + (index + 1) * SeededRng::kGamma);
}

// The 7-tuple experiment descriptor: (repetitions, rows, cols, rank,
// diag_max, steps, alpha_max).
struct ExperimentConfig {
    std::size_t repetitions = 1;
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::size_t rank = 1;
    long long diag_max = 1;
    std::size_t steps = 0;
    long long alpha_max = 1;

    void validate() const {
        if (repetitions == 0 || rows == 0 || cols == 0 || rank == 0)
            throw std::invalid_argument("experiment config: counts must be positive");
        if (rank > std::min(rows, cols))
            throw std::invalid_argument("experiment config: rank exceeds min(rows, cols)");
        if (diag_max < 1 || alpha_max < 1)
            throw std::invalid_argument("experiment config: bounds must be positive");
    }
};

inline std::string config_string(const ExperimentConfig& c) {
    return std::to_string(c.repetitions) + ',' + std::to_string(c.rows) + ',' +
           std::to_string(c.cols) + ',' + std::to_string(c.rank) + ',' +
           std::to_string(c.diag_max) + ',' + std::to_string(c.steps) + ',' +
           std::to_string(c.alpha_max);
}

// Parses the comma-separated 7-tuple, e.g. "10,100,300,80,20,300,10".
inline ExperimentConfig parse_experiment_config(const std::string& text) {
    std::vector<long long> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("experiment config: bad number '" + tok + "'");
        }
        if (used != tok.size() || v < 0)
            throw std::invalid_argument("experiment config: bad number '" + tok + "'");
        vals.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (vals.size() != 7)
        throw std::invalid_argument("experiment config: expected 7 comma-separated values");
    ExperimentConfig c;
    c.repetitions = static_cast<std::size_t>(vals[0]);
    c.rows = static_cast<std::size_t>(vals[1]);
    c.cols = static_cast<std::size_t>(vals[2]);
    c.rank = static_cast<std::size_t>(vals[3]);
    c.diag_max = vals[4];
    c.steps = static_cast<std::size_t>(vals[5]);
    c.alpha_max = vals[6];
    c.validate();
    return c;
}

struct GeneratedInstance {
    ExactMatrix matrix;
    std::vector<Int> planted_diagonal;
    RunLengthDiagonal planted_smith;
    std::uint64_t seed = 0;  // derived per-instance seed
};

// One equivalence-preserving scramble round; the five substeps and their
// draw order are fixed for reproducibility.
inline void elementary_step(ExactMatrix& m, SeededRng& rng, long long alpha_max) {
    if (m.rows() < 2 || m.cols() < 2)
        throw std::invalid_argument("elementary_step: need at least 2 rows and 2 columns");
    const std::size_t c1 = rng.index(m.cols());
    const std::size_t c2 = rng.index_other_than(m.cols(), c1);
    swap_cols(m, c1, c2);

    const std::size_t nc = rng.index(m.cols());
    const std::size_t nr = rng.index(m.rows());
    negate_col(m, nc);
    negate_row(m, nr);

    const std::size_t r1 = rng.index(m.rows());
    const std::size_t r2 = rng.index_other_than(m.rows(), r1);
    const long long alpha_r = rng.uniform(-alpha_max, alpha_max);
    row_shear(m, r1, r2, Int(-alpha_r));  // row r2 += alpha * row r1

    const std::size_t s1 = rng.index(m.rows());
    const std::size_t s2 = rng.index_other_than(m.rows(), s1);
    swap_rows(m, s1, s2);

    const std::size_t d1 = rng.index(m.cols());
    const std::size_t d2 = rng.index_other_than(m.cols(), d1);
    const long long alpha_c = rng.uniform(-alpha_max, alpha_max);
    column_shear(m, d1, d2, Int(-alpha_c));  // col d2 += alpha * col d1
}

namespace detail {

// Canonical invariant factors of a positive diagonal: repeated gcd/lcm
// pair fixing, then ascending by the divisor chain.
inline std::vector<Int> canonical_invariants(std::vector<Int> d) {
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j)
                if (d[j] % d[i] != 0) {
                    const Int g = boost::multiprecision::gcd(d[i], d[j]);
                    d[j] = d[i] / g * d[j];
                    d[i] = g;
                    changed = true;
                }
    }
    return d;
}

}  // namespace detail

inline GeneratedInstance generate_instance(const ExperimentConfig& config, std::uint64_t seed,
                                           std::size_t instance_index) {
    config.validate();
    GeneratedInstance inst;
    inst.seed = child_seed(seed, instance_index);
    SeededRng rng(inst.seed);
    ExactMatrix m(config.rows, config.cols);
    for (std::size_t i = 1; i <= config.rank; ++i) {
        m(i, i) = rng.uniform(1, config.diag_max);
        inst.planted_diagonal.push_back(m(i, i));
    }
    inst.planted_smith = run_length(detail::canonical_invariants(inst.planted_diagonal));
    for (std::size_t s = 0; s < config.steps; ++s) elementary_step(m, rng, config.alpha_max);
    inst.matrix = std::move(m);
    return inst;
}

struct InstanceVariantRecord {
    std::size_t instance = 0;  // 1-based
    KbVariant variant = KbVariant::KB3;
    double wall_ms = 0.0;
    std::size_t hnf_invocations = 0;
    bool budget_exhausted = false;
    bool verified = false;
    RunLengthDiagonal smith_form;  // empty when exhausted
};

struct VariantTotals {
    KbVariant variant = KbVariant::KB3;
    double total_ms = 0.0;
    std::size_t exhausted = 0;
    std::size_t mismatched = 0;  // completed but not equal to the planted form
};

struct ExperimentReport {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    DensityStats first_density;
    RunLengthDiagonal first_planted;
    std::vector<InstanceVariantRecord> records;  // instance-major, variant order as requested
    std::vector<VariantTotals> totals;
};

struct ExperimentOptions {
    std::optional<std::uint64_t> max_ops;
    std::optional<std::chrono::duration<double>> time_budget;
    std::size_t jobs = 1;
};

// Runs every requested variant on every generated instance and verifies
// each computed form against the planted one.  Worker threads share
// nothing but the task counter; record slots are disjoint.
inline ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                                       const std::vector<KbVariant>& variants,
                                       const ExperimentOptions& opt = {}) {
    config.validate();
    if (variants.empty()) throw std::invalid_argument("run_experiment: no variants selected");

    std::vector<GeneratedInstance> instances;
    instances.reserve(config.repetitions);
    for (std::size_t i = 0; i < config.repetitions; ++i)
        instances.push_back(generate_instance(config, seed, i));

    ExperimentReport report;
    report.config = config;
    report.seed = seed;
    report.first_density = density_stats(instances.front().matrix);
    report.first_planted = instances.front().planted_smith;
    report.records.resize(config.repetitions * variants.size());

    SmithOptions sopt;
    sopt.max_ops = opt.max_ops;
    sopt.time_budget = opt.time_budget;

    auto solve_task = [&](std::size_t task) {
        const std::size_t inst = task / variants.size();
        const KbVariant variant = variants[task % variants.size()];
        InstanceVariantRecord rec;
        rec.instance = inst + 1;
        rec.variant = variant;
        const auto start = std::chrono::steady_clock::now();
        const SmithOutcome outcome = smith(instances[inst].matrix, variant, sopt);
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        if (outcome.ok()) {
            rec.hnf_invocations = outcome.decomposition->stats.hnf_invocations;
            rec.smith_form = outcome.decomposition->run_length;
            rec.verified = rec.smith_form == instances[inst].planted_smith;
        } else {
            rec.budget_exhausted = true;
            rec.hnf_invocations = outcome.budget_exhausted->hnf_invocations;
        }
        report.records[task] = std::move(rec);
    };

    const std::size_t tasks = report.records.size();
    const std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
    if (jobs == 1) {
        for (std::size_t t = 0; t < tasks; ++t) solve_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(jobs, tasks); ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1))
                    solve_task(t);
            });
        for (auto& th : pool) th.join();
    }

    for (KbVariant v : variants) {
        VariantTotals tot;
        tot.variant = v;
        for (const auto& rec : report.records)
            if (rec.variant == v) {
                tot.total_ms += rec.wall_ms;
                if (rec.budget_exhausted)
                    ++tot.exhausted;
                else if (!rec.verified)
                    ++tot.mismatched;
            }
        report.totals.push_back(tot);
    }
    return report;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace detail

// Line-oriented human-readable report.  Timing lines are dropped when
// `with_timing` is false so outputs can be compared byte for byte.
inline std::string render_text(const ExperimentReport& r, bool with_timing = true) {
    std::string out;
    out += "experiment config=" + config_string(r.config) +
           " seed=" + std::to_string(r.seed) + "\n";
    const double null_pct = 100.0 * r.first_density.null_fraction.convert_to<double>();
    out += "first matrix: " + detail::format_double(null_pct) + "% null, mean |non-null| = " +
           detail::format_double(r.first_density.mean_abs_nonzero.convert_to<double>()) + "\n";
    out += "first planted smith: " + render_run_length(r.first_planted) + "\n";
    for (const auto& rec : r.records) {
        out += std::string("instance ") + std::to_string(rec.instance) + " " +
               variant_name(rec.variant) + ": ";
        if (rec.budget_exhausted)
            out += "budget exhausted";
        else
            out += std::string(rec.verified ? "verified" : "MISMATCH") +
                   " passes=" + std::to_string(rec.hnf_invocations) + " " +
                   render_run_length(rec.smith_form);
        if (with_timing) out += " (" + detail::format_double(rec.wall_ms) + " ms)";
        out += "\n";
    }
    for (const auto& tot : r.totals) {
        out += std::string("total ") + variant_name(tot.variant) + ": exhausted=" +
               std::to_string(tot.exhausted) + " mismatched=" + std::to_string(tot.mismatched);
        if (with_timing) out += " wall_ms=" + detail::format_double(tot.total_ms);
        out += "\n";
    }
    return out;
}

// Machine-readable form: one `key=value` record per instance x variant.
inline std::string render_kv(const ExperimentReport& r, bool with_timing = true) {
    std::string out;
    for (const auto& rec : r.records) {
        out += "config=" + config_string(r.config) + " seed=" + std::to_string(r.seed) +
               " instance=" + std::to_string(rec.instance) +
               " variant=" + variant_name(rec.variant);
        if (with_timing)
            out += " wall_ms=" + detail::format_double(rec.wall_ms);
        out += " hnf_count=" + std::to_string(rec.hnf_invocations) +
               " smith=" + render_run_length(rec.smith_form) +
               " verified=" + (rec.verified ? "true" : "false") +
               " budget_exhausted=" + (rec.budget_exhausted ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace kbnf
