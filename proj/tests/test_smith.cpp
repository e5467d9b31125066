#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace kbnf;

namespace {

const std::vector<KbVariant> kAllVariants = {KbVariant::KB1, KbVariant::KB2, KbVariant::KB3};

SmithOptions with_transforms() {
    SmithOptions opt;
    opt.with_transforms = true;
    opt.with_inverses = true;
    return opt;
}

Int diagonal_product(const ExactMatrix& m, std::size_t k) {
    Int p = 1;
    for (std::size_t i = 1; i <= k; ++i) p *= m(i, i);
    return p;
}

}  // namespace

TEST_CASE("run_length groups a canonical diagonal") {
    REQUIRE(run_length(std::vector<Int>{}) == RunLengthDiagonal{});
    REQUIRE(render_run_length(run_length(std::vector<Int>{})) == "()");

    const RunLengthDiagonal rl = run_length(std::vector<Int>{1, 1, 3, 9, 0, 0});
    REQUIRE(rl == RunLengthDiagonal{{2, Int(1)}, {1, Int(3)}, {1, Int(9)}});
    REQUIRE(render_run_length(rl) == "((2 * 1) (1 * 3) (1 * 9))");

    REQUIRE_THROWS_AS(run_length(std::vector<Int>{-1}), std::invalid_argument);
    REQUIRE_THROWS_AS(run_length(std::vector<Int>{2, 0, 2}), std::invalid_argument);
    REQUIRE_THROWS_AS(run_length(std::vector<Int>{2, 3}), std::invalid_argument);
}

TEST_CASE("variant names round-trip") {
    for (KbVariant v : kAllVariants) REQUIRE(variant_from_name(variant_name(v)) == v);
    REQUIRE(variant_from_name("KB2") == KbVariant::KB2);
    REQUIRE_FALSE(variant_from_name("kb4").has_value());
    REQUIRE_FALSE(variant_from_name("").has_value());
}

TEST_CASE("all variants reduce the 4x5 example to (1, 3, 9)") {
    for (KbVariant v : kAllVariants) {
        CAPTURE(variant_name(v));
        const SmithOutcome out = smith(testing::toy_matrix(), v, with_transforms());
        REQUIRE(out.ok());
        const SmithDecomposition& dec = *out.decomposition;
        REQUIRE(dec.rank == 3);
        REQUIRE(dec.variant == v);
        REQUIRE(render_run_length(dec.run_length) == "((1 * 1) (1 * 3) (1 * 9))");
        REQUIRE(dec.s == ExactMatrix(4, 5, {1, 0, 0, 0, 0,  //
                                            0, 3, 0, 0, 0,  //
                                            0, 0, 9, 0, 0,  //
                                            0, 0, 0, 0, 0}));
        REQUIRE(dec.stats.per_pass_durations.size() == dec.stats.hnf_invocations);

        const VerificationReport rep = verify_decomposition(testing::toy_matrix(), dec);
        REQUIRE(rep.product_ok);
        REQUIRE(rep.dets_ok);
        REQUIRE(rep.chain_ok);
        REQUIRE(rep.minor_gcd_checked);
        REQUIRE(rep.minor_gcd_ok);
        REQUIRE(rep.ok());
    }
}

TEST_CASE("a diagonal matrix costs exactly one pass") {
    ExactMatrix d(3, 4);
    d(1, 1) = 4;
    d(2, 2) = 6;
    d(3, 3) = 10;
    for (KbVariant v : kAllVariants) {
        const SmithOutcome out = smith(d, v);
        REQUIRE(out.ok());
        REQUIRE(out.decomposition->stats.hnf_invocations == 1);
        REQUIRE(render_run_length(out.decomposition->run_length) == "((2 * 2) (1 * 60))");
    }
}

TEST_CASE("divisor chain: partial diagonal products match minor GCDs") {
    SeededRng rng(6021023);
    for (int trial = 0; trial < 12; ++trial) {
        const ExactMatrix m = testing::random_matrix(rng, 4, 5, -9, 9);
        const SmithOutcome out = smith_kb3(m);
        REQUIRE(out.ok());
        const SmithDecomposition& dec = *out.decomposition;
        CAPTURE(trial, dec.rank);
        Int prod = 1;
        for (std::size_t j = 1; j <= dec.rank; ++j) {
            prod *= dec.s(j, j);
            REQUIRE(prod == minor_gcd_oracle(m, j));
        }
        if (dec.rank < std::min(m.rows(), m.cols()))
            REQUIRE(minor_gcd_oracle(m, dec.rank + 1) == 0);
    }
}

TEST_CASE("variants agree with each other and with the planted form") {
    ExperimentConfig cfg;
    cfg.repetitions = 1;
    cfg.rows = 9;
    cfg.cols = 11;
    cfg.rank = 6;
    cfg.diag_max = 18;
    cfg.steps = 80;
    cfg.alpha_max = 8;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const GeneratedInstance inst = generate_instance(cfg, seed, 0);
        RunLengthDiagonal forms[3];
        for (std::size_t vi = 0; vi < 3; ++vi) {
            const SmithOutcome out = smith(inst.matrix, kAllVariants[vi]);
            REQUIRE(out.ok());
            forms[vi] = out.decomposition->run_length;
            REQUIRE(out.decomposition->rank == cfg.rank);
        }
        CAPTURE(seed);
        REQUIRE(forms[0] == inst.planted_smith);
        REQUIRE(forms[1] == inst.planted_smith);
        REQUIRE(forms[2] == inst.planted_smith);
    }
}

TEST_CASE("transforms certify the decomposition") {
    SeededRng rng(52);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t rows = rng.index(6), cols = rng.index(7);
        const ExactMatrix m = testing::random_matrix(rng, rows, cols, -15, 15);
        for (KbVariant v : kAllVariants) {
            const SmithOutcome out = smith(m, v, with_transforms());
            REQUIRE(out.ok());
            const SmithDecomposition& dec = *out.decomposition;
            CAPTURE(trial, variant_name(v), rows, cols);

            const VerificationReport rep = verify_decomposition(m, dec);
            REQUIRE(rep.ok());

            // Accumulated inverses really invert the transforms.
            REQUIRE(matrix_product(*dec.v, *dec.v_inv) == ExactMatrix::identity(rows));
            REQUIRE(matrix_product(*dec.u, *dec.u_inv) == ExactMatrix::identity(cols));
            // And they pull the Smith form back to the input.
            REQUIRE(matrix_product(matrix_product(*dec.v_inv, dec.s), *dec.u_inv) == m);
        }
    }
}

TEST_CASE("decompositions without transforms cannot be verified") {
    const SmithOutcome out = smith_kb3(testing::toy_matrix());
    REQUIRE(out.ok());
    REQUIRE_FALSE(out.decomposition->u.has_value());
    REQUIRE_FALSE(out.decomposition->v.has_value());
    REQUIRE_THROWS_AS(verify_decomposition(testing::toy_matrix(), *out.decomposition),
                      std::invalid_argument);
}

TEST_CASE("zero and tiny matrices") {
    const SmithOutcome z = smith_kb3(ExactMatrix(3, 2));
    REQUIRE(z.ok());
    REQUIRE(z.decomposition->rank == 0);
    REQUIRE(render_run_length(z.decomposition->run_length) == "()");

    const SmithOutcome one = smith_kb1(ExactMatrix(1, 1, {-6}));
    REQUIRE(one.ok());
    REQUIRE(one.decomposition->s(1, 1) == 6);
    REQUIRE(one.decomposition->rank == 1);
}

TEST_CASE("operation budget aborts with diagnostics") {
    SmithOptions opt;
    opt.max_ops = 5;
    const SmithOutcome out = smith(testing::toy_matrix(), KbVariant::KB3, opt);
    REQUIRE_FALSE(out.ok());
    REQUIRE_FALSE(out.decomposition.has_value());
    REQUIRE(out.budget_exhausted.has_value());
    REQUIRE(out.budget_exhausted->ops_used > 5);
    REQUIRE(out.budget_exhausted->ops_used <= 6);

    // max_ops = 0 means unlimited, overriding the KB1 default.
    SmithOptions unlimited;
    unlimited.max_ops = 0;
    REQUIRE(smith(testing::toy_matrix(), KbVariant::KB1, unlimited).ok());
}

TEST_CASE("wall-clock budget aborts a sizable reduction") {
    ExperimentConfig cfg;
    cfg.repetitions = 1;
    cfg.rows = 30;
    cfg.cols = 60;
    cfg.rank = 24;
    cfg.diag_max = 20;
    cfg.steps = 400;
    cfg.alpha_max = 10;
    const GeneratedInstance inst = generate_instance(cfg, 11, 0);

    SmithOptions opt;
    opt.time_budget = std::chrono::duration<double>(0.0);  // elapses before the first op
    const SmithOutcome out = smith(inst.matrix, KbVariant::KB3, opt);
    REQUIRE_FALSE(out.ok());
    REQUIRE(out.budget_exhausted.has_value());
    REQUIRE(out.budget_exhausted->ops_used == 1);  // the deadline is polled on every op
}

TEST_CASE("divisor_normalize canonicalizes a diagonal in place") {
    ExactMatrix d(4, 4);
    d(1, 1) = 6;
    d(2, 2) = 4;
    d(3, 3) = 0;
    d(4, 4) = -9;
    const ExactMatrix d0 = d;
    OpLog log;
    divisor_normalize(d, &log);
    REQUIRE(diagonal_of(d) == std::vector<Int>{1, 6, 36, 0});
    REQUIRE(replay(d0, log) == d);

    ExactMatrix not_diag(2, 2, {1, 1, 0, 1});
    REQUIRE_THROWS_AS(divisor_normalize(not_diag), std::invalid_argument);
}

TEST_CASE("smith stats expose the pass structure") {
    const SmithOutcome out = smith_kb3(testing::toy_matrix());
    REQUIRE(out.ok());
    const SmithStats& st = out.decomposition->stats;
    REQUIRE(st.hnf_invocations >= 2);  // the toy is not triangular, so one pass cannot do it
    REQUIRE(st.hnf_invocations < 64);
    REQUIRE(st.per_pass_durations.size() == st.hnf_invocations);
    Int prod = diagonal_product(out.decomposition->s, out.decomposition->rank);
    REQUIRE(prod == 27);
}
