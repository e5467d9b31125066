#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "helpers.hpp"

using namespace kbnf;

TEST_CASE("SplitMix64 matches the published reference outputs") {
    SeededRng zero(0);
    REQUIRE(zero.next() == 0xE220A8397B1DCDAFull);
    REQUIRE(zero.next() == 0x6E789E6AA1B965F4ull);
    REQUIRE(zero.next() == 0x06C45D188009454Full);
    REQUIRE(zero.next() == 0xF88BB8A8724C81ECull);
    REQUIRE(zero.next() == 0x1B39896A51A8749Bull);

    SeededRng other(1234567);
    REQUIRE(other.next() == 0x599ED017FB08FC85ull);
    REQUIRE(other.next() == 0x2C73F08458540FA5ull);
    REQUIRE(other.next() == 0x883EBCE5A3F27C77ull);
}

TEST_CASE("uniform draws stay inside closed bounds") {
    SeededRng rng(99);
    std::set<long long> seen;
    long long sum = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        const long long v = rng.uniform(-5, 5);
        REQUIRE(v >= -5);
        REQUIRE(v <= 5);
        seen.insert(v);
        sum += v;
    }
    REQUIRE(seen.size() == 11);  // every value of the support shows up
    REQUIRE(std::abs(sum) < draws / 10);

    REQUIRE(rng.uniform(7, 7) == 7);
    const long long big = rng.uniform(-4'000'000'000LL, 4'000'000'000LL);
    REQUIRE(big >= -4'000'000'000LL);
    REQUIRE(big <= 4'000'000'000LL);
}

TEST_CASE("index draws are 1-based") {
    SeededRng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t v = rng.index(7);
        REQUIRE(v >= 1);
        REQUIRE(v <= 7);
    }
    for (int i = 0; i < 2000; ++i) REQUIRE(rng.index_other_than(4, 2) != 2);
    for (int i = 0; i < 100; ++i) REQUIRE(rng.index(1) == 1);
}

TEST_CASE("per-instance child streams are distinct and deterministic") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 200; ++i) seeds.insert(child_seed(31415, i));
    REQUIRE(seeds.size() == 200);
    REQUIRE(child_seed(31415, 7) == child_seed(31415, 7));
    REQUIRE(child_seed(31415, 7) != child_seed(31416, 7));
}

TEST_CASE("experiment config parsing") {
    const ExperimentConfig c = parse_experiment_config("10,100,300,80,20,300,10");
    REQUIRE(c.repetitions == 10);
    REQUIRE(c.rows == 100);
    REQUIRE(c.cols == 300);
    REQUIRE(c.rank == 80);
    REQUIRE(c.diag_max == 20);
    REQUIRE(c.steps == 300);
    REQUIRE(c.alpha_max == 10);
    REQUIRE(config_string(c) == "10,100,300,80,20,300,10");

    REQUIRE_THROWS_AS(parse_experiment_config("1,2,3"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_experiment_config("1,2,3,4,5,6,7,8"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_experiment_config("1,2,x,4,5,6,7"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_experiment_config("1,2,-3,4,5,6,7"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_experiment_config("1,2,3,9,5,6,7"), std::invalid_argument);  // rank
    REQUIRE_THROWS_AS(parse_experiment_config("0,2,3,2,5,6,7"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_experiment_config(""), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_experiment_config("1,2,3,2,5,6,"), std::invalid_argument);
}

TEST_CASE("canonical invariants form an ascending divisor chain") {
    using detail::canonical_invariants;
    REQUIRE(canonical_invariants({Int(4), Int(6)}) == std::vector<Int>{2, 12});
    REQUIRE(canonical_invariants({Int(6), Int(4)}) == std::vector<Int>{2, 12});
    REQUIRE(canonical_invariants({Int(2), Int(3), Int(5)}) == std::vector<Int>{1, 1, 30});
    REQUIRE(canonical_invariants({Int(9), Int(9)}) == std::vector<Int>{9, 9});

    SeededRng rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Int> d;
        Int prod_before = 1;
        for (std::size_t i = 0; i < rng.index(5); ++i) {
            d.push_back(Int(rng.uniform(1, 50)));
            prod_before *= d.back();
        }
        const std::vector<Int> c = canonical_invariants(d);
        REQUIRE(c.size() == d.size());
        Int prod_after = 1;
        for (std::size_t i = 0; i < c.size(); ++i) {
            prod_after *= c[i];
            if (i > 0) REQUIRE(c[i] % c[i - 1] == 0);
        }
        REQUIRE(prod_before == prod_after);  // pair fixes preserve the product
    }
}

TEST_CASE("generated instances are reproducible and carry their plant") {
    ExperimentConfig cfg;
    cfg.repetitions = 3;
    cfg.rows = 6;
    cfg.cols = 8;
    cfg.rank = 4;
    cfg.diag_max = 12;
    cfg.steps = 40;
    cfg.alpha_max = 6;

    const GeneratedInstance a = generate_instance(cfg, 2718, 1);
    const GeneratedInstance b = generate_instance(cfg, 2718, 1);
    REQUIRE(a.matrix == b.matrix);
    REQUIRE(a.planted_diagonal == b.planted_diagonal);
    REQUIRE(a.planted_smith == b.planted_smith);
    REQUIRE(a.seed == child_seed(2718, 1));

    const GeneratedInstance c = generate_instance(cfg, 2718, 2);
    REQUIRE(a.matrix != c.matrix);

    REQUIRE(a.planted_diagonal.size() == cfg.rank);
    for (const Int& d : a.planted_diagonal) {
        REQUIRE(d >= 1);
        REQUIRE(d <= cfg.diag_max);
    }
    REQUIRE(a.planted_smith == run_length(detail::canonical_invariants(a.planted_diagonal)));

    // Scrambling is equivalence-preserving: rank and Smith form survive.
    REQUIRE(rank_oracle(a.matrix) == cfg.rank);
    const SmithOutcome out = smith_kb3(a.matrix);
    REQUIRE(out.ok());
    REQUIRE(out.decomposition->run_length == a.planted_smith);
}

TEST_CASE("scrambling needs two rows and two columns") {
    ExactMatrix thin(1, 5, {1, 2, 3, 4, 5});
    SeededRng rng(1);
    REQUIRE_THROWS_AS(elementary_step(thin, rng, 3), std::invalid_argument);
}

TEST_CASE("experiment harness runs every variant on every instance") {
    const ExperimentConfig cfg = parse_experiment_config("4,6,8,4,10,30,5");
    const std::vector<KbVariant> variants = {KbVariant::KB1, KbVariant::KB2, KbVariant::KB3};

    const ExperimentReport rep = run_experiment(cfg, 777, variants);
    REQUIRE(rep.records.size() == 12);
    for (const auto& rec : rep.records) {
        REQUIRE(rec.verified);
        REQUIRE_FALSE(rec.budget_exhausted);
        if (rec.instance == 1) REQUIRE(rec.smith_form == rep.first_planted);
    }
    REQUIRE(rep.totals.size() == 3);
    for (const auto& tot : rep.totals) {
        REQUIRE(tot.exhausted == 0);
        REQUIRE(tot.mismatched == 0);
    }

    const std::string text = render_text(rep, false);
    REQUIRE(text.find("experiment config=4,6,8,4,10,30,5") != std::string::npos);
    REQUIRE(text.find("instance 1 kb1: verified") != std::string::npos);
    REQUIRE(text.find("total kb3: exhausted=0 mismatched=0") != std::string::npos);
    REQUIRE(text.find(" ms)") == std::string::npos);  // timing suppressed
}

TEST_CASE("parallel workers reproduce the sequential report") {
    const ExperimentConfig cfg = parse_experiment_config("6,7,9,5,12,40,6");
    const std::vector<KbVariant> variants = {KbVariant::KB2, KbVariant::KB3};

    ExperimentOptions seq;
    seq.jobs = 1;
    ExperimentOptions par;
    par.jobs = 4;
    const ExperimentReport a = run_experiment(cfg, 555, variants, seq);
    const ExperimentReport b = run_experiment(cfg, 555, variants, par);
    REQUIRE(render_kv(a, false) == render_kv(b, false));
}

TEST_CASE("budget exhaustion is recorded, not thrown") {
    const ExperimentConfig cfg = parse_experiment_config("2,6,8,4,10,30,5");
    ExperimentOptions opt;
    opt.max_ops = 3;
    const ExperimentReport rep = run_experiment(cfg, 1, {KbVariant::KB3}, opt);
    REQUIRE(rep.records.size() == 2);
    for (const auto& rec : rep.records) {
        REQUIRE(rec.budget_exhausted);
        REQUIRE(rec.smith_form.empty());
    }
    REQUIRE(rep.totals[0].exhausted == 2);

    const std::string kv = render_kv(rep, false);
    REQUIRE(kv.find("budget_exhausted=true") != std::string::npos);
    REQUIRE(kv.find("smith=()") != std::string::npos);
}
