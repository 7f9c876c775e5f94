#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "tabhash/harness.hpp"
#include "tabhash/selftest.hpp"

using namespace tabhash;

namespace {

ExperimentConfig base_config(const std::string& cmd) {
    ExperimentConfig cfg;
    cfg.cmd = cmd;
    cfg.spec = KeySpec{2, 8};
    cfg.trials = 6;
    cfg.seed = 2024;
    return cfg;
}

}  // namespace

TEST_CASE("trial seed derivation") {
    REQUIRE(trial_seed(0, 0) == splitmix64(0));
    REQUIRE(trial_seed(123, 5) == (123ULL ^ splitmix64(5)));
}

TEST_CASE("csv rendering embeds config and formats floats to six digits") {
    auto cfg = base_config("maxload");
    OutputTable t;
    t.columns = {"a", "b"};
    t.row({0.123456789, nlohmann::json()});
    const std::string csv = render_csv(cfg, t);
    REQUIRE(csv.find("# tabhash-lab version=") == 0);
    REQUIRE(csv.find("# config {") != std::string::npos);
    REQUIRE(csv.find("\"cmd\":\"maxload\"") != std::string::npos);
    REQUIRE(csv.find("a,b\n") != std::string::npos);
    REQUIRE(csv.find("0.123457,\n") != std::string::npos);

    const auto j = render_json(cfg, t);
    REQUIRE(j["config"]["cmd"] == "maxload");
    REQUIRE(j["rows"].size() == 1);
}

TEST_CASE("maxload runs are deterministic and paired across d") {
    auto cfg = base_config("maxload");
    cfg.d_list = {1, 2};
    cfg.bin_bits = 6;
    cfg.m = 128;
    const auto r1 = run_maxload(cfg);
    const auto r2 = run_maxload(cfg);
    REQUIRE(render_csv(cfg, maxload_table(cfg, r1)) ==
            render_csv(cfg, maxload_table(cfg, r2)));
    REQUIRE(r1.arms.size() == 2);
    REQUIRE(r1.arms[0].loads == r2.arms[0].loads);

    // thread count must not change results
    setenv("TABHASH_THREADS", "3", 1);
    const auto r3 = run_maxload(cfg);
    unsetenv("TABHASH_THREADS");
    REQUIRE(r1.arms[0].loads == r3.arms[0].loads);
    REQUIRE(r1.arms[1].loads == r3.arms[1].loads);
}

TEST_CASE("maxload with a single ball reports load one") {
    auto cfg = base_config("maxload");
    cfg.d_list = {2};
    cfg.bin_bits = 4;
    cfg.m = 1;
    cfg.trials = 1;
    const auto r = run_maxload(cfg);
    REQUIRE(r.arms[0].loads == std::vector<std::uint32_t>{1});
    REQUIRE(r.arms[0].mean == 1.0);
}

TEST_CASE("n-bits pairing requires power-of-two d") {
    auto cfg = base_config("maxload");
    cfg.d_list = {3};
    cfg.n_bits = 10;
    REQUIRE_THROWS_AS(run_maxload(cfg), config_error);
    cfg.d_list = {1, 2, 4};
    cfg.m = 64;
    const auto r = run_maxload(cfg);
    for (const auto& arm : r.arms) REQUIRE(arm.n == 1024);
}

TEST_CASE("wide split and independent functions have matching load statistics") {
    const KeySpec spec{2, 8};
    const int d = 2, bb = 6;
    const std::uint64_t g = 1ULL << bb, m = 256, trials = 300;
    double mean_wide = 0, mean_indep = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t ts = trial_seed(77, t);
        const auto keys = trial_keys(spec, m, splitmix64(ts), false);
        const auto f = make_tabulation(splitmix64(ts ^ 1), spec, d * bb);
        const auto wide = derive_all_choices(keys, f, d, bb);
        const auto indep = derive_choices_independent_fns(keys, ts ^ 2, spec, d, bb);
        mean_wide += max_load(allocate_choices(keys, wide, d, g, TieBreak::SeededRandom, ts));
        mean_indep +=
            max_load(allocate_choices(keys, indep, d, g, TieBreak::SeededRandom, ts));
    }
    mean_wide /= trials;
    mean_indep /= trials;
    REQUIRE(std::abs(mean_wide - mean_indep) < 0.3);
}

TEST_CASE("agl command pairs arms and reports theory scales") {
    auto cfg = base_config("agl");
    cfg.d_list = {4};
    cfg.bin_bits = 5;
    cfg.m = 4 * 32;
    cfg.trials = 12;
    const auto r = run_agl(cfg);
    REQUIRE(r.checksum_mismatches == 0);
    REQUIRE(r.max_random.size() == 12);
    REQUIRE(r.theory_agl < r.theory_random);  // 1/(d lg phi_d) < 1/lg d
    const auto table = agl_table(cfg, r);
    REQUIRE(table.rows.size() == 13);  // 12 rows + summary

    auto bad = cfg;
    bad.d_list = {1};
    REQUIRE_THROWS_AS(run_agl(bad), config_error);
}

TEST_CASE("witness scan tallies and never reports other") {
    auto cfg = base_config("witness-scan");
    cfg.d_list = {2};
    cfg.bin_bits = 5;
    cfg.trials = 10;
    for (TieBreak tie : {TieBreak::SeededRandom, TieBreak::AlwaysGoLeft}) {
        cfg.tie = tie;
        const auto r = run_witness_scan(cfg);
        REQUIRE(r.eligible > 0);
        REQUIRE(r.other == 0);
        REQUIRE(r.tight_violations == 0);
        REQUIRE(r.eligible == r.dnomial + r.fibtree + r.tight);
        if (tie == TieBreak::AlwaysGoLeft) REQUIRE(r.dnomial == 0);
        if (tie != TieBreak::AlwaysGoLeft) REQUIRE(r.fibtree == 0);

        const auto table = witness_table(cfg, r);
        const auto j = render_json(cfg, table);
        REQUIRE(j["report"]["tally"]["other"] == 0);
        REQUIRE(j["report"]["k"] == r.k);
    }
}

TEST_CASE("cuckoo command reports failures and inserter agreement") {
    auto cfg = base_config("cuckoo");
    cfg.spec = KeySpec{2, 8};
    cfg.trials = 30;
    cfg.eps = 0.5;
    const std::uint64_t ns[] = {1ULL << 7, 1ULL << 8};
    const auto r = run_cuckoo(cfg, ns);
    REQUIRE(r.rows.size() == 2);
    for (const auto& row : r.rows) {
        REQUIRE(row.agree_trials == cfg.trials);  // both sizes are small
        REQUIRE(row.agree_ok == row.agree_trials);
        REQUIRE(row.failure.fraction <= 1.0);
    }
}

TEST_CASE("depstats suite reports zero violations") {
    auto cfg = base_config("depstats");
    cfg.trials = 120;
    const auto r = run_depstats(cfg);
    REQUIRE(r.violations == 0);
    REQUIRE(!r.rows.empty());
}

TEST_CASE("selftest battery passes") {
    const auto r = run_selftest(7);
    for (const auto& row : r.rows) {
        INFO(row.suite << "/" << row.instance);
        REQUIRE(row.ok);
    }
}

TEST_CASE("config validation errors") {
    auto cfg = base_config("maxload");
    cfg.d_list = {};
    REQUIRE_THROWS_AS(cfg.validate(), config_error);
    cfg = base_config("maxload");
    cfg.format = "xml";
    REQUIRE_THROWS_AS(cfg.validate(), config_error);
    cfg = base_config("maxload");
    cfg.d_list = {9};
    cfg.bin_bits = 8;
    REQUIRE_THROWS_AS(cfg.validate(), config_error);  // 9*8 = 72 > 64
}
