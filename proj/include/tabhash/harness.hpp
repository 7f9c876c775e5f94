#pragma once

// Experiment harness: seeded trial farms, the load and cuckoo experiments,
// witness scans, dependence statistics, and a self-test battery. Every run is
// a pure function of (config, master seed); outputs embed the resolved config
// and are byte-identical across repeats and thread counts.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tabhash/allocation.hpp"
#include "tabhash/common.hpp"
#include "tabhash/cuckoo.hpp"
#include "tabhash/dependence.hpp"
#include "tabhash/fibonacci.hpp"
#include "tabhash/hashgraph.hpp"
#include "tabhash/keys.hpp"
#include "tabhash/loadgraph.hpp"
#include "tabhash/tabulation.hpp"
#include "tabhash/witness_trees.hpp"

namespace tabhash {

struct ExperimentConfig {
    std::string cmd;
    std::vector<int> d_list = {2};
    int bin_bits = 10;  // bins per group = 2^bin_bits (n = d * 2^bin_bits)
    int n_bits = -1;    // if set, bin_bits per d is n_bits - log2(d)
    std::uint64_t m = 0;  // balls/keys per trial; 0 means the command default
    KeySpec spec;
    std::uint64_t trials = 10;
    std::uint64_t seed = 1;
    TieBreak tie = TieBreak::SeededRandom;
    double eps = 0.5;
    int k_threshold = -1;  // witness scan; -1 derives from n and d
    bool allow_dups = false;
    std::string out_path;
    std::string format = "csv";

    int bin_bits_for(int d) const {
        if (n_bits < 0) return bin_bits;
        int lg = 0;
        while ((1 << lg) < d) ++lg;
        if ((1 << lg) != d)
            throw config_error("config: --n-bits requires every d to be a power of two");
        if (lg >= n_bits) throw config_error("config: n_bits too small for d");
        return n_bits - lg;
    }
    std::uint64_t n_for(int d) const {
        return static_cast<std::uint64_t>(d) << bin_bits_for(d);
    }

    void validate() const {
        spec.validate();
        if (d_list.empty()) throw config_error("config: need at least one d");
        for (int d : d_list) {
            if (d < 1 || d > 16) throw config_error("config: d must be in [1,16]");
            const int bb = bin_bits_for(d);
            if (bb < 1 || bb > 30) throw config_error("config: bin_bits out of range");
            if (d * bb > 64)
                throw config_error("config: d*bin_bits exceeds the 64-bit hash width");
        }
        if (format != "csv" && format != "json")
            throw config_error("config: format must be csv or json");
        if (!(eps > 0)) throw config_error("config: eps must be positive");
    }
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["cmd"] = c.cmd;
    j["d"] = c.d_list;
    j["bin_bits"] = c.bin_bits;
    j["n_bits"] = c.n_bits;
    j["m"] = c.m;
    j["c"] = c.spec.c;
    j["char_bits"] = c.spec.char_bits;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["tie"] = tie_break_name(c.tie);
    j["eps"] = c.eps;
    j["k"] = c.k_threshold;
    j["allow_dups"] = c.allow_dups;
    j["format"] = c.format;
    return j;
}

// ---- trial farm --------------------------------------------------------------

inline unsigned worker_count(std::uint64_t trials) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("TABHASH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = static_cast<unsigned>(v);
    }
    if (trials < hw) hw = static_cast<unsigned>(trials);
    return hw == 0 ? 1 : hw;
}

// Runs fn(trial) for every trial index. Results must be written into
// caller-owned per-index slots, so output order never depends on scheduling.
template <typename Fn>
inline void parallel_trials(std::uint64_t trials, Fn&& fn) {
    const unsigned workers = worker_count(trials);
    if (workers <= 1) {
        for (std::uint64_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::uint64_t t = next.fetch_add(1);
                if (t >= trials || failed.load()) return;
                try {
                    fn(t);
                } catch (...) {
                    failed.store(true);
                    throw;  // terminates; experiment trials must not throw
                }
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Key stream for one trial: uniform draws from the key universe, distinct
// unless duplicates were explicitly allowed.
inline std::vector<Key> trial_keys(const KeySpec& spec, std::uint64_t m, std::uint64_t seed,
                                   bool allow_dups) {
    if (!allow_dups) return random_distinct_keys(spec, m, seed);
    SplitMix64 rng(seed);
    std::vector<Key> keys;
    keys.reserve(m);
    const std::uint64_t mask = spec.universe_mask();
    for (std::uint64_t i = 0; i < m; ++i) keys.push_back(Key{rng.next() & mask});
    return keys;
}

inline std::uint64_t fnv1a_keys(std::span<const Key> keys) {
    std::uint64_t h = 1469598103934665603ULL;
    for (Key k : keys) {
        for (int b = 0; b < 8; ++b) {
            h ^= (k.packed >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

// Choices through d independently seeded narrow functions, the statistical
// twin of the wide-split derivation.
inline std::vector<ChoiceSet> derive_choices_independent_fns(std::span<const Key> keys,
                                                             std::uint64_t seed,
                                                             const KeySpec& spec, int d,
                                                             int bin_bits) {
    std::vector<TabulationFn> fns;
    fns.reserve(d);
    for (int i = 0; i < d; ++i)
        fns.push_back(make_tabulation(splitmix64(seed + i), spec, bin_bits));
    std::vector<ChoiceSet> out(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) {
        out[j].bins.resize(d);
        for (int i = 0; i < d; ++i)
            out[j].bins[i] = static_cast<std::uint32_t>(hash(fns[i], keys[j]));
    }
    return out;
}

// ---- output rendering ----------------------------------------------------------

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    nlohmann::json extra;  // additional report fields (JSON output only)

    void row(std::vector<nlohmann::json> cells) { rows.push_back(std::move(cells)); }
};

inline std::string format_cell(const nlohmann::json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", v.get<double>());
        return buf;
    }
    return v.dump();
}

inline std::string render_csv(const ExperimentConfig& c, const OutputTable& t) {
    std::string out;
    out += "# tabhash-lab version=";
    out += kVersion;
    out += " schema=";
    out += std::to_string(kSchemaVersion);
    out += "\n# config ";
    out += config_to_json(c).dump();
    out += "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ",";
        out += t.columns[i];
    }
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ",";
            out += format_cell(r[i]);
        }
        out += "\n";
    }
    return out;
}

inline nlohmann::json render_json(const ExperimentConfig& c, const OutputTable& t) {
    nlohmann::json j;
    j["tool"] = "tabhash-lab";
    j["version"] = kVersion;
    j["schema"] = kSchemaVersion;
    j["config"] = config_to_json(c);
    if (!t.extra.is_null()) j["report"] = t.extra;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row;
        for (std::size_t i = 0; i < r.size() && i < t.columns.size(); ++i)
            row[t.columns[i]] = r[i];
        j["rows"].push_back(std::move(row));
    }
    return j;
}

inline std::string render_output(const ExperimentConfig& c, const OutputTable& t) {
    if (c.format == "json") return render_json(c, t).dump(2) + "\n";
    return render_csv(c, t);
}

// ---- maxload -------------------------------------------------------------------

struct MaxloadArm {
    int d = 0;
    int bin_bits = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::vector<std::uint32_t> loads;        // per trial
    std::vector<std::uint64_t> bins_at_max;  // per trial: bins achieving the max
    double mean = 0.0;
    double stddev = 0.0;
    double theory = 0.0;       // lg lg n / lg d, 0 for d = 1
    double wall_seconds = 0.0;  // not emitted: outputs stay byte-deterministic
};

struct MaxloadResult {
    std::vector<MaxloadArm> arms;
};

inline double mean_of(std::span<const std::uint32_t> v) {
    double s = 0;
    for (auto x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double stddev_of(std::span<const std::uint32_t> v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0;
    for (auto x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Per-trial max load for every d in the list. Arms share the per-trial key
// stream and function seed, so cross-d comparisons are paired.
inline MaxloadResult run_maxload(const ExperimentConfig& cfg) {
    cfg.validate();
    MaxloadResult res;
    for (int d : cfg.d_list) {
        MaxloadArm arm;
        arm.d = d;
        arm.bin_bits = cfg.bin_bits_for(d);
        arm.n = cfg.n_for(d);
        arm.m = cfg.m ? cfg.m : arm.n;
        arm.loads.assign(cfg.trials, 0);
        arm.bins_at_max.assign(cfg.trials, 0);
        const auto t0 = std::chrono::steady_clock::now();
        parallel_trials(cfg.trials, [&](std::uint64_t t) {
            const std::uint64_t ts = trial_seed(cfg.seed, t);
            const auto keys = trial_keys(cfg.spec, arm.m, splitmix64(ts ^ 0x6b65797321ULL),
                                         cfg.allow_dups);
            const auto f = make_tabulation(splitmix64(ts ^ 0x68617368ULL), cfg.spec,
                                           d * arm.bin_bits);
            const auto st = allocate(keys, f, d, arm.bin_bits, cfg.tie,
                                     splitmix64(ts ^ 0x746965ULL));
            arm.loads[t] = max_load(st);
            for (auto v : st.loads)
                if (v == arm.loads[t]) ++arm.bins_at_max[t];
        });
        arm.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        arm.mean = mean_of(arm.loads);
        arm.stddev = stddev_of(arm.loads, arm.mean);
        arm.theory = d >= 2 ? std::log2(std::log2(static_cast<double>(arm.n))) / std::log2(d)
                            : 0.0;
        res.arms.push_back(std::move(arm));
    }
    return res;
}

inline OutputTable maxload_table(const ExperimentConfig& cfg, const MaxloadResult& res) {
    OutputTable t;
    t.columns = {"kind",     "d",           "n",      "m",    "trial",  "seed",
                 "max_load", "bins_at_max", "trials", "mean", "stddev", "theory_scale"};
    for (const auto& arm : res.arms) {
        for (std::size_t i = 0; i < arm.loads.size(); ++i)
            t.row({"row", arm.d, arm.n, arm.m, i, trial_seed(cfg.seed, i), arm.loads[i],
                   arm.bins_at_max[i], nullptr, nullptr, nullptr, nullptr});
        t.row({"summary", arm.d, arm.n, arm.m, nullptr, nullptr, nullptr, nullptr,
               arm.loads.size(), arm.mean, arm.stddev,
               arm.d >= 2 ? nlohmann::json(arm.theory) : nlohmann::json()});
    }
    return t;
}

// ---- agl (paired tie-break comparison) --------------------------------------------

struct AglResult {
    int d = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::vector<std::uint32_t> max_random;
    std::vector<std::uint32_t> max_agl;
    double mean_random = 0.0;
    double mean_agl = 0.0;
    double theory_random = 0.0;  // lg lg n / lg d
    double theory_agl = 0.0;     // lg lg n / (d lg phi_d)
    std::uint64_t checksum_mismatches = 0;
};

// Paired trials: both arms regenerate and checksum the same key stream and
// share the hash function; only the tie rule differs.
inline AglResult run_agl(const ExperimentConfig& cfg) {
    cfg.validate();
    const int d = cfg.d_list.front();
    if (d < 2) throw config_error("agl: d must be >= 2");
    AglResult res;
    res.d = d;
    res.n = cfg.n_for(d);
    res.m = cfg.m ? cfg.m : res.n;
    const int bb = cfg.bin_bits_for(d);
    res.max_random.assign(cfg.trials, 0);
    res.max_agl.assign(cfg.trials, 0);
    std::vector<std::uint8_t> mismatch(cfg.trials, 0);
    parallel_trials(cfg.trials, [&](std::uint64_t t) {
        const std::uint64_t ts = trial_seed(cfg.seed, t);
        const std::uint64_t key_seed = splitmix64(ts ^ 0x6b65797321ULL);
        const auto keys_a = trial_keys(cfg.spec, res.m, key_seed, cfg.allow_dups);
        const auto keys_b = trial_keys(cfg.spec, res.m, key_seed, cfg.allow_dups);
        if (fnv1a_keys(keys_a) != fnv1a_keys(keys_b)) mismatch[t] = 1;
        const auto f =
            make_tabulation(splitmix64(ts ^ 0x68617368ULL), cfg.spec, d * bb);
        const auto st_rand = allocate(keys_a, f, d, bb, TieBreak::SeededRandom,
                                      splitmix64(ts ^ 0x746965ULL));
        const auto st_agl = allocate(keys_b, f, d, bb, TieBreak::AlwaysGoLeft);
        res.max_random[t] = max_load(st_rand);
        res.max_agl[t] = max_load(st_agl);
    });
    for (auto v : mismatch) res.checksum_mismatches += v;
    res.mean_random = mean_of(res.max_random);
    res.mean_agl = mean_of(res.max_agl);
    const double lglg = std::log2(std::log2(static_cast<double>(res.n)));
    res.theory_random = lglg / std::log2(d);
    res.theory_agl = lglg * phi_d(d).agl_scale;
    return res;
}

inline OutputTable agl_table(const ExperimentConfig& cfg, const AglResult& res) {
    OutputTable t;
    t.columns = {"kind", "d", "n", "m", "trial", "seed", "max_random", "max_agl", "delta",
                 "trials", "mean_random", "mean_agl", "theory_random", "theory_agl",
                 "checksum_ok"};
    for (std::size_t i = 0; i < res.max_random.size(); ++i)
        t.row({"row", res.d, res.n, res.m, i, trial_seed(cfg.seed, i), res.max_random[i],
               res.max_agl[i],
               static_cast<std::int64_t>(res.max_agl[i]) -
                   static_cast<std::int64_t>(res.max_random[i]),
               nullptr, nullptr, nullptr, nullptr, nullptr, nullptr});
    t.row({"summary", res.d, res.n, res.m, nullptr, nullptr, nullptr, nullptr, nullptr,
           res.max_random.size(), res.mean_random, res.mean_agl, res.theory_random,
           res.theory_agl, res.checksum_mismatches == 0});
    return t;
}

// ---- witness scan -----------------------------------------------------------------

struct WitnessTrialRow {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::uint32_t max_load = 0;
    bool eligible = false;
    WitnessKind kind = WitnessKind::Other;
    int level = 0;
    int group = 0;
    std::int64_t tight_slack = 0;
    std::uint64_t tight_edges = 0;
    std::uint64_t tight_vertices = 0;
    bool tight_valid = true;  // |V'| <= (d-1)|E'| - 1 on extracted subgraphs
};

struct WitnessScanResult {
    int d = 0;
    int k = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    LoadGraphVariant variant = LoadGraphVariant::Plain;
    std::vector<WitnessTrialRow> rows;
    std::uint64_t eligible = 0, dnomial = 0, fibtree = 0, tight = 0, other = 0;
    std::uint64_t tight_violations = 0;
};

inline int default_witness_k(std::uint64_t n, int d) {
    const double lglg = std::log2(std::log2(static_cast<double>(n)));
    return static_cast<int>(std::ceil(lglg / std::log2(d))) + 2;
}

// For trials where some bin reaches load k+1, classify the fullest bin's
// (k+1)-level load graph. A nonzero `other` tally is an invariant violation.
inline WitnessScanResult run_witness_scan(const ExperimentConfig& cfg) {
    cfg.validate();
    const int d = cfg.d_list.front();
    if (d < 2) throw config_error("witness-scan: d must be >= 2");
    WitnessScanResult res;
    res.d = d;
    res.n = cfg.n_for(d);
    res.k = cfg.k_threshold >= 0 ? cfg.k_threshold : default_witness_k(res.n, d);
    res.m = cfg.m ? cfg.m : static_cast<std::uint64_t>(res.k + 2) * res.n;
    res.variant = cfg.tie == TieBreak::AlwaysGoLeft ? LoadGraphVariant::GoLeft
                                                    : LoadGraphVariant::Plain;
    const int bb = cfg.bin_bits_for(d);
    res.rows.assign(cfg.trials, WitnessTrialRow{});
    parallel_trials(cfg.trials, [&](std::uint64_t t) {
        WitnessTrialRow row;
        row.trial = t;
        row.seed = trial_seed(cfg.seed, t);
        const auto keys = trial_keys(cfg.spec, res.m, splitmix64(row.seed ^ 0x6b65797321ULL),
                                     cfg.allow_dups);
        const auto f =
            make_tabulation(splitmix64(row.seed ^ 0x68617368ULL), cfg.spec, d * bb);
        const auto choices = derive_all_choices(keys, f, d, bb);
        const auto st = allocate_choices(keys, choices, d, 1ULL << bb, cfg.tie,
                                         splitmix64(row.seed ^ 0x746965ULL));
        row.max_load = max_load(st);
        row.eligible = row.max_load >= static_cast<std::uint32_t>(res.k + 1);
        if (row.eligible) {
            const HashGraph G = make_graph(d, 1ULL << bb, choices, keys);
            std::uint64_t fullest = 0;
            for (std::uint64_t b = 0; b < st.loads.size(); ++b)
                if (st.loads[b] > st.loads[fullest]) fullest = b;
            const LoadGraph L = build_load_graph(st, G, fullest, res.k + 1, res.variant);
            const WitnessClassification wc = classify_witness(st, G, L);
            row.kind = wc.kind;
            row.level = wc.level;
            row.group = wc.group;
            if (wc.tight) {
                row.tight_slack = wc.tight->slack;
                row.tight_edges = wc.tight->edge_ids.size();
                row.tight_vertices = wc.tight->vertices.size();
                row.tight_valid =
                    static_cast<std::int64_t>(wc.tight->vertices.size()) <=
                    static_cast<std::int64_t>(d - 1) *
                            static_cast<std::int64_t>(wc.tight->edge_ids.size()) -
                        1;
            }
        }
        res.rows[t] = row;
    });
    for (const auto& row : res.rows) {
        if (!row.eligible) continue;
        ++res.eligible;
        switch (row.kind) {
            case WitnessKind::DNomial: ++res.dnomial; break;
            case WitnessKind::FibTree: ++res.fibtree; break;
            case WitnessKind::TightFound: ++res.tight; break;
            case WitnessKind::Other: ++res.other; break;
        }
        if (!row.tight_valid) ++res.tight_violations;
    }
    return res;
}

inline OutputTable witness_table(const ExperimentConfig&, const WitnessScanResult& res) {
    OutputTable t;
    t.columns = {"kind",  "trial", "seed",        "max_load",       "eligible",   "class",
                 "level", "group", "tight_edges", "tight_vertices", "tight_slack"};
    for (const auto& r : res.rows) {
        t.row({"row", r.trial, r.seed, r.max_load, r.eligible,
               r.eligible ? nlohmann::json(witness_kind_name(r.kind)) : nlohmann::json(),
               r.level, r.group,
               r.kind == WitnessKind::TightFound ? nlohmann::json(r.tight_edges)
                                                 : nlohmann::json(),
               r.kind == WitnessKind::TightFound ? nlohmann::json(r.tight_vertices)
                                                 : nlohmann::json(),
               r.kind == WitnessKind::TightFound ? nlohmann::json(r.tight_slack)
                                                 : nlohmann::json()});
    }
    t.extra = {{"d", res.d},
               {"k", res.k},
               {"n", res.n},
               {"m", res.m},
               {"variant", res.variant == LoadGraphVariant::GoLeft ? "goleft" : "plain"},
               {"eligible", res.eligible},
               {"tally",
                {{"dnomial", res.dnomial},
                 {"fibtree", res.fibtree},
                 {"tight", res.tight},
                 {"other", res.other}}},
               {"tight_violations", res.tight_violations}};
    t.row({"summary", nullptr, nullptr, nullptr, res.eligible, nullptr, nullptr, nullptr,
           res.dnomial, res.fibtree, res.tight});
    return t;
}

// ---- cuckoo ------------------------------------------------------------------------

struct CuckooCmdRow {
    FailureRow failure;
    std::uint64_t agree_trials = 0;  // insert/oracle cross-checks performed
    std::uint64_t agree_ok = 0;
};

struct CuckooCmdResult {
    std::vector<CuckooCmdRow> rows;
};

// Failure-rate experiment per n; on small instances the eviction inserter is
// cross-checked against the oracle with a generous kick budget.
inline CuckooCmdResult run_cuckoo(const ExperimentConfig& cfg,
                                  std::span<const std::uint64_t> ns,
                                  std::uint64_t agreement_max_n = 1ULL << 11) {
    cfg.validate();
    CuckooCmdResult out;
    const auto rows = failure_experiment(ns, cfg.eps, cfg.trials, cfg.seed, cfg.spec);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CuckooCmdRow row;
        row.failure = rows[i];
        if (rows[i].n <= agreement_max_n) {
            int bin_bits = 0;
            while ((2ULL << bin_bits) < rows[i].n) ++bin_bits;
            int lgn = 0;
            while ((1ULL << lgn) < rows[i].n) ++lgn;
            const std::uint64_t budget = 10ULL * lgn * rows[i].n;
            for (std::uint64_t t = 0; t < cfg.trials; ++t) {
                const std::uint64_t ts = trial_seed(cfg.seed, (i << 32) ^ t);
                const auto keys = random_distinct_keys(cfg.spec, rows[i].m, splitmix64(ts));
                const auto views = CuckooHashViews::wide_split(ts, cfg.spec, bin_bits);
                CuckooTable table(views, budget);
                const bool placed = insert_all(keys, table).placed_all;
                const bool feasible = feasibility_oracle(keys, views);
                ++row.agree_trials;
                if (placed == feasible) ++row.agree_ok;
            }
        }
        out.rows.push_back(row);
    }
    return out;
}

inline OutputTable cuckoo_table(const ExperimentConfig& cfg, const CuckooCmdResult& res) {
    OutputTable t;
    t.columns = {"n",        "m",          "eps",         "trials",       "failures",
                 "fraction", "wilson_low", "wilson_high", "agree_trials", "agree_ok"};
    for (const auto& r : res.rows)
        t.row({r.failure.n, r.failure.m, cfg.eps, r.failure.trials, r.failure.failures,
               r.failure.fraction, r.failure.wilson.low, r.failure.wilson.high,
               r.agree_trials, r.agree_ok});
    return t;
}

// ---- depstats ------------------------------------------------------------------------

struct SuiteRow {
    std::string suite;
    std::string instance;
    bool ok = true;
    std::string detail;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;
    std::uint64_t violations = 0;

    void add(std::string suite, std::string instance, bool ok, std::string detail = "") {
        if (!ok) ++violations;
        rows.push_back(SuiteRow{std::move(suite), std::move(instance), ok, std::move(detail)});
    }
};

// Grid key set {(a,b) : a in A, b in B} over a two-character spec.
inline std::vector<Key> grid_keys(const KeySpec& spec, std::span<const std::uint64_t> as,
                                  std::span<const std::uint64_t> bs) {
    std::vector<Key> keys;
    keys.reserve(as.size() * bs.size());
    for (auto a : as)
        for (auto b : bs) keys.push_back(make_key(spec, {a, b}));
    return keys;
}

inline std::vector<std::uint64_t> iota_vals(std::uint64_t n, std::uint64_t start = 0) {
    std::vector<std::uint64_t> v(n);
    for (std::uint64_t i = 0; i < n; ++i) v[i] = start + i;
    return v;
}

// Dependence / counting / pair-class statistics on random and structured key
// sets. Every reported violation is an acceptance failure.
inline SuiteResult run_depstats(const ExperimentConfig& cfg) {
    cfg.validate();
    SuiteResult res;
    const KeySpec spec{2, 4};
    SplitMix64 rng(cfg.seed);

    // The canonical dependent grid: (a0,b0),(a0,b1),(a1,b0),(a1,b1).
    {
        const auto keys = grid_keys(spec, {{1, 2}}, {{5, 9}});
        const auto dep = dependent_subset(spec, keys);
        bool ok = dep.has_value() && dep->size() == 4;
        if (ok) {
            for (int s = 0; s < 16 && ok; ++s) {
                const auto f = make_tabulation(rng.next(), spec, 32);
                std::uint64_t x = 0;
                for (auto idx : *dep) x ^= hash(f, keys[idx]);
                ok = x == 0;
            }
        }
        res.add("dependence", "2x2-grid", ok, "full four-key dependence");
    }

    // Random key sets: every returned subset hashes to zero on fresh seeds.
    const std::uint64_t sets = cfg.trials ? cfg.trials : 200;
    std::uint64_t dependent_found = 0;
    bool law_ok = true;
    for (std::uint64_t i = 0; i < sets; ++i) {
        const std::uint64_t size = 4 + rng.below(5);
        const auto keys = random_distinct_keys(spec, size, rng.next());
        const auto dep = dependent_subset(spec, keys);
        if (!dep) continue;
        ++dependent_found;
        for (int s = 0; s < 8 && law_ok; ++s) {
            const auto f = make_tabulation(rng.next(), spec, 32);
            std::uint64_t x = 0;
            for (auto idx : *dep) x ^= hash(f, keys[idx]);
            law_ok = x == 0;
        }
    }
    res.add("dependence", "random-sets", law_ok,
            std::to_string(dependent_found) + "/" + std::to_string(sets) + " dependent");

    // A two-bit alphabet makes dependences common, so the zero-XOR law and
    // the exhaustive cross-check see real work.
    {
        const KeySpec tiny{2, 2};
        std::uint64_t tiny_dep = 0;
        bool tiny_ok = true;
        for (std::uint64_t i = 0; i < 200; ++i) {
            const auto keys = random_distinct_keys(tiny, 6, rng.next());
            const auto dep = dependent_subset(tiny, keys);
            std::uint64_t found = 0;
            for (std::uint64_t mask = 1; mask < (1ULL << keys.size()) && !found; ++mask) {
                std::vector<Key> subset;
                for (std::size_t b = 0; b < keys.size(); ++b)
                    if (mask & (1ULL << b)) subset.push_back(keys[b]);
                if (key_xor(tiny, subset).empty()) found = 1;
            }
            if (dep.has_value() != (found != 0)) tiny_ok = false;
            if (!dep) continue;
            ++tiny_dep;
            for (int s = 0; s < 8 && tiny_ok; ++s) {
                const auto f = make_tabulation(rng.next(), tiny, 32);
                std::uint64_t x = 0;
                for (auto idx : *dep) x ^= hash(f, keys[idx]);
                tiny_ok = x == 0;
            }
        }
        res.add("dependence", "tiny-universe-sets", tiny_ok && tiny_dep > 0,
                std::to_string(tiny_dep) + "/200 dependent");
    }

    // Counting bound on the flagship instance and a couple of grids.
    {
        const KeySpec c1{1, 4};
        std::vector<std::vector<Key>> groups(4, std::vector<Key>{Key{3}, Key{11}});
        const auto zc = count_zero_xor_tuples(c1, groups);
        res.add("counting", "c1-t2-ab",
                zc.count == 8 && std::abs(zc.bound - 12.0) < 1e-9,
                "count=" + std::to_string(zc.count));
    }
    {
        const auto g = grid_keys(spec, iota_vals(4), iota_vals(4));
        std::vector<std::vector<Key>> groups(4, g);
        const auto zc = count_zero_xor_tuples(spec, groups);
        res.add("counting", "4x4-grid-t2",
                static_cast<double>(zc.count) <= zc.bound,
                "count=" + std::to_string(zc.count));
        const auto pc = pair_xor_classes(spec, g);
        res.add("pair-classes", "4x4-grid", pc.sum_squares == zc.count,
                "sum_sq=" + std::to_string(pc.sum_squares));
    }
    {
        const auto keys = random_distinct_keys(spec, 48, rng.next());
        const auto pc = pair_xor_classes(spec, keys);
        std::vector<std::vector<Key>> groups(4, keys);
        const auto zc = count_zero_xor_tuples(spec, groups, 50'000'000);
        const double bound = std::pow(3.0, spec.c) * 48.0 * 48.0;
        res.add("pair-classes", "random-48",
                pc.sum_squares == zc.count &&
                    static_cast<double>(pc.sum_squares) <= bound &&
                    pc.identity_size == 48,
                "sum_sq=" + std::to_string(pc.sum_squares));
    }
    return res;
}

inline OutputTable suite_table(const SuiteResult& res) {
    OutputTable t;
    t.columns = {"suite", "instance", "ok", "detail"};
    for (const auto& r : res.rows) t.row({r.suite, r.instance, r.ok, r.detail});
    return t;
}

}  // namespace tabhash
