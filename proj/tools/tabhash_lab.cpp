// tabhash-lab: experiment harness CLI for the tabulation hashing laboratory.
//
// Subcommands:
//   maxload      per-trial max load for each d in --d (paired key streams)
//   agl          SeededRandom vs Always-Go-Left paired comparison
//   witness-scan classify the fullest bin's load graph per trial
//   cuckoo       placement failure fractions per table size
//   depstats     dependence / counting / pair-class suites
//   selftest     oracle-backed invariants from every module
//
// Exit codes: 0 success, 1 invariant violation, 2 config error, 3 resource cap.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tabhash/harness.hpp"
#include "tabhash/selftest.hpp"

namespace {

using namespace tabhash;

void write_output(const ExperimentConfig& cfg, const OutputTable& table) {
    const std::string text = render_output(cfg, table);
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(cfg.out_path, std::ios::binary);
    if (!os) throw config_error("cannot open output path: " + cfg.out_path);
    os << text;
}

int print_suite(const SuiteResult& res) {
    for (const auto& row : res.rows)
        std::cout << (row.ok ? "[ok]   " : "[FAIL] ") << row.suite << "/" << row.instance
                  << (row.detail.empty() ? "" : "  (" + row.detail + ")") << "\n";
    if (res.violations) {
        for (const auto& row : res.rows)
            if (!row.ok) {
                std::cerr << "first failing invariant: " << row.suite << "/" << row.instance
                          << "\n";
                break;
            }
        return 1;
    }
    return 0;
}

TieBreak parse_tie(const std::string& name) {
    if (name == "random") return TieBreak::SeededRandom;
    if (name == "left") return TieBreak::LowestIndex;
    if (name == "agl") return TieBreak::AlwaysGoLeft;
    throw config_error("unknown tie rule: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabulation hashing laboratory"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string tie_name = "random";
    std::vector<int> bin_bits_list = {10};
    cfg.bin_bits = -1;  // sentinel: take bin_bits_list.front()

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", cfg.d_list, "group counts, comma separated")
            ->delimiter(',');
        sub->add_option("--bin-bits", bin_bits_list,
                        "log2 bins per group (list only for cuckoo)")
            ->delimiter(',');
        sub->add_option("--n-bits", cfg.n_bits, "log2 total bins; overrides --bin-bits");
        sub->add_option("--m", cfg.m, "balls/keys per trial (0 = command default)");
        sub->add_option("--c", cfg.spec.c, "characters per key");
        sub->add_option("--char-bits", cfg.spec.char_bits, "bits per character");
        sub->add_option("--trials", cfg.trials, "trial count");
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--tie", tie_name, "tie rule: random|left|agl");
        sub->add_option("--eps", cfg.eps, "cuckoo slack: m = n / (2(1+eps))");
        sub->add_option("--k", cfg.k_threshold, "witness load threshold");
        sub->add_option("--format", cfg.format, "output format: csv|json");
        sub->add_option("--out", cfg.out_path, "output path (default stdout)");
        sub->add_flag("--allow-dups", cfg.allow_dups, "allow duplicate keys in streams");
    };

    CLI::App* cmd_maxload = app.add_subcommand("maxload", "max-load experiment");
    CLI::App* cmd_agl = app.add_subcommand("agl", "Always-Go-Left paired experiment");
    CLI::App* cmd_witness = app.add_subcommand("witness-scan", "witness classification scan");
    CLI::App* cmd_cuckoo = app.add_subcommand("cuckoo", "cuckoo failure experiment");
    CLI::App* cmd_depstats = app.add_subcommand("depstats", "dependence statistics suites");
    CLI::App* cmd_selftest = app.add_subcommand("selftest", "run all module invariants");
    for (CLI::App* sub : {cmd_maxload, cmd_agl, cmd_witness, cmd_cuckoo, cmd_depstats})
        add_common(sub);
    cmd_selftest->add_option("--seed", cfg.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.tie = parse_tie(tie_name);
        cfg.bin_bits = bin_bits_list.empty() ? 10 : bin_bits_list.front();

        if (cmd_maxload->parsed()) {
            cfg.cmd = "maxload";
            write_output(cfg, maxload_table(cfg, run_maxload(cfg)));
        } else if (cmd_agl->parsed()) {
            cfg.cmd = "agl";
            const auto res = run_agl(cfg);
            write_output(cfg, agl_table(cfg, res));
            if (res.checksum_mismatches) {
                std::cerr << "paired key streams diverged\n";
                return 1;
            }
        } else if (cmd_witness->parsed()) {
            cfg.cmd = "witness-scan";
            if (cmd_witness->get_option("--format")->count() == 0) cfg.format = "json";
            const auto res = run_witness_scan(cfg);
            write_output(cfg, witness_table(cfg, res));
            if (res.other > 0 || res.tight_violations > 0) {
                std::cerr << "witness totality violated: other=" << res.other
                          << " tight_violations=" << res.tight_violations << "\n";
                return 1;
            }
        } else if (cmd_cuckoo->parsed()) {
            cfg.cmd = "cuckoo";
            std::vector<std::uint64_t> ns;
            for (int b : bin_bits_list) {
                if (b < 1 || b > 30) throw config_error("cuckoo: bin-bits out of range");
                ns.push_back(2ULL << b);
            }
            cfg.d_list = {2};
            write_output(cfg, cuckoo_table(cfg, run_cuckoo(cfg, ns)));
        } else if (cmd_depstats->parsed()) {
            cfg.cmd = "depstats";
            const auto res = run_depstats(cfg);
            if (!cfg.out_path.empty() || cfg.format == "json")
                write_output(cfg, suite_table(res));
            return print_suite(res);
        } else if (cmd_selftest->parsed()) {
            return print_suite(run_selftest(cfg.seed));
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
