#pragma once

// Simple tabulation hashing: c character tables of uniformly random
// out_bits-wide entries, hash(x) = XOR of the c lookups. All output bits are
// independent, so one wide function doubles as d independent narrower ones
// by bit-slicing (derive_choices).

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tabhash/common.hpp"
#include "tabhash/keys.hpp"

namespace tabhash {

// Group-local bin choices, one per group: bins[i] is the choice in group i.
struct ChoiceSet {
    std::vector<std::uint32_t> bins;
    bool operator==(const ChoiceSet&) const = default;
};

struct TabulationFn {
    KeySpec spec;
    int out_bits = 64;
    std::uint64_t seed = 0;
    // tables[i][a] for character a at position i; immutable once filled.
    std::vector<std::vector<std::uint64_t>> tables;

    std::uint64_t out_mask() const {
        return out_bits >= 64 ? ~0ULL : ((1ULL << out_bits) - 1);
    }
};

// Table materialisation cap: c * 2^char_bits entries.
inline constexpr std::uint64_t kMaxTableEntries = 1ULL << 24;

inline TabulationFn make_tabulation(std::uint64_t seed, const KeySpec& spec, int out_bits) {
    spec.validate();
    if (out_bits < 1 || out_bits > 64)
        throw config_error("make_tabulation: out_bits must be in [1,64]");
    if (spec.char_bits > 24 ||
        static_cast<std::uint64_t>(spec.c) * (1ULL << spec.char_bits) > kMaxTableEntries)
        throw config_error("make_tabulation: character tables too large to materialise");

    TabulationFn f;
    f.spec = spec;
    f.out_bits = out_bits;
    f.seed = seed;
    f.tables.resize(spec.c);
    SplitMix64 rng(seed);
    const std::uint64_t mask = f.out_mask();
    for (int i = 0; i < spec.c; ++i) {
        f.tables[i].resize(spec.sigma());
        for (auto& entry : f.tables[i]) entry = rng.next() & mask;
    }
    return f;
}

inline std::uint64_t hash(const TabulationFn& f, Key x) {
    if (x.packed & ~f.spec.universe_mask())
        throw domain_error("hash: key outside the function's universe");
    std::uint64_t h = 0;
    std::uint64_t v = x.packed;
    const std::uint64_t cmask = f.spec.char_mask();
    for (int i = 0; i < f.spec.c; ++i) {
        h ^= f.tables[i][v & cmask];
        v >>= f.spec.char_bits;
    }
    return h;
}

// Hash of an arbitrary position-character set: XOR of the indexed entries.
inline std::uint64_t hash_pcs(const TabulationFn& f, const PositionCharacterSet& s) {
    std::uint64_t h = 0;
    for (const PosChar& pc : s.items) {
        if (pc.pos >= static_cast<std::uint32_t>(f.spec.c))
            throw domain_error("hash_pcs: position out of range");
        if (pc.chr >= f.spec.sigma())
            throw domain_error("hash_pcs: character out of range");
        h ^= f.tables[pc.pos][pc.chr];
    }
    return h;
}

// Split the wide hash into d disjoint bin_bits slices; slice i (from the
// least-significant bits) is the choice in group i.
inline ChoiceSet derive_choices(const TabulationFn& f, Key x, int d, int bin_bits) {
    if (d < 1) throw config_error("derive_choices: d must be >= 1");
    if (bin_bits < 1 || bin_bits > 32)
        throw config_error("derive_choices: bin_bits must be in [1,32]");
    if (d * bin_bits > f.out_bits)
        throw config_error("derive_choices: d*bin_bits exceeds hash width");
    const std::uint64_t h = hash(f, x);
    const std::uint64_t m = (bin_bits >= 64) ? ~0ULL : ((1ULL << bin_bits) - 1);
    ChoiceSet cs;
    cs.bins.resize(d);
    for (int i = 0; i < d; ++i)
        cs.bins[i] = static_cast<std::uint32_t>((h >> (i * bin_bits)) & m);
    return cs;
}

// Universe reduction: top target_bits of a*x mod 2^w for a random odd a.
inline std::uint64_t multiply_shift_reduce(std::uint64_t x, std::uint64_t a, int w,
                                           int target_bits) {
    if (w < 1 || w > 64) throw config_error("multiply_shift_reduce: w must be in [1,64]");
    if (target_bits < 1 || target_bits > w)
        throw config_error("multiply_shift_reduce: target_bits must be in [1,w]");
    if ((a & 1) == 0) throw input_error("multiply_shift_reduce: multiplier must be odd");
    const std::uint64_t wmask = (w >= 64) ? ~0ULL : ((1ULL << w) - 1);
    if (x & ~wmask) throw domain_error("multiply_shift_reduce: x wider than w bits");
    const std::uint64_t prod = (a * x) & wmask;
    return prod >> (w - target_bits);
}

// ---- binary table dump/load ------------------------------------------------
// Layout (little-endian): magic "TABH", version u16, c u8, char_bits u8,
// out_bits u8, seed u64, then c*2^char_bits entries, each stored as u64.

namespace detail {

inline void put_le(std::ostream& os, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t get_le(std::istream& is, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        int c = is.get();
        if (c == EOF) throw input_error("table file truncated");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

}  // namespace detail

inline void dump_tables(const TabulationFn& f, std::ostream& os) {
    os.write("TABH", 4);
    detail::put_le(os, 1, 2);  // format version
    detail::put_le(os, static_cast<std::uint64_t>(f.spec.c), 1);
    detail::put_le(os, static_cast<std::uint64_t>(f.spec.char_bits), 1);
    detail::put_le(os, static_cast<std::uint64_t>(f.out_bits), 1);
    detail::put_le(os, f.seed, 8);
    for (const auto& table : f.tables)
        for (std::uint64_t e : table) detail::put_le(os, e, 8);
}

inline void dump_tables(const TabulationFn& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("dump_tables: cannot open " + path);
    dump_tables(f, os);
    if (!os) throw input_error("dump_tables: write failed for " + path);
}

inline TabulationFn load_tables(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::string(magic, 4) != "TABH")
        throw input_error("load_tables: bad magic");
    const std::uint64_t version = detail::get_le(is, 2);
    if (version != 1) throw input_error("load_tables: unsupported version");
    TabulationFn f;
    f.spec.c = static_cast<int>(detail::get_le(is, 1));
    f.spec.char_bits = static_cast<int>(detail::get_le(is, 1));
    f.out_bits = static_cast<int>(detail::get_le(is, 1));
    f.seed = detail::get_le(is, 8);
    f.spec.validate();
    if (f.out_bits < 1 || f.out_bits > 64) throw input_error("load_tables: bad out_bits");
    if (f.spec.char_bits > 24 ||
        static_cast<std::uint64_t>(f.spec.c) * (1ULL << f.spec.char_bits) > kMaxTableEntries)
        throw input_error("load_tables: table dimensions exceed the materialisation cap");
    f.tables.resize(f.spec.c);
    for (auto& table : f.tables) {
        table.resize(f.spec.sigma());
        for (auto& e : table) {
            e = detail::get_le(is, 8);
            if (e & ~f.out_mask()) throw input_error("load_tables: entry wider than out_bits");
        }
    }
    return f;
}

inline TabulationFn load_tables(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("load_tables: cannot open " + path);
    return load_tables(is);
}

}  // namespace tabhash
