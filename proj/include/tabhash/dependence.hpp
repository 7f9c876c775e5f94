#pragma once

// GF(2) dependence machinery. Keys are vectors over Z_2^(positions x alphabet);
// a key set is dependent exactly when some non-empty subset XORs to the empty
// position-character set, and then the XOR of the hash values is forced to
// zero for every tabulation function.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tabhash/common.hpp"
#include "tabhash/keys.hpp"

namespace tabhash {

namespace detail {

inline bool bitvec_is_zero(const std::vector<std::uint64_t>& v) {
    for (std::uint64_t w : v)
        if (w) return false;
    return true;
}

inline void bitvec_xor(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] ^= b[i];
}

inline int bitvec_lowest(const std::vector<std::uint64_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) return static_cast<int>(64 * i + std::countr_zero(v[i]));
    return -1;
}

}  // namespace detail

// Finds a non-empty index subset I with XOR over I empty, if one exists.
// Keys are reduced in input order against lowest-column pivots, so the result
// is the first dependence the elimination can witness; callers wanting every
// zero-sum subset should enumerate exhaustively instead.
inline std::optional<std::vector<std::size_t>> dependent_subset(const KeySpec& spec,
                                                                std::span<const Key> keys) {
    spec.validate();
    if (keys.size() > 64)
        throw resource_error("dependent_subset: at most 64 keys supported");
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j)
            if (keys[i] == keys[j])
                throw input_error("dependent_subset: keys must be distinct");

    // Dense column index over the position characters that actually occur.
    std::map<PosChar, int> columns;
    auto column_of = [&](const PosChar& pc) {
        auto [it, inserted] = columns.emplace(pc, static_cast<int>(columns.size()));
        return it->second;
    };

    struct BasisRow {
        std::vector<std::uint64_t> vec;
        std::uint64_t mask;
    };
    std::map<int, BasisRow> basis;  // pivot column -> row

    for (std::size_t j = 0; j < keys.size(); ++j) {
        std::vector<std::uint64_t> v;
        for (int p = 0; p < spec.c; ++p) {
            int col = column_of(PosChar{static_cast<std::uint32_t>(p),
                                        key_char(spec, keys[j], p)});
            if (v.size() <= static_cast<std::size_t>(col / 64)) v.resize(col / 64 + 1, 0);
            v[col / 64] ^= 1ULL << (col % 64);
        }
        std::uint64_t mask = 1ULL << j;
        for (;;) {
            int pivot = detail::bitvec_lowest(v);
            if (pivot < 0) {
                std::vector<std::size_t> subset;
                for (std::size_t b = 0; b <= j; ++b)
                    if (mask & (1ULL << b)) subset.push_back(b);
                return subset;
            }
            auto it = basis.find(pivot);
            if (it == basis.end()) {
                basis.emplace(pivot, BasisRow{std::move(v), mask});
                break;
            }
            detail::bitvec_xor(v, it->second.vec);
            mask ^= it->second.mask;
        }
    }
    return std::nullopt;
}

// ---- zero-XOR tuple counting ------------------------------------------------

struct ZeroXorCount {
    std::uint64_t count = 0;  // tuples (x_1..x_2t) with empty XOR
    double bound = 0.0;       // ((2t-1)!!)^c * prod sqrt(|A_i|)
};

inline double odd_double_factorial(int a) {
    double r = 1.0;
    for (int v = a; v >= 1; v -= 2) r *= v;
    return r;
}

// Exhaustively counts the tuples in A_1 x ... x A_2t whose position-character
// XOR is empty, alongside the combinatorial upper bound. Enumeration only;
// the tuple cap keeps this a seconds-scale oracle.
inline ZeroXorCount count_zero_xor_tuples(const KeySpec& spec,
                                          std::span<const std::vector<Key>> sets,
                                          std::uint64_t tuple_cap = 10'000'000) {
    spec.validate();
    if (sets.size() < 2 || sets.size() % 2 != 0)
        throw input_error("count_zero_xor_tuples: need an even number (2t) of sets");
    if (sets.size() > 8)
        throw input_error("count_zero_xor_tuples: 2t must be <= 8");
    if (spec.char_bits > 16 ||
        static_cast<std::uint64_t>(spec.c) << spec.char_bits > 4096)
        throw resource_error("count_zero_xor_tuples: alphabet too wide for bitset XOR");

    const int t2 = static_cast<int>(sets.size());
    double tuples = 1.0;
    for (const auto& s : sets) tuples *= static_cast<double>(s.size());
    if (tuples > static_cast<double>(tuple_cap))
        throw resource_error("count_zero_xor_tuples: tuple cap exceeded");

    // Per-key incidence bitvector over (position, character) columns.
    const std::size_t bits = static_cast<std::size_t>(spec.c) << spec.char_bits;
    const std::size_t words = (bits + 63) / 64;
    auto key_bits = [&](Key k) {
        std::vector<std::uint64_t> v(words, 0);
        for (int p = 0; p < spec.c; ++p) {
            std::size_t col = (static_cast<std::size_t>(p) << spec.char_bits) +
                              key_char(spec, k, p);
            v[col / 64] ^= 1ULL << (col % 64);
        }
        return v;
    };
    std::vector<std::vector<std::vector<std::uint64_t>>> enc(t2);
    for (int i = 0; i < t2; ++i) {
        enc[i].reserve(sets[i].size());
        for (Key k : sets[i]) enc[i].push_back(key_bits(k));
    }

    ZeroXorCount out;
    std::vector<std::uint64_t> acc(words, 0);
    auto recurse = [&](auto&& self, int level) -> void {
        if (level == t2) {
            if (detail::bitvec_is_zero(acc)) ++out.count;
            return;
        }
        for (const auto& v : enc[level]) {
            for (std::size_t w = 0; w < words; ++w) acc[w] ^= v[w];
            self(self, level + 1);
            for (std::size_t w = 0; w < words; ++w) acc[w] ^= v[w];
        }
    };
    recurse(recurse, 0);

    out.bound = std::pow(odd_double_factorial(t2 - 1), spec.c);
    for (const auto& s : sets) out.bound *= std::sqrt(static_cast<double>(s.size()));
    return out;
}

// ---- pair-XOR equivalence classes --------------------------------------------

// Partition of X x X by the XOR value a^b (as a position-character set).
struct PairXorClasses {
    std::uint64_t m = 0;               // |X|
    std::uint64_t identity_size = 0;   // size of the class {(x,x)}; always m
    std::uint64_t class_count = 0;
    std::uint64_t large_classes = 0;   // classes with size >= m^(2/3), identity included
    std::uint64_t sum_squares = 0;     // sum of squared class sizes
    std::vector<std::uint64_t> sizes;  // descending
};

inline PairXorClasses pair_xor_classes(const KeySpec& spec, std::span<const Key> keys,
                                       std::uint64_t size_cap = 4096) {
    spec.validate();
    if (spec.char_bits > 32)
        throw resource_error("pair_xor_classes: char_bits must be <= 32");
    if (keys.size() > size_cap)
        throw resource_error("pair_xor_classes: |X| exceeds the enumeration cap");

    const std::uint64_t m = keys.size();
    // Encode a^b per position: characters equal -> sentinel, else the
    // unordered pair. Exact (no hashing) representative of the XOR set.
    std::map<std::vector<std::uint64_t>, std::uint64_t> classes;
    std::vector<std::uint64_t> enc(spec.c);
    for (Key a : keys) {
        for (Key b : keys) {
            for (int p = 0; p < spec.c; ++p) {
                std::uint64_t ca = key_char(spec, a, p);
                std::uint64_t cb = key_char(spec, b, p);
                if (ca == cb) {
                    enc[p] = ~0ULL;
                } else {
                    if (ca > cb) std::swap(ca, cb);
                    enc[p] = (ca << 32) | cb;
                }
            }
            ++classes[enc];
        }
    }

    PairXorClasses out;
    out.m = m;
    out.class_count = classes.size();
    std::vector<std::uint64_t> identity(spec.c, ~0ULL);
    out.sizes.reserve(classes.size());
    for (const auto& [rep, count] : classes) {
        out.sizes.push_back(count);
        out.sum_squares += count * count;
        if (count * count * count >= m * m) ++out.large_classes;  // |C|^3 >= m^2
        if (rep == identity) out.identity_size = count;
    }
    std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
    return out;
}

}  // namespace tabhash
