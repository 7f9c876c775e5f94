#pragma once

// Keys as c-character vectors over a power-of-two alphabet, plus the
// position-character view: a key is the set {(i, x[i])} and XOR of keys is
// symmetric difference of those sets. That viewpoint carries the whole
// dependence machinery.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "tabhash/common.hpp"

namespace tabhash {

struct KeySpec {
    int c = 4;          // characters per key
    int char_bits = 8;  // bits per character; alphabet size 2^char_bits

    void validate() const {
        if (c < 1) throw config_error("KeySpec: c must be >= 1");
        if (char_bits < 1) throw config_error("KeySpec: char_bits must be >= 1");
        if (static_cast<long long>(c) * char_bits > 64)
            throw config_error("KeySpec: c*char_bits must be <= 64");
    }

    int total_bits() const { return c * char_bits; }

    std::uint64_t char_mask() const {
        return char_bits >= 64 ? ~0ULL : ((1ULL << char_bits) - 1);
    }

    std::uint64_t universe_mask() const {
        int b = total_bits();
        return b >= 64 ? ~0ULL : ((1ULL << b) - 1);
    }

    // Alphabet size; only meaningful when char_bits < 64.
    std::uint64_t sigma() const { return 1ULL << char_bits; }

    bool operator==(const KeySpec&) const = default;
};

// A key, packed character 0 in the low bits. All operations are spec-aware.
struct Key {
    std::uint64_t packed = 0;
    auto operator<=>(const Key&) const = default;
};

inline std::uint64_t key_char(const KeySpec& spec, Key x, int i) {
    return (x.packed >> (i * spec.char_bits)) & spec.char_mask();
}

inline Key key_from_packed(const KeySpec& spec, std::uint64_t packed) {
    if ((packed & ~spec.universe_mask()) != 0)
        throw domain_error("key value exceeds universe");
    return Key{packed};
}

inline Key make_key(const KeySpec& spec, std::span<const std::uint64_t> chars) {
    if (static_cast<int>(chars.size()) != spec.c)
        throw domain_error("make_key: wrong character count");
    std::uint64_t packed = 0;
    for (int i = 0; i < spec.c; ++i) {
        if ((chars[i] & ~spec.char_mask()) != 0)
            throw domain_error("make_key: character out of range");
        packed |= chars[i] << (i * spec.char_bits);
    }
    return Key{packed};
}

inline Key make_key(const KeySpec& spec, std::initializer_list<std::uint64_t> chars) {
    return make_key(spec, std::span<const std::uint64_t>(chars.begin(), chars.size()));
}

struct PosChar {
    std::uint32_t pos = 0;
    std::uint64_t chr = 0;
    auto operator<=>(const PosChar&) const = default;
};

// A set of position characters, kept sorted and duplicate-free so that
// XOR (symmetric difference) is a linear merge.
struct PositionCharacterSet {
    std::vector<PosChar> items;

    bool empty() const { return items.empty(); }
    std::size_t size() const { return items.size(); }
    bool operator==(const PositionCharacterSet&) const = default;
};

inline PositionCharacterSet pcs_from_pairs(std::vector<PosChar> pairs) {
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
        throw input_error("position-character set has duplicate pairs");
    return PositionCharacterSet{std::move(pairs)};
}

inline PositionCharacterSet key_to_pcs(const KeySpec& spec, Key x) {
    PositionCharacterSet s;
    s.items.reserve(spec.c);
    for (int i = 0; i < spec.c; ++i)
        s.items.push_back(PosChar{static_cast<std::uint32_t>(i), key_char(spec, x, i)});
    return s;
}

// Symmetric difference; the group operation on position-character sets.
inline PositionCharacterSet pcs_xor(const PositionCharacterSet& a,
                                    const PositionCharacterSet& b) {
    PositionCharacterSet out;
    out.items.reserve(a.items.size() + b.items.size());
    std::size_t i = 0, j = 0;
    while (i < a.items.size() && j < b.items.size()) {
        if (a.items[i] < b.items[j]) {
            out.items.push_back(a.items[i++]);
        } else if (b.items[j] < a.items[i]) {
            out.items.push_back(b.items[j++]);
        } else {
            ++i;  // equal pairs cancel
            ++j;
        }
    }
    out.items.insert(out.items.end(), a.items.begin() + i, a.items.end());
    out.items.insert(out.items.end(), b.items.begin() + j, b.items.end());
    return out;
}

// XOR of a key sequence viewed as position-character sets. Empty result
// means every position character appears an even number of times.
inline PositionCharacterSet key_xor(const KeySpec& spec, std::span<const Key> keys) {
    PositionCharacterSet acc;
    for (Key k : keys) acc = pcs_xor(acc, key_to_pcs(spec, k));
    return acc;
}

}  // namespace tabhash
