#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ilpkit {

// All exact arithmetic runs on Int. Semantics are unbounded integers; this
// implementation uses 64-bit words, so every operation that can grow a value
// goes through the checked_* helpers below and overflow raises Error instead
// of wrapping. Papadimitriou-style bounds overflow already at desk scale, so
// silent wraparound would corrupt oracle verdicts.
using Int = long long;

struct Error : std::runtime_error {
    enum Kind {
        parse,         // malformed input text
        dimension,     // mismatched sizes
        precondition,  // operation contract violated by the caller
        overflow,      // exact value does not fit the 64-bit backend
        budget,        // search/state budget exhausted (clean, reportable)
        internal,
    };
    Kind kind;
    Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(Error::overflow, "integer overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Error(Error::overflow, "integer overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(Error::overflow, "integer overflow in multiplication");
    return r;
}

// Number of bits in v's binary representation; 0 for v <= 0.
inline Int bit_length(Int v) {
    Int n = 0;
    while (v > 0) {
        ++n;
        v >>= 1;
    }
    return n;
}

// b^e with overflow detection, e >= 0.
inline Int checked_pow(Int b, Int e) {
    if (e < 0) throw Error(Error::precondition, "negative exponent");
    Int r = 1;
    while (e > 0) {
        if (e & 1) r = checked_mul(r, b);
        e >>= 1;
        if (e > 0) b = checked_mul(b, b);
    }
    return r;
}

// Deterministic 64-bit generator (splitmix64). Used for every seeded
// harness and the randomized detecting matrices: unlike the std
// distributions its output is bit-stable across platforms, which the
// byte-identical report requirement needs.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0; modulo bias is irrelevant at harness scale
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // uniform in [lo, hi] inclusive
    Int range(Int lo, Int hi) {
        return lo + static_cast<Int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return next() & 1; }
};

}  // namespace ilpkit
