// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic seeding utilities. Every stochastic component in the library
// draws from a named mt19937_64 stream derived from (master seed, tag list),
// so identical seeds reproduce identical outputs byte for byte.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace vqekit {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Child seed for a named stream, e.g. derive_seed(seed, {clique, lambda, tile}).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t t : tags) s = splitmix64(s ^ t);
    return s;
}

inline std::mt19937_64 make_stream(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> tags) {
    return std::mt19937_64{derive_seed(master, tags)};
}

// String-named variants: tags are hashed, so streams named, say,
// {"zne", "2", "tile", "0"} and {"zne", "2", "tile", "1"} are unrelated.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::string_view> tags) noexcept {
    std::uint64_t s = splitmix64(master);
    for (std::string_view t : tags) s = splitmix64(s ^ fnv1a64(t));
    return s;
}

inline std::mt19937_64 make_stream(std::uint64_t master,
                                   std::initializer_list<std::string_view> tags) {
    return std::mt19937_64{derive_seed(master, tags)};
}

// 53-bit mantissa uniform in [0, 1); avoids std::uniform_real_distribution,
// whose output sequence is implementation-defined.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace vqekit
