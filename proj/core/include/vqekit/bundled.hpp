// Copyright (c) 2026 The vqekit authors
// SPDX-License-Identifier: Apache-2.0
//
// Data files compiled into the library at configure time, so binaries work
// without a data directory at runtime. The texts are byte-identical to the
// files under data/.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace vqekit::bundled {

std::span<const std::string_view> hamiltonian_ids();
std::string_view hamiltonian_text(std::string_view id);  // throws on unknown id

std::span<const std::string_view> topology_names();
std::string_view topology_text(std::string_view name);  // throws on unknown name

// FNV-1a over every bundled text, for provenance reporting.
std::uint64_t data_digest();

}  // namespace vqekit::bundled
