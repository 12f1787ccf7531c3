#pragma once

#include <cstdint>
#include <string>

#include <gtest/gtest.h>

#include "gen.hpp"

namespace cogmux::testing {

/// Runs `prop(gen, case_index)` for n cases; each case gets its own generator so a
/// failure message's case index reproduces it.
template <class Prop>
void for_all(int n, std::uint64_t seed, Prop&& prop) {
  for (int k = 0; k < n; ++k) {
    Gen g(derive_stream_seed(seed, static_cast<std::uint64_t>(k)));
    SCOPED_TRACE("property case " + std::to_string(k) + " seed " + std::to_string(seed));
    prop(g, k);
    if (::testing::Test::HasFailure()) return;
  }
}

}  // namespace cogmux::testing
