#pragma once

#include <vector>

#include "memsfbp/state.hpp"

namespace memsfbp {

/// Deterministic family of admissible membrane states used by the verify
/// driver and the test suites: polynomial bumps of varying depth, skewness
/// and gap, all smooth and pinned, none closer than gap 0.08.
std::vector<MembraneState> bundled_corpus(const Grid1D& g);

} // namespace memsfbp
