#pragma once

#include <cstdint>

namespace pgplan {

enum class SeekOutcome { Found, None, Inconclusive };

const char* outcome_name(SeekOutcome o);

// Monotone counters reported by every solver invocation.
struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t partitions_tried = 0;
  std::uint64_t beliefs_evaluated = 0;
};

}  // namespace pgplan
