#pragma once

// Exhaustive axiom checkers. Every failing verdict names the first offending
// pair, block or set in canonical point order.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chromdesign/core.hpp"

namespace chromdesign {

struct Verdict {
  bool ok = true;
  std::optional<std::string> witness;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return ok; }
};

// Uniform block size required (throws InvalidArgument otherwise). Every pair
// in exactly lambda blocks.
Verdict verify_bibd(const Design& d);
// Every pair in at most lambda blocks.
Verdict verify_partial_bibd(const Design& d);

// Cross-group pairs exactly lambda times, same-group pairs never. Mixed block
// sizes are allowed here.
Verdict verify_gdd(const GroupedDesign& g);
// verify_gdd plus equal group sizes and block size = number of groups.
Verdict verify_td(const GroupedDesign& g);

// Every block meets at least two sets. Overlapping sets throw
// InvalidArgument.
Verdict verify_blocking_system(const Design& d, const BlockingSystem& bs);
// Same, ignoring every copy of `excluded`, and additionally requiring each
// set to avoid `excluded`.
Verdict verify_blocking_system_except(const Design& d, const BlockingSystem& bs,
                                      const Block& excluded);

// S_i -> colour i, uncovered points -> colour 1. Throws PreconditionViolation
// if bs does not verify.
Colouring blocking_system_to_colouring(const Design& d, const BlockingSystem& bs);

// No monochromatic block. A colouring that is not total (wrong length, or a
// 0 / out-of-range entry) throws InvalidArgument.
Verdict verify_colouring(const Design& d, const Colouring& col);

struct LeaveGraph {
  std::vector<PointId> vertices;
  std::vector<std::pair<PointId, PointId>> edges;  // a < b, lexicographic
};

// Uncovered pairs of an index-1 partial design. lambda != 1 or an invalid
// partial design throws InvalidArgument.
LeaveGraph leave_graph(const Design& d);

enum class LeaveShape { perfect_matching, k4_plus_matching };

Verdict verify_leave_shape(const Design& d, LeaveShape shape);

// With two sets each holding exactly half of every group, every 4-point
// block must meet S1 (and S2) in an odd number of points.
Verdict check_parity_property_k4(const GroupedDesign& g, const BlockingSystem& bs);

// Per-pair block counts, row-major v*v; shared with tests and composition
// sanity checks.
std::vector<int> pair_counts(const Design& d);

}  // namespace chromdesign
