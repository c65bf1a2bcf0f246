#pragma once

// Weak colouring: greedy upper bounds, an exact backtracking solver, a brute
// force oracle, and blocking-system search with quotas.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chromdesign/core.hpp"

namespace chromdesign {

struct SolverConfig {
  std::size_t point_cap = 64;
  double time_budget_seconds = 60.0;
  std::uint64_t node_budget = 0;  // 0 = unlimited
  bool deterministic = true;
  bool symmetry_breaking = true;
};

struct ChromaticCertificate {
  int chi = 0;
  Colouring colouring;
  // For chi >= 2: summary of the exhausted search showing chi-1 colours fail.
  std::optional<std::string> infeasibility_witness;
  std::uint64_t nodes = 0;
};

// Static order by descending block degree (ties canonical); each point gets
// the least colour that does not complete a monochromatic block, else the
// least used colour. nullopt when the result is not valid.
std::optional<Colouring> greedy_colouring(const Design& d, int c);

// Smallest c for which greedy_colouring succeeds.
int greedy_upper_bound(const Design& d);

// True weak chromatic number. Throws ResourceExhausted (carrying bounds) when
// the point cap, node budget or time budget is exceeded.
ChromaticCertificate exact_chromatic(const Design& d, const SolverConfig& cfg = {});

// Exhaustive c^v enumeration for c = 1..max_c; nullopt means "more than
// max_c". Throws UnsupportedSize when v * log2(max_c) > 26.
std::optional<int> brute_force_chromatic(const Design& d, int max_c);

// Exact c-colourability test with the same engine as exact_chromatic.
std::optional<Colouring> find_colouring(const Design& d, int c, const SolverConfig& cfg = {});

// Sets of exactly the given sizes, pairwise disjoint, every block meeting at
// least two. nullopt = proven absent; budget exhaustion throws
// ResourceExhausted.
std::optional<BlockingSystem> find_blocking_system(const Design& d, const std::vector<int>& sizes,
                                                   const SolverConfig& cfg = {});

struct BlockingSearchSpec {
  std::vector<int> sizes;
  // quota[i][g] = required |S_i ∩ group g|, or -1 for free. Empty = none.
  std::vector<std::vector<int>> quota;
  // Every copy of this block is ignored and all sets must avoid it.
  std::optional<Block> exclude;
};

std::optional<BlockingSystem> find_blocking_system_constrained(const GroupedDesign& g,
                                                               const BlockingSearchSpec& spec,
                                                               const SolverConfig& cfg = {});

// quota[i][g] = q for every set and group.
std::vector<std::vector<int>> uniform_quota(std::size_t sets, std::size_t groups, int q);

}  // namespace chromdesign
