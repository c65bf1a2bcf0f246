#pragma once

// Recursive constructions as deterministic combinators. Every ingredient is
// passed in explicitly and checked; nothing is searched for here.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chromdesign/colour.hpp"
#include "chromdesign/construct.hpp"
#include "chromdesign/core.hpp"
#include "chromdesign/verify.hpp"

namespace chromdesign {

// Template design placed onto new labels: template points in from[i]
// (canonical order) take labels to[i] in the given order. Every template
// point must appear in exactly one from[i].
Design place(const Design& tmpl, const std::vector<std::vector<PointId>>& from,
             const std::vector<std::vector<std::string>>& to);

// Same, carrying a blocking system of the template across.
DesignWithSystem place(const DesignWithSystem& tmpl, const std::vector<std::vector<PointId>>& from,
                       const std::vector<std::vector<std::string>>& to);

struct FillSpec {
  GroupedDesign base;
  std::optional<BlockingSystem> base_system;
  // Keyed by group index. Filler points are labelled by the group's labels
  // (plus infinity_label when add_infinity).
  std::map<std::size_t, DesignWithSystem> fillers;
  bool add_infinity = false;
  std::string infinity_label = "inf";
};

// Template filler copied onto every group in canonical order, the extra
// template point (if any) becoming infinity.
FillSpec uniform_fill(const GroupedDesign& base, const DesignWithSystem& tmpl, bool add_infinity,
                      std::optional<BlockingSystem> base_system = std::nullopt);

// Base blocks plus every filler block. Output system: filler sets unioned by
// index, plus the base system when given. Output passes verify_bibd.
DesignWithSystem fill_groups(const FillSpec& spec);

// Base of type y^x, halves = a 2-set system of the base meeting every group
// in floor(y/2) points. The filler's two sets go into the halves of each
// group; output system = the two halves.
DesignWithSystem fill_groups_no_infinity(const GroupedDesign& base, const DesignWithSystem& filler,
                                         const BlockingSystem& halves);

struct Ingredient {
  GroupedDesign gdd;
  BlockingSystem halves;  // two sets, each meeting every group in half; empty for odd weight
};

// Points "(x,l)" for master point x and level l in 0..weight-1. For even
// weight the output system is {levels < weight/2, the rest}.
GddWithSystem wilson_inflate(const GroupedDesign& master, int weight,
                             const std::map<std::size_t, Ingredient>& ingredients);

// TD used for blocks of the marked sub-collection: the special block lands
// on the z* level and the punctured sets fill the other levels.
struct MarkedTd {
  GroupedDesign td;
  Block special_block;
  BlockingSystem punctured_system;
};

struct PlainTd {
  GroupedDesign td;
  BlockingSystem system;
};

struct ProductTds {
  MarkedTd marked;
  PlainTd plain;
};

ProductTds product_tds(const TdWithSystems& t);
// Twisted design (special block = first partition set) for the marked
// blocks, base design for the rest; both use the other two partition sets.
ProductTds product_tds(const TdPair& pair);

struct ProductResult {
  Design design;
  BlockingSystem system;
  std::vector<Block> embedded_copy;  // A x {z*} for each marked A
  std::vector<std::vector<PointId>> level_chunks;  // Y x Z_i, i = 1..m
};

// Points "(y,z)" with z in 0..p-1, z* = 0, Z_i = the i-th run of (p-1)/m
// levels after it. Shape problems throw InvalidArgument.
ProductResult product_construction(const Design& outer, const std::vector<std::size_t>& marked,
                                   const BlockingSystem& outer_system, const ProductTds& tds,
                                   const DesignWithSystem& column);

// True when every block outside the embedded copy meets each of the given
// chunks (copy blocks matched as a multiset).
Verdict check_product_blocks_meet(const ProductResult& r, std::size_t first_chunk, std::size_t second_chunk);

struct CommonTailSpec {
  GroupedDesign base;
  BlockingSystem base_halves;  // R1, R2
  std::vector<std::string> tail;  // U, new labels
  std::vector<std::string> tail_half1, tail_half2;  // U1, U2 inside U
  std::optional<std::size_t> last_group;  // F-double-dagger, if any
  // Every group except last_group: a GDD of type u^1 1^|group| on
  // group u U, as a design over those labels, with a 2-set system.
  std::map<std::size_t, DesignWithSystem> per_group;
  DesignWithSystem last;  // BIBD on last group u U with a c-part system
};

DesignWithSystem common_tail_fill(const CommonTailSpec& spec);

struct LadderResult {
  std::vector<Design> chain;
  BlockingSystem system0;
  std::vector<Block> embedded_copy;  // in chain.back()
  // Designated points of step i -> i+1.
  std::vector<std::array<PointId, 2>> swap_points;
  std::vector<PointId> p_star;  // partial-design ids
};

// Partial (u,3,1) design with a perfect-matching or K4-plus-matching leave,
// h in 0..5. Chain member i uses the twisted TD(3,3) on the first i blocks.
LadderResult ladder_k3(const Design& partial, int h, int lambda);

// Multiset block difference of a and b (same point labels).
std::vector<Block> block_difference(const Design& a, const Design& b);

// Two points meeting every block of the difference, if such a pair exists.
std::optional<std::array<PointId, 2>> confining_pair(const std::vector<Block>& diff);

struct StepScan {
  std::vector<int> chi;
  std::vector<bool> confined;  // step i -> i+1 confined to two points
};

// Exact chi of every member. Over cfg.point_cap or out of budget ->
// UnsupportedSize; a confined step with |delta chi| > 1 ->
// PreconditionViolation.
StepScan chromatic_step_scan(const std::vector<Design>& chain, const SolverConfig& cfg = {});

}  // namespace chromdesign
