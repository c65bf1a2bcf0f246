#pragma once

// Explicit finite constructions, block tables and named fixtures.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chromdesign/core.hpp"

namespace chromdesign {

// A transversal design with a blocking system for all blocks and a second
// one valid once the special block is removed (its sets avoid that block).
struct TdWithSystems {
  GroupedDesign td;
  BlockingSystem whole_system;
  Block special_block;
  BlockingSystem punctured_system;
};

// Two TD(3,3)s on the same points and groups. Every block of twisted that is
// not in base contains one of the swap points; partition_system blocks base
// and its first set is a block of twisted.
struct TdPair {
  GroupedDesign base;
  GroupedDesign twisted;
  std::array<PointId, 2> swap_points;
  BlockingSystem partition_system;
};

struct DesignWithSystem {
  Design design;
  BlockingSystem system;
};

struct GddWithSystem {
  GroupedDesign gdd;
  BlockingSystem system;
};

bool is_prime(long long n);

// Points "(x,y)" for x in Z_k, y in Z_p, groups {x} x Z_p, blocks
// {(x, ix+j)} for i in -(p-1)/2..(p-1)/2 and j in Z_p. The S and T sets are
// the fixed half/half systems; for k = 5 they are only guaranteed when
// p = 1 (mod 4), which require_mod4 enforces.
TdWithSystems td_lines(int k, int p, bool require_mod4 = true);

// TD(4,13) with blocks {(0,i),(1,j),(2,i+j),(3,i+2j)} and the two stored
// 3-systems; special block B_{1,1}.
TdWithSystems td_4_13();

// The same block formula for any odd prime p (no systems).
GroupedDesign td_4_p(int p);

TdPair td_3_3_pair();

// Smallest lambda for which w is (3,lambda)-admissible.
int lambda_min_k3(long long w);

// (w,3,lambda)-BIBD with a 3-blocking system partitioning the points into
// parts whose sizes differ by at most one. Catalogue covers 5 <= w <= 21.
// Inadmissible input -> InvalidArgument, w > 21 -> UnsupportedSize.
DesignWithSystem bibd_3_blocked(int w, int lambda);

// (3,lambda)-GDD of type h^1 1^6 on {0..h-1} u {a..f} with a balanced
// 3-blocking system partitioning the points, every set holding two of the
// singleton points. lambda must be even when h is.
GddWithSystem gdd_h_1_6(int h, int lambda);

// The raw table entry used by gdd_h_1_6 for h in 2..5.
struct GddTableEntry {
  int h;
  int lambda_min;
  std::array<std::string, 3> rows;
  std::vector<std::vector<std::string>> sets;
};
const std::vector<GddTableEntry>& gdd_h16_table();

// (7,4,2) biplane: complements of the lines {i, i+1, i+3} mod 7.
Design biplane_7();

// (4,2)-GDD of type 2^4 on points "(g,l)": all transversals with an odd
// number of level-0 points. System = levels 0 and 1.
GddWithSystem gdd_4_2_type_2_4();

struct Fixture {
  std::variant<Design, GroupedDesign> value;
  std::optional<BlockingSystem> system;
  std::string kind;  // bibd, partial_bibd, gdd, td

  const Design& design() const;
  const GroupedDesign* grouped() const { return std::get_if<GroupedDesign>(&value); }
};

// Throws NotFound for unknown names.
Fixture fixture(std::string_view name);
std::vector<std::string> fixture_names();

}  // namespace chromdesign
