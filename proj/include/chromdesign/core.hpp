#pragma once

// Data model shared by every module: designs with string-labelled points,
// grouped designs, blocking systems and colourings, plus admissibility
// arithmetic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chromdesign {

using PointId = std::uint32_t;

// Sorted, duplicate-free list of point ids.
using Block = std::vector<PointId>;

// Natural order on labels: digit runs compare numerically, so "(2,0)" sorts
// before "(10,0)". This is the canonical point order used everywhere.
bool label_less(std::string_view a, std::string_view b);

// A point set with a multiset of blocks and an index lambda. Partial and full
// BIBDs share this type; which one a value is gets decided by verify_*.
class Design {
 public:
  Design() = default;
  Design(std::vector<std::string> points, std::vector<Block> blocks, int lambda);

  static Design from_labels(std::vector<std::string> points,
                            const std::vector<std::vector<std::string>>& blocks, int lambda);

  std::size_t num_points() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& label(PointId p) const { return points_.at(p); }
  std::optional<PointId> find(std::string_view label) const;
  // Throws NotFound.
  PointId id_of(std::string_view label) const;

  const std::vector<Block>& blocks() const { return blocks_; }
  int lambda() const { return lambda_; }

  // True when every block has the same size (vacuously for no blocks).
  bool is_uniform() const;
  // The common block size, or nullopt for mixed sizes or no blocks.
  std::optional<std::size_t> block_size() const;

  std::vector<std::string> labels_of(const std::vector<PointId>& ids) const;

  friend bool operator==(const Design& a, const Design& b) {
    return a.lambda_ == b.lambda_ && a.points_ == b.points_ && a.blocks_ == b.blocks_;
  }

 private:
  std::vector<std::string> points_;
  std::unordered_map<std::string, PointId> index_;
  std::vector<Block> blocks_;
  int lambda_ = 1;
};

// Incremental construction by label; used by the composition operators.
class DesignBuilder {
 public:
  explicit DesignBuilder(int lambda) : lambda_(lambda) {}

  PointId add_point(const std::string& label);
  void add_block(const std::vector<std::string>& labels);
  void add_block_ids(std::vector<PointId> ids);
  std::size_t num_points() const { return points_.size(); }
  std::size_t num_blocks() const { return blocks_.size(); }

  Design build() const;

 private:
  int lambda_;
  std::vector<std::string> points_;
  std::unordered_map<std::string, PointId> index_;
  std::vector<Block> blocks_;
};

// Design plus a partition of its points into groups. The partition is
// checked on construction; whether blocks respect the groups is a
// verification question (verify_gdd), not a type invariant.
class GroupedDesign {
 public:
  GroupedDesign() = default;
  GroupedDesign(Design design, std::vector<std::vector<PointId>> groups);

  const Design& design() const { return design_; }
  const std::vector<std::vector<PointId>>& groups() const { return groups_; }
  // Group index of every point.
  const std::vector<std::size_t>& group_of() const { return group_of_; }

  friend bool operator==(const GroupedDesign& a, const GroupedDesign& b) {
    return a.design_ == b.design_ && a.groups_ == b.groups_;
  }

 private:
  Design design_;
  std::vector<std::vector<PointId>> groups_;
  std::vector<std::size_t> group_of_;
};

struct GroupTypeEntry {
  std::size_t size;
  std::size_t multiplicity;
  friend bool operator==(const GroupTypeEntry&, const GroupTypeEntry&) = default;
};

// Distinct group sizes in descending order with their multiplicities.
using GroupType = std::vector<GroupTypeEntry>;

GroupType group_type(const GroupedDesign& g);
// "3^1 1^6"
std::string to_string(const GroupType& type);

// Ordered list of pairwise disjoint point sets S_1..S_c. Sets need not cover
// the point set.
struct BlockingSystem {
  std::vector<std::vector<PointId>> sets;
  friend bool operator==(const BlockingSystem&, const BlockingSystem&) = default;
};

// Throws InvalidArgument when a set references an unknown point or two sets
// overlap.
void check_system_shape(const Design& d, const BlockingSystem& bs);

BlockingSystem system_from_labels(const Design& d,
                                  const std::vector<std::vector<std::string>>& sets);
// Label form with each set in canonical order.
std::vector<std::vector<std::string>> system_labels(const Design& d, const BlockingSystem& bs);

// Total map point -> colour in 1..num_colours; 0 marks an unassigned point.
struct Colouring {
  std::vector<int> colour;
  int num_colours = 0;
};

// lambda(v-1) = 0 mod (k-1) and lambda v(v-1) = 0 mod k(k-1).
bool is_admissible(long long v, int k, int lambda);

// Residues m in [0, k(k-1)) whose class is (k,lambda)-admissible.
std::vector<int> admissible_residues(int k, int lambda);

// Every block repeated `factor` times, lambda multiplied. Throws
// InvalidArgument for factor 0.
Design scale_index(const Design& d, int factor);
GroupedDesign scale_index(const GroupedDesign& g, int factor);

// Point ids sorted by label_less.
std::vector<PointId> canonical_order(const Design& d);

// Points reordered canonically, blocks sorted and then listed
// lexicographically. Labels are kept.
Design canonicalize(const Design& d);
GroupedDesign canonicalize(const GroupedDesign& g);

// Same block structure on new labels (new_labels[i] replaces point i).
Design relabel(const Design& d, const std::vector<std::string>& new_labels);

// One block on all of `labels`, repeated lambda times.
Design trivial_design(const std::vector<std::string>& labels, int lambda);

// "(a,b)"
std::string pair_label(std::string_view a, std::string_view b);

}  // namespace chromdesign
