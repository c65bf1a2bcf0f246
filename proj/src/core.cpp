#include "chromdesign/core.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "chromdesign/errors.hpp"

namespace chromdesign {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// -1, 0, 1 comparison of two digit runs by numeric value; equal values with
// different zero padding fall back to the shorter run first.
int compare_digit_runs(std::string_view a, std::string_view b) {
  auto strip = [](std::string_view s) {
    std::size_t i = 0;
    while (i + 1 < s.size() && s[i] == '0') ++i;
    return s.substr(i);
  };
  auto sa = strip(a), sb = strip(b);
  if (sa.size() != sb.size()) return sa.size() < sb.size() ? -1 : 1;
  if (int c = sa.compare(sb); c != 0) return c < 0 ? -1 : 1;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

std::unordered_map<std::string, PointId> build_index(const std::vector<std::string>& points) {
  std::unordered_map<std::string, PointId> index;
  index.reserve(points.size());
  for (PointId i = 0; i < points.size(); ++i) {
    if (!index.emplace(points[i], i).second)
      throw InvalidArgument("duplicate point label '" + points[i] + "'");
  }
  return index;
}

}  // namespace

bool label_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && is_digit(a[i2])) ++i2;
      while (j2 < b.size() && is_digit(b[j2])) ++j2;
      int c = compare_digit_runs(a.substr(i, i2 - i), b.substr(j, j2 - j));
      if (c != 0) return c < 0;
      i = i2;
      j = j2;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
    ++i;
    ++j;
  }
  return (a.size() - i) < (b.size() - j);
}

Design::Design(std::vector<std::string> points, std::vector<Block> blocks, int lambda)
    : points_(std::move(points)), blocks_(std::move(blocks)), lambda_(lambda) {
  if (lambda_ < 1) throw InvalidArgument("lambda must be positive");
  index_ = build_index(points_);
  for (auto& b : blocks_) {
    std::sort(b.begin(), b.end());
    if (b.size() < 2) throw InvalidArgument("block with fewer than 2 points");
    if (std::adjacent_find(b.begin(), b.end()) != b.end())
      throw InvalidArgument("block repeats a point");
    if (b.back() >= points_.size()) throw InvalidArgument("block references unknown point id");
  }
}

Design Design::from_labels(std::vector<std::string> points,
                           const std::vector<std::vector<std::string>>& blocks, int lambda) {
  auto index = build_index(points);
  std::vector<Block> ids;
  ids.reserve(blocks.size());
  for (const auto& b : blocks) {
    Block blk;
    for (const auto& l : b) {
      auto it = index.find(l);
      if (it == index.end()) throw InvalidArgument("block references unknown point '" + l + "'");
      blk.push_back(it->second);
    }
    ids.push_back(std::move(blk));
  }
  return Design(std::move(points), std::move(ids), lambda);
}

std::optional<PointId> Design::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointId Design::id_of(std::string_view label) const {
  auto p = find(label);
  if (!p) throw NotFound("no point labelled '" + std::string(label) + "'");
  return *p;
}

bool Design::is_uniform() const {
  for (const auto& b : blocks_)
    if (b.size() != blocks_.front().size()) return false;
  return true;
}

std::optional<std::size_t> Design::block_size() const {
  if (blocks_.empty() || !is_uniform()) return std::nullopt;
  return blocks_.front().size();
}

std::vector<std::string> Design::labels_of(const std::vector<PointId>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto p : ids) out.push_back(label(p));
  return out;
}

PointId DesignBuilder::add_point(const std::string& label) {
  auto [it, fresh] = index_.emplace(label, static_cast<PointId>(points_.size()));
  if (fresh) points_.push_back(label);
  return it->second;
}

void DesignBuilder::add_block(const std::vector<std::string>& labels) {
  Block b;
  b.reserve(labels.size());
  for (const auto& l : labels) b.push_back(add_point(l));
  blocks_.push_back(std::move(b));
}

void DesignBuilder::add_block_ids(std::vector<PointId> ids) { blocks_.push_back(std::move(ids)); }

Design DesignBuilder::build() const { return Design(points_, blocks_, lambda_); }

GroupedDesign::GroupedDesign(Design design, std::vector<std::vector<PointId>> groups)
    : design_(std::move(design)), groups_(std::move(groups)) {
  const std::size_t none = static_cast<std::size_t>(-1);
  group_of_.assign(design_.num_points(), none);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    auto& g = groups_[gi];
    if (g.empty()) throw InvalidArgument("empty group");
    std::sort(g.begin(), g.end());
    for (auto p : g) {
      if (p >= design_.num_points()) throw InvalidArgument("group references unknown point id");
      if (group_of_[p] != none)
        throw InvalidArgument("point '" + design_.label(p) + "' lies in two groups");
      group_of_[p] = gi;
    }
  }
  for (PointId p = 0; p < group_of_.size(); ++p)
    if (group_of_[p] == none)
      throw InvalidArgument("point '" + design_.label(p) + "' lies in no group");
}

GroupType group_type(const GroupedDesign& g) {
  std::map<std::size_t, std::size_t, std::greater<>> counts;
  for (const auto& grp : g.groups()) ++counts[grp.size()];
  GroupType out;
  for (auto [size, mult] : counts) out.push_back({size, mult});
  return out;
}

std::string to_string(const GroupType& type) {
  std::string s;
  for (const auto& e : type) {
    if (!s.empty()) s += ' ';
    s += std::to_string(e.size) + "^" + std::to_string(e.multiplicity);
  }
  return s;
}

void check_system_shape(const Design& d, const BlockingSystem& bs) {
  std::vector<int> owner(d.num_points(), -1);
  for (std::size_t i = 0; i < bs.sets.size(); ++i) {
    for (auto p : bs.sets[i]) {
      if (p >= d.num_points()) throw InvalidArgument("blocking set references unknown point id");
      if (owner[p] == static_cast<int>(i))
        throw InvalidArgument("blocking set " + std::to_string(i + 1) + " repeats a point");
      if (owner[p] >= 0)
        throw InvalidArgument("blocking sets " + std::to_string(owner[p] + 1) + " and " +
                              std::to_string(i + 1) + " share point '" + d.label(p) + "'");
      owner[p] = static_cast<int>(i);
    }
  }
}

BlockingSystem system_from_labels(const Design& d,
                                  const std::vector<std::vector<std::string>>& sets) {
  BlockingSystem bs;
  for (const auto& s : sets) {
    std::vector<PointId> ids;
    for (const auto& l : s) {
      auto p = d.find(l);
      if (!p) throw InvalidArgument("blocking set references unknown point '" + l + "'");
      ids.push_back(*p);
    }
    std::sort(ids.begin(), ids.end());
    bs.sets.push_back(std::move(ids));
  }
  return bs;
}

std::vector<std::vector<std::string>> system_labels(const Design& d, const BlockingSystem& bs) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : bs.sets) {
    auto labels = d.labels_of(s);
    std::sort(labels.begin(), labels.end(), label_less);
    out.push_back(std::move(labels));
  }
  return out;
}

bool is_admissible(long long v, int k, int lambda) {
  if (k < 2 || v < 1 || lambda < 1) return false;
  long long k1 = k - 1, kk = static_cast<long long>(k) * (k - 1);
  // reduce before multiplying so large v cannot overflow
  long long a = (lambda % k1) * ((v - 1) % k1) % k1;
  long long b = (lambda % kk) * (v % kk) % kk * ((v - 1) % kk) % kk;
  return a == 0 && b == 0;
}

std::vector<int> admissible_residues(int k, int lambda) {
  std::vector<int> out;
  int m = k * (k - 1);
  for (int r = 0; r < m; ++r)
    if (is_admissible(r + m, k, lambda)) out.push_back(r);
  return out;
}

Design scale_index(const Design& d, int factor) {
  if (factor < 1) throw InvalidArgument("scale factor must be positive");
  std::vector<Block> blocks;
  blocks.reserve(d.blocks().size() * factor);
  for (const auto& b : d.blocks())
    for (int i = 0; i < factor; ++i) blocks.push_back(b);
  return Design(d.points(), std::move(blocks), d.lambda() * factor);
}

GroupedDesign scale_index(const GroupedDesign& g, int factor) {
  return GroupedDesign(scale_index(g.design(), factor), g.groups());
}

std::vector<PointId> canonical_order(const Design& d) {
  std::vector<PointId> order(d.num_points());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](PointId a, PointId b) { return label_less(d.label(a), d.label(b)); });
  return order;
}

namespace {

std::vector<PointId> inverse(const std::vector<PointId>& order) {
  std::vector<PointId> pos(order.size());
  for (PointId i = 0; i < order.size(); ++i) pos[order[i]] = i;
  return pos;
}

std::vector<PointId> remap(const std::vector<PointId>& s, const std::vector<PointId>& pos) {
  std::vector<PointId> out;
  out.reserve(s.size());
  for (auto p : s) out.push_back(pos[p]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Design canonicalize(const Design& d) {
  auto order = canonical_order(d);
  auto pos = inverse(order);
  std::vector<std::string> labels;
  labels.reserve(order.size());
  for (auto p : order) labels.push_back(d.label(p));
  std::vector<Block> blocks;
  blocks.reserve(d.blocks().size());
  for (const auto& b : d.blocks()) blocks.push_back(remap(b, pos));
  std::sort(blocks.begin(), blocks.end());
  return Design(std::move(labels), std::move(blocks), d.lambda());
}

GroupedDesign canonicalize(const GroupedDesign& g) {
  auto pos = inverse(canonical_order(g.design()));
  std::vector<std::vector<PointId>> groups;
  for (const auto& grp : g.groups()) groups.push_back(remap(grp, pos));
  std::sort(groups.begin(), groups.end());
  return GroupedDesign(canonicalize(g.design()), std::move(groups));
}

Design relabel(const Design& d, const std::vector<std::string>& new_labels) {
  if (new_labels.size() != d.num_points()) throw InvalidArgument("relabel: label count mismatch");
  return Design(new_labels, d.blocks(), d.lambda());
}

Design trivial_design(const std::vector<std::string>& labels, int lambda) {
  Block all(labels.size());
  std::iota(all.begin(), all.end(), 0);
  return Design(labels, std::vector<Block>(lambda, all), lambda);
}

std::string pair_label(std::string_view a, std::string_view b) {
  std::string s = "(";
  s += a;
  s += ',';
  s += b;
  s += ')';
  return s;
}

}  // namespace chromdesign
