#pragma once

// Independent reference checks for tests. Everything here works on label
// strings and plain loops, and never calls the library's verifiers, so a
// bug in verify/colour cannot hide itself.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chromdesign/core.hpp"

namespace oracle {

using Labels = std::vector<std::string>;
using LabelBlocks = std::vector<Labels>;

inline LabelBlocks blocks_of(const chromdesign::Design& d) {
  LabelBlocks out;
  for (const auto& b : d.blocks()) out.push_back(d.labels_of(b));
  return out;
}

inline std::map<std::pair<std::string, std::string>, int> pair_counts(const LabelBlocks& blocks) {
  std::map<std::pair<std::string, std::string>, int> c;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) ++c[std::minmax(b[i], b[j])];
  return c;
}

// Every pair of points covered exactly lambda times, uniform block size.
inline bool is_bibd(const Labels& points, const LabelBlocks& blocks, int lambda) {
  if (blocks.empty()) return false;
  for (const auto& b : blocks) {
    if (b.size() != blocks[0].size() || b.size() < 2) return false;
    if (std::set<std::string>(b.begin(), b.end()).size() != b.size()) return false;
  }
  auto c = pair_counts(blocks);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      auto it = c.find(std::minmax(points[i], points[j]));
      if ((it == c.end() ? 0 : it->second) != lambda) return false;
    }
  return true;
}

inline bool is_bibd(const chromdesign::Design& d) { return is_bibd(d.points(), blocks_of(d), d.lambda()); }

// Pairs across groups covered lambda times, within a group never.
inline bool is_gdd(const Labels& points, const std::vector<Labels>& groups, const LabelBlocks& blocks, int lambda) {
  std::map<std::string, std::size_t> g;
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (const auto& l : groups[i])
      if (!g.emplace(l, i).second) return false;
  if (g.size() != points.size()) return false;
  auto c = pair_counts(blocks);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      auto it = c.find(std::minmax(points[i], points[j]));
      int n = it == c.end() ? 0 : it->second;
      if (n != (g.at(points[i]) == g.at(points[j]) ? 0 : lambda)) return false;
    }
  return true;
}

inline bool is_gdd(const chromdesign::GroupedDesign& gd) {
  std::vector<Labels> groups;
  for (const auto& grp : gd.groups()) groups.push_back(gd.design().labels_of(grp));
  return is_gdd(gd.design().points(), groups, blocks_of(gd.design()), gd.design().lambda());
}

// Same, plus every block meets every group exactly once.
inline bool is_td(const chromdesign::GroupedDesign& gd) {
  if (!is_gdd(gd)) return false;
  for (const auto& b : gd.design().blocks()) {
    std::set<std::size_t> seen;
    for (auto p : b) seen.insert(gd.group_of()[p]);
    if (seen.size() != gd.groups().size() || b.size() != gd.groups().size()) return false;
  }
  return true;
}

// Disjoint sets, every block meets at least two of them.
inline bool blocks_meet_two(const LabelBlocks& blocks, const std::vector<Labels>& sets) {
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (const auto& l : sets[i])
      if (!where.emplace(l, i).second) return false;
  for (const auto& b : blocks) {
    std::set<std::size_t> hit;
    for (const auto& l : b)
      if (auto it = where.find(l); it != where.end()) hit.insert(it->second);
    if (hit.size() < 2) return false;
  }
  return true;
}

inline bool blocks_meet_two(const chromdesign::Design& d, const chromdesign::BlockingSystem& bs) {
  std::vector<Labels> sets;
  for (const auto& s : bs.sets) sets.push_back(d.labels_of(s));
  return blocks_meet_two(blocks_of(d), sets);
}

// Smallest c <= max_c admitting a colouring with no monochromatic block, by
// plain odometer enumeration; nullopt when none.
inline std::optional<int> chi(const chromdesign::Design& d, int max_c) {
  const std::size_t v = d.num_points();
  if (d.blocks().empty()) return 1;
  for (int c = 1; c <= max_c; ++c) {
    std::vector<int> col(v, 0);
    while (true) {
      bool ok = true;
      for (const auto& b : d.blocks()) {
        bool mono = true;
        for (auto p : b) mono = mono && col[p] == col[b[0]];
        if (mono) {
          ok = false;
          break;
        }
      }
      if (ok) return c;
      std::size_t i = 0;
      while (i < v && ++col[i] == c) col[i++] = 0;
      if (i == v) break;
    }
  }
  return std::nullopt;
}

// Random partial triple system on v points: triples added in random order
// whenever no pair repeats.
inline chromdesign::Design random_pts(std::mt19937& rng, int v) {
  std::vector<std::array<int, 3>> all;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b)
      for (int c = b + 1; c < v; ++c) all.push_back({a, b, c});
  std::shuffle(all.begin(), all.end(), rng);
  std::uniform_int_distribution<std::size_t> keep(0, all.size());
  const std::size_t limit = keep(rng);
  std::set<std::pair<int, int>> used;
  std::vector<chromdesign::Block> blocks;
  for (std::size_t i = 0; i < all.size() && blocks.size() < limit; ++i) {
    auto [a, b, c] = all[i];
    if (used.count({a, b}) || used.count({a, c}) || used.count({b, c})) continue;
    used.insert({a, b});
    used.insert({a, c});
    used.insert({b, c});
    blocks.push_back({static_cast<chromdesign::PointId>(a), static_cast<chromdesign::PointId>(b),
                      static_cast<chromdesign::PointId>(c)});
  }
  Labels pts;
  for (int i = 0; i < v; ++i) pts.push_back(std::to_string(i));
  return chromdesign::Design(pts, std::move(blocks), 1);
}

}  // namespace oracle
