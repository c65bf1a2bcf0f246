#include "chromdesign/verify.hpp"

#include <algorithm>

#include "chromdesign/errors.hpp"

namespace chromdesign {

namespace {

void require_uniform(const Design& d, const char* who) {
  if (!d.is_uniform()) throw InvalidArgument(std::string(who) + ": mixed block sizes");
}

std::string pair_text(const Design& d, PointId a, PointId b) {
  return "{" + d.label(a) + ", " + d.label(b) + "}";
}

std::string block_text(const Design& d, const Block& b) {
  auto labels = d.labels_of(b);
  std::sort(labels.begin(), labels.end(), label_less);
  std::string s = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? ", " : "") + labels[i];
  return s + "}";
}

// Scan pairs in canonical order; `expected(a,b)` gives the required count or
// -1 for "at most lambda".
template <class Expected>
Verdict scan_pairs(const Design& d, Expected expected) {
  auto counts = pair_counts(d);
  auto order = canonical_order(d);
  const std::size_t v = d.num_points();
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = i + 1; j < v; ++j) {
      PointId a = order[i], b = order[j];
      int got = counts[a * v + b];
      int want = expected(a, b);
      if (want < 0) {
        if (got > d.lambda())
          return Verdict::fail("pair " + pair_text(d, a, b) + " covered " + std::to_string(got) +
                               " times, at most " + std::to_string(d.lambda()) + " allowed");
      } else if (got != want) {
        return Verdict::fail("pair " + pair_text(d, a, b) + " covered " + std::to_string(got) +
                             " times, expected " + std::to_string(want));
      }
    }
  }
  return Verdict::pass();
}

// Blocks in canonical order paired with their original index.
std::vector<std::size_t> canonical_block_order(const Design& d) {
  auto order = canonical_order(d);
  std::vector<PointId> pos(d.num_points());
  for (PointId i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::vector<PointId>> keys;
  for (const auto& b : d.blocks()) {
    std::vector<PointId> k;
    for (auto p : b) k.push_back(pos[p]);
    std::sort(k.begin(), k.end());
    keys.push_back(std::move(k));
  }
  std::vector<std::size_t> idx(d.blocks().size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return keys[x] < keys[y]; });
  return idx;
}

}  // namespace

std::vector<int> pair_counts(const Design& d) {
  const std::size_t v = d.num_points();
  std::vector<int> counts(v * v, 0);
  for (const auto& b : d.blocks())
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        ++counts[b[i] * v + b[j]];
        ++counts[b[j] * v + b[i]];
      }
  return counts;
}

Verdict verify_bibd(const Design& d) {
  require_uniform(d, "verify_bibd");
  return scan_pairs(d, [&](PointId, PointId) { return d.lambda(); });
}

Verdict verify_partial_bibd(const Design& d) {
  require_uniform(d, "verify_partial_bibd");
  return scan_pairs(d, [](PointId, PointId) { return -1; });
}

Verdict verify_gdd(const GroupedDesign& g) {
  const auto& d = g.design();
  const auto& gof = g.group_of();
  return scan_pairs(d, [&](PointId a, PointId b) { return gof[a] == gof[b] ? 0 : d.lambda(); });
}

Verdict verify_td(const GroupedDesign& g) {
  auto v = verify_gdd(g);
  if (!v.ok) return v;
  const auto& groups = g.groups();
  for (const auto& grp : groups)
    if (grp.size() != groups.front().size())
      return Verdict::fail("groups have unequal sizes (type " + to_string(group_type(g)) + ")");
  for (auto i : canonical_block_order(g.design())) {
    const auto& b = g.design().blocks()[i];
    if (b.size() != groups.size())
      return Verdict::fail("block " + block_text(g.design(), b) + " has size " +
                           std::to_string(b.size()) + " but there are " +
                           std::to_string(groups.size()) + " groups");
  }
  return Verdict::pass();
}

namespace {

Verdict scan_blocks(const Design& d, const BlockingSystem& bs, const Block* excluded) {
  check_system_shape(d, bs);
  std::vector<int> owner(d.num_points(), -1);
  for (std::size_t i = 0; i < bs.sets.size(); ++i)
    for (auto p : bs.sets[i]) owner[p] = static_cast<int>(i);
  if (excluded) {
    Block ex = *excluded;
    std::sort(ex.begin(), ex.end());
    for (auto p : ex)
      if (owner[p] >= 0)
        return Verdict::fail("set " + std::to_string(owner[p] + 1) + " contains point '" +
                             d.label(p) + "' of the excluded block");
  }
  for (auto i : canonical_block_order(d)) {
    const auto& b = d.blocks()[i];
    if (excluded && b == *excluded) continue;
    int first = -1;
    bool two = false;
    for (auto p : b) {
      if (owner[p] < 0) continue;
      if (first < 0) first = owner[p];
      else if (owner[p] != first) { two = true; break; }
    }
    if (!two)
      return Verdict::fail("block " + block_text(d, b) + " meets " +
                           (first < 0 ? std::string("no set") : "only set " + std::to_string(first + 1)));
  }
  return Verdict::pass();
}

}  // namespace

Verdict verify_blocking_system(const Design& d, const BlockingSystem& bs) {
  return scan_blocks(d, bs, nullptr);
}

Verdict verify_blocking_system_except(const Design& d, const BlockingSystem& bs,
                                      const Block& excluded) {
  Block ex = excluded;
  std::sort(ex.begin(), ex.end());
  for (auto p : ex)
    if (p >= d.num_points()) throw InvalidArgument("excluded block references unknown point id");
  return scan_blocks(d, bs, &ex);
}

Colouring blocking_system_to_colouring(const Design& d, const BlockingSystem& bs) {
  auto v = verify_blocking_system(d, bs);
  if (!v.ok) throw PreconditionViolation("blocking system invalid: " + *v.witness);
  Colouring col;
  col.num_colours = std::max<int>(1, static_cast<int>(bs.sets.size()));
  col.colour.assign(d.num_points(), 1);
  for (std::size_t i = 0; i < bs.sets.size(); ++i)
    for (auto p : bs.sets[i]) col.colour[p] = static_cast<int>(i) + 1;
  return col;
}

Verdict verify_colouring(const Design& d, const Colouring& col) {
  if (col.colour.size() != d.num_points())
    throw InvalidArgument("colouring does not cover every point");
  for (PointId p = 0; p < col.colour.size(); ++p)
    if (col.colour[p] < 1 || col.colour[p] > col.num_colours)
      throw InvalidArgument("point '" + d.label(p) + "' has no colour in 1.." +
                            std::to_string(col.num_colours));
  for (auto i : canonical_block_order(d)) {
    const auto& b = d.blocks()[i];
    bool mono = std::all_of(b.begin(), b.end(),
                            [&](PointId p) { return col.colour[p] == col.colour[b.front()]; });
    if (mono)
      return Verdict::fail("block " + block_text(d, b) + " is monochromatic in colour " +
                           std::to_string(col.colour[b.front()]));
  }
  return Verdict::pass();
}

LeaveGraph leave_graph(const Design& d) {
  if (d.lambda() != 1) throw InvalidArgument("leave is defined only for index 1");
  auto pv = verify_partial_bibd(d);
  if (!pv.ok) throw InvalidArgument("not a partial design: " + *pv.witness);
  auto counts = pair_counts(d);
  const std::size_t v = d.num_points();
  LeaveGraph g;
  for (PointId a = 0; a < v; ++a) {
    g.vertices.push_back(a);
    for (PointId b = a + 1; b < v; ++b)
      if (counts[a * v + b] == 0) g.edges.emplace_back(a, b);
  }
  return g;
}

Verdict verify_leave_shape(const Design& d, LeaveShape shape) {
  auto leave = leave_graph(d);
  const std::size_t v = d.num_points();
  std::vector<int> deg(v, 0);
  std::vector<char> adj(v * v, 0);
  for (auto [a, b] : leave.edges) {
    ++deg[a];
    ++deg[b];
    adj[a * v + b] = adj[b * v + a] = 1;
  }
  auto order = canonical_order(d);
  if (shape == LeaveShape::perfect_matching) {
    if (v == 0) return Verdict::pass();
    for (auto p : order)
      if (deg[p] != 1)
        return Verdict::fail("leave vertex '" + d.label(p) + "' has degree " +
                             std::to_string(deg[p]) + ", expected 1");
    return Verdict::pass();
  }
  std::vector<PointId> hubs;
  for (auto p : order) {
    if (deg[p] == 3) hubs.push_back(p);
    else if (deg[p] != 1)
      return Verdict::fail("leave vertex '" + d.label(p) + "' has degree " +
                           std::to_string(deg[p]) + ", expected 1 or 3");
  }
  if (hubs.size() != 4)
    return Verdict::fail("leave has " + std::to_string(hubs.size()) +
                         " vertices of degree 3, expected 4");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (!adj[hubs[i] * v + hubs[j]])
        return Verdict::fail("degree-3 vertices " + pair_text(d, hubs[i], hubs[j]) +
                             " are not adjacent in the leave");
  return Verdict::pass();
}

Verdict check_parity_property_k4(const GroupedDesign& g, const BlockingSystem& bs) {
  const auto& d = g.design();
  if (!d.blocks().empty() && d.block_size() != std::optional<std::size_t>(4))
    throw InvalidArgument("parity property needs block size 4");
  if (bs.sets.size() != 2) throw InvalidArgument("parity property needs exactly two sets");
  check_system_shape(d, bs);
  std::vector<int> in(d.num_points(), 0);
  for (int s = 0; s < 2; ++s)
    for (auto p : bs.sets[s]) in[p] = s + 1;
  for (const auto& grp : g.groups()) {
    std::size_t c1 = 0, c2 = 0;
    for (auto p : grp) {
      c1 += in[p] == 1;
      c2 += in[p] == 2;
    }
    if (grp.size() % 2 != 0 || 2 * c1 != grp.size() || 2 * c2 != grp.size())
      throw InvalidArgument("sets do not each hold half of every group");
  }
  for (auto i : canonical_block_order(d)) {
    const auto& b = d.blocks()[i];
    int c1 = 0, c2 = 0;
    for (auto p : b) {
      c1 += in[p] == 1;
      c2 += in[p] == 2;
    }
    if (c1 % 2 == 0)
      return Verdict::fail("block " + block_text(d, b) + " meets set 1 in " + std::to_string(c1) +
                           " points");
    if (c2 % 2 == 0)
      return Verdict::fail("block " + block_text(d, b) + " meets set 2 in " + std::to_string(c2) +
                           " points");
  }
  return Verdict::pass();
}

}  // namespace chromdesign
