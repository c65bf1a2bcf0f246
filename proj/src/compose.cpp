#include "chromdesign/compose.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "chromdesign/errors.hpp"
#include "chromdesign/verify.hpp"

namespace chromdesign {

namespace {

std::vector<PointId> sorted_canonical(const Design& d, std::vector<PointId> ids) {
  std::sort(ids.begin(), ids.end(),
            [&](PointId a, PointId b) { return label_less(d.label(a), d.label(b)); });
  return ids;
}

std::set<std::string> label_set(const Design& d) { return {d.points().begin(), d.points().end()}; }

std::vector<std::string> labels_canonical(const Design& d, const std::vector<PointId>& ids) {
  return d.labels_of(sorted_canonical(d, ids));
}

void require(const Verdict& v, const std::string& what) {
  if (!v.ok) throw InvalidArgument(what + ": " + v.witness.value_or(""));
}

// Label sets of a system, for subset tests against label sets.
std::vector<std::set<std::string>> system_label_sets(const Design& d, const BlockingSystem& bs) {
  std::vector<std::set<std::string>> out;
  for (const auto& s : bs.sets) {
    std::set<std::string> ls;
    for (auto p : s) ls.insert(d.label(p));
    out.push_back(std::move(ls));
  }
  return out;
}

bool subset_of(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<PointId> intersect(const std::vector<PointId>& a, const std::vector<PointId>& b) {
  std::vector<PointId> x = a, y = b, out;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

// Map a system given on one design onto output ids by label.
std::vector<std::vector<PointId>> carry_sets(const Design& from, const BlockingSystem& bs, const Design& to) {
  std::vector<std::vector<PointId>> out;
  for (const auto& s : bs.sets) {
    std::vector<PointId> t;
    for (auto p : s) t.push_back(to.id_of(from.label(p)));
    std::sort(t.begin(), t.end());
    out.push_back(std::move(t));
  }
  return out;
}

void add_blocks_by_label(DesignBuilder& b, const Design& d) {
  for (const auto& blk : d.blocks()) b.add_block(d.labels_of(blk));
}

// Level of every TD point: set i gets levels 1 + i*q .. (i+1)*q in canonical
// order per group, the single leftover point level 0.
std::vector<int> td_levels(const GroupedDesign& td, const BlockingSystem& bs, int q,
                           const std::optional<Block>& leftover_block) {
  const Design& d = td.design();
  std::vector<int> level(d.num_points(), -1);
  for (std::size_t gi = 0; gi < td.groups().size(); ++gi) {
    const auto& grp = td.groups()[gi];
    std::vector<char> used(d.num_points(), 0);
    for (std::size_t i = 0; i < bs.sets.size(); ++i) {
      auto in = sorted_canonical(d, intersect(bs.sets[i], grp));
      if (static_cast<int>(in.size()) != q)
        throw InvalidArgument("TD system set " + std::to_string(i + 1) + " does not meet group " +
                              std::to_string(gi + 1) + " in " + std::to_string(q) + " points");
      for (int r = 0; r < q; ++r) {
        level[in[r]] = 1 + static_cast<int>(i) * q + r;
        used[in[r]] = 1;
      }
    }
    std::vector<PointId> rest;
    for (auto p : grp)
      if (!used[p]) rest.push_back(p);
    if (rest.size() != 1) throw InvalidArgument("TD system must leave exactly one point per group");
    if (leftover_block && !std::binary_search(leftover_block->begin(), leftover_block->end(), rest[0]))
      throw InvalidArgument("punctured system must avoid exactly the special block");
    level[rest[0]] = 0;
  }
  return level;
}

}  // namespace

Design place(const Design& tmpl, const std::vector<std::vector<PointId>>& from,
             const std::vector<std::vector<std::string>>& to) {
  if (from.size() != to.size()) throw InvalidArgument("place: part count mismatch");
  std::vector<std::string> labels(tmpl.num_points());
  std::vector<char> seen(tmpl.num_points(), 0);
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (from[i].size() != to[i].size()) throw InvalidArgument("place: part size mismatch");
    auto ids = sorted_canonical(tmpl, from[i]);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (ids[j] >= tmpl.num_points() || seen[ids[j]]) throw InvalidArgument("place: parts overlap");
      seen[ids[j]] = 1;
      labels[ids[j]] = to[i][j];
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw InvalidArgument("place: parts miss a point");
  return relabel(tmpl, labels);
}

DesignWithSystem place(const DesignWithSystem& tmpl, const std::vector<std::vector<PointId>>& from,
                       const std::vector<std::vector<std::string>>& to) {
  return {place(tmpl.design, from, to), tmpl.system};
}

FillSpec uniform_fill(const GroupedDesign& base, const DesignWithSystem& tmpl, bool add_infinity,
                      std::optional<BlockingSystem> base_system) {
  FillSpec spec{base, std::move(base_system), {}, add_infinity, "inf"};
  const Design& d = base.design();
  std::vector<PointId> all(tmpl.design.num_points());
  for (PointId p = 0; p < all.size(); ++p) all[p] = p;
  for (std::size_t gi = 0; gi < base.groups().size(); ++gi) {
    auto labels = labels_canonical(d, base.groups()[gi]);
    if (add_infinity) labels.push_back(spec.infinity_label);
    if (labels.size() != all.size())
      throw InvalidArgument("filler has " + std::to_string(all.size()) + " points but group " +
                            std::to_string(gi + 1) + " needs " + std::to_string(labels.size()));
    spec.fillers.emplace(gi, place(tmpl, {all}, {labels}));
  }
  return spec;
}

DesignWithSystem fill_groups(const FillSpec& spec) {
  const Design& bd = spec.base.design();
  require(verify_gdd(spec.base), "base is not a GDD");
  if (spec.fillers.empty() && bd.blocks().empty()) throw InvalidArgument("nothing to fill");
  if (spec.add_infinity && bd.find(spec.infinity_label))
    throw InvalidArgument("infinity label already used by the base");

  std::optional<std::size_t> sets;
  for (const auto& [gi, f] : spec.fillers) {
    if (gi >= spec.base.groups().size()) throw InvalidArgument("filler for unknown group " + std::to_string(gi + 1));
    auto want = labels_canonical(bd, spec.base.groups()[gi]);
    if (spec.add_infinity) want.push_back(spec.infinity_label);
    if (label_set(f.design) != std::set<std::string>(want.begin(), want.end()))
      throw InvalidArgument("filler for group " + std::to_string(gi + 1) + " is not on that group's points");
    require(verify_bibd(f.design), "filler for group " + std::to_string(gi + 1) + " is not a BIBD");
    if (f.design.lambda() != bd.lambda())
      throw InvalidArgument("filler for group " + std::to_string(gi + 1) + " has index " +
                            std::to_string(f.design.lambda()) + ", base has " + std::to_string(bd.lambda()));
    if (bd.block_size() && f.design.block_size() && *bd.block_size() != *f.design.block_size())
      throw InvalidArgument("filler block size differs from the base");
    check_system_shape(f.design, f.system);
    if (sets && *sets != f.system.sets.size()) throw InvalidArgument("filler systems differ in set count");
    sets = f.system.sets.size();
  }
  for (std::size_t gi = 0; gi < spec.base.groups().size(); ++gi)
    if (!spec.fillers.count(gi) && (spec.add_infinity || spec.base.groups()[gi].size() >= 2))
      throw InvalidArgument("no filler for group " + std::to_string(gi + 1));

  DesignBuilder b(bd.lambda());
  for (const auto& l : bd.points()) b.add_point(l);
  if (spec.add_infinity) b.add_point(spec.infinity_label);
  for (const auto& blk : bd.blocks()) b.add_block_ids(blk);
  for (const auto& [gi, f] : spec.fillers) add_blocks_by_label(b, f.design);
  Design out = b.build();

  std::size_t m = std::max(sets.value_or(0), spec.base_system ? spec.base_system->sets.size() : 0);
  std::vector<std::set<PointId>> acc(m);
  for (const auto& [gi, f] : spec.fillers) {
    auto carried = carry_sets(f.design, f.system, out);
    for (std::size_t i = 0; i < carried.size(); ++i) acc[i].insert(carried[i].begin(), carried[i].end());
  }
  if (spec.base_system) {
    auto carried = carry_sets(bd, *spec.base_system, out);
    for (std::size_t i = 0; i < carried.size(); ++i) acc[i].insert(carried[i].begin(), carried[i].end());
  }
  BlockingSystem bs;
  for (auto& s : acc) bs.sets.emplace_back(s.begin(), s.end());
  check_system_shape(out, bs);

  require(verify_bibd(out), "filled design is not a BIBD");
  return {std::move(out), std::move(bs)};
}

DesignWithSystem fill_groups_no_infinity(const GroupedDesign& base, const DesignWithSystem& filler,
                                         const BlockingSystem& halves) {
  const Design& bd = base.design();
  require(verify_gdd(base), "base is not a GDD");
  auto type = group_type(base);
  if (type.size() != 1) throw InvalidArgument("base must have uniform group size");
  const std::size_t y = type[0].size;
  const std::size_t half = y / 2;
  require(verify_bibd(filler.design), "filler is not a BIBD");
  if (filler.design.num_points() != y) throw InvalidArgument("filler size differs from the group size");
  if (filler.design.lambda() != bd.lambda()) throw InvalidArgument("filler index differs from the base");
  check_system_shape(filler.design, filler.system);
  if (filler.system.sets.size() != 2 || filler.system.sets[0].size() > half || filler.system.sets[1].size() > half)
    throw InvalidArgument("filler needs a 2-set system with sets of at most floor(y/2) points");
  check_system_shape(bd, halves);
  if (halves.sets.size() != 2) throw InvalidArgument("halves must have two sets");

  std::vector<PointId> rest_t;
  for (PointId p = 0; p < filler.design.num_points(); ++p)
    if (!std::count(filler.system.sets[0].begin(), filler.system.sets[0].end(), p) &&
        !std::count(filler.system.sets[1].begin(), filler.system.sets[1].end(), p))
      rest_t.push_back(p);
  const std::size_t s1 = filler.system.sets[0].size(), s2 = filler.system.sets[1].size();

  DesignBuilder b(bd.lambda());
  for (const auto& l : bd.points()) b.add_point(l);
  for (const auto& blk : bd.blocks()) b.add_block_ids(blk);
  for (std::size_t gi = 0; gi < base.groups().size(); ++gi) {
    const auto& grp = base.groups()[gi];
    auto h1 = labels_canonical(bd, intersect(halves.sets[0], grp));
    auto h2 = labels_canonical(bd, intersect(halves.sets[1], grp));
    if (h1.size() != half || h2.size() != half)
      throw InvalidArgument("halves meet group " + std::to_string(gi + 1) + " in " + std::to_string(h1.size()) +
                            " and " + std::to_string(h2.size()) + " points, expected " + std::to_string(half));
    std::set<std::string> in_halves(h1.begin(), h1.end());
    in_halves.insert(h2.begin(), h2.end());
    std::vector<std::string> rest;
    rest.insert(rest.end(), h1.begin() + static_cast<std::ptrdiff_t>(s1), h1.end());
    rest.insert(rest.end(), h2.begin() + static_cast<std::ptrdiff_t>(s2), h2.end());
    for (const auto& l : labels_canonical(bd, grp))
      if (!in_halves.count(l)) rest.push_back(l);
    Design placed = place(filler.design, {filler.system.sets[0], filler.system.sets[1], rest_t},
                          {std::vector<std::string>(h1.begin(), h1.begin() + static_cast<std::ptrdiff_t>(s1)),
                           std::vector<std::string>(h2.begin(), h2.begin() + static_cast<std::ptrdiff_t>(s2)), rest});
    add_blocks_by_label(b, placed);
  }
  Design out = b.build();
  BlockingSystem bs{halves.sets};
  require(verify_bibd(out), "filled design is not a BIBD");
  require(verify_blocking_system(out, bs), "halves do not block the filled design");
  return {std::move(out), std::move(bs)};
}

GddWithSystem wilson_inflate(const GroupedDesign& master, int weight,
                             const std::map<std::size_t, Ingredient>& ingredients) {
  if (weight < 1) throw InvalidArgument("weight must be positive");
  require(verify_gdd(master), "master is not a GDD");
  const Design& md = master.design();
  const std::size_t w = static_cast<std::size_t>(weight);
  const bool split = weight % 2 == 0;

  std::optional<int> lam;
  for (const auto& blk : md.blocks()) {
    auto it = ingredients.find(blk.size());
    if (it == ingredients.end()) throw InvalidArgument("no ingredient for block size " + std::to_string(blk.size()));
  }
  // Ingredient point -> (group rank, level).
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> slot;
  for (const auto& [s, ing] : ingredients) {
    const Design& id = ing.gdd.design();
    require(verify_gdd(ing.gdd), "ingredient for size " + std::to_string(s) + " is not a GDD");
    if (ing.gdd.groups().size() != s) throw InvalidArgument("ingredient for size " + std::to_string(s) + " has the wrong group count");
    for (const auto& g : ing.gdd.groups())
      if (g.size() != w) throw InvalidArgument("ingredient groups must all have size " + std::to_string(weight));
    if (lam && *lam != id.lambda()) throw InvalidArgument("ingredients differ in index");
    lam = id.lambda();
    if (split) {
      check_system_shape(id, ing.halves);
      if (ing.halves.sets.size() != 2) throw InvalidArgument("ingredient halves must have two sets");
      for (const auto& g : ing.gdd.groups())
        for (const auto& h : ing.halves.sets)
          if (intersect(h, g).size() != w / 2) throw InvalidArgument("ingredient halves must split every group evenly");
      require(verify_blocking_system(id, ing.halves), "ingredient halves do not block it");
    }
    auto groups = ing.gdd.groups();
    std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
      return label_less(id.label(sorted_canonical(id, a).front()), id.label(sorted_canonical(id, b).front()));
    });
    auto& sl = slot[s];
    sl.assign(id.num_points(), {0, 0});
    for (std::size_t r = 0; r < groups.size(); ++r) {
      std::vector<PointId> order;
      if (split) {
        for (const auto& h : ing.halves.sets) {
          auto part = sorted_canonical(id, intersect(h, groups[r]));
          order.insert(order.end(), part.begin(), part.end());
        }
      } else {
        order = sorted_canonical(id, groups[r]);
      }
      for (std::size_t l = 0; l < order.size(); ++l) sl[order[l]] = {r, l};
    }
  }

  std::vector<std::string> labels;
  for (PointId x = 0; x < md.num_points(); ++x)
    for (std::size_t l = 0; l < w; ++l) labels.push_back(pair_label(md.label(x), std::to_string(l)));
  std::vector<Block> blocks;
  for (const auto& blk : md.blocks()) {
    auto a = sorted_canonical(md, blk);
    const auto& ing = ingredients.at(blk.size());
    const auto& sl = slot.at(blk.size());
    for (const auto& ib : ing.gdd.design().blocks()) {
      Block nb;
      for (auto p : ib) nb.push_back(static_cast<PointId>(a[sl[p].first] * w + sl[p].second));
      blocks.push_back(std::move(nb));
    }
  }
  std::vector<std::vector<PointId>> groups;
  for (const auto& g : master.groups()) {
    std::vector<PointId> ng;
    for (auto x : g)
      for (std::size_t l = 0; l < w; ++l) ng.push_back(static_cast<PointId>(x * w + l));
    groups.push_back(std::move(ng));
  }
  const int out_lambda = md.lambda() * lam.value_or(1);
  GroupedDesign out(Design(labels, std::move(blocks), out_lambda), std::move(groups));
  BlockingSystem bs;
  if (split) {
    bs.sets.resize(2);
    for (PointId x = 0; x < md.num_points(); ++x)
      for (std::size_t l = 0; l < w; ++l) bs.sets[l < w / 2 ? 0 : 1].push_back(static_cast<PointId>(x * w + l));
  }
  auto v = verify_gdd(out);
  if (!v.ok) throw std::logic_error("inflated design failed verification: " + v.witness.value_or(""));
  return {std::move(out), std::move(bs)};
}

ProductTds product_tds(const TdWithSystems& t) {
  return {{t.td, t.special_block, t.punctured_system}, {t.td, t.whole_system}};
}

ProductTds product_tds(const TdPair& pair) {
  if (pair.partition_system.sets.size() != 3) throw InvalidArgument("TD pair needs a 3-part system");
  BlockingSystem levels{{pair.partition_system.sets[1], pair.partition_system.sets[2]}};
  Block special = pair.partition_system.sets[0];
  std::sort(special.begin(), special.end());
  return {{pair.twisted, special, levels}, {pair.base, levels}};
}

ProductResult product_construction(const Design& outer, const std::vector<std::size_t>& marked,
                                   const BlockingSystem& outer_system, const ProductTds& tds,
                                   const DesignWithSystem& column) {
  require(verify_bibd(outer), "outer design is not a BIBD");
  const auto k = outer.block_size();
  if (!k) throw InvalidArgument("outer design has no blocks");
  std::vector<char> is_marked(outer.blocks().size(), 0);
  for (auto i : marked) {
    if (i >= outer.blocks().size()) throw InvalidArgument("marked block index out of range");
    if (is_marked[i]) throw InvalidArgument("marked block listed twice");
    is_marked[i] = 1;
  }
  check_system_shape(outer, outer_system);

  const MarkedTd& mt = tds.marked;
  const PlainTd& pt = tds.plain;
  require(verify_td(mt.td), "marked TD");
  require(verify_td(pt.td), "plain TD");
  if (mt.td.groups().size() != *k || pt.td.groups().size() != *k)
    throw UnsupportedSize("no TD with block size " + std::to_string(*k) + " supplied");
  const std::size_t p = mt.td.groups()[0].size();
  if (pt.td.groups()[0].size() != p) throw InvalidArgument("the two TDs differ in group size");
  if (std::find(mt.td.design().blocks().begin(), mt.td.design().blocks().end(), mt.special_block) ==
      mt.td.design().blocks().end())
    throw InvalidArgument("special block is not a block of the marked TD");
  require(verify_bibd(column.design), "column design");
  if (column.design.num_points() != p) throw InvalidArgument("column design size differs from the TD group size");
  if (column.design.block_size() != k) throw InvalidArgument("column block size differs from the outer design");
  if (column.design.lambda() != outer.lambda()) throw InvalidArgument("column index differs from the outer design");

  const std::size_t m = pt.system.sets.size();
  if (m == 0 || mt.punctured_system.sets.size() != m || column.system.sets.size() != m)
    throw InvalidArgument("TD, punctured and column systems must have the same number of sets");
  if ((p - 1) % m != 0) throw InvalidArgument("p-1 is not divisible by the number of sets");
  const int q = static_cast<int>((p - 1) / m);
  check_system_shape(mt.td.design(), mt.punctured_system);
  check_system_shape(pt.td.design(), pt.system);
  check_system_shape(column.design, column.system);

  auto marked_level = td_levels(mt.td, mt.punctured_system, q, mt.special_block);
  auto plain_level = td_levels(pt.td, pt.system, q, std::nullopt);
  std::vector<std::vector<PointId>> one_group(1);
  for (PointId z = 0; z < p; ++z) one_group[0].push_back(z);
  auto column_level = td_levels(GroupedDesign(column.design, one_group), column.system, q, std::nullopt);

  std::vector<std::string> labels;
  for (PointId y = 0; y < outer.num_points(); ++y)
    for (std::size_t z = 0; z < p; ++z) labels.push_back(pair_label(outer.label(y), std::to_string(z)));
  auto at = [&](PointId y, int level) { return static_cast<PointId>(y * p + static_cast<std::size_t>(level)); };

  std::vector<Block> blocks;
  ProductResult r;
  for (std::size_t bi = 0; bi < outer.blocks().size(); ++bi) {
    auto a = sorted_canonical(outer, outer.blocks()[bi]);
    const GroupedDesign& td = is_marked[bi] ? mt.td : pt.td;
    const auto& level = is_marked[bi] ? marked_level : plain_level;
    for (const auto& tb : td.design().blocks()) {
      Block nb;
      for (auto t : tb) nb.push_back(at(a[td.group_of()[t]], level[t]));
      blocks.push_back(std::move(nb));
    }
    if (is_marked[bi]) {
      Block copy;
      for (auto x : a) copy.push_back(at(x, 0));
      std::sort(copy.begin(), copy.end());
      r.embedded_copy.push_back(std::move(copy));
    }
  }
  for (PointId y = 0; y < outer.num_points(); ++y)
    for (const auto& cb : column.design.blocks()) {
      Block nb;
      for (auto z : cb) nb.push_back(at(y, column_level[z]));
      blocks.push_back(std::move(nb));
    }

  r.design = Design(labels, std::move(blocks), outer.lambda());
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<PointId> chunk;
    for (PointId y = 0; y < outer.num_points(); ++y)
      for (int l = 0; l < q; ++l) chunk.push_back(at(y, 1 + static_cast<int>(i) * q + l));
    r.level_chunks.push_back(std::move(chunk));
  }
  const std::size_t c = outer_system.sets.size();
  for (std::size_t i = 0; i < std::max(c, m); ++i) {
    std::vector<PointId> s = i < m ? r.level_chunks[i] : std::vector<PointId>{};
    if (i < c)
      for (auto x : outer_system.sets[i]) s.push_back(at(x, 0));
    std::sort(s.begin(), s.end());
    r.system.sets.push_back(std::move(s));
  }
  auto v = verify_bibd(r.design);
  if (!v.ok) throw std::logic_error("product design failed verification: " + v.witness.value_or(""));
  return r;
}

Verdict check_product_blocks_meet(const ProductResult& r, std::size_t first_chunk, std::size_t second_chunk) {
  if (first_chunk >= r.level_chunks.size() || second_chunk >= r.level_chunks.size())
    throw InvalidArgument("no such level chunk");
  std::vector<char> in1(r.design.num_points(), 0), in2(r.design.num_points(), 0);
  for (auto p : r.level_chunks[first_chunk]) in1[p] = 1;
  for (auto p : r.level_chunks[second_chunk]) in2[p] = 1;
  std::multiset<Block> copy(r.embedded_copy.begin(), r.embedded_copy.end());
  for (const auto& b : r.design.blocks()) {
    auto it = copy.find(b);
    if (it != copy.end()) {
      copy.erase(it);
      continue;
    }
    bool m1 = std::any_of(b.begin(), b.end(), [&](PointId p) { return in1[p]; });
    bool m2 = std::any_of(b.begin(), b.end(), [&](PointId p) { return in2[p]; });
    if (!m1 || !m2) {
      std::string s = "block {";
      for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + r.design.label(b[i]);
      return Verdict::fail(s + "} misses level chunk " + std::to_string((m1 ? second_chunk : first_chunk) + 1));
    }
  }
  if (!copy.empty()) return Verdict::fail("embedded copy is not contained in the design");
  return Verdict::pass();
}

DesignWithSystem common_tail_fill(const CommonTailSpec& spec) {
  const Design& bd = spec.base.design();
  require(verify_gdd(spec.base), "base is not a GDD");
  check_system_shape(bd, spec.base_halves);
  if (spec.base_halves.sets.size() != 2) throw InvalidArgument("base halves must have two sets");
  if (spec.tail.empty()) throw InvalidArgument("tail U must be nonempty");
  std::set<std::string> U(spec.tail.begin(), spec.tail.end());
  if (U.size() != spec.tail.size()) throw InvalidArgument("tail labels repeat");
  for (const auto& u : U)
    if (bd.find(u)) throw InvalidArgument("tail label '" + u + "' already used by the base");
  std::set<std::string> U1(spec.tail_half1.begin(), spec.tail_half1.end());
  std::set<std::string> U2(spec.tail_half2.begin(), spec.tail_half2.end());
  if (!subset_of(U1, U) || !subset_of(U2, U)) throw InvalidArgument("tail halves must lie inside U");
  for (const auto& x : U1)
    if (U2.count(x)) throw InvalidArgument("tail halves overlap");
  if (spec.last_group && *spec.last_group >= spec.base.groups().size())
    throw InvalidArgument("last group index out of range");

  auto R = system_label_sets(bd, spec.base_halves);
  auto with = [](std::set<std::string> a, const std::set<std::string>& b) {
    a.insert(b.begin(), b.end());
    return a;
  };

  for (const auto& [gi, _] : spec.per_group)
    if (gi >= spec.base.groups().size() || (spec.last_group && gi == *spec.last_group))
      throw InvalidArgument("per-group entry for group " + std::to_string(gi + 1) + " is not expected");
  for (std::size_t gi = 0; gi < spec.base.groups().size(); ++gi) {
    if (spec.last_group && gi == *spec.last_group) continue;
    auto it = spec.per_group.find(gi);
    const std::string name = "per-group GDD for group " + std::to_string(gi + 1);
    if (it == spec.per_group.end()) throw InvalidArgument("missing " + name);
    const Design& d = it->second.design;
    auto glabels = bd.labels_of(spec.base.groups()[gi]);
    std::set<std::string> G(glabels.begin(), glabels.end());
    if (label_set(d) != with(G, U)) throw InvalidArgument(name + " is not on group u U");
    std::vector<std::vector<PointId>> groups(1);
    for (const auto& u : spec.tail) groups[0].push_back(d.id_of(u));
    for (const auto& l : glabels) groups.push_back({d.id_of(l)});
    require(verify_gdd(GroupedDesign(d, groups)), name);
    if (d.lambda() != bd.lambda()) throw InvalidArgument(name + " has the wrong index");
    check_system_shape(d, it->second.system);
    if (it->second.system.sets.size() != 2) throw InvalidArgument(name + " needs a 2-set system");
    auto S = system_label_sets(d, it->second.system);
    std::set<std::string> r1, r2;
    for (const auto& l : G) (R[0].count(l) ? r1 : r2).insert(l);
    for (const auto& l : G)
      if (!R[0].count(l) && !R[1].count(l)) r2.erase(l);
    if (!subset_of(S[0], with(r1, U1)) || !subset_of(S[1], with(r2, U2)))
      throw InvalidArgument(name + " system does not respect the halves");
    require(verify_blocking_system(d, it->second.system), name + " system");
  }

  std::set<std::string> F;
  if (spec.last_group)
    for (auto p : spec.base.groups()[*spec.last_group]) F.insert(bd.label(p));
  const Design& ld = spec.last.design;
  if (label_set(ld) != with(F, U)) throw InvalidArgument("last design is not on the last group u U");
  require(verify_bibd(ld), "last design");
  if (!ld.blocks().empty() && ld.lambda() != bd.lambda()) throw InvalidArgument("last design has the wrong index");
  check_system_shape(ld, spec.last.system);
  auto Rd = system_label_sets(ld, spec.last.system);
  if (Rd.size() < 2) throw InvalidArgument("last design needs at least a 2-part system");
  std::size_t covered = 0;
  for (const auto& s : Rd) covered += s.size();
  if (covered != ld.num_points()) throw InvalidArgument("last design system must partition its points");
  std::set<std::string> f1, f2;
  for (const auto& l : F) {
    if (R[0].count(l)) f1.insert(l);
    if (R[1].count(l)) f2.insert(l);
  }
  if (!subset_of(Rd[0], with(f1, U1)) || !subset_of(Rd[1], with(f2, U2)))
    throw InvalidArgument("last design system does not respect the halves");
  require(verify_blocking_system(ld, spec.last.system), "last design system");

  DesignBuilder b(bd.lambda());
  for (const auto& l : bd.points()) b.add_point(l);
  for (const auto& u : spec.tail) b.add_point(u);
  for (const auto& blk : bd.blocks()) b.add_block_ids(blk);
  for (const auto& [gi, dw] : spec.per_group) add_blocks_by_label(b, dw.design);
  add_blocks_by_label(b, ld);
  Design out = b.build();

  BlockingSystem bs;
  for (std::size_t i = 0; i < Rd.size(); ++i) {
    std::set<std::string> s = Rd[i];
    if (i < 2)
      for (const auto& l : R[i])
        if (!F.count(l)) s.insert(l);
    std::vector<PointId> ids;
    for (const auto& l : s) ids.push_back(out.id_of(l));
    std::sort(ids.begin(), ids.end());
    bs.sets.push_back(std::move(ids));
  }
  check_system_shape(out, bs);
  require(verify_bibd(out), "assembled design is not a BIBD");
  require(verify_blocking_system(out, bs), "assembled system");
  return {std::move(out), std::move(bs)};
}

LadderResult ladder_k3(const Design& partial, int h, int lambda) {
  if (h < 0 || h > 5) throw InvalidArgument("h must lie in 0..5");
  if (lambda < 1) throw InvalidArgument("lambda must be positive");
  if (h % 2 == 0 && lambda % 2 != 0) throw InvalidArgument("lambda must be even when h is even");
  if (partial.lambda() != 1) throw InvalidArgument("partial design must have index 1");
  if (partial.blocks().empty()) throw InvalidArgument("partial design has no blocks");
  if (partial.block_size() != std::optional<std::size_t>(3)) throw InvalidArgument("partial design needs block size 3");
  require(verify_partial_bibd(partial), "partial design");
  const std::size_t u = partial.num_points();
  if (u % 2 != 0 || u < 4) throw InvalidArgument("u must be even and at least 4");
  const long long v = 3 * static_cast<long long>(u) + h;
  if (!is_admissible(v, 3, lambda))
    throw InvalidArgument(std::to_string(v) + " is not (3," + std::to_string(lambda) + ")-admissible");
  const bool matching = verify_leave_shape(partial, LeaveShape::perfect_matching).ok;
  if (!matching) require(verify_leave_shape(partial, LeaveShape::k4_plus_matching), "leave shape");

  auto leave = leave_graph(partial);
  std::vector<std::pair<PointId, PointId>> edges;
  for (const auto& e : leave.edges) edges.emplace_back(std::min(e.first, e.second), std::max(e.first, e.second));
  std::sort(edges.begin(), edges.end(), [&](const auto& a, const auto& b) {
    auto ka = std::make_pair(partial.label(a.first), partial.label(a.second));
    auto kb = std::make_pair(partial.label(b.first), partial.label(b.second));
    if (ka.first != kb.first) return label_less(ka.first, kb.first);
    return label_less(ka.second, kb.second);
  });
  std::vector<PointId> p_star;
  if (matching) {
    p_star = {edges[0].first, edges[0].second};
  } else {
    std::vector<int> deg(u, 0);
    for (const auto& e : edges) ++deg[e.first], ++deg[e.second];
    for (PointId x = 0; x < u; ++x)
      if (deg[x] == 3) p_star.push_back(x);
  }
  p_star = sorted_canonical(partial, p_star);
  std::vector<std::pair<PointId, PointId>> pairing;
  for (const auto& e : edges)
    if (std::find(p_star.begin(), p_star.end(), e.first) == p_star.end() &&
        std::find(p_star.begin(), p_star.end(), e.second) == p_star.end())
      pairing.push_back(e);

  auto uord = canonical_order(partial);
  std::vector<std::string> labels;
  for (auto x : uord)
    for (int z = 0; z < 3; ++z) labels.push_back(pair_label(partial.label(x), std::to_string(z)));
  for (int j = 0; j < h; ++j) labels.push_back("h" + std::to_string(j));
  Design frame(labels, {}, lambda);
  auto pt = [&](PointId x, int z) { return frame.id_of(pair_label(partial.label(x), std::to_string(z))); };
  auto hp = [&](int j) { return frame.id_of("h" + std::to_string(j)); };

  std::vector<Block> fixed;
  auto gdd = gdd_h_1_6(h, lambda);
  const Design& gd = gdd.gdd.design();
  for (const auto& [p1, p2] : pairing) {
    std::vector<PointId> to(gd.num_points(), 0);
    auto a = sorted_canonical(partial, {p1, p2});
    for (std::size_t i = 0; i < gdd.system.sets.size(); ++i) {
      std::vector<PointId> letters;
      for (auto p : gdd.system.sets[i]) {
        const std::string& l = gd.label(p);
        if (std::isdigit(static_cast<unsigned char>(l[0]))) {
          int j = std::stoi(l);
          if (j % 3 != static_cast<int>(i)) throw std::logic_error("h-point in the wrong part");
          to[p] = hp(j);
        } else {
          letters.push_back(p);
        }
      }
      letters = sorted_canonical(gd, letters);
      if (letters.size() != 2) throw std::logic_error("GDD part without two singleton points");
      to[letters[0]] = pt(a[0], static_cast<int>(i));
      to[letters[1]] = pt(a[1], static_cast<int>(i));
    }
    for (const auto& blk : gd.blocks()) {
      Block nb;
      for (auto p : blk) nb.push_back(to[p]);
      fixed.push_back(std::move(nb));
    }
  }
  {
    auto star = bibd_3_blocked(static_cast<int>(3 * p_star.size()) + h, lambda);
    auto parts = star.system.sets;
    std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::vector<PointId> to(star.design.num_points(), 0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto part = sorted_canonical(star.design, parts[i]);
      std::vector<int> hs;
      for (int j = static_cast<int>(i); j < h; j += 3) hs.push_back(j);
      if (part.size() != hs.size() + p_star.size()) throw std::logic_error("P* design part has the wrong size");
      for (std::size_t r = 0; r < part.size(); ++r)
        to[part[r]] = r < hs.size() ? hp(hs[r]) : pt(p_star[r - hs.size()], static_cast<int>(i));
    }
    for (const auto& blk : star.design.blocks()) {
      Block nb;
      for (auto p : blk) nb.push_back(to[p]);
      fixed.push_back(std::move(nb));
    }
  }

  auto pair = td_3_3_pair();
  auto td_blocks = [&](const Block& A, const GroupedDesign& td) {
    auto a = sorted_canonical(partial, A);
    std::vector<Block> out;
    for (const auto& tb : td.design().blocks()) {
      Block nb;
      for (auto t : tb) nb.push_back(pt(a[t / 3], static_cast<int>(t % 3)));
      for (int r = 0; r < lambda; ++r) out.push_back(nb);
    }
    return out;
  };

  LadderResult res;
  res.p_star = p_star;
  const auto& A = partial.blocks();
  for (std::size_t kk = 0; kk <= A.size(); ++kk) {
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < A.size(); ++i) {
      auto tb = td_blocks(A[i], i < kk ? pair.twisted : pair.base);
      blocks.insert(blocks.end(), tb.begin(), tb.end());
    }
    blocks.insert(blocks.end(), fixed.begin(), fixed.end());
    Design member(labels, std::move(blocks), lambda);
    auto v = verify_bibd(member);
    if (!v.ok) throw std::logic_error("ladder member failed verification: " + v.witness.value_or(""));
    res.chain.push_back(std::move(member));
  }
  for (const auto& blk : A) {
    auto a = sorted_canonical(partial, blk);
    res.swap_points.push_back({pt(a[pair.swap_points[0] / 3], static_cast<int>(pair.swap_points[0] % 3)),
                               pt(a[pair.swap_points[1] / 3], static_cast<int>(pair.swap_points[1] % 3))});
    Block copy{pt(a[0], 0), pt(a[1], 0), pt(a[2], 0)};
    std::sort(copy.begin(), copy.end());
    res.embedded_copy.push_back(std::move(copy));
  }
  res.system0.sets.resize(3);
  for (auto x : uord)
    for (int z = 0; z < 3; ++z) res.system0.sets[z].push_back(pt(x, z));
  for (int j = 0; j < h; ++j) res.system0.sets[j % 3].push_back(hp(j));
  for (auto& s : res.system0.sets) std::sort(s.begin(), s.end());
  auto v0 = verify_blocking_system(res.chain.front(), res.system0);
  if (!v0.ok) throw std::logic_error("system0 does not block C0: " + v0.witness.value_or(""));
  return res;
}

std::vector<Block> block_difference(const Design& a, const Design& b) {
  if (a.points() != b.points()) throw InvalidArgument("designs are on different point sets");
  std::vector<Block> x = a.blocks(), y = b.blocks(), out;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

std::optional<std::array<PointId, 2>> confining_pair(const std::vector<Block>& diff) {
  if (diff.empty()) return std::array<PointId, 2>{0, 0};
  for (auto x : diff.front()) {
    std::optional<std::vector<PointId>> common;
    for (const auto& b : diff) {
      if (std::binary_search(b.begin(), b.end(), x)) continue;
      if (!common) {
        common = b;
      } else {
        std::vector<PointId> next;
        std::set_intersection(common->begin(), common->end(), b.begin(), b.end(), std::back_inserter(next));
        common = std::move(next);
      }
    }
    if (!common) {
      PointId y = diff.front().front() == x ? diff.front().back() : diff.front().front();
      return std::array<PointId, 2>{std::min(x, y), std::max(x, y)};
    }
    if (!common->empty()) {
      PointId y = common->front();
      return std::array<PointId, 2>{std::min(x, y), std::max(x, y)};
    }
  }
  return std::nullopt;
}

StepScan chromatic_step_scan(const std::vector<Design>& chain, const SolverConfig& cfg) {
  if (chain.empty()) throw InvalidArgument("empty chain");
  for (const auto& d : chain)
    if (d.points() != chain.front().points()) throw InvalidArgument("chain members are on different point sets");
  if (chain.front().num_points() > cfg.point_cap)
    throw UnsupportedSize("chain has " + std::to_string(chain.front().num_points()) + " points, cap is " +
                          std::to_string(cfg.point_cap));
  StepScan scan;
  for (const auto& d : chain) {
    try {
      scan.chi.push_back(exact_chromatic(d, cfg).chi);
    } catch (const ResourceExhausted& e) {
      throw UnsupportedSize(std::string("exact solver gave up: ") + e.what());
    }
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    bool confined = confining_pair(block_difference(chain[i], chain[i + 1])).has_value();
    scan.confined.push_back(confined);
    if (confined && std::abs(scan.chi[i + 1] - scan.chi[i]) > 1)
      throw PreconditionViolation("step " + std::to_string(i) + " changes chi from " + std::to_string(scan.chi[i]) +
                                  " to " + std::to_string(scan.chi[i + 1]) + " although confined to two points");
  }
  return scan;
}

}  // namespace chromdesign
