#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>
#include <set>

#include "chromdesign/compose.hpp"
#include "chromdesign/errors.hpp"
#include "oracle.hpp"

using namespace chromdesign;

namespace {

DesignWithSystem with_system(const Fixture& f) { return {f.design(), *f.system}; }

std::vector<std::string> sorted_labels(const Design& d, const std::vector<PointId>& ids) {
  auto out = d.labels_of(ids);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return label_less(a, b); });
  return out;
}

GddWithSystem inflated_2_12() {
  auto ing = gdd_4_2_type_2_4();
  return wilson_inflate(td_4_p(3), 2, {{4, Ingredient{ing.gdd, ing.system}}});
}

// Biplane copies on every group u {"u"} of the inflated 6^4 design.
CommonTailSpec tail_spec() {
  auto w = inflated_2_12();
  const Design& bd = w.gdd.design();
  CommonTailSpec cs{w.gdd, w.system, {"u"}, {}, {}, 3, {}, {}};
  const Design bp = biplane_7();
  for (std::size_t gi = 0; gi < 4; ++gi) {
    std::vector<PointId> r1, r2;
    for (auto p : w.gdd.groups()[gi])
      (std::binary_search(w.system.sets[0].begin(), w.system.sets[0].end(), p) ? r1 : r2).push_back(p);
    auto l1 = sorted_labels(bd, r1), l2 = sorted_labels(bd, r2);
    Design placed = place(bp, {{0, 1, 2}, {3, 4, 5}, {6}}, {l1, l2, {"u"}});
    if (gi < 3)
      cs.per_group[gi] = {placed, system_from_labels(placed, {l1, l2})};
    else
      cs.last = {placed, system_from_labels(placed, {l1, l2, {"u"}})};
  }
  return cs;
}

}  // namespace

TEST_CASE("place relabels a template") {
  Design f = fixture("fano").design();
  Design p = place(f, {{0, 1, 2, 3}, {4, 5, 6}}, {{"a", "b", "c", "d"}, {"x", "y", "z"}});
  CHECK(oracle::is_bibd(p));
  CHECK(p.label(0) == "a");
  CHECK(p.label(6) == "z");
  CHECK_THROWS_AS(place(f, {{0, 1}}, {{"a", "b"}}), InvalidArgument);
  CHECK_THROWS_AS(place(f, {{0, 1, 2, 3}, {3, 4, 5, 6}}, {{"a", "b", "c", "d"}, {"w", "x", "y", "z"}}),
                  InvalidArgument);
  CHECK_THROWS_AS(place(f, {{0, 1, 2, 3, 4, 5, 6}}, {{"a"}}), InvalidArgument);
  auto ds = place(with_system(fixture("fano")), {{0, 1, 2, 3, 4, 5, 6}}, {{"a", "b", "c", "d", "e", "f", "g"}});
  CHECK(oracle::blocks_meet_two(ds.design, ds.system));
}

TEST_CASE("fill a TD(5,5) with trivial designs") {
  auto t = td_lines(5, 5);
  auto r = fill_groups(uniform_fill(t.td, with_system(fixture("trivial_5")), false));
  CHECK(r.design.num_points() == 25);
  CHECK(r.design.blocks().size() == 30);
  CHECK(oracle::is_bibd(r.design));
  // filler sets already cover each group, so a base system would overlap them
  CHECK_THROWS_AS(fill_groups(uniform_fill(t.td, with_system(fixture("trivial_5")), false, t.whole_system)),
                  InvalidArgument);
}

TEST_CASE("fill the h=3 GDD with a trivial triple") {
  auto g = gdd_h_1_6(3, 1);
  FillSpec spec{g.gdd, std::nullopt, {}, false, "inf"};
  spec.fillers[0] = with_system(fixture("trivial_3"));
  auto r = fill_groups(spec);
  CHECK(r.design.num_points() == 9);
  CHECK(r.design.blocks().size() == 12);
  CHECK(oracle::is_bibd(r.design));
}

TEST_CASE("fill with infinity rebuilds STS(9) from its derived 2^4 GDD") {
  Design s9 = fixture("sts9").design();
  const PointId drop = 8;
  std::vector<std::vector<std::string>> blocks;
  std::vector<std::vector<PointId>> groups;
  for (const auto& blk : s9.blocks()) {
    if (std::count(blk.begin(), blk.end(), drop)) {
      std::vector<PointId> g;
      for (auto p : blk)
        if (p != drop) g.push_back(p);
      groups.push_back(g);
    } else {
      blocks.push_back(s9.labels_of(blk));
    }
  }
  std::vector<std::string> pts(s9.points().begin(), s9.points().end() - 1);
  GroupedDesign base(Design::from_labels(pts, blocks, 1), groups);
  REQUIRE(oracle::is_gdd(base));
  auto r = fill_groups(uniform_fill(base, with_system(fixture("trivial_3")), true));
  CHECK(r.design.num_points() == 9);
  CHECK(r.design.find("inf").has_value());
  CHECK(oracle::is_bibd(r.design));

  FillSpec clash = uniform_fill(base, with_system(fixture("trivial_3")), true);
  clash.infinity_label = "0";
  CHECK_THROWS_AS(fill_groups(clash), InvalidArgument);
}

TEST_CASE("fill errors") {
  auto t = td_lines(5, 5);
  auto first = place(with_system(fixture("trivial_5")), {{0, 1, 2, 3, 4}}, {t.td.design().labels_of(t.td.groups()[0])});
  FillSpec missing{t.td, std::nullopt, {}, false, "inf"};
  missing.fillers[0] = first;
  CHECK_THROWS_AS(fill_groups(missing), InvalidArgument);

  FillSpec wrong_group{t.td, std::nullopt, {}, false, "inf"};
  for (std::size_t gi = 0; gi < 5; ++gi) wrong_group.fillers[gi] = first;
  CHECK_THROWS_AS(fill_groups(wrong_group), InvalidArgument);

  Design empty({"a", "b"}, {}, 1);
  FillSpec nothing{GroupedDesign(empty, {{0}, {1}}), std::nullopt, {}, false, "inf"};
  CHECK_THROWS_AS(fill_groups(nothing), InvalidArgument);

  auto gdd = gdd_h_1_6(3, 1);
  CHECK_THROWS_AS(uniform_fill(gdd.gdd, with_system(fixture("trivial_5")), false), InvalidArgument);
}

TEST_CASE("fill without infinity") {
  auto t = td_lines(5, 5);
  auto r = fill_groups_no_infinity(t.td, with_system(fixture("trivial_5")), t.whole_system);
  CHECK(oracle::is_bibd(r.design));
  CHECK(oracle::blocks_meet_two(r.design, r.system));
  REQUIRE(r.system.sets.size() == 2);
  CHECK(r.system.sets[0].size() == 10);
  CHECK(r.system.sets[1].size() == 10);

  // halves that do not split each group evenly
  BlockingSystem lopsided{{t.td.groups()[0], t.td.groups()[1]}};
  CHECK_THROWS_AS(fill_groups_no_infinity(t.td, with_system(fixture("trivial_5")), lopsided), InvalidArgument);
  CHECK_THROWS_AS(fill_groups_no_infinity(t.td, with_system(fixture("trivial_3")), t.whole_system),
                  InvalidArgument);
  CHECK_THROWS_AS(fill_groups_no_infinity(gdd_h_1_6(3, 1).gdd, with_system(fixture("trivial_3")), t.whole_system),
                  InvalidArgument);
}

TEST_CASE("weight-2 inflation of TD(4,3)") {
  auto w = inflated_2_12();
  CHECK(to_string(group_type(w.gdd)) == "6^4");
  CHECK(w.gdd.design().blocks().size() == 72);
  CHECK(oracle::is_gdd(w.gdd));
  CHECK(w.gdd.design().lambda() == 2);
  CHECK(oracle::blocks_meet_two(w.gdd.design(), w.system));
  CHECK(check_parity_property_k4(w.gdd, w.system).ok);

  auto ing = gdd_4_2_type_2_4();
  CHECK_THROWS_AS(wilson_inflate(td_4_p(3), 2, {{3, Ingredient{ing.gdd, ing.system}}}), InvalidArgument);
  CHECK_THROWS_AS(wilson_inflate(td_4_p(3), 0, {{4, Ingredient{ing.gdd, ing.system}}}), InvalidArgument);
  CHECK_THROWS_AS(wilson_inflate(td_4_p(3), 3, {{4, Ingredient{ing.gdd, ing.system}}}), InvalidArgument);
}

TEST_CASE("weight-2 inflation of larger TDs keeps the parity property") {
  auto ing = gdd_4_2_type_2_4();
  for (int p : {5, 7}) {
    auto w = wilson_inflate(td_4_p(p), 2, {{4, Ingredient{ing.gdd, ing.system}}});
    CHECK(oracle::is_gdd(w.gdd));
    CHECK(check_parity_property_k4(w.gdd, w.system).ok);
  }
}

TEST_CASE("no (3,2)-GDD of type 2^3 has a half/half system") {
  // Half/half sets are two complementary transversals, so neither can be a
  // block. Try every multiset of 8 of the remaining 6 transversals.
  std::vector<std::array<int, 3>> trans;
  for (int m = 1; m < 7; ++m) trans.push_back({m & 1, (m >> 1) & 1, (m >> 2) & 1});
  int found = 0;
  std::array<int, 6> count{};
  std::function<void(int, int)> rec = [&](int at, int left) {
    if (at == 6) {
      if (left) return;
      std::map<std::array<int, 4>, int> pairs;
      for (int t = 0; t < 6; ++t)
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b) pairs[{a, trans[t][a], b, trans[t][b]}] += count[t];
      bool ok = pairs.size() == 12;
      for (auto& [k, n] : pairs) ok = ok && n == 2;
      found += ok;
      return;
    }
    for (int c = 0; c <= left; ++c) {
      count[at] = c;
      rec(at + 1, left - c);
    }
    count[at] = 0;
  };
  rec(0, 8);
  CHECK(found == 0);
}

TEST_CASE("product of Fano with the TD(3,3) pair") {
  auto f = fixture("fano");
  auto r = product_construction(f.design(), {0}, *f.system, product_tds(td_3_3_pair()),
                                with_system(fixture("trivial_3")));
  CHECK(r.design.num_points() == 21);
  CHECK(r.design.blocks().size() == 70);
  CHECK(oracle::is_bibd(r.design));
  REQUIRE(r.embedded_copy.size() == 1);
  std::set<std::string> copy;
  for (const auto& l : r.design.labels_of(r.embedded_copy[0])) copy.insert(l);
  std::set<std::string> want;
  for (const auto& y : f.design().labels_of(f.design().blocks()[0])) want.insert(pair_label(y, "0"));
  CHECK(copy == want);
  CHECK(r.level_chunks.size() == 2);
  CHECK(r.level_chunks[0].size() == 7);
  // known: some non-copy block misses the second chunk here
  CHECK_FALSE(check_product_blocks_meet(r, 0, 1).ok);
  CHECK_THROWS_AS(check_product_blocks_meet(r, 0, 5), InvalidArgument);
}

TEST_CASE("product of the (13,4,1) design with TD(4,13)") {
  auto f = fixture("bibd_13_4_1");
  auto r = product_construction(f.design(), {0}, *f.system, product_tds(td_4_13()), with_system(f));
  CHECK(r.design.num_points() == 169);
  CHECK(r.design.blocks().size() == 2366);
  CHECK(oracle::is_bibd(r.design));
  CHECK(oracle::blocks_meet_two(r.design, r.system));
}

TEST_CASE("product errors") {
  auto f = fixture("fano");
  auto tds = product_tds(td_3_3_pair());
  auto col = with_system(fixture("trivial_3"));
  CHECK_THROWS_AS(product_construction(f.design(), {9}, *f.system, tds, col), InvalidArgument);
  CHECK_THROWS_AS(product_construction(f.design(), {0, 0}, *f.system, tds, col), InvalidArgument);
  CHECK_THROWS_AS(product_construction(f.design(), {0}, *f.system, tds, with_system(fixture("trivial_5"))),
                  InvalidArgument);
  CHECK_THROWS_AS(product_construction(fixture("bibd_13_4_1").design(), {0}, *f.system, tds, col),
                  std::exception);
}

TEST_CASE("common tail fill") {
  auto r = common_tail_fill(tail_spec());
  CHECK(r.design.num_points() == 25);
  CHECK(r.design.blocks().size() == 100);
  CHECK(oracle::is_bibd(r.design));
  CHECK(oracle::blocks_meet_two(r.design, r.system));
}

TEST_CASE("common tail errors") {
  auto cs = tail_spec();
  auto missing = cs;
  missing.per_group.erase(0);
  CHECK_THROWS_AS(common_tail_fill(missing), InvalidArgument);
  auto clash = cs;
  clash.tail = {"(0,0)"};
  CHECK_THROWS_AS(common_tail_fill(clash), InvalidArgument);
  auto empty = cs;
  empty.tail.clear();
  CHECK_THROWS_AS(common_tail_fill(empty), InvalidArgument);
  auto stray = cs;
  stray.tail_half1 = {"v"};
  CHECK_THROWS_AS(common_tail_fill(stray), InvalidArgument);
  auto one_half = cs;
  one_half.base_halves.sets.pop_back();
  CHECK_THROWS_AS(common_tail_fill(one_half), InvalidArgument);
}

TEST_CASE("ladder on the 6-point maximum packing") {
  auto m = fixture("max_packing_6").design();
  auto L = ladder_k3(m, 1, 1);
  REQUIRE(L.chain.size() == 5);
  for (const auto& d : L.chain) {
    CHECK(d.num_points() == 19);
    CHECK(oracle::is_bibd(d));
  }
  CHECK(oracle::blocks_meet_two(L.chain[0], L.system0));
  REQUIRE(L.swap_points.size() == 4);
  for (std::size_t i = 0; i + 1 < L.chain.size(); ++i) {
    auto diff = block_difference(L.chain[i], L.chain[i + 1]);
    CHECK_FALSE(diff.empty());
    for (const auto& b : diff) {
      bool through = std::count(b.begin(), b.end(), L.swap_points[i][0]) + std::count(b.begin(), b.end(), L.swap_points[i][1]);
      CHECK(through);
    }
    CHECK(confining_pair(diff).has_value());
  }
  CHECK(L.embedded_copy.size() == m.blocks().size());
  auto scan = chromatic_step_scan(L.chain);
  REQUIRE(scan.chi.size() == 5);
  for (std::size_t i = 0; i + 1 < scan.chi.size(); ++i) {
    CHECK(scan.confined[i]);
    CHECK(std::abs(scan.chi[i + 1] - scan.chi[i]) <= 1);
  }
  CHECK(scan.chi[0] <= 3);
}

TEST_CASE("ladder for other h") {
  auto m = fixture("max_packing_6").design();
  for (auto [h, lambda] : {std::pair{0, 2}, {3, 1}, {4, 2}, {5, 3}}) {
    CAPTURE(h);
    auto L = ladder_k3(m, h, lambda);
    for (const auto& d : L.chain) CHECK(oracle::is_bibd(d));
    CHECK(oracle::blocks_meet_two(L.chain[0], L.system0));
  }
}

TEST_CASE("ladder errors") {
  auto m = fixture("max_packing_6").design();
  CHECK_THROWS_AS(ladder_k3(m, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(ladder_k3(m, 6, 1), InvalidArgument);
  CHECK_THROWS_AS(ladder_k3(Design({"a", "b"}, {}, 1), 1, 1), InvalidArgument);
  CHECK_THROWS_AS(ladder_k3(fixture("fano").design(), 1, 1), InvalidArgument);
  CHECK_THROWS_AS(ladder_k3(scale_index(m, 2), 1, 1), InvalidArgument);
}

TEST_CASE("block differences and confining pairs") {
  Design a({"0", "1", "2", "3"}, {{0, 1, 2}, {0, 1, 3}}, 1);
  Design b({"0", "1", "2", "3"}, {{0, 1, 2}, {0, 2, 3}}, 1);
  auto diff = block_difference(a, b);
  CHECK(diff.size() == 2);
  auto pr = confining_pair(diff);
  REQUIRE(pr.has_value());
  CHECK(((*pr)[0] == 0 || (*pr)[1] == 0 || (*pr)[0] == 3 || (*pr)[1] == 3));
  CHECK(block_difference(a, a).empty());
  CHECK(confining_pair({}).has_value());
  CHECK_FALSE(confining_pair({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}).has_value());
  CHECK_THROWS_AS(block_difference(a, Design({"x", "y", "z", "w"}, {}, 1)), InvalidArgument);
}

TEST_CASE("step scan") {
  auto f = fixture("fano").design();
  auto one = chromatic_step_scan({f});
  CHECK(one.chi == std::vector<int>{3});
  CHECK(one.confined.empty());
  CHECK_THROWS_AS(chromatic_step_scan({}), InvalidArgument);
  CHECK_THROWS_AS(chromatic_step_scan({f, fixture("sts9").design()}), InvalidArgument);
  SolverConfig cfg;
  cfg.point_cap = 5;
  CHECK_THROWS_AS(chromatic_step_scan({f}, cfg), UnsupportedSize);
}
