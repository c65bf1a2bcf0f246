#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "chromdesign/construct.hpp"
#include "chromdesign/core.hpp"
#include "chromdesign/errors.hpp"
#include "oracle.hpp"

using namespace chromdesign;

namespace {

Design fano() { return fixture("fano").design(); }

// Residues r in 0..k(k-1)-1 meeting both congruences, computed directly.
std::vector<int> residues_by_hand(int k, int lambda) {
  std::vector<int> out;
  for (int r = 0; r < k * (k - 1); ++r) {
    long long v = r + k * (k - 1);  // avoid v = 0
    if (lambda * (v - 1) % (k - 1) == 0 && lambda * v * (v - 1) % (k * (k - 1)) == 0) out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("label order puts numbers before text and compares them numerically") {
  CHECK(label_less("2", "10"));
  CHECK_FALSE(label_less("10", "2"));
  CHECK(label_less("9", "a"));
  CHECK(label_less("(0,2)", "(0,10)"));
  CHECK(label_less("(1,0)", "(2,0)"));
  CHECK_FALSE(label_less("a", "a"));
}

TEST_CASE("design construction validates its blocks") {
  CHECK_THROWS_AS(Design({"a", "a"}, {}, 1), InvalidArgument);
  CHECK_THROWS_AS(Design({"a", "b"}, {{0}}, 1), InvalidArgument);
  CHECK_THROWS_AS(Design({"a", "b"}, {{0, 0}}, 1), InvalidArgument);
  CHECK_THROWS_AS(Design({"a", "b"}, {{0, 2}}, 1), InvalidArgument);
  CHECK_THROWS_AS(Design({"a", "b"}, {{0, 1}}, 0), InvalidArgument);
  CHECK_THROWS_AS(Design::from_labels({"a", "b"}, {{"a", "z"}}, 1), InvalidArgument);

  Design d({"x", "y", "z"}, {{2, 0}, {1, 0}}, 1);
  CHECK(d.num_points() == 3);
  CHECK(d.blocks().size() == 2);
  for (const auto& b : d.blocks()) CHECK(std::is_sorted(b.begin(), b.end()));
  CHECK(d.id_of("z") == 2);
  CHECK_THROWS_AS(d.id_of("w"), NotFound);
  CHECK_FALSE(d.find("w").has_value());
  CHECK(d.block_size() == std::optional<std::size_t>(2));
}

TEST_CASE("mixed block sizes are allowed and reported") {
  Design d({"a", "b", "c"}, {{0, 1}, {0, 1, 2}}, 1);
  CHECK_FALSE(d.is_uniform());
  CHECK_FALSE(d.block_size().has_value());
}

TEST_CASE("builder reuses labels") {
  DesignBuilder b(1);
  auto a = b.add_point("a");
  CHECK(b.add_point("a") == a);
  b.add_block({"a", "b", "c"});
  b.add_block_ids({0, 1});
  Design d = b.build();
  CHECK(d.num_points() == 3);
  CHECK(d.blocks().size() == 2);
}

TEST_CASE("grouped designs need a partition") {
  Design d({"a", "b", "c"}, {}, 1);
  CHECK_NOTHROW(GroupedDesign(d, {{0, 1}, {2}}));
  CHECK_THROWS_AS(GroupedDesign(d, {{0, 1}, {1, 2}}), InvalidArgument);
  CHECK_THROWS_AS(GroupedDesign(d, {{0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(GroupedDesign(d, {{0, 1, 2}, {}}), InvalidArgument);
}

TEST_CASE("group type is sorted by size with multiplicities") {
  auto g = gdd_h_1_6(3, 1).gdd;
  auto t = group_type(g);
  REQUIRE(t.size() == 2);
  CHECK(to_string(t) == "3^1 1^6");
  std::size_t total = 0;
  for (const auto& e : t) total += e.size * e.multiplicity;
  CHECK(total == g.design().num_points());
}

TEST_CASE("admissibility examples") {
  CHECK(is_admissible(7, 3, 1));
  CHECK_FALSE(is_admissible(6, 3, 1));
  CHECK(is_admissible(13, 4, 1));
  CHECK(is_admissible(9, 3, 1));
  CHECK_FALSE(is_admissible(8, 3, 1));
  CHECK_FALSE(is_admissible(8, 3, 2));
  CHECK(is_admissible(8, 3, 6));
  CHECK(is_admissible(25, 4, 2));
}

TEST_CASE("admissible residues agree with a direct congruence scan") {
  CHECK(admissible_residues(3, 1) == std::vector<int>{1, 3});
  CHECK(admissible_residues(3, 6) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(admissible_residues(4, 1) == std::vector<int>{1, 4});
  for (int k = 3; k <= 6; ++k)
    for (int lambda = 1; lambda <= 6; ++lambda) CHECK(admissible_residues(k, lambda) == residues_by_hand(k, lambda));
}

TEST_CASE("scale_index multiplies blocks and lambda") {
  auto triv = trivial_design({"a", "b", "c"}, 1);
  auto s = scale_index(triv, 3);
  CHECK(s.lambda() == 3);
  CHECK(s.blocks().size() == 3);
  CHECK(s.blocks()[0] == s.blocks()[2]);
  auto b13 = fixture("bibd_13_4_1").design();
  auto d = scale_index(b13, 2);
  CHECK(d.blocks().size() == 26);
  CHECK(oracle::is_bibd(d));
  CHECK(scale_index(b13, 1) == b13);
  CHECK_THROWS_AS(scale_index(b13, 0), InvalidArgument);
}

TEST_CASE("canonicalize forgets point order") {
  Design f = fano();
  std::vector<std::string> labels = f.points();
  std::vector<PointId> perm{3, 6, 0, 5, 1, 4, 2};
  std::vector<std::string> permuted(7);
  std::vector<Block> blocks;
  for (PointId p = 0; p < 7; ++p) permuted[perm[p]] = labels[p];
  for (const auto& b : f.blocks()) {
    Block nb;
    for (auto p : b) nb.push_back(perm[p]);
    blocks.push_back(nb);
  }
  Design g(permuted, blocks, 1);
  CHECK(canonicalize(f) == canonicalize(g));
  CHECK(canonicalize(canonicalize(g)) == canonicalize(g));
  CHECK(canonicalize(Design()) == Design());
  CHECK(canonicalize(td_lines(5, 13).td) == canonicalize(td_lines(5, 13).td));
}

TEST_CASE("relabel keeps structure") {
  Design f = fano();
  std::vector<std::string> labels;
  for (int i = 0; i < 7; ++i) labels.push_back("p" + std::to_string(i));
  Design r = relabel(f, labels);
  CHECK(r.blocks() == f.blocks());
  CHECK(r.label(3) == "p3");
  CHECK_THROWS_AS(relabel(f, {"a"}), InvalidArgument);
}

TEST_CASE("pair labels") { CHECK(pair_label("a", "3") == "(a,3)"); }

TEST_CASE("system shape checks") {
  Design f = fano();
  CHECK_NOTHROW(check_system_shape(f, {{{0, 1}, {2}}}));
  CHECK_THROWS_AS(check_system_shape(f, {{{0, 1}, {1}}}), InvalidArgument);
  CHECK_THROWS_AS(check_system_shape(f, {{{0, 9}}}), InvalidArgument);
  auto bs = system_from_labels(f, {{"0", "1"}, {"2"}});
  CHECK(system_labels(f, bs) == std::vector<std::vector<std::string>>{{"0", "1"}, {"2"}});
  CHECK_THROWS_AS(system_from_labels(f, {{"nope"}}), InvalidArgument);
}
