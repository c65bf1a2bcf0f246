#include "chromdesign/construct.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "chromdesign/errors.hpp"
#include "chromdesign/verify.hpp"
#include "gdd_h16_data.hpp"

namespace chromdesign {

namespace {

int mod(long long a, int p) { return static_cast<int>(((a % p) + p) % p); }

std::string xy(int x, int y) { return pair_label(std::to_string(x), std::to_string(y)); }

std::vector<std::string> grid_labels(int rows, int cols) {
  std::vector<std::string> out;
  for (int x = 0; x < rows; ++x)
    for (int y = 0; y < cols; ++y) out.push_back(xy(x, y));
  return out;
}

std::vector<std::vector<PointId>> grid_groups(int rows, int cols) {
  std::vector<std::vector<PointId>> groups(rows);
  for (int x = 0; x < rows; ++x)
    for (int y = 0; y < cols; ++y) groups[x].push_back(static_cast<PointId>(x * cols + y));
  return groups;
}

using Cells = std::vector<std::pair<int, int>>;

BlockingSystem grid_system(int cols, const std::vector<Cells>& sets) {
  BlockingSystem bs;
  for (const auto& s : sets) {
    std::vector<PointId> ids;
    for (auto [x, y] : s) ids.push_back(static_cast<PointId>(x * cols + y));
    std::sort(ids.begin(), ids.end());
    bs.sets.push_back(std::move(ids));
  }
  return bs;
}

// xs x {lo..hi}
void add_rect(Cells& out, const std::vector<int>& xs, int lo, int hi) {
  for (int x : xs)
    for (int y = lo; y <= hi; ++y) out.emplace_back(x, y);
}

std::vector<int> range_incl(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

std::vector<std::string> numbered(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

TdWithSystems td_lines(int k, int p, bool require_mod4) {
  if (k < 5) throw InvalidArgument("td_lines needs k >= 5");
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  if (p < k) throw InvalidArgument("td_lines needs p >= k");
  if (require_mod4 && k == 5 && p % 4 != 1)
    throw InvalidArgument("k = 5 needs p = 1 (mod 4)");

  const int h = (p - 1) / 2;
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(p) * p);
  for (int i = -h; i <= h; ++i)
    for (int j = 0; j < p; ++j) {
      Block b;
      for (int x = 0; x < k; ++x) b.push_back(static_cast<PointId>(x * p + mod(1LL * i * x + j, p)));
      blocks.push_back(std::move(b));
    }

  Cells s1, s2, t1, t2;
  auto low = range_incl(0, k - 4);
  std::vector<int> mid{k - 3, k - 1};
  add_rect(s1, low, 1, h);
  add_rect(s1, mid, 0, (p - 3) / 2);
  add_rect(s1, {k - 2}, h + 1, p - 1);
  add_rect(s2, low, h + 1, p - 1);
  add_rect(s2, mid, h, p - 2);
  add_rect(s2, {k - 2}, 0, (p - 3) / 2);

  auto most = range_incl(0, k - 3);
  most.push_back(k - 1);
  add_rect(t1, most, 1, h);
  add_rect(t1, {k - 2}, h + 1, p - 1);
  add_rect(t2, most, h + 1, p - 1);
  add_rect(t2, {k - 2}, 1, h);

  Block special;
  for (int x = 0; x < k; ++x) special.push_back(static_cast<PointId>(x * p));

  Design d(grid_labels(k, p), std::move(blocks), 1);
  return {GroupedDesign(std::move(d), grid_groups(k, p)), grid_system(p, {s1, s2}), special,
          grid_system(p, {t1, t2})};
}

GroupedDesign td_4_p(int p) {
  if (!is_prime(p) || p < 3) throw InvalidArgument("td_4_p needs an odd prime");
  std::vector<Block> blocks;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      blocks.push_back({static_cast<PointId>(0 * p + i), static_cast<PointId>(1 * p + j),
                        static_cast<PointId>(2 * p + mod(i + j, p)),
                        static_cast<PointId>(3 * p + mod(i + 2 * j, p))});
  return GroupedDesign(Design(grid_labels(4, p), std::move(blocks), 1), grid_groups(4, p));
}

TdWithSystems td_4_13() {
  auto td = td_4_p(13);
  // Listed per group. S3 holds (2,11) where (2,10) also fits the pattern;
  // with (2,10) the block B_{6,5} = {(0,6),(1,5),(2,11),(3,3)} meets S2 only.
  const std::vector<Cells> s = {
      {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 1}, {1, 2}, {1, 3}, {1, 4},
       {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 8}, {3, 9}},
      {{0, 5}, {0, 6}, {0, 7}, {0, 8}, {1, 5}, {1, 6}, {1, 7}, {1, 10},
       {2, 7}, {2, 8}, {2, 9}, {2, 12}, {3, 0}, {3, 3}, {3, 10}, {3, 11}},
      {{0, 0}, {0, 9}, {0, 10}, {0, 11}, {1, 0}, {1, 8}, {1, 11}, {1, 12},
       {2, 0}, {2, 5}, {2, 6}, {2, 11}, {3, 4}, {3, 5}, {3, 6}, {3, 7}}};
  const std::vector<Cells> t = {
      {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 4}, {1, 5},
       {2, 1}, {2, 3}, {2, 4}, {2, 5}, {3, 1}, {3, 2}, {3, 10}, {3, 11}},
      {{0, 6}, {0, 7}, {0, 8}, {0, 9}, {1, 6}, {1, 7}, {1, 9}, {1, 10},
       {2, 8}, {2, 9}, {2, 10}, {2, 11}, {3, 0}, {3, 4}, {3, 5}, {3, 12}},
      {{0, 0}, {0, 10}, {0, 11}, {0, 12}, {1, 0}, {1, 8}, {1, 11}, {1, 12},
       {2, 0}, {2, 6}, {2, 7}, {2, 12}, {3, 6}, {3, 7}, {3, 8}, {3, 9}}};
  // B_{1,1} = {(0,1),(1,1),(2,2),(3,3)}
  Block special{0 * 13 + 1, 1 * 13 + 1, 2 * 13 + 2, 3 * 13 + 3};
  return {std::move(td), grid_system(13, s), special, grid_system(13, t)};
}

TdPair td_3_3_pair() {
  auto rho = [](int z) { return z == 0 ? 1 : z == 1 ? 0 : z; };
  std::vector<Block> base, twisted;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int third = mod(i + 2 * j + 1, 3);
      PointId a = static_cast<PointId>(0 * 3 + i);
      PointId b = static_cast<PointId>(1 * 3 + mod(i + j, 3));
      base.push_back({a, b, static_cast<PointId>(2 * 3 + third)});
      twisted.push_back({a, b, static_cast<PointId>(2 * 3 + rho(third))});
    }
  auto labels = grid_labels(3, 3);
  BlockingSystem parts;
  for (int level = 0; level < 3; ++level)
    parts.sets.push_back({static_cast<PointId>(level), static_cast<PointId>(3 + level),
                          static_cast<PointId>(6 + level)});
  return {GroupedDesign(Design(labels, std::move(base), 1), grid_groups(3, 3)),
          GroupedDesign(Design(labels, std::move(twisted), 1), grid_groups(3, 3)),
          {2 * 3 + 0, 2 * 3 + 1},
          std::move(parts)};
}

int lambda_min_k3(long long w) {
  for (int lam = 1; lam <= 6; ++lam)
    if (is_admissible(w, 3, lam)) return lam;
  return 6;  // unreachable: lambda = 6 admits every w
}

namespace {

// Bose: w = 3n, n odd. Colour classes are the Z_3 coordinate.
DesignWithSystem bose(int n) {
  DesignBuilder b(1);
  auto pt = [](int x, int i) { return xy(x, i); };
  for (int i = 0; i < 3; ++i)
    for (int x = 0; x < n; ++x) b.add_point(pt(x, i));
  const int half = (n + 1) / 2;
  for (int x = 0; x < n; ++x) b.add_block({pt(x, 0), pt(x, 1), pt(x, 2)});
  for (int i = 0; i < 3; ++i)
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        b.add_block({pt(x, i), pt(y, i), pt(((x + y) * half) % n, (i + 1) % 3)});
  auto d = b.build();
  BlockingSystem bs;
  for (int i = 0; i < 3; ++i) {
    std::vector<PointId> s;
    for (int x = 0; x < n; ++x) s.push_back(d.id_of(pt(x, i)));
    bs.sets.push_back(std::move(s));
  }
  return {std::move(d), std::move(bs)};
}

// Skolem: w = 6n + 1 from the half-idempotent commutative quasigroup of
// order 2n; inf joins class 0.
DesignWithSystem skolem(int n) {
  const int m = 2 * n;
  auto op = [&](int x, int y) {
    int s = (x + y) % m;
    return s % 2 == 0 ? s / 2 : (s + m - 1) / 2;
  };
  DesignBuilder b(1);
  auto pt = [](int x, int i) { return xy(x, i); };
  b.add_point("inf");
  for (int i = 0; i < 3; ++i)
    for (int x = 0; x < m; ++x) b.add_point(pt(x, i));
  for (int x = 0; x < n; ++x) b.add_block({pt(x, 0), pt(x, 1), pt(x, 2)});
  for (int x = 0; x < n; ++x)
    for (int i = 0; i < 3; ++i) b.add_block({"inf", pt(x + n, i), pt(x, (i + 1) % 3)});
  for (int i = 0; i < 3; ++i)
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y) b.add_block({pt(x, i), pt(y, i), pt(op(x, y), (i + 1) % 3)});
  auto d = b.build();
  BlockingSystem bs;
  for (int i = 0; i < 3; ++i) {
    std::vector<PointId> s;
    if (i == 0) s.push_back(d.id_of("inf"));
    for (int x = 0; x < m; ++x) s.push_back(d.id_of(pt(x, i)));
    std::sort(s.begin(), s.end());
    bs.sets.push_back(std::move(s));
  }
  return {std::move(d), std::move(bs)};
}

// Seeded hill climb for a lambda-fold triple system with no triple inside
// one part of the fixed balanced partition p -> p mod 3.
std::optional<std::vector<Block>> hill_climb(int w, int lam, std::uint32_t seed, long cap) {
  std::mt19937 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto part = [](int p) { return p % 3; };
  std::vector<int> need(w * w, lam);
  std::vector<std::array<int, 3>> blocks;
  std::vector<char> alive;
  std::vector<std::vector<int>> through(w * w);
  std::size_t live_blocks = 0;
  const std::size_t target = static_cast<std::size_t>(lam) * w * (w - 1) / 6;

  auto add = [&](int x, int y, int z) {
    int id = static_cast<int>(blocks.size());
    blocks.push_back({x, y, z});
    alive.push_back(1);
    for (auto [a, b] : {std::pair{x, y}, {x, z}, {y, z}}) {
      --need[a * w + b];
      --need[b * w + a];
      through[a * w + b].push_back(id);
      through[b * w + a].push_back(id);
    }
    ++live_blocks;
  };
  auto remove = [&](int id) {
    alive[id] = 0;
    auto [x, y, z] = blocks[id];
    for (auto [a, b] : {std::pair{x, y}, {x, z}, {y, z}}) {
      ++need[a * w + b];
      ++need[b * w + a];
    }
    --live_blocks;
  };
  auto alive_through = [&](int a, int b) {
    auto& v = through[a * w + b];
    v.erase(std::remove_if(v.begin(), v.end(), [&](int id) { return !alive[id]; }), v.end());
    return v;
  };

  std::vector<int> live_pts, nbrs;
  std::vector<std::pair<int, int>> options;
  for (long it = 0; it < cap; ++it) {
    if (live_blocks == target) {
      std::vector<Block> out;
      for (std::size_t i = 0; i < blocks.size(); ++i)
        if (alive[i]) {
          auto [x, y, z] = blocks[i];
          out.push_back({static_cast<PointId>(x), static_cast<PointId>(y), static_cast<PointId>(z)});
        }
      return out;
    }
    live_pts.clear();
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < w; ++y)
        if (y != x && need[x * w + y] > 0) {
          live_pts.push_back(x);
          break;
        }
    int x = live_pts[pick(live_pts.size())];
    nbrs.clear();
    for (int y = 0; y < w; ++y)
      if (y != x && need[x * w + y] > 0) nbrs.push_back(y);
    options.clear();
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        int y = nbrs[i], z = nbrs[j];
        if (!(part(x) == part(y) && part(y) == part(z))) options.emplace_back(y, z);
      }
    if (options.empty()) {
      // stuck at x: drop a random block through x to open new options
      std::vector<int> cand;
      for (int y = 0; y < w; ++y)
        if (y != x)
          for (int id : alive_through(x, y)) cand.push_back(id);
      if (cand.empty()) return std::nullopt;
      remove(cand[pick(cand.size())]);
      continue;
    }
    auto [y, z] = options[pick(options.size())];
    if (need[y * w + z] <= 0) {
      const auto& v = alive_through(y, z);
      remove(v[pick(v.size())]);
    }
    add(x, y, z);
  }
  return std::nullopt;
}

DesignWithSystem climbed(int w, int lam) {
  for (std::uint32_t attempt = 0; attempt < 64; ++attempt) {
    auto blocks = hill_climb(w, lam, 0x5eed0000u + 97u * w + 13u * lam + attempt, 200000);
    if (!blocks) continue;
    Design d(numbered(w), std::move(*blocks), lam);
    BlockingSystem bs;
    bs.sets.resize(3);
    for (int p = 0; p < w; ++p) bs.sets[p % 3].push_back(static_cast<PointId>(p));
    return {canonicalize(d), std::move(bs)};
  }
  throw ResourceExhausted("hill climb did not converge for w = " + std::to_string(w));
}

}  // namespace

DesignWithSystem bibd_3_blocked(int w, int lambda) {
  if (lambda < 1) throw InvalidArgument("lambda must be positive");
  if (w < 5) throw InvalidArgument("bibd_3_blocked needs w >= 5");
  if (!is_admissible(w, 3, lambda))
    throw InvalidArgument(std::to_string(w) + " is not (3," + std::to_string(lambda) + ")-admissible");
  if (w > 21) throw UnsupportedSize("bibd_3_blocked catalogue stops at w = 21");

  const int lmin = lambda_min_k3(w);
  DesignWithSystem base;
  if (lmin == 1 && w % 6 == 3) base = bose(w / 3);
  else if (lmin == 1 && w % 6 == 1) base = skolem((w - 1) / 6);
  else base = climbed(w, lmin);

  if (!verify_bibd(base.design).ok || !verify_blocking_system(base.design, base.system).ok)
    throw std::logic_error("bibd_3_blocked produced an invalid design");
  base.design = scale_index(base.design, lambda / lmin);
  return base;
}

const std::vector<GddTableEntry>& gdd_h16_table() {
  static const std::vector<GddTableEntry> table = [] {
    std::vector<GddTableEntry> out;
    std::istringstream in(kGddH16Table);
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "h") {
        GddTableEntry e{};
        ls >> e.h >> e.lambda_min;
        out.push_back(std::move(e));
        row = 0;
      } else if (tag == "row") {
        if (out.empty() || row > 2) throw std::logic_error("malformed table data");
        ls >> out.back().rows[row++];
      } else if (tag == "set") {
        std::vector<std::string> s;
        for (std::string p; ls >> p;) s.push_back(p);
        out.back().sets.push_back(std::move(s));
      }
    }
    return out;
  }();
  return table;
}

GddWithSystem gdd_h_1_6(int h, int lambda) {
  if (h < 0 || h > 5) throw InvalidArgument("h must lie in 0..5");
  if (lambda < 1) throw InvalidArgument("lambda must be positive");
  if (h % 2 == 0 && lambda % 2 != 0) throw InvalidArgument("lambda must be even when h is even");

  const std::vector<std::string> letters{"a", "b", "c", "d", "e", "f"};
  if (h <= 1) {
    auto bib = bibd_3_blocked(6 + h, lambda);
    // Largest part first so that the h-point sits in set 1.
    auto parts = bib.system.sets;
    std::stable_sort(parts.begin(), parts.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::vector<std::string> labels(bib.design.num_points());
    std::size_t next = 0;
    bool zero_used = h == 0;
    for (auto& part : parts) {
      std::sort(part.begin(), part.end(), [&](PointId a, PointId b) {
        return label_less(bib.design.label(a), bib.design.label(b));
      });
      for (auto p : part) {
        if (!zero_used) {
          labels[p] = "0";
          zero_used = true;
        } else {
          labels[p] = letters.at(next++);
        }
      }
    }
    Design d = relabel(bib.design, labels);
    std::vector<std::vector<PointId>> groups;
    for (PointId p = 0; p < d.num_points(); ++p) groups.push_back({p});
    BlockingSystem bs;
    for (auto part : parts) {
      std::sort(part.begin(), part.end());
      bs.sets.push_back(std::move(part));
    }
    return {GroupedDesign(std::move(d), std::move(groups)), std::move(bs)};
  }

  const auto& table = gdd_h16_table();
  auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.h == h; });
  if (it == table.end()) throw std::logic_error("missing table entry");
  std::vector<std::string> points = numbered(h);
  points.insert(points.end(), letters.begin(), letters.end());
  std::vector<std::vector<std::string>> blocks;
  for (std::size_t c = 0; c < it->rows[0].size(); ++c)
    blocks.push_back({std::string(1, it->rows[0][c]), std::string(1, it->rows[1][c]),
                      std::string(1, it->rows[2][c])});
  Design d = Design::from_labels(points, blocks, it->lambda_min);
  std::vector<std::vector<PointId>> groups(1);
  for (int j = 0; j < h; ++j) groups[0].push_back(static_cast<PointId>(j));
  for (int j = 0; j < 6; ++j) groups.push_back({static_cast<PointId>(h + j)});
  auto bs = system_from_labels(d, it->sets);
  GroupedDesign g(std::move(d), std::move(groups));
  return {scale_index(g, lambda / it->lambda_min), std::move(bs)};
}

Design biplane_7() {
  std::vector<Block> blocks;
  for (PointId i = 0; i < 7; ++i) {
    Block line{i, (i + 1) % 7, (i + 3) % 7};
    Block b;
    for (PointId p = 0; p < 7; ++p)
      if (std::find(line.begin(), line.end(), p) == line.end()) b.push_back(p);
    blocks.push_back(std::move(b));
  }
  return Design(numbered(7), std::move(blocks), 2);
}

GddWithSystem gdd_4_2_type_2_4() {
  std::vector<Block> blocks;
  for (int mask = 0; mask < 16; ++mask) {
    int zeros = 4 - __builtin_popcount(mask);
    if (zeros % 2 == 0) continue;
    Block b;
    for (int g = 0; g < 4; ++g) b.push_back(static_cast<PointId>(g * 2 + ((mask >> g) & 1)));
    blocks.push_back(std::move(b));
  }
  BlockingSystem bs{{{0, 2, 4, 6}, {1, 3, 5, 7}}};
  return {GroupedDesign(Design(grid_labels(4, 2), std::move(blocks), 2), grid_groups(4, 2)),
          std::move(bs)};
}

const Design& Fixture::design() const {
  if (auto g = std::get_if<GroupedDesign>(&value)) return g->design();
  return std::get<Design>(value);
}

namespace {

Design cyclic(int v, const std::vector<std::vector<int>>& bases, int lambda = 1) {
  std::vector<Block> blocks;
  for (const auto& base : bases)
    for (int i = 0; i < v; ++i) {
      Block b;
      for (int x : base) b.push_back(static_cast<PointId>((x + i) % v));
      blocks.push_back(std::move(b));
    }
  return Design(numbered(v), std::move(blocks), lambda);
}

Design affine_plane_3() {
  std::vector<Block> blocks;
  auto id = [](int x, int y) { return static_cast<PointId>(3 * x + y); };
  for (int m = 0; m < 3; ++m)
    for (int c = 0; c < 3; ++c) blocks.push_back({id(0, c), id(1, (m + c) % 3), id(2, (2 * m + c) % 3)});
  for (int x = 0; x < 3; ++x) blocks.push_back({id(x, 0), id(x, 1), id(x, 2)});
  return Design(numbered(9), std::move(blocks), 1);
}

Fixture trivial_fixture(int k) {
  return {trivial_design(numbered(k), 1), BlockingSystem{{{0}, {1}}}, "bibd"};
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"bibd_13_4_1", "biplane_7", "fano",      "gdd_2_4_parity", "max_packing_6",
          "sts13",       "sts9",      "td_4_3",    "td_5_5",         "trivial_3",
          "trivial_5"};
}

Fixture fixture(std::string_view name) {
  if (name == "fano")
    return {cyclic(7, {{0, 1, 3}}), BlockingSystem{{{0, 1, 2}, {3, 4}, {5, 6}}}, "bibd"};
  if (name == "sts9") return {affine_plane_3(), std::nullopt, "bibd"};
  if (name == "sts13") return {cyclic(13, {{0, 1, 4}, {0, 2, 7}}), std::nullopt, "bibd"};
  if (name == "bibd_13_4_1")
    return {cyclic(13, {{0, 1, 3, 9}}),
            BlockingSystem{{{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}}}, "bibd"};
  if (name == "td_5_5") {
    auto t = td_lines(5, 5, false);
    return {t.td, t.whole_system, "td"};
  }
  if (name == "td_4_3") return {td_4_p(3), std::nullopt, "td"};
  if (name == "max_packing_6")
    return {Design(numbered(6), {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}}, 1), std::nullopt,
            "partial_bibd"};
  if (name == "trivial_3") return trivial_fixture(3);
  if (name == "trivial_5") return trivial_fixture(5);
  if (name == "biplane_7") return {biplane_7(), BlockingSystem{{{0, 1, 2}, {3, 4, 5}}}, "bibd"};
  if (name == "gdd_2_4_parity") {
    auto g = gdd_4_2_type_2_4();
    return {g.gdd, g.system, "gdd"};
  }
  throw NotFound("unknown fixture '" + std::string(name) + "'");
}

}  // namespace chromdesign
