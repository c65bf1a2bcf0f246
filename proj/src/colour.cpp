#include "chromdesign/colour.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "chromdesign/errors.hpp"
#include "chromdesign/verify.hpp"

namespace chromdesign {

namespace {

using Clock = std::chrono::steady_clock;

// Distinct block supports; multiplicity is irrelevant for colouring.
std::vector<Block> supports(const Design& d) {
  std::set<Block> seen(d.blocks().begin(), d.blocks().end());
  return {seen.begin(), seen.end()};
}

std::vector<std::vector<int>> incidence(std::size_t v, const std::vector<Block>& blocks) {
  std::vector<std::vector<int>> inc(v);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (auto p : blocks[i]) inc[p].push_back(static_cast<int>(i));
  return inc;
}

std::vector<int> canonical_rank(const Design& d) {
  auto order = canonical_order(d);
  std::vector<int> rank(d.num_points());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  return rank;
}

class Budget {
 public:
  explicit Budget(const SolverConfig& cfg)
      : node_budget_(cfg.node_budget),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(cfg.time_budget_seconds))) {}

  // false once a budget is spent
  bool tick() {
    ++nodes_;
    if (node_budget_ && nodes_ > node_budget_) return false;
    if ((nodes_ & 255) == 0 && Clock::now() > deadline_) return false;
    return true;
  }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t node_budget_;
  Clock::time_point deadline_;
  std::uint64_t nodes_ = 0;
};

struct OutOfBudget {};

// Backtracking c-colourability with not-all-equal propagation.
class ColourSearch {
 public:
  ColourSearch(const Design& d, int c, const SolverConfig& cfg, Budget& budget)
      : v_(d.num_points()),
        c_(c),
        symmetry_(cfg.symmetry_breaking),
        blocks_(supports(d)),
        inc_(incidence(v_, blocks_)),
        rank_(canonical_rank(d)),
        budget_(budget),
        col_(v_, 0),
        assigned_(blocks_.size(), 0),
        cnt_(blocks_.size() * (c + 1), 0) {}

  std::optional<Colouring> run() {
    if (dfs(0, 0)) return Colouring{col_, c_};
    return std::nullopt;
  }

 private:
  // Colours that would complete a monochromatic block at p.
  std::uint32_t forbidden(PointId p) const {
    std::uint32_t mask = 0;
    for (int b : inc_[p]) {
      int size = static_cast<int>(blocks_[b].size());
      if (assigned_[b] != size - 1) continue;
      for (int x = 1; x <= c_; ++x)
        if (cnt_[b * (c_ + 1) + x] == size - 1) {
          mask |= 1u << x;
          break;
        }
    }
    return mask;
  }

  void set(PointId p, int x, int delta) {
    for (int b : inc_[p]) {
      assigned_[b] += delta;
      cnt_[b * (c_ + 1) + x] += delta;
    }
    col_[p] = delta > 0 ? x : 0;
  }

  bool dfs(std::size_t done, int max_used) {
    if (!budget_.tick()) throw OutOfBudget{};
    if (done == v_) return true;
    const std::uint32_t all = ((1u << (c_ + 1)) - 1) & ~1u;
    PointId best = 0;
    int best_sat = -1;
    std::uint32_t best_forb = 0;
    for (PointId p = 0; p < v_; ++p) {
      if (col_[p]) continue;
      auto f = forbidden(p);
      if ((f & all) == all) return false;
      int sat = std::popcount(f);
      if (sat > best_sat || (sat == best_sat && rank_[p] < rank_[best])) {
        best = p;
        best_sat = sat;
        best_forb = f;
      }
    }
    int top = symmetry_ ? std::min(c_, max_used + 1) : c_;
    for (int x = 1; x <= top; ++x) {
      if (best_forb & (1u << x)) continue;
      set(best, x, +1);
      if (dfs(done + 1, std::max(max_used, x))) return true;
      set(best, x, -1);
    }
    return false;
  }

  std::size_t v_;
  int c_;
  bool symmetry_;
  std::vector<Block> blocks_;
  std::vector<std::vector<int>> inc_;
  std::vector<int> rank_;
  Budget& budget_;
  std::vector<int> col_;
  std::vector<int> assigned_;
  std::vector<int> cnt_;
};

int lower_bound_of(const Design& d) { return d.blocks().empty() ? 1 : 2; }

}  // namespace

std::optional<Colouring> greedy_colouring(const Design& d, int c) {
  if (c < 1) return std::nullopt;
  const std::size_t v = d.num_points();
  auto blocks = supports(d);
  auto inc = incidence(v, blocks);
  auto rank = canonical_rank(d);
  std::vector<PointId> order(v);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
    if (inc[a].size() != inc[b].size()) return inc[a].size() > inc[b].size();
    return rank[a] < rank[b];
  });
  std::vector<int> col(v, 0), used(c + 1, 0);
  for (auto p : order) {
    std::vector<char> bad(c + 1, 0);
    for (int b : inc[p]) {
      int first = -1;
      bool mono = true;
      for (auto q : blocks[b]) {
        if (q == p) continue;
        if (col[q] == 0 || (first >= 0 && col[q] != first)) {
          mono = false;
          break;
        }
        first = col[q];
      }
      if (mono && first > 0) bad[first] = 1;
    }
    int pick = 0;
    for (int x = 1; x <= c && !pick; ++x)
      if (!bad[x]) pick = x;
    if (!pick) {
      pick = 1;
      for (int x = 2; x <= c; ++x)
        if (used[x] < used[pick]) pick = x;
    }
    col[p] = pick;
    ++used[pick];
  }
  Colouring out{std::move(col), c};
  if (!verify_colouring(d, out).ok) return std::nullopt;
  return out;
}

int greedy_upper_bound(const Design& d) {
  for (int c = 1;; ++c)
    if (greedy_colouring(d, c)) return c;
}

std::optional<Colouring> find_colouring(const Design& d, int c, const SolverConfig& cfg) {
  if (c < 1) return std::nullopt;
  Budget budget(cfg);
  try {
    return ColourSearch(d, c, cfg, budget).run();
  } catch (const OutOfBudget&) {
    throw ResourceExhausted("colouring search budget exhausted", 0, 0);
  }
}

ChromaticCertificate exact_chromatic(const Design& d, const SolverConfig& cfg) {
  const int lb = lower_bound_of(d);
  if (d.num_points() > cfg.point_cap) {
    throw ResourceExhausted("design has " + std::to_string(d.num_points()) +
                                " points, exact cap is " + std::to_string(cfg.point_cap),
                            lb, greedy_upper_bound(d));
  }
  ChromaticCertificate cert;
  if (lb == 1) {
    cert.chi = 1;
    cert.colouring = Colouring{std::vector<int>(d.num_points(), 1), 1};
    return cert;
  }
  const int ub = greedy_upper_bound(d);
  Budget budget(cfg);
  std::uint64_t proven_nodes = 0;
  for (int c = lb; c < ub; ++c) {
    std::optional<Colouring> col;
    try {
      col = ColourSearch(d, c, cfg, budget).run();
    } catch (const OutOfBudget&) {
      throw ResourceExhausted("exact search budget exhausted while testing " + std::to_string(c) +
                                  " colours",
                              c, ub);
    }
    if (col) {
      cert.chi = c;
      cert.colouring = std::move(*col);
      break;
    }
    proven_nodes = budget.nodes();
  }
  if (cert.chi == 0) {
    cert.chi = ub;
    cert.colouring = *greedy_colouring(d, ub);
  }
  if (cert.chi >= 2)
    cert.infeasibility_witness = std::to_string(cert.chi - 1) + " colours exhausted after " +
                                 std::to_string(proven_nodes) + " nodes";
  cert.nodes = budget.nodes();
  return cert;
}

std::optional<int> brute_force_chromatic(const Design& d, int max_c) {
  if (max_c < 1) return std::nullopt;
  const std::size_t v = d.num_points();
  if (static_cast<double>(v) * std::log2(static_cast<double>(max_c)) > 26.0)
    throw UnsupportedSize("brute force limited to c^v <= 2^26");
  auto blocks = supports(d);
  for (int c = 1; c <= max_c; ++c) {
    std::vector<int> col(v, 0);
    while (true) {
      bool ok = true;
      for (const auto& b : blocks) {
        bool mono = true;
        for (auto p : b)
          if (col[p] != col[b.front()]) {
            mono = false;
            break;
          }
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

namespace {

// CSP over points: value 0 = outside every set, 1..m = set index.
class BlockingSearch {
 public:
  using Domains = std::vector<std::uint32_t>;

  BlockingSearch(const Design& d, const std::vector<std::vector<PointId>>* groups,
                 const BlockingSearchSpec& spec, const SolverConfig& cfg)
      : d_(d), v_(d.num_points()), m_(static_cast<int>(spec.sizes.size())), budget_(cfg),
        rank_(canonical_rank(d)) {
    if (m_ < 1 || m_ > 30) throw InvalidArgument("need between 1 and 30 sets");
    long total = 0;
    for (int s : spec.sizes) {
      if (s < 0) throw InvalidArgument("set sizes must be non-negative");
      total += s;
    }
    if (total > static_cast<long>(v_)) throw InvalidArgument("set sizes exceed the point count");

    std::vector<PointId> everyone(v_);
    std::iota(everyone.begin(), everyone.end(), 0);
    counts_.push_back({0, everyone, static_cast<int>(v_ - total)});
    for (int i = 0; i < m_; ++i) counts_.push_back({i + 1, everyone, spec.sizes[i]});

    if (!spec.quota.empty()) {
      if (!groups) throw InvalidArgument("quotas need groups");
      if (spec.quota.size() != spec.sizes.size())
        throw InvalidArgument("quota rows must match the number of sets");
      for (std::size_t g = 0; g < groups->size(); ++g) {
        const auto& grp = (*groups)[g];
        int sum = 0;
        bool all = true;
        for (int i = 0; i < m_; ++i) {
          if (spec.quota[i].size() != groups->size())
            throw InvalidArgument("quota columns must match the number of groups");
          int q = spec.quota[i][g];
          if (q < 0) {
            all = false;
            continue;
          }
          if (q > static_cast<int>(grp.size())) throw InvalidArgument("quota exceeds group size");
          sum += q;
          counts_.push_back({i + 1, grp, q});
        }
        if (sum > static_cast<int>(grp.size())) throw InvalidArgument("quotas exceed group size");
        if (all) counts_.push_back({0, grp, static_cast<int>(grp.size()) - sum});
      }
      for (int i = 0; i < m_; ++i) {
        if (std::all_of(spec.quota[i].begin(), spec.quota[i].end(), [](int q) { return q >= 0; })) {
          int s = std::accumulate(spec.quota[i].begin(), spec.quota[i].end(), 0);
          if (s != spec.sizes[i]) throw InvalidArgument("quotas inconsistent with set sizes");
        }
      }
    }

    Domains dom(v_, (2u << m_) - 1);
    std::optional<Block> ex;
    if (spec.exclude) {
      ex = *spec.exclude;
      std::sort(ex->begin(), ex->end());
      if (std::find(d.blocks().begin(), d.blocks().end(), *ex) == d.blocks().end())
        throw InvalidArgument("excluded block is not a block of the design");
      for (auto p : *ex) dom[p] = 1u;
    }
    for (const auto& b : supports(d))
      if (!ex || b != *ex) blocks_.push_back(b);
    inc_ = incidence(v_, blocks_);

    // Sets with equal size and equal quota column are interchangeable.
    class_of_.assign(m_ + 1, 0);
    for (int i = 1; i <= m_; ++i) {
      class_of_[i] = i;
      for (int j = 1; j < i; ++j) {
        bool same = spec.sizes[i - 1] == spec.sizes[j - 1] &&
                    (spec.quota.empty() || spec.quota[i - 1] == spec.quota[j - 1]);
        if (same) {
          class_of_[i] = class_of_[j];
          break;
        }
      }
    }
    root_ = std::move(dom);

    // Swap classes for the local phase: possible when every count is over
    // all points (no quotas) or every set has a quota in every group.
    auto targets_over = [&](const std::vector<PointId>& pts) {
      std::vector<int> t(m_ + 1, -1);
      for (const auto& c : counts_)
        if (c.points == pts) t[c.value] = c.target;
      return t;
    };
    if (spec.quota.empty()) {
      swap_classes_.push_back({everyone, targets_over(everyone)});
    } else if (std::all_of(spec.quota.begin(), spec.quota.end(), [](const auto& row) {
                 return std::all_of(row.begin(), row.end(), [](int q) { return q >= 0; });
               })) {
      for (const auto& grp : *groups) swap_classes_.push_back({grp, targets_over(grp)});
    }
  }

  std::optional<BlockingSystem> run() {
    try {
      Domains dom = root_;
      if (!propagate(dom)) return std::nullopt;
      if (auto quick = local_search()) return quick;
      return dfs(dom);
    } catch (const OutOfBudget&) {
      throw ResourceExhausted("blocking-system search budget exhausted after " +
                              std::to_string(budget_.nodes()) + " nodes");
    }
  }

 private:
  struct Count {
    int value;
    std::vector<PointId> points;
    int target;
  };

  static bool single(std::uint32_t d) { return std::has_single_bit(d); }
  static int value_of(std::uint32_t d) { return std::countr_zero(d); }

  bool propagate(Domains& dom) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : counts_) {
        const std::uint32_t bit = 1u << c.value;
        int fixed = 0, possible = 0;
        for (auto p : c.points) {
          if (!(dom[p] & bit)) continue;
          ++possible;
          if (dom[p] == bit) ++fixed;
        }
        if (fixed > c.target || possible < c.target) return false;
        if (fixed == c.target && possible > fixed) {
          for (auto p : c.points)
            if ((dom[p] & bit) && dom[p] != bit) {
              dom[p] &= ~bit;
              changed = true;
            }
        } else if (possible == c.target && possible > fixed) {
          for (auto p : c.points)
            if (dom[p] & bit) dom[p] = bit;
          changed = true;
        }
      }
      for (const auto& b : blocks_) {
        std::uint32_t hit = 0;
        for (auto p : b)
          if (single(dom[p]) && dom[p] != 1u) hit |= dom[p];
        int distinct = std::popcount(hit);
        if (distinct >= 2) continue;
        PointId helpers[2];
        int n = 0;
        const std::uint32_t useful = ~(hit | 1u);
        for (auto p : b) {
          if (single(dom[p])) continue;
          if (dom[p] & useful) {
            if (n < 2) helpers[n] = p;
            ++n;
          }
        }
        if (distinct + n < 2) return false;
        if (distinct == 1 && n == 1) {
          dom[helpers[0]] &= useful;
          changed = true;
        } else if (distinct == 0 && n == 2) {
          for (auto p : helpers)
            if (dom[p] & 1u) {
              dom[p] &= ~1u;
              changed = true;
            }
        }
      }
      for (auto x : dom)
        if (!x) return false;
    }
    return true;
  }

  std::optional<BlockingSystem> dfs(Domains& dom) {
    if (!budget_.tick()) throw OutOfBudget{};
    // MRV; ties go to the point sitting in the most advanced unsatisfied
    // blocks, then canonical order.
    std::vector<int> pressure(blocks_.size(), 0);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      std::uint32_t hit = 0;
      int decided = 0;
      for (auto p : blocks_[i])
        if (single(dom[p])) {
          ++decided;
          if (dom[p] != 1u) hit |= dom[p];
        }
      if (std::popcount(hit) < 2) pressure[i] = decided * decided + 1;
    }
    int best = -1, best_size = 99, best_score = -1;
    for (PointId p = 0; p < v_; ++p) {
      if (single(dom[p])) continue;
      int s = std::popcount(dom[p]);
      int score = 0;
      for (int b : inc_[p]) score += pressure[b];
      bool better = s < best_size ||
                    (s == best_size && (score > best_score ||
                                        (score == best_score && rank_[p] < rank_[best])));
      if (better) {
        best = static_cast<int>(p);
        best_size = s;
        best_score = score;
      }
    }
    if (best < 0) return extract(dom);

    std::vector<char> used(m_ + 1, 0);
    for (auto x : dom)
      if (single(x)) used[value_of(x)] = 1;
    std::vector<char> class_tried(m_ + 1, 0);
    std::vector<int> order;
    for (int x = 1; x <= m_; ++x) order.push_back(x);
    order.push_back(0);
    for (int x : order) {
      if (!(dom[best] & (1u << x))) continue;
      if (x > 0 && !used[x]) {
        // only the first unused member of an interchangeable class
        if (class_tried[class_of_[x]]) continue;
        class_tried[class_of_[x]] = 1;
      }
      Domains next = dom;
      next[best] = 1u << x;
      if (!propagate(next)) continue;
      if (auto r = dfs(next)) return r;
    }
    return std::nullopt;
  }

  // Seeded min-conflict swaps inside each swap class; counts stay exact so
  // any zero-violation state is a solution. Cannot prove absence.
  std::optional<BlockingSystem> local_search() {
    if (swap_classes_.empty()) return std::nullopt;
    std::mt19937 rng(0x5eedb10c);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    std::vector<int> cls(v_, -1);
    for (std::size_t c = 0; c < swap_classes_.size(); ++c)
      for (auto p : swap_classes_[c].points) cls[p] = static_cast<int>(c);

    std::vector<int> val(v_, 0);
    auto bad = [&](const Block& b) {
      int first = 0;
      for (auto p : b) {
        if (!val[p]) continue;
        if (!first) first = val[p];
        else if (val[p] != first) return false;
      }
      return true;
    };

    for (int restart = 0; restart < 8; ++restart) {
      std::vector<char> movable(v_, 1);
      for (const auto& sc : swap_classes_) {
        std::vector<int> left = sc.target;
        std::vector<PointId> free;
        for (auto p : sc.points) {
          if (root_[p] == 1u) {
            val[p] = 0;
            movable[p] = 0;
            if (--left[0] < 0) return std::nullopt;
          } else {
            free.push_back(p);
          }
        }
        for (std::size_t i = free.size(); i > 1; --i) std::swap(free[i - 1], free[pick(i)]);
        std::size_t at = 0;
        for (int x = 0; x <= m_; ++x)
          for (int n = 0; n < left[x]; ++n) val[free.at(at++)] = x;
        if (at != free.size()) return std::nullopt;
      }

      for (int it = 0; it < 50000; ++it) {
        if (!budget_.tick()) throw OutOfBudget{};
        std::vector<int> violated;
        for (std::size_t i = 0; i < blocks_.size(); ++i)
          if (bad(blocks_[i])) violated.push_back(static_cast<int>(i));
        if (violated.empty()) return extract_values(val);
        const Block& b = blocks_[violated[pick(violated.size())]];
        std::vector<PointId> cand;
        for (auto p : b)
          if (movable[p]) cand.push_back(p);
        if (cand.empty()) return std::nullopt;
        PointId p = cand[pick(cand.size())];

        auto local_bad = [&](PointId a, PointId c) {
          int n = 0;
          for (int bi : inc_[a]) n += bad(blocks_[bi]);
          for (int bi : inc_[c])
            if (std::find(inc_[a].begin(), inc_[a].end(), bi) == inc_[a].end()) n += bad(blocks_[bi]);
          return n;
        };
        int best_delta = 1 << 30;
        std::vector<PointId> best_q;
        for (auto q : swap_classes_[cls[p]].points) {
          if (!movable[q] || val[q] == val[p]) continue;
          int before = local_bad(p, q);
          std::swap(val[p], val[q]);
          int delta = local_bad(p, q) - before;
          std::swap(val[p], val[q]);
          if (delta < best_delta) {
            best_delta = delta;
            best_q.assign(1, q);
          } else if (delta == best_delta) {
            best_q.push_back(q);
          }
        }
        if (best_q.empty()) continue;
        // occasional random walk step to leave plateaus
        if (best_delta > 0 && pick(10) != 0) continue;
        std::swap(val[p], val[best_q[pick(best_q.size())]]);
      }
    }
    return std::nullopt;
  }

  std::optional<BlockingSystem> extract_values(const std::vector<int>& val) const {
    BlockingSystem bs;
    bs.sets.resize(m_);
    for (PointId p = 0; p < v_; ++p)
      if (val[p]) bs.sets[val[p] - 1].push_back(p);
    return bs;
  }

  std::optional<BlockingSystem> extract(const Domains& dom) const {
    BlockingSystem bs;
    bs.sets.resize(m_);
    for (PointId p = 0; p < v_; ++p)
      if (dom[p] != 1u) bs.sets[value_of(dom[p]) - 1].push_back(p);
    return bs;
  }

  const Design& d_;
  std::size_t v_;
  int m_;
  Budget budget_;
  std::vector<int> rank_;
  std::vector<Count> counts_;
  std::vector<Block> blocks_;
  std::vector<std::vector<int>> inc_;
  std::vector<int> class_of_;
  struct SwapClass {
    std::vector<PointId> points;
    std::vector<int> target;
  };
  std::vector<SwapClass> swap_classes_;
  Domains root_;
};

}  // namespace

std::optional<BlockingSystem> find_blocking_system(const Design& d, const std::vector<int>& sizes,
                                                   const SolverConfig& cfg) {
  BlockingSearchSpec spec;
  spec.sizes = sizes;
  auto r = BlockingSearch(d, nullptr, spec, cfg).run();
  if (r && !verify_blocking_system(d, *r).ok) throw std::logic_error("search returned an invalid system");
  return r;
}

std::optional<BlockingSystem> find_blocking_system_constrained(const GroupedDesign& g,
                                                               const BlockingSearchSpec& spec,
                                                               const SolverConfig& cfg) {
  auto r = BlockingSearch(g.design(), &g.groups(), spec, cfg).run();
  if (r) {
    auto ok = spec.exclude ? verify_blocking_system_except(g.design(), *r, *spec.exclude)
                           : verify_blocking_system(g.design(), *r);
    if (!ok.ok) throw std::logic_error("search returned an invalid system");
  }
  return r;
}

std::vector<std::vector<int>> uniform_quota(std::size_t sets, std::size_t groups, int q) {
  return std::vector<std::vector<int>>(sets, std::vector<int>(groups, q));
}

}  // namespace chromdesign
