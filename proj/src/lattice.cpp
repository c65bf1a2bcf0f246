#include "chromdesign/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "chromdesign/errors.hpp"

namespace chromdesign::lattice {

namespace {

void compositions(int k, int g, FVector& cur, int at, const std::function<void(const FVector&)>& out) {
  if (at == g - 1) {
    cur[at] = k;
    out(cur);
    return;
  }
  for (int a = 0; a <= k; ++a) {
    cur[at] = a;
    compositions(k - a, g, cur, at + 1, out);
  }
}

std::pair<int, int> half_sums(const FVector& f) {
  const int h = static_cast<int>(f.size()) / 2;
  int s1 = 0, s2 = 0;
  for (int i = 0; i < h; ++i) s1 += f[i];
  for (int i = h; i < 2 * h; ++i) s2 += f[i];
  return {s1, s2};
}

// Integer row echelon form. rows[i] = sum_j transform[i][j] * input[j].
struct Echelon {
  std::vector<IntVector> rows;
  std::vector<std::size_t> pivots;
  std::vector<IntVector> transform;
};

Echelon echelon(const std::vector<IntVector>& input, std::size_t dim, bool track) {
  std::vector<IntVector> rows = input;
  for (const auto& r : rows)
    if (r.size() != dim) throw InvalidArgument("vector dimension mismatch");
  const std::size_t n = rows.size();
  std::vector<IntVector> u;
  if (track) {
    u.assign(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  }
  auto sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t c = 0; c < dim; ++c)
      if (rows[src][c] != 0) rows[dst][c] -= q * rows[src][c];
    if (track)
      for (std::size_t c = 0; c < n; ++c)
        if (u[src][c] != 0) u[dst][c] -= q * u[src][c];
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(rows[a], rows[b]);
    if (track) std::swap(u[a], u[b]);
  };

  Echelon e;
  std::size_t r = 0;
  for (std::size_t col = 0; col < dim && r < n; ++col) {
    for (;;) {
      // smallest nonzero |entry| in this column pivots, to keep entries small
      std::size_t best = n;
      for (std::size_t i = r; i < n; ++i)
        if (rows[i][col] != 0 && (best == n || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      if (best == n) break;
      swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < n; ++i) {
        if (rows[i][col] == 0) continue;
        Int q = rows[i][col] / rows[r][col];
        sub(i, r, q);
        if (rows[i][col] != 0) clean = false;
      }
      if (clean) {
        if (rows[r][col] < 0) {
          for (auto& x : rows[r]) x = -x;
          if (track)
            for (auto& x : u[r]) x = -x;
        }
        e.pivots.push_back(col);
        ++r;
        break;
      }
    }
  }
  rows.resize(r);
  e.rows = std::move(rows);
  if (track) {
    u.resize(r);
    e.transform = std::move(u);
  }
  return e;
}

// Unique rational gamma with sum gamma_i rows[i] = target, if one exists.
std::optional<RationalVector> triangular_solve(const Echelon& e, const RationalVector& target) {
  RationalVector res = target;
  RationalVector gamma;
  std::size_t i = 0;
  for (std::size_t c = 0; c < res.size(); ++c) {
    if (i < e.pivots.size() && e.pivots[i] == c) {
      Rational g = res[c] / Rational(e.rows[i][c]);
      for (std::size_t d = c; d < res.size(); ++d)
        if (e.rows[i][d] != 0) res[d] -= g * Rational(e.rows[i][d]);
      gamma.push_back(g);
      ++i;
    } else if (res[c] != 0) {
      return std::nullopt;
    }
  }
  return gamma;
}

bool is_integer(const Rational& q) { return denominator(q) == 1; }

// Dense exact tableau. Dantzig pricing from a maintained objective row,
// switching to Bland's rule after a run of degenerate pivots so it cannot cycle.
class Simplex {
 public:
  Simplex(std::vector<RationalVector> a, RationalVector b, std::vector<std::size_t> basis)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)) {}

  // false when unbounded
  bool minimise(const RationalVector& cost, const std::vector<char>& may_enter) {
    const std::size_t cols = cost.size();
    z_ = cost;
    for (std::size_t r = 0; r < a_.size(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (a_[r][j] != 0) z_[j] -= cb * a_[r][j];
    }
    int degenerate_run = 0;
    for (;;) {
      const bool bland = degenerate_run > 50;
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!may_enter[j] || z_[j] >= 0) continue;
        if (enter == cols || (!bland && z_[j] < z_[enter])) enter = j;
        if (bland) break;
      }
      if (enter == cols) return true;
      std::size_t leave = a_.size();
      Rational best;
      for (std::size_t r = 0; r < a_.size(); ++r) {
        if (a_[r][enter] <= 0) continue;
        Rational ratio = b_[r] / a_[r][enter];
        if (leave == a_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == a_.size()) return false;
      degenerate_run = best == 0 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rational p = a_[row][col];
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < a_[row].size(); ++c)
      if (a_[row][c] != 0) {
        a_[row][c] /= p;
        nz.push_back(c);
      }
    b_[row] /= p;
    auto eliminate = [&](RationalVector& target, Rational* rhs) {
      if (target[col] == 0) return;
      Rational f = target[col];
      for (auto c : nz) target[c] -= f * a_[row][c];
      if (rhs) *rhs -= f * b_[row];
    };
    for (std::size_t r = 0; r < a_.size(); ++r)
      if (r != row) eliminate(a_[r], &b_[r]);
    if (!z_.empty()) eliminate(z_, nullptr);
    basis_[row] = col;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  Rational value(std::size_t j) const {
    for (std::size_t r = 0; r < basis_.size(); ++r)
      if (basis_[r] == j) return b_[r];
    return 0;
  }

  std::vector<RationalVector> a_;
  RationalVector b_;
  std::vector<std::size_t> basis_;
  RationalVector z_;
};

void require_odd_large(int k, int l) {
  if (k < 5 || l < k - 1) throw InvalidArgument("need k >= 5 and l >= k-1");
}

Rational fl2(int a) { return Rational(a >= 0 ? a / 2 : -((-a + 1) / 2)); }
Rational ce2(int a) { return Rational(a >= 0 ? (a + 1) / 2 : -((-a) / 2)); }

// Calls out(f) for each f in the sub-family, built directly rather than by
// filtering the full family (which is far too large for big g).
void for_each_odd_large(int k, int l, int index, const std::function<void(const FVector&)>& out) {
  require_odd_large(k, l);
  const int g = 2 * l + 1;
  FVector f(g, 0);
  auto subsets = [&](int lo, int n, int size, const std::function<void()>& next) {
    std::function<void(int, int)> rec = [&](int from, int left) {
      if (left == 0) {
        next();
        return;
      }
      for (int i = from; i <= lo + n - left; ++i) {
        f[i] = 1;
        rec(i + 1, left - 1);
        f[i] = 0;
      }
    };
    rec(lo, size);
  };
  auto halves = [&](int s1, int s2) {
    subsets(0, l, s1, [&] { subsets(l, l, s2, [&] { out(f); }); });
  };
  auto split_pair = [&](int x, int y) {
    halves(x, y);
    if (x != y) halves(y, x);
  };
  switch (index) {
    case 1:
      for (int i = 0; i < 2 * l; ++i) {
        f[i] = k - 1;
        for (int j = 0; j < g; ++j) {
          if (j == i) continue;
          ++f[j];
          auto [s1, s2] = half_sums(FVector(f.begin(), f.end() - 1));
          if (s1 >= 1 && s2 >= 1) out(f);
          --f[j];
        }
        f[i] = 0;
      }
      break;
    case 2:
      split_pair(1, k - 1);
      break;
    case 3:
      split_pair(k / 2, (k + 1) / 2);
      break;
    case 4:
      f[g - 1] = k - 2;
      for (int i = 0; i < l; ++i)
        for (int j = l; j < 2 * l; ++j) {
          f[i] = f[j] = 1;
          out(f);
          f[i] = f[j] = 0;
        }
      break;
    case 5:
      f[g - 1] = 1;
      split_pair((k - 1) / 2, k / 2);
      break;
    default:
      throw InvalidArgument("sub-family index must be 1..5");
  }
}

// Type tuple of the average mu over a family, from per-class sums.
RationalVector streamed_type(int k, int l, int index) {
  const int g = 2 * l + 1;
  std::vector<Int> sums(5, 0);
  Int count = 0;
  for_each_odd_large(k, l, index, [&](const FVector& f) {
    ++count;
    Int s1 = 0, s2 = 0, sq1 = 0, sq2 = 0;
    for (int i = 0; i < l; ++i) {
      s1 += f[i];
      sq1 += f[i] * f[i];
    }
    for (int i = l; i < 2 * l; ++i) {
      s2 += f[i];
      sq2 += f[i] * f[i];
    }
    const int last = f[g - 1];
    sums[0] += (sq1 - s1) + (sq2 - s2);
    sums[1] += (s1 * s1 - sq1) + (s2 * s2 - sq2);
    sums[2] += 2 * s1 * s2;
    sums[3] += last * (last - 1);
    sums[4] += 2 * last * (k - last);
  });
  const std::vector<Int> sizes = {2 * l, 2 * l * (l - 1), 2 * l * l, 1, 4 * l};
  RationalVector t(5);
  for (int c = 0; c < 5; ++c) t[c] = Rational(sums[c]) / Rational(count * sizes[c]);
  return t;
}

}  // namespace

std::vector<FVector> enumerate_family(int k, int g, FamilyVariant variant) {
  if (g < 2) throw InvalidArgument("g must be at least 2");
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (variant == FamilyVariant::one_three && (k != 4 || g % 2 != 0))
    throw InvalidArgument("the {1,3} family needs k = 4 and g even");
  std::vector<FVector> out;
  FVector cur(g, 0);
  compositions(k, g, cur, 0, [&](const FVector& f) {
    auto [s1, s2] = half_sums(f);
    bool keep = variant == FamilyVariant::two_sided ? (s1 >= 1 && s2 >= 1)
                                                    : ((s1 == 1 && s2 == 3) || (s1 == 3 && s2 == 1));
    if (keep) out.push_back(f);
  });
  return out;
}

IntVector mu_of(const FVector& f) {
  const std::size_t g = f.size();
  IntVector mu(g * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) mu[i * g + j] = i == j ? f[i] * (f[i] - 1) : f[i] * f[j];
  return mu;
}

IntVector tau_of(const FVector& f, int part) {
  const int g = static_cast<int>(f.size());
  if (part < 0 || part >= g || f[part] < 1) throw InvalidArgument("tau needs a part with f >= 1");
  IntVector t(2 * g * g, 0);
  auto at = [&](int i, int j, int s) -> Int& { return t[(i * g + j) * 2 + s]; };
  at(part, part, 0) = f[part] - 1;
  at(part, part, 1) = f[part] - 1;
  for (int i = 0; i < g; ++i) {
    if (i == part) continue;
    at(i, part, 0) = f[i];
    at(part, i, 1) = f[i];
  }
  return t;
}

std::vector<IntVector> tau_family(const std::vector<FVector>& fam) {
  std::vector<IntVector> out;
  for (const auto& f : fam)
    for (int l = 0; l < static_cast<int>(f.size()); ++l)
      if (f[l] >= 1) out.push_back(tau_of(f, l));
  return out;
}

std::vector<IntVector> mu_family(const std::vector<FVector>& fam) {
  std::vector<IntVector> out;
  out.reserve(fam.size());
  for (const auto& f : fam) out.push_back(mu_of(f));
  return out;
}

std::optional<Int> minimal_uniform_scalar(const std::vector<IntVector>& vectors, std::size_t dim) {
  if (vectors.empty()) throw InvalidArgument("no vectors");
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  Echelon e = echelon(vectors, dim, false);
  auto gamma = triangular_solve(e, RationalVector(dim, 1));
  if (!gamma || gamma->empty()) return std::nullopt;
  Int m = 1;
  for (const auto& q : *gamma) m = boost::multiprecision::lcm(m, denominator(q));
  return m;
}

std::optional<IntVector> solve_integral_combination(const std::vector<IntVector>& vectors, const IntVector& target) {
  const std::size_t dim = target.size();
  Echelon e = echelon(vectors, dim, true);
  RationalVector t(target.begin(), target.end());
  auto gamma = triangular_solve(e, t);
  if (!gamma) return std::nullopt;
  IntVector coeff(vectors.size(), 0);
  for (std::size_t i = 0; i < gamma->size(); ++i) {
    if (!is_integer((*gamma)[i])) return std::nullopt;
    Int g = numerator((*gamma)[i]);
    if (g == 0) continue;
    for (std::size_t j = 0; j < coeff.size(); ++j)
      if (e.transform[i][j] != 0) coeff[j] += g * e.transform[i][j];
  }
  return coeff;
}

DualCheck integral_combination_dual_check(const std::vector<IntVector>& vectors, const IntVector& target,
                                          const RationalVector& witness_y) {
  for (const auto& v : vectors)
    if (v.size() != target.size()) throw InvalidArgument("vector dimension mismatch");
  if (witness_y.size() != target.size()) throw InvalidArgument("witness dimension mismatch");
  DualCheck out;
  if (auto c = solve_integral_combination(vectors, target)) {
    IntVector sum(target.size(), 0);
    for (std::size_t j = 0; j < vectors.size(); ++j)
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*c)[j] * vectors[j][d];
    if (sum != target) throw std::logic_error("integral combination failed its re-check");
    out.member = true;
    out.coefficients = std::move(*c);
    out.verdict = Verdict::pass();
    return out;
  }
  auto dot = [&](const IntVector& v) {
    Rational s = 0;
    for (std::size_t d = 0; d < v.size(); ++d) s += witness_y[d] * Rational(v[d]);
    return s;
  };
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    Rational s = dot(vectors[j]);
    if (!is_integer(s))
      return {Verdict::fail("witness pairs to " + to_string(s) + " with generator " + std::to_string(j)), false, {}};
  }
  Rational st = dot(target);
  if (is_integer(st)) return {Verdict::fail("witness pairs integrally with the target; no certificate"), false, {}};
  out.verdict = Verdict::pass();
  return out;
}

std::optional<RationalVector> allowability_check(const std::vector<IntVector>& vectors) {
  if (vectors.empty()) throw InvalidArgument("no vectors");
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != dim) throw InvalidArgument("vector dimension mismatch");
  const std::size_t n = vectors.size();

  // c_j = s + d_j: sum_j d_j v_j + s * P = 1 with P = sum_j v_j; maximise s <= 1.
  std::map<IntVector, bool> seen;
  std::vector<IntVector> rows;
  for (std::size_t r = 0; r < dim; ++r) {
    IntVector row(n + 1);
    Int p = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = vectors[j][r];
      p += vectors[j][r];
    }
    row[n] = p;
    if (std::all_of(row.begin(), row.end(), [](const Int& x) { return x == 0; })) return std::nullopt;
    if (seen.emplace(row, true).second) rows.push_back(std::move(row));
  }
  const std::size_t m = rows.size();
  const std::size_t s_col = n, slack_col = n + 1, art0 = n + 2, cols = n + 2 + m;
  std::vector<RationalVector> a(m + 1, RationalVector(cols, 0));
  RationalVector b(m + 1, 1);
  std::vector<std::size_t> basis(m + 1);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j <= n; ++j) a[r][j] = Rational(rows[r][j]);
    a[r][art0 + r] = 1;
    basis[r] = art0 + r;
  }
  a[m][s_col] = 1;
  a[m][slack_col] = 1;
  basis[m] = slack_col;

  Simplex sx(std::move(a), std::move(b), std::move(basis));
  RationalVector cost1(cols, 0);
  for (std::size_t r = 0; r < m; ++r) cost1[art0 + r] = 1;
  std::vector<char> all(cols, 1);
  sx.minimise(cost1, all);
  Rational infeas = 0;
  for (std::size_t r = 0; r < m; ++r) infeas += sx.value(art0 + r);
  if (infeas > 0) return std::nullopt;
  // Drive zero artificials out of the basis; rows with nothing else are redundant.
  for (std::size_t r = 0; r < sx.basis_.size();) {
    if (sx.basis_[r] < art0) {
      ++r;
      continue;
    }
    std::size_t col = art0;
    for (std::size_t j = 0; j < art0; ++j)
      if (sx.a_[r][j] != 0) {
        col = j;
        break;
      }
    if (col == art0) {
      sx.drop_row(r);
    } else {
      sx.pivot(r, col);
      ++r;
    }
  }
  RationalVector cost2(cols, 0);
  cost2[s_col] = -1;
  std::vector<char> may(cols, 1);
  for (std::size_t j = art0; j < cols; ++j) may[j] = 0;
  if (!sx.minimise(cost2, may)) throw std::logic_error("bounded LP reported unbounded");
  Rational s = sx.value(s_col);
  if (s <= 0) return std::nullopt;
  RationalVector c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = s + sx.value(j);
  return c;
}

RationalVector average(const std::vector<IntVector>& vectors) {
  if (vectors.empty()) throw InvalidArgument("cannot average an empty list");
  RationalVector out(vectors.front().size(), 0);
  for (const auto& v : vectors)
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += Rational(v[d]);
  for (auto& x : out) x /= Rational(vectors.size());
  return out;
}

int type_class(int i, int j, int g) {
  const int l = g / 2;
  auto paired = [&](int x) { return x < 2 * l; };
  if (i == j) return paired(i) ? 0 : 3;
  if (!paired(i) || !paired(j)) return 4;
  return (i < l) == (j < l) ? 1 : 2;
}

RationalVector type_vector_of(const RationalVector& avg, int g) {
  if (g < 1 || avg.size() != static_cast<std::size_t>(g) * g) throw InvalidArgument("expected a g*g vector");
  const int classes = g % 2 ? 5 : 3;
  RationalVector z(classes, 0);
  std::vector<std::pair<int, int>> first(classes, {-1, -1});
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      int c = type_class(i, j, g);
      const Rational& v = avg[i * g + j];
      if (first[c].first < 0) {
        first[c] = {i, j};
        z[c] = v;
      } else if (z[c] != v) {
        std::ostringstream os;
        os << "class z" << c + 1 << " differs at (" << first[c].first + 1 << "," << first[c].second + 1 << ")="
           << to_string(z[c]) << " and (" << i + 1 << "," << j + 1 << ")=" << to_string(v);
        throw ShapeViolation(os.str());
      }
    }
  return z;
}

std::vector<FVector> odd_large_subfamily(int k, int l, int index) {
  std::vector<FVector> out;
  for_each_odd_large(k, l, index, [&](const FVector& f) { out.push_back(f); });
  std::sort(out.begin(), out.end());
  return out;
}

RationalVector odd_large_closed_form(int k, int l, int index) {
  require_odd_large(k, l);
  const Rational L(l), K(k);
  switch (index) {
    case 1:
      return {(K - 1) * (K - 2) / (2 * L), 0, (K - 1) / (L * L), 0, 0};
    case 2:
      return {0, (K - 1) * (K - 2) / (2 * L * (L - 1)), (K - 1) / (L * L), 0, 0};
    case 3:
      return {0, (ce2(k) * ce2(k - 2) + fl2(k) * fl2(k - 2)) / (2 * L * (L - 1)), ce2(k) * fl2(k) / (L * L), 0, 0};
    case 4:
      return {0, 0, 1 / (L * L), (K - 2) * (K - 3), (K - 2) / L};
    case 5:
      return {0, (ce2(k - 1) * ce2(k - 3) + fl2(k - 1) * fl2(k - 3)) / (2 * L * (L - 1)),
              ce2(k - 1) * fl2(k - 1) / (L * L), 0, (K - 1) / (2 * L)};
    default:
      throw InvalidArgument("sub-family index must be 1..5");
  }
}

std::array<Rational, 2> odd_large_x(int k, int l) {
  require_odd_large(k, l);
  const Rational L(l), K(k);
  const Rational e2 = ce2(k - 1) * ce2(k - 3) + fl2(k - 1) * fl2(k - 3);
  const Rational e3 = ce2(k - 1) * fl2(k - 1);
  Rational x2 = (L * (K - 3) - 1) / (L * (L - 1) * (K - 1) * (K - 3)) * e2;
  Rational x3 = 1 / (L * L * (K - 2) * (K - 3)) + 2 / (L * (K - 2)) +
                2 * (L * (K - 3) - 1) / (L * L * (K - 1) * (K - 3)) * e3;
  return {x2, x3};
}

DeltaReport check_delta_positivity(int k, int l, bool cross_check) {
  require_odd_large(k, l);
  const Rational L(l), K(k);
  auto b = odd_large_closed_form(k, l, 2);
  auto c = odd_large_closed_form(k, l, 3);
  auto [x2, x3] = odd_large_x(k, l);
  DeltaReport r;
  r.delta1 = b[1] * (1 - x3) - b[2] * (1 - x2);
  r.delta2 = c[2] * (1 - x2) - c[1] * (1 - x3);
  r.both_positive = r.delta1 > 0 && r.delta2 > 0;
  if (k % 2 == 0) {
    r.delta1_simplified = (2 * L * (L - K + 1) * (K - 1) * (K - 3) * (K - 4) + K * (L * (K - 3) + 1) * (K * K - 6 * K + 6) +
                           (4 * K - 6)) /
                          (4 * L * L * L * (L - 1) * (K - 3));
    r.delta2_simplified = K * (2 * L * (L - K + 1) * (K - 3) + K * L * (K - 3) + 1) / (4 * L * L * L * (L - 1) * (K - 3));
  } else {
    r.delta1_simplified = (K - 1) * (2 * L * (L - K + 1) * (K - 4) + K * L * (K - 5) + K - 2) / (4 * L * L * L * (L - 1));
    r.delta2_simplified =
        (K - 1) * (2 * L * (L - K + 1) * (K - 2) + K * L * (K - 1) - 1) / (4 * L * L * L * (L - 1) * (K - 2));
  }
  if (cross_check) {
    auto ta = streamed_type(k, l, 1);
    auto tb = streamed_type(k, l, 2);
    auto tc = streamed_type(k, l, 3);
    auto td = streamed_type(k, l, 4);
    auto te = streamed_type(k, l, 5);
    // the a, d, e combination that fixes z1, z4, z5 at 1
    const Rational ca = 2 * L / ((K - 1) * (K - 2));
    const Rational cd = 1 / ((K - 2) * (K - 3));
    const Rational ce_w = (2 * L * (K - 3) - 2) / ((K - 1) * (K - 3));
    RationalVector mix(5);
    for (int i = 0; i < 5; ++i) mix[i] = ca * ta[i] + cd * td[i] + ce_w * te[i];
    r.enumeration_agrees = tb == b && tc == c && mix[0] == 1 && mix[3] == 1 && mix[4] == 1 && mix[1] == x2 &&
                           mix[2] == x3;
  }
  return r;
}

RationalVector k4_combination(int g) {
  if (g < 6 || g % 2 != 0) throw InvalidArgument("g must be even and at least 6");
  const Rational l(g / 2);
  auto fam = enumerate_family(4, g, FamilyVariant::one_three);
  std::vector<IntVector> f1, f2, f3;
  for (const auto& f : fam) {
    int top = *std::max_element(f.begin(), f.end());
    (top == 3 ? f1 : top == 2 ? f2 : f3).push_back(mu_of(f));
  }
  const std::array<Rational, 3> w = {l / 6, l / 2, l * (l - 2) / 3};
  const std::array<const std::vector<IntVector>*, 3> parts = {&f1, &f2, &f3};
  RationalVector out(static_cast<std::size_t>(g) * g, 0);
  for (int p = 0; p < 3; ++p) {
    auto avg = average(*parts[p]);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += w[p] * avg[d];
  }
  return out;
}

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(const RationalVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

}  // namespace chromdesign::lattice
