#include "chromdesign/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "chromdesign/catalogue.hpp"
#include "chromdesign/colour.hpp"
#include "chromdesign/compose.hpp"
#include "chromdesign/construct.hpp"
#include "chromdesign/errors.hpp"
#include "chromdesign/io.hpp"
#include "chromdesign/lattice.hpp"
#include "chromdesign/verify.hpp"

namespace chromdesign::cli {

namespace {

namespace fs = std::filesystem;
using io::DesignDocument;

// Ingredient or input that fails its own verifier: exit 2.
struct IngredientError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// Output that fails re-verification: exit 5, nothing written.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& x : split(s)) {
    try {
      std::size_t used = 0;
      int v = std::stoi(x, &used);
      if (used != x.size()) throw std::invalid_argument(x);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("not an integer list: '" + s + "'");
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    io::write_file_atomic(path, text);
}

// Write-after-verify: the kind's verifier must pass before anything is written.
void emit_verified(const DesignDocument& doc, const std::string& path, std::ostream& out) {
  auto v = catalogue::verify_document(doc);
  if (!v.ok) throw IntegrityError("output does not verify as " + doc.kind + ": " + v.witness.value_or(""));
  emit(io::serialize(doc), path, out);
}

DesignDocument load_verified(const std::string& path, const std::string& role) {
  if (path.empty()) throw InvalidArgument("missing " + role + " file");
  DesignDocument doc = io::load_document(path);
  auto v = catalogue::verify_document(doc);
  if (!v.ok) throw IngredientError(role + " " + path + " does not verify as " + doc.kind + ": " + v.witness.value_or(""));
  return doc;
}

BlockingSystem optional_system(const DesignDocument& doc, const Design& d, const std::string& name) {
  if (!name.empty()) return io::system_of(doc, d, name);
  if (doc.blocking_systems.size() == 1) return io::system_of(doc, d, doc.blocking_systems.begin()->first);
  return {};
}

Block special_block_of(const DesignDocument& doc, const Design& d) {
  auto bs = io::system_of(doc, d, "special_block");
  if (bs.sets.size() != 1) throw InvalidArgument("special_block must hold exactly one set");
  return bs.sets[0];
}

std::string fmt(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// ---- construct ---------------------------------------------------------

struct ConstructArgs {
  std::string target;
  int k = 0, p = 0, h = -1, w = 0, lambda = 0;
  std::string name, out;
  bool no_mod4 = false, twisted = false;
};

void add_td_systems(DesignDocument& doc, const TdWithSystems& t) {
  const Design& d = t.td.design();
  io::attach_system(doc, "whole", d, t.whole_system);
  io::attach_system(doc, "punctured", d, t.punctured_system);
  io::attach_system(doc, "special_block", d, BlockingSystem{{t.special_block}});
}

int cmd_construct(const ConstructArgs& a, std::ostream& out) {
  auto need = [](int v, const char* flag) {
    if (v <= 0) throw InvalidArgument(std::string("construct needs ") + flag);
    return v;
  };
  DesignDocument doc;
  if (a.target == "td-lines") {
    int k = need(a.k, "--k"), p = need(a.p, "--p");
    auto t = td_lines(k, p, !a.no_mod4);
    doc = io::make_document(t.td, "td", "td_lines(k=" + std::to_string(k) + ",p=" + std::to_string(p) + ")");
    add_td_systems(doc, t);
  } else if (a.target == "td-4-13") {
    auto t = td_4_13();
    doc = io::make_document(t.td, "td", "td_4_13()");
    add_td_systems(doc, t);
  } else if (a.target == "td-4-p") {
    int p = need(a.p, "--p");
    doc = io::make_document(td_4_p(p), "td", "td_4_p(p=" + std::to_string(p) + ")");
  } else if (a.target == "td-3-3-pair") {
    auto pair = td_3_3_pair();
    BlockingSystem levels{{pair.partition_system.sets.at(1), pair.partition_system.sets.at(2)}};
    if (a.twisted) {
      doc = io::make_document(pair.twisted, "td", "td_3_3_pair().twisted");
      io::attach_system(doc, "punctured", pair.twisted.design(), levels);
      io::attach_system(doc, "special_block", pair.twisted.design(), BlockingSystem{{pair.partition_system.sets.at(0)}});
    } else {
      doc = io::make_document(pair.base, "td", "td_3_3_pair().base");
      io::attach_system(doc, "partition", pair.base.design(), pair.partition_system);
      io::attach_system(doc, "whole", pair.base.design(), levels);
    }
  } else if (a.target == "gdd-h16") {
    if (a.h < 0) throw InvalidArgument("construct gdd-h16 needs --h");
    int lambda = a.lambda > 0 ? a.lambda : (a.h % 2 ? 1 : 2);
    auto g = gdd_h_1_6(a.h, lambda);
    doc = io::make_document(g.gdd, "gdd",
                            "gdd_h_1_6(h=" + std::to_string(a.h) + ",lambda=" + std::to_string(lambda) + ")");
    io::attach_system(doc, "balanced", g.gdd.design(), g.system);
  } else if (a.target == "bibd3") {
    int w = need(a.w, "--w");
    int lambda = a.lambda > 0 ? a.lambda : lambda_min_k3(w);
    auto b = bibd_3_blocked(w, lambda);
    doc = io::make_document(b.design, "bibd",
                            "bibd_3_blocked(w=" + std::to_string(w) + ",lambda=" + std::to_string(lambda) + ")");
    io::attach_system(doc, "blocking", b.design, b.system);
  } else if (a.target == "gdd-4-2") {
    auto g = gdd_4_2_type_2_4();
    doc = io::make_document(g.gdd, "gdd", "gdd_4_2_type_2_4()");
    io::attach_system(doc, "halves", g.gdd.design(), g.system);
  } else if (a.target == "fixture") {
    if (a.name.empty()) throw InvalidArgument("construct fixture needs --name");
    Fixture f;
    try {
      f = fixture(a.name);
    } catch (const NotFound& e) {
      throw InvalidArgument(e.what());
    }
    doc = f.grouped() ? io::make_document(*f.grouped(), f.kind, "fixture(" + a.name + ")")
                      : io::make_document(f.design(), f.kind, "fixture(" + a.name + ")");
    if (f.system) io::attach_system(doc, "blocking", f.design(), *f.system);
  } else {
    throw InvalidArgument("unknown construct target '" + a.target + "'");
  }
  emit_verified(doc, a.out, out);
  return kOk;
}

// ---- verify ------------------------------------------------------------

struct VerifyArgs {
  std::string file, as, system, except, colouring, shape;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  DesignDocument doc = io::load_document(a.file);
  Verdict v;
  if (a.as == "bibd") {
    v = verify_bibd(io::to_design(doc));
  } else if (a.as == "partial-bibd") {
    v = verify_partial_bibd(io::to_design(doc));
  } else if (a.as == "gdd") {
    v = verify_gdd(io::to_grouped(doc));
  } else if (a.as == "td") {
    v = verify_td(io::to_grouped(doc));
  } else if (a.as == "blocking" || a.as == "parity-k4") {
    if (a.system.empty()) throw InvalidArgument("--system is required");
    Design d = io::to_design(doc);
    auto bs = io::system_of(doc, d, a.system);
    if (a.as == "parity-k4") {
      v = check_parity_property_k4(io::to_grouped(doc), bs);
    } else if (!a.except.empty()) {
      auto ex = io::system_of(doc, d, a.except);
      if (ex.sets.size() != 1) throw InvalidArgument("--except names a system holding one block");
      v = verify_blocking_system_except(d, bs, ex.sets[0]);
    } else {
      v = verify_blocking_system(d, bs);
    }
  } else if (a.as == "colouring") {
    if (a.colouring.empty()) throw InvalidArgument("--colouring is required");
    Design d = io::to_design(doc);
    v = verify_colouring(d, io::to_colouring(io::parse_colouring(io::read_file(a.colouring)), d));
  } else if (a.as == "leave-shape") {
    LeaveShape s;
    if (a.shape == "matching")
      s = LeaveShape::perfect_matching;
    else if (a.shape == "k4")
      s = LeaveShape::k4_plus_matching;
    else
      throw InvalidArgument("--shape is matching or k4");
    v = verify_leave_shape(io::to_design(doc), s);
  } else {
    throw InvalidArgument("unknown verifier '" + a.as + "'");
  }
  if (v.ok) {
    out << "ok\n";
    return kOk;
  }
  out << "FAIL: " << v.witness.value_or("") << "\n";
  return kNegative;
}

// ---- colour ------------------------------------------------------------

struct ColourArgs {
  std::string file, out;
  bool exact = false, greedy = false;
  int c = 0;
  std::size_t cap = 64;
  double time_budget = 60.0;
  std::uint64_t node_budget = 0;
};

int cmd_colour(const ColourArgs& a, std::ostream& out) {
  if (a.exact == a.greedy) throw InvalidArgument("pick exactly one of --exact and --greedy");
  Design d = io::to_design(io::load_document(a.file));
  SolverConfig cfg;
  cfg.point_cap = a.cap;
  cfg.time_budget_seconds = a.time_budget;
  cfg.node_budget = a.node_budget;
  auto write = [&](const Colouring& col, const std::string& prov) {
    if (!a.out.empty()) io::write_file_atomic(a.out, io::serialize(io::make_colouring_document(d, col, prov)));
  };
  try {
    if (a.greedy) {
      if (a.c <= 0) {
        int ub = greedy_upper_bound(d);
        out << "greedy upper bound = " << ub << "\n";
        if (auto col = greedy_colouring(d, ub)) write(*col, "greedy_colouring(c=" + std::to_string(ub) + ")");
        return kOk;
      }
      auto col = greedy_colouring(d, a.c);
      if (!col) {
        out << "greedy found no " << a.c << "-colouring\n";
        return kNegative;
      }
      out << "greedy " << a.c << "-colouring found\n";
      write(*col, "greedy_colouring(c=" + std::to_string(a.c) + ")");
      return kOk;
    }
    if (a.c > 0) {
      auto col = find_colouring(d, a.c, cfg);
      if (!col) {
        out << "no " << a.c << "-colouring exists\n";
        return kNegative;
      }
      out << a.c << "-colouring found\n";
      write(*col, "find_colouring(c=" + std::to_string(a.c) + ")");
      return kOk;
    }
    auto cert = exact_chromatic(d, cfg);
    out << "chi = " << cert.chi << "\n";
    write(cert.colouring, "exact_chromatic()");
    return kOk;
  } catch (const ResourceExhausted& e) {
    out << "resource exhausted: " << e.what() << "\n";
    if (e.upper_bound > 0) out << "bounds: " << e.lower_bound << " <= chi <= " << e.upper_bound << "\n";
    return kExhausted;
  }
}

// ---- search-blocking ---------------------------------------------------

struct SearchArgs {
  std::string file, sizes, exclude_block, name = "found", out;
  int quota = -1;
  double budget = 600.0;
  std::uint64_t node_budget = 0;
};

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  DesignDocument doc = io::load_document(a.file);
  Design d = io::to_design(doc);
  GroupedDesign g;
  if (doc.groups) {
    g = io::to_grouped(doc);
  } else {
    if (a.quota >= 0) throw InvalidArgument("--quota needs a document with groups");
    std::vector<std::vector<PointId>> singles;
    for (PointId p = 0; p < d.num_points(); ++p) singles.push_back({p});
    g = GroupedDesign(d, singles);
  }
  BlockingSearchSpec spec;
  spec.sizes = split_ints(a.sizes);
  if (spec.sizes.empty()) throw InvalidArgument("--sizes is required");
  if (a.quota >= 0) spec.quota = uniform_quota(spec.sizes.size(), g.groups().size(), a.quota);
  if (!a.exclude_block.empty()) {
    Block b;
    for (const auto& l : split(a.exclude_block)) {
      auto p = d.find(l);
      if (!p) throw InvalidArgument("unknown label '" + l + "' in --exclude-block");
      b.push_back(*p);
    }
    std::sort(b.begin(), b.end());
    spec.exclude = b;
  }
  SolverConfig cfg;
  cfg.time_budget_seconds = a.budget;
  cfg.node_budget = a.node_budget;
  cfg.point_cap = std::max<std::size_t>(cfg.point_cap, d.num_points());
  std::optional<BlockingSystem> found;
  try {
    found = find_blocking_system_constrained(g, spec, cfg);
  } catch (const ResourceExhausted& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExhausted;
  }
  if (!found) {
    err << "proven absent\n";
    return kNegative;
  }
  auto v = spec.exclude ? verify_blocking_system_except(d, *found, *spec.exclude) : verify_blocking_system(d, *found);
  if (!v.ok) throw IntegrityError("found system does not verify: " + v.witness.value_or(""));
  io::attach_system(doc, a.name, d, *found);
  err << "found system '" << a.name << "'\n";
  emit(io::serialize(doc), a.out, out);
  return kOk;
}

// ---- compose -----------------------------------------------------------

struct ComposeArgs {
  std::string base, filler, filler_system, base_system, halves, out;
  bool infinity = false;
  std::string master, ingredient_system = "halves";
  std::vector<std::string> ingredients;
  int weight = 0;
  std::string outer, outer_system, marked, td, plain_td, column, column_system;
  std::string tail, tail_half1, tail_half2, last_group_of, per_group_system = "halves", last, last_system;
  std::vector<std::string> per_group;
  std::string partial, out_dir;
  int h = -1, lambda = 1;
  bool scan = false;
  std::size_t cap = 64;
};

DesignDocument bibd_document(const DesignWithSystem& r, const std::string& prov) {
  DesignDocument doc = io::make_document(r.design, "bibd", prov);
  if (!r.system.sets.empty()) io::attach_system(doc, "blocking", r.design, r.system);
  return doc;
}

int compose_fill(const ComposeArgs& a, std::ostream& out) {
  auto bdoc = load_verified(a.base, "base");
  auto fdoc = load_verified(a.filler, "filler");
  GroupedDesign base = io::to_grouped(bdoc);
  Design fd = io::to_design(fdoc);
  DesignWithSystem filler{fd, optional_system(fdoc, fd, a.filler_system)};
  DesignWithSystem r;
  std::string prov;
  if (!a.halves.empty()) {
    r = fill_groups_no_infinity(base, filler, io::system_of(bdoc, base.design(), a.halves));
    prov = "fill_groups_no_infinity(base=" + bdoc.provenance + ",filler=" + fdoc.provenance + ")";
  } else {
    std::optional<BlockingSystem> bs;
    if (!a.base_system.empty()) bs = io::system_of(bdoc, base.design(), a.base_system);
    r = fill_groups(uniform_fill(base, filler, a.infinity, bs));
    prov = "fill_groups(base=" + bdoc.provenance + ",filler=" + fdoc.provenance +
           (a.infinity ? ",infinity" : "") + ")";
  }
  emit_verified(bibd_document(r, prov), a.out, out);
  return kOk;
}

int compose_inflate(const ComposeArgs& a, std::ostream& out) {
  auto mdoc = load_verified(a.master, "master");
  GroupedDesign master = io::to_grouped(mdoc);
  std::map<std::size_t, Ingredient> ings;
  std::string prov = "wilson_inflate(master=" + mdoc.provenance + ",weight=" + std::to_string(a.weight);
  for (const auto& f : a.ingredients) {
    auto idoc = load_verified(f, "ingredient");
    GroupedDesign g = io::to_grouped(idoc);
    BlockingSystem halves;
    if (a.weight % 2 == 0) halves = io::system_of(idoc, g.design(), a.ingredient_system);
    ings[g.groups().size()] = Ingredient{g, halves};
    prov += ",ingredient=" + idoc.provenance;
  }
  auto r = wilson_inflate(master, a.weight, ings);
  DesignDocument doc = io::make_document(r.gdd, "gdd", prov + ")");
  if (!r.system.sets.empty()) io::attach_system(doc, "halves", r.gdd.design(), r.system);
  emit_verified(doc, a.out, out);
  return kOk;
}

int compose_product(const ComposeArgs& a, std::ostream& out, std::ostream& err) {
  auto odoc = load_verified(a.outer, "outer");
  auto tdoc = load_verified(a.td, "td");
  auto pdoc = a.plain_td.empty() ? tdoc : load_verified(a.plain_td, "plain td");
  auto cdoc = load_verified(a.column, "column");
  Design outer = io::to_design(odoc);
  BlockingSystem osys = a.outer_system.empty() ? BlockingSystem{} : io::system_of(odoc, outer, a.outer_system);
  std::vector<std::size_t> marked;
  for (int i : split_ints(a.marked)) {
    if (i < 0) throw InvalidArgument("marked block indices are non-negative");
    marked.push_back(static_cast<std::size_t>(i));
  }
  GroupedDesign mtd = io::to_grouped(tdoc), ptd = io::to_grouped(pdoc);
  ProductTds tds;
  tds.plain = {ptd, io::system_of(pdoc, ptd.design(), "whole")};
  if (tdoc.blocking_systems.count("punctured")) {
    tds.marked = {mtd, special_block_of(tdoc, mtd.design()), io::system_of(tdoc, mtd.design(), "punctured")};
  } else if (marked.empty()) {
    tds.marked = {ptd, ptd.design().blocks().front(), tds.plain.system};
  } else {
    throw InvalidArgument("td document has no punctured system for marked blocks");
  }
  Design cd = io::to_design(cdoc);
  DesignWithSystem column{cd, optional_system(cdoc, cd, a.column_system)};
  auto r = product_construction(outer, marked, osys, tds, column);
  err << "embedded copy: " << r.embedded_copy.size() << " block(s) on level 0\n";
  DesignDocument doc = io::make_document(r.design, "bibd",
                                         "product_construction(outer=" + odoc.provenance + ",marked=" + a.marked +
                                             ",td=" + tdoc.provenance + ",column=" + cdoc.provenance + ")");
  io::attach_system(doc, "blocking", r.design, r.system);
  emit_verified(doc, a.out, out);
  return kOk;
}

int compose_common_tail(const ComposeArgs& a, std::ostream& out) {
  auto bdoc = load_verified(a.base, "base");
  GroupedDesign base = io::to_grouped(bdoc);
  const Design& bd = base.design();
  CommonTailSpec spec{base, io::system_of(bdoc, bd, a.halves.empty() ? "halves" : a.halves),
                      split(a.tail), split(a.tail_half1), split(a.tail_half2), std::nullopt, {}, {}};
  if (!a.last_group_of.empty()) {
    auto p = bd.find(a.last_group_of);
    if (!p) throw InvalidArgument("unknown label '" + a.last_group_of + "'");
    spec.last_group = base.group_of()[*p];
  }
  for (const auto& f : a.per_group) {
    auto pdoc = io::load_document(f);
    Design d = io::to_design(pdoc);
    std::optional<std::size_t> gi;
    for (const auto& l : d.points())
      if (auto p = bd.find(l)) gi = base.group_of()[*p];
    if (!gi) throw InvalidArgument(f + " touches no base group");
    spec.per_group[*gi] = DesignWithSystem{d, io::system_of(pdoc, d, a.per_group_system)};
  }
  auto ldoc = load_verified(a.last, "last");
  Design ld = io::to_design(ldoc);
  spec.last = DesignWithSystem{ld, optional_system(ldoc, ld, a.last_system)};
  auto r = common_tail_fill(spec);
  emit_verified(bibd_document(r, "common_tail_fill(base=" + bdoc.provenance + ",tail=" + a.tail + ")"), a.out, out);
  return kOk;
}

int compose_ladder(const ComposeArgs& a, std::ostream& out) {
  auto pdoc = load_verified(a.partial, "partial");
  if (a.h < 0) throw InvalidArgument("--h is required");
  Design partial = io::to_design(pdoc);
  auto r = ladder_k3(partial, a.h, a.lambda);
  const std::string prov = "ladder_k3(partial=" + pdoc.provenance + ",h=" + std::to_string(a.h) +
                           ",lambda=" + std::to_string(a.lambda) + ")";
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < r.chain.size(); ++i) {
    DesignDocument doc = io::make_document(r.chain[i], "bibd", prov + "[" + std::to_string(i) + "]");
    if (i == 0) io::attach_system(doc, "system0", r.chain[0], r.system0);
    auto v = catalogue::verify_document(doc);
    if (!v.ok) throw IntegrityError("chain member " + std::to_string(i) + " does not verify");
    texts.push_back(io::serialize(doc));
  }
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    for (std::size_t i = 0; i < texts.size(); ++i)
      io::write_file_atomic(fs::path(a.out_dir) / ("C" + std::to_string(i) + ".json"), texts[i]);
  }
  const auto v = r.chain.front().num_points();
  out << "chain: " << r.chain.size() << " designs, (" << v << ",3," << a.lambda << ")-BIBDs with "
      << r.chain.front().blocks().size() << " blocks\n";
  for (std::size_t i = 0; i + 1 < r.chain.size(); ++i) {
    auto diff = block_difference(r.chain[i], r.chain[i + 1]);
    const auto& sp = r.swap_points[i];
    bool through = std::all_of(diff.begin(), diff.end(), [&](const Block& b) {
      return std::binary_search(b.begin(), b.end(), sp[0]) || std::binary_search(b.begin(), b.end(), sp[1]);
    });
    out << "step " << i << ": " << diff.size() << " blocks differ, swap points " << r.chain[i].label(sp[0]) << ","
        << r.chain[i].label(sp[1]) << (through ? "" : " (VIOLATED)") << "\n";
  }
  if (a.scan) {
    SolverConfig cfg;
    cfg.point_cap = a.cap;
    auto s = chromatic_step_scan(r.chain, cfg);
    out << "chi:";
    for (int c : s.chi) out << " " << c;
    out << "\n";
    for (std::size_t i = 0; i + 1 < s.chi.size(); ++i)
      out << "step " << i << ": chi " << s.chi[i] << " -> " << s.chi[i + 1]
          << (s.confined[i] ? ", confined" : ", not confined") << "\n";
  }
  return kOk;
}

// ---- lattice -----------------------------------------------------------

struct LatticeArgs {
  std::string what, variant = "two-sided";
  int k = 0, g = 0, l = 0, index = 0;
};

lattice::FamilyVariant variant_of(const std::string& s) {
  if (s == "two-sided") return lattice::FamilyVariant::two_sided;
  if (s == "one-three") return lattice::FamilyVariant::one_three;
  throw InvalidArgument("--variant is two-sided or one-three");
}

int cmd_lattice(const LatticeArgs& a, std::ostream& out) {
  using namespace lattice;
  auto family = [&]() -> std::vector<FVector> {
    if (a.k < 2) throw InvalidArgument("--k must be at least 2");
    if (a.g == 0) return {{a.k}};
    return enumerate_family(a.k, a.g, variant_of(a.variant));
  };
  if (a.what == "alpha" || a.what == "beta") {
    auto fam = family();
    const std::size_t g = fam.front().size();
    auto vecs = a.what == "alpha" ? tau_family(fam) : mu_family(fam);
    auto m = minimal_uniform_scalar(vecs, (a.what == "alpha" ? 2 : 1) * g * g);
    out << a.what << " = " << (m ? m->str() : std::string("none")) << "\n";
    return kOk;
  }
  if (a.what == "allowable") {
    auto fam = family();
    auto c = allowability_check(mu_family(fam));
    if (!c) {
      out << "infeasible\n";
      return kNegative;
    }
    out << "feasible\n";
    for (std::size_t i = 0; i < fam.size(); ++i) out << fmt(fam[i]) << " " << to_string((*c)[i]) << "\n";
    return kOk;
  }
  if (a.what == "typevec") {
    if (a.index < 1 || a.index > 5) throw InvalidArgument("--index is 1..5");
    auto fam = odd_large_subfamily(a.k, a.l, a.index);
    auto closed = odd_large_closed_form(a.k, a.l, a.index);
    auto enumerated = type_vector_of(average(mu_family(fam)), 2 * a.l + 1);
    out << "closed form: " << to_string(closed) << "\n";
    out << "enumerated:  " << to_string(enumerated) << "\n";
    out << "agree: " << (closed == enumerated ? "yes" : "no") << "\n";
    return closed == enumerated ? kOk : kNegative;
  }
  if (a.what == "delta") {
    auto r = check_delta_positivity(a.k, a.l);
    out << "delta1 = " << to_string(r.delta1) << "\n";
    out << "delta2 = " << to_string(r.delta2) << "\n";
    out << "positive: " << (r.both_positive ? "yes" : "no") << "\n";
    out << "enumeration agrees: " << (r.enumeration_agrees ? "yes" : "no") << "\n";
    return r.both_positive && r.enumeration_agrees ? kOk : kNegative;
  }
  if (a.what == "k4") {
    auto v = k4_combination(a.g);
    bool ones = std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 1; });
    out << "combination = " << (ones ? "all ones (" + std::to_string(v.size()) + " entries)" : to_string(v)) << "\n";
    return ones ? kOk : kNegative;
  }
  throw InvalidArgument("unknown lattice report '" + a.what + "'");
}

// ---- catalogue ---------------------------------------------------------

struct CatalogueArgs {
  std::string action, dir, file, name;
};

int cmd_catalogue(const CatalogueArgs& a, std::ostream& out) {
  catalogue::Catalogue cat(a.dir.empty() ? catalogue::default_dir() : fs::path(a.dir));
  if (a.action == "init") {
    cat.init();
    out << "initialised\n";
    return kOk;
  }
  if (a.action == "add") {
    if (a.file.empty() || a.name.empty()) throw InvalidArgument("catalogue add needs FILE and --name");
    cat.init();
    auto e = cat.add(a.name, io::load_document(a.file));
    out << "added " << e.name << " " << e.digest << "\n";
    return kOk;
  }
  if (a.action == "list") {
    out << "name\tkind\tv\tk\tlambda\ttype\tdigest\n";
    for (const auto& e : cat.list())
      out << e.name << "\t" << e.kind << "\t" << e.v << "\t" << (e.k ? std::to_string(*e.k) : "-") << "\t"
          << e.lambda << "\t" << (e.type.empty() ? "-" : e.type) << "\t" << e.digest.substr(0, 16) << "\n";
    return kOk;
  }
  if (a.action == "check") {
    auto entries = cat.list();
    auto problems = cat.check();
    for (const auto& p : problems) out << "entry " << p.name << ": " << p.what << "\n";
    if (!problems.empty()) return kIntegrity;
    out << "all " << entries.size() << " entries verify\n";
    return kOk;
  }
  throw InvalidArgument("unknown catalogue action '" + a.action + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block designs, weak colourings and blocking systems", "chromdesign"};
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a design and write it as JSON");
  construct->add_option("target", ca.target, "td-lines, td-4-13, td-4-p, td-3-3-pair, gdd-h16, bibd3, gdd-4-2, fixture")
      ->required();
  construct->add_option("--k", ca.k);
  construct->add_option("--p", ca.p);
  construct->add_option("--h", ca.h);
  construct->add_option("--w", ca.w);
  construct->add_option("--lambda", ca.lambda);
  construct->add_option("--name", ca.name, "fixture name");
  construct->add_flag("--no-mod4", ca.no_mod4, "allow p = 3 (mod 4) in td-lines");
  construct->add_flag("--twisted", ca.twisted, "td-3-3-pair: emit the twisted design");
  construct->add_option("-o,--output", ca.out);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a verifier on a document");
  verify->add_option("file", va.file)->required();
  verify->add_option("--as", va.as, "bibd, partial-bibd, gdd, td, blocking, parity-k4, colouring, leave-shape")
      ->required();
  verify->add_option("--system", va.system);
  verify->add_option("--except", va.except, "system holding a block to ignore");
  verify->add_option("--colouring", va.colouring);
  verify->add_option("--shape", va.shape, "matching or k4");

  ColourArgs co;
  auto* colour = app.add_subcommand("colour", "Weak colouring: exact chi or greedy");
  colour->add_option("file", co.file)->required();
  colour->add_flag("--exact", co.exact);
  colour->add_flag("--greedy", co.greedy);
  colour->add_option("--c", co.c);
  colour->add_option("--cap", co.cap);
  colour->add_option("--time-budget", co.time_budget);
  colour->add_option("--node-budget", co.node_budget);
  colour->add_option("-o,--output", co.out, "colouring document");

  SearchArgs sa;
  auto* search = app.add_subcommand("search-blocking", "Search for a blocking system");
  search->add_option("file", sa.file)->required();
  search->add_option("--sizes", sa.sizes)->required();
  search->add_option("--quota", sa.quota, "per-group intersection size");
  search->add_option("--exclude-block", sa.exclude_block, "comma-separated labels");
  search->add_option("--budget", sa.budget, "seconds");
  search->add_option("--node-budget", sa.node_budget);
  search->add_option("--name", sa.name, "system name in the output");
  search->add_option("-o,--output", sa.out);

  ComposeArgs cp;
  auto* compose = app.add_subcommand("compose", "Recursive constructions on ingredient files");
  compose->require_subcommand(1);
  auto* fill = compose->add_subcommand("fill", "Fill the groups of a GDD");
  fill->add_option("--base", cp.base)->required();
  fill->add_option("--filler", cp.filler)->required();
  fill->add_option("--filler-system", cp.filler_system);
  fill->add_option("--base-system", cp.base_system);
  fill->add_option("--halves", cp.halves, "base system of group halves: fill without infinity");
  fill->add_flag("--infinity", cp.infinity);
  fill->add_option("-o,--output", cp.out);
  auto* inflate = compose->add_subcommand("inflate", "Weight inflation of a GDD");
  inflate->add_option("--master", cp.master)->required();
  inflate->add_option("--weight", cp.weight)->required();
  inflate->add_option("--ingredient", cp.ingredients)->required();
  inflate->add_option("--ingredient-system", cp.ingredient_system);
  inflate->add_option("-o,--output", cp.out);
  auto* product = compose->add_subcommand("product", "Y x Z product construction");
  product->add_option("--outer", cp.outer)->required();
  product->add_option("--outer-system", cp.outer_system);
  product->add_option("--marked", cp.marked, "comma-separated outer block indices");
  product->add_option("--td", cp.td)->required();
  product->add_option("--plain-td", cp.plain_td);
  product->add_option("--column", cp.column)->required();
  product->add_option("--column-system", cp.column_system);
  product->add_option("-o,--output", cp.out);
  auto* tail = compose->add_subcommand("common-tail", "Fill groups sharing a common tail");
  tail->add_option("--base", cp.base)->required();
  tail->add_option("--halves", cp.halves);
  tail->add_option("--tail", cp.tail, "comma-separated new labels")->required();
  tail->add_option("--tail-half1", cp.tail_half1);
  tail->add_option("--tail-half2", cp.tail_half2);
  tail->add_option("--last-group-of", cp.last_group_of, "a label in the last group");
  tail->add_option("--per-group", cp.per_group);
  tail->add_option("--per-group-system", cp.per_group_system);
  tail->add_option("--last", cp.last)->required();
  tail->add_option("--last-system", cp.last_system);
  tail->add_option("-o,--output", cp.out);
  auto* ladder = compose->add_subcommand("ladder", "Chain of k=3 designs from a partial design");
  ladder->add_option("--partial", cp.partial)->required();
  ladder->add_option("--h", cp.h)->required();
  ladder->add_option("--lambda", cp.lambda);
  ladder->add_flag("--scan", cp.scan, "exact chi of every member");
  ladder->add_option("--cap", cp.cap);
  ladder->add_option("--out-dir", cp.out_dir);

  LatticeArgs la;
  auto* lat = app.add_subcommand("lattice", "Exact lattice and LP reports");
  lat->add_option("what", la.what, "alpha, beta, allowable, typevec, delta, k4")->required();
  lat->add_option("--k", la.k);
  lat->add_option("--g", la.g);
  lat->add_option("--l", la.l);
  lat->add_option("--index", la.index);
  lat->add_option("--variant", la.variant, "two-sided or one-three");

  CatalogueArgs cat;
  auto* catcmd = app.add_subcommand("catalogue", "Store of verified designs");
  catcmd->add_option("action", cat.action, "init, add, list, check")->required();
  catcmd->add_option("file", cat.file);
  catcmd->add_option("--name", cat.name);
  catcmd->add_option("--dir", cat.dir, std::string("default $") + catalogue::kEnvVar + " or ./catalogue");

  std::vector<std::string> argv_store{"chromdesign"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (construct->parsed()) return cmd_construct(ca, out);
    if (verify->parsed()) return cmd_verify(va, out);
    if (colour->parsed()) return cmd_colour(co, out);
    if (search->parsed()) return cmd_search(sa, out, err);
    if (fill->parsed()) return compose_fill(cp, out);
    if (inflate->parsed()) return compose_inflate(cp, out);
    if (product->parsed()) return compose_product(cp, out, err);
    if (tail->parsed()) return compose_common_tail(cp, out);
    if (ladder->parsed()) return compose_ladder(cp, out);
    if (lat->parsed()) return cmd_lattice(la, out);
    if (catcmd->parsed()) return cmd_catalogue(cat, out);
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const IntegrityError& e) {
    err << "integrity failure: " << e.what() << "\n";
    return kIntegrity;
  } catch (const ResourceExhausted& e) {
    err << "resource exhausted: " << e.what() << "\n";
    return kExhausted;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  } catch (const UnsupportedSize& e) {
    err << "unsupported size: " << e.what() << "\n";
    return kInvalid;
  } catch (const ShapeViolation& e) {
    err << "shape violation: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionViolation& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kIntegrity;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kIntegrity;
  }
  return kInvalid;
}

}  // namespace chromdesign::cli
