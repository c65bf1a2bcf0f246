#include "chromdesign/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "chromdesign/errors.hpp"

namespace chromdesign::io {

using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> labels_of_sets(const Design& d, const std::vector<std::vector<PointId>>& sets) {
  LabelSets out;
  for (const auto& s : sets) out.push_back(d.labels_of(s));
  return out;
}

std::vector<std::vector<PointId>> ids_of_sets(const Design& d, const LabelSets& sets, const std::string& what) {
  std::vector<std::vector<PointId>> out;
  for (const auto& s : sets) {
    std::vector<PointId> ids;
    for (const auto& l : s) {
      auto p = d.find(l);
      if (!p) throw InvalidArgument(what + " uses unknown label '" + l + "'");
      ids.push_back(*p);
    }
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  return out;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("bad field '") + key + "': " + e.what());
  }
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

DesignDocument make_document(const Design& d, std::string kind, std::string provenance) {
  DesignDocument doc;
  doc.kind = std::move(kind);
  doc.lambda = d.lambda();
  doc.points = d.points();
  doc.blocks = labels_of_sets(d, d.blocks());
  doc.provenance = std::move(provenance);
  return canonical(doc);
}

DesignDocument make_document(const GroupedDesign& g, std::string kind, std::string provenance) {
  DesignDocument doc = make_document(g.design(), std::move(kind), std::move(provenance));
  doc.groups = labels_of_sets(g.design(), g.groups());
  return canonical(doc);
}

void attach_system(DesignDocument& doc, const std::string& name, const Design& d, const BlockingSystem& bs) {
  doc.blocking_systems[name] = labels_of_sets(d, bs.sets);
  doc = canonical(doc);
}

DesignDocument canonical(const DesignDocument& doc) {
  DesignDocument out = doc;
  std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) { return label_less(a, b); });
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < out.points.size(); ++i) pos.emplace(out.points[i], i);
  auto rank = [&](const std::string& l) {
    auto it = pos.find(l);
    return it == pos.end() ? out.points.size() : it->second;
  };
  auto sort_set = [&](std::vector<std::string>& s) {
    std::sort(s.begin(), s.end(), [&](const auto& a, const auto& b) {
      auto ra = rank(a), rb = rank(b);
      return ra != rb ? ra < rb : a < b;
    });
  };
  auto sort_sets = [&](LabelSets& sets) {
    for (auto& s : sets) sort_set(s);
    std::sort(sets.begin(), sets.end(), [&](const auto& a, const auto& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&](const auto& x, const auto& y) {
        auto rx = rank(x), ry = rank(y);
        return rx != ry ? rx < ry : x < y;
      });
    });
  };
  sort_sets(out.blocks);
  if (out.groups) sort_sets(*out.groups);
  // Set order inside a system carries meaning, only the sets are sorted.
  for (auto& [name, sets] : out.blocking_systems)
    for (auto& s : sets) sort_set(s);
  return out;
}

Design to_design(const DesignDocument& doc) {
  if (doc.lambda < 1) throw InvalidArgument("lambda must be positive");
  return Design::from_labels(doc.points, doc.blocks, doc.lambda);
}

GroupedDesign to_grouped(const DesignDocument& doc) {
  if (!doc.groups) throw InvalidArgument("document has no groups");
  Design d = to_design(doc);
  auto groups = ids_of_sets(d, *doc.groups, "group");
  return GroupedDesign(std::move(d), std::move(groups));
}

BlockingSystem system_of(const DesignDocument& doc, const Design& d, const std::string& name) {
  auto it = doc.blocking_systems.find(name);
  if (it == doc.blocking_systems.end()) throw InvalidArgument("document has no blocking system '" + name + "'");
  BlockingSystem bs{ids_of_sets(d, it->second, "blocking system '" + name + "'")};
  check_system_shape(d, bs);
  return bs;
}

std::string serialize(const DesignDocument& in) {
  DesignDocument doc = canonical(in);
  json j;
  j["format_version"] = doc.format_version;
  j["kind"] = doc.kind;
  j["lambda"] = doc.lambda;
  j["points"] = doc.points;
  if (doc.groups) j["groups"] = *doc.groups;
  j["blocks"] = doc.blocks;
  if (!doc.blocking_systems.empty()) j["blocking_systems"] = doc.blocking_systems;
  j["provenance"] = doc.provenance;
  return j.dump(2) + "\n";
}

DesignDocument parse_document(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) throw IoError("document must be a JSON object");
  DesignDocument doc;
  doc.format_version = field<int>(j, "format_version");
  if (doc.format_version != 1) throw IoError("unsupported format_version " + std::to_string(doc.format_version));
  doc.kind = field<std::string>(j, "kind");
  static const std::vector<std::string> kinds{"bibd", "partial_bibd", "gdd", "td"};
  if (std::find(kinds.begin(), kinds.end(), doc.kind) == kinds.end()) throw IoError("unknown kind '" + doc.kind + "'");
  doc.lambda = field<int>(j, "lambda");
  doc.points = field<std::vector<std::string>>(j, "points");
  if (j.contains("groups")) doc.groups = field<LabelSets>(j, "groups");
  doc.blocks = field<LabelSets>(j, "blocks");
  if (j.contains("blocking_systems"))
    doc.blocking_systems = field<std::map<std::string, LabelSets>>(j, "blocking_systems");
  if (j.contains("provenance")) doc.provenance = field<std::string>(j, "provenance");
  return doc;
}

ColouringDocument make_colouring_document(const Design& d, const Colouring& col, std::string provenance) {
  ColouringDocument doc;
  doc.num_colours = col.num_colours;
  doc.classes.resize(static_cast<std::size_t>(col.num_colours));
  // colours are 1..num_colours, class c-1 holds colour c
  for (auto p : canonical_order(d)) doc.classes.at(static_cast<std::size_t>(col.colour.at(p) - 1)).push_back(d.label(p));
  doc.provenance = std::move(provenance);
  return doc;
}

Colouring to_colouring(const ColouringDocument& doc, const Design& d) {
  Colouring col;
  col.num_colours = doc.num_colours;
  col.colour.assign(d.num_points(), 0);
  if (doc.classes.size() != static_cast<std::size_t>(doc.num_colours))
    throw InvalidArgument("colouring has " + std::to_string(doc.classes.size()) + " classes for " +
                          std::to_string(doc.num_colours) + " colours");
  for (std::size_t c = 0; c < doc.classes.size(); ++c)
    for (const auto& l : doc.classes[c]) {
      auto p = d.find(l);
      if (!p) throw InvalidArgument("colouring uses unknown label '" + l + "'");
      if (col.colour[*p] != 0) throw InvalidArgument("point '" + l + "' coloured twice");
      col.colour[*p] = static_cast<int>(c) + 1;
    }
  for (PointId p = 0; p < d.num_points(); ++p)
    if (col.colour[p] == 0) throw InvalidArgument("point '" + d.label(p) + "' is uncoloured");
  return col;
}

std::string serialize(const ColouringDocument& doc) {
  json j;
  j["format_version"] = doc.format_version;
  j["kind"] = "colouring";
  j["num_colours"] = doc.num_colours;
  j["classes"] = doc.classes;
  j["provenance"] = doc.provenance;
  return j.dump(2) + "\n";
}

ColouringDocument parse_colouring(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) throw IoError("colouring must be a JSON object");
  if (field<std::string>(j, "kind") != "colouring") throw IoError("not a colouring document");
  ColouringDocument doc;
  doc.format_version = field<int>(j, "format_version");
  doc.num_colours = field<int>(j, "num_colours");
  doc.classes = field<LabelSets>(j, "classes");
  if (j.contains("provenance")) doc.provenance = field<std::string>(j, "provenance");
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

DesignDocument load_document(const std::filesystem::path& path) { return parse_document(read_file(path)); }

}  // namespace chromdesign::io
