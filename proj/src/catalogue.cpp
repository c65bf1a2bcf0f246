#include "chromdesign/catalogue.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "chromdesign/errors.hpp"

namespace chromdesign::catalogue {

using nlohmann::json;

Verdict verify_document(const io::DesignDocument& doc) {
  if (doc.kind == "bibd") return verify_bibd(io::to_design(doc));
  if (doc.kind == "partial_bibd") return verify_partial_bibd(io::to_design(doc));
  if (doc.kind == "gdd") return verify_gdd(io::to_grouped(doc));
  if (doc.kind == "td") return verify_td(io::to_grouped(doc));
  throw InvalidArgument("unknown kind '" + doc.kind + "'");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

std::filesystem::path default_dir() {
  const char* env = std::getenv(kEnvVar);
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("catalogue");
}

namespace {

json to_json(const Entry& e) {
  json p{{"v", e.v}, {"lambda", e.lambda}};
  if (e.k) p["k"] = *e.k;
  if (!e.type.empty()) p["type"] = e.type;
  return {{"name", e.name}, {"file", e.file}, {"kind", e.kind}, {"parameters", p}, {"digest", e.digest}};
}

Entry from_json(const json& j) {
  try {
    Entry e;
    e.name = j.at("name").get<std::string>();
    e.file = j.at("file").get<std::string>();
    e.kind = j.at("kind").get<std::string>();
    const auto& p = j.at("parameters");
    e.v = p.at("v").get<std::size_t>();
    e.lambda = p.at("lambda").get<int>();
    if (p.contains("k")) e.k = p.at("k").get<std::size_t>();
    if (p.contains("type")) e.type = p.at("type").get<std::string>();
    e.digest = j.at("digest").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    throw io::IoError(std::string("bad manifest entry: ") + ex.what());
  }
}

bool valid_name(const std::string& n) {
  return !n.empty() && std::all_of(n.begin(), n.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }) && n[0] != '.';
}

}  // namespace

void Catalogue::init() const {
  std::filesystem::create_directories(dir_);
  if (!std::filesystem::exists(dir_ / "manifest.json")) save({});
}

void Catalogue::save(const std::vector<Entry>& entries) const {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(to_json(e));
  json j{{"format_version", 1}, {"entries", arr}};
  io::write_file_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
}

std::vector<Entry> Catalogue::list() const {
  auto path = dir_ / "manifest.json";
  if (!std::filesystem::exists(path)) return {};
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw io::IoError(std::string("malformed manifest: ") + e.what());
  }
  std::vector<Entry> out;
  if (!j.contains("entries") || !j["entries"].is_array()) throw io::IoError("manifest has no entries array");
  for (const auto& e : j["entries"]) out.push_back(from_json(e));
  return out;
}

Entry Catalogue::add(const std::string& name, const io::DesignDocument& doc) const {
  if (!valid_name(name)) throw InvalidArgument("entry names use letters, digits, '_', '-' and '.'");
  auto entries = list();
  if (std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.name == name; }))
    throw InvalidArgument("catalogue already has an entry '" + name + "'");
  auto v = verify_document(doc);
  if (!v.ok) throw InvalidArgument("document does not verify as " + doc.kind + ": " + v.witness.value_or(""));

  Entry e;
  e.name = name;
  e.file = name + ".json";
  e.kind = doc.kind;
  e.v = doc.points.size();
  e.lambda = doc.lambda;
  Design d = io::to_design(doc);
  e.k = d.block_size();
  if (doc.groups) e.type = to_string(group_type(io::to_grouped(doc)));
  std::string text = io::serialize(doc);
  e.digest = sha256_hex(text);
  io::write_file_atomic(dir_ / e.file, text);
  entries.push_back(e);
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  save(entries);
  return e;
}

std::vector<Problem> Catalogue::check() const {
  std::vector<Problem> out;
  for (const auto& e : list()) {
    std::string text;
    try {
      text = io::read_file(dir_ / e.file);
    } catch (const io::IoError& ex) {
      out.push_back({e.name, ex.what()});
      continue;
    }
    if (sha256_hex(text) != e.digest) {
      out.push_back({e.name, "digest mismatch"});
      continue;
    }
    try {
      auto v = verify_document(io::parse_document(text));
      if (!v.ok) out.push_back({e.name, "no longer verifies: " + v.witness.value_or("")});
    } catch (const std::exception& ex) {
      out.push_back({e.name, ex.what()});
    }
  }
  return out;
}

}  // namespace chromdesign::catalogue
