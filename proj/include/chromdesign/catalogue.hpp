#pragma once

// On-disk store of verified design documents: <dir>/manifest.json plus one
// document file per entry, each recorded with its SHA-256 digest.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chromdesign/io.hpp"
#include "chromdesign/verify.hpp"

namespace chromdesign::catalogue {

inline constexpr const char* kEnvVar = "CHROMDESIGN_CATALOGUE";

struct Entry {
  std::string name;
  std::string file;
  std::string kind;
  std::size_t v = 0;
  std::optional<std::size_t> k;
  int lambda = 1;
  std::string type;  // group type, gdd/td only
  std::string digest;
};

struct Problem {
  std::string name;
  std::string what;
};

// Runs the verifier named by doc.kind.
Verdict verify_document(const io::DesignDocument& doc);

std::string sha256_hex(const std::string& bytes);

// $CHROMDESIGN_CATALOGUE, else ./catalogue.
std::filesystem::path default_dir();

class Catalogue {
 public:
  explicit Catalogue(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Creates the directory and an empty manifest; existing manifests are kept.
  void init() const;
  // Re-verifies first; InvalidArgument when the document fails or the name is taken.
  Entry add(const std::string& name, const io::DesignDocument& doc) const;
  std::vector<Entry> list() const;  // empty when there is no manifest yet
  std::vector<Problem> check() const;

 private:
  void save(const std::vector<Entry>& entries) const;
  std::filesystem::path dir_;
};

}  // namespace chromdesign::catalogue
