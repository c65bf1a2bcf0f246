#pragma once

// JSON documents for designs and colourings. Output is canonical: sorted
// keys, points and blocks in canonical label order, two-space indent.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chromdesign/core.hpp"

namespace chromdesign::io {

// Unreadable file or malformed document.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LabelSets = std::vector<std::vector<std::string>>;

struct DesignDocument {
  int format_version = 1;
  std::string kind;  // bibd, partial_bibd, gdd, td
  int lambda = 1;
  std::vector<std::string> points;
  std::optional<LabelSets> groups;
  LabelSets blocks;
  std::map<std::string, LabelSets> blocking_systems;
  std::string provenance;

  friend bool operator==(const DesignDocument&, const DesignDocument&) = default;
};

struct ColouringDocument {
  int format_version = 1;
  int num_colours = 0;
  LabelSets classes;  // colour c (from 1) = classes[c-1]
  std::string provenance;
};

DesignDocument make_document(const Design& d, std::string kind, std::string provenance);
DesignDocument make_document(const GroupedDesign& g, std::string kind, std::string provenance);
void attach_system(DesignDocument& doc, const std::string& name, const Design& d, const BlockingSystem& bs);

// Sorted labels everywhere; idempotent.
DesignDocument canonical(const DesignDocument& doc);

// Labels in blocks, groups and systems must be points; InvalidArgument otherwise.
Design to_design(const DesignDocument& doc);
GroupedDesign to_grouped(const DesignDocument& doc);  // needs groups
BlockingSystem system_of(const DesignDocument& doc, const Design& d, const std::string& name);

std::string serialize(const DesignDocument& doc);
DesignDocument parse_document(const std::string& text);

ColouringDocument make_colouring_document(const Design& d, const Colouring& col, std::string provenance);
Colouring to_colouring(const ColouringDocument& doc, const Design& d);
std::string serialize(const ColouringDocument& doc);
ColouringDocument parse_colouring(const std::string& text);

std::string read_file(const std::filesystem::path& path);
// Temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

DesignDocument load_document(const std::filesystem::path& path);

}  // namespace chromdesign::io
