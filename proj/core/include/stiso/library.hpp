#pragma once

// Persistent component library: a flat JSON array of named session types,
// searchable up to type isomorphism.

#include <optional>
#include <string>
#include <vector>

#include "stiso/iso.hpp"

namespace stiso {

struct ComponentRecord {
  std::string name;
  std::string type_text;
  std::optional<std::string> description;
};

struct LibraryFile {
  std::vector<ComponentRecord> records;
};

struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validates JSON shape, that every type parses, and name uniqueness.
LibraryFile lib_load(const std::string& path);
void lib_save(const LibraryFile& lib, const std::string& path);

struct SearchHit {
  ComponentRecord record;
  AdapterPair adapters;  // component's type -> query type
  bool exact;            // syntactically the query type
};

// All records isomorphic to the query; exact matches first, with identity
// adapters.
std::vector<SearchHit> search_by_iso(const LibraryFile& lib, const TypePtr& query);

}  // namespace stiso
