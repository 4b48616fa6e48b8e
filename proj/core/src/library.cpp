#include "stiso/library.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace stiso {

using nlohmann::json;

LibraryFile lib_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LibraryError("cannot open library file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw LibraryError("malformed JSON in '" + path + "': " + e.what());
  }
  if (!j.is_array())
    throw LibraryError("library file must be a JSON array of records");
  LibraryFile lib;
  std::set<std::string> names;
  for (const json& r : j) {
    if (!r.is_object() || !r.contains("name") || !r.contains("type") ||
        !r["name"].is_string() || !r["type"].is_string())
      throw LibraryError("each record needs string fields \"name\" and \"type\"");
    ComponentRecord rec;
    rec.name = r["name"].get<std::string>();
    rec.type_text = r["type"].get<std::string>();
    if (r.contains("description")) {
      if (!r["description"].is_string())
        throw LibraryError("\"description\" must be a string");
      rec.description = r["description"].get<std::string>();
    }
    if (!names.insert(rec.name).second)
      throw LibraryError("duplicate component name '" + rec.name + "'");
    try {
      parse_type(rec.type_text);
    } catch (const ParseError& e) {
      throw LibraryError("record '" + rec.name + "' has an unparseable type: " +
                         e.what());
    }
    lib.records.push_back(std::move(rec));
  }
  return lib;
}

void lib_save(const LibraryFile& lib, const std::string& path) {
  json j = json::array();
  for (const ComponentRecord& r : lib.records) {
    json o{{"name", r.name}, {"type", r.type_text}};
    if (r.description) o["description"] = *r.description;
    j.push_back(std::move(o));
  }
  std::ofstream out(path);
  if (!out) throw LibraryError("cannot write library file '" + path + "'");
  out << j.dump(2) << "\n";
}

std::vector<SearchHit> search_by_iso(const LibraryFile& lib, const TypePtr& query) {
  std::vector<SearchHit> exact, adapted;
  for (const ComponentRecord& r : lib.records) {
    TypePtr t = parse_type(r.type_text);
    if (type_equal(t, query)) {
      exact.push_back({r, {id_process(query), id_process(query), t, query}, true});
      continue;
    }
    if (auto pair = synthesize(t, query))
      adapted.push_back({r, *pair, false});
  }
  exact.insert(exact.end(), adapted.begin(), adapted.end());
  return exact;
}

}  // namespace stiso
