#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "stiso/library.hpp"
#include "stiso/symbolic.hpp"

using namespace stiso;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int n = 0;
    path = "lib_test_" + std::to_string(n++) + ".json";
    std::ofstream(path) << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("save and load round-trip") {
  LibraryFile lib;
  lib.records.push_back({"sendIB", "!int.!bool.end", std::string("send pair")});
  lib.records.push_back({"unitSrc", "!unit.end", std::nullopt});
  TempFile f("[]");
  lib_save(lib, f.path);
  LibraryFile back = lib_load(f.path);
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].name == "sendIB");
  CHECK(back.records[0].type_text == "!int.!bool.end");
  CHECK(back.records[0].description == std::string("send pair"));
  CHECK_FALSE(back.records[1].description.has_value());
}

TEST_CASE("load rejects malformed libraries") {
  {
    TempFile f("{ not json");
    CHECK_THROWS_AS(lib_load(f.path), LibraryError);
  }
  {
    TempFile f(R"({"name":"x","type":"end"})");  // object, not array
    CHECK_THROWS_AS(lib_load(f.path), LibraryError);
  }
  {
    TempFile f(R"([{"name":"a","type":"end"},{"name":"a","type":"end"}])");
    CHECK_THROWS_AS(lib_load(f.path), LibraryError);
  }
  {
    TempFile f(R"([{"name":"a","type":"!int"}])");  // unparseable type
    CHECK_THROWS_AS(lib_load(f.path), LibraryError);
  }
  {
    TempFile f(R"([{"type":"end"}])");  // missing name
    CHECK_THROWS_AS(lib_load(f.path), LibraryError);
  }
  CHECK_THROWS_AS(lib_load("no_such_file.json"), LibraryError);
}

TEST_CASE("search up to isomorphism") {
  LibraryFile lib;
  lib.records.push_back({"sendIB", "!int.!bool.end", std::nullopt});
  lib.records.push_back({"recvI", "?int.end", std::nullopt});
  lib.records.push_back({"unitSrc", "!unit.end", std::nullopt});

  auto hits = search_by_iso(lib, parse_type("!bool.!int.end"));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].record.name == "sendIB");
  CHECK_FALSE(hits[0].exact);
  CHECK(certify_iso_witnesses(parse_type("!int.!bool.end"),
                              parse_type("!bool.!int.end"),
                              hits[0].adapters.forward,
                              hits[0].adapters.backward, 20000)
            .ok);

  hits = search_by_iso(lib, parse_type("end"));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].record.name == "unitSrc");

  hits = search_by_iso(lib, parse_type("?int.end"));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].exact);

  CHECK(search_by_iso(LibraryFile{}, parse_type("end")).empty());
  CHECK(search_by_iso(lib, parse_type("?bool.?bool.end")).empty());
}
