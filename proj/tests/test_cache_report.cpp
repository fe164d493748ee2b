#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppower/cache.hpp"
#include "ppower/commands.hpp"
#include "ppower/gf.hpp"

using namespace ppower;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ppower_test_" + name)).string();
}

}  // namespace

TEST_CASE("decimal round trip") {
  const BigInt big = big_pow(3, 200) + 7;
  CHECK(parse_decimal(to_decimal(big)) == big);
  CHECK_THROWS_AS(parse_decimal("12a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_decimal(""), std::invalid_argument);
  CHECK(Ratio::reduced(52, 64).to_string() == "13/16");
}

TEST_CASE("cache documents round trip and stay sorted") {
  CensusCache cache;
  cache.store({7, 2, 2, 13344, {0, 1}, "brute"});
  cache.store({5, 2, 2, 52, {0, 1}, "brute"});
  cache.store({5, 4, 2, 3376, {1, 1, 1}, "brute"});
  cache.store({5, 2, 2, 52, {0, 1}, "brute"});
  REQUIRE(cache.entries().size() == 3);
  CHECK(cache.entries().front().n == 5);
  CHECK(cache.entries().front().q == 2);

  const CensusCache back = CensusCache::parse(cache.dump());
  CHECK(back.dump() == cache.dump());
  REQUIRE(back.find(5, 4, 2));
  CHECK(back.find(5, 4, 2)->count == 3376);
  CHECK_FALSE(back.find(6, 3, 3));
  CHECK(cache.dump().find("\"count\": \"13344\"") != std::string::npos);
}

TEST_CASE("malformed caches are rejected") {
  CHECK_THROWS_AS(CensusCache::parse("not json"), std::runtime_error);
  CHECK_THROWS_AS(CensusCache::parse(R"({"version":2,"entries":[]})"), std::runtime_error);
  CHECK_THROWS_AS(CensusCache::parse(R"({"version":1,"entries":[{"n":5}]})"), std::runtime_error);
  CHECK(CensusCache::load(temp_path("does_not_exist.json")).entries().empty());
}

TEST_CASE("pruning drops stale moduli") {
  CensusCache cache;
  cache.store({5, 4, 2, 3376, {1, 1, 1}, "brute"});
  cache.store({5, 8, 2, 1, {1, 1, 1, 1}, "brute"});
  CHECK(cache.prune() == 1);
  CHECK(cache.entries().size() == 1);
  CHECK(cache.prune(true) == 1);
  CHECK(cache.entries().empty());
}

TEST_CASE("bitmap dumps round trip") {
  const PowerImage image = power_image_parallel(FieldTable::of_order(2), 6, 2);
  std::stringstream buffer;
  write_bitmap_dump(buffer, image);
  const std::string bytes = buffer.str();
  CHECK(bytes.substr(0, 4) == "PPWB");
  CHECK(bytes.size() == 16 + (1024 + 7) / 8);
  const BitmapDump back = read_bitmap_dump(buffer);
  CHECK(back.n == 6);
  CHECK(back.q == 2);
  CHECK(back.p == 2);
  CHECK(back.bits == image.members);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_bitmap_dump(bad), std::runtime_error);
}

TEST_CASE("u-image report with cache hits") {
  const std::string path = temp_path("cache_report.json");
  std::remove(path.c_str());
  RunContext ctx;
  ctx.cache_path = path;
  const RunReport first = cmd_u_image({5, 2, 0, std::nullopt}, ctx);
  CHECK(first.results["count"] == "52");
  CHECK(first.results["ratio"]["num"] == "13");
  CHECK(first.results["ratio"]["den"] == "16");
  CHECK(first.results["ratio"]["decimal"] == "0.812500");
  CHECK(first.cache_hits == 0);
  const RunReport second = cmd_u_image({5, 2, 0, std::nullopt}, ctx);
  CHECK(second.cache_hits == 1);
  CHECK(second.results["count"] == "52");
  CHECK(u_image_csv(second) == "n,q,p,m,count,domain_size,ratio_num,ratio_den,method\n5,2,2,2,52,64,13,16,cache\n");
  std::remove(path.c_str());
}

TEST_CASE("reports are identical across shard counts") {
  std::string reference;
  for (unsigned shards : {1U, 2U, 8U}) {
    RunContext ctx;
    ctx.census.shards = shards;
    const std::string text = cmd_u_image({6, 2, 0, std::nullopt}, ctx).canonical_json();
    if (reference.empty()) reference = text;
    CHECK(text == reference);
  }
  CHECK(reference.find("elapsed") == std::string::npos);
}

TEST_CASE("slow gate and errors") {
  RunContext ctx;
  CHECK_THROWS_AS(cmd_u_image({8, 2, 0, std::nullopt}, ctx), SlowGateError);
  CHECK_THROWS_AS(cmd_u_image({5, 6, 0, std::nullopt}, ctx), std::invalid_argument);
  CHECK_THROWS_AS(cmd_verify({"nope", 4, 2}, ctx), std::invalid_argument);
  CHECK_THROWS_AS(cmd_t_image({3, 5, "magic"}, ctx), std::invalid_argument);
  CHECK(census_cost(8, 2) > kSlowThreshold);
  CHECK(census_cost(6, 3) < kSlowThreshold);
}

TEST_CASE("t-image report agrees both ways") {
  RunContext ctx;
  const RunReport r = cmd_t_image({3, 5, "both"}, ctx);
  CHECK(r.passed);
  CHECK(r.results["formula"]["count"] == "3904");
  CHECK(r.results["brute"]["count"] == "3904");
  CHECK(r.results["per_type_agree"] == true);
}

TEST_CASE("reference table without the slow row") {
  RunContext ctx;
  const RunReport r = cmd_paper_table(ctx);
  CHECK(r.passed);
  const auto& rows = r.results["rows"];
  REQUIRE(rows.size() == 6);
  CHECK(rows[2]["count"] == "600");
  CHECK(rows[2]["relation"] == ">1/3");
  CHECK(rows[1]["count"] == "3376");
  CHECK(rows[5].contains("skipped"));
}

TEST_CASE("verify suites at small caps") {
  RunContext ctx;
  for (const char* suite : {"propBU", "classSizes", "lbound", "theoremA", "canonical"}) {
    CAPTURE(suite);
    const RunReport r = cmd_verify({suite, 5, 3}, ctx);
    CHECK(r.passed);
  }
}
