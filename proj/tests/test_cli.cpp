#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hyp/cache.hpp"
#include "hyp/csv.hpp"
#include "hyp/verify.hpp"

using namespace hyp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hypcone-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("config parsing, defaults and validation") {
  const RunConfig c = config_from_json_text("{}");
  CHECK(c.model == "free-group:2");
  CHECK(c.depth == 6);
  CHECK(c.radius == 12);
  CHECK(c.t_offsets == std::vector<double>{0.2, 0.1, 0.05, 0.025});
  CHECK(c.cauchy_tol == 1e-3);
  CHECK(c.memory_budget == (2ull << 30));

  const RunConfig c2 = config_from_json_text(
      R"({"model":"free-product:2,3","depth":4,"p":3.5,"t_offsets":[0.3,0.1]})");
  CHECK(c2.depth == 4);
  CHECK(c2.p == 3.5);
  CHECK(c2.make_space().kind() == SpaceModel::Kind::FreeProduct);

  CHECK_THROWS_AS((void)config_from_json_text("{\"unknown_knob\":1}"), Error);
  CHECK_THROWS_AS((void)config_from_json_text("{\"depth\":0}"), Error);
  CHECK_THROWS_AS((void)config_from_json_text("{\"t_offsets\":[0.1,0.2]}"), Error);
  CHECK_THROWS_AS((void)config_from_json_text("not json"), Error);
  CHECK_THROWS_AS((void)config_from_json_text("{\"model\":\"heisenberg:3\"}").make_space(),
                  Error);

  // schottky needs matrices
  CHECK_THROWS_AS(
      (void)config_from_json_text("{\"model\":\"fuchsian-schottky\"}").make_space(),
      Error);
  const RunConfig c3 = config_from_json_text(
      R"({"model":"fuchsian-schottky",
          "matrices":[[3,0,0,0.3333333333333333],[1.6666666666666667,-1.3333333333333333,-1.3333333333333333,1.6666666666666667]]})");
  CHECK(c3.make_space().kind() == SpaceModel::Kind::SchottkyDisk);
}

TEST_CASE("config hash covers value-bearing fields only") {
  RunConfig a, b;
  CHECK(a.hash() == b.hash());
  b.depth = 7;
  CHECK(a.hash() != b.hash());
  RunConfig c;
  c.threads = 7;          // execution knob: same values, same hash
  c.out_dir = "elsewhere";
  CHECK(a.hash() == c.hash());
}

TEST_CASE("p resolution rule") {
  RunConfig c;
  // max(3, ceil(2 delta / eps0)) with delta = ln 3: ceil(2.197) = 3
  CHECK(c.resolve_p(std::log(3.0)) == 3.0);
  CHECK(c.resolve_p(2.0) == 4.0);
  c.p = 2.5;
  CHECK(c.resolve_p(std::log(3.0)) == 2.5);
}

TEST_CASE("measure cache round trip and hit semantics") {
  TempDir tmp;
  RunConfig cfg;
  cfg.cache_dir = (tmp.path / "cache").string();
  const SpaceModel sp = cfg.make_space();

  CHECK(!cache_load(cfg, sp, 2).has_value());

  const DiscreteBoundaryMeasure m = ps_measure_cached(cfg, sp, 2);
  const auto loaded = cache_load(cfg, sp, 2);
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->cells.size() == m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    CHECK(loaded->cells[i].first == m.cells[i].first);
    CHECK(loaded->cells[i].second == m.cells[i].second);  // bit-exact round trip
  }
  CHECK(loaded->cauchy_gap == m.cauchy_gap);
  CHECK(loaded->delta_used == m.delta_used);

  // a hit never recomputes: plant a sentinel mass and observe it come back
  DiscreteBoundaryMeasure doctored = m;
  doctored.cells[0].second = 0.123456789;
  cache_store(cfg, sp, doctored, 2);
  const DiscreteBoundaryMeasure again = ps_measure_cached(cfg, sp, 2);
  CHECK(again.cells[0].second == 0.123456789);

  // different depth, different key
  CHECK(measure_cache_key(cfg, 2) != measure_cache_key(cfg, 3));
  RunConfig other = cfg;
  other.radius = 10;
  CHECK(measure_cache_key(cfg, 2) != measure_cache_key(other, 2));

  // corrupt cache entries count as misses
  std::ofstream(fs::path(cfg.cache_dir) / (measure_cache_key(cfg, 2) + ".psm"))
      << "garbage\n";
  CHECK(!cache_load(cfg, sp, 2).has_value());
}

TEST_CASE("csv writer emits the version comment, header and rows") {
  TempDir tmp;
  const std::string path = (tmp.path / "t.csv").string();
  {
    CsvWriter csv(path, "deadbeef");
    csv.header({"x", "y"});
    csv.row({"1", fmt_g17(0.375)});
  }
  std::ifstream in(path);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1.find("hypcone") != std::string::npos);
  CHECK(l1.find("deadbeef") != std::string::npos);
  CHECK(l2 == "x,y");
  CHECK(l3 == "1,0.375");
}

TEST_CASE("fmt_g17 round trips doubles") {
  for (const double v : {0.1, 1.0 / 3.0, 3190.0 / 243.0, 1e-300, 29.625000705628679}) {
    CHECK(std::stod(fmt_g17(v)) == v);
  }
}

TEST_CASE("verify-all summary structure") {
  TempDir tmp;
  RunConfig cfg;
  cfg.out_dir = (tmp.path / "out").string();
  cfg.cache_dir = (tmp.path / "cache").string();

  const VerifySummary s = run_verify_all(cfg);
  REQUIRE(s.results.size() == 9);
  for (const auto& r : s.results) {
    CHECK(r.pass);
    CHECK(!r.name.empty());
    CHECK(!r.detail.empty());
  }
  CHECK(s.all_pass());
  // every criterion leaves a CSV artifact behind
  for (const char* f :
       {"fourpoint.csv", "critical_exponent.csv", "ps_depth1.csv", "ps_depth2.csv",
        "rn_check.csv", "bm_invariance.csv", "moebius.csv", "cocycle_norms.csv",
        "cone_lambda.csv", "growth_experiment.csv"})
    CHECK(fs::exists(fs::path(cfg.out_dir) / f));
}
