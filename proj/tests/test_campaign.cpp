// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "lucaspow/campaign.hpp"

using namespace lucaspow;
using namespace lucaspow::campaign;

namespace {

// Drops fields that legitimately differ between runs.
Json stable_part(Json doc) {
  doc["meta"].erase("timestamp");
  doc["meta"].erase("wall_time");
  doc["config"].erase("workers");
  for (auto& [key, item] : doc["items"].items()) {
    if (item.is_object()) item.erase("wall_time");
  }
  return doc;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "lucaspow_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli_runner") {

TEST_CASE("ranges") {
  CHECK(parse_range("3..10").lo == 3);
  CHECK(parse_range("3..10").hi == 10);
  CHECK(parse_range("7").lo == 7);
  CHECK(parse_range("7").hi == 7);
  CHECK(parse_range("-30..60").lo == -30);
  CHECK(parse_range("-5..-2").hi == -2);
  CHECK(format_range(parse_range("2..40")) == "2..40");
  CHECK_THROWS_AS(parse_range(""), ConfigError);
  CHECK_THROWS_AS(parse_range("5..3"), ConfigError);
  CHECK_THROWS_AS(parse_range("a..b"), ConfigError);
  CHECK_THROWS_AS(parse_range("1...3"), ConfigError);
  CHECK_THROWS_AS(parse_range("1..3x"), ConfigError);
}

TEST_CASE("command names round trip") {
  for (Command c : {Command::identities, Command::sieve, Command::n1, Command::reduce_walax,
                    Command::reduce_walay, Command::legendre_wala, Command::bounds,
                    Command::approx_check, Command::minimal_s, Command::cube_check}) {
    CHECK(parse_command(command_name(c)) == c);
  }
  CHECK_FALSE(parse_command("nope").has_value());
}

TEST_CASE("log-spaced samples") {
  auto v = log_spaced({4, 10'000}, 200);
  CHECK(v.size() >= 200);
  CHECK(v.front() == 4);
  CHECK(v.back() == 10'000);
  CHECK(std::set<long>(v.begin(), v.end()).size() == v.size());
  CHECK(std::is_sorted(v.begin(), v.end()));
  auto small = log_spaced({3, 10}, 200);
  CHECK(small.size() == 8);
  auto one = log_spaced({5, 5}, 10);
  CHECK(one == std::vector<long>{5});
  auto wide = log_spaced({3, 100'000}, 200);
  CHECK(wide.size() >= 200);
  CHECK(wide.back() == 100'000);
}

TEST_CASE("instance keys") {
  CHECK(instance_key(3, 2, 5, 7) == "r=3,n=2,x=5,m=7");
  CHECK(instance_key(3) == "r=3");
  CHECK(instance_key(std::nullopt, 1, 2) == "n=1,x=2");
}

TEST_CASE("configuration validation") {
  CampaignConfig base;
  base.command = Command::cube_check;
  CHECK_NOTHROW(base.resolved());
  auto bad = base;
  bad.prec_min = 32;
  CHECK_THROWS_AS(bad.resolved(), ConfigError);
  bad = base;
  bad.prec_max = bad.prec_min - 1;
  CHECK_THROWS_AS(bad.resolved(), ConfigError);
  bad = base;
  bad.workers = 0;
  CHECK_THROWS_AS(bad.resolved(), ConfigError);
  bad = base;
  bad.format = "xml";
  CHECK_THROWS_AS(bad.resolved(), ConfigError);
  bad = base;
  bad.command = Command::reduce_walax;
  bad.M = "1.5";
  CHECK_THROWS_AS(bad.resolved(), ConfigError);
  bad.M = "-3";
  CHECK_THROWS_AS(bad.resolved(), ConfigError);
  bad.M = "3e17";
  CHECK(bad.resolved().M_value() == mpz_class("300000000000000000"));
  bad = base;
  bad.command = Command::sieve;
  bad.n_range = Range{1, 3};
  CHECK_THROWS_AS(bad.resolved(), ConfigError);

  CampaignConfig d;
  d.command = Command::identities;
  auto r = d.resolved();
  CHECK(r.r_range->lo == 1);
  CHECK(r.r_range->hi == 40);
  CHECK(r.n_range->lo == -30);
  CHECK(r.n_range->hi == 60);
}

TEST_CASE("report layout") {
  CampaignConfig c;
  c.command = Command::sieve;
  c.n_range = Range{2, 6};
  c.x_range = Range{3, 8};
  c.control_x2 = true;
  auto rep = run(c);
  CHECK(rep.exit_code == kExitOk);
  CHECK(rep.item_count == 5);
  std::vector<std::string> keys;
  for (auto& [k, v] : rep.doc.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"config", "items", "aggregate", "meta"});
  CHECK(rep.doc["aggregate"]["survivors"].is_array());
  CHECK(rep.doc["aggregate"]["survivors"].empty());
  CHECK(rep.doc["aggregate"]["controls_passed"] == true);
  CHECK(rep.doc["meta"]["version"] == std::string(kVersion));
  CHECK(rep.doc["meta"]["exit_code"] == 0);
  CHECK(rep.doc["config"]["n"] == "2..6");
}

TEST_CASE("worker count does not change results") {
  CampaignConfig c;
  c.command = Command::identities;
  c.r_range = Range{1, 6};
  c.n_range = Range{-5, 20};
  auto one = run(c);
  c.workers = 3;
  auto three = run(c);
  CHECK(stable_part(one.doc) == stable_part(three.doc));

  CampaignConfig w;
  w.command = Command::reduce_walay;
  w.x_range = Range{3, 10};
  auto w1 = run(w);
  w.workers = 4;
  auto w4 = run(w);
  CHECK(stable_part(w1.doc) == stable_part(w4.doc));
  CHECK(w1.doc["aggregate"]["reduced"] == 8);
}

TEST_CASE("reports are written atomically and reruns agree") {
  CampaignConfig c;
  c.command = Command::minimal_s;
  c.r_range = Range{3, 4};
  c.n_range = Range{1, 3};
  c.m_range = Range{2, 10};
  auto path = scratch("minimal_s.json");
  std::filesystem::remove(path);
  auto first = run(c);
  emit_report(first, path);
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::ifstream in(path);
  Json back = Json::parse(in);
  CHECK(back == first.doc);
  auto second = run(c);
  CHECK(stable_part(first.doc) == stable_part(second.doc));

  auto missing = scratch("no_such_dir") / "deeper" / "out.json";
  try {
    emit_report(first, missing);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("out.json") != std::string::npos);
  }
}

TEST_CASE("a ladder that is too short yields the precision exit code") {
  CampaignConfig c;
  c.command = Command::reduce_walax;
  c.r_range = Range{3, 3};
  c.n_range = Range{2, 2};
  c.prec_min = 64;
  c.prec_max = 128;
  auto rep = run(c);
  CHECK(rep.exit_code == kExitPrecision);
  CHECK(rep.doc["aggregate"]["precision_unstable"].size() == 1);
}

TEST_CASE("high-precision values keep only certified digits") {
  auto j = hp_json(sqrt(HPReal(2L, 512)), 512);
  CHECK(j["prec"] == 512);
  const std::string s = j["value"];
  CHECK(s.rfind("1.41421356", 0) == 0);
  CHECK(s.size() < 60);
}

}  // TEST_SUITE
