#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nonrad/errors.hpp"
#include "nonrad/io.hpp"

using namespace nonrad;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "nonrad_io_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("csv io") {
  TEST_CASE("profile roundtrip is bit exact") {
    TempDir tmp;
    const GridSpec g(-2.0, 2.0, 1.0 / 32);
    const RadialProfile p =
        sampled_profile(g, [](double s) { return std::exp(-s * s) * (1.0 + s / 3.0); });
    write_profile_csv(tmp.file("p.csv"), p);
    const RadialProfile q = read_profile_csv(tmp.file("p.csv"));
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(q.values[i] == p.values[i]);
    CHECK(q.grid.step == p.grid.step);
  }

  TEST_CASE("data roundtrip is bit exact") {
    TempDir tmp;
    const RadialGrid rg(4.0, 1.0 / 16);
    std::vector<double> u0(rg.size()), u1(rg.size());
    for (std::size_t i = 0; i < rg.size(); ++i) {
      u0[i] = std::sin(0.37 * static_cast<double>(i));
      u1[i] = std::cos(0.91 * static_cast<double>(i));
    }
    const RadialData d(rg, u0, u1);
    write_data_csv(tmp.file("d.csv"), d);
    const RadialData e = read_data_csv(tmp.file("d.csv"));
    REQUIRE(e.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(e.u0[i] == d.u0[i]);
      CHECK(e.u1[i] == d.u1[i]);
    }
  }

  TEST_CASE("malformed input raises InputError") {
    TempDir tmp;
    {
      std::ofstream out(tmp.file("bad_header.csv"));
      out << "x,y\n1,2\n2,3\n";
    }
    CHECK_THROWS_AS(read_profile_csv(tmp.file("bad_header.csv")), InputError);
    {
      std::ofstream out(tmp.file("bad_number.csv"));
      out << "s,value\n0,1\n0.5,oops\n";
    }
    CHECK_THROWS_AS(read_profile_csv(tmp.file("bad_number.csv")), InputError);
    {
      std::ofstream out(tmp.file("nonuniform.csv"));
      out << "s,value\n0,1\n0.5,1\n1.7,1\n";
    }
    CHECK_THROWS_AS(read_profile_csv(tmp.file("nonuniform.csv")), InputError);
    CHECK_THROWS_AS(read_data_csv(tmp.file("missing.csv")), InputError);
  }

  TEST_CASE("atomic write leaves no temp file behind") {
    TempDir tmp;
    atomic_write_text(tmp.file("a.txt"), "payload");
    CHECK(fs::exists(tmp.file("a.txt")));
    CHECK(!fs::exists(tmp.file("a.txt") + ".tmp"));
    std::ifstream in(tmp.file("a.txt"));
    std::string s;
    std::getline(in, s);
    CHECK(s == "payload");
  }
}

TEST_SUITE("json records") {
  TEST_CASE("charnumbers record carries all fields") {
    CharNumbers cn;
    cn.alpha = 0.1;
    cn.beta = 0.05;
    cn.method = CharNumbers::Method::asymptotic_fit;
    cn.fit_window = {8.0, 48.0};
    cn.residual = 1.5e-4;
    cn.reference_tag = "ref";
    const std::string j = charnumbers_json(cn);
    CHECK(j.find("\"alpha\": 0.1") != std::string::npos);
    CHECK(j.find("asymptotic_fit") != std::string::npos);
    CHECK(j.find("reference_tag") != std::string::npos);
  }

  TEST_CASE("translation report serializes the defect") {
    TranslationReport rep;
    rep.t0 = 0.5;
    rep.beta_after = 0.05;
    rep.predicted_beta = 0.049;
    rep.defect = 1e-3;
    const std::string j = translation_report_json(rep);
    CHECK(j.find("\"defect\"") != std::string::npos);
    CHECK(j.find("\"t0\": 0.5") != std::string::npos);
  }
}
