#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hillwave/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "hillwave");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hillwave::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string mathieu_file() {
  const auto p = std::filesystem::temp_directory_path() / "hillwave_cli_mathieu.json";
  std::ofstream(p) << R"({"cosine": [0, 2], "sine": []})";
  return p.string();
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("spectrum prints one row per band") {
  const auto r = call({"spectrum", "--potential", mathieu_file(), "--n-max", "20"});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 21);
  CHECK(r.out.rfind("n,band_lo_w,band_hi_w", 0) == 0);
}

TEST_CASE("output is reproducible") {
  const auto a = call({"discriminant", "--potential", mathieu_file(), "--w", "1:9:5"});
  const auto b = call({"discriminant", "--potential", mathieu_file(), "--w", "1:9:5"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out) == 6);
}

TEST_CASE("bad input exits with 2") {
  CHECK(call({"spectrum", "--n-max", "0"}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK(call({"bloch", "--w", "1", "--k", "1"}).code == 2);
  CHECK(call({"discriminant", "--w", "1:2"}).code == 2);
  CHECK(call({"spectrum", "--potential", "/nonexistent/p.json"}).code == 2);
  // a w inside the first gap
  CHECK(call({"bloch", "--potential", mathieu_file(), "--w", "3.05"}).code == 2);
}

TEST_CASE("bloch and kernel output") {
  const auto b = call({"bloch", "--potential", mathieu_file(), "--k", "2.0", "--x", "0:1:11"});
  CHECK(b.code == 0);
  CHECK(lines(b.out) == 12);
  const auto k = call({"kernel", "--t", "1", "--x", "0.5", "--bands", "4"});
  CHECK(k.code == 0);
  CHECK(k.out.find("\"value_re\"") != std::string::npos);
  CHECK(k.out.find("\"tail_bound\"") != std::string::npos);
}

TEST_CASE("verify passes on the free case") {
  const auto r = call({"verify", "--bands", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find(",fail,yes") == std::string::npos);
}
