#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mdhv/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<const char*> args) {
  args.insert(args.begin(), "mdhv");
  std::ostringstream out;
  std::ostringstream err;
  const int code = mdhv::cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("verify passes and echoes its configuration") {
  const auto r = run({"verify", "ks2", "--seed", "5", "--shots", "20000", "--trials", "2"});
  CHECK(r.code == mdhv::cli::kExitPass);
  CHECK(r.out.rfind("# config ", 0) == 0);
  CHECK(r.out.find("\"seed\":5") != std::string::npos);
  CHECK(r.out.find("# status pass") != std::string::npos);
}

TEST_CASE("a random seed is still reported") {
  const auto r = run({"info", "--resolution", "8", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("config").contains("seed"));
  CHECK(j.at("result").at("mutual_information").get<double>() == doctest::Approx(0.6931471805599453));
}

TEST_CASE("the same seed gives the same output") {
  const std::vector<const char*> args{"scan", "--model", "brans", "--seed", "9", "--shots", "5000", "--angles", "0,60"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("scan writes CSV by default") {
  const auto r = run({"scan", "hall", "--seed", "1", "--shots", "1000", "--angles", "0,90"});
  CHECK(r.code == 0);
  CHECK(r.out.find("angle,estimate,minus_cos,stderr\n0,-1,-1,0\n") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"verify", "nope", "--seed", "1"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"verify", "ks1", "--format", "xml"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"verify", "ks1", "--shots", "0"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"scan", "ks1", "--seed", "1"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"audit", "compat", "hall", "--seed", "1"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"channel", "--alice", "1,2,3,4"}).code == mdhv::cli::kExitUsage);
  CHECK(run({"verify", "brans", "--model", "hall"}).code == mdhv::cli::kExitUsage);
}

TEST_CASE("audit pi reports the mixed-basis residual") {
  const auto r = run({"audit", "pi", "gbrans", "--format", "json", "--seed", "1"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("result").at("max_residual").get<double>() == doctest::Approx(0.125));
}

TEST_CASE("channel JSON and trace file") {
  const auto r = run({"channel", "--seed", "2", "--accepted", "1000", "--alice", "0,0", "--bob", "90,0"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("result").at("transcript").at("accepted") == 1000);
  CHECK(j.at("result").at("nominal_bits") == 2.0);
}

TEST_CASE("audit marginal for Brans is exactly zero") {
  const auto r = run({"audit", "marginal", "brans", "--seed", "1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\n1,0,0,yes,") != std::string::npos);
}
