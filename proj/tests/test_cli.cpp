#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rares/cli.hpp"

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rares-sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = rares::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string scenario(const std::string& name) {
  return (std::filesystem::path(RARES_SCENARIO_DIR) / (name + ".rares.json")).string();
}

const std::string kNonce = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";

}  // namespace

TEST_CASE("run exit codes") {
  CHECK(invoke({"run", scenario("benign")}).status == 0);
  const Result d9 = invoke({"run", scenario("key_read_cpu")});
  CHECK(d9.status == 2);
  CHECK(d9.out.find("0x0200") != std::string::npos);
  const Result missing = invoke({"run", "/nonexistent/file.rares.json"});
  CHECK(missing.status == 1);
  CHECK(missing.out.empty());
  CHECK_FALSE(missing.err.empty());
  CHECK(invoke({"run", scenario("unrecoverable")}).status == 3);
}

TEST_CASE("golden exit codes for the bundled corpus") {
  const std::map<std::string, int> expected = {
      {"benign", 0},
      {"key_read_cpu", 2},
      {"key_read_soft_switch", 2},
      {"dma_ram_write_swatt", 2},
      {"cpu_ram_write_swatt", 2},
      {"irq_in_app", 2},
      {"irq_in_swatt", 2},
      {"other_context_reads", 2},
      {"tampered_flash", 0},
      {"unrecoverable", 3},
      {"pox_clean", 0},
      {"pox_interrupted", 2},
      {"flash_overwrite_attest", 0},
  };
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(RARES_SCENARIO_DIR)) {
    ++files;
    std::string stem = entry.path().filename().string();
    stem = stem.substr(0, stem.find(".rares.json"));
    INFO(stem);
    REQUIRE(expected.count(stem) == 1);
    CHECK(invoke({"run", entry.path().string()}).status == expected.at(stem));
  }
  CHECK(files == expected.size());
}

TEST_CASE("json output is clean on stdout") {
  const Result r = invoke({"run", scenario("dma_ram_write_swatt"), "--format", "json", "--snapshot-pre-clear"});
  CHECK(r.status == 2);
  CHECK(r.err.empty());
  REQUIRE(!r.out.empty());
  CHECK(r.out.front() == '{');
  CHECK(r.out.find("\"ctrl_pre_clear\": \"0x0004\"") != std::string::npos);
  CHECK(r.out.find("\"kind\": \"reflash\"") != std::string::npos);
}

TEST_CASE("boot") {
  CHECK(invoke({"boot", scenario("benign")}).status == 0);
  const Result rec = invoke({"boot", scenario("tampered_flash")});
  CHECK(rec.status == 0);
  CHECK(rec.out.find("recovered") != std::string::npos);
  CHECK(invoke({"boot", scenario("unrecoverable")}).status == 3);
  CHECK(invoke({"boot", "/nonexistent"}).status == 1);
  const Result js = invoke({"boot", scenario("tampered_flash"), "--format", "json"});
  CHECK(js.out.find("\"recovered\": true") != std::string::npos);
}

TEST_CASE("attest") {
  const Result honest = invoke({"attest", scenario("benign"), "--nonce", kNonce, "--start", "0xE000", "--end", "0xE7FF"});
  CHECK(honest.status == 0);
  CHECK(honest.out.find("verified: true") != std::string::npos);

  const Result tampered =
      invoke({"attest", scenario("flash_overwrite_attest"), "--nonce", kNonce, "--start", "0xE000", "--end", "0xE00F"});
  CHECK(tampered.status == 2);
  CHECK(tampered.out.find("verified: false") != std::string::npos);

  CHECK(invoke({"attest", scenario("benign"), "--nonce", "abc", "--start", "0xE000", "--end", "0xE00F"}).status == 1);
  CHECK(invoke({"attest", scenario("benign"), "--nonce", "abcd", "--start", "0xE000", "--end", "0xE00F"}).status == 1);
  CHECK(invoke({"attest", scenario("benign"), "--nonce", kNonce, "--start", "0x5FF0", "--end", "0x6010"}).status == 1);
  CHECK(invoke({"attest", scenario("benign"), "--nonce", kNonce, "--start", "nope", "--end", "0x6010"}).status == 1);
  CHECK(invoke({"attest", scenario("unrecoverable"), "--nonce", kNonce, "--start", "0xE000", "--end", "0xE00F"}).status == 3);

  const Result pox = invoke({"attest", scenario("pox_clean"), "--nonce", kNonce, "--start", "0x4000", "--end",
                             "0x40FF", "--require-exec", "--format", "json"});
  CHECK(pox.status == 0);
  CHECK(pox.out.find("\"exec_flag\": true") != std::string::npos);
  CHECK(invoke({"attest", scenario("pox_interrupted"), "--nonce", kNonce, "--start", "0x4000", "--end", "0x40FF",
                "--require-exec"})
            .status == 2);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).status == 1);
  CHECK(invoke({"frobnicate"}).status == 1);
  CHECK(invoke({"run"}).status == 1);
  CHECK(invoke({"run", scenario("benign"), "--format", "xml"}).status == 1);
  CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("parse failures report a location") {
  const auto path = std::filesystem::temp_directory_path() / "rares_cli_bad.rares.json";
  {
    std::ofstream f(path);
    f << R"({"trace": [{"cycle": 2}, {"cycle": 1}]})";
  }
  const Result r = invoke({"run", path.string()});
  CHECK(r.status == 1);
  CHECK(r.err.find("trace[1].cycle") != std::string::npos);
  std::filesystem::remove(path);
}
