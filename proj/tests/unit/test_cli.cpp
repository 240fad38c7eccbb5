#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "photoncube/events.hpp"
#include "photoncube/io.hpp"

namespace fs = std::filesystem;
using namespace photoncube;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result pcube_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = pcube::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("synthesize writes a readable cube") {
  const auto dir = oracle::temp_dir("cli_synth");
  const auto a = (dir / "a.pcube").string();
  auto r = pcube_run({"synthesize", "--scene", "constant", "--flux", "0", "--T", "50", "--H", "6", "--W", "10", "-o", a});
  REQUIRE(r.code == pcube::kExitOk);
  const auto cube = read_pcube(a);
  CHECK(cube.frames() == 50);
  CHECK(cube.height() == 6);
  CHECK(cube.width() == 10);
  CHECK(cube.bits().popcount() == 0);

  const auto b = (dir / "b.pcube").string(), c = (dir / "c.pcube").string();
  pcube_run({"synthesize", "--scene", "falling-die", "--T", "200", "--H", "12", "--W", "24", "--seed", "5", "-o", b});
  pcube_run({"synthesize", "--scene", "falling-die", "--T", "200", "--H", "12", "--W", "24", "--seed", "5", "-o", c});
  CHECK(oracle::read_bytes(b) == oracle::read_bytes(c));
  pcube_run({"synthesize", "--scene", "falling-die", "--T", "200", "--H", "12", "--W", "24", "--seed", "6", "-o", c});
  CHECK(oracle::read_bytes(b) != oracle::read_bytes(c));
}

TEST_CASE("one pass produces the same files as separate runs") {
  const auto dir = oracle::temp_dir("cli_project");
  const auto cube = (dir / "cube.pcube").string();
  REQUIRE(pcube_run({"synthesize", "--scene", "moving-square", "--T", "300", "--H", "12", "--W", "24", "--v", "0.02",
                     "--seed", "1", "-o", cube})
              .code == 0);
  const std::vector<std::vector<std::string>> parts = {
      {"--sum"}, {"--vcs", "J=4,seed=3"}, {"--event", "tau=0.3"}, {"--motion", "linear:v=0.02,dx=1,dy=0"}, {"--flutter", "chops=30,seed=2"}};
  std::vector<std::string> all = {"project", cube, "-o", (dir / "all").string()};
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  REQUIRE(pcube_run(all).code == 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<std::string> one = {"project", cube, "-o", (dir / ("one" + std::to_string(i))).string()};
    one.insert(one.end(), parts[i].begin(), parts[i].end());
    REQUIRE(pcube_run(one).code == 0);
    for (const auto& entry : fs::directory_iterator(dir / ("one" + std::to_string(i)))) {
      const auto name = entry.path().filename();
      REQUIRE(fs::exists(dir / "all" / name));
      CHECK(oracle::read_bytes(entry.path()) == oracle::read_bytes(dir / "all" / name));
    }
  }
  CHECK(fs::exists(dir / "all" / "sum.pgm"));
  CHECK(fs::exists(dir / "all" / "vcs_3.pgm"));
  CHECK(fs::exists(dir / "all" / "events.pevt"));
  CHECK(fs::exists(dir / "all" / "motion_0.pfm"));
  CHECK(fs::exists(dir / "all" / "flutter.pgm"));

  SUBCASE("sum image matches the library") {
    const auto img = read_pgm16(dir / "all" / "sum.pgm");
    const auto ref = sum_image(read_pcube(cube));
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(img[i] == ref[i]);
  }
  SUBCASE("report") {
    const auto r = pcube_run({"project", cube, "--sum", "--report", "-o", (dir / "rep").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("kbps") != std::string::npos);
    CHECK(fs::exists(dir / "rep" / "report.csv"));
  }
  SUBCASE("tiled run matches project") {
    const auto r = pcube_run({"tiled", cube, "--sum", "-o", (dir / "tiled").string()});
    REQUIRE(r.code == 0);
    CHECK(oracle::read_bytes(dir / "tiled" / "sum.pgm") == oracle::read_bytes(dir / "all" / "sum.pgm"));
    CHECK(fs::exists(dir / "tiled" / "tiled.csv"));
    const auto e = pcube_run({"tiled", cube, "--event", "tau=0.3", "-o", (dir / "tiled_ev").string()});
    REQUIRE(e.code == 0);
    CHECK(oracle::read_bytes(dir / "tiled_ev" / "events.pevt") == oracle::read_bytes(dir / "all" / "events.pevt"));
  }
}

TEST_CASE("exit codes") {
  const auto dir = oracle::temp_dir("cli_exit");
  const auto cube = (dir / "cube.pcube").string();
  REQUIRE(pcube_run({"synthesize", "--T", "100", "--H", "12", "--W", "24", "-o", cube}).code == 0);
  CHECK(pcube_run({"tiled", cube, "--vcs", "J=32", "-o", dir.string()}).code == pcube::kExitConstraint);
  CHECK(pcube_run({"tiled", cube, "--motion", "linear:v=1,dx=1,dy=0", "-o", dir.string()}).code == pcube::kExitConstraint);
  CHECK(pcube_run({"project", cube, "--vcs", "J=0", "-o", dir.string()}).code == pcube::kExitValidation);
  CHECK(pcube_run({"project", cube, "--event", "tau=-1", "-o", dir.string()}).code == pcube::kExitValidation);
  CHECK(pcube_run({"project", (dir / "missing.pcube").string(), "--sum"}).code != 0);
  CHECK(pcube_run({"tiled", cube, "--sum", "--event", "tau=0.4"}).code == pcube::kExitValidation);
  CHECK(pcube_run({"bogus"}).code == pcube::kExitValidation);
  CHECK(pcube_run({"--help"}).code == 0);

  const std::string cmd = std::string(PCUBE_BINARY) + " tiled " + cube + " --vcs J=32 -o " + dir.string() + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == pcube::kExitConstraint);
}

TEST_CASE("config from the environment") {
  const auto dir = oracle::temp_dir("cli_config");
  write_text(dir / "a.cfg", "seed = 42\n");
  write_text(dir / "b.cfg", "seed = 43\n");
  const std::vector<std::string> base = {"synthesize", "--T", "100", "--H", "8", "--W", "8", "--scene", "constant", "--flux", "3e4"};

  auto with = [&](const std::string& out, std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back("-o");
    args.push_back((dir / out).string());
    REQUIRE(pcube_run(args).code == 0);
    return oracle::read_bytes(dir / out);
  };
  const auto explicit42 = with("s42.pcube", {"--seed", "42"});
  const auto explicit43 = with("s43.pcube", {"--seed", "43"});
  setenv(pcube::kConfigEnv, (dir / "a.cfg").c_str(), 1);
  CHECK(with("env.pcube", {}) == explicit42);
  CHECK(with("flag.pcube", {"--config", (dir / "b.cfg").string()}) == explicit43);
  CHECK(with("override.pcube", {"--seed", "43"}) == explicit43);
  setenv(pcube::kConfigEnv, (dir / "nope.cfg").c_str(), 1);
  auto args = base;
  args.push_back("-o");
  args.push_back((dir / "x.pcube").string());
  CHECK(pcube_run(args).code == pcube::kExitValidation);
  unsetenv(pcube::kConfigEnv);
}

TEST_CASE("report command") {
  const auto r = pcube_run({"report"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("composite") != std::string::npos);
  const auto dir = oracle::temp_dir("cli_report");
  const auto s = pcube_run({"report", "--scale-to", "512x256", "--csv", (dir / "r.csv").string()});
  REQUIRE(s.code == 0);
  CHECK(fs::exists(dir / "r.csv"));
  CHECK(pcube_run({"report", "--scale-to", "512by256"}).code == pcube::kExitValidation);
}

TEST_CASE("render accumulation frames") {
  const auto dir = oracle::temp_dir("cli_render");
  const auto cube = (dir / "cube.pcube").string();
  REQUIRE(pcube_run({"synthesize", "--scene", "falling-die", "--T", "400", "--H", "12", "--W", "24", "-o", cube}).code == 0);
  REQUIRE(pcube_run({"project", cube, "--event", "tau=0.3", "-o", dir.string()}).code == 0);
  const auto pevt = (dir / "events.pevt").string();
  REQUIRE(pcube_run({"render", pevt, "--range", "100:300", "--bins", "3", "-o", (dir / "r").string()}).code == 0);
  const auto stream = decode_events(oracle::read_bytes(pevt));
  REQUIRE_FALSE(stream.events.empty());
  const auto ref = accumulate_frame(stream, 100, 300);
  const auto signed_img = read_pfm(dir / "r" / "frame.pfm");
  const auto pos = read_pgm16(dir / "r" / "frame_pos.pgm");
  const auto neg = read_pgm16(dir / "r" / "frame_neg.pgm");
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(signed_img[i] == static_cast<float>(ref[i]));
    CHECK(static_cast<int>(pos[i]) - static_cast<int>(neg[i]) == ref[i]);
    CHECK((pos[i] == 0 || neg[i] == 0));
  }
  CHECK(fs::exists(dir / "r" / "voxel_2.pfm"));
  CHECK(pcube_run({"render", pevt, "--range", "300:100"}).code == pcube::kExitValidation);
}
