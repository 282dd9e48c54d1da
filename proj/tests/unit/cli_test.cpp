#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jiffy/bench/raw_io.hpp"
#include "jiffy/bench/synthetic.hpp"
#include "jiffy/container.hpp"

#ifndef JIFFY_CLI_PATH
#error "JIFFY_CLI_PATH must point at the jiffy executable"
#endif

using namespace jiffy;
using namespace jiffy::bench;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

struct Workdir {
  fs::path dir;
  Workdir() : dir(fs::temp_directory_path() / ("jiffy_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

Run run(const std::string& args) {
  const std::string cmd = std::string(JIFFY_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen, compress, verify and decompress a static sequence") {
  Workdir w;
  REQUIRE(run("gen --kind static_scene --frames 6 --shape 32x256 --output " + (w / "in.f32")).code == 0);
  const Run c = run("compress --input " + (w / "in.f32") + " --shape 32x256 --output " + (w / "s.jfy") + " --verify");
  INFO(c.out);
  CHECK(c.code == 0);
  CHECK(c.out.find("verify: ok (6 frames)") != std::string::npos);
  CHECK(c.out.find("P-scans 5") != std::string::npos);
  CHECK(c.out.find("ratio ") != std::string::npos);
  CHECK(c.out.find("scans/s") != std::string::npos);

  CHECK(run("verify --input " + (w / "in.f32") + " --container " + (w / "s.jfy")).code == 0);

  REQUIRE(run("decompress --input " + (w / "s.jfy") + " --output " + (w / "out.f32")).code == 0);
  const auto original = load_scans({w / "in.f32", ElementType::Float32, 32, 256, 0, ScanType::Range}, {});
  const auto restored = load_scans({w / "out.f32", ElementType::Float32, 32, 256, 0, ScanType::Range}, {});
  CHECK(restored == original);

  REQUIRE(run("decompress --input " + (w / "s.jfy") + " --etype uint32 --output " + (w / "out.u32")).code == 0);
  const auto ints = load_scans({w / "out.u32", ElementType::Uint32, 32, 256, 0, ScanType::Range}, {});
  CHECK(ints == original);
}

TEST_CASE("corrupted container fails verification with a frame index") {
  Workdir w;
  REQUIRE(run("gen --frames 3 --shape 16x128 --output " + (w / "in.f32")).code == 0);
  REQUIRE(run("compress --input " + (w / "in.f32") + " --shape 16x128 --output " + (w / "s.jfy")).code == 0);
  std::string bytes = slurp(w / "s.jfy");
  bytes[bytes.size() - 5] ^= 0x40;  // inside the last frame
  std::ofstream(w / "bad.jfy", std::ios::binary) << bytes;
  const Run v = run("verify --input " + (w / "in.f32") + " --container " + (w / "bad.jfy"));
  CHECK(v.code == 2);
  CHECK(v.out.find("frame 2") != std::string::npos);
  CHECK(run("decompress --input " + (w / "bad.jfy") + " --output " + (w / "x")).code == 2);
}

TEST_CASE("empty input gives a header-only container") {
  Workdir w;
  std::ofstream(w / "empty.f32", std::ios::binary).close();
  const Run c = run("compress --input " + (w / "empty.f32") + " --shape 8x8 --output " + (w / "e.jfy"));
  INFO(c.out);
  CHECK(c.code == 0);
  CHECK(c.out.find("ratio n/a") != std::string::npos);
  CHECK(fs::file_size(w / "e.jfy") == kStreamHeaderSize);
  CHECK(run("verify --input " + (w / "empty.f32") + " --shape 8x8 --container " + (w / "e.jfy")).code == 0);
}

TEST_CASE("uint16 attribute sequence compresses and verifies") {
  Workdir w;
  {
    std::ofstream out(w / "sig.u16", std::ios::binary);
    for (int f = 0; f < 4; ++f)
      for (int i = 0; i < 16 * 64; ++i) {
        const auto v = std::uint16_t((i * 37 + f * 3) % 5000 + (i % 9 == 0 ? 0 : 1) * 100);
        out.write(reinterpret_cast<const char*>(&v), 2);
      }
  }
  const Run c = run("compress --input " + (w / "sig.u16") + " --etype uint16 --shape 16x64 --output " +
                    (w / "sig.jfy") + " --verify");
  INFO(c.out);
  CHECK(c.code == 0);
  std::ifstream in(w / "sig.jfy", std::ios::binary);
  StreamReader reader(in);
  CHECK(reader.header().scan_type == ScanType::Signal);
  CHECK(reader.header().width == SampleWidth::Two);
  CHECK(reader.header().frame_count == 4);
}

TEST_CASE("analysis subcommands") {
  Workdir w;
  REQUIRE(run("gen --frames 4 --shape 16x128 --output " + (w / "in.f32")).code == 0);
  const std::string in = " --input " + (w / "in.f32") + " --shape 16x128";

  const Run b = run("bench" + in + " --reps 2 --format json");
  INFO(b.out);
  CHECK(b.code == 0);
  CHECK(b.out.find("\"encode_points_per_sec\"") != std::string::npos);

  const Run s = run("sweep" + in + " --precisions 1000,2000");
  CHECK(s.code == 0);
  CHECK(s.out.find("\n1000,") != std::string::npos);
  CHECK(s.out.find("\n2000,") != std::string::npos);

  const Run a = run("ablate" + in);
  CHECK(a.code == 0);
  CHECK(a.out.find("delta>zigzag>pfor") != std::string::npos);

  const Run h = run("heuristic-eval" + in);
  CHECK(h.code == 0);
  CHECK(h.out.find("frames_evaluated") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  Workdir w;
  CHECK(run("").code == 1);
  CHECK(run("compress --input x").code == 1);
  CHECK(run("compress --input " + (w / "missing") + " --shape 4x4 --output " + (w / "o")).code == 1);
  CHECK(run("compress --input x --shape 4by4 --output y").code == 1);
  CHECK(run("gen --kind nonsense --output " + (w / "g")).code == 1);
  CHECK(run("--help").code == 0);
}
