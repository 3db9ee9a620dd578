#include <doctest.h>
#include <httplib.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "gazegram/service.hpp"
#include "gazegram_cli/commands.hpp"
#include "session_fixture.hpp"

using namespace gazegram;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gazegram");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<std::string> pattern_chars(const Json& mined) {
  std::vector<std::string> out;
  for (const auto& p : mined.at("patterns")) out.push_back(p.at("chars"));
  return out;
}

// Planted stimulus and gaze written to disk, plus the detected AOI file.
struct Workspace {
  fixtures::TempDir dir;
  std::string png = dir.str("stimulus.png");
  std::string gaze = dir.str("gaze.csv");
  std::string aois = dir.str("aois.json");
  std::string table = dir.str("table.json");

  explicit Workspace(int participants = 3) {
    write_bytes(png, fixtures::planted_png());
    std::ofstream(gaze) << write_gaze_csv(fixtures::planted_paths(participants));
    const auto r = run_cli({"detect", png, "-o", aois});
    REQUIRE(r.code == cli::kOk);
  }

  Json mine(std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"mine", gaze, aois};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run_cli(args);
    REQUIRE(r.code == cli::kOk);
    return Json::parse(r.out);
  }
};

// Child process running `gazegram serve` with stdout on a pipe.
struct ServeProcess {
  pid_t pid = -1;
  FILE* out = nullptr;

  explicit ServeProcess(const std::vector<std::string>& args) {
    int fds[2];
    REQUIRE(::pipe(fds) == 0);
    pid = ::fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
      ::dup2(fds[1], STDOUT_FILENO);
      ::close(fds[0]);
      ::close(fds[1]);
      std::vector<const char*> argv{GAZEGRAM_CLI_PATH, "serve"};
      for (const auto& a : args) argv.push_back(a.c_str());
      argv.push_back(nullptr);
      ::execv(GAZEGRAM_CLI_PATH, const_cast<char* const*>(argv.data()));
      ::_exit(127);
    }
    ::close(fds[1]);
    out = ::fdopen(fds[0], "r");
  }
  ~ServeProcess() {
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
    }
    if (out) ::fclose(out);
  }

  std::string line() {
    char buf[256];
    return std::fgets(buf, sizeof buf, out) ? std::string(buf) : std::string();
  }

  // Exit code, or -1 if the child is still running after ten seconds.
  int wait() {
    int status = 0;
    for (int i = 0; i < 1000; ++i) {
      if (::waitpid(pid, &status, WNOHANG) == pid) {
        pid = -1;
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      }
      ::usleep(10000);
    }
    return -1;
  }
};

int port_of(const std::string& banner) {
  const auto colon = banner.rfind(':');
  REQUIRE(colon != std::string::npos);
  return std::stoi(banner.substr(colon + 1));
}

}  // namespace

TEST_CASE("detect") {
  fixtures::TempDir dir;
  SUBCASE("three blocks give three leaves") {
    gazegram::RgbImage img(400, 300);
    img.fill_rect({20, 20, 100, 80}, 200, 0, 0);
    img.fill_rect({200, 30, 120, 90}, 0, 0, 200);
    img.fill_rect({60, 180, 200, 90}, 0, 150, 0);
    write_bytes(dir.str("in.png"), encode_png(img));
    const auto r = run_cli({"detect", dir.str("in.png"), "--debug-png", dir.str("debug.png")});
    REQUIRE(r.code == cli::kOk);
    const auto tree = tree_from_json(Json::parse(r.out));
    CHECK(tree.leaf_count() == 3);
    CHECK(decode_png(read_file_bytes(dir.str("debug.png"))).width == 400);
  }
  SUBCASE("a blank image gives an empty tree") {
    write_bytes(dir.str("blank.png"), encode_png(gazegram::RgbImage(64, 64)));
    const auto r = run_cli({"detect", dir.str("blank.png")});
    REQUIRE(r.code == cli::kOk);
    CHECK(Json::parse(r.out).at("children").empty());
  }
  SUBCASE("usage errors exit 2") {
    CHECK(run_cli({"detect", dir.str("missing.png")}).code == cli::kUsage);
    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  }
  SUBCASE("out-of-range options exit 2, undecodable input exits 1") {
    write_bytes(dir.str("blank.png"), encode_png(gazegram::RgbImage(64, 64)));
    CHECK(run_cli({"detect", dir.str("blank.png"), "--colors", "1"}).code == cli::kUsage);
    std::ofstream(dir.str("junk.png")) << "junk";
    CHECK(run_cli({"detect", dir.str("junk.png")}).code == cli::kFailure);
  }
  CHECK(run_cli({"--version"}).out.find(kVersion) != std::string::npos);
}

TEST_CASE("mine") {
  Workspace w;
  const auto j = w.mine();
  const auto chars = pattern_chars(j);
  REQUIRE(chars.size() >= 2);
  CHECK(chars[0] == "AB");
  CHECK(chars[1] == "BC");
  CHECK(j.at("sequences").size() == 3);
  CHECK(j.at("mostSimilar").at("p") == "P2");

  SUBCASE("N longer than every sequence gives no patterns") {
    CHECK(w.mine({"--n", "100000"}).at("patterns").empty());
  }
  SUBCASE("raising tau only removes patterns") {
    const auto loose = pattern_chars(w.mine({"--tau", "1"}));
    const auto strict = pattern_chars(w.mine({"--tau", "30"}));
    for (const auto& p : strict) CHECK(std::find(loose.begin(), loose.end(), p) != loose.end());
    CHECK(strict.size() <= loose.size());
  }
  SUBCASE("threshold") {
    const auto top = j.at("patterns")[0].at("total").get<double>();
    const auto kept = w.mine({"--threshold", std::to_string(top - 0.5)});
    std::vector<std::string> expected;
    for (const auto& p : j.at("patterns")) {
      if (p.at("total").get<double>() > top - 0.5) expected.push_back(p.at("chars"));
    }
    CHECK(pattern_chars(kept) == expected);
    CHECK(run_cli({"mine", w.gaze, w.aois, "--op", "sideways"}).code == cli::kUsage);
  }
  SUBCASE("bad inputs") {
    CHECK(run_cli({"mine", w.gaze, w.aois, "--level", "7"}).code == cli::kFailure);
    CHECK(run_cli({"mine", w.gaze, w.aois, "--n", "0"}).code == cli::kUsage);
    std::ofstream(w.dir.str("bad.csv")) << "participant,t,x,y\nP1,0,1\n";
    const auto r = run_cli({"mine", w.dir.str("bad.csv"), w.aois});
    CHECK(r.code == cli::kFailure);
    CHECK(r.err.find("row 2") != std::string::npos);
  }
}

TEST_CASE("similarity") {
  Workspace w;
  const auto r = run_cli({"similarity", w.gaze, w.aois});
  REQUIRE(r.code == cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(j.at("values").size() == 3);
  CHECK(j.at("mostSimilar").at("value").get<double>() == 1.0);
  CHECK(j.at("mostSimilar").at("q") == "P3");
}

TEST_CASE("layout") {
  Workspace w;
  std::ofstream(w.table) << w.mine().dump();

  const auto a = run_cli({"layout", w.table, w.aois, "--patterns", "AB", "--seed", "9",
                          "--layout-json", w.dir.str("layout.json")});
  REQUIRE(a.code == cli::kOk);
  CHECK(count_of(a.out, "<circle") == 2);
  CHECK(count_of(a.out, "<path d=\"M ") == 1);
  const auto b = run_cli({"layout", w.table, w.aois, "--patterns", "AB", "--seed", "9"});
  CHECK(a.out == b.out);

  SUBCASE("empty selection is a usage error") {
    CHECK(run_cli({"layout", w.table, w.aois}).code == cli::kUsage);
  }
  SUBCASE("unknown pattern fails") {
    CHECK(run_cli({"layout", w.table, w.aois, "--patterns", "ZZ"}).code == cli::kFailure);
  }
  SUBCASE("output file and embedded image") {
    const auto r = run_cli({"layout", w.table, w.aois, "--aoi", "B", "--mode", "arrives", "--image", w.png,
                            "-o", w.dir.str("out.svg")});
    REQUIRE(r.code == cli::kOk);
    CHECK(slurp(w.dir.str("out.svg")).find("data:image/png;base64,") != std::string::npos);
  }
  SUBCASE("the file pipeline matches the service") {
    fixtures::TempDir data;
    AnalysisService service(data.path());
    const auto id = service.create_session(fixtures::planted_png(), slurp(w.gaze));
    service.auto_detect(id, {8, 4});
    LayoutQuery q;
    q.patterns = {"AB"};
    q.params.seed = 9;
    const auto served = service.compute_layout(id, q);
    const auto written = Json::parse(slurp(w.dir.str("layout.json")));
    CHECK(dump_canonical(written.at("nodes")) == dump_canonical(served.at("nodes")));
    CHECK(dump_canonical(written.at("edges")) == dump_canonical(served.at("edges")));
  }
}

TEST_CASE("serve") {
  fixtures::TempDir data;
  SUBCASE("starts, answers and stops on SIGTERM") {
    ServeProcess p({"--port", "0", "--data-dir", data.path().string()});
    const auto banner = p.line();
    REQUIRE(banner.rfind("listening on http://127.0.0.1:", 0) == 0);
    httplib::Client client("127.0.0.1", port_of(banner));
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(Json::parse(health->body).at("version") == kVersion);
    auto list = client.Get("/sessions");
    REQUIRE(list);
    CHECK(list->status == 200);
    CHECK(Json::parse(list->body).at("sessions").empty());
    ::kill(p.pid, SIGTERM);
    CHECK(p.wait() == 0);
  }
  SUBCASE("missing data dir exits 1") {
    ServeProcess p({"--port", "0", "--data-dir", (data.path() / "nope").string()});
    CHECK(p.wait() == 1);
  }
  SUBCASE("busy port exits 1") {
    ServeProcess first({"--port", "0", "--data-dir", data.path().string()});
    const int port = port_of(first.line());
    ServeProcess second({"--port", std::to_string(port), "--data-dir", data.path().string()});
    CHECK(second.wait() == 1);
  }
}
