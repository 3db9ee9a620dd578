#include "gazegram_cli/commands.hpp"

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "gazegram/autodetect.hpp"
#include "gazegram/http_server.hpp"
#include "gazegram/pipeline.hpp"
#include "gazegram/service.hpp"
#include "gazegram/svg.hpp"

namespace gazegram::cli {
namespace {

struct DetectArgs {
  std::string image;
  DetectionParams params;
  std::string output;
  std::string debug_png;
};

struct MineArgs {
  std::string gaze;
  std::string aois;
  std::optional<int> level;
  int n = 2;
  std::int64_t tau = 6;
  std::optional<double> threshold;
  std::string op = "more";
};

struct LayoutArgs {
  std::string table;
  std::string aois;
  std::vector<std::string> patterns;
  std::string aoi;
  std::string mode = "passes";
  std::optional<int> level;
  LayoutParams params;
  std::string image;
  std::string output;
  std::string json_output;
};

struct ServeArgs {
  int port = 8080;
  std::string data_dir = "data";
  std::string host = "127.0.0.1";
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

AoiTree load_tree(const std::string& path) {
  const Json j = Json::parse(read_file_text(path), nullptr, false);
  if (j.is_discarded()) throw FormatError(path + ": not valid JSON");
  AoiTree tree = tree_from_json(j);
  const auto violations = validate_tree(tree);
  if (!violations.empty()) {
    std::string msg = path + ": invalid AOI tree:";
    for (const auto& v : violations) msg += " " + v;
    throw ConsistencyError(msg);
  }
  return tree;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

int cmd_detect(const DetectArgs& a, std::ostream& out) {
  validate(a.params);
  const auto image = decode_png(read_file_bytes(a.image));
  const auto result = detect_aois_detailed(image, a.params);
  if (!a.debug_png.empty()) {
    const auto debug = render_detection_debug(result, a.params, image.width, image.height);
    const auto bytes = encode_png(debug);
    write_file(a.debug_png, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  emit(dump_canonical(tree_to_json(result.tree), 2) + "\n", a.output, out);
  return kOk;
}

MiningResult run_mining(const MineArgs& a, const AoiTree& tree) {
  const auto paths = parse_gaze_csv(read_file_text(a.gaze));
  MiningParams params;
  params.level = Level{a.level.value_or(tree.depth())};
  params.n = a.n;
  params.filter.tau = a.tau;
  return mine(paths, tree, params);
}

int cmd_mine(const MineArgs& a, std::ostream& out) {
  const auto tree = load_tree(a.aois);
  auto result = run_mining(a, tree);
  if (a.threshold) {
    const auto op = a.op == "less" ? ThresholdOp::less : ThresholdOp::more;
    result.table = filter_by_threshold(result.table, op, *a.threshold);
  }
  out << dump_canonical(mining_to_json(result, tree), 2) << "\n";
  return kOk;
}

int cmd_similarity(const MineArgs& a, std::ostream& out) {
  const auto tree = load_tree(a.aois);
  const auto result = run_mining(a, tree);
  Json j = similarity_to_json(similarity_matrix(result.table));
  j["level"] = result.params.level.k;
  j["n"] = result.params.n;
  j["tau"] = result.params.filter.tau;
  out << dump_canonical(j, 2) << "\n";
  return kOk;
}

int cmd_layout(const LayoutArgs& a, std::ostream& out) {
  if (a.patterns.empty() && a.aoi.empty()) throw UsageError("empty selection: pass --patterns or --aoi");
  if (!a.aoi.empty() && a.aoi.size() != 1) throw UsageError("--aoi takes a single AOI character");

  const Json table_json = Json::parse(read_file_text(a.table), nullptr, false);
  if (table_json.is_discarded()) throw FormatError(a.table + ": not valid JSON");
  const auto table = table_from_json(table_json);
  const auto tree = load_tree(a.aois);

  LayoutRequest request;
  request.patterns = a.patterns;
  if (!a.aoi.empty()) request.aoi = a.aoi[0];
  request.mode = parse_role(a.mode);
  request.level = Level{a.level.value_or(table.level())};
  request.params = a.params;
  validate(request.params);
  if (request.level.k < 1 || request.level.k > tree.depth()) {
    throw RangeError("level " + std::to_string(request.level.k) + " outside the AOI tree");
  }
  const auto layout = compute_layout(table, tree, request);

  SvgOptions options;
  if (!a.image.empty()) {
    options.stimulus = decode_png(read_file_bytes(a.image));
    options.width = options.stimulus->width;
    options.height = options.stimulus->height;
  }
  emit(render_svg(tree, request.level, layout.graph, options), a.output, out);
  if (!a.json_output.empty()) {
    write_file(a.json_output, dump_canonical(layout_to_json(layout.graph, layout.patterns), 2) + "\n");
  }
  return kOk;
}

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  // Block the shutdown signals before any thread starts so that only
  // sigwait() below sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  AnalysisService service(a.data_dir);
  HttpServer server(service);
  const int port = server.bind(a.host, a.port);
  if (port < 0) {
    err << "gazegram serve: cannot bind " << a.host << ":" << a.port << "\n";
    return kFailure;
  }
  std::thread listener([&server] { server.listen(); });
  server.wait_until_ready();
  out << "listening on http://" << a.host << ":" << port << std::endl;

  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  listener.join();
  out << "shutting down" << std::endl;
  return kOk;
}

const char* env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eye-tracking AOI detection, transition mining and pattern layout", "gazegram"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  DetectArgs detect;
  auto* d = app.add_subcommand("detect", "Detect rectangular AOIs in a stimulus PNG");
  d->add_option("image", detect.image, "Stimulus PNG")->required()->check(CLI::ExistingFile);
  d->add_option("--cell-size", detect.params.cell_size, "Mosaic cell size in px")
      ->capture_default_str()->check(CLI::PositiveNumber);
  d->add_option("--colors", detect.params.colors, "Palette size for quantization")
      ->capture_default_str()->check(CLI::Range(2, 255));
  d->add_option("-o,--output", detect.output, "Output AOI JSON (default: stdout)");
  d->add_option("--debug-png", detect.debug_png, "Write the quantized grid with candidate and final rects");

  MineArgs mine_args;
  const auto add_mining = [](CLI::App* sub, MineArgs& m) {
    sub->add_option("gaze", m.gaze, "Gaze CSV (participant,t,x,y)")->required()->check(CLI::ExistingFile);
    sub->add_option("aois", m.aois, "AOI tree JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--level", m.level, "Hierarchy level k (default: deepest)");
    sub->add_option("--n", m.n, "N-gram length")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--tau", m.tau, "Minimum dwell in samples")->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto* m = app.add_subcommand("mine", "Mine N-gram transition patterns; table JSON on stdout");
  add_mining(m, mine_args);
  m->add_option("--threshold", mine_args.threshold, "Keep patterns whose total passes this threshold")
      ->check(CLI::NonNegativeNumber);
  m->add_option("--op", mine_args.op, "Threshold comparison")
      ->capture_default_str()->check(CLI::IsMember({"more", "less"}));

  MineArgs sim_args;
  auto* s = app.add_subcommand("similarity", "Cosine similarity between participants' pattern vectors");
  add_mining(s, sim_args);

  LayoutArgs layout;
  auto* l = app.add_subcommand("layout", "Lay out selected patterns over the AOIs and write SVG");
  l->add_option("table", layout.table, "Pattern table JSON from 'mine'")->required()->check(CLI::ExistingFile);
  l->add_option("aois", layout.aois, "AOI tree JSON")->required()->check(CLI::ExistingFile);
  l->add_option("--patterns", layout.patterns, "Comma-separated pattern strings")->delimiter(',');
  l->add_option("--aoi", layout.aoi, "Select every pattern touching this AOI character");
  l->add_option("--mode", layout.mode, "Role for --aoi")
      ->capture_default_str()->check(CLI::IsMember({"starts", "passes", "arrives"}));
  l->add_option("--level", layout.level, "Display level (default: the table's level)");
  l->add_option("--seed", layout.params.seed, "Layout RNG seed")->capture_default_str();
  l->add_option("--iterations", layout.params.iterations, "Force steps")->capture_default_str();
  l->add_option("--image", layout.image, "Embed this stimulus PNG under the graph")->check(CLI::ExistingFile);
  l->add_option("-o,--output", layout.output, "Output SVG (default: stdout)");
  l->add_option("--layout-json", layout.json_output, "Also write node/edge layout JSON");

  ServeArgs serve;
  serve.data_dir = env_or("DATA_DIR", "data");
  serve.port = std::atoi(env_or("PORT", "8080"));
  auto* sv = app.add_subcommand("serve", "Run the HTTP/JSON analysis service");
  sv->add_option("--port", serve.port, "TCP port (env PORT; 0 picks a free port)")
      ->capture_default_str()->check(CLI::Range(0, 65535));
  sv->add_option("--data-dir", serve.data_dir, "Session directory (env DATA_DIR)")->capture_default_str();
  sv->add_option("--host", serve.host, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (d->parsed()) return cmd_detect(detect, out);
    if (m->parsed()) return cmd_mine(mine_args, out);
    if (s->parsed()) return cmd_similarity(sim_args, out);
    if (l->parsed()) return cmd_layout(layout, out);
    if (sv->parsed()) return cmd_serve(serve, out, err);
  } catch (const UsageError& e) {
    err << "gazegram: " << e.what() << "\n";
    return kUsage;
  } catch (const ServiceError& e) {
    err << "gazegram: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "gazegram: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace gazegram::cli
