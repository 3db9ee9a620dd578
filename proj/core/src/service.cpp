#include "gazegram/service.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "gazegram/svg.hpp"

namespace gazegram {
namespace {

std::vector<int> coordinates(int lo, int hi, const std::vector<int>& inner) {
  std::vector<int> out{lo, hi};
  for (int v : inner) {
    if (v > lo && v < hi) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string session_file_name(const std::string& id) { return id + ".json"; }

ServiceError translate(const Error& e, int fallback) {
  if (dynamic_cast<const ArgumentError*>(&e) || dynamic_cast<const RangeError*>(&e)) {
    return ServiceError(400, e.what());
  }
  if (dynamic_cast<const LookupError*>(&e)) return ServiceError(404, e.what());
  if (dynamic_cast<const StructureError*>(&e) || dynamic_cast<const ConsistencyError*>(&e)) {
    return ServiceError(409, e.what());
  }
  return ServiceError(fallback, e.what());
}

}  // namespace

Rect trim_to_free_space(const Rect& incoming, const AoiTree& tree, const Rect& bounds) {
  const Rect clipped = intersection(incoming, bounds);
  if (clipped.empty()) return Rect{clipped.x, clipped.y, 0, 0};

  std::vector<Rect> blockers;
  for (const auto* leaf : tree.leaves()) {
    if (leaf->rect && leaf->rect->intersects(clipped)) blockers.push_back(*leaf->rect);
  }
  if (blockers.empty()) return clipped;

  std::vector<int> xs, ys;
  for (const auto& b : blockers) {
    xs.push_back(b.x);
    xs.push_back(b.right());
    ys.push_back(b.y);
    ys.push_back(b.bottom());
  }
  const auto cx = coordinates(clipped.x, clipped.right(), xs);
  const auto cy = coordinates(clipped.y, clipped.bottom(), ys);

  Rect best{clipped.x, clipped.y, 0, 0};
  for (std::size_t a = 0; a < cx.size(); ++a) {
    for (std::size_t b = 0; b < cy.size(); ++b) {
      for (std::size_t c = cx.size(); c-- > a + 1;) {
        for (std::size_t d = cy.size(); d-- > b + 1;) {
          const Rect r{cx[a], cy[b], cx[c] - cx[a], cy[d] - cy[b]};
          if (r.area() <= best.area()) continue;
          const bool free = std::none_of(blockers.begin(), blockers.end(),
                                         [&](const Rect& o) { return o.intersects(r); });
          if (free) best = r;
        }
      }
    }
  }
  return best;
}

AnalysisService::AnalysisService(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(data_dir_, ec)) {
    throw ServiceError(500, "data directory " + data_dir_.string() + " does not exist");
  }
  const auto probe = data_dir_ / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw ServiceError(500, "data directory " + data_dir_.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) load(f);
}

void AnalysisService::load(const std::filesystem::path& file) {
  const Json j = Json::parse(read_file_text(file), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("id")) return;
  auto s = std::make_shared<Session>();
  s->id = j.at("id").get<std::string>();
  s->revision = j.value("revision", std::uint64_t{0});
  s->image_png = base64_decode(j.at("image").get<std::string>());
  s->stimulus = decode_png(s->image_png);
  s->paths = parse_gaze_csv(j.at("gaze").get<std::string>());
  s->tree = tree_from_json(j.at("tree"));
  if (j.contains("detection")) {
    s->detection = {j["detection"].value("cellSize", 8), j["detection"].value("colors", 4)};
  }
  if (j.contains("mining")) {
    s->mining.level = Level{j["mining"].value("level", 1)};
    s->mining.n = j["mining"].value("n", 2);
    s->mining.filter.tau = j["mining"].value("tau", std::int64_t{6});
  }
  unsigned long long number = 0;
  if (std::sscanf(s->id.c_str(), "s%llu", &number) == 1) {
    next_session_ = std::max<std::uint64_t>(next_session_, number + 1);
  }
  sessions_[s->id] = std::move(s);
}

void AnalysisService::persist(const Session& s) const {
  Json j;
  j["id"] = s.id;
  j["revision"] = s.revision;
  j["image"] = base64_encode(s.image_png);
  j["gaze"] = write_gaze_csv(s.paths);
  j["tree"] = tree_to_json(s.tree);
  j["detection"] = {{"cellSize", s.detection.cell_size}, {"colors", s.detection.colors}};
  j["mining"] = {{"level", s.mining.level.k}, {"n", s.mining.n}, {"tau", s.mining.filter.tau}};
  const auto target = data_dir_ / session_file_name(s.id);
  const auto tmp = data_dir_ / (session_file_name(s.id) + ".tmp");
  write_file(tmp, dump_canonical(j));
  std::filesystem::rename(tmp, target);
}

void AnalysisService::commit(Session& s) {
  ++s.revision;
  {
    std::lock_guard guard(s.cache_lock);
    s.cache.clear();
  }
  s.last_layout.reset();
  persist(s);
}

std::shared_ptr<AnalysisService::Session> AnalysisService::find(const std::string& id) const {
  std::shared_lock guard(sessions_lock_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session " + id);
  return it->second;
}

Json AnalysisService::summary(const Session& s) {
  Json participants = Json::array();
  for (const auto& p : s.paths) {
    participants.push_back({{"id", p.participant}, {"points", p.points.size()}});
  }
  return {{"id", s.id},
          {"revision", s.revision},
          {"width", s.stimulus.width},
          {"height", s.stimulus.height},
          {"participants", participants},
          {"depth", s.tree.depth()},
          {"tree", tree_to_json(s.tree)},
          {"alphabet", alphabet_to_json(s.tree)},
          {"detection", {{"cellSize", s.detection.cell_size}, {"colors", s.detection.colors}}}};
}

std::string AnalysisService::create_session(std::span<const std::uint8_t> image,
                                            std::string_view gaze_csv) {
  auto s = std::make_shared<Session>();
  try {
    s->stimulus = decode_png(image);
  } catch (const FormatError& e) {
    throw ServiceError(415, e.what());
  }
  try {
    s->paths = parse_gaze_csv(gaze_csv);
  } catch (const GazeCsvError& e) {
    throw ServiceError(422, e.what(), {{"row", e.row()}});
  }
  for (auto& p : s->paths) clamp_to_stimulus(p, s->stimulus.width, s->stimulus.height);
  s->image_png.assign(image.begin(), image.end());

  std::unique_lock guard(sessions_lock_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_session_++));
  s->id = buf;
  persist(*s);
  const std::string id = s->id;
  sessions_[id] = std::move(s);
  return id;
}

Json AnalysisService::list_sessions() const {
  std::shared_lock guard(sessions_lock_);
  Json out = Json::array();
  for (const auto& [id, s] : sessions_) {
    std::shared_lock session_guard(s->lock);
    out.push_back({{"id", id},
                   {"revision", s->revision},
                   {"participants", s->paths.size()},
                   {"leaves", s->tree.leaf_count()}});
  }
  return out;
}

Json AnalysisService::get_session(const std::string& id) const {
  const auto s = find(id);
  std::shared_lock guard(s->lock);
  return summary(*s);
}

std::string AnalysisService::export_gaze_csv(const std::string& id) const {
  const auto s = find(id);
  std::shared_lock guard(s->lock);
  return write_gaze_csv(s->paths);
}

Json AnalysisService::auto_detect(const std::string& id, const DetectionParams& params) {
  try {
    validate(params);
  } catch (const ArgumentError& e) {
    throw ServiceError(400, e.what());
  }
  const auto s = find(id);
  std::unique_lock guard(s->lock);
  s->tree = detect_aois(s->stimulus, params);
  s->detection = params;
  s->mining.level = Level{s->tree.depth()};
  commit(*s);
  return summary(*s);
}

Json AnalysisService::edit_aois(const std::string& id, const Json& body) {
  const auto s = find(id);
  std::unique_lock guard(s->lock);

  Json ops = body.is_object() && body.contains("ops") ? body.at("ops") : body;
  if (ops.is_object()) ops = Json::array({ops});
  if (!ops.is_array()) throw ServiceError(400, "expected an op object or an ops array");

  const Rect bounds{0, 0, s->stimulus.width, s->stimulus.height};
  AoiTree tree = s->tree;
  Json applied = Json::array();
  try {
    for (const auto& op : ops) {
      const auto kind = op.value("op", std::string{});
      if (kind == "add-rect") {
        const auto& r = op.at("rect");
        const Rect requested{r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(),
                             r.at(3).get<int>()};
        const Rect trimmed = trim_to_free_space(requested, tree, bounds);
        if (trimmed.empty()) {
          throw ServiceError(409, "rect overlaps existing AOIs completely",
                             Json::array({"trimmed-to-empty"}));
        }
        const int new_id = tree.next_id();
        tree = add_leaf(tree, trimmed, op.value("label", std::string{}));
        applied.push_back({{"op", kind},
                           {"id", new_id},
                           {"rect", {trimmed.x, trimmed.y, trimmed.w, trimmed.h}}});
      } else if (kind == "delete") {
        tree = remove_node(tree, op.at("id").get<int>());
        applied.push_back({{"op", kind}, {"id", op.at("id")}});
      } else if (kind == "group") {
        const auto members = op.at("members").get<std::vector<int>>();
        const int new_id = tree.next_id();
        tree = make_group(tree, members, op.value("label", std::string{}));
        applied.push_back({{"op", kind}, {"id", new_id}});
      } else if (kind == "ungroup") {
        tree = ungroup(tree, op.at("id").get<int>());
        applied.push_back({{"op", kind}, {"id", op.at("id")}});
      } else {
        throw ServiceError(400, "unknown op '" + kind + "'");
      }
    }
  } catch (const StructureError& e) {
    throw ServiceError(409, e.what(), Json::array({e.what()}));
  } catch (const Error& e) {
    if (const auto* se = dynamic_cast<const ServiceError*>(&e)) throw *se;
    throw translate(e, 400);
  } catch (const Json::exception& e) {
    throw ServiceError(400, std::string("malformed op: ") + e.what());
  }

  const auto violations = validate_tree(tree, bounds);
  if (!violations.empty()) throw ServiceError(409, "edit leaves an invalid AOI tree", violations);

  s->tree = std::move(tree);
  s->mining.level = Level{std::min(std::max(1, s->mining.level.k), s->tree.depth())};
  commit(*s);
  Json out = summary(*s);
  out["applied"] = applied;
  return out;
}

MiningParams AnalysisService::resolve(const Session& s, std::optional<int> level, int n,
                                      std::int64_t tau) const {
  MiningParams params;
  params.level = Level{level.value_or(s.tree.depth())};
  params.n = n;
  params.filter.tau = tau;
  try {
    validate(params, s.tree);
  } catch (const Error& e) {
    throw ServiceError(400, e.what());
  }
  return params;
}

std::shared_ptr<const MiningResult> AnalysisService::mined(const Session& s,
                                                           const MiningParams& params) const {
  const CacheKey key{s.revision, params.level.k, params.n, params.filter.tau};
  {
    std::lock_guard guard(s.cache_lock);
    const auto it = s.cache.find(key);
    if (it != s.cache.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  auto result = std::make_shared<const MiningResult>(mine(s.paths, s.tree, params));
  std::lock_guard guard(s.cache_lock);
  return s.cache.emplace(key, std::move(result)).first->second;
}

Json AnalysisService::query_patterns(const std::string& id, const PatternQuery& query) const {
  const auto s = find(id);
  std::shared_lock guard(s->lock);
  const auto params = resolve(*s, query.level, query.n, query.tau);
  const auto result = mined(*s, params);
  const PatternTable* table = &result->table;

  PatternTable filtered;
  if (query.threshold) {
    if (*query.threshold < 0) throw ServiceError(400, "threshold must be >= 0");
    filtered = filter_by_threshold(*table, query.op, *query.threshold);
    table = &filtered;
  }

  Json out;
  if (query.mode == "total") {
    std::vector<std::string> order;
    std::vector<std::string> stacking = table->participants();
    if (query.sort) {
      if (!table->has_participant(*query.sort)) {
        throw ServiceError(404, "unknown participant " + *query.sort);
      }
      order = table->sorted_for(*query.sort);
      std::erase(stacking, *query.sort);
      stacking.insert(stacking.begin(), *query.sort);
    } else {
      order = table->sorted_patterns();
    }
    out = table_to_json(*table, order);
    out["stacking"] = stacking;
  } else if (query.mode == "diff") {
    if (!query.p || !query.q) throw ServiceError(400, "diff mode needs p and q");
    if (*query.p == *query.q) throw ServiceError(400, "diff needs two distinct participants");
    for (const auto* who : {&*query.p, &*query.q}) {
      if (!table->has_participant(*who)) throw ServiceError(404, "unknown participant " + *who);
    }
    out = diff_to_json(diff(*table, *query.p, *query.q));
    out["level"] = params.level.k;
    out["n"] = params.n;
  } else {
    throw ServiceError(400, "mode must be total or diff");
  }
  out["mode"] = query.mode;
  out["tau"] = params.filter.tau;
  out["revision"] = s->revision;
  return out;
}

Json AnalysisService::query_similarity(const std::string& id, std::optional<int> level, int n,
                                       std::int64_t tau) const {
  const auto s = find(id);
  std::shared_lock guard(s->lock);
  const auto params = resolve(*s, level, n, tau);
  const auto result = mined(*s, params);
  if (result->table.participants().size() < 2) {
    throw ServiceError(409, "similarity needs at least two participants");
  }
  Json out = similarity_to_json(similarity_matrix(result->table));
  out["level"] = params.level.k;
  out["n"] = params.n;
  out["tau"] = params.filter.tau;
  out["revision"] = s->revision;
  return out;
}

Json AnalysisService::compute_layout(const std::string& id, const LayoutQuery& query) {
  const auto s = find(id);
  // Layout results are cached per session, so take the writer side.
  std::unique_lock guard(s->lock);
  const auto params = resolve(*s, query.level, query.n, query.tau);
  const auto result = mined(*s, params);

  LayoutRequest request;
  request.patterns = query.patterns;
  request.aoi = query.aoi;
  request.mode = query.mode;
  request.level = params.level;
  request.params = query.params;
  if (!request.aoi && request.patterns.empty()) throw ServiceError(400, "empty pattern selection");

  LayoutResult layout;
  try {
    validate(request.params);
    layout = gazegram::compute_layout(result->table, s->tree, request);
  } catch (const Error& e) {
    throw translate(e, 400);
  }
  Json out = layout_to_json(layout.graph, layout.patterns);
  out["level"] = params.level.k;
  out["seed"] = request.params.seed;
  out["revision"] = s->revision;
  s->last_layout = LastLayout{params.level.k, std::move(layout)};
  return out;
}

std::string AnalysisService::export_svg(const std::string& id, std::optional<int> level,
                                        bool with_image) const {
  const auto s = find(id);
  std::shared_lock guard(s->lock);
  int k = level.value_or(s->last_layout ? s->last_layout->level : s->tree.depth());
  if (k < 1 || k > s->tree.depth()) throw ServiceError(400, "level out of range");
  SvgOptions options;
  options.width = s->stimulus.width;
  options.height = s->stimulus.height;
  if (with_image) options.stimulus = s->stimulus;
  const TransitionGraph empty;
  const TransitionGraph& graph =
      s->last_layout && s->last_layout->level == k ? s->last_layout->result.graph : empty;
  return render_svg(s->tree, Level{k}, graph, options);
}

}  // namespace gazegram
