#include "gazegram/pipeline.hpp"

#include <algorithm>

namespace gazegram {

void validate(const MiningParams& params, const AoiTree& tree) {
  if (params.level.k < 1 || params.level.k > tree.depth()) {
    throw RangeError("level " + std::to_string(params.level.k) + " outside [1, " +
                     std::to_string(tree.depth()) + "]");
  }
  if (params.n < 1) throw ArgumentError("N must be >= 1");
  if (params.filter.tau < 1) throw ArgumentError("tau must be >= 1");
}

MiningResult mine(const std::vector<ScanPath>& paths, const AoiTree& tree,
                  const MiningParams& params) {
  validate(params, tree);
  const auto map = projection_map(tree, params.level);

  MiningResult result;
  result.params = params;
  std::vector<std::pair<std::string, std::string>> strings;
  for (const auto& path : paths) {
    ParticipantSequence seq;
    seq.participant = path.participant;
    seq.rle = project_with_map(rle_encode(encode_path(path, tree)), map);
    seq.transitions = to_transition_string(seq.rle, params.filter);
    strings.emplace_back(seq.participant, seq.transitions);
    result.sequences.push_back(std::move(seq));
  }
  result.table = build_table(strings, params.n, params.level.k);
  return result;
}

Json mining_to_json(const MiningResult& result, const AoiTree& tree) {
  Json j = table_to_json(result.table, result.table.sorted_patterns());
  j["tau"] = result.params.filter.tau;
  j["alphabet"] = alphabet_to_json(tree);
  j["sequences"] = Json::array();
  for (const auto& s : result.sequences) {
    j["sequences"].push_back(
        {{"participant", s.participant}, {"rle", render_rle(s.rle)}, {"transitions", s.transitions}});
  }
  if (result.table.participants().size() >= 2) {
    const auto sim = similarity_matrix(result.table);
    j["similarity"] = similarity_to_json(sim)["values"];
    j["mostSimilar"] = similarity_to_json(sim)["mostSimilar"];
    j["leastSimilar"] = similarity_to_json(sim)["leastSimilar"];
  }
  return j;
}

LayoutResult compute_layout(const PatternTable& table, const AoiTree& tree,
                            const LayoutRequest& request) {
  LayoutResult result;
  if (request.aoi) {
    result.patterns = patterns_through_aoi(table, *request.aoi, request.mode);
  } else {
    for (const auto& p : request.patterns) {
      if (table.total(p) == 0) throw LookupError("unknown pattern '" + p + "'");
      if (std::find(result.patterns.begin(), result.patterns.end(), p) == result.patterns.end()) {
        result.patterns.push_back(p);
      }
    }
  }
  if (result.patterns.empty()) throw ArgumentError("empty pattern selection");

  std::vector<SelectedPattern> selected;
  for (const auto& p : result.patterns) {
    selected.push_back({p, static_cast<double>(table.total(p))});
  }
  const auto cut = cut_at_level(tree, request.level);
  result.graph = run_layout(build_graph(selected, cut, request.params.seed), request.params);
  return result;
}

AoiRole parse_role(std::string_view text) {
  if (text == "starts") return AoiRole::starts;
  if (text == "passes") return AoiRole::passes;
  if (text == "arrives") return AoiRole::arrives;
  throw ArgumentError("mode must be starts, passes or arrives (got '" + std::string(text) + "')");
}

const char* role_label(AoiRole role) {
  switch (role) {
    case AoiRole::starts:
      return "starts";
    case AoiRole::arrives:
      return "arrives";
    case AoiRole::passes:
      break;
  }
  return "passes";
}

}  // namespace gazegram
