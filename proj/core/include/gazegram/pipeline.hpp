#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/encoding.hpp"
#include "gazegram/io.hpp"
#include "gazegram/layout.hpp"
#include "gazegram/mining.hpp"

namespace gazegram {

struct MiningParams {
  Level level;
  int n = 2;
  FilterParams filter;
};

/// Throws ArgumentError / RangeError when the parameters do not fit `tree`.
void validate(const MiningParams& params, const AoiTree& tree);

struct ParticipantSequence {
  std::string participant;
  RleSequence rle;           // at the requested level
  std::string transitions;
};

struct MiningResult {
  MiningParams params;
  std::vector<ParticipantSequence> sequences;
  PatternTable table;
};

/// encode -> run-length -> project -> filter -> N-gram count, per participant.
MiningResult mine(const std::vector<ScanPath>& paths, const AoiTree& tree,
                  const MiningParams& params);

/// Pattern table plus sequences, alphabet and (with two or more
/// participants) the similarity matrix.
Json mining_to_json(const MiningResult& result, const AoiTree& tree);

struct LayoutRequest {
  std::vector<std::string> patterns;  // explicit selection (pattern text is the id)
  std::optional<char> aoi;            // or: every pattern touching this AOI ...
  AoiRole mode = AoiRole::passes;     // ... in this role
  Level level;
  LayoutParams params;
};

struct LayoutResult {
  std::vector<std::string> patterns;
  TransitionGraph graph;
};

/// Resolves the selection against `table`, builds the graph on the cut at
/// the request level and runs the layout. Throws ArgumentError for an empty
/// selection and LookupError for a pattern missing from the table.
LayoutResult compute_layout(const PatternTable& table, const AoiTree& tree,
                            const LayoutRequest& request);

AoiRole parse_role(std::string_view text);
const char* role_label(AoiRole role);

}  // namespace gazegram
