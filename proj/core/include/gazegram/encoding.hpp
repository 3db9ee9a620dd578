#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/model.hpp"

namespace gazegram {

/// One AOI symbol (or kBlank) per gaze sample.
struct EncodedSequence {
  std::string participant;
  std::string chars;
};

/// A maximal run: `symbol` repeated `length` samples.
struct RleUnit {
  char symbol = kBlank;
  std::int64_t length = 1;
  friend bool operator==(const RleUnit&, const RleUnit&) = default;
};

struct RleSequence {
  std::string participant;
  std::vector<RleUnit> units;
};

/// Minimum dwell (in samples) a run needs to survive transition filtering.
struct FilterParams {
  std::int64_t tau = 6;
};

EncodedSequence encode_path(const ScanPath& path, const AoiTree& tree);

RleSequence rle_encode(const EncodedSequence& seq);

/// Inverse of rle_encode. Throws FormatError for a unit with length < 1.
EncodedSequence rle_expand(const RleSequence& rle);

/// Textual form: the symbol alone for a single sample, otherwise the symbol
/// followed by the decimal run length ("A3B2A").
std::string render_rle(const RleSequence& rle);

/// Parses render_rle output. Throws FormatError on a leading digit, a zero
/// count or an overflowing count. Adjacent equal symbols are kept as given.
RleSequence parse_rle(std::string_view text, std::string participant = {});

/// Replaces each leaf symbol by its effective symbol at `level` and merges
/// runs that become adjacent.
RleSequence project_to_level(const RleSequence& rle, const AoiTree& tree, Level level);
RleSequence project_with_map(const RleSequence& rle, const SymbolMap& map);

/// Drops blank runs and runs shorter than tau, then merges equal neighbours;
/// one symbol per surviving run.
std::string to_transition_string(const RleSequence& rle, const FilterParams& params);

}  // namespace gazegram
