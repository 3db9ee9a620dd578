#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazegram/aoi_tree.hpp"
#include "gazegram/encoding.hpp"
#include "gazegram/errors.hpp"
#include "gazegram/layout.hpp"
#include "gazegram/mining.hpp"
#include "gazegram/model.hpp"

namespace gazegram {

using Json = nlohmann::json;

// ---- images ---------------------------------------------------------------

/// Decodes PNG bytes to RGB; alpha is composited over white. Throws
/// FormatError when the bytes are not a PNG.
RgbImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const RgbImage& image);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// ---- gaze CSV ---------------------------------------------------------------

/// Malformed gaze CSV. `row()` is the 1-based line number (header = 1).
class GazeCsvError : public FormatError {
 public:
  GazeCsvError(std::size_t row, const std::string& what)
      : FormatError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Parses `participant,t,x,y` rows. Participants keep first-appearance
/// order; t must be non-decreasing per participant.
std::vector<ScanPath> parse_gaze_csv(std::string_view text);
std::string write_gaze_csv(const std::vector<ScanPath>& paths);

// ---- JSON -------------------------------------------------------------------

/// Serializes with sorted keys and every floating value printed with six
/// decimals. `indent < 0` gives a compact single line.
std::string dump_canonical(const Json& value, int indent = -1);

Json node_to_json(const AoiNode& node);
Json tree_to_json(const AoiTree& tree);
/// Accepts the canonical node layout; throws FormatError on shape errors.
AoiTree tree_from_json(const Json& value);

/// Symbol -> leaf id table.
Json alphabet_to_json(const AoiTree& tree);

Json table_to_json(const PatternTable& table, const std::vector<std::string>& order);
/// Reads the "patterns" list back (per-participant counts and order).
PatternTable table_from_json(const Json& value);

Json diff_to_json(const DiffReport& report);
Json similarity_to_json(const SimilarityMatrix& matrix);
Json layout_to_json(const TransitionGraph& graph, const std::vector<std::string>& patterns);

}  // namespace gazegram
