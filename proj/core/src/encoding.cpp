#include "gazegram/encoding.hpp"

#include <cctype>
#include <limits>

#include "gazegram/errors.hpp"

namespace gazegram {
namespace {

void push_run(std::vector<RleUnit>& units, char symbol, std::int64_t length) {
  if (!units.empty() && units.back().symbol == symbol) {
    units.back().length += length;
  } else {
    units.push_back({symbol, length});
  }
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

EncodedSequence encode_path(const ScanPath& path, const AoiTree& tree) {
  EncodedSequence seq;
  seq.participant = path.participant;
  seq.chars.reserve(path.points.size());
  for (const auto& p : path.points) seq.chars.push_back(locate_point(p, tree));
  return seq;
}

RleSequence rle_encode(const EncodedSequence& seq) {
  RleSequence rle;
  rle.participant = seq.participant;
  for (char c : seq.chars) push_run(rle.units, c, 1);
  return rle;
}

EncodedSequence rle_expand(const RleSequence& rle) {
  EncodedSequence seq;
  seq.participant = rle.participant;
  for (const auto& u : rle.units) {
    if (u.length < 1) {
      throw FormatError(std::string("run of '") + u.symbol + "' has length " +
                        std::to_string(u.length));
    }
    seq.chars.append(static_cast<std::size_t>(u.length), u.symbol);
  }
  return seq;
}

std::string render_rle(const RleSequence& rle) {
  std::string out;
  for (const auto& u : rle.units) {
    out.push_back(u.symbol);
    if (u.length != 1) out += std::to_string(u.length);
  }
  return out;
}

RleSequence parse_rle(std::string_view text, std::string participant) {
  RleSequence rle;
  rle.participant = std::move(participant);
  std::size_t i = 0;
  while (i < text.size()) {
    const char symbol = text[i];
    if (is_digit(symbol)) {
      throw FormatError("run length without a symbol at offset " + std::to_string(i));
    }
    ++i;
    std::int64_t length = 1;
    if (i < text.size() && is_digit(text[i])) {
      length = 0;
      const std::size_t start = i;
      while (i < text.size() && is_digit(text[i])) {
        const int d = text[i] - '0';
        if (length > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
          throw FormatError("run length overflow at offset " + std::to_string(start));
        }
        length = length * 10 + d;
        ++i;
      }
      if (length < 1) {
        throw FormatError("run length must be >= 1 at offset " + std::to_string(start));
      }
    }
    rle.units.push_back({symbol, length});
  }
  return rle;
}

RleSequence project_with_map(const RleSequence& rle, const SymbolMap& map) {
  RleSequence out;
  out.participant = rle.participant;
  for (const auto& u : rle.units) {
    push_run(out.units, map[static_cast<unsigned char>(u.symbol)], u.length);
  }
  return out;
}

RleSequence project_to_level(const RleSequence& rle, const AoiTree& tree, Level level) {
  return project_with_map(rle, projection_map(tree, level));
}

std::string to_transition_string(const RleSequence& rle, const FilterParams& params) {
  if (params.tau < 1) throw ArgumentError("tau must be >= 1");
  std::string out;
  for (const auto& u : rle.units) {
    if (u.symbol == kBlank || u.length < params.tau) continue;
    if (out.empty() || out.back() != u.symbol) out.push_back(u.symbol);
  }
  return out;
}

}  // namespace gazegram
