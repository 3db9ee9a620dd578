#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "gazegram/io.hpp"

namespace gazegram {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<ScanPath> parse_gaze_csv(std::string_view text) {
  std::vector<ScanPath> paths;
  std::map<std::string, std::size_t, std::less<>> index;
  std::size_t row = 0;
  bool header_seen = false;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++row;
    if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "participant" || fields[1] != "t" ||
          fields[2] != "x" || fields[3] != "y") {
        throw GazeCsvError(row, "expected header participant,t,x,y");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw GazeCsvError(row, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw GazeCsvError(row, "empty participant");

    GazePoint p;
    if (!parse_number(fields[1], p.t)) throw GazeCsvError(row, "t is not an integer");
    if (!parse_number(fields[2], p.x) || !std::isfinite(p.x)) {
      throw GazeCsvError(row, "x is not a finite number");
    }
    if (!parse_number(fields[3], p.y) || !std::isfinite(p.y)) {
      throw GazeCsvError(row, "y is not a finite number");
    }

    auto it = index.find(fields[0]);
    if (it == index.end()) {
      it = index.emplace(std::string(fields[0]), paths.size()).first;
      paths.push_back({std::string(fields[0]), {}});
    }
    auto& path = paths[it->second];
    if (!path.points.empty() && p.t < path.points.back().t) {
      throw GazeCsvError(row, "t decreases for participant " + path.participant);
    }
    path.points.push_back(p);
  }
  if (!header_seen) throw GazeCsvError(1, "missing header participant,t,x,y");
  return paths;
}

std::string write_gaze_csv(const std::vector<ScanPath>& paths) {
  std::string out = "participant,t,x,y\n";
  char buf[96];
  for (const auto& path : paths) {
    for (const auto& p : path.points) {
      std::snprintf(buf, sizeof buf, ",%lld,%.17g,%.17g\n", static_cast<long long>(p.t), p.x, p.y);
      out += path.participant;
      out += buf;
    }
  }
  return out;
}

}  // namespace gazegram
