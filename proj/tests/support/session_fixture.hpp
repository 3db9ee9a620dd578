#pragma once

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gazegram/io.hpp"

namespace fixtures {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gazegram-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

/// The planted stimulus drawn as solid blocks on white, PNG-encoded.
inline std::vector<std::uint8_t> planted_png() {
  const auto stim = planted_stimulus();
  gazegram::RgbImage img(stim.width, stim.height);
  img.fill_rect(stim.aois[0], 120, 0, 0);
  img.fill_rect(stim.aois[1], 0, 0, 120);
  img.fill_rect(stim.aois[2], 0, 90, 0);
  return gazegram::encode_png(img);
}

/// Planted gaze for `participants` people; the last two share a seed.
inline std::vector<gazegram::ScanPath> planted_paths(int participants, int episodes = 40) {
  std::vector<gazegram::ScanPath> out;
  for (int i = 0; i < participants; ++i) {
    const bool twin = participants >= 3 && i == participants - 1;
    const std::uint64_t seed = twin ? 1000 + static_cast<std::uint64_t>(i - 1) : 1000 + static_cast<std::uint64_t>(i);
    const double detour = 0.3 + 0.4 * static_cast<double>(twin ? i - 1 : i) / std::max(1, participants - 1);
    out.push_back(planted_path("P" + std::to_string(i + 1), seed, detour, episodes));
  }
  return out;
}

}  // namespace fixtures
