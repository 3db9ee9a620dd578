#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "gazegram/autodetect.hpp"
#include "gazegram/io.hpp"
#include "gazegram/pipeline.hpp"

namespace gazegram {

inline constexpr const char* kVersion = "0.1.0";

/// Failure carrying the HTTP status the service maps it to.
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& message, Json details = nullptr)
      : Error(message), status_(status), details_(std::move(details)) {}
  int status() const { return status_; }
  const Json& details() const { return details_; }

 private:
  int status_;
  Json details_;
};

struct PatternQuery {
  std::optional<int> level;  // default: finest level
  int n = 2;
  std::int64_t tau = 6;
  std::string mode = "total";          // total | diff
  std::optional<std::string> sort;     // focus participant (total mode)
  std::optional<std::string> p;
  std::optional<std::string> q;
  std::optional<double> threshold;
  ThresholdOp op = ThresholdOp::more;
};

struct LayoutQuery {
  std::vector<std::string> patterns;
  std::optional<char> aoi;
  AoiRole mode = AoiRole::passes;
  std::optional<int> level;
  int n = 2;
  std::int64_t tau = 6;
  LayoutParams params;
};

/// Session store behind the HTTP API. Each session is persisted as one
/// JSON file (base64 image included) under the data directory. Reads run
/// concurrently; mutations of one session are serialized.
class AnalysisService {
 public:
  /// Loads every session file already in `data_dir`. Throws ServiceError
  /// when the directory is missing or not writable.
  explicit AnalysisService(std::filesystem::path data_dir);

  std::string create_session(std::span<const std::uint8_t> image, std::string_view gaze_csv);
  Json list_sessions() const;
  Json get_session(const std::string& id) const;
  std::string export_gaze_csv(const std::string& id) const;

  Json auto_detect(const std::string& id, const DetectionParams& params);
  /// Applies add-rect / delete / group / ungroup ops atomically.
  Json edit_aois(const std::string& id, const Json& ops);

  Json query_patterns(const std::string& id, const PatternQuery& query) const;
  Json query_similarity(const std::string& id, std::optional<int> level, int n,
                        std::int64_t tau) const;
  Json compute_layout(const std::string& id, const LayoutQuery& query);
  std::string export_svg(const std::string& id, std::optional<int> level, bool with_image) const;

  std::size_t cache_hits() const { return cache_hits_.load(); }
  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  struct CacheKey {
    std::uint64_t revision;
    int level;
    int n;
    std::int64_t tau;
    auto operator<=>(const CacheKey&) const = default;
  };

  struct LastLayout {
    int level = 1;
    LayoutResult result;
  };

  struct Session {
    std::string id;
    std::vector<std::uint8_t> image_png;
    RgbImage stimulus;
    std::vector<ScanPath> paths;
    AoiTree tree;
    DetectionParams detection;
    MiningParams mining;
    std::uint64_t revision = 0;

    mutable std::shared_mutex lock;
    mutable std::mutex cache_lock;
    mutable std::map<CacheKey, std::shared_ptr<const MiningResult>> cache;
    std::optional<LastLayout> last_layout;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<const MiningResult> mined(const Session& s, const MiningParams& params) const;
  MiningParams resolve(const Session& s, std::optional<int> level, int n, std::int64_t tau) const;
  void commit(Session& s);
  void persist(const Session& s) const;
  void load(const std::filesystem::path& file);
  static Json summary(const Session& s);

  std::filesystem::path data_dir_;
  mutable std::shared_mutex sessions_lock_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
  mutable std::atomic<std::size_t> cache_hits_{0};
};

/// Resolves an incoming rect against existing leaves: the largest sub-rect
/// of `incoming` (clamped to `bounds`) that overlaps no leaf. Empty when
/// nothing is left.
Rect trim_to_free_space(const Rect& incoming, const AoiTree& tree, const Rect& bounds);

}  // namespace gazegram
