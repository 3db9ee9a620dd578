#include "gazegram/mining.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gazegram/errors.hpp"

namespace gazegram {

NgramCounts extract_ngrams(std::string_view s, int n) {
  if (n < 1) throw ArgumentError("N must be >= 1 (got " + std::to_string(n) + ")");
  NgramCounts out;
  const auto width = static_cast<std::size_t>(n);
  if (s.size() < width) return out;
  for (std::size_t i = 0; i + width <= s.size(); ++i) ++out[std::string(s.substr(i, width))];
  return out;
}

bool PatternTable::has_participant(std::string_view p) const {
  return std::find(participants_.begin(), participants_.end(), p) != participants_.end();
}

void PatternTable::add_participant(const std::string& participant, const NgramCounts& counts) {
  if (has_participant(participant)) {
    throw ArgumentError("duplicate participant " + participant);
  }
  participants_.push_back(participant);
  for (const auto& [pattern, c] : counts) {
    if (c <= 0) continue;
    counts_[pattern][participant] = c;
    totals_[pattern] += c;
  }
}

std::int64_t PatternTable::total(const std::string& pattern) const {
  const auto it = totals_.find(pattern);
  return it == totals_.end() ? 0 : it->second;
}

std::int64_t PatternTable::support(const std::string& pattern) const {
  const auto it = counts_.find(pattern);
  return it == counts_.end() ? 0 : static_cast<std::int64_t>(it->second.size());
}

std::int64_t PatternTable::count(const std::string& pattern, const std::string& participant) const {
  const auto it = counts_.find(pattern);
  if (it == counts_.end()) return 0;
  const auto jt = it->second.find(participant);
  return jt == it->second.end() ? 0 : jt->second;
}

NgramCounts PatternTable::vector_of(const std::string& participant) const {
  if (!has_participant(participant)) throw LookupError("unknown participant " + participant);
  NgramCounts out;
  for (const auto& [pattern, per] : counts_) {
    const auto it = per.find(participant);
    if (it != per.end()) out[pattern] = it->second;
  }
  return out;
}

std::vector<std::string> PatternTable::sorted_patterns() const {
  std::vector<std::string> out;
  out.reserve(totals_.size());
  for (const auto& [pattern, _] : totals_) out.push_back(pattern);
  std::stable_sort(out.begin(), out.end(), [this](const std::string& a, const std::string& b) {
    return totals_.at(a) > totals_.at(b);
  });
  return out;
}

std::vector<std::string> PatternTable::sorted_for(const std::string& participant) const {
  if (!has_participant(participant)) throw LookupError("unknown participant " + participant);
  auto out = sorted_patterns();
  std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    return count(a, participant) > count(b, participant);
  });
  return out;
}

PatternTable PatternTable::restricted_to(const std::vector<std::string>& patterns) const {
  PatternTable out(level_, n_);
  out.participants_ = participants_;
  for (const auto& p : patterns) {
    const auto it = counts_.find(p);
    if (it == counts_.end()) continue;
    out.counts_[p] = it->second;
    out.totals_[p] = totals_.at(p);
  }
  return out;
}

PatternTable build_table(const std::vector<std::pair<std::string, std::string>>& strings,
                         int n, int level) {
  PatternTable table(level, n);
  for (const auto& [participant, s] : strings) {
    table.add_participant(participant, extract_ngrams(s, n));
  }
  return table;
}

PatternTable filter_by_threshold(const PatternTable& table, ThresholdOp op, double threshold) {
  if (!(threshold >= 0.0)) throw ArgumentError("threshold must be >= 0");
  std::vector<std::string> keep;
  for (const auto& [pattern, total] : table.totals()) {
    const auto t = static_cast<double>(total);
    if ((op == ThresholdOp::more && t > threshold) || (op == ThresholdOp::less && t < threshold)) {
      keep.push_back(pattern);
    }
  }
  return table.restricted_to(keep);
}

DiffReport diff(const PatternTable& table, const std::string& p, const std::string& q) {
  if (p == q) throw ArgumentError("diff needs two distinct participants");
  const auto vp = table.vector_of(p);
  const auto vq = table.vector_of(q);

  DiffReport report;
  report.p = p;
  report.q = q;
  for (const auto& [pattern, cp] : vp) {
    const auto it = vq.find(pattern);
    if (it == vq.end()) {
      report.unique_p.push_back({pattern, cp});
      continue;
    }
    const auto cq = it->second;
    CommonEntry e{pattern, std::min(cp, cq), cp > cq ? cp - cq : cq - cp, {}};
    if (cp > cq) e.owner = p;
    if (cq > cp) e.owner = q;
    report.common.push_back(std::move(e));
  }
  for (const auto& [pattern, cq] : vq) {
    if (!vp.contains(pattern)) report.unique_q.push_back({pattern, cq});
  }

  std::stable_sort(report.common.begin(), report.common.end(),
                   [](const CommonEntry& a, const CommonEntry& b) {
                     if (a.base != b.base) return a.base > b.base;
                     return a.surplus > b.surplus;
                   });
  const auto by_count = [](const UniqueEntry& a, const UniqueEntry& b) { return a.count > b.count; };
  std::stable_sort(report.unique_p.begin(), report.unique_p.end(), by_count);
  std::stable_sort(report.unique_q.begin(), report.unique_q.end(), by_count);
  return report;
}

double cosine_of(const NgramCounts& a, const NgramCounts& b) {
  if (!a.empty() && a == b) return 1.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [pattern, ca] : a) {
    na += static_cast<double>(ca) * static_cast<double>(ca);
    const auto it = b.find(pattern);
    if (it != b.end()) dot += static_cast<double>(ca) * static_cast<double>(it->second);
  }
  for (const auto& [_, cb] : b) nb += static_cast<double>(cb) * static_cast<double>(cb);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double cosine(const PatternTable& table, const std::string& p, const std::string& q) {
  return cosine_of(table.vector_of(p), table.vector_of(q));
}

SimilarityMatrix similarity_matrix(const PatternTable& table) {
  const auto& people = table.participants();
  if (people.size() < 2) throw ArgumentError("similarity needs at least two participants");

  std::vector<NgramCounts> vectors;
  vectors.reserve(people.size());
  for (const auto& p : people) vectors.push_back(table.vector_of(p));

  SimilarityMatrix m;
  m.participants = people;
  const std::size_t n = people.size();
  m.values.assign(n, std::vector<double>(n, 0.0));
  double best = -1.0;
  double worst = 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    m.values[i][i] = vectors[i].empty() ? 0.0 : 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = cosine_of(vectors[i], vectors[j]);
      m.values[i][j] = v;
      m.values[j][i] = v;
      if (v > best) {
        best = v;
        m.most_similar = {i, j};
      }
      if (v < worst) {
        worst = v;
        m.least_similar = {i, j};
      }
    }
  }
  return m;
}

std::vector<std::string> patterns_through_aoi(const PatternTable& table, char symbol,
                                              AoiRole mode) {
  std::vector<std::string> out;
  for (const auto& pattern : table.sorted_patterns()) {
    if (pattern.empty()) continue;
    bool hit = false;
    switch (mode) {
      case AoiRole::starts:
        hit = pattern.front() == symbol;
        break;
      case AoiRole::arrives:
        hit = pattern.back() == symbol;
        break;
      case AoiRole::passes:
        hit = pattern.find(symbol) != std::string::npos;
        break;
    }
    if (hit) out.push_back(pattern);
  }
  return out;
}

}  // namespace gazegram
