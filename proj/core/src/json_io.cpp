#include <cmath>
#include <cstdio>

#include "gazegram/io.hpp"

namespace gazegram {
namespace {

void dump_into(const Json& v, int indent, int depth, std::string& out) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out.push_back('\n');
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (const auto& [key, child] : v.items()) {  // std::map order: sorted keys
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(child, indent, depth + 1, out);
      }
      newline(depth);
      out.push_back('}');
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out.push_back('[');
      bool first = true;
      for (const auto& child : v) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        dump_into(child, indent, depth + 1, out);
      }
      newline(depth);
      out.push_back(']');
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", d == 0.0 ? 0.0 : d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

std::string symbol_string(char c) { return std::string(1, c); }

char symbol_from(const Json& v, const char* what) {
  if (!v.is_string() || v.get<std::string>().size() != 1) {
    throw FormatError(std::string(what) + " must be a one-character string");
  }
  return v.get<std::string>().front();
}

AoiNode node_from_json(const Json& v) {
  if (!v.is_object()) throw FormatError("AOI node must be an object");
  AoiNode node;
  try {
    node.id = v.at("id").get<int>();
    node.label = v.value("label", std::string{});
    if (v.contains("char")) node.symbol = symbol_from(v.at("char"), "char");
    const bool has_rect = v.contains("rect") && !v.at("rect").is_null();
    const bool has_children = v.contains("children") && !v.at("children").empty();
    if (has_rect) {
      const auto& r = v.at("rect");
      if (!r.is_array() || r.size() != 4) throw FormatError("rect must be [x,y,w,h]");
      node.rect = Rect{r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), r[3].get<int>()};
      node.kind = NodeKind::leaf;
    } else {
      node.kind = NodeKind::group;
    }
    if (v.contains("children")) {
      if (!v.at("children").is_array()) throw FormatError("children must be an array");
      for (const auto& c : v.at("children")) node.children.push_back(node_from_json(c));
    }
    if (has_rect && has_children) node.kind = NodeKind::leaf;  // validate_tree reports it
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed AOI node: ") + e.what());
  }
  return node;
}

}  // namespace

std::string dump_canonical(const Json& value, int indent) {
  std::string out;
  dump_into(value, indent, 0, out);
  return out;
}

Json node_to_json(const AoiNode& node) {
  Json j;
  j["id"] = node.id;
  j["label"] = node.label;
  j["char"] = symbol_string(node.symbol);
  if (node.rect) {
    j["rect"] = {node.rect->x, node.rect->y, node.rect->w, node.rect->h};
  } else {
    j["rect"] = nullptr;
  }
  j["children"] = Json::array();
  for (const auto& c : node.children) j["children"].push_back(node_to_json(c));
  return j;
}

Json tree_to_json(const AoiTree& tree) { return node_to_json(tree.root()); }

AoiTree tree_from_json(const Json& value) { return AoiTree(node_from_json(value)); }

Json alphabet_to_json(const AoiTree& tree) {
  Json j = Json::object();
  for (const auto* leaf : tree.leaves()) j[symbol_string(leaf->symbol)] = leaf->id;
  return j;
}

Json table_to_json(const PatternTable& table, const std::vector<std::string>& order) {
  Json j;
  j["level"] = table.level();
  j["n"] = table.n();
  j["participants"] = table.participants();
  j["patterns"] = Json::array();
  for (const auto& pattern : order) {
    Json per = Json::object();
    const auto it = table.counts().find(pattern);
    if (it != table.counts().end()) {
      for (const auto& [participant, c] : it->second) per[participant] = c;
    }
    j["patterns"].push_back({{"chars", pattern},
                             {"total", table.total(pattern)},
                             {"support", table.support(pattern)},
                             {"perParticipant", per}});
  }
  return j;
}

PatternTable table_from_json(const Json& value) {
  try {
    PatternTable table(value.at("level").get<int>(), value.at("n").get<int>());
    std::vector<std::string> participants;
    if (value.contains("participants")) {
      participants = value.at("participants").get<std::vector<std::string>>();
    }
    std::map<std::string, NgramCounts> per_participant;
    for (const auto& p : value.at("patterns")) {
      const auto chars = p.at("chars").get<std::string>();
      for (const auto& [participant, c] : p.at("perParticipant").items()) {
        per_participant[participant][chars] = c.get<std::int64_t>();
        if (std::find(participants.begin(), participants.end(), participant) ==
            participants.end()) {
          participants.push_back(participant);
        }
      }
    }
    for (const auto& participant : participants) {
      table.add_participant(participant, per_participant[participant]);
    }
    return table;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed pattern table: ") + e.what());
  }
}

Json diff_to_json(const DiffReport& report) {
  Json j;
  j["p"] = report.p;
  j["q"] = report.q;
  j["common"] = Json::array();
  for (const auto& c : report.common) {
    j["common"].push_back({{"chars", c.pattern},
                           {"base", c.base},
                           {"surplus", c.surplus},
                           {"owner", c.owner.empty() ? Json(nullptr) : Json(c.owner)}});
  }
  const auto uniques = [](const std::vector<UniqueEntry>& list) {
    Json arr = Json::array();
    for (const auto& u : list) arr.push_back({{"chars", u.pattern}, {"count", u.count}});
    return arr;
  };
  j["uniqueP"] = uniques(report.unique_p);
  j["uniqueQ"] = uniques(report.unique_q);
  return j;
}

Json similarity_to_json(const SimilarityMatrix& matrix) {
  Json j;
  j["participants"] = matrix.participants;
  j["values"] = Json::array();
  for (const auto& row : matrix.values) {
    Json r = Json::array();
    for (double v : row) r.push_back(v);
    j["values"].push_back(r);
  }
  const auto pair = [&](const std::pair<std::size_t, std::size_t>& p) {
    return Json{{"p", matrix.participants[p.first]},
                {"q", matrix.participants[p.second]},
                {"value", matrix.values[p.first][p.second]}};
  };
  j["mostSimilar"] = pair(matrix.most_similar);
  j["leastSimilar"] = pair(matrix.least_similar);
  return j;
}

Json layout_to_json(const TransitionGraph& graph, const std::vector<std::string>& patterns) {
  double max_weight = 0.0;
  for (const auto& e : graph.edges) max_weight = std::max(max_weight, e.weight);

  Json j;
  j["nodes"] = Json::array();
  for (const auto& n : graph.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"aoi", n.aoi},
                          {"char", symbol_string(n.symbol)},
                          {"role", role_name(n.role)},
                          {"color", role_color(n.role)},
                          {"x", n.position.x},
                          {"y", n.position.y}});
  }
  j["edges"] = Json::array();
  for (const auto& e : graph.edges) {
    j["edges"].push_back({{"from", e.from},
                          {"to", e.to},
                          {"weight", e.weight},
                          {"crossGroup", e.cross_group},
                          {"pattern", e.pattern},
                          {"color", edge_color(e, max_weight)}});
  }
  j["patterns"] = patterns;
  return j;
}

}  // namespace gazegram
