#include "gazegram/aoi_tree.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

#include "gazegram/errors.hpp"

namespace gazegram {
namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz!#$%()*+/:=?@[]^{|}~";

AoiNode make_root() {
  AoiNode root;
  root.id = 0;
  root.label = "root";
  root.kind = NodeKind::group;
  return root;
}

int max_id(const AoiNode& node) {
  int m = node.id;
  for (const auto& c : node.children) m = std::max(m, max_id(c));
  return m;
}

int leaf_depth(const AoiNode& node, int depth) {
  if (node.is_leaf()) return depth;
  int m = 0;
  for (const auto& c : node.children) m = std::max(m, leaf_depth(c, depth + 1));
  return m;
}

void collect_leaves(const AoiNode& node, std::vector<const AoiNode*>& out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

void recompute_symbols(AoiNode& node) {
  if (node.is_leaf()) return;
  for (auto& c : node.children) recompute_symbols(c);
  const AoiNode* big = largest_leaf(node);
  node.symbol = big ? big->symbol : kBlank;
}

AoiNode* find_mut(AoiNode& node, int id) {
  if (node.id == id) return &node;
  for (auto& c : node.children) {
    if (AoiNode* hit = find_mut(c, id)) return hit;
  }
  return nullptr;
}

const AoiNode* find_parent(const AoiNode& node, int id) {
  for (const auto& c : node.children) {
    if (c.id == id) return &node;
    if (const AoiNode* hit = find_parent(c, id)) return hit;
  }
  return nullptr;
}

void prune_empty_groups(AoiNode& node) {
  for (auto& c : node.children) prune_empty_groups(c);
  std::erase_if(node.children, [](const AoiNode& c) {
    return !c.is_leaf() && c.children.empty();
  });
}

void collect_cut(const AoiNode& node, int depth, int k, const AoiNode* top_level,
                 std::vector<CutEntry>& out) {
  for (const auto& c : node.children) {
    const AoiNode* top = depth == 0 ? &c : top_level;
    const int child_depth = depth + 1;
    if (c.is_leaf() || child_depth == k) {
      std::vector<const AoiNode*> leaves;
      collect_leaves(c, leaves);
      if (leaves.empty()) continue;
      CutEntry e;
      e.id = c.id;
      e.label = c.label;
      e.is_group = !c.is_leaf();
      const AoiNode* big = largest_leaf(c);
      e.symbol = big->symbol;
      e.home = big->rect.value_or(Rect{});
      e.bounds = leaf_bounds(c);
      e.top_level_id = top->id;
      e.top_level_is_group = !top->is_leaf();
      for (const auto* l : leaves) e.leaf_symbols.push_back(l->symbol);
      out.push_back(std::move(e));
    } else {
      collect_cut(c, child_depth, k, top, out);
    }
  }
}

}  // namespace

std::string_view aoi_alphabet() { return kAlphabet; }

bool is_aoi_symbol(char c) { return kAlphabet.find(c) != std::string_view::npos; }

AoiTree::AoiTree() : root_(make_root()) { reindex(); }

AoiTree::AoiTree(AoiNode root) : root_(std::move(root)) {
  root_.kind = NodeKind::group;
  root_.rect.reset();
  reindex();
}

AoiTree::AoiTree(const AoiTree& other) : root_(other.root_) { reindex(); }

AoiTree::AoiTree(AoiTree&& other) noexcept : root_(std::move(other.root_)) {
  reindex();
  other.root_ = make_root();
  other.reindex();
}

AoiTree& AoiTree::operator=(const AoiTree& other) {
  if (this != &other) {
    root_ = other.root_;
    reindex();
  }
  return *this;
}

AoiTree& AoiTree::operator=(AoiTree&& other) noexcept {
  if (this != &other) {
    root_ = std::move(other.root_);
    reindex();
    other.root_ = make_root();
    other.reindex();
  }
  return *this;
}

void AoiTree::reindex() {
  leaves_.clear();
  collect_leaves(root_, leaves_);
  depth_ = std::max(1, leaf_depth(root_, 0));
}

AoiTree AoiTree::from_rects(std::span<const Rect> rects,
                            std::span<const std::string> labels) {
  if (rects.size() > kAlphabet.size()) {
    throw ArgumentError("too many AOIs for the symbol alphabet (" +
                        std::to_string(rects.size()) + " > " +
                        std::to_string(kAlphabet.size()) + ")");
  }
  AoiNode root = make_root();
  for (std::size_t i = 0; i < rects.size(); ++i) {
    AoiNode leaf;
    leaf.id = static_cast<int>(i) + 1;
    leaf.label = i < labels.size() ? labels[i] : "AOI " + std::to_string(i + 1);
    leaf.rect = rects[i];
    leaf.symbol = kAlphabet[i];
    root.children.push_back(std::move(leaf));
  }
  recompute_symbols(root);
  return AoiTree(std::move(root));
}

std::vector<const AoiNode*> AoiTree::leaves() const { return leaves_; }

const AoiNode* AoiTree::find(int id) const {
  return find_mut(const_cast<AoiNode&>(root_), id);
}

const AoiNode* AoiTree::parent_of(int id) const { return find_parent(root_, id); }

const AoiNode* AoiTree::leaf_by_symbol(char symbol) const {
  for (const auto* l : leaves_) {
    if (l->symbol == symbol) return l;
  }
  return nullptr;
}

char AoiTree::locate(double x, double y) const {
  for (const auto* l : leaves_) {
    if (l->rect && l->rect->contains(x, y)) return l->symbol;
  }
  return kBlank;
}

int AoiTree::next_id() const { return max_id(root_) + 1; }

const AoiNode* largest_leaf(const AoiNode& node) {
  std::vector<const AoiNode*> leaves;
  collect_leaves(node, leaves);
  const AoiNode* best = nullptr;
  for (const auto* l : leaves) {
    const auto area = l->rect ? l->rect->area() : 0;
    if (!best) {
      best = l;
      continue;
    }
    const auto best_area = best->rect ? best->rect->area() : 0;
    if (area > best_area || (area == best_area && l->id < best->id)) best = l;
  }
  return best;
}

Rect leaf_bounds(const AoiNode& node) {
  std::vector<const AoiNode*> leaves;
  collect_leaves(node, leaves);
  std::optional<Rect> box;
  for (const auto* l : leaves) {
    if (!l->rect) continue;
    box = box ? bounding_box(*box, *l->rect) : *l->rect;
  }
  return box.value_or(Rect{});
}

char locate_point(const GazePoint& p, const AoiTree& tree) {
  return tree.locate(p.x, p.y);
}

std::vector<CutEntry> cut_at_level(const AoiTree& tree, Level level) {
  if (level.k < 1 || level.k > tree.depth()) {
    throw RangeError("level " + std::to_string(level.k) + " outside [1, " +
                     std::to_string(tree.depth()) + "]");
  }
  std::vector<CutEntry> out;
  collect_cut(tree.root(), 0, level.k, nullptr, out);
  return out;
}

SymbolMap projection_map(const AoiTree& tree, Level level) {
  SymbolMap map{};
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<char>(i);
  for (const auto& e : cut_at_level(tree, level)) {
    for (char s : e.leaf_symbols) map[static_cast<unsigned char>(s)] = e.symbol;
  }
  return map;
}

AoiTree normalized(const AoiTree& tree) {
  AoiNode root = tree.root();
  recompute_symbols(root);
  return AoiTree(std::move(root));
}

AoiTree add_leaf(const AoiTree& tree, const Rect& rect, std::string label) {
  std::set<char> used;
  for (const auto* l : tree.leaves()) used.insert(l->symbol);
  char symbol = kBlank;
  for (char c : kAlphabet) {
    if (!used.contains(c)) {
      symbol = c;
      break;
    }
  }
  if (symbol == kBlank) throw ArgumentError("symbol alphabet exhausted");

  AoiNode root = tree.root();
  AoiNode leaf;
  leaf.id = tree.next_id();
  leaf.label = label.empty() ? "AOI " + std::to_string(leaf.id) : std::move(label);
  leaf.rect = rect;
  leaf.symbol = symbol;
  root.children.push_back(std::move(leaf));
  recompute_symbols(root);
  return AoiTree(std::move(root));
}

AoiTree make_group(const AoiTree& tree, std::span<const int> members,
                   std::string label) {
  if (members.empty()) throw ArgumentError("empty group selection");

  std::vector<int> selected;
  for (int id : members) {
    if (id == tree.root().id) throw StructureError("the root cannot be grouped");
    const AoiNode* node = tree.find(id);
    if (!node) throw LookupError("unknown AOI node " + std::to_string(id));
    const AoiNode* parent = tree.parent_of(id);
    if (node->is_leaf() && parent != &tree.root()) id = parent->id;
    if (std::find(selected.begin(), selected.end(), id) == selected.end()) {
      selected.push_back(id);
    }
  }

  const AoiNode* parent = tree.parent_of(selected.front());
  for (int id : selected) {
    if (tree.parent_of(id) != parent) {
      throw StructureError("group members are not siblings");
    }
  }

  AoiNode root = tree.root();
  AoiNode* host = find_mut(root, parent->id);
  AoiNode group;
  group.id = tree.next_id();
  group.kind = NodeKind::group;
  group.label = label.empty() ? "G" + std::to_string(group.id) : std::move(label);

  std::vector<AoiNode> kept;
  std::size_t insert_at = host->children.size();
  for (auto& c : host->children) {
    const bool chosen =
        std::find(selected.begin(), selected.end(), c.id) != selected.end();
    if (chosen) {
      insert_at = std::min(insert_at, kept.size());
      group.children.push_back(std::move(c));
    } else {
      kept.push_back(std::move(c));
    }
  }
  kept.insert(kept.begin() + static_cast<std::ptrdiff_t>(insert_at),
              std::move(group));
  host->children = std::move(kept);
  recompute_symbols(root);
  return AoiTree(std::move(root));
}

AoiTree ungroup(const AoiTree& tree, int id) {
  const AoiNode* node = tree.find(id);
  if (!node) throw LookupError("unknown AOI node " + std::to_string(id));
  if (node->is_leaf()) throw StructureError("node " + std::to_string(id) + " is not a group");
  if (id == tree.root().id) throw StructureError("the root cannot be ungrouped");

  AoiNode root = tree.root();
  AoiNode* host = find_mut(root, tree.parent_of(id)->id);
  std::vector<AoiNode> spliced;
  for (auto& c : host->children) {
    if (c.id == id) {
      for (auto& g : c.children) spliced.push_back(std::move(g));
    } else {
      spliced.push_back(std::move(c));
    }
  }
  host->children = std::move(spliced);
  recompute_symbols(root);
  return AoiTree(std::move(root));
}

AoiTree remove_node(const AoiTree& tree, int id) {
  if (id == tree.root().id) throw StructureError("the root cannot be removed");
  const AoiNode* parent = tree.parent_of(id);
  if (!parent) throw LookupError("unknown AOI node " + std::to_string(id));

  AoiNode root = tree.root();
  AoiNode* host = find_mut(root, parent->id);
  std::erase_if(host->children, [id](const AoiNode& c) { return c.id == id; });
  prune_empty_groups(root);
  recompute_symbols(root);
  return AoiTree(std::move(root));
}

std::vector<std::string> validate_tree(const AoiTree& tree,
                                       std::optional<Rect> bounds) {
  std::vector<std::string> issues;
  std::set<int> ids;

  std::function<void(const AoiNode&, bool)> walk = [&](const AoiNode& n, bool is_root) {
    if (!ids.insert(n.id).second) issues.push_back("duplicate-id(" + std::to_string(n.id) + ")");
    if (n.is_leaf()) {
      if (!n.children.empty()) issues.push_back("leaf-has-children(" + std::to_string(n.id) + ")");
      if (!n.rect) {
        issues.push_back("leaf-without-rect(" + std::to_string(n.id) + ")");
      } else {
        if (n.rect->empty()) issues.push_back("empty-rect(" + std::string(1, n.symbol) + ")");
        if (bounds && intersection(*n.rect, *bounds) != *n.rect) {
          issues.push_back("out-of-bounds(" + std::string(1, n.symbol) + ")");
        }
      }
      if (!is_aoi_symbol(n.symbol)) {
        issues.push_back("invalid-symbol(" + std::to_string(n.id) + ")");
      }
      return;
    }
    if (n.rect) issues.push_back("group-has-rect(" + std::to_string(n.id) + ")");
    if (!is_root && n.children.empty()) {
      issues.push_back("empty-group(" + std::to_string(n.id) + ")");
    }
    const AoiNode* big = largest_leaf(n);
    const char expected = big ? big->symbol : kBlank;
    if (!is_root || big) {
      if (n.symbol != expected) {
        issues.push_back("group-symbol(" + std::to_string(n.id) + ": " +
                         std::string(1, n.symbol) + " != " + std::string(1, expected) + ")");
      }
    }
    for (const auto& c : n.children) walk(c, false);
  };
  walk(tree.root(), true);

  const auto leaves = tree.leaves();
  std::set<char> symbols;
  for (const auto* l : leaves) {
    if (!symbols.insert(l->symbol).second) {
      issues.push_back("duplicate-symbol(" + std::string(1, l->symbol) + ")");
    }
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const auto& a = leaves[i];
      const auto& b = leaves[j];
      if (a->rect && b->rect && a->rect->intersects(*b->rect)) {
        issues.push_back("overlap(" + std::string(1, a->symbol) + "," +
                         std::string(1, b->symbol) + ")");
      }
    }
  }
  return issues;
}

}  // namespace gazegram
