#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazegram/model.hpp"

namespace gazegram {

/// Character reserved for gaze samples outside every AOI.
inline constexpr char kBlank = '.';

/// Ordered alphabet handed out to AOIs at creation time. Digits, the blank
/// character and JSON/CSV/XML metacharacters are excluded so rendered
/// run-length codes stay unambiguous.
std::string_view aoi_alphabet();

bool is_aoi_symbol(char c);

enum class NodeKind { leaf, group };

struct AoiNode {
  int id = 0;
  std::string label;
  NodeKind kind = NodeKind::leaf;
  std::optional<Rect> rect;  // leaves only
  std::vector<AoiNode> children;  // groups only
  char symbol = kBlank;

  bool is_leaf() const { return kind == NodeKind::leaf; }
};

/// Hierarchy level k; 1 is the coarsest cut, depth() the finest.
struct Level {
  int k = 1;
  friend bool operator==(const Level&, const Level&) = default;
};

/// Immutable AOI hierarchy. The root (id 0) is an implicit group that is
/// always present, so level 1 is defined even before any grouping.
class AoiTree {
 public:
  AoiTree();
  /// Takes the node as-is; group symbols are not recomputed so that
  /// validate_tree() can report inconsistent input.
  explicit AoiTree(AoiNode root);
  AoiTree(const AoiTree& other);
  AoiTree(AoiTree&& other) noexcept;
  AoiTree& operator=(const AoiTree& other);
  AoiTree& operator=(AoiTree&& other) noexcept;
  ~AoiTree() = default;

  /// Flat tree with one leaf per rect, symbols assigned in input order.
  static AoiTree from_rects(std::span<const Rect> rects,
                            std::span<const std::string> labels = {});

  const AoiNode& root() const { return root_; }
  /// Longest root-to-leaf edge count; a tree without leaves reports 1.
  int depth() const { return depth_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::vector<const AoiNode*> leaves() const;

  const AoiNode* find(int id) const;
  const AoiNode* parent_of(int id) const;
  const AoiNode* leaf_by_symbol(char symbol) const;

  /// Symbol of the leaf containing (x, y), or kBlank.
  char locate(double x, double y) const;

  int next_id() const;

 private:
  void reindex();

  AoiNode root_;
  int depth_ = 1;
  std::vector<const AoiNode*> leaves_;
};

/// Largest-area descendant leaf; area ties go to the lowest id.
/// Returns nullptr for a group without leaves.
const AoiNode* largest_leaf(const AoiNode& node);

/// Bounding box of all descendant leaf rects (empty rect when none).
Rect leaf_bounds(const AoiNode& node);

char locate_point(const GazePoint& p, const AoiTree& tree);

struct CutEntry {
  int id = 0;
  std::string label;
  bool is_group = false;
  char symbol = kBlank;        // effective symbol (largest descendant leaf)
  Rect bounds;                 // bounding box of descendant leaves
  Rect home;                   // rect of the largest descendant leaf
  int top_level_id = 0;        // ancestor directly under the root
  bool top_level_is_group = false;
  std::vector<char> leaf_symbols;
};

/// Nodes visible at level k: leaves at depth <= k plus groups at depth k.
/// Throws RangeError when k is outside [1, depth].
std::vector<CutEntry> cut_at_level(const AoiTree& tree, Level level);

/// Lookup table leaf symbol -> effective symbol at `level`. Blank and
/// unknown characters map to themselves.
using SymbolMap = std::array<char, 256>;
SymbolMap projection_map(const AoiTree& tree, Level level);

/// Returns a copy with group symbols recomputed from their largest leaves.
AoiTree normalized(const AoiTree& tree);

/// Appends a leaf under the root with the lowest unused alphabet symbol.
/// No overlap check; callers resolve overlaps first.
AoiTree add_leaf(const AoiTree& tree, const Rect& rect, std::string label = {});

/// Inserts a new group as the parent of `members`. A leaf that already
/// sits in a group stands for its whole group. Throws ArgumentError for an
/// empty selection, LookupError for unknown ids and StructureError when the
/// (expanded) members do not share a parent.
AoiTree make_group(const AoiTree& tree, std::span<const int> members,
                   std::string label = {});

/// Replaces group `id` by its children.
AoiTree ungroup(const AoiTree& tree, int id);

/// Removes node `id` and its subtree; groups left without children are
/// removed too.
AoiTree remove_node(const AoiTree& tree, int id);

/// Lists violated invariants; empty means valid. When `bounds` is given,
/// leaf rects must lie inside it.
std::vector<std::string> validate_tree(const AoiTree& tree,
                                       std::optional<Rect> bounds = {});

}  // namespace gazegram
