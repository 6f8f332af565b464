#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "procount/node.hpp"

namespace procount::trees {

using json = nlohmann::ordered_json;

// x in N^N as a finite prefix followed by the affine tail x(k) = a*k + b.
struct SequenceSpec {
  std::vector<std::uint32_t> prefix;
  std::uint32_t tail_a = 0;
  std::uint32_t tail_b = 0;

  std::uint32_t value(std::uint32_t k) const {
    if (k < prefix.size()) return prefix[k];
    return tail_a * k + tail_b;
  }
  bool operator==(const SequenceSpec&) const = default;
};

// sup_k |x(k) - y(k)|, or nullopt when the difference is unbounded
std::optional<std::uint32_t> linf_distance(const SequenceSpec& x, const SequenceSpec& y);

// dyadic value: 0 or 2^log2; distances are 2^{-n}, Lipschitz ratios 2^e
struct Dyadic {
  bool zero = true;
  int log2 = 0;

  static Dyadic zero_value() { return Dyadic{}; }
  static Dyadic pow2(int e) { return Dyadic{false, e}; }

  bool operator==(const Dyadic& o) const {
    return zero == o.zero && (zero || log2 == o.log2);
  }
  bool operator<(const Dyadic& o) const {
    if (zero) return !o.zero;
    if (o.zero) return false;
    return log2 < o.log2;
  }
  std::string to_string() const;
};

Dyadic dyadic_ratio(const Dyadic& num, const Dyadic& den);

// d(x,y) = 2^{-n} at the least disagreement n; 0 for identical complete
// branches; nullopt when the prefixes agree as far as tabulated
std::optional<Dyadic> branch_distance(const Node& x, const Node& y, bool complete = false);

// Pruned-tree description; the lazy kinds expand on demand.
class TreeSpec {
 public:
  enum class Kind { explicit_tree, s_star, s_k, s_omega, r_k, t_x };

  TreeSpec() = default;  // S_star

  static TreeSpec explicit_tree(std::set<Node> nodes);
  static TreeSpec s_star();
  static TreeSpec s_k(std::uint32_t k);
  static TreeSpec s_omega();
  static TreeSpec r_k(std::uint32_t k);
  static TreeSpec t_x(SequenceSpec x);

  Kind kind() const { return kind_; }
  std::uint32_t k() const { return k_; }
  const SequenceSpec& x() const { return x_; }
  const std::set<Node>& nodes() const { return nodes_; }

  bool contains(const Node& s) const;

  // the first `limit` children of s in ascending label order (lazy query);
  // finitely-branching nodes may return fewer
  std::vector<Node> children(const Node& s, std::size_t limit) const;

  // expansion step: every structural child, except that infinite label
  // families (the even S_* fan-out) are truncated to labels < label_bound;
  // appended first levels and binary splits are always complete so level
  // counts inside copies stay exact
  std::vector<Node> children_bounded(const Node& s, std::uint32_t label_bound) const;

  bool operator==(const TreeSpec&) const = default;

 private:
  Kind kind_ = Kind::s_star;
  std::uint32_t k_ = 0;
  SequenceSpec x_;
  std::set<Node> nodes_;
};

// where a node of S_omega / T_x lives
struct NodeClass {
  enum class Where { outside, s_star, s_copy, r_copy };
  Where where = Where::outside;
  std::uint32_t k = 0;  // the z_k line carrying the copy
  std::uint32_t m = 0;  // attachment t_{k,m}
  Node suffix;          // the node inside the unrelabelled copy
};

NodeClass classify(const TreeSpec& tree, const Node& u);

Node z_prefix(std::uint32_t k, std::size_t len);
Node t_node(std::uint32_t k, std::uint32_t m);  // z_k restricted to length m+1

// levels[n] = sorted nodes of length n, tabulated to a label bound
struct LevelData {
  std::vector<std::vector<Node>> levels;
  std::uint32_t label_bound = 0;

  std::uint32_t depth() const { return static_cast<std::uint32_t>(levels.size()) - 1; }
  const std::vector<Node>& level(std::uint32_t n) const { return levels.at(n); }
};

LevelData expand(const TreeSpec& tree, std::uint32_t depth, std::uint32_t label_bound);

// T_x materialized as an explicit tree holding all nodes of length <= depth
TreeSpec build_tx(const SequenceSpec& x, std::uint32_t depth, std::uint32_t label_bound);

// initial-segment closure and prunedness of the tabulated expansion
bool check_levels_closed_pruned(const LevelData& data);

using NodePredicate = std::function<bool(const Node&)>;

std::uint64_t count_level(const LevelData& data, std::uint32_t n,
                          const NodePredicate& window = nullptr);

// nodes strictly inside the copy appended at `attachment` (odd first step)
NodePredicate copy_window(Node attachment);

// 2^{yk} (2^{M-m+1} - 1) <= 2^{yk + M - m + 1}, and the bound M - m + 1
struct Capacity {
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
  std::uint32_t bound = 0;
};
Capacity capacity_inequality(std::uint32_t yk, std::uint32_t m, std::uint32_t M);

// Structural recursion check for the concrete S_k realization: pruning the
// depth-truncated S_{k+1} of its isolated branches leaves exactly S_k.
bool derivative_structure_check(std::uint32_t k, std::uint32_t depth);

json to_json(const SequenceSpec& x);
SequenceSpec sequence_from_json(const json& j);
json to_json(const TreeSpec& t);
TreeSpec spec_from_json(const json& j);
json level_data_to_json(const LevelData& data);

}  // namespace procount::trees
