#include "procount/trees.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace procount::trees {

namespace {

constexpr std::uint32_t kMaxSplitExponent = 24;

std::uint64_t pow2_checked(std::uint32_t e) {
  if (e > kMaxSplitExponent) throw std::overflow_error("tree splitting exponent too large");
  return std::uint64_t(1) << e;
}

std::size_t count_ones(const Node& w) {
  std::size_t ones = 0;
  for (auto v : w) ones += (v == 1);
  return ones;
}

// node of the abstract S_k: labels in {0,1}, at most k-1 ones
bool in_s_k(std::uint32_t k, const Node& w) {
  if (k == 0) return false;
  std::size_t ones = 0;
  for (auto v : w) {
    if (v > 1) return false;
    ones += (v == 1);
  }
  return ones <= k - 1;
}

// node of the abstract R_k: 2^k-splitting then binary
bool in_r_k(std::uint32_t k, const Node& w) {
  if (w.empty()) return true;
  if (w[0] >= pow2_checked(k)) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] > 1) return false;
  return true;
}

}  // namespace

std::optional<std::uint32_t> linf_distance(const SequenceSpec& x, const SequenceSpec& y) {
  if (x.tail_a != y.tail_a) return std::nullopt;
  std::uint32_t best = 0;
  std::uint32_t upto = static_cast<std::uint32_t>(std::max(x.prefix.size(), y.prefix.size()));
  for (std::uint32_t k = 0; k < upto; ++k) {
    std::uint32_t a = x.value(k), b = y.value(k);
    best = std::max(best, a > b ? a - b : b - a);
  }
  std::uint32_t ta = x.tail_b, tb = y.tail_b;
  best = std::max(best, ta > tb ? ta - tb : tb - ta);
  return best;
}

std::string Dyadic::to_string() const {
  if (zero) return "0";
  if (log2 >= 0) {
    if (log2 > 62) return "2^" + std::to_string(log2);
    return std::to_string(std::uint64_t(1) << log2);
  }
  if (log2 < -62) return "2^" + std::to_string(log2);
  return "1/" + std::to_string(std::uint64_t(1) << (-log2));
}

Dyadic dyadic_ratio(const Dyadic& num, const Dyadic& den) {
  if (den.zero) throw std::domain_error("dyadic_ratio: zero denominator");
  if (num.zero) return Dyadic::zero_value();
  return Dyadic::pow2(num.log2 - den.log2);
}

std::optional<Dyadic> branch_distance(const Node& x, const Node& y, bool complete) {
  std::size_t common = std::min(x.size(), y.size());
  for (std::size_t n = 0; n < common; ++n)
    if (x[n] != y[n]) return Dyadic::pow2(-static_cast<int>(n));
  if (complete && x.size() == y.size()) return Dyadic::zero_value();
  return std::nullopt;  // undetermined at this depth
}

TreeSpec TreeSpec::explicit_tree(std::set<Node> nodes) {
  if (nodes.find(Node{}) == nodes.end())
    throw std::invalid_argument("explicit tree must contain the root");
  for (const auto& s : nodes)
    if (!s.empty() && nodes.find(truncate(s, s.size() - 1)) == nodes.end())
      throw std::invalid_argument("explicit tree not closed under initial segments");
  TreeSpec t;
  t.kind_ = Kind::explicit_tree;
  t.nodes_ = std::move(nodes);
  return t;
}

TreeSpec TreeSpec::s_star() {
  TreeSpec t;
  t.kind_ = Kind::s_star;
  return t;
}

TreeSpec TreeSpec::s_k(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("S_k requires k >= 1");
  TreeSpec t;
  t.kind_ = Kind::s_k;
  t.k_ = k;
  return t;
}

TreeSpec TreeSpec::s_omega() {
  TreeSpec t;
  t.kind_ = Kind::s_omega;
  return t;
}

TreeSpec TreeSpec::r_k(std::uint32_t k) {
  TreeSpec t;
  t.kind_ = Kind::r_k;
  t.k_ = k;
  return t;
}

TreeSpec TreeSpec::t_x(SequenceSpec x) {
  TreeSpec t;
  t.kind_ = Kind::t_x;
  t.x_ = std::move(x);
  return t;
}

NodeClass classify(const TreeSpec& tree, const Node& u) {
  const bool has_r = tree.kind() == TreeSpec::Kind::t_x;
  NodeClass out;
  std::size_t a = u.size();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] % 2 == 1) {
      a = i;
      break;
    }
  if (a == u.size()) {
    out.where = NodeClass::Where::s_star;
    return out;
  }
  if (a == 0) return out;  // odd first label: outside
  for (std::size_t i = 1; i < a; ++i)
    if (u[i] != 0) return out;
  std::uint32_t k = u[0] / 2;
  std::uint32_t m = static_cast<std::uint32_t>(a - 1);
  // unrelabel the copy's first step 2j+1 -> j, deeper labels verbatim
  Node suffix;
  suffix.push_back((u[a] - 1) / 2);
  suffix.insert(suffix.end(), u.begin() + static_cast<std::ptrdiff_t>(a) + 1, u.end());
  if (m % 2 == 0) {
    if (k == 0) return out;  // no S-copies along z_0
    if (!in_s_k(k, suffix)) return out;
    out.where = NodeClass::Where::s_copy;
  } else {
    if (!has_r) return out;
    if (!in_r_k(tree.x().value(k), suffix)) return out;
    out.where = NodeClass::Where::r_copy;
  }
  out.k = k;
  out.m = m;
  out.suffix = std::move(suffix);
  return out;
}

Node z_prefix(std::uint32_t k, std::size_t len) {
  Node z;
  if (len == 0) return z;
  z.push_back(2 * k);
  z.resize(len, 0);
  return z;
}

Node t_node(std::uint32_t k, std::uint32_t m) { return z_prefix(k, m + 1); }

bool TreeSpec::contains(const Node& s) const {
  switch (kind_) {
    case Kind::explicit_tree:
      return nodes_.count(s) > 0;
    case Kind::s_star:
      return std::all_of(s.begin(), s.end(), [](std::uint32_t v) { return v % 2 == 0; });
    case Kind::s_k:
      return in_s_k(k_, s);
    case Kind::r_k:
      return in_r_k(k_, s);
    case Kind::s_omega:
    case Kind::t_x:
      return classify(*this, s).where != NodeClass::Where::outside;
  }
  return false;
}

std::vector<Node> TreeSpec::children_bounded(const Node& s, std::uint32_t label_bound) const {
  if (!contains(s)) throw std::invalid_argument("children: node not in tree");
  std::vector<Node> out;
  auto push = [&](std::uint32_t label) { out.push_back(extend(s, label)); };
  switch (kind_) {
    case Kind::explicit_tree: {
      auto it = nodes_.lower_bound(extend(s, 0));
      for (; it != nodes_.end() && is_prefix(s, *it); ++it)
        if (it->size() == s.size() + 1) out.push_back(*it);
      return out;
    }
    case Kind::s_star: {
      for (std::uint32_t v = 0; v < label_bound; v += 2) push(v);
      return out;
    }
    case Kind::s_k: {
      push(0);
      if (count_ones(s) + 1 <= k_ - 1) push(1);
      return out;
    }
    case Kind::r_k: {
      if (s.empty()) {
        std::uint64_t n = pow2_checked(k_);
        for (std::uint64_t v = 0; v < n; ++v) push(static_cast<std::uint32_t>(v));
      } else {
        push(0);
        push(1);
      }
      return out;
    }
    case Kind::s_omega:
    case Kind::t_x: {
      NodeClass c = classify(*this, s);
      switch (c.where) {
        case NodeClass::Where::s_star: {
          for (std::uint32_t v = 0; v < label_bound; v += 2) push(v);
          // appendage first levels at attachment nodes t_{k,m}
          bool is_t = !s.empty() && std::all_of(s.begin() + 1, s.end(),
                                                [](std::uint32_t v) { return v == 0; });
          if (is_t) {
            std::uint32_t k = s[0] / 2;
            std::uint32_t m = static_cast<std::uint32_t>(s.size()) - 1;
            if (m % 2 == 0 && k >= 1) {
              push(1);
              if (k >= 2) push(3);
            } else if (m % 2 == 1 && kind_ == Kind::t_x) {
              std::uint64_t n = pow2_checked(x_.value(k));
              for (std::uint64_t j = 0; j < n; ++j) push(static_cast<std::uint32_t>(2 * j + 1));
            }
          }
          std::sort(out.begin(), out.end());
          return out;
        }
        case NodeClass::Where::s_copy: {
          push(0);
          if (count_ones(c.suffix) + 1 <= c.k - 1) push(1);
          return out;
        }
        case NodeClass::Where::r_copy: {
          push(0);
          push(1);
          return out;
        }
        case NodeClass::Where::outside:
          break;
      }
      throw std::logic_error("children_bounded: classification failure");
    }
  }
  throw std::logic_error("children_bounded: unknown kind");
}

std::vector<Node> TreeSpec::children(const Node& s, std::size_t limit) const {
  // large even bound so that the first `limit` children are all present,
  // then keep the first `limit` in ascending order
  std::uint32_t bound = static_cast<std::uint32_t>(2 * (limit + 1));
  std::vector<Node> all = children_bounded(s, bound);
  if (all.size() > limit) all.resize(limit);
  return all;
}

LevelData expand(const TreeSpec& tree, std::uint32_t depth, std::uint32_t label_bound) {
  LevelData data;
  data.label_bound = label_bound;
  data.levels.resize(depth + 1);
  data.levels[0] = {Node{}};
  for (std::uint32_t n = 0; n < depth; ++n) {
    for (const Node& s : data.levels[n]) {
      auto kids = tree.children_bounded(s, label_bound);
      data.levels[n + 1].insert(data.levels[n + 1].end(), kids.begin(), kids.end());
    }
    std::sort(data.levels[n + 1].begin(), data.levels[n + 1].end());
    data.levels[n + 1].erase(std::unique(data.levels[n + 1].begin(), data.levels[n + 1].end()),
                             data.levels[n + 1].end());
  }
  return data;
}

TreeSpec build_tx(const SequenceSpec& x, std::uint32_t depth, std::uint32_t label_bound) {
  if (depth < 1) throw std::invalid_argument("build_tx: depth >= 1");
  LevelData data = expand(TreeSpec::t_x(x), depth, label_bound);
  std::set<Node> nodes;
  for (const auto& level : data.levels) nodes.insert(level.begin(), level.end());
  return TreeSpec::explicit_tree(std::move(nodes));
}

bool check_levels_closed_pruned(const LevelData& data) {
  for (std::uint32_t n = 0; n + 1 <= data.depth(); ++n) {
    const auto& cur = data.level(n);
    const auto& next = data.level(n + 1);
    // every next-level node's parent is present (closure)
    for (const Node& t : next) {
      Node parent = truncate(t, t.size() - 1);
      if (!std::binary_search(cur.begin(), cur.end(), parent)) return false;
    }
    // every node has a child (pruned relative to the expansion)
    for (const Node& s : cur) {
      auto it = std::lower_bound(next.begin(), next.end(), extend(s, 0));
      if (it == next.end() || !is_prefix(s, *it)) return false;
    }
  }
  return true;
}

std::uint64_t count_level(const LevelData& data, std::uint32_t n, const NodePredicate& window) {
  if (n >= data.levels.size()) throw std::out_of_range("count_level: level not tabulated");
  if (!window) return data.level(n).size();
  std::uint64_t count = 0;
  for (const Node& s : data.level(n))
    if (window(s)) ++count;
  return count;
}

NodePredicate copy_window(Node attachment) {
  return [t = std::move(attachment)](const Node& s) {
    return s.size() > t.size() && is_prefix(t, s) && s[t.size()] % 2 == 1;
  };
}

Capacity capacity_inequality(std::uint32_t yk, std::uint32_t m, std::uint32_t M) {
  if (m > M) throw std::invalid_argument("capacity_inequality: requires m <= M");
  std::uint32_t delta = M - m + 1;
  if (yk + delta > 62) throw std::overflow_error("capacity_inequality: exponent too large");
  Capacity c;
  c.bound = delta;
  c.lhs = (std::uint64_t(1) << yk) * ((std::uint64_t(1) << delta) - 1);
  c.rhs = std::uint64_t(1) << (yk + delta);
  return c;
}

bool derivative_structure_check(std::uint32_t k, std::uint32_t depth) {
  if (k < 1) throw std::invalid_argument("derivative_structure_check: k >= 1");
  const std::uint32_t window = 2;
  LevelData big = expand(TreeSpec::s_k(k + 1), depth + window, 0);
  // descendant counts at depth+window, grouped by the depth-level ancestor
  std::map<Node, std::uint64_t> desc;
  for (const Node& t : big.level(depth + window)) ++desc[truncate(t, depth)];
  std::vector<Node> kept;
  for (const Node& s : big.level(depth))
    if (desc[s] >= 2) kept.push_back(s);
  LevelData small = expand(TreeSpec::s_k(k), depth, 0);
  return kept == small.level(depth);
}

json to_json(const SequenceSpec& x) {
  return json{{"prefix", x.prefix}, {"tail", {x.tail_a, x.tail_b}}};
}

SequenceSpec sequence_from_json(const json& j) {
  SequenceSpec x;
  x.prefix = j.at("prefix").get<std::vector<std::uint32_t>>();
  auto tail = j.at("tail");
  x.tail_a = tail.at(0).get<std::uint32_t>();
  x.tail_b = tail.at(1).get<std::uint32_t>();
  return x;
}

json to_json(const TreeSpec& t) {
  switch (t.kind()) {
    case TreeSpec::Kind::explicit_tree: {
      json nodes = json::array();
      for (const auto& s : t.nodes()) nodes.push_back(s);
      return json{{"kind", "explicit"}, {"nodes", nodes}};
    }
    case TreeSpec::Kind::s_star:
      return json{{"kind", "S_star"}};
    case TreeSpec::Kind::s_k:
      return json{{"kind", "S_k"}, {"k", t.k()}};
    case TreeSpec::Kind::s_omega:
      return json{{"kind", "S_omega"}};
    case TreeSpec::Kind::r_k:
      return json{{"kind", "R_k"}, {"k", t.k()}};
    case TreeSpec::Kind::t_x:
      return json{{"kind", "T_x"}, {"x", to_json(t.x())}};
  }
  throw std::logic_error("to_json: unknown tree kind");
}

TreeSpec spec_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    std::set<Node> nodes;
    for (const auto& s : j.at("nodes")) nodes.insert(s.get<Node>());
    return TreeSpec::explicit_tree(std::move(nodes));
  }
  if (kind == "S_star") return TreeSpec::s_star();
  if (kind == "S_k") return TreeSpec::s_k(j.at("k").get<std::uint32_t>());
  if (kind == "S_omega") return TreeSpec::s_omega();
  if (kind == "R_k") return TreeSpec::r_k(j.at("k").get<std::uint32_t>());
  if (kind == "T_x") return TreeSpec::t_x(sequence_from_json(j.at("x")));
  throw std::invalid_argument("unknown tree kind '" + kind + "'");
}

json level_data_to_json(const LevelData& data) {
  json levels = json::array();
  json counts = json::array();
  for (const auto& level : data.levels) {
    json nodes = json::array();
    for (const auto& s : level) nodes.push_back(s);
    levels.push_back(nodes);
    counts.push_back(level.size());
  }
  return json{{"label_bound", data.label_bound}, {"level_counts", counts}, {"levels", levels}};
}

}  // namespace procount::trees
