#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "procount/fp.hpp"
#include "procount/node.hpp"

namespace procount::mekler {

// Symmetric irreflexive commutation graph on generator indices.
// matching: r A s  iff  r != s and floor(r/2) == floor(s/2)
// none:     no edges (free 2-nilpotent exponent-p group)
// edges:    explicit edge list
class CommGraph {
 public:
  enum class Kind { matching, none, edges };

  static CommGraph matching() { return CommGraph(Kind::matching, {}); }
  static CommGraph free_graph() { return CommGraph(Kind::none, {}); }
  static CommGraph with_edges(std::set<std::pair<std::uint32_t, std::uint32_t>> e);

  bool adjacent(std::uint32_t r, std::uint32_t s) const {
    if (r == s) return false;
    switch (kind_) {
      case Kind::matching: return r / 2 == s / 2;
      case Kind::none: return false;
      case Kind::edges:
        return edges_.count(r < s ? std::make_pair(r, s) : std::make_pair(s, r)) > 0;
    }
    return false;
  }

  Kind kind() const { return kind_; }
  bool operator==(const CommGraph& o) const { return kind_ == o.kind_ && edges_ == o.edges_; }

 private:
  CommGraph(Kind k, std::set<std::pair<std::uint32_t, std::uint32_t>> e)
      : kind_(k), edges_(std::move(e)) {}
  Kind kind_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

// Generator universe for G(A) or L(X). In the L(X) case the generators
// are a_v, b_v for v in the label list, ordered a_v < b_v < a_w < b_w,
// so generator 2i is a_{labels[i]} and 2i+1 is b_{labels[i]}, and the
// commutation graph is the matching graph on indices.
class Universe {
 public:
  static std::shared_ptr<const Universe> plain(std::uint32_t p, CommGraph graph,
                                               std::uint32_t generator_count);
  static std::shared_ptr<const Universe> paired(std::uint32_t p, std::vector<Node> labels);

  std::uint32_t prime() const { return p_; }
  std::uint32_t size() const { return size_; }
  bool adjacent(std::uint32_t r, std::uint32_t s) const { return graph_.adjacent(r, s); }
  const CommGraph& graph() const { return graph_; }

  bool is_paired() const { return paired_; }
  const std::vector<Node>& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }
  std::optional<std::size_t> label_index(const Node& v) const;

  bool uses_matching_graph() const {
    return paired_ || graph_.kind() == CommGraph::Kind::matching;
  }

  std::string generator_name(std::uint32_t idx) const;

  bool operator==(const Universe& o) const {
    return p_ == o.p_ && size_ == o.size_ && paired_ == o.paired_ && graph_ == o.graph_ &&
           labels_ == o.labels_;
  }

 private:
  Universe() = default;
  std::uint32_t p_ = 3;
  std::uint32_t size_ = 0;
  bool paired_ = false;
  CommGraph graph_ = CommGraph::free_graph();
  std::vector<Node> labels_;
  std::map<Node, std::size_t> label_pos_;
};

using UniversePtr = std::shared_ptr<const Universe>;

inline bool same_universe(const UniversePtr& a, const UniversePtr& b) {
  return a == b || (a && b && *a == *b);
}

// Normal form: central part (exponents on the x_{r,s} with
// r < s and not rAs) times the ascending base word prod x_i^{alpha_i}.
struct GroupElement {
  UniversePtr uni;
  fp::SparseVec base;
  std::map<std::pair<std::uint32_t, std::uint32_t>, fp::Exp> central;

  bool operator==(const GroupElement& o) const {
    return same_universe(uni, o.uni) && base == o.base && central == o.central;
  }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
  // order on normal forms within one universe (for std::set in tests)
  bool operator<(const GroupElement& o) const {
    if (base != o.base) return base < o.base;
    return central < o.central;
  }
};

GroupElement identity_element(UniversePtr uni);
GroupElement generator(UniversePtr uni, std::uint32_t idx);
// x_{r,s} = [x_r, x_s]; collapses to e when r == s or rAs
GroupElement central_generator(UniversePtr uni, std::uint32_t r, std::uint32_t s);

GroupElement multiply(const GroupElement& u, const GroupElement& w);
GroupElement inverse(const GroupElement& u);
GroupElement commutator(const GroupElement& u, const GroupElement& w);
GroupElement power(const GroupElement& u, long long n);
bool is_identity(const GroupElement& u);
bool is_central(const GroupElement& u);
fp::SparseVec central_image(const GroupElement& u);

// Words over base generators, as (generator index, exponent) letters.
using Word = std::vector<std::pair<std::uint32_t, long long>>;

// Normal form by naive left-to-right collection: only the rewriting rules
// x_s x_r -> x_r x_s [x_s,x_r] (r<s), [x_s,x_r] = x_{r,s}^{-1}, centrality
// of commutators, x_{r,s} = e when rAs, and exponent-p reduction.
// Deliberately avoids the closed-form correction used by multiply().
GroupElement collection_oracle(const UniversePtr& uni, const Word& word);
GroupElement fold_word(const UniversePtr& uni, const Word& word);

// Canonical text format, e.g. "x0*x1*x0,1^2" or "a(2.0)*[a(2.0),a(3)]^2".
std::string to_string(const GroupElement& u);
// Parses the expression grammar: factors joined by '*', '^' powers,
// commutator brackets [u,v] and parentheses.
GroupElement parse_element(const UniversePtr& uni, std::string_view text);

// A homomorphism given by generator images, applied via the canonical
// homomorphic extension over normal forms.
class Morphism {
 public:
  Morphism(UniversePtr src, UniversePtr dst, std::vector<GroupElement> images);

  static Morphism identity_map(const UniversePtr& uni);
  // the epimorphism q-hat induced by a label map X -> Y
  static Morphism induced(const UniversePtr& src, const UniversePtr& dst,
                          const std::vector<std::uint32_t>& label_map);

  GroupElement apply(const GroupElement& u) const;
  Morphism after(const Morphism& inner) const;  // *this composed with inner

  bool equal_on_generators(const Morphism& o) const;
  // every adjacent source pair has commuting images
  bool respects_relations() const;
  // the image multiset contains every target generator (the
  // onto-on-generators requirement for binding maps)
  bool covers_target_generators() const;

  const UniversePtr& src() const { return src_; }
  const UniversePtr& dst() const { return dst_; }
  const std::vector<GroupElement>& images() const { return images_; }
  std::vector<GroupElement>& mutable_images() { return images_; }

 private:
  UniversePtr src_, dst_;
  std::vector<GroupElement> images_;
};

// q-hat applied to one element
GroupElement induced_epi(const UniversePtr& src, const UniversePtr& dst,
                         const std::vector<std::uint32_t>& label_map, const GroupElement& u);

struct FunctorError : std::runtime_error {
  enum class Kind { rank_deficient, inconsistent_support };
  FunctorError(Kind k, std::size_t label, const std::string& msg)
      : std::runtime_error(msg), kind(k), label_index(label) {}
  Kind kind;
  std::size_t label_index;
};

// Functor F: recovers the label map X -> Y from a morphism of
// the category L by matching generator-pair spans in the central quotient.
// Throws FunctorError when some image pair has rank < 2 or its support
// is not confined to a single target label pair.
std::vector<std::uint32_t> functor_labels(const Morphism& g);

struct Dichotomy {
  enum class Kind { pair, low_rank, violation };
  Kind kind;
  std::uint32_t pair_base = 0;  // the even i with <c,d> = <x_i, x_{i+1}>
};

// Classification of a commuting pair under the matching graph: either
// the pair spans the plane of one generator pair or its rank is <= 1.
Dichotomy commuting_dichotomy_check(const GroupElement& c, const GroupElement& d);

// number of elements of the truncated universe: p^(size + #non-adjacent pairs)
std::uint64_t universe_order(const UniversePtr& uni);
// all elements in a deterministic order; throws if the order exceeds cap
std::vector<GroupElement> enumerate_all(const UniversePtr& uni, std::uint64_t cap);

}  // namespace procount::mekler
