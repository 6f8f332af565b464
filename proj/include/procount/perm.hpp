#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace procount::perm {

using json = nlohmann::ordered_json;

// finite injective sequence s over N; s[i] is the image of i
using PartialPerm = std::vector<std::uint32_t>;
// total permutation of {0, ..., N-1}
using Perm = std::vector<std::uint32_t>;

bool is_injective(const PartialPerm& s);

// (s o t)(i) = s(t(i)) on the longest initial segment where defined
PartialPerm partial_compose(const PartialPerm& s, const PartialPerm& t);
// inverse on the longest initial segment where defined
PartialPerm partial_inverse(const PartialPerm& s);
// sigma_n = (0, 1, ..., n-1)
PartialPerm sigma(std::uint32_t n);

// Finite permutation group of fixed degree, with the convention that its
// elements fix every point >= degree (a finite stand-in for closed
// subgroups of the infinite symmetric group).
class FinitePermGroup {
 public:
  static FinitePermGroup from_elements(std::uint32_t degree, std::vector<Perm> elements);
  static FinitePermGroup closure(std::uint32_t degree, const std::vector<Perm>& generators);
  static FinitePermGroup symmetric(std::uint32_t n);
  static FinitePermGroup trivial(std::uint32_t n);

  std::uint32_t degree() const { return degree_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Perm>& elements() const { return elements_; }
  bool contains(const Perm& g) const;

  // g (fixing everything >= degree) extends the finite sequence s
  bool extends(const Perm& g, const PartialPerm& s) const;

  // [s]_G: all members extending s
  std::vector<Perm> cylinder_members(const PartialPerm& s) const;
  bool cylinder_nonempty(const PartialPerm& s, std::uint32_t fix_n) const;

 private:
  FinitePermGroup(std::uint32_t degree, std::vector<Perm> elements);
  std::uint32_t degree_;
  std::vector<Perm> elements_;  // sorted, closed, with identity
};

Perm perm_mul(const Perm& a, const Perm& b);  // (a o b)(i) = a(b(i))
Perm perm_inv(const Perm& a);

// (1): for all x in G, x^{-1} [sigma_k]_G x is contained in [sigma_n]_G
// (2): for all restrictions s and t of members of G with t extending
//      sigma_k, [s^{-1} o t o s]_G meets [sigma_n]_G
// Both evaluated by brute force; the pair of truth values is returned.
std::pair<bool, bool> check_borel_conditions(const FinitePermGroup& G, std::uint32_t n,
                                             std::uint32_t k);

// Cantor pairing <i, n> = (i+n)(i+n+1)/2 + n
std::uint64_t cantor_pair(std::uint64_t i, std::uint64_t n);

// Internal direct product of finite groups given by multiplication
// tables, each acting by its left regular representation on the
// Cantor-pairing-coded domain D_r = { <i, r> : i < |G_r| }.
FinitePermGroup embed_product(const std::vector<std::vector<std::vector<std::uint32_t>>>& tables);

// every subgroup, by breadth-first closure of extensions
std::vector<FinitePermGroup> all_subgroups(std::uint32_t degree);

json to_json(const FinitePermGroup& g);

}  // namespace procount::perm
