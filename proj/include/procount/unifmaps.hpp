#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "procount/node.hpp"
#include "procount/trees.hpp"

namespace procount::maps {

using json = nlohmann::ordered_json;
using Rational = boost::rational<long long>;

// A uniform homeomorphism between path spaces, tabulated as level maps
// r_n from the level-phi(n) nodes of the source to the level-n nodes of
// the target, with phi monotone and phi(0) = 0.
struct PrefixMapFamily {
  std::vector<std::uint32_t> phi;
  std::vector<std::map<Node, Node>> level_maps;

  std::uint32_t depth() const { return static_cast<std::uint32_t>(level_maps.size()) - 1; }

  // r_n(x restricted to phi(n)); x must be tabulated
  Node apply(const Node& x, std::uint32_t n) const;

  bool operator==(const PrefixMapFamily&) const = default;
};

PrefixMapFamily identity_family(const trees::LevelData& src, std::uint32_t depth);

// g after f: f maps T to U, g maps U to V
PrefixMapFamily compose_families(const PrefixMapFamily& f, const PrefixMapFamily& g);

// nullopt when consistent; otherwise a description of the first failure
std::optional<std::string> consistency_failure(const PrefixMapFamily& fam);

bool domains_match(const PrefixMapFamily& fam, const trees::LevelData& src);
bool onto_levels(const PrefixMapFamily& fam, const trees::LevelData& target);

// f and g are mutually inverse prefix maps on all tabulated branches
bool mutually_inverse(const PrefixMapFamily& f, const PrefixMapFamily& g);

// least m such that agreement on the first m source labels already forces
// agreement of the length-n image (searched over the tabulated level)
std::uint32_t compute_modulus(const PrefixMapFamily& fam, std::uint32_t n);

// The natural homeomorphism [R_k] -> [R_l]: the branch bit stream (k bits
// for the first symbol, then one per binary step) re-chunked to l bits.
// Returns the longest output prefix the input determines.
Node phi_kl(std::uint32_t k, std::uint32_t l, const Node& prefix);
// fixed-length variant; throws when the prefix does not determine out_len
Node phi_kl_at(std::uint32_t k, std::uint32_t l, const Node& prefix, std::uint32_t out_len);

// prefix-map family of phi_kl tabulated over R_k to the given depth
PrefixMapFamily phi_kl_family(std::uint32_t k, std::uint32_t l, std::uint32_t depth);

// The 2^M-bi-Lipschitz map Psi : [T_x] -> [T_y]: the label identity on
// S_omega and phi_{x(k),y(k)} inside each appended R copy. Requires
// sup|x-y| < M on the specs. The inverse family is build_psi(y, x, ...).
PrefixMapFamily build_psi(const trees::SequenceSpec& x, const trees::SequenceSpec& y,
                          std::uint32_t M, std::uint32_t depth, std::uint32_t label_bound);

// full determined Psi-image of one T_x node (used by build_psi and tests)
Node psi_image(const trees::TreeSpec& tx, const trees::SequenceSpec& x,
               const trees::SequenceSpec& y, const Node& u);

// interleaved floor encoding of real sequences into natural sequences
std::vector<std::uint64_t> reduce_linfty_to_naturals(const std::vector<Rational>& xs,
                                                     std::size_t length);

struct LipschitzEstimate {
  trees::Dyadic max_ratio;      // certified lower bound for the constant
  bool exhaustive = false;      // true when every pair at this depth was used
  std::uint64_t pairs_used = 0;
};

LipschitzEstimate empirical_lipschitz(const std::vector<Node>& domain,
                                      const std::function<Node(const Node&)>& fn,
                                      std::uint64_t pair_cap, std::uint64_t seed);
LipschitzEstimate empirical_lipschitz(const PrefixMapFamily& fam, std::uint64_t pair_cap,
                                      std::uint64_t seed);

json to_json(const PrefixMapFamily& fam);
PrefixMapFamily family_from_json(const json& j);

}  // namespace procount::maps
