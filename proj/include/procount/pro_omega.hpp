#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "procount/mekler.hpp"

namespace procount::pro {

using json = nlohmann::ordered_json;

// Inverse system of type omega over the L(T_n) groups: levels[n] is the
// generator universe of the n-th group, bindings[n] the onto morphism
// levels[n+1] -> levels[n].
struct InverseSystem {
  std::vector<mekler::UniversePtr> levels;
  std::vector<mekler::Morphism> bindings;

  std::uint32_t depth() const { return static_cast<std::uint32_t>(levels.size()); }
  // binding maps must cover target generators and respect relations
  void validate() const;
};

using SystemPtr = std::shared_ptr<const InverseSystem>;

// interval composition p_{k,n} = p_n o ... o p_{k-1} : A_k -> A_n
mekler::Morphism interval_map(const InverseSystem& sys, std::uint32_t k, std::uint32_t n);

// pre-morphism <f, phi>: components[n] : src.levels[phi[n]] -> dst.levels[n]
struct PreMorphism {
  SystemPtr src, dst;
  std::vector<std::uint32_t> phi;
  std::vector<mekler::Morphism> components;

  std::uint32_t depth() const { return static_cast<std::uint32_t>(components.size()); }
};

PreMorphism identity_premorphism(const SystemPtr& sys);

// all commuting squares f_n o p_{phi(k),phi(n)} = q_{k,n} o f_k on
// generators, for n < k < up_to
bool check_premorphism(const PreMorphism& f, std::uint32_t up_to);

// g after f (f : A -> B, g : B -> C)
PreMorphism compose(const PreMorphism& f, const PreMorphism& g);

// the equivalence ~ : with onto bindings it suffices to factor both
// components through the deepest tabulated level and compare there
bool equivalent(const PreMorphism& f, const PreMorphism& g, std::uint32_t up_to);

// (f,phi) ~ identity iff f_n = p_{phi(n),n} for each n
bool equivalent_to_identity(const PreMorphism& f, std::uint32_t up_to);

using CoherentSequence = std::vector<mekler::GroupElement>;

struct CoherenceError : std::runtime_error {
  CoherenceError(std::uint32_t lvl, const std::string& msg)
      : std::runtime_error(msg), level(lvl) {}
  std::uint32_t level;
};

// checks p_n(g_{n+1}) = g_n at every tabulated level; throws CoherenceError
void evaluate_limit(const InverseSystem& sys, const CoherentSequence& seq);

// constructive lift of a level-0 element through the onto binding maps
CoherentSequence lift_from_base(const InverseSystem& sys, const mekler::GroupElement& g0,
                                std::uint32_t to_level);

// truncated functor P on points: out[n] = f_n(seq[phi(n)])
CoherentSequence apply_P(const PreMorphism& f, const CoherentSequence& seq);

// least monotone phi with ker(p_{top,m}) included in ker(gamma_n), for a
// truncated continuous map given by compatible morphisms gamma_n from the
// deepest level of A; the inclusion is decided on generator fibers
std::vector<std::uint32_t> derive_phi(const InverseSystem& A,
                                      const std::vector<mekler::Morphism>& gammas_from_top);

json to_json(const InverseSystem& sys);
json to_json(const PreMorphism& f);
InverseSystem system_from_json(const json& j);
PreMorphism premorphism_from_json(const json& j, SystemPtr src, SystemPtr dst);

}  // namespace procount::pro
