#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "procount/pro_omega.hpp"
#include "procount/trees.hpp"
#include "procount/unifmaps.hpp"

namespace procount::reduction {

using json = nlohmann::ordered_json;

// G_T as a truncated inverse system: system->levels[n] = L(T_{n+1}) over
// the level-(n+1) nodes of the expansion, bindings induced by the tree
// predecessor maps.
struct GroupSystem {
  trees::TreeSpec tree;
  trees::LevelData nodes;
  pro::SystemPtr system;
  std::uint32_t prime = 3;
};

GroupSystem build_group_system(const trees::TreeSpec& tree, std::uint32_t depth,
                               std::uint32_t label_bound, std::uint32_t p = 3);

// membership in the category L: every generator pair's image has
// central-quotient rank 2
bool is_L_morphism(const mekler::Morphism& m);

struct ForwardResult {
  pro::PreMorphism f;  // G_T -> G_U
  pro::PreMorphism g;  // G_U -> G_T
  std::uint32_t star_checked_f = 0;  // levels with g_n o f_{psi(n)} = binding
  std::uint32_t star_checked_g = 0;
};

// Translate mutually inverse prefix-map families into pre-morphisms with
// f_n = induced(r_{n+1}); verifies the commuting squares and the star
// identities and throws with a stage detail when any fails.
ForwardResult forward(const maps::PrefixMapFamily& r, const maps::PrefixMapFamily& s,
                      const GroupSystem& GT, const GroupSystem& GU);

struct BackwardResult {
  maps::PrefixMapFamily r;
  maps::PrefixMapFamily s;
};

// Recover prefix-map families through the functor F; verifies that the
// recovered families are consistent and mutually inverse.
BackwardResult backward(const pro::PreMorphism& f, const pro::PreMorphism& g,
                        const GroupSystem& GT, const GroupSystem& GU);

// One stage of the end-to-end report.
struct StageReport {
  std::string stage;
  std::string status;  // "ok", "failed", "violated", "certified_violation"
  json detail;
  std::vector<std::pair<int, std::string>> failures;  // (level or -1, what)
};

struct InstanceReport {
  bool ok = false;
  std::string result;
  std::uint32_t depth = 0;
  std::uint32_t width = 0;
  std::vector<StageReport> stages;
  json to_json() const;
};

// End-to-end run of the main-theorem machinery on a spec pair: build the
// trees, build Psi both ways, run forward, check the star identities, run
// backward, confirm exact recovery. When the specs are not l_infty-related
// within the bound, emits the capacity certificate instead.
InstanceReport verify_main_theorem_instance(const trees::SequenceSpec& x,
                                            const trees::SequenceSpec& y, std::uint32_t M,
                                            std::uint32_t depth, std::uint32_t label_bound,
                                            std::uint32_t p = 3);

}  // namespace procount::reduction
