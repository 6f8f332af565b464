#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "procount/pro_omega.hpp"
#include "procount/reduction.hpp"
#include "procount/rng.hpp"

using namespace procount;
using namespace procount::pro;
using mekler::GroupElement;
using mekler::Morphism;
using reduction::GroupSystem;
using trees::SequenceSpec;
using trees::TreeSpec;

namespace {

const SequenceSpec X{{1, 1}, 0, 2};
const SequenceSpec Y{{0, 2}, 0, 1};

GroupSystem tree_system(const SequenceSpec& x, std::uint32_t depth, std::uint32_t bound = 4) {
  return reduction::build_group_system(TreeSpec::t_x(x), depth, bound);
}

// pre-morphism whose components are the interval bindings along phi
PreMorphism shift_premorphism(const SystemPtr& sys, std::vector<std::uint32_t> phi) {
  PreMorphism f;
  f.src = sys;
  f.dst = sys;
  for (std::uint32_t n = 0; n < phi.size(); ++n)
    f.components.push_back(interval_map(*sys, phi[n], n));
  f.phi = std::move(phi);
  return f;
}

GroupElement random_level_element(const mekler::UniversePtr& uni, Rng& rng) {
  mekler::Word w;
  for (int i = 0; i < 5; ++i)
    w.emplace_back(static_cast<std::uint32_t>(rng.below(uni->size())), 1 + rng.below(2));
  return mekler::fold_word(uni, w);
}

}  // namespace

TEST_CASE("interval maps: identity, composition, truncation action") {
  GroupSystem gt = tree_system(X, 6);
  const InverseSystem& sys = *gt.system;
  for (std::uint32_t n = 0; n < sys.depth(); ++n)
    CHECK(interval_map(sys, n, n).equal_on_generators(Morphism::identity_map(sys.levels[n])));
  for (std::uint32_t n = 0; n < 4; ++n)
    for (std::uint32_t m = n; m < 5; ++m)
      for (std::uint32_t k = m; k < 6; ++k) {
        Morphism lhs = interval_map(sys, k, n);
        Morphism rhs = interval_map(sys, m, n).after(interval_map(sys, k, m));
        CHECK(lhs.equal_on_generators(rhs));
      }
  // generators map by truncation of node sequences
  for (std::uint32_t k = 1; k < 6; ++k)
    for (std::uint32_t n = 0; n <= k; ++n) {
      Morphism im = interval_map(sys, k, n);
      const auto& src_labels = sys.levels[k]->labels();
      for (std::size_t i = 0; i < src_labels.size(); ++i) {
        Node want = truncate(src_labels[i], n + 1);
        const GroupElement& img_a = im.images()[2 * i];
        REQUIRE(img_a.base.support_size() == 1);
        std::uint32_t gen = img_a.base.entries().begin()->first;
        CHECK(sys.levels[n]->labels()[gen / 2] == want);
        CHECK(gen % 2 == 0);
      }
    }
}

TEST_CASE("check_premorphism: identity, shifts, corruption") {
  GroupSystem gt = tree_system(X, 5);
  PreMorphism id = identity_premorphism(gt.system);
  CHECK(check_premorphism(id, id.depth()));
  PreMorphism sh = shift_premorphism(gt.system, {0, 2, 3, 4});
  CHECK(check_premorphism(sh, sh.depth()));
  // corrupt one generator image: swap the images of two label pairs that
  // genuinely map differently
  PreMorphism bad = sh;
  auto imgs = bad.components[1].images();
  std::size_t i = 0, j = 0;
  for (std::size_t a = 0; a < imgs.size() && i == j; a += 2)
    for (std::size_t b = a + 2; b < imgs.size(); b += 2)
      if (imgs[a] != imgs[b]) {
        i = a;
        j = b;
        break;
      }
  REQUIRE(i != j);
  std::swap(imgs[i], imgs[j]);
  std::swap(imgs[i + 1], imgs[j + 1]);
  bad.components[1] = Morphism(bad.components[1].src(), bad.components[1].dst(), imgs);
  CHECK_FALSE(check_premorphism(bad, bad.depth()));
}

TEST_CASE("composition: identity laws and associativity on generators") {
  GroupSystem gt = tree_system(X, 5);
  PreMorphism id = identity_premorphism(gt.system);
  PreMorphism f = shift_premorphism(gt.system, {0, 1, 3, 4});
  PreMorphism g = shift_premorphism(gt.system, {0, 1, 2});
  PreMorphism h = shift_premorphism(gt.system, {0, 1});
  CHECK(equivalent(compose(f, id), f, 3));
  CHECK(equivalent(compose(id, f), f, 3));
  PreMorphism lhs = compose(compose(f, g), h);
  PreMorphism rhs = compose(f, compose(g, h));
  REQUIRE(lhs.depth() == rhs.depth());
  for (std::uint32_t n = 0; n < lhs.depth(); ++n) {
    CHECK(lhs.phi[n] == rhs.phi[n]);
    CHECK(lhs.components[n].equal_on_generators(rhs.components[n]));
  }
}

TEST_CASE("equivalence: reflexive, shifted representatives, identity-form biconditional") {
  GroupSystem gt = tree_system(X, 6);
  PreMorphism f = shift_premorphism(gt.system, {0, 1, 2, 3});
  CHECK(equivalent(f, f, f.depth()));
  // same morphism, deeper representative
  PreMorphism g = shift_premorphism(gt.system, {1, 2, 3, 4});
  CHECK(equivalent(f, g, f.depth()));
  CHECK(equivalent_to_identity(f, f.depth()));
  CHECK(equivalent_to_identity(g, g.depth()));
  // biconditional: equivalent to id iff f_n = p_{phi(n),n}
  Rng rng(61);
  for (int it = 0; it < 100; ++it) {
    std::vector<std::uint32_t> phi;
    std::uint32_t cur = rng.below(2);
    for (int n = 0; n < 4; ++n) {
      phi.push_back(std::min<std::uint32_t>(cur, 5));
      cur += static_cast<std::uint32_t>(rng.below(2)) + (cur < static_cast<std::uint32_t>(n + 1) ? 1 : 0);
    }
    for (std::size_t n = 0; n < phi.size(); ++n) phi[n] = std::max<std::uint32_t>(phi[n], static_cast<std::uint32_t>(n));
    PreMorphism s = shift_premorphism(gt.system, phi);
    bool id_form = true;
    for (std::uint32_t n = 0; n < s.depth(); ++n)
      if (!s.components[n].equal_on_generators(interval_map(*gt.system, s.phi[n], n)))
        id_form = false;
    CHECK(equivalent_to_identity(s, s.depth()) == id_form);
    CHECK(id_form);  // shift premorphisms are identity-form by construction
    // mutate one component: biconditional must flip both sides
    if (s.depth() >= 2) {
      PreMorphism bad = s;
      auto imgs = bad.components[1].images();
      if (imgs.size() >= 4) {
        std::swap(imgs[0], imgs[2]);
        std::swap(imgs[1], imgs[3]);
        bad.components[1] = Morphism(bad.components[1].src(), bad.components[1].dst(), imgs);
        bool bad_id_form = bad.components[1].equal_on_generators(
            interval_map(*gt.system, bad.phi[1], 1));
        CHECK(equivalent_to_identity(bad, 2) == bad_id_form);
      }
    }
  }
}

TEST_CASE("equivalence is symmetric, transitive, and a congruence on samples") {
  GroupSystem gt = tree_system(X, 6);
  std::vector<PreMorphism> sample;
  sample.push_back(shift_premorphism(gt.system, {0, 1, 2}));
  sample.push_back(shift_premorphism(gt.system, {1, 2, 3}));
  sample.push_back(shift_premorphism(gt.system, {2, 3, 4}));
  // two corrupted ones that are not equivalent to the identity
  for (std::uint32_t which : {0u, 1u}) {
    PreMorphism bad = shift_premorphism(gt.system, {1, 2, 3});
    auto imgs = bad.components[which].images();
    for (std::size_t a = 0; a + 2 < imgs.size(); a += 2) {
      bool done = false;
      for (std::size_t b = a + 2; b < imgs.size(); b += 2)
        if (imgs[a] != imgs[b]) {
          std::swap(imgs[a], imgs[b]);
          std::swap(imgs[a + 1], imgs[b + 1]);
          done = true;
          break;
        }
      if (done) break;
    }
    bad.components[which] = Morphism(bad.components[which].src(), bad.components[which].dst(), imgs);
    sample.push_back(std::move(bad));
  }
  const std::uint32_t up_to = 3;
  for (const auto& f : sample) CHECK(equivalent(f, f, up_to));
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j) {
      bool ij = equivalent(sample[i], sample[j], up_to);
      CHECK(ij == equivalent(sample[j], sample[i], up_to));
      for (std::size_t k = 0; ij && k < sample.size(); ++k)
        if (equivalent(sample[j], sample[k], up_to))
          CHECK(equivalent(sample[i], sample[k], up_to));
    }
  // congruence: equivalent factors compose to equivalent composites
  PreMorphism h = shift_premorphism(gt.system, {0, 1, 2});
  CHECK(equivalent(sample[0], sample[1], up_to));
  CHECK(equivalent(compose(sample[0], h), compose(sample[1], h), 2));
  CHECK(equivalent(compose(h, sample[0]), compose(h, sample[1]), 2));
}

TEST_CASE("evaluate_limit and constructive lifting") {
  GroupSystem gt = tree_system(X, 5);
  const InverseSystem& sys = *gt.system;
  // identity-element sequence is coherent
  CoherentSequence ids;
  for (std::uint32_t n = 0; n < sys.depth(); ++n)
    ids.push_back(mekler::identity_element(sys.levels[n]));
  CHECK_NOTHROW(evaluate_limit(sys, ids));
  // lifted random base elements are coherent
  Rng rng(62);
  for (int it = 0; it < 50; ++it) {
    GroupElement g0 = random_level_element(sys.levels[0], rng);
    CoherentSequence lifted = lift_from_base(sys, g0, sys.depth() - 1);
    CHECK(lifted.size() == sys.depth());
    CHECK_NOTHROW(evaluate_limit(sys, lifted));
  }
  // one mismatched level is rejected at that level
  CoherentSequence broken = lift_from_base(sys, random_level_element(sys.levels[0], rng), 3);
  broken[2] = multiply(broken[2], mekler::generator(sys.levels[2], 0));
  try {
    evaluate_limit(sys, broken);
    CHECK(false);
  } catch (const CoherenceError& e) {
    CHECK(e.level <= 2);
  }
}

TEST_CASE("apply_P: truncation, coherence preservation, invariance under ~") {
  GroupSystem gt = tree_system(X, 6);
  const SystemPtr& sys = gt.system;
  PreMorphism id = identity_premorphism(sys);
  PreMorphism f = shift_premorphism(sys, {0, 1, 2, 3, 4});
  PreMorphism g = shift_premorphism(sys, {1, 2, 3, 4});
  Rng rng(63);
  for (int it = 0; it < 100; ++it) {
    CoherentSequence seq = lift_from_base(*sys, random_level_element(sys->levels[0], rng), 5);
    CoherentSequence out_id = apply_P(id, seq);
    for (std::size_t n = 0; n < out_id.size(); ++n) CHECK(out_id[n] == seq[n]);
    CoherentSequence out_f = apply_P(f, seq);
    CHECK_NOTHROW(evaluate_limit(*sys, out_f));
    // ~-equivalent pre-morphisms act identically on points
    CoherentSequence out_g = apply_P(g, seq);
    for (std::size_t n = 0; n < std::min(out_f.size(), out_g.size()); ++n)
      CHECK(out_f[n] == out_g[n]);
    // functoriality: P(g o f) = P(g) after P(f) where depths allow
    PreMorphism fg = compose(f, g);
    CoherentSequence lhs = apply_P(fg, seq);
    CoherentSequence via = apply_P(g, apply_P(f, seq));
    for (std::size_t n = 0; n < std::min(lhs.size(), via.size()); ++n) CHECK(lhs[n] == via[n]);
  }
}

TEST_CASE("apply_P rejects sequences shallower than phi requires") {
  GroupSystem gt = tree_system(X, 5);
  PreMorphism f = shift_premorphism(gt.system, {1, 2, 3, 4});
  CoherentSequence shallow = lift_from_base(*gt.system, mekler::identity_element(gt.system->levels[0]), 2);
  CHECK_THROWS_AS(apply_P(f, shallow), std::out_of_range);
}

TEST_CASE("derive_phi: identity data, constant map, family moduli") {
  GroupSystem gt = tree_system(X, 5);
  const InverseSystem& sys = *gt.system;
  const std::uint32_t top = sys.depth() - 1;
  // gamma_n = p_{top,n}: least kernel inclusion at m = n
  std::vector<Morphism> gammas;
  for (std::uint32_t n = 0; n <= top; ++n) gammas.push_back(interval_map(sys, top, n));
  CHECK(derive_phi(sys, gammas) == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
  // a map constant on level 0 has phi(0) = 0
  std::vector<GroupElement> trivial(sys.levels[top]->size(),
                                    mekler::identity_element(sys.levels[0]));
  std::vector<Morphism> const_map = {Morphism(sys.levels[top], sys.levels[0], trivial)};
  CHECK(derive_phi(sys, const_map) == std::vector<std::uint32_t>{0});
  // moduli of a psi family agree with group-level kernel inclusions
  maps::PrefixMapFamily fam = maps::build_psi(X, Y, 3, 5, 4);
  GroupSystem gu = tree_system(Y, 5);
  reduction::ForwardResult fw = reduction::forward(fam, maps::build_psi(Y, X, 3, 5, 4), gt, gu);
  std::vector<Morphism> from_top;
  for (std::uint32_t n = 0; n < fw.f.depth(); ++n)
    from_top.push_back(fw.f.components[n].after(interval_map(sys, top, fw.f.phi[n])));
  std::vector<std::uint32_t> derived = derive_phi(sys, from_top);
  for (std::uint32_t n = 0; n < derived.size(); ++n)
    CHECK(derived[n] == maps::compute_modulus(fam, n + 1) - 1);
}

TEST_CASE("system and pre-morphism JSON round trips") {
  GroupSystem gt = tree_system(X, 4);
  json sj = to_json(*gt.system);
  InverseSystem back = system_from_json(sj);
  REQUIRE(back.depth() == gt.system->depth());
  for (std::uint32_t n = 0; n < back.depth(); ++n)
    CHECK(*back.levels[n] == *gt.system->levels[n]);
  for (std::uint32_t n = 0; n + 1 < back.depth(); ++n)
    CHECK(back.bindings[n].equal_on_generators(gt.system->bindings[n]));
  PreMorphism f = shift_premorphism(gt.system, {0, 2, 3});
  PreMorphism back_f = premorphism_from_json(to_json(f), gt.system, gt.system);
  CHECK(back_f.phi == f.phi);
  for (std::uint32_t n = 0; n < f.depth(); ++n)
    CHECK(back_f.components[n].equal_on_generators(f.components[n]));
}
