#include "procount/pro_omega.hpp"

#include <algorithm>
#include <map>

namespace procount::pro {

using mekler::GroupElement;
using mekler::Morphism;
using mekler::UniversePtr;

void InverseSystem::validate() const {
  if (bindings.size() + 1 != levels.size())
    throw std::invalid_argument("inverse system: needs one binding per adjacent level pair");
  for (std::size_t n = 0; n < bindings.size(); ++n) {
    if (!mekler::same_universe(bindings[n].src(), levels[n + 1]) ||
        !mekler::same_universe(bindings[n].dst(), levels[n]))
      throw std::invalid_argument("inverse system: binding endpoints disagree with levels");
    if (!bindings[n].covers_target_generators())
      throw std::invalid_argument("inverse system: binding map " + std::to_string(n) +
                                  " is not onto the target generators");
    if (!bindings[n].respects_relations())
      throw std::invalid_argument("inverse system: binding map " + std::to_string(n) +
                                  " breaks a commutation relation");
  }
}

Morphism interval_map(const InverseSystem& sys, std::uint32_t k, std::uint32_t n) {
  if (n > k || k >= sys.depth()) throw std::out_of_range("interval_map: indices out of range");
  if (k == n) return Morphism::identity_map(sys.levels[k]);
  Morphism acc = sys.bindings[k - 1];
  for (std::uint32_t i = k - 1; i-- > n;) acc = sys.bindings[i].after(acc);
  return acc;
}

PreMorphism identity_premorphism(const SystemPtr& sys) {
  PreMorphism f;
  f.src = sys;
  f.dst = sys;
  for (std::uint32_t n = 0; n < sys->depth(); ++n) {
    f.phi.push_back(n);
    f.components.push_back(Morphism::identity_map(sys->levels[n]));
  }
  return f;
}

bool check_premorphism(const PreMorphism& f, std::uint32_t up_to) {
  std::uint32_t top = std::min<std::uint32_t>(up_to, f.depth());
  for (std::uint32_t n = 0; n < top; ++n) {
    if (n + 1 < f.phi.size() && f.phi[n] > f.phi[n + 1]) return false;
    if (!mekler::same_universe(f.components[n].src(), f.src->levels[f.phi[n]])) return false;
    if (!mekler::same_universe(f.components[n].dst(), f.dst->levels[n])) return false;
  }
  for (std::uint32_t k = 1; k < top; ++k)
    for (std::uint32_t n = 0; n < k; ++n) {
      Morphism lhs = f.components[n].after(interval_map(*f.src, f.phi[k], f.phi[n]));
      Morphism rhs = interval_map(*f.dst, k, n).after(f.components[k]);
      if (!lhs.equal_on_generators(rhs)) return false;
    }
  return true;
}

PreMorphism compose(const PreMorphism& f, const PreMorphism& g) {
  PreMorphism out;
  out.src = f.src;
  out.dst = g.dst;
  for (std::uint32_t n = 0; n < g.depth(); ++n) {
    if (g.phi[n] >= f.depth()) break;
    out.phi.push_back(f.phi[g.phi[n]]);
    out.components.push_back(g.components[n].after(f.components[g.phi[n]]));
  }
  if (out.components.empty()) throw std::out_of_range("compose: depth exhausted");
  return out;
}

bool equivalent(const PreMorphism& f, const PreMorphism& g, std::uint32_t up_to) {
  if (f.src->depth() != g.src->depth() || f.dst->depth() != g.dst->depth()) return false;
  std::uint32_t top = std::min({up_to, f.depth(), g.depth()});
  std::uint32_t deepest = f.src->depth() - 1;
  for (std::uint32_t n = 0; n < top; ++n) {
    // with onto bindings the triangle commutes at some m iff it commutes
    // when both sides are pulled back to the deepest tabulated level
    Morphism lhs = f.components[n].after(interval_map(*f.src, deepest, f.phi[n]));
    Morphism rhs = g.components[n].after(interval_map(*g.src, deepest, g.phi[n]));
    if (!lhs.equal_on_generators(rhs)) return false;
  }
  return true;
}

bool equivalent_to_identity(const PreMorphism& f, std::uint32_t up_to) {
  std::uint32_t top = std::min<std::uint32_t>(up_to, f.depth());
  for (std::uint32_t n = 0; n < top; ++n)
    if (!f.components[n].equal_on_generators(interval_map(*f.src, f.phi[n], n))) return false;
  return true;
}

void evaluate_limit(const InverseSystem& sys, const CoherentSequence& seq) {
  if (seq.size() > sys.depth())
    throw CoherenceError(sys.depth(), "sequence deeper than the system");
  for (std::uint32_t n = 0; n < seq.size(); ++n)
    if (!mekler::same_universe(seq[n].uni, sys.levels[n]))
      throw CoherenceError(n, "level " + std::to_string(n) + ": element in wrong group");
  for (std::uint32_t n = 0; n + 1 < seq.size(); ++n)
    if (sys.bindings[n].apply(seq[n + 1]) != seq[n])
      throw CoherenceError(n, "coherence fails at level " + std::to_string(n));
}

CoherentSequence lift_from_base(const InverseSystem& sys, const GroupElement& g0,
                                std::uint32_t to_level) {
  if (to_level >= sys.depth()) throw std::out_of_range("lift_from_base: level out of range");
  CoherentSequence seq = {g0};
  for (std::uint32_t n = 0; n < to_level; ++n) {
    const Morphism& p = sys.bindings[n];
    const UniversePtr& up = sys.levels[n + 1];
    // least generator preimage for each target generator
    std::vector<std::uint32_t> pre(sys.levels[n]->size(), up->size());
    for (std::uint32_t i = up->size(); i-- > 0;) {
      const GroupElement& img = p.images()[i];
      if (img.central.empty() && img.base.support_size() == 1) {
        const auto& [j, e] = *img.base.entries().begin();
        if (e == 1) pre[j] = i;
      }
    }
    const GroupElement& cur = seq.back();
    mekler::Word word;
    for (const auto& [j, e] : cur.base.entries()) {
      if (pre[j] >= up->size())
        throw std::invalid_argument("lift_from_base: binding misses a generator preimage");
      word.emplace_back(pre[j], static_cast<long long>(e));
    }
    GroupElement lifted = mekler::fold_word(up, word);
    // fix the central defect through lifted central generators
    GroupElement defect = multiply(cur, inverse(p.apply(lifted)));
    for (const auto& [key, e] : defect.central) {
      GroupElement cg = mekler::central_generator(up, pre[key.first], pre[key.second]);
      lifted = multiply(lifted, power(cg, static_cast<long long>(e)));
    }
    if (p.apply(lifted) != cur)
      throw std::invalid_argument("lift_from_base: constructive lift failed at level " +
                                  std::to_string(n));
    seq.push_back(std::move(lifted));
  }
  return seq;
}

CoherentSequence apply_P(const PreMorphism& f, const CoherentSequence& seq) {
  if (f.depth() == 0) return {};
  if (f.phi.back() >= seq.size()) throw std::out_of_range("apply_P: insufficient depth");
  CoherentSequence out;
  out.reserve(f.depth());
  for (std::uint32_t n = 0; n < f.depth(); ++n)
    out.push_back(f.components[n].apply(seq[f.phi[n]]));
  return out;
}

std::vector<std::uint32_t> derive_phi(const InverseSystem& A,
                                      const std::vector<Morphism>& gammas_from_top) {
  const std::uint32_t top = A.depth() - 1;
  std::vector<std::uint32_t> phi;
  for (std::size_t n = 0; n < gammas_from_top.size(); ++n) {
    const Morphism& gamma = gammas_from_top[n];
    if (!mekler::same_universe(gamma.src(), A.levels[top]))
      throw std::invalid_argument("derive_phi: gamma_" + std::to_string(n) +
                                  " is not given on the deepest level");
    bool found = false;
    for (std::uint32_t m = 0; m <= top && !found; ++m) {
      Morphism trunc = interval_map(A, top, m);
      std::map<GroupElement, const GroupElement*> rep;
      bool ok = true;
      for (std::uint32_t g = 0; g < A.levels[top]->size(); ++g) {
        auto [it, fresh] = rep.try_emplace(trunc.images()[g], &gamma.images()[g]);
        if (!fresh && *it->second != gamma.images()[g]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        phi.push_back(m);
        found = true;
      }
    }
    if (!found)
      throw std::invalid_argument("derive_phi: no kernel inclusion within the depth bound");
  }
  for (std::size_t n = 0; n + 1 < phi.size(); ++n)
    if (phi[n] > phi[n + 1])
      throw std::logic_error("derive_phi: kernel data is not level-compatible");
  return phi;
}

namespace {

json universe_to_json(const UniversePtr& u) {
  if (u->is_paired()) {
    json labels = json::array();
    for (const auto& v : u->labels()) labels.push_back(v);
    return json{{"p", u->prime()}, {"labels", labels}};
  }
  std::string graph;
  switch (u->graph().kind()) {
    case mekler::CommGraph::Kind::matching: graph = "matching"; break;
    case mekler::CommGraph::Kind::none: graph = "none"; break;
    case mekler::CommGraph::Kind::edges: graph = "edges"; break;
  }
  return json{{"p", u->prime()}, {"graph", graph}, {"size", u->size()}};
}

UniversePtr universe_from_json(const json& j) {
  std::uint32_t p = j.at("p").get<std::uint32_t>();
  if (j.contains("labels")) {
    std::vector<Node> labels;
    for (const auto& v : j.at("labels")) labels.push_back(v.get<Node>());
    return mekler::Universe::paired(p, std::move(labels));
  }
  std::string graph = j.at("graph").get<std::string>();
  std::uint32_t size = j.at("size").get<std::uint32_t>();
  if (graph == "matching") return mekler::Universe::plain(p, mekler::CommGraph::matching(), size);
  if (graph == "none") return mekler::Universe::plain(p, mekler::CommGraph::free_graph(), size);
  throw std::invalid_argument("universe_from_json: unsupported graph kind");
}

json morphism_images_to_json(const Morphism& m) {
  json images = json::array();
  for (const auto& g : m.images()) images.push_back(mekler::to_string(g));
  return images;
}

Morphism morphism_from_json(const json& images, const UniversePtr& src, const UniversePtr& dst) {
  std::vector<GroupElement> imgs;
  for (const auto& s : images) imgs.push_back(mekler::parse_element(dst, s.get<std::string>()));
  return Morphism(src, dst, std::move(imgs));
}

}  // namespace

json to_json(const InverseSystem& sys) {
  json levels = json::array();
  for (std::uint32_t n = 0; n < sys.depth(); ++n)
    levels.push_back(json{{"n", n}, {"universe", universe_to_json(sys.levels[n])}});
  json bindings = json::array();
  for (std::uint32_t n = 0; n < sys.bindings.size(); ++n)
    bindings.push_back(json{{"n", n}, {"gen_images", morphism_images_to_json(sys.bindings[n])}});
  return json{{"levels", levels}, {"bindings", bindings}};
}

InverseSystem system_from_json(const json& j) {
  InverseSystem sys;
  for (const auto& lvl : j.at("levels")) sys.levels.push_back(universe_from_json(lvl.at("universe")));
  for (const auto& b : j.at("bindings")) {
    std::uint32_t n = b.at("n").get<std::uint32_t>();
    sys.bindings.push_back(
        morphism_from_json(b.at("gen_images"), sys.levels.at(n + 1), sys.levels.at(n)));
  }
  sys.validate();
  return sys;
}

json to_json(const PreMorphism& f) {
  json components = json::array();
  for (std::uint32_t n = 0; n < f.depth(); ++n)
    components.push_back(json{{"n", n}, {"gen_images", morphism_images_to_json(f.components[n])}});
  return json{{"phi", f.phi}, {"components", components}};
}

PreMorphism premorphism_from_json(const json& j, SystemPtr src, SystemPtr dst) {
  PreMorphism f;
  f.src = std::move(src);
  f.dst = std::move(dst);
  f.phi = j.at("phi").get<std::vector<std::uint32_t>>();
  for (const auto& c : j.at("components")) {
    std::uint32_t n = c.at("n").get<std::uint32_t>();
    f.components.push_back(morphism_from_json(c.at("gen_images"), f.src->levels.at(f.phi.at(n)),
                                              f.dst->levels.at(n)));
  }
  return f;
}

}  // namespace procount::pro
