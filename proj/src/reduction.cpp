#include "procount/reduction.hpp"

#include <algorithm>
#include <sstream>

namespace procount::reduction {

using maps::PrefixMapFamily;
using mekler::Morphism;
using mekler::UniversePtr;
using trees::LevelData;
using trees::SequenceSpec;
using trees::TreeSpec;

namespace {

std::uint32_t node_index(const std::vector<Node>& level, const Node& s) {
  auto it = std::lower_bound(level.begin(), level.end(), s);
  if (it == level.end() || *it != s) throw std::invalid_argument("node not in level");
  return static_cast<std::uint32_t>(it - level.begin());
}

}  // namespace

GroupSystem build_group_system(const TreeSpec& tree, std::uint32_t depth,
                               std::uint32_t label_bound, std::uint32_t p) {
  if (depth < 1) throw std::invalid_argument("build_group_system: depth >= 1 required");
  GroupSystem out;
  out.tree = tree;
  out.prime = p;
  out.nodes = trees::expand(tree, depth, label_bound);
  if (!trees::check_levels_closed_pruned(out.nodes))
    throw std::invalid_argument("build_group_system: tree expansion not closed and pruned");
  auto sys = std::make_shared<pro::InverseSystem>();
  for (std::uint32_t n = 1; n <= depth; ++n)
    sys->levels.push_back(mekler::Universe::paired(p, out.nodes.level(n)));
  for (std::uint32_t n = 1; n < depth; ++n) {
    const auto& src_level = out.nodes.level(n + 1);
    const auto& dst_level = out.nodes.level(n);
    std::vector<std::uint32_t> label_map;
    label_map.reserve(src_level.size());
    for (const Node& t : src_level) label_map.push_back(node_index(dst_level, truncate(t, n)));
    sys->bindings.push_back(
        Morphism::induced(sys->levels[n], sys->levels[n - 1], label_map));
  }
  sys->validate();
  out.system = std::move(sys);
  return out;
}

bool is_L_morphism(const Morphism& m) {
  if (!m.src()->is_paired()) return false;
  const std::uint32_t p = m.src()->prime();
  for (std::size_t v = 0; v < m.src()->label_count(); ++v)
    if (fp::rank2(mekler::central_image(m.images()[2 * v]),
                  mekler::central_image(m.images()[2 * v + 1]), p) != 2)
      return false;
  return true;
}

namespace {

// group-level pre-morphism from a prefix-map family: component n is the
// epimorphism induced by r_{n+1} : T_{phi(n+1)} -> U_{n+1}
pro::PreMorphism premorphism_from_family(const PrefixMapFamily& fam, const GroupSystem& src,
                                         const GroupSystem& dst) {
  pro::PreMorphism F;
  F.src = src.system;
  F.dst = dst.system;
  for (std::uint32_t n = 0; n + 1 < fam.level_maps.size(); ++n) {
    std::uint32_t m = fam.phi[n + 1];
    if (m == 0) throw std::invalid_argument("forward: degenerate family with phi(n+1) = 0");
    if (m > src.system->depth() || n + 1 > dst.system->depth()) break;
    const auto& src_level = src.nodes.level(m);
    const auto& dst_level = dst.nodes.level(n + 1);
    std::vector<std::uint32_t> label_map;
    label_map.reserve(src_level.size());
    for (const Node& t : src_level)
      label_map.push_back(node_index(dst_level, fam.level_maps[n + 1].at(t)));
    F.phi.push_back(m - 1);
    F.components.push_back(
        Morphism::induced(src.system->levels[m - 1], dst.system->levels[n], label_map));
  }
  if (F.components.empty()) throw std::invalid_argument("forward: no tabulated group level fits");
  return F;
}

// verify the star identities g_n o f_{psi(n)} = p_hat_{phi(psi(n)), n};
// returns the number of levels that were checkable
std::uint32_t check_star(const pro::PreMorphism& f, const pro::PreMorphism& g) {
  std::uint32_t checked = 0;
  for (std::uint32_t n = 0; n < g.depth(); ++n) {
    std::uint32_t m = g.phi[n];
    if (m >= f.depth()) break;
    Morphism comp = g.components[n].after(f.components[m]);
    Morphism binding = pro::interval_map(*f.src, f.phi[m], n);
    if (!comp.equal_on_generators(binding))
      throw std::runtime_error("star identity fails at level " + std::to_string(n));
    ++checked;
  }
  return checked;
}

}  // namespace

ForwardResult forward(const PrefixMapFamily& r, const PrefixMapFamily& s, const GroupSystem& GT,
                      const GroupSystem& GU) {
  if (auto why = maps::consistency_failure(r))
    throw std::invalid_argument("forward: source family inconsistent: " + *why);
  if (auto why = maps::consistency_failure(s))
    throw std::invalid_argument("forward: target family inconsistent: " + *why);
  if (!maps::mutually_inverse(r, s))
    throw std::invalid_argument("forward: families are not mutually inverse at this depth");
  ForwardResult out{premorphism_from_family(r, GT, GU), premorphism_from_family(s, GU, GT), 0, 0};
  if (!pro::check_premorphism(out.f, out.f.depth()))
    throw std::runtime_error("forward: f-squares do not commute");
  if (!pro::check_premorphism(out.g, out.g.depth()))
    throw std::runtime_error("forward: g-squares do not commute");
  out.star_checked_f = check_star(out.f, out.g);  // g_n o f_{psi(n)} = p-hat
  out.star_checked_g = check_star(out.g, out.f);  // f_n o g_{phi(n)} = q-hat
  return out;
}

BackwardResult backward(const pro::PreMorphism& f, const pro::PreMorphism& g,
                        const GroupSystem& GT, const GroupSystem& GU) {
  auto family_from = [](const pro::PreMorphism& F, const GroupSystem& src,
                        const GroupSystem& dst) {
    PrefixMapFamily fam;
    fam.phi.push_back(0);
    fam.level_maps.push_back({{Node{}, Node{}}});
    for (std::uint32_t n = 0; n < F.depth(); ++n) {
      if (!is_L_morphism(F.components[n]))
        throw std::invalid_argument("backward: component " + std::to_string(n) +
                                    " is not a morphism of the category L");
      std::vector<std::uint32_t> labels;
      try {
        labels = mekler::functor_labels(F.components[n]);
      } catch (const mekler::FunctorError& e) {
        throw std::invalid_argument("backward: functor F failed at level " + std::to_string(n) +
                                    ": " + e.what());
      }
      const auto& src_level = src.nodes.level(F.phi[n] + 1);
      const auto& dst_level = dst.nodes.level(n + 1);
      std::map<Node, Node> level;
      for (std::size_t i = 0; i < src_level.size(); ++i)
        level[src_level[i]] = dst_level.at(labels[i]);
      fam.phi.push_back(F.phi[n] + 1);
      fam.level_maps.push_back(std::move(level));
    }
    return fam;
  };
  BackwardResult out{family_from(f, GT, GU), family_from(g, GU, GT)};
  if (auto why = maps::consistency_failure(out.r))
    throw std::runtime_error("backward: recovered family inconsistent: " + *why);
  if (auto why = maps::consistency_failure(out.s))
    throw std::runtime_error("backward: recovered family inconsistent: " + *why);
  if (!maps::mutually_inverse(out.r, out.s))
    throw std::runtime_error("backward: recovered families are not mutually inverse");
  return out;
}

json InstanceReport::to_json() const {
  json stage_list = json::array();
  for (const auto& st : stages) {
    json failures = json::array();
    for (const auto& [level, what] : st.failures)
      failures.push_back(json{{"level", level}, {"detail", what}});
    stage_list.push_back(json{{"stage", st.stage},
                              {"status", st.status},
                              {"depth", depth},
                              {"width", width},
                              {"failures", failures},
                              {"detail", st.detail}});
  }
  return json{{"result", result}, {"ok", ok}, {"stages", stage_list}};
}

InstanceReport verify_main_theorem_instance(const SequenceSpec& x, const SequenceSpec& y,
                                            std::uint32_t M, std::uint32_t depth,
                                            std::uint32_t label_bound, std::uint32_t p) {
  InstanceReport report;
  report.depth = depth;
  report.width = label_bound;
  auto stage = [&report](const std::string& name, const std::string& status, json detail) {
    report.stages.push_back({name, status, std::move(detail), {}});
  };

  auto dist = trees::linf_distance(x, y);
  if (dist && *dist < M) {
    stage("linf_check", "ok", json{{"sup_difference", *dist}, {"M", M}});
  } else {
    stage("linf_check", "violated",
          dist ? json{{"sup_difference", *dist}, {"M", M}}
               : json{{"sup_difference", "unbounded"}, {"M", M}});
    // Capacity certificate: any uniform homeomorphism whose moduli fit the
    // tested depth yields m >= 2 and 2M'+2 >= Omega <= depth, so
    // x(k) - y(k) <= M' - m + 1 <= ceil((depth-2)/2) - 1 for every k.
    std::uint32_t m_min = 2;
    std::uint32_t M_max = depth >= 2 ? (depth - 2 + 1) / 2 : 0;
    std::uint32_t bound = M_max >= m_min ? M_max - m_min + 1 : 0;
    std::optional<std::uint32_t> witness;
    for (std::uint32_t k = 0; 2 * k < label_bound; ++k) {
      std::uint32_t xv = x.value(k), yv = y.value(k);
      std::uint32_t diff = xv > yv ? xv - yv : yv - xv;
      if (diff > bound) {
        witness = k;
        break;
      }
    }
    if (witness) {
      std::uint32_t k = *witness;
      std::uint32_t lo = std::min(x.value(k), y.value(k));
      trees::Capacity cap = trees::capacity_inequality(lo, m_min, std::max(M_max, m_min));
      stage("capacity_certificate", "certified_violation",
            json{{"witness_k", k},
                 {"x_k", x.value(k)},
                 {"y_k", y.value(k)},
                 {"max_modulus_bound_M", M_max},
                 {"min_m", m_min},
                 {"derived_bound_on_difference", bound},
                 {"capacity_lhs", cap.lhs},
                 {"capacity_rhs", cap.rhs}});
      report.result = "certified: no uniform homeomorphism with moduli inside depth " +
                      std::to_string(depth);
      report.ok = true;
    } else {
      stage("capacity_certificate", "inconclusive",
            json{{"derived_bound_on_difference", bound},
                 {"note", "no witness k within the label bound"}});
      report.result = "linf bound violated; no certificate within truncation";
      report.ok = false;
    }
    return report;
  }

  try {
    GroupSystem GT = build_group_system(TreeSpec::t_x(x), depth, label_bound, p);
    GroupSystem GU = build_group_system(TreeSpec::t_x(y), depth, label_bound, p);
    stage("build_trees", "ok",
          json{{"depth", depth},
               {"width", label_bound},
               {"T_levels", trees::count_level(GT.nodes, depth)},
               {"U_levels", trees::count_level(GU.nodes, depth)},
               {"truncated", true}});

    PrefixMapFamily r = maps::build_psi(x, y, M, depth, label_bound);
    PrefixMapFamily s = maps::build_psi(y, x, M, depth, label_bound);
    json psi_detail{{"phi", r.phi}, {"psi", s.phi}};
    if (auto why = maps::consistency_failure(r)) throw std::runtime_error("psi: " + *why);
    if (auto why = maps::consistency_failure(s)) throw std::runtime_error("psi inverse: " + *why);
    if (!maps::onto_levels(r, GU.nodes)) throw std::runtime_error("psi: not onto target levels");
    if (!maps::onto_levels(s, GT.nodes)) throw std::runtime_error("psi inverse: not onto");
    if (!maps::mutually_inverse(r, s)) throw std::runtime_error("psi pair: not mutually inverse");
    stage("build_psi", "ok", psi_detail);

    ForwardResult fw = forward(r, s, GT, GU);
    stage("forward", "ok",
          json{{"f_depth", fw.f.depth()},
               {"g_depth", fw.g.depth()},
               {"star_checked_f", fw.star_checked_f},
               {"star_checked_g", fw.star_checked_g}});

    BackwardResult bw = backward(fw.f, fw.g, GT, GU);
    bool exact = true;
    for (std::uint32_t n = 0; n < bw.r.level_maps.size(); ++n)
      if (bw.r.phi[n] != r.phi[n] || bw.r.level_maps[n] != r.level_maps[n]) exact = false;
    for (std::uint32_t n = 0; n < bw.s.level_maps.size(); ++n)
      if (bw.s.phi[n] != s.phi[n] || bw.s.level_maps[n] != s.level_maps[n]) exact = false;
    if (!exact) throw std::runtime_error("backward: recovery is not exact");
    stage("backward", "ok",
          json{{"recovered_levels_r", bw.r.depth()}, {"recovered_levels_s", bw.s.depth()},
               {"exact_recovery", true}});

    report.result = "verified: round trip exact at depth " + std::to_string(depth);
    report.ok = true;
  } catch (const std::exception& e) {
    StageReport failed{"pipeline", "failed", json::object(), {{-1, e.what()}}};
    report.stages.push_back(std::move(failed));
    report.result = std::string("failed: ") + e.what();
    report.ok = false;
  }
  return report;
}

}  // namespace procount::reduction
