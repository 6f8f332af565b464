#include "procount/unifmaps.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "procount/rng.hpp"

namespace procount::maps {

using trees::Dyadic;
using trees::LevelData;
using trees::NodeClass;
using trees::SequenceSpec;
using trees::TreeSpec;

Node PrefixMapFamily::apply(const Node& x, std::uint32_t n) const {
  if (n >= level_maps.size()) throw std::out_of_range("family not tabulated to level");
  if (x.size() < phi[n]) throw std::invalid_argument("prefix too short for level map");
  auto it = level_maps[n].find(truncate(x, phi[n]));
  if (it == level_maps[n].end()) throw std::invalid_argument("prefix not in tabulated domain");
  return it->second;
}

PrefixMapFamily identity_family(const LevelData& src, std::uint32_t depth) {
  if (depth > src.depth()) throw std::out_of_range("identity_family: depth exceeds expansion");
  PrefixMapFamily fam;
  for (std::uint32_t n = 0; n <= depth; ++n) {
    fam.phi.push_back(n);
    std::map<Node, Node> level;
    for (const Node& s : src.level(n)) level[s] = s;
    fam.level_maps.push_back(std::move(level));
  }
  return fam;
}

PrefixMapFamily compose_families(const PrefixMapFamily& f, const PrefixMapFamily& g) {
  PrefixMapFamily out;
  for (std::uint32_t n = 0; n < g.level_maps.size(); ++n) {
    std::uint32_t m = g.phi[n];
    if (m >= f.level_maps.size()) break;
    out.phi.push_back(f.phi[m]);
    std::map<Node, Node> level;
    for (const auto& [u, v] : f.level_maps[m]) level[u] = g.level_maps[n].at(v);
    out.level_maps.push_back(std::move(level));
  }
  if (out.level_maps.empty()) throw std::invalid_argument("compose_families: no common depth");
  return out;
}

std::optional<std::string> consistency_failure(const PrefixMapFamily& fam) {
  std::ostringstream why;
  if (fam.level_maps.empty() || fam.phi.size() != fam.level_maps.size())
    return "family shape: phi and level maps disagree";
  if (fam.phi[0] != 0) return "phi(0) must be 0";
  for (std::size_t n = 0; n + 1 < fam.phi.size(); ++n)
    if (fam.phi[n] > fam.phi[n + 1]) return "phi is not monotone";
  for (std::uint32_t n = 0; n < fam.level_maps.size(); ++n)
    for (const auto& [u, v] : fam.level_maps[n]) {
      if (u.size() != fam.phi[n] || v.size() != n) {
        why << "level " << n << ": entry with wrong prefix lengths";
        return why.str();
      }
    }
  for (std::uint32_t n = 0; n + 1 < fam.level_maps.size(); ++n)
    for (const auto& [t, v] : fam.level_maps[n + 1]) {
      auto it = fam.level_maps[n].find(truncate(t, fam.phi[n]));
      if (it == fam.level_maps[n].end()) {
        why << "level " << n << ": domain misses a restriction of level " << n + 1;
        return why.str();
      }
      if (it->second != truncate(v, n)) {
        why << "level " << n << ": r_n(t|phi(n)) != r_{n+1}(t)|n at t=" << node_to_string(t);
        return why.str();
      }
    }
  return std::nullopt;
}

bool domains_match(const PrefixMapFamily& fam, const LevelData& src) {
  for (std::uint32_t n = 0; n < fam.level_maps.size(); ++n) {
    if (fam.phi[n] > src.depth()) return false;
    const auto& level = src.level(fam.phi[n]);
    if (level.size() != fam.level_maps[n].size()) return false;
    auto it = fam.level_maps[n].begin();
    for (const Node& s : level) {
      if (it->first != s) return false;
      ++it;
    }
  }
  return true;
}

bool onto_levels(const PrefixMapFamily& fam, const LevelData& target) {
  for (std::uint32_t n = 0; n < fam.level_maps.size(); ++n) {
    if (n > target.depth()) return false;
    std::set<Node> image;
    for (const auto& [u, v] : fam.level_maps[n]) image.insert(v);
    const auto& level = target.level(n);
    if (image.size() != level.size()) return false;
    if (!std::equal(image.begin(), image.end(), level.begin())) return false;
  }
  return true;
}

bool mutually_inverse(const PrefixMapFamily& f, const PrefixMapFamily& g) {
  bool checked_any = false;
  for (std::uint32_t n = 0; n < g.level_maps.size(); ++n) {
    std::uint32_t m = g.phi[n];
    if (m >= f.level_maps.size()) break;
    for (const auto& [t, v] : f.level_maps[m]) {
      if (g.level_maps[n].at(v) != truncate(t, n)) return false;
      checked_any = true;
    }
  }
  for (std::uint32_t n = 0; n < f.level_maps.size(); ++n) {
    std::uint32_t m = f.phi[n];
    if (m >= g.level_maps.size()) break;
    for (const auto& [t, v] : g.level_maps[m]) {
      if (f.level_maps[n].at(v) != truncate(t, n)) return false;
      checked_any = true;
    }
  }
  return checked_any;
}

std::uint32_t compute_modulus(const PrefixMapFamily& fam, std::uint32_t n) {
  if (n >= fam.level_maps.size()) throw std::out_of_range("compute_modulus: insufficient depth");
  const auto& level = fam.level_maps[n];
  for (std::uint32_t m = 0; m <= fam.phi[n]; ++m) {
    std::map<Node, const Node*> rep;
    bool ok = true;
    for (const auto& [u, v] : level) {
      auto [it, fresh] = rep.try_emplace(truncate(u, m), &v);
      if (!fresh && *it->second != v) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  throw std::logic_error("compute_modulus: no modulus within phi(n)");
}

namespace {

std::vector<std::uint32_t> node_bits(std::uint32_t k, const Node& prefix) {
  std::vector<std::uint32_t> bits;
  if (prefix.empty()) return bits;
  for (std::uint32_t i = k; i-- > 0;) bits.push_back((prefix[0] >> i) & 1u);
  for (std::size_t i = 1; i < prefix.size(); ++i) bits.push_back(prefix[i]);
  return bits;
}

}  // namespace

Node phi_kl(std::uint32_t k, std::uint32_t l, const Node& prefix) {
  if (!TreeSpec::r_k(k).contains(prefix)) throw std::invalid_argument("phi_kl: node not in R_k");
  Node out;
  if (prefix.empty()) return out;
  std::vector<std::uint32_t> bits = node_bits(k, prefix);
  if (bits.size() < l) return out;  // first output symbol undetermined
  std::uint32_t first = 0;
  for (std::uint32_t i = 0; i < l; ++i) first = first * 2 + bits[i];
  out.push_back(first);
  for (std::size_t i = l; i < bits.size(); ++i) out.push_back(bits[i]);
  return out;
}

Node phi_kl_at(std::uint32_t k, std::uint32_t l, const Node& prefix, std::uint32_t out_len) {
  Node out = phi_kl(k, l, prefix);
  if (out.size() < out_len)
    throw std::invalid_argument("phi_kl: output undetermined at requested length");
  return truncate(out, out_len);
}

PrefixMapFamily phi_kl_family(std::uint32_t k, std::uint32_t l, std::uint32_t depth) {
  // source levels must carry l + (n-1) bits to pin the level-n image
  std::uint32_t shift = l > k ? l - k : 0;
  LevelData src = trees::expand(TreeSpec::r_k(k), depth + shift, 0);
  PrefixMapFamily fam;
  for (std::uint32_t n = 0; n <= depth; ++n) {
    std::uint32_t m = n == 0 ? 0 : n + shift;
    fam.phi.push_back(m);
    std::map<Node, Node> level;
    for (const Node& s : src.level(m)) level[s] = phi_kl_at(k, l, s, n);
    fam.level_maps.push_back(std::move(level));
  }
  return fam;
}

Node psi_image(const TreeSpec& tx, const SequenceSpec& x, const SequenceSpec& y, const Node& u) {
  NodeClass c = trees::classify(tx, u);
  switch (c.where) {
    case NodeClass::Where::s_star:
    case NodeClass::Where::s_copy:
      return u;  // label identity on S_omega and the S copies
    case NodeClass::Where::r_copy: {
      Node mapped = phi_kl(x.value(c.k), y.value(c.k), c.suffix);
      Node out = trees::t_node(c.k, c.m);
      if (mapped.empty()) return out;
      out.push_back(2 * mapped[0] + 1);
      out.insert(out.end(), mapped.begin() + 1, mapped.end());
      return out;
    }
    case NodeClass::Where::outside:
      break;
  }
  throw std::invalid_argument("psi_image: node not in T_x");
}

PrefixMapFamily build_psi(const SequenceSpec& x, const SequenceSpec& y, std::uint32_t M,
                          std::uint32_t depth, std::uint32_t label_bound) {
  auto dist = trees::linf_distance(x, y);
  if (!dist || *dist >= M)
    throw std::invalid_argument("build_psi: l_infty bound violated on the specs");
  std::uint32_t shift = 0;
  for (std::uint32_t k = 0; 2 * k < label_bound; ++k) {
    std::uint32_t xv = x.value(k), yv = y.value(k);
    if (yv > xv) shift = std::max(shift, yv - xv);
  }
  TreeSpec tx = TreeSpec::t_x(x);
  LevelData src = trees::expand(tx, depth + shift, label_bound);
  PrefixMapFamily fam;
  for (std::uint32_t n = 0; n <= depth; ++n) {
    std::uint32_t m = n == 0 ? 0 : n + shift;
    fam.phi.push_back(m);
    std::map<Node, Node> level;
    for (const Node& s : src.level(m)) {
      Node img = psi_image(tx, x, y, s);
      if (img.size() < n) throw std::logic_error("build_psi: image shorter than level");
      level[s] = truncate(img, n);
    }
    fam.level_maps.push_back(std::move(level));
  }
  return fam;
}

std::vector<std::uint64_t> reduce_linfty_to_naturals(const std::vector<Rational>& xs,
                                                     std::size_t length) {
  std::vector<std::uint64_t> out(2 * length, 0);
  for (std::size_t n = 0; n < length && n < xs.size(); ++n) {
    const Rational& v = xs[n];
    long long num = v.numerator(), den = v.denominator();
    long long fl = num / den - ((num % den != 0 && num < 0) ? 1 : 0);
    if (num >= 0) {
      out[2 * n] = static_cast<std::uint64_t>(fl);
      out[2 * n + 1] = 0;
    } else {
      out[2 * n] = 0;
      out[2 * n + 1] = static_cast<std::uint64_t>(-fl);
    }
  }
  return out;
}

LipschitzEstimate empirical_lipschitz(const std::vector<Node>& domain,
                                      const std::function<Node(const Node&)>& fn,
                                      std::uint64_t pair_cap, std::uint64_t seed) {
  LipschitzEstimate est;
  est.max_ratio = Dyadic::zero_value();
  const std::uint64_t n = domain.size();
  if (n < 2) return est;
  std::vector<Node> images(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) images[i] = fn(domain[i]);
  auto consider = [&](std::size_t i, std::size_t j) {
    auto din = trees::branch_distance(domain[i], domain[j]);
    if (!din) return;
    auto dout = trees::branch_distance(images[i], images[j]);
    ++est.pairs_used;
    if (!dout) return;  // image agreement: no ratio witnessed at this depth
    Dyadic r = trees::dyadic_ratio(*dout, *din);
    est.max_ratio = std::max(est.max_ratio, r);
  };
  const std::uint64_t total = n * (n - 1) / 2;
  if (total <= pair_cap) {
    est.exhaustive = true;
    for (std::size_t i = 0; i < domain.size(); ++i)
      for (std::size_t j = i + 1; j < domain.size(); ++j) consider(i, j);
  } else {
    Rng rng(seed);
    for (std::uint64_t t = 0; t < pair_cap; ++t) {
      std::size_t i = rng.below(n), j = rng.below(n);
      if (i != j) consider(i, j);
    }
  }
  return est;
}

LipschitzEstimate empirical_lipschitz(const PrefixMapFamily& fam, std::uint64_t pair_cap,
                                      std::uint64_t seed) {
  const std::uint32_t top = fam.depth();
  std::vector<Node> domain;
  domain.reserve(fam.level_maps[top].size());
  for (const auto& [u, v] : fam.level_maps[top]) domain.push_back(u);
  return empirical_lipschitz(
      domain, [&](const Node& u) { return fam.level_maps[top].at(u); }, pair_cap, seed);
}

json to_json(const PrefixMapFamily& fam) {
  json maps = json::array();
  for (std::uint32_t n = 0; n < fam.level_maps.size(); ++n) {
    json pairs = json::array();
    for (const auto& [u, v] : fam.level_maps[n]) pairs.push_back(json::array({u, v}));
    maps.push_back(json{{"n", n}, {"pairs", pairs}});
  }
  return json{{"phi", fam.phi}, {"maps", maps}};
}

PrefixMapFamily family_from_json(const json& j) {
  PrefixMapFamily fam;
  fam.phi = j.at("phi").get<std::vector<std::uint32_t>>();
  fam.level_maps.resize(fam.phi.size());
  for (const auto& entry : j.at("maps")) {
    std::uint32_t n = entry.at("n").get<std::uint32_t>();
    if (n >= fam.level_maps.size()) throw std::invalid_argument("family_from_json: level out of range");
    for (const auto& pr : entry.at("pairs"))
      fam.level_maps[n][pr.at(0).get<Node>()] = pr.at(1).get<Node>();
  }
  return fam;
}

}  // namespace procount::maps
