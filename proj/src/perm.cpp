#include "procount/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace procount::perm {

bool is_injective(const PartialPerm& s) {
  std::set<std::uint32_t> seen(s.begin(), s.end());
  return seen.size() == s.size();
}

PartialPerm partial_compose(const PartialPerm& s, const PartialPerm& t) {
  PartialPerm out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= s.size()) break;
    out.push_back(s[t[i]]);
  }
  return out;
}

PartialPerm partial_inverse(const PartialPerm& s) {
  PartialPerm out;
  for (std::uint32_t j = 0;; ++j) {
    auto it = std::find(s.begin(), s.end(), j);
    if (it == s.end()) break;
    out.push_back(static_cast<std::uint32_t>(it - s.begin()));
  }
  return out;
}

PartialPerm sigma(std::uint32_t n) {
  PartialPerm out(n);
  std::iota(out.begin(), out.end(), 0u);
  return out;
}

Perm perm_mul(const Perm& a, const Perm& b) {
  Perm out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

Perm perm_inv(const Perm& a) {
  Perm out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<std::uint32_t>(i);
  return out;
}

FinitePermGroup::FinitePermGroup(std::uint32_t degree, std::vector<Perm> elements)
    : degree_(degree), elements_(std::move(elements)) {}

FinitePermGroup FinitePermGroup::from_elements(std::uint32_t degree, std::vector<Perm> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (const Perm& g : elements) {
    if (g.size() != degree || !is_injective(g))
      throw std::invalid_argument("FinitePermGroup: not a permutation of the degree");
  }
  FinitePermGroup G(degree, std::move(elements));
  Perm id = sigma(degree);
  if (!G.contains(id)) throw std::invalid_argument("FinitePermGroup: missing identity");
  for (const Perm& g : G.elements_) {
    if (!G.contains(perm_inv(g))) throw std::invalid_argument("FinitePermGroup: missing inverse");
    for (const Perm& h : G.elements_)
      if (!G.contains(perm_mul(g, h)))
        throw std::invalid_argument("FinitePermGroup: not closed under composition");
  }
  return G;
}

FinitePermGroup FinitePermGroup::closure(std::uint32_t degree, const std::vector<Perm>& gens) {
  std::set<Perm> all;
  all.insert(sigma(degree));
  std::vector<Perm> frontier = {sigma(degree)};
  for (const Perm& g : gens)
    if (all.insert(g).second) frontier.push_back(g);
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& w : frontier)
      for (const Perm& g : gens) {
        for (const Perm& prod : {perm_mul(w, g), perm_mul(g, w)})
          if (all.insert(prod).second) next.push_back(prod);
      }
    frontier = std::move(next);
  }
  // closure under generator products plus inverses (finite => automatic,
  // but validate anyway via from_elements)
  return from_elements(degree, std::vector<Perm>(all.begin(), all.end()));
}

FinitePermGroup FinitePermGroup::symmetric(std::uint32_t n) {
  std::vector<Perm> all;
  Perm p = sigma(n);
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return FinitePermGroup(n, std::move(all));  // already sorted and a group
}

FinitePermGroup FinitePermGroup::trivial(std::uint32_t n) {
  return FinitePermGroup(n, {sigma(n)});
}

bool FinitePermGroup::contains(const Perm& g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

bool FinitePermGroup::extends(const Perm& g, const PartialPerm& s) const {
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::uint32_t gi = i < degree_ ? g[i] : static_cast<std::uint32_t>(i);
    if (gi != s[i]) return false;
  }
  return true;
}

std::vector<Perm> FinitePermGroup::cylinder_members(const PartialPerm& s) const {
  std::vector<Perm> out;
  for (const Perm& g : elements_)
    if (extends(g, s)) out.push_back(g);
  return out;
}

bool FinitePermGroup::cylinder_nonempty(const PartialPerm& s, std::uint32_t fix_n) const {
  PartialPerm fix = sigma(fix_n);
  for (const Perm& g : elements_)
    if (extends(g, s) && extends(g, fix)) return true;
  return false;
}

std::pair<bool, bool> check_borel_conditions(const FinitePermGroup& G, std::uint32_t n,
                                             std::uint32_t k) {
  if (k < n) throw std::invalid_argument("check_borel_conditions: requires k >= n");
  const PartialPerm sig_n = sigma(n);
  const PartialPerm sig_k = sigma(k);

  // (1): conjugates of the sigma_k cylinder stay in the sigma_n cylinder
  bool cond1 = true;
  for (const Perm& x : G.elements()) {
    Perm xinv = perm_inv(x);
    for (const Perm& g : G.elements()) {
      if (!G.extends(g, sig_k)) continue;
      Perm conj = perm_mul(xinv, perm_mul(g, x));
      if (!G.extends(conj, sig_n)) {
        cond1 = false;
        break;
      }
    }
    if (!cond1) break;
  }

  // (2): over restrictions s of members of G and restrictions t of members
  // of the sigma_k cylinder with t extending sigma_k
  std::set<PartialPerm> restrictions;
  std::set<PartialPerm> t_candidates;
  const std::uint32_t N = G.degree();
  for (const Perm& g : G.elements()) {
    for (std::uint32_t len = 0; len <= N; ++len) {
      PartialPerm r(g.begin(), g.begin() + len);
      restrictions.insert(r);
      if (len >= k && G.extends(g, sig_k)) t_candidates.insert(r);
    }
  }
  bool cond2 = true;
  std::map<PartialPerm, bool> cache;
  for (const PartialPerm& s : restrictions) {
    PartialPerm sinv = partial_inverse(s);
    for (const PartialPerm& t : t_candidates) {
      PartialPerm u = partial_compose(sinv, partial_compose(t, s));
      auto [it, fresh] = cache.try_emplace(u, false);
      if (fresh) it->second = G.cylinder_nonempty(u, n);
      if (!it->second) {
        cond2 = false;
        break;
      }
    }
    if (!cond2) break;
  }
  return {cond1, cond2};
}

std::uint64_t cantor_pair(std::uint64_t i, std::uint64_t n) {
  return (i + n) * (i + n + 1) / 2 + n;
}

FinitePermGroup embed_product(const std::vector<std::vector<std::vector<std::uint32_t>>>& tables) {
  // validate the multiplication tables: identity, inverses, associativity
  for (const auto& tab : tables) {
    const std::size_t m = tab.size();
    if (m == 0) throw std::invalid_argument("embed_product: empty table");
    for (const auto& row : tab) {
      if (row.size() != m) throw std::invalid_argument("embed_product: table not square");
      for (auto v : row)
        if (v >= m) throw std::invalid_argument("embed_product: entry out of range");
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (tab[0][a] != a || tab[a][0] != a)
        throw std::invalid_argument("embed_product: element 0 must be the identity");
      bool has_inverse = false;
      for (std::size_t b = 0; b < m; ++b) has_inverse |= (tab[a][b] == 0 && tab[b][a] == 0);
      if (!has_inverse) throw std::invalid_argument("embed_product: missing inverse");
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          if (tab[tab[a][b]][c] != tab[a][tab[b][c]])
            throw std::invalid_argument("embed_product: table not associative");
  }

  std::uint64_t degree = 0;
  for (std::size_t r = 0; r < tables.size(); ++r)
    degree = std::max(degree, cantor_pair(tables[r].size() - 1, r) + 1);
  if (degree > 4096) throw std::length_error("embed_product: coded degree too large");

  std::uint64_t order = 1;
  for (const auto& tab : tables) {
    order *= tab.size();
    if (order > 100000) throw std::length_error("embed_product: product order too large");
  }

  std::vector<Perm> elements;
  std::vector<std::size_t> digits(tables.size(), 0);
  while (true) {
    Perm g = sigma(static_cast<std::uint32_t>(degree));
    for (std::size_t r = 0; r < tables.size(); ++r) {
      const auto& tab = tables[r];
      for (std::size_t j = 0; j < tab.size(); ++j) {
        std::uint64_t from = cantor_pair(j, r);
        std::uint64_t to = cantor_pair(tab[digits[r]][j], r);  // left regular action
        g[from] = static_cast<std::uint32_t>(to);
      }
    }
    elements.push_back(std::move(g));
    std::size_t r = 0;
    while (r < digits.size() && ++digits[r] == tables[r].size()) digits[r++] = 0;
    if (r == digits.size()) break;
  }
  return FinitePermGroup::from_elements(static_cast<std::uint32_t>(degree), std::move(elements));
}

namespace {

std::uint64_t encode_perm(const Perm& g) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < g.size(); ++i) code |= static_cast<std::uint64_t>(g[i]) << (4 * i);
  return code;
}

}  // namespace

std::vector<FinitePermGroup> all_subgroups(std::uint32_t degree) {
  if (degree == 0 || degree > 6) throw std::invalid_argument("all_subgroups: degree in [1,6]");
  FinitePermGroup sym = FinitePermGroup::symmetric(degree);
  const auto& universe = sym.elements();

  // closure of a sorted element set under products (finite group)
  auto close = [&](std::vector<Perm> base) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<Perm> all;
    for (const Perm& g : base)
      if (seen.insert(encode_perm(g)).second) all.push_back(g);
    std::size_t done = 0;
    while (done < all.size()) {
      Perm w = all[done++];
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (const Perm& prod : {perm_mul(w, all[i]), perm_mul(all[i], w)})
          if (seen.insert(encode_perm(prod)).second) all.push_back(prod);
      }
    }
    std::sort(all.begin(), all.end());
    return all;
  };

  std::set<std::vector<Perm>> found;
  std::vector<std::vector<Perm>> queue;
  std::vector<Perm> triv = {sigma(degree)};
  found.insert(triv);
  queue.push_back(triv);
  while (!queue.empty()) {
    std::vector<Perm> H = std::move(queue.back());
    queue.pop_back();
    for (const Perm& g : universe) {
      if (std::binary_search(H.begin(), H.end(), g)) continue;
      std::vector<Perm> base = H;
      base.push_back(g);
      std::vector<Perm> K = close(std::move(base));
      if (found.insert(K).second) queue.push_back(K);
    }
  }
  std::vector<FinitePermGroup> out;
  out.reserve(found.size());
  for (const auto& elems : found) out.push_back(FinitePermGroup::from_elements(degree, elems));
  return out;
}

json to_json(const FinitePermGroup& g) {
  json elems = json::array();
  for (const auto& p : g.elements()) elems.push_back(p);
  return json{{"degree", g.degree()}, {"order", g.size()}, {"elements", elems}};
}

}  // namespace procount::perm
