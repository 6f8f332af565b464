#include "procount/mekler.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace procount::mekler {

CommGraph CommGraph::with_edges(std::set<std::pair<std::uint32_t, std::uint32_t>> e) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> norm;
  for (auto [r, s] : e) {
    if (r == s) throw std::invalid_argument("CommGraph: self-loop");
    norm.insert(r < s ? std::make_pair(r, s) : std::make_pair(s, r));
  }
  return CommGraph(Kind::edges, std::move(norm));
}

std::shared_ptr<const Universe> Universe::plain(std::uint32_t p, CommGraph graph,
                                                std::uint32_t generator_count) {
  if (!fp::is_odd_prime(p)) throw std::invalid_argument("prime must be an odd prime");
  auto u = std::shared_ptr<Universe>(new Universe());
  u->p_ = p;
  u->size_ = generator_count;
  u->graph_ = graph;
  u->paired_ = false;
  return u;
}

std::shared_ptr<const Universe> Universe::paired(std::uint32_t p, std::vector<Node> labels) {
  if (!fp::is_odd_prime(p)) throw std::invalid_argument("prime must be an odd prime");
  auto u = std::shared_ptr<Universe>(new Universe());
  u->p_ = p;
  u->size_ = static_cast<std::uint32_t>(2 * labels.size());
  u->graph_ = CommGraph::matching();
  u->paired_ = true;
  for (std::size_t i = 0; i < labels.size(); ++i) u->label_pos_[labels[i]] = i;
  if (u->label_pos_.size() != labels.size())
    throw std::invalid_argument("paired universe: duplicate label");
  u->labels_ = std::move(labels);
  return u;
}

std::optional<std::size_t> Universe::label_index(const Node& v) const {
  auto it = label_pos_.find(v);
  if (it == label_pos_.end()) return std::nullopt;
  return it->second;
}

std::string Universe::generator_name(std::uint32_t idx) const {
  if (!paired_) return "x" + std::to_string(idx);
  const char* letter = (idx % 2 == 0) ? "a" : "b";
  return std::string(letter) + "(" + node_to_string(labels_[idx / 2]) + ")";
}

namespace {

void ensure_same(const GroupElement& u, const GroupElement& w, const char* op) {
  if (!same_universe(u.uni, w.uni))
    throw std::invalid_argument(std::string(op) + ": universe mismatch");
}

void central_add(GroupElement& g, std::uint32_t r, std::uint32_t s, fp::Exp delta) {
  const std::uint32_t p = g.uni->prime();
  if (delta == 0) return;
  if (r == s) return;
  if (r > s) {
    // x_{s,r} = [x_s, x_r] = [x_r, x_s]^{-1} = x_{r,s}^{-1}
    std::swap(r, s);
    delta = fp::neg(delta, p);
  }
  if (g.uni->adjacent(r, s)) return;  // x_{r,s} = e when rAs
  auto key = std::make_pair(r, s);
  auto it = g.central.find(key);
  fp::Exp cur = (it == g.central.end()) ? 0 : it->second;
  fp::Exp next = fp::add(cur, delta, p);
  if (next == 0) {
    if (it != g.central.end()) g.central.erase(it);
  } else {
    g.central[key] = next;
  }
}

}  // namespace

GroupElement identity_element(UniversePtr uni) {
  GroupElement g;
  g.uni = std::move(uni);
  return g;
}

GroupElement generator(UniversePtr uni, std::uint32_t idx) {
  if (idx >= uni->size()) throw std::out_of_range("generator index out of range");
  GroupElement g = identity_element(std::move(uni));
  g.base = fp::SparseVec::unit(idx);
  return g;
}

GroupElement central_generator(UniversePtr uni, std::uint32_t r, std::uint32_t s) {
  if (r >= uni->size() || s >= uni->size())
    throw std::out_of_range("central generator index out of range");
  GroupElement g = identity_element(std::move(uni));
  central_add(g, r, s, 1);
  return g;
}

GroupElement multiply(const GroupElement& u, const GroupElement& w) {
  ensure_same(u, w, "multiply");
  const std::uint32_t p = u.uni->prime();
  GroupElement out = identity_element(u.uni);
  out.base = fp::vec_add(u.base, w.base, p);
  out.central = u.central;
  for (const auto& [key, e] : w.central) central_add(out, key.first, key.second, e);
  // collection correction: moving each right-factor generator x_r left
  // past the left-factor generators x_s with s > r contributes
  // [x_s, x_r]^{alpha_s beta_r} = x_{r,s}^{-alpha_s beta_r}
  for (const auto& [s, alpha_s] : u.base.entries())
    for (const auto& [r, beta_r] : w.base.entries())
      if (r < s) central_add(out, r, s, fp::neg(fp::mul(alpha_s, beta_r, p), p));
  return out;
}

GroupElement inverse(const GroupElement& u) {
  const std::uint32_t p = u.uni->prime();
  GroupElement out = identity_element(u.uni);
  out.base = fp::vec_neg(u.base, p);
  for (const auto& [key, e] : u.central) central_add(out, key.first, key.second, fp::neg(e, p));
  // (prod x_i^{a_i})^{-1} = prod x_i^{-a_i} * prod_{r<s} x_{r,s}^{-a_r a_s}
  for (const auto& [r, ar] : u.base.entries())
    for (const auto& [s, as] : u.base.entries())
      if (r < s) central_add(out, r, s, fp::neg(fp::mul(ar, as, p), p));
  return out;
}

GroupElement commutator(const GroupElement& u, const GroupElement& w) {
  ensure_same(u, w, "commutator");
  const std::uint32_t p = u.uni->prime();
  GroupElement out = identity_element(u.uni);
  // [prod x_r^{a_r}, prod x_s^{b_s}] = prod_{r<s,!rAs} x_{r,s}^{a_r b_s - a_s b_r}
  for (const auto& [r, ar] : u.base.entries())
    for (const auto& [s, bs] : w.base.entries()) {
      if (r < s) central_add(out, r, s, fp::mul(ar, bs, p));
      else if (s < r) central_add(out, s, r, fp::neg(fp::mul(ar, bs, p), p));
    }
  return out;
}

GroupElement power(const GroupElement& u, long long n) {
  GroupElement base = u;
  if (n < 0) {
    base = inverse(u);
    n = -n;
  }
  GroupElement acc = identity_element(u.uni);
  while (n > 0) {
    if (n & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    n >>= 1;
  }
  return acc;
}

bool is_identity(const GroupElement& u) { return u.base.empty() && u.central.empty(); }

bool is_central(const GroupElement& u) { return u.base.empty(); }

fp::SparseVec central_image(const GroupElement& u) { return u.base; }

GroupElement collection_oracle(const UniversePtr& uni, const Word& word) {
  const std::uint32_t p = uni->prime();
  std::vector<std::uint32_t> letters;
  for (const auto& [g, e] : word) {
    if (g >= uni->size()) throw std::out_of_range("collection_oracle: generator out of range");
    fp::Exp k = fp::reduce(e, p);
    for (fp::Exp i = 0; i < k; ++i) letters.push_back(g);
  }
  GroupElement out = identity_element(uni);
  // bubble passes: each adjacent swap x_s x_r -> x_r x_s x_{r,s}^{-1} (r<s)
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
      if (letters[i] > letters[i + 1]) {
        std::uint32_t s = letters[i], r = letters[i + 1];
        if (!uni->adjacent(r, s)) central_add(out, r, s, p - 1);
        std::swap(letters[i], letters[i + 1]);
        changed = true;
      }
    }
  }
  for (std::uint32_t g : letters) out.base.add_at(g, 1, p);
  return out;
}

GroupElement fold_word(const UniversePtr& uni, const Word& word) {
  GroupElement acc = identity_element(uni);
  for (const auto& [g, e] : word) acc = multiply(acc, power(generator(uni, g), e));
  return acc;
}

std::string to_string(const GroupElement& u) {
  if (is_identity(u)) return "e";
  std::string out;
  auto sep = [&out]() {
    if (!out.empty()) out += "*";
  };
  for (const auto& [i, e] : u.base.entries()) {
    sep();
    out += u.uni->generator_name(i);
    if (e >= 2) out += "^" + std::to_string(e);
  }
  for (const auto& [key, e] : u.central) {
    sep();
    if (u.uni->is_paired())
      out += "[" + u.uni->generator_name(key.first) + "," + u.uni->generator_name(key.second) + "]";
    else
      out += "x" + std::to_string(key.first) + "," + std::to_string(key.second);
    if (e >= 2) out += "^" + std::to_string(e);
  }
  return out;
}

namespace {

// recursive-descent parser over the canonical expression grammar
class ElementParser {
 public:
  ElementParser(UniversePtr uni, std::string_view text) : uni_(std::move(uni)), text_(text) {}

  GroupElement parse() {
    GroupElement g = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return g;
  }

 private:
  GroupElement expr() {
    GroupElement acc = factor();
    while (true) {
      skip_ws();
      if (!eat('*')) break;
      acc = multiply(acc, factor());
    }
    return acc;
  }

  GroupElement factor() {
    GroupElement g = primary();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      long long e = integer();
      g = power(g, e);
    }
    return g;
  }

  GroupElement primary() {
    skip_ws();
    if (eat('(')) {
      GroupElement g = expr();
      skip_ws();
      if (!eat(')')) fail("expected ')'");
      return g;
    }
    if (eat('[')) {
      GroupElement a = expr();
      skip_ws();
      if (!eat(',')) fail("expected ',' in commutator");
      GroupElement b = expr();
      skip_ws();
      if (!eat(']')) fail("expected ']'");
      return commutator(a, b);
    }
    if (peek() == 'e' && !uni_->is_paired()) {
      ++pos_;
      return identity_element(uni_);
    }
    if (peek() == 'e' && uni_->is_paired()) {
      ++pos_;
      return identity_element(uni_);
    }
    if (peek() == 'x') {
      if (uni_->is_paired()) fail("plain generator in labeled universe");
      ++pos_;
      std::uint32_t r = natural();
      // "x0,2" is the central generator; a ',' not followed by a digit
      // belongs to an enclosing commutator bracket
      if (pos_ < text_.size() && text_[pos_] == ',' && pos_ + 1 < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        std::uint32_t s = natural();
        if (r >= s) fail("central generator needs r < s");
        if (uni_->adjacent(r, s)) fail("x_{r,s} is trivial for adjacent r,s");
        return central_generator(uni_, r, s);
      }
      return generator(uni_, r);
    }
    if (peek() == 'a' || peek() == 'b') {
      if (!uni_->is_paired()) fail("labeled generator in plain universe");
      bool is_b = peek() == 'b';
      ++pos_;
      skip_ws();
      if (!eat('(')) fail("expected '(' after generator letter");
      std::size_t close = text_.find(')', pos_);
      if (close == std::string_view::npos) fail("expected ')' after label");
      Node label = node_from_string(text_.substr(pos_, close - pos_));
      pos_ = close + 1;
      auto li = uni_->label_index(label);
      if (!li) fail("unknown label '" + node_to_string(label) + "'");
      return generator(uni_, static_cast<std::uint32_t>(2 * *li + (is_b ? 1 : 0)));
    }
    fail("unexpected input");
    return identity_element(uni_);  // unreachable
  }

  std::uint32_t natural() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected number");
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > 0xffffffffULL) fail("number out of range");
      ++pos_;
    }
    return static_cast<std::uint32_t>(v);
  }

  long long integer() {
    bool negate = eat('-');
    return negate ? -static_cast<long long>(natural()) : static_cast<long long>(natural());
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + ": " + why);
  }

  UniversePtr uni_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupElement parse_element(const UniversePtr& uni, std::string_view text) {
  return ElementParser(uni, text).parse();
}

Morphism::Morphism(UniversePtr src, UniversePtr dst, std::vector<GroupElement> images)
    : src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images)) {
  if (images_.size() != src_->size())
    throw std::invalid_argument("Morphism: one image per source generator required");
  for (const auto& g : images_)
    if (!same_universe(g.uni, dst_)) throw std::invalid_argument("Morphism: image in wrong universe");
}

Morphism Morphism::identity_map(const UniversePtr& uni) {
  std::vector<GroupElement> imgs;
  imgs.reserve(uni->size());
  for (std::uint32_t i = 0; i < uni->size(); ++i) imgs.push_back(generator(uni, i));
  return Morphism(uni, uni, std::move(imgs));
}

Morphism Morphism::induced(const UniversePtr& src, const UniversePtr& dst,
                           const std::vector<std::uint32_t>& label_map) {
  if (!src->is_paired() || !dst->is_paired())
    throw std::invalid_argument("induced: paired universes required");
  if (label_map.size() != src->label_count())
    throw std::invalid_argument("induced: label map not total on the source");
  std::vector<GroupElement> imgs;
  imgs.reserve(src->size());
  for (std::size_t i = 0; i < src->label_count(); ++i) {
    std::uint32_t y = label_map[i];
    if (y >= dst->label_count()) throw std::invalid_argument("induced: label image out of range");
    imgs.push_back(generator(dst, 2 * y));
    imgs.push_back(generator(dst, 2 * y + 1));
  }
  return Morphism(src, dst, std::move(imgs));
}

GroupElement Morphism::apply(const GroupElement& u) const {
  if (!same_universe(u.uni, src_)) throw std::invalid_argument("Morphism::apply: universe mismatch");
  GroupElement out = identity_element(dst_);
  // image of the ascending base word, collected in the target
  for (const auto& [i, e] : u.base.entries()) out = multiply(out, power(images_[i], e));
  // the central part maps through commutators of images (all central)
  for (const auto& [key, e] : u.central)
    out = multiply(out, power(commutator(images_[key.first], images_[key.second]), e));
  return out;
}

Morphism Morphism::after(const Morphism& inner) const {
  if (!same_universe(inner.dst_, src_))
    throw std::invalid_argument("Morphism::after: endpoint mismatch");
  std::vector<GroupElement> imgs;
  imgs.reserve(inner.images_.size());
  for (const auto& g : inner.images_) imgs.push_back(apply(g));
  return Morphism(inner.src_, dst_, std::move(imgs));
}

bool Morphism::equal_on_generators(const Morphism& o) const {
  if (!same_universe(src_, o.src_) || !same_universe(dst_, o.dst_)) return false;
  return images_ == o.images_;
}

bool Morphism::respects_relations() const {
  const std::uint32_t n = src_->size();
  if (src_->uses_matching_graph()) {
    for (std::uint32_t i = 0; i + 1 < n; i += 2)
      if (!is_identity(commutator(images_[i], images_[i + 1]))) return false;
    return true;
  }
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t s = r + 1; s < n; ++s)
      if (src_->adjacent(r, s) && !is_identity(commutator(images_[r], images_[s]))) return false;
  return true;
}

bool Morphism::covers_target_generators() const {
  std::vector<bool> hit(dst_->size(), false);
  for (const auto& g : images_) {
    if (!g.central.empty() || g.base.support_size() != 1) continue;
    const auto& [i, e] = *g.base.entries().begin();
    if (e == 1) hit[i] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

GroupElement induced_epi(const UniversePtr& src, const UniversePtr& dst,
                         const std::vector<std::uint32_t>& label_map, const GroupElement& u) {
  return Morphism::induced(src, dst, label_map).apply(u);
}

std::vector<std::uint32_t> functor_labels(const Morphism& g) {
  if (!g.src()->is_paired() || !g.dst()->is_paired())
    throw std::invalid_argument("functor_labels: paired universes required");
  const std::uint32_t p = g.src()->prime();
  std::vector<std::uint32_t> out;
  out.reserve(g.src()->label_count());
  for (std::size_t v = 0; v < g.src()->label_count(); ++v) {
    fp::SparseVec c = central_image(g.images()[2 * v]);
    fp::SparseVec d = central_image(g.images()[2 * v + 1]);
    if (fp::rank2(c, d, p) != 2)
      throw FunctorError(FunctorError::Kind::rank_deficient, v,
                         "functor F: image pair of label " + std::to_string(v) +
                             " has central-quotient rank " + std::to_string(fp::rank2(c, d, p)));
    std::uint32_t pair_idx = c.entries().begin()->first / 2;
    for (const auto& [i, e] : c.entries())
      if (i / 2 != pair_idx)
        throw FunctorError(FunctorError::Kind::inconsistent_support, v,
                           "functor F: image support spans several label pairs");
    for (const auto& [i, e] : d.entries())
      if (i / 2 != pair_idx)
        throw FunctorError(FunctorError::Kind::inconsistent_support, v,
                           "functor F: image support spans several label pairs");
    out.push_back(pair_idx);
  }
  return out;
}

Dichotomy commuting_dichotomy_check(const GroupElement& c, const GroupElement& d) {
  ensure_same(c, d, "commuting_dichotomy_check");
  if (!c.uni->uses_matching_graph())
    throw std::invalid_argument("commuting_dichotomy_check: matching graph required");
  if (!is_identity(commutator(c, d)))
    throw std::invalid_argument("commuting_dichotomy_check: inputs do not commute");
  const std::uint32_t p = c.uni->prime();
  if (fp::rank2(c.base, d.base, p) <= 1) return {Dichotomy::Kind::low_rank, 0};
  std::uint32_t pair_idx = c.base.entries().begin()->first / 2;
  for (const auto& [i, e] : c.base.entries())
    if (i / 2 != pair_idx) return {Dichotomy::Kind::violation, 0};
  for (const auto& [i, e] : d.base.entries())
    if (i / 2 != pair_idx) return {Dichotomy::Kind::violation, 0};
  return {Dichotomy::Kind::pair, 2 * pair_idx};
}

std::uint64_t universe_order(const UniversePtr& uni) {
  const std::uint32_t n = uni->size();
  std::uint64_t dims = n;
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t s = r + 1; s < n; ++s)
      if (!uni->adjacent(r, s)) ++dims;
  std::uint64_t order = 1;
  for (std::uint64_t i = 0; i < dims; ++i) {
    if (order > (std::uint64_t(1) << 62) / uni->prime())
      throw std::overflow_error("universe_order: overflow");
    order *= uni->prime();
  }
  return order;
}

std::vector<GroupElement> enumerate_all(const UniversePtr& uni, std::uint64_t cap) {
  std::uint64_t order = universe_order(uni);
  if (order > cap) throw std::length_error("enumerate_all: universe too large");
  const std::uint32_t p = uni->prime();
  const std::uint32_t n = uni->size();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t s = r + 1; s < n; ++s)
      if (!uni->adjacent(r, s)) pairs.emplace_back(r, s);

  std::vector<GroupElement> out;
  out.reserve(order);
  std::vector<fp::Exp> digits(n + pairs.size(), 0);
  while (true) {
    GroupElement g = identity_element(uni);
    for (std::uint32_t i = 0; i < n; ++i) g.base.add_at(i, digits[i], p);
    for (std::size_t j = 0; j < pairs.size(); ++j)
      if (digits[n + j] != 0) g.central[pairs[j]] = digits[n + j];
    out.push_back(std::move(g));
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return out;
}

}  // namespace procount::mekler
