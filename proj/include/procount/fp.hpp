#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace procount::fp {

// Exponents live in [0, p) for an odd prime p fixed per session.
using Exp = std::uint32_t;

bool is_odd_prime(std::uint32_t p);

inline Exp add(Exp a, Exp b, std::uint32_t p) { return (a + b) % p; }
inline Exp sub(Exp a, Exp b, std::uint32_t p) { return (a + p - b) % p; }
inline Exp neg(Exp a, std::uint32_t p) { return a == 0 ? 0 : p - a; }
inline Exp mul(Exp a, Exp b, std::uint32_t p) {
  return static_cast<Exp>((static_cast<std::uint64_t>(a) * b) % p);
}
Exp inv(Exp a, std::uint32_t p);

// reduce an arbitrary integer into [0, p)
inline Exp reduce(long long v, std::uint32_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<Exp>(r);
}

// Finite-support vector over F_p, indexed by generator indices.
// Invariant: no stored entry is 0; support is kept sorted by std::map.
class SparseVec {
 public:
  SparseVec() = default;

  static SparseVec unit(std::uint32_t i) {
    SparseVec v;
    v.entries_[i] = 1;
    return v;
  }

  Exp at(std::uint32_t i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? 0 : it->second;
  }

  // entries_[i] += delta (mod p); drops the entry when it cancels
  void add_at(std::uint32_t i, Exp delta, std::uint32_t p) {
    if (delta == 0) return;
    auto it = entries_.find(i);
    if (it == entries_.end()) {
      entries_[i] = delta % p;
      if (entries_[i] == 0) entries_.erase(i);
      return;
    }
    it->second = add(it->second, delta, p);
    if (it->second == 0) entries_.erase(it);
  }

  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  const std::map<std::uint32_t, Exp>& entries() const { return entries_; }

  bool operator==(const SparseVec& o) const { return entries_ == o.entries_; }
  bool operator!=(const SparseVec& o) const { return !(*this == o); }
  bool operator<(const SparseVec& o) const { return entries_ < o.entries_; }

 private:
  std::map<std::uint32_t, Exp> entries_;
};

SparseVec vec_add(const SparseVec& u, const SparseVec& v, std::uint32_t p);
SparseVec vec_neg(const SparseVec& u, std::uint32_t p);
SparseVec vec_scale(const SparseVec& u, Exp lambda, std::uint32_t p);

// rank over F_p of the 2-row matrix [u; v]
int rank2(const SparseVec& u, const SparseVec& v, std::uint32_t p);

// span{u,v} == span{s,t} as subspaces of the free F_p module
bool same_span2(const SparseVec& u, const SparseVec& v, const SparseVec& s,
                const SparseVec& t, std::uint32_t p);

std::string to_string(const SparseVec& v);

}  // namespace procount::fp
