#include "procount/fp.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace procount::fp {

bool is_odd_prime(std::uint32_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::uint32_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

Exp inv(Exp a, std::uint32_t p) {
  if (a == 0) throw std::domain_error("fp::inv of 0");
  // Fermat: a^(p-2) mod p
  std::uint64_t base = a % p, acc = 1;
  std::uint32_t e = p - 2;
  while (e) {
    if (e & 1u) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<Exp>(acc);
}

SparseVec vec_add(const SparseVec& u, const SparseVec& v, std::uint32_t p) {
  SparseVec out = u;
  for (const auto& [i, c] : v.entries()) out.add_at(i, c, p);
  return out;
}

SparseVec vec_neg(const SparseVec& u, std::uint32_t p) {
  SparseVec out;
  for (const auto& [i, c] : u.entries()) out.add_at(i, neg(c, p), p);
  return out;
}

SparseVec vec_scale(const SparseVec& u, Exp lambda, std::uint32_t p) {
  SparseVec out;
  for (const auto& [i, c] : u.entries()) out.add_at(i, mul(c, lambda, p), p);
  return out;
}

int rank2(const SparseVec& u, const SparseVec& v, std::uint32_t p) {
  if (u.empty() && v.empty()) return 0;
  if (u.empty() || v.empty()) return 1;
  // v proportional to u? the ratio is fixed by any common coordinate,
  // and proportional vectors have equal supports
  if (u.entries().size() != v.entries().size()) return 2;
  auto iu = u.entries().begin();
  auto iv = v.entries().begin();
  Exp lambda = mul(iv->second, inv(iu->second, p), p);
  for (; iu != u.entries().end(); ++iu, ++iv) {
    if (iu->first != iv->first) return 2;
    if (mul(iu->second, lambda, p) != iv->second) return 2;
  }
  return 1;
}

namespace {

// Gaussian elimination on a handful of sparse rows; returns the rank.
int rank_of(std::vector<SparseVec> rows, std::uint32_t p) {
  int rank = 0;
  std::set<std::uint32_t> used_pivots;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) continue;
    std::uint32_t pivot = rows[r].entries().begin()->first;
    Exp lead = rows[r].entries().begin()->second;
    SparseVec normalized = vec_scale(rows[r], inv(lead, p), p);
    ++rank;
    for (std::size_t r2 = r + 1; r2 < rows.size(); ++r2) {
      Exp c = rows[r2].at(pivot);
      if (c != 0) rows[r2] = vec_add(rows[r2], vec_scale(normalized, neg(c, p), p), p);
    }
  }
  return rank;
}

}  // namespace

bool same_span2(const SparseVec& u, const SparseVec& v, const SparseVec& s,
                const SparseVec& t, std::uint32_t p) {
  int r1 = rank2(u, v, p);
  int r2 = rank2(s, t, p);
  if (r1 != r2) return false;
  return rank_of({u, v, s, t}, p) == r1;
}

std::string to_string(const SparseVec& v) {
  if (v.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : v.entries()) {
    if (!out.empty()) out += "+";
    if (c != 1) out += std::to_string(c) + "*";
    out += "e" + std::to_string(i);
  }
  return out;
}

}  // namespace procount::fp
