#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "procount/fp.hpp"
#include "procount/rng.hpp"

using namespace procount;
using fp::SparseVec;

namespace {

constexpr std::uint32_t P = 3;

SparseVec vec(std::initializer_list<std::pair<std::uint32_t, fp::Exp>> entries) {
  SparseVec v;
  for (auto [i, c] : entries) v.add_at(i, c, P);
  return v;
}

SparseVec random_vec(Rng& rng, std::uint32_t dim, std::uint32_t p) {
  SparseVec v;
  for (std::uint32_t i = 0; i < dim; ++i)
    v.add_at(i, static_cast<fp::Exp>(rng.below(p)), p);
  return v;
}

// Oracle: the span of {u,v} enumerated literally as { a*u + b*v : a,b in F_p }.
std::set<SparseVec> enumerate_span(const SparseVec& u, const SparseVec& v, std::uint32_t p) {
  std::set<SparseVec> span;
  for (fp::Exp a = 0; a < p; ++a)
    for (fp::Exp b = 0; b < p; ++b)
      span.insert(fp::vec_add(fp::vec_scale(u, a, p), fp::vec_scale(v, b, p), p));
  return span;
}

}  // namespace

TEST_CASE("prime predicate") {
  CHECK(fp::is_odd_prime(3));
  CHECK(fp::is_odd_prime(5));
  CHECK(fp::is_odd_prime(7));
  CHECK_FALSE(fp::is_odd_prime(2));
  CHECK_FALSE(fp::is_odd_prime(9));
  CHECK_FALSE(fp::is_odd_prime(1));
}

TEST_CASE("scalar inverse") {
  for (std::uint32_t p : {3u, 5u, 7u, 11u})
    for (fp::Exp a = 1; a < p; ++a) CHECK(fp::mul(a, fp::inv(a, p), p) == 1);
  CHECK_THROWS_AS(fp::inv(0, 3), std::domain_error);
}

TEST_CASE("vec_add examples") {
  CHECK(fp::vec_add(SparseVec{}, SparseVec{}, P) == SparseVec{});
  // inverse cancellation
  CHECK(fp::vec_add(vec({{0, 1}}), vec({{0, P - 1}}), P) == SparseVec{});
  // {i0:1, i1:2} + {i1:2} = {i0:1, i1:1} at p=3
  CHECK(fp::vec_add(vec({{0, 1}, {1, 2}}), vec({{1, 2}}), P) == vec({{0, 1}, {1, 1}}));
}

TEST_CASE("vec_add laws on random samples") {
  Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    SparseVec a = random_vec(rng, 6, P), b = random_vec(rng, 6, P), c = random_vec(rng, 6, P);
    CHECK(fp::vec_add(a, b, P) == fp::vec_add(b, a, P));
    CHECK(fp::vec_add(fp::vec_add(a, b, P), c, P) == fp::vec_add(a, fp::vec_add(b, c, P), P));
    CHECK(fp::vec_add(a, fp::vec_neg(a, P), P) == SparseVec{});
  }
}

TEST_CASE("rank2 examples") {
  CHECK(fp::rank2(SparseVec{}, SparseVec{}, P) == 0);
  CHECK(fp::rank2(vec({{0, 1}}), vec({{0, 2}}), P) == 1);
  CHECK(fp::rank2(SparseVec::unit(0), SparseVec::unit(1), P) == 2);
  CHECK(fp::rank2(SparseVec{}, SparseVec::unit(4), P) == 1);
}

TEST_CASE("rank2 properties") {
  Rng rng(12);
  for (int it = 0; it < 500; ++it) {
    SparseVec u = random_vec(rng, 5, P), v = random_vec(rng, 5, P);
    CHECK(fp::rank2(u, v, P) == fp::rank2(v, u, P));
    for (fp::Exp lambda = 0; lambda < P; ++lambda)
      CHECK(fp::rank2(u, fp::vec_scale(u, lambda, P), P) <= 1);
    // cross-check against the span oracle: rank r <=> |span| = p^r
    std::size_t n = enumerate_span(u, v, P).size();
    int r = fp::rank2(u, v, P);
    std::size_t expect = 1;
    for (int i = 0; i < r; ++i) expect *= P;
    CHECK(n == expect);
  }
}

TEST_CASE("same_span2 examples") {
  SparseVec e0 = SparseVec::unit(0), e1 = SparseVec::unit(1), e2 = SparseVec::unit(2);
  CHECK(fp::same_span2(e0, e1, e1, e0, P));
  CHECK(fp::same_span2(e0, e1, fp::vec_add(e0, e1, P), e1, P));
  CHECK_FALSE(fp::same_span2(e0, e1, e0, e2, P));
}

TEST_CASE("same_span2 agrees with span enumeration and is an equivalence") {
  Rng rng(13);
  std::vector<std::pair<SparseVec, SparseVec>> pairs;
  for (int i = 0; i < 40; ++i)
    pairs.emplace_back(random_vec(rng, 4, P), random_vec(rng, 4, P));
  // agreement with the oracle
  for (const auto& [u, v] : pairs)
    for (const auto& [s, t] : pairs) {
      bool oracle = enumerate_span(u, v, P) == enumerate_span(s, t, P);
      CHECK(fp::same_span2(u, v, s, t, P) == oracle);
    }
  // reflexivity + symmetry + transitivity on the sample
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(fp::same_span2(pairs[i].first, pairs[i].second, pairs[i].first, pairs[i].second, P));
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      bool ij = fp::same_span2(pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second, P);
      bool ji = fp::same_span2(pairs[j].first, pairs[j].second, pairs[i].first, pairs[i].second, P);
      CHECK(ij == ji);
      if (!ij) continue;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        bool jk = fp::same_span2(pairs[j].first, pairs[j].second, pairs[k].first, pairs[k].second, P);
        bool ik = fp::same_span2(pairs[i].first, pairs[i].second, pairs[k].first, pairs[k].second, P);
        if (jk) CHECK(ik);
      }
    }
  }
}
