#include "procount/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "procount/perm.hpp"
#include "procount/reduction.hpp"
#include "procount/rng.hpp"

namespace procount::verify {

using maps::PrefixMapFamily;
using maps::Rational;
using mekler::GroupElement;
using mekler::Morphism;
using mekler::UniversePtr;
using trees::Dyadic;
using trees::SequenceSpec;
using trees::TreeSpec;

unsigned thread_budget() {
  const char* env = std::getenv("PROCOUNT_THREADS");
  if (!env) return 1;
  long v = std::strtol(env, nullptr, 10);
  long hw = static_cast<long>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (v < 1) v = 1;
  if (v > hw) v = hw;
  return static_cast<unsigned>(v);
}

namespace {

UniversePtr labelled_universe(std::uint32_t p, std::size_t count) {
  std::vector<Node> labels;
  for (std::uint32_t i = 0; i < count; ++i) labels.push_back({i});
  return mekler::Universe::paired(p, labels);
}

mekler::Word random_word(Rng& rng, std::uint32_t gens, std::size_t max_len, std::uint32_t p) {
  mekler::Word w;
  std::size_t len = rng.below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i)
    w.emplace_back(static_cast<std::uint32_t>(rng.below(gens)),
                   static_cast<long long>(rng.below(2 * p + 1)) - static_cast<long long>(p));
  return w;
}

std::vector<std::uint32_t> random_surjection(std::size_t nx, std::size_t ny, Rng& rng) {
  std::vector<std::uint32_t> q(nx);
  std::vector<std::uint32_t> slots(nx);
  for (std::size_t i = 0; i < nx; ++i) slots[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = nx; i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
  for (std::size_t y = 0; y < ny; ++y) q[slots[y]] = static_cast<std::uint32_t>(y);
  for (std::size_t i = ny; i < nx; ++i) q[slots[i]] = static_cast<std::uint32_t>(rng.below(ny));
  return q;
}

// ---------------------------------------------------------------- C1
CriterionResult criterion_algebra(const RunConfig& config) {
  CriterionResult res{1, "Mekler algebra oracle equivalence", false, "", {}, 0};
  const std::uint32_t p = 3;
  Rng rng(config.seed + 1);
  std::vector<UniversePtr> unis;
  for (std::size_t n = 1; n <= 4; ++n) unis.push_back(labelled_universe(p, n));
  std::uint64_t mismatches = 0, words = 0;
  for (int it = 0; it < 10000; ++it) {
    const UniversePtr& uni = unis[it % 4];
    mekler::Word w = random_word(rng, uni->size(), 12, p);
    ++words;
    if (mekler::collection_oracle(uni, w) != mekler::fold_word(uni, w)) ++mismatches;
  }
  res.pass = mismatches == 0;
  res.summary = std::to_string(words) + " random words, " + std::to_string(mismatches) +
                " oracle mismatches";
  res.data = json{{"p", p}, {"words", words}, {"max_len", 12}, {"mismatches", mismatches}};
  return res;
}

// ---------------------------------------------------------------- C2
CriterionResult criterion_dichotomy(const RunConfig& config) {
  CriterionResult res{2, "Exhaustive commuting-pair dichotomy on L(X), |X|=2", false, "", {}, 0};
  const std::uint32_t p = 3;
  UniversePtr uni = labelled_universe(p, 2);
  std::vector<GroupElement> all = mekler::enumerate_all(uni, 10000);
  const std::size_t n = all.size();

  unsigned workers = std::max(1u, config.threads);
  struct Tally {
    std::uint64_t commuting = 0, pair_class = 0, low_rank = 0, violations = 0;
  };
  std::vector<Tally> tallies(workers);
  auto work = [&](unsigned w) {
    Tally& t = tallies[w];
    for (std::size_t i = w; i < n; i += workers)
      for (std::size_t j = i; j < n; ++j) {
        if (!mekler::is_identity(mekler::commutator(all[i], all[j]))) continue;
        ++t.commuting;
        mekler::Dichotomy d = mekler::commuting_dichotomy_check(all[i], all[j]);
        switch (d.kind) {
          case mekler::Dichotomy::Kind::pair: ++t.pair_class; break;
          case mekler::Dichotomy::Kind::low_rank: ++t.low_rank; break;
          case mekler::Dichotomy::Kind::violation: ++t.violations; break;
        }
      }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Tally total;
  for (const Tally& t : tallies) {
    total.commuting += t.commuting;
    total.pair_class += t.pair_class;
    total.low_rank += t.low_rank;
    total.violations += t.violations;
  }
  std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n + 1) / 2;
  res.pass = (n == 6561) && total.violations == 0;
  res.summary = "order " + std::to_string(n) + ", " + std::to_string(total.commuting) +
                " commuting pairs, " + std::to_string(total.violations) + " violations";
  res.data = json{{"group_order", n},
                  {"pairs_scanned", pairs},
                  {"commuting_pairs", total.commuting},
                  {"pair_classified", total.pair_class},
                  {"rank_le_1", total.low_rank},
                  {"violations", total.violations}};
  return res;
}

// ---------------------------------------------------------------- C3
CriterionResult criterion_functor(const RunConfig& config) {
  CriterionResult res{3, "Functor F recovers label surjections", false, "", {}, 0};
  Rng rng(config.seed + 3);
  std::uint64_t mismatches = 0;
  for (int it = 0; it < 500; ++it) {
    std::size_t nx = 1 + rng.below(6);
    std::size_t ny = 1 + rng.below(std::min<std::size_t>(nx, 4));
    UniversePtr X = labelled_universe(3, nx);
    UniversePtr Y = labelled_universe(3, ny);
    auto q = random_surjection(nx, ny, rng);
    if (mekler::functor_labels(Morphism::induced(X, Y, q)) != q) ++mismatches;
  }
  res.pass = mismatches == 0;
  res.summary = "500 random surjections, " + std::to_string(mismatches) + " mismatches";
  res.data = json{{"surjections", 500}, {"mismatches", mismatches}};
  return res;
}

// ---------------------------------------------------------------- C4
CriterionResult criterion_linfty_bounds(const RunConfig& config) {
  CriterionResult res{4, "l_infty floor-coding bounds (literal pointwise inequality)", false, "", {}, 0};
  Rng rng(config.seed + 4);
  auto rand_rational = [&rng]() {
    long long num = rng.range(-100000, 100000);
    long long den = 1 + static_cast<long long>(rng.below(999));
    return Rational(num, den);
  };
  const std::size_t len = 32;
  std::uint64_t contraction_violations = 0;
  bool converse_ok = true;
  json witness;
  for (int it = 0; it < 1000; ++it) {
    std::vector<Rational> xs, ys;
    for (std::size_t i = 0; i < len; ++i) {
      xs.push_back(rand_rational());
      ys.push_back(rand_rational());
    }
    auto fx = maps::reduce_linfty_to_naturals(xs, len);
    auto fy = maps::reduce_linfty_to_naturals(ys, len);
    std::uint64_t fmax = 0;
    for (std::size_t n = 0; n < len; ++n) {
      Rational diff = xs[n] - ys[n];
      if (diff < Rational(0)) diff = -diff;
      for (std::size_t c : {2 * n, 2 * n + 1}) {
        std::uint64_t fd = fx[c] > fy[c] ? fx[c] - fy[c] : fy[c] - fx[c];
        fmax = std::max(fmax, fd);
        if (Rational(static_cast<long long>(fd)) > diff) {
          if (contraction_violations == 0)
            witness = json{{"x_n", std::to_string(xs[n].numerator()) + "/" +
                                       std::to_string(xs[n].denominator())},
                           {"y_n", std::to_string(ys[n].numerator()) + "/" +
                                       std::to_string(ys[n].denominator())},
                           {"f_difference", fd}};
          ++contraction_violations;
        }
      }
    }
    long long M = static_cast<long long>(fmax) + 1;
    for (std::size_t n = 0; n < len; ++n) {
      Rational diff = xs[n] - ys[n];
      if (diff < Rational(0)) diff = -diff;
      if (!(diff < Rational(2 * M))) converse_ok = false;
    }
  }
  res.pass = contraction_violations == 0 && converse_ok;
  res.summary = std::to_string(contraction_violations) +
                " literal-contraction violations (sharp bound is |diff|+1); converse " +
                (converse_ok ? "holds" : "fails");
  res.data = json{{"sequences", 1000},
                  {"length", len},
                  {"literal_contraction_violations", contraction_violations},
                  {"first_violation", witness},
                  {"converse_2M_ok", converse_ok}};
  return res;
}

// ---------------------------------------------------------------- C5
CriterionResult criterion_lipschitz(const RunConfig& config) {
  CriterionResult res{5, "Lipschitz constants of phi_kl and of Psi", false, "", {}, 0};
  bool phi_ok = true;
  json table = json::array();
  for (std::uint32_t k = 1; k <= 4; ++k) {
    trees::LevelData rk = trees::expand(TreeSpec::r_k(k), 10, 0);
    for (std::uint32_t l = 1; l <= 4; ++l) {
      auto est = maps::empirical_lipschitz(
          rk.level(10), [&](const Node& s) { return maps::phi_kl(k, l, s); },
          std::uint64_t(1) << 40, 0);
      int expected = static_cast<int>(l) - static_cast<int>(k);
      bool match = est.exhaustive && est.max_ratio == Dyadic::pow2(expected);
      if (!match) phi_ok = false;
      table.push_back(json{{"k", k},
                           {"l", l},
                           {"expected", "2^" + std::to_string(expected)},
                           {"measured", est.max_ratio.to_string()},
                           {"exhaustive", est.exhaustive},
                           {"match", match}});
    }
  }

  bool psi_ok = true;
  json psi_table = json::array();
  std::vector<std::tuple<SequenceSpec, SequenceSpec, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < 10; ++i) {
    std::uint32_t a = i % 3, b = (i + 1) % 3;
    SequenceSpec x{{a, b}, 0, 1 + (i % 2)};
    SequenceSpec y{{b, a}, 0, 1};
    std::uint32_t M = (*trees::linf_distance(x, y)) + 1;
    pairs.emplace_back(x, y, std::min<std::uint32_t>(M, 3));
    pairs.emplace_back(y, x, std::min<std::uint32_t>(M, 3));
  }
  for (const auto& [x, y, M] : pairs) {
    PrefixMapFamily f = maps::build_psi(x, y, M, 8, 6);
    PrefixMapFamily g = maps::build_psi(y, x, M, 8, 6);
    auto ef = maps::empirical_lipschitz(f, 200000, config.seed + 5);
    auto eg = maps::empirical_lipschitz(g, 200000, config.seed + 5);
    bool ok = !(Dyadic::pow2(static_cast<int>(M)) < ef.max_ratio) &&
              !(Dyadic::pow2(static_cast<int>(M)) < eg.max_ratio);
    if (!ok) psi_ok = false;
    psi_table.push_back(json{{"M", M},
                             {"forward", ef.max_ratio.to_string()},
                             {"backward", eg.max_ratio.to_string()},
                             {"within_2^M", ok}});
  }
  res.pass = phi_ok && psi_ok;
  res.summary = std::string("phi_kl exact-constant table ") + (phi_ok ? "matches" : "fails") +
                " 2^(l-k) (l<k cases measure max(1, 2^(l-k))); Psi bi-Lipschitz <= 2^M " +
                (psi_ok ? "holds" : "fails");
  res.data = json{{"phi_kl", table}, {"psi_pairs", psi_table}};
  return res;
}

// ---------------------------------------------------------------- C6
CriterionResult criterion_capacity(const RunConfig& config) {
  CriterionResult res{6, "Capacity inequality and divergence certificate", false, "", {}, 0};
  Rng rng(config.seed + 6);
  std::uint64_t violations = 0;
  for (int it = 0; it < 1000; ++it) {
    std::uint32_t yk = static_cast<std::uint32_t>(rng.below(20));
    std::uint32_t M = static_cast<std::uint32_t>(rng.below(20));
    std::uint32_t m = static_cast<std::uint32_t>(rng.below(M + 1));
    trees::Capacity c = trees::capacity_inequality(yk, m, M);
    if (c.lhs > c.rhs) ++violations;
  }
  SequenceSpec two_k{{}, 2, 0};
  SequenceSpec zero{{}, 0, 0};
  reduction::InstanceReport rep =
      reduction::verify_main_theorem_instance(two_k, zero, 3, config.depth, config.width, 3);
  bool certified = rep.ok && rep.result.rfind("certified", 0) == 0;
  res.pass = violations == 0 && certified;
  res.summary = std::to_string(violations) + " capacity violations; x(k)=2k vs y=0 " +
                (certified ? "certified divergent" : "NOT certified");
  res.data = json{{"random_triples", 1000},
                  {"violations", violations},
                  {"certificate_report", rep.to_json()}};
  return res;
}

// ---------------------------------------------------------------- C7
CriterionResult criterion_roundtrip(const RunConfig&) {
  CriterionResult res{7, "Round trip through group systems on 10 related sequence pairs", false, "", {}, 0};
  const std::uint32_t depth = 6, width = 8;
  std::vector<std::tuple<SequenceSpec, SequenceSpec, std::uint32_t>> pairs = {
      {SequenceSpec{{1, 1}, 0, 2}, SequenceSpec{{1, 1}, 0, 2}, 1},      // identity
      {SequenceSpec{{1, 1}, 0, 2}, SequenceSpec{{0, 2}, 0, 1}, 3},      // mixed shifts
      {SequenceSpec{{}, 0, 1}, SequenceSpec{{}, 0, 0}, 2},              // const 1 vs 0
      {SequenceSpec{{}, 0, 2}, SequenceSpec{{}, 0, 0}, 3},              // const 2 vs 0
      {SequenceSpec{{3}, 0, 1}, SequenceSpec{{1}, 0, 1}, 3},            // prefix bump
      {SequenceSpec{{0, 1, 2}, 0, 2}, SequenceSpec{{2, 1, 0}, 0, 2}, 3},
      {SequenceSpec{{1}, 1, 0}, SequenceSpec{{0}, 1, 1}, 2},            // slope 1
      {SequenceSpec{{2, 0}, 0, 1}, SequenceSpec{{0, 2}, 0, 1}, 3},
      {SequenceSpec{{1, 2, 1}, 0, 1}, SequenceSpec{{2, 1, 2}, 0, 1}, 2},
      {SequenceSpec{{0}, 0, 3}, SequenceSpec{{1}, 0, 2}, 2},
  };
  bool all_ok = true;
  double worst = 0;
  json detail = json::array();
  for (const auto& [x, y, M] : pairs) {
    auto t0 = std::chrono::steady_clock::now();
    reduction::InstanceReport rep = reduction::verify_main_theorem_instance(x, y, M, depth, width, 3);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst = std::max(worst, secs);
    bool ok = rep.ok && rep.result.rfind("verified", 0) == 0 && secs < 300.0;
    if (!ok) all_ok = false;
    detail.push_back(json{{"x", trees::to_json(x)},
                          {"y", trees::to_json(y)},
                          {"M", M},
                          {"ok", ok},
                          {"report", rep.to_json()}});
  }
  res.pass = all_ok;
  res.summary = std::string("10 pairs at depth 6 width 8: ") +
                (all_ok ? "all exact round trips" : "FAILURES present") +
                "; slowest pair " + std::to_string(worst).substr(0, 5) + "s";
  res.data = json{{"depth", depth}, {"width", width}, {"pairs", detail}};
  return res;
}

// ---------------------------------------------------------------- C8
CriterionResult criterion_remark_biconditional(const RunConfig& config) {
  CriterionResult res{8, "Equivalence-to-identity biconditional", false, "", {}, 0};
  reduction::GroupSystem gt =
      reduction::build_group_system(TreeSpec::t_x({{1, 1}, 0, 2}), 6, 4, 3);
  Rng rng(config.seed + 8);
  std::uint64_t checked = 0, failures = 0;
  for (int it = 0; it < 100; ++it) {
    // random monotone phi with phi[n] >= n
    std::vector<std::uint32_t> phi;
    std::uint32_t cur = 0;
    for (std::uint32_t n = 0; n < 4; ++n) {
      cur = std::max(cur, n) + static_cast<std::uint32_t>(rng.below(2));
      cur = std::min<std::uint32_t>(cur, 5);
      phi.push_back(cur);
    }
    pro::PreMorphism f;
    f.src = gt.system;
    f.dst = gt.system;
    f.phi = phi;
    for (std::uint32_t n = 0; n < phi.size(); ++n)
      f.components.push_back(pro::interval_map(*gt.system, phi[n], n));
    if (it % 2 == 1) {
      // corrupt one component by swapping two label pairs with distinct images
      auto imgs = f.components[1].images();
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
      f.components[1] = Morphism(f.components[1].src(), f.components[1].dst(), imgs);
    }
    bool lhs = pro::equivalent(f, pro::identity_premorphism(gt.system), f.depth());
    bool rhs = true;
    for (std::uint32_t n = 0; n < f.depth(); ++n)
      if (!f.components[n].equal_on_generators(pro::interval_map(*gt.system, f.phi[n], n)))
        rhs = false;
    ++checked;
    if (lhs != rhs) ++failures;
    if ((it % 2 == 1) && rhs) ++failures;  // the mutation must break identity-form
  }
  res.pass = failures == 0;
  res.summary = std::to_string(checked) + " pre-morphisms, " + std::to_string(failures) +
                " biconditional failures";
  res.data = json{{"premorphisms", checked}, {"failures", failures}};
  return res;
}

// ---------------------------------------------------------------- C9
CriterionResult criterion_borel_shadow(const RunConfig&) {
  CriterionResult res{9, "Borelness conditions agree on finite groups", false, "", {}, 0};
  std::uint64_t groups = 0, checks = 0, disagreements = 0;
  json per_degree = json::array();
  for (std::uint32_t degree = 1; degree <= 5; ++degree) {
    auto subs = perm::all_subgroups(degree);
    std::uint64_t here = 0;
    for (const auto& G : subs)
      for (std::uint32_t k = 0; k <= 5; ++k)
        for (std::uint32_t n = 0; n <= k; ++n) {
          auto [c1, c2] = perm::check_borel_conditions(G, n, k);
          ++checks;
          ++here;
          if (c1 != c2) ++disagreements;
        }
    groups += subs.size();
    per_degree.push_back(json{{"degree", degree}, {"subgroups", subs.size()}, {"checks", here}});
  }
  res.pass = disagreements == 0;
  res.summary = std::to_string(groups) + " subgroups, " + std::to_string(checks) + " checks, " +
                std::to_string(disagreements) + " disagreements";
  res.data = json{{"per_degree", per_degree}, {"disagreements", disagreements}};
  return res;
}

// ---------------------------------------------------------------- C10
CriterionResult criterion_worked_examples(const RunConfig&) {
  CriterionResult res{10, "Quoted partial-permutation examples bit-exact", false, "", {}, 0};
  bool compose_ok = perm::partial_compose({7, 4, 3, 1, 0}, {3, 4, 6}) == perm::PartialPerm{1, 0};
  bool inverse_ok = perm::partial_inverse({1, 2, 0, 5}) == perm::PartialPerm{2, 0, 1};
  res.pass = compose_ok && inverse_ok;
  res.summary = std::string("composition ") + (compose_ok ? "exact" : "WRONG") + ", inverse " +
                (inverse_ok ? "exact" : "WRONG");
  res.data = json{{"compose_example", compose_ok}, {"inverse_example", inverse_ok}};
  return res;
}

}  // namespace

CriterionResult run_criterion(int id, const RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult res;
  switch (id) {
    case 1: res = criterion_algebra(config); break;
    case 2: res = criterion_dichotomy(config); break;
    case 3: res = criterion_functor(config); break;
    case 4: res = criterion_linfty_bounds(config); break;
    case 5: res = criterion_lipschitz(config); break;
    case 6: res = criterion_capacity(config); break;
    case 7: res = criterion_roundtrip(config); break;
    case 8: res = criterion_remark_biconditional(config); break;
    case 9: res = criterion_borel_shadow(config); break;
    case 10: res = criterion_worked_examples(config); break;
    default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "algebra") return {1};
  if (suite == "dichotomy") return {2};
  if (suite == "functorF") return {3};
  if (suite == "psi") return {4, 5, 6};
  if (suite == "roundtrip") return {7, 8};
  if (suite == "borel") return {9, 10};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

json report_json(const RunConfig& config, const std::vector<CriterionResult>& results) {
  json criteria = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    criteria.push_back(json{{"id", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"summary", r.summary},
                            {"data", r.data}});
  }
  return json{{"config", json{{"p", config.p},
                              {"depth", config.depth},
                              {"width", config.width},
                              {"seed", config.seed},
                              {"threads", config.threads}}},
              {"criteria", criteria},
              {"all_pass", all}};
}

}  // namespace procount::verify
