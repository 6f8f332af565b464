// procount: constructions and verifications for the tree-to-group
// reduction machinery. Subcommands: tree, group, verify, reduce, perm.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "procount/perm.hpp"
#include "procount/reduction.hpp"
#include "procount/verify.hpp"

namespace {

using procount::Node;
using procount::trees::SequenceSpec;
using procount::trees::TreeSpec;
using json = nlohmann::ordered_json;

std::vector<std::uint32_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string part = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    out.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

SequenceSpec parse_sequence(const std::string& prefix_text, const std::string& tail_text) {
  SequenceSpec x;
  if (!prefix_text.empty()) x.prefix = parse_uint_list(prefix_text);
  if (!tail_text.empty()) {
    auto tail = parse_uint_list(tail_text);
    if (tail.size() != 2) throw CLI::ValidationError("--tail expects 'a,b'");
    x.tail_a = tail[0];
    x.tail_b = tail[1];
  } else if (!x.prefix.empty()) {
    x.tail_b = x.prefix.back();  // constant continuation by default
  }
  return x;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream os(out_path);
    if (!os) throw CLI::ValidationError("cannot open output file '" + out_path + "'");
    os << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"procount: solenoid-group reduction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint32_t p = 3, depth = 6, width = 8;
  std::uint64_t seed = 0;
  std::string out_path;
  app.add_option("--p", p, "odd prime (default 3)");
  app.add_option("--depth", depth, "truncation depth");
  app.add_option("--width", width, "label bound for infinite branching");
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_option("--out", out_path, "write the JSON report to this file");

  // ---- tree
  auto* tree_cmd = app.add_subcommand("tree", "expand a tree spec and dump nodes per level");
  std::string kind, x_text, tail_text;
  std::uint32_t k_param = 0;
  tree_cmd->add_option("--kind", kind, "S_star | S_k | S_omega | R | T_x")->required();
  tree_cmd->add_option("--k", k_param, "parameter for S_k / R");
  tree_cmd->add_option("--x", x_text, "sequence prefix, e.g. 1,1,1");
  tree_cmd->add_option("--tail", tail_text, "affine tail 'a,b': x(k) = a*k + b beyond the prefix");

  // ---- group
  auto* group_cmd = app.add_subcommand("group", "normal form of a group expression");
  std::string expr, graph = "none";
  group_cmd->add_option("expr", expr, "expression, e.g. \"x1*x0\" or \"[x0,x2]\"")->required();
  group_cmd->add_option("--graph", graph, "commutation graph: none | matching (default none)");

  // ---- verify
  auto* verify_cmd = app.add_subcommand("verify", "run an acceptance suite");
  std::string suite;
  verify_cmd->add_option("--suite", suite,
                         "algebra | dichotomy | functorF | psi | roundtrip | borel | all")
      ->required();

  // ---- reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "end-to-end main-theorem instance");
  std::string rx_text, ry_text, rx_tail, ry_tail;
  std::uint32_t M = 2;
  reduce_cmd->add_option("--x", rx_text, "prefix of x");
  reduce_cmd->add_option("--x-tail", rx_tail, "affine tail of x: 'a,b'");
  reduce_cmd->add_option("--y", ry_text, "prefix of y");
  reduce_cmd->add_option("--y-tail", ry_tail, "affine tail of y: 'a,b'");
  reduce_cmd->add_option("--M", M, "l_infty bound to certify against");

  // ---- perm
  auto* perm_cmd = app.add_subcommand("perm", "partial permutation algebra");
  auto* compose_cmd = perm_cmd->add_subcommand("compose", "s o t on the defined segment");
  std::string s_text, t_text;
  compose_cmd->add_option("--s", s_text)->required();
  compose_cmd->add_option("--t", t_text)->required();
  auto* inverse_cmd = perm_cmd->add_subcommand("inverse", "partial inverse");
  inverse_cmd->add_option("--s", s_text)->required();
  perm_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tree_cmd) {
      TreeSpec spec;
      if (kind == "S_star") spec = TreeSpec::s_star();
      else if (kind == "S_k") spec = TreeSpec::s_k(k_param);
      else if (kind == "S_omega") spec = TreeSpec::s_omega();
      else if (kind == "R") spec = TreeSpec::r_k(k_param);
      else if (kind == "T_x") spec = TreeSpec::t_x(parse_sequence(x_text, tail_text));
      else throw CLI::ValidationError("unknown tree kind '" + kind + "'");
      procount::trees::LevelData data = procount::trees::expand(spec, depth, width);
      json j{{"spec", procount::trees::to_json(spec)},
             {"depth", depth},
             {"width", width},
             {"expansion", procount::trees::level_data_to_json(data)}};
      emit(j, out_path);
      return 0;
    }

    if (*group_cmd) {
      procount::mekler::CommGraph g = graph == "matching"
                                          ? procount::mekler::CommGraph::matching()
                                          : procount::mekler::CommGraph::free_graph();
      if (graph != "matching" && graph != "none")
        throw CLI::ValidationError("unknown graph '" + graph + "'");
      // size the universe generously: any integer literal may be an index
      std::uint32_t max_idx = 0;
      for (std::size_t i = 0; i < expr.size();) {
        if (std::isdigit(static_cast<unsigned char>(expr[i]))) {
          std::uint64_t v = 0;
          while (i < expr.size() && std::isdigit(static_cast<unsigned char>(expr[i])))
            v = v * 10 + static_cast<std::uint64_t>(expr[i++] - '0');
          max_idx = std::max<std::uint32_t>(max_idx, static_cast<std::uint32_t>(std::min<std::uint64_t>(v, 4096)));
        } else {
          ++i;
        }
      }
      auto uni = procount::mekler::Universe::plain(p, g, max_idx + 1);
      auto elem = procount::mekler::parse_element(uni, expr);
      std::cout << procount::mekler::to_string(elem) << "\n";
      return 0;
    }

    if (*verify_cmd) {
      procount::verify::RunConfig config{p, depth, width, seed, procount::verify::thread_budget()};
      std::vector<int> ids = procount::verify::suite_criteria(suite);
      std::vector<procount::verify::CriterionResult> results;
      bool all = true;
      for (int id : ids) {
        auto r = procount::verify::run_criterion(id, config);
        std::fprintf(stderr, "[%s] criterion %2d: %s -- %s (%.1fs)\n", r.pass ? "PASS" : "FAIL",
                     r.id, r.name.c_str(), r.summary.c_str(), r.seconds);
        all = all && r.pass;
        results.push_back(std::move(r));
      }
      emit(procount::verify::report_json(config, results), out_path);
      return all ? 0 : 1;
    }

    if (*reduce_cmd) {
      SequenceSpec x = parse_sequence(rx_text, rx_tail);
      SequenceSpec y = parse_sequence(ry_text, ry_tail);
      procount::reduction::InstanceReport rep =
          procount::reduction::verify_main_theorem_instance(x, y, M, depth, width, p);
      emit(rep.to_json(), out_path);
      return rep.ok ? 0 : 1;
    }

    if (*perm_cmd) {
      if (*compose_cmd) {
        auto r = procount::perm::partial_compose(parse_uint_list(s_text), parse_uint_list(t_text));
        emit(json(r), out_path);
        return 0;
      }
      if (*inverse_cmd) {
        auto r = procount::perm::partial_inverse(parse_uint_list(s_text));
        emit(json(r), out_path);
        return 0;
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "check failure: %s\n", e.what());
    return 1;
  }
  return 2;
}
