#include "snprlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "snprlab/agreement.hpp"
#include "snprlab/canonical.hpp"
#include "snprlab/phyloio.hpp"
#include "snprlab/snpr.hpp"

namespace snprlab::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

bool logging() { return std::getenv("SNPRLAB_LOG") != nullptr; }

Network load(const RunConfig& cfg, const std::string& path) {
  const std::string text = read_file(path);
  try {
    switch (cfg.format) {
      case Format::kEnewick: return parse_enewick(text);
      case Format::kPnd: return parse_pnd(text);
      case Format::kAuto: break;
    }
    return parse_network(text);
  } catch (const ParseError& e) {
    // eNewick positions are byte offsets into the whole text.
    std::size_t line = e.line(), col = e.position();
    if (line == 0) {
      line = 1;
      for (std::size_t i = 0; i < e.position() && i < text.size(); ++i)
        if (text[i] == '\n') {
          ++line;
          col = e.position() - i - 1;
        }
    }
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what(),
                     e.position(), line);
  } catch (const ValidationError& e) {
    throw ValidationError(e.violations(), path);
  }
}

std::string render(const RunConfig& cfg, const Network& n) {
  return cfg.format == Format::kPnd ? write_pnd(n) : write_enewick(n) + "\n";
}

std::vector<Network> load_inputs(const RunConfig& cfg, std::size_t want) {
  if (cfg.inputs.size() != want)
    throw UsageError(cfg.subcommand + " takes " + std::to_string(want) + " input file(s)");
  std::vector<Network> out;
  for (const auto& p : cfg.inputs) out.push_back(load(cfg, p));
  return out;
}

void require_tree_child(const Network& n, const std::string& path) {
  if (!is_tree_child(n)) throw Error(path + " is not tree-child");
}

std::string edge_text(const Edge& e) {
  return std::to_string(e.from) + "->" + std::to_string(e.to) + (e.slot ? "#" + std::to_string(e.slot) : "");
}

DistanceOptions distance_options(const RunConfig& cfg) {
  DistanceOptions o;
  o.cap = cfg.cap;
  o.budget = cfg.budget.value_or(0);
  o.bidirectional = cfg.bidirectional;
  o.jobs = cfg.jobs;
  return o;
}

AgreementOptions agreement_options(const RunConfig& cfg) {
  AgreementOptions o;
  o.tree_child_only = cfg.tree_child_only;
  if (cfg.budget) o.subset_budget = *cfg.budget;
  return o;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& cmd = cfg.subcommand;
  if (cmd == "validate") {
    auto n = load_inputs(cfg, 1)[0];
    out << "vertices\t" << n.vertex_count() << "\nedges\t" << n.edge_count() << "\nleaves\t" << n.leaf_count()
        << "\nreticulations\t" << n.reticulation_count() << "\n";
    return kOk;
  }
  if (cmd == "tree-child") {
    auto n = load_inputs(cfg, 1)[0];
    auto r = tree_child_report(n);
    out << "tree_child\t" << (r.is_tree_child ? "true" : "false") << "\n";
    for (const Edge& e : r.stacks) out << "stack\t" << e.from << "\t" << e.to << "\n";
    for (auto [a, b] : r.sibling_reticulations) out << "siblings\t" << a << "\t" << b << "\n";
    for (const auto& [a, b] : r.parallel_pairs) out << "parallel\t" << a.from << "\t" << a.to << "\n";
    return r.is_tree_child ? kOk : kInvalid;
  }
  if (cmd == "iso") {
    auto ns = load_inputs(cfg, 2);
    const bool iso = isomorphic(ns[0], ns[1]);
    out << (iso ? "true" : "false") << "\n";
    return iso ? kOk : kInvalid;
  }
  if (cmd == "neighbors") {
    auto n = load_inputs(cfg, 1)[0];
    NeighborhoodOptions o;
    o.tree_child_only = cfg.tree_child_only;
    if (cfg.cap) o.max_reticulations = *cfg.cap;
    if (cfg.tree_child_only) require_tree_child(n, cfg.inputs[0]);
    for_each_move(n, o, [&](const Move& m, Network&& r) {
      out << to_string(m.kind) << "\t" << edge_text(m.e) << "\t"
          << (m.kind == Move::Kind::kMinus ? "-" : edge_text(m.f)) << "\t" << move_weight(m.kind) << "\t"
          << write_enewick(r) << "\n";
      return true;
    });
    return kOk;
  }
  if (cmd == "distance") {
    auto ns = load_inputs(cfg, 2);
    for (std::size_t i = 0; i < 2; ++i) require_tree_child(ns[i], cfg.inputs[i]);
    auto r = dtc(ns[0], ns[1], distance_options(cfg));
    if (logging()) err << "distance: cap " << r.cap << ", expanded " << r.expanded << " states\n";
    out << r.weight << "\n" << write_moves(r.witness.moves);
    return kOk;
  }
  if (cmd == "mtc") {
    auto ns = load_inputs(cfg, 2);
    for (std::size_t i = 0; i < 2; ++i) require_tree_child(ns[i], cfg.inputs[i]);
    auto r = mtc(ns[0], ns[1], agreement_options(cfg));
    out << r.value << "\t" << r.witness.cut_n << "\t" << r.witness.cut_m << "\n"
        << write_bundle(ns[0], ns[1], r.witness);
    return kOk;
  }
  if (cmd == "bounds") {
    auto ns = load_inputs(cfg, 2);
    for (std::size_t i = 0; i < 2; ++i) require_tree_child(ns[i], cfg.inputs[i]);
    AgreementOptions ao;  // the budget applies to the distance search here
    auto rep = check_bounds(ns[0], ns[1], distance_options(cfg), ao);
    out << rep.tsv() << "\n";
    return kOk;
  }
  if (cmd == "maf") {
    auto ns = load_inputs(cfg, 2);
    out << maf_rspr(ns[0], ns[1]) << "\n";
    return kOk;
  }
  if (cmd == "gen") {
    if (!cfg.inputs.empty()) throw UsageError("gen takes no input files");
    for (std::size_t i = 0; i < cfg.count; ++i)
      out << render(cfg, random_network(cfg.leaves, cfg.reticulations, cfg.seed + i, cfg.tree_child_only));
    return kOk;
  }
  if (cmd == "enumerate") {
    if (!cfg.inputs.empty()) throw UsageError("enumerate takes no input files");
    for (const auto& n : enumerate_tree_child(cfg.leaves, cfg.reticulations)) out << render(cfg, n);
    return kOk;
  }
  if (cmd == "normalize-seq") {
    if (cfg.inputs.size() != 2) throw UsageError("normalize-seq takes a network and a move file");
    Network start = load(cfg, cfg.inputs[0]);
    std::vector<Move> moves;
    try {
      moves = read_moves(read_file(cfg.inputs[1]));
    } catch (const ParseError& e) {
      throw ParseError(cfg.inputs[1] + ":" + std::to_string(e.line()) + ": " + e.what(), e.position(), e.line());
    }
    auto seq = make_sequence(start, moves);
    if (!is_tree_child_sequence(seq)) throw Error("the sequence is not tree-child");
    auto norm = normalize_sequence(enforce_global_assumption(seq));
    out << sequence_weight(seq) << "\t" << sequence_weight(norm) << "\n" << write_moves(norm.moves);
    return kOk;
  }
  if (cmd == "gap-search") {
    if (!cfg.inputs.empty()) throw UsageError("gap-search takes no input files");
    DistanceOptions dopts = distance_options(cfg);
    dopts.budget = 0;  // the budget counts sampled pairs here
    auto g = gap_witness_search(cfg.leaves, cfg.reticulations, cfg.budget.value_or(1000), cfg.seed, dopts);
    if (!g) {
      err << "gap-search: no witness within the budget\n";
      return kBudgetExhausted;
    }
    if (logging()) err << "gap-search: found after " << g->trials << " pairs\n";
    out << g->report.tsv() << "\n" << render(cfg, g->n) << render(cfg, g->m);
    return kOk;
  }
  throw UsageError("unknown subcommand " + cmd);
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  CLI::App app{"Tree-child SNPR distance and agreement digraphs", "snprlab"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::string format = "auto";
  std::size_t cap = 0, jobs = 1;
  std::uint64_t budget = 0;

  struct Spec {
    const char* name;
    const char* help;
    int files;  // -1: none, otherwise exact count
  };
  const Spec specs[] = {
      {"validate", "Parse and validate a network; print counts", 1},
      {"tree-child", "Tree-child report (stacks, sibling reticulations, parallel edges)", 1},
      {"iso", "Whether two networks are isomorphic", 2},
      {"neighbors", "All SNPR successors", 1},
      {"distance", "Tree-child SNPR distance with an optimal witness", 2},
      {"mtc", "Agreement-digraph measure with a witness bundle", 2},
      {"bounds", "half_m, d, m and whether half_m <= d <= m", 2},
      {"maf", "rSPR distance of two trees via agreement forests", 2},
      {"gen", "Random networks", -1},
      {"enumerate", "All tree-child networks up to isomorphism", -1},
      {"normalize-seq", "Normalize a move sequence (network, moves file)", 2},
      {"gap-search", "Search for a pair with d_tc < m_tc", -1},
  };
  for (const Spec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    if (s.files > 0) sub->add_option("files", cfg.inputs, "Input files")->required()->expected(s.files);
    sub->add_option("--format", format, "enewick, pnd or auto (input and output)")
        ->check(CLI::IsMember({"auto", "enewick", "pnd"}));
    sub->add_option("--seed", cfg.seed, "Seed for randomized behaviour");
    sub->add_option("--cap", cap, "Reticulation cap");
    sub->add_option("--budget", budget, "Search budget");
    sub->add_option("--jobs", jobs, "Worker threads (never changes results)");
    sub->add_flag("--tree-child-only,!--no-tree-child-only", cfg.tree_child_only,
                  "Restrict to tree-child networks (default on)");
    sub->add_flag("--bidirectional,!--unidirectional", cfg.bidirectional, "Meet-in-the-middle distance search");
    sub->add_option("--out", cfg.out, "Write standard output to this file");
    if (s.files < 0) {
      sub->add_option("--leaves", cfg.leaves, "Number of leaves");
      sub->add_option("--reticulations", cfg.reticulations, "Number of reticulations (maximum for gap-search)");
      if (std::string(s.name) == "gen") sub->add_option("--count", cfg.count, "Number of networks");
    }
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err) == 0 ? kOk : kInvalid;
    return std::nullopt;
  }
  CLI::App* sub = app.get_subcommands().at(0);
  cfg.subcommand = sub->get_name();
  cfg.format = format == "pnd" ? Format::kPnd : format == "enewick" ? Format::kEnewick : Format::kAuto;
  if (sub->count("--cap")) cfg.cap = cap;
  if (sub->count("--budget")) cfg.budget = budget;
  cfg.jobs = std::max<std::size_t>(1, jobs);
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code;
  try {
    code = execute(cfg, buffer, err);
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kBudgetExhausted;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  if (cfg.out) {
    std::ofstream f(*cfg.out, std::ios::binary);
    f << buffer.str();
    if (!f) {
      err << "error: cannot write " << *cfg.out << "\n";
      return kInvalid;
    }
  } else {
    out << buffer.str();
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto cfg = parse_args(args, out, err, code);
  if (!cfg) return code;
  return run(*cfg, out, err);
}

}  // namespace snprlab::cli
