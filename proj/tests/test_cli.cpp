#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "snprlab/cli.hpp"
#include "snprlab/phyloio.hpp"
#include "snprlab/snpr.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = snprlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Writes `text` to a scratch file and returns its path.
std::string file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "snprlab_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

const std::string kT1 = "((a,b),c);\n", kT2 = "((a,c),b);\n", kR = "((a,(b)#H1),(#H1,c));\n",
                  kT3 = "(a,(b,c));\n";

}  // namespace

TEST_CASE("validate") {
  auto r = call({"validate", file("t1.nwk", kT1)});
  CHECK(r.code == 0);
  CHECK(r.out == "vertices\t6\nedges\t5\nleaves\t3\nreticulations\t0\n");
  auto bad = call({"validate", file("bad.nwk", "((a,b),c")});
  CHECK(bad.code == 1);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("bad.nwk:1:8:") != std::string::npos);
  auto pnd = call({"validate", file("bad.pnd", "pnd 1\nvertex 0\nedge 0 9\n")});
  CHECK(pnd.code == 1);
  CHECK(pnd.err.find("bad.pnd:3:") != std::string::npos);
  auto forced = call({"validate", file("t1b.nwk", kT1), "--format", "pnd"});
  CHECK(forced.code == 1);
}

TEST_CASE("tree-child and iso") {
  CHECK(call({"tree-child", file("r.nwk", kR)}).out == "tree_child\ttrue\n");
  auto p = call({"tree-child", file("par.nwk", "((((a)#H1,#H1),b),c);\n")});
  CHECK(p.code == 1);
  CHECK(p.out == "tree_child\tfalse\nparallel\t3\t2\n");
  CHECK(call({"iso", file("t1.nwk", kT1), file("t1c.nwk", "(c,(b,a));\n")}).out == "true\n");
  auto no = call({"iso", file("t1.nwk", kT1), file("t2.nwk", kT2)});
  CHECK(no.code == 1);
  CHECK(no.out == "false\n");
}

TEST_CASE("neighbors") {
  auto r = call({"neighbors", file("t1.nwk", kT1), "--cap", "0"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "pm\t3->1\t0->5\t2\t(a,(b,c));\n"
        "pm\t3->1\t5->3\t2\t(c,(a,b));\n"
        "pm\t3->1\t5->4\t2\t(b,(a,c));\n"
        "pm\t3->2\t0->5\t2\t(b,(a,c));\n"
        "pm\t3->2\t5->3\t2\t(c,(a,b));\n"
        "pm\t3->2\t5->4\t2\t(a,(b,c));\n"
        "pm\t5->3\t0->5\t2\t(c,(a,b));\n"
        "pm\t5->4\t0->5\t2\t(c,(a,b));\n"
        "pm\t5->4\t3->1\t2\t(b,(a,c));\n"
        "pm\t5->4\t3->2\t2\t(a,(b,c));\n");
  auto m = call({"neighbors", file("r.nwk", kR), "--cap", "1"});
  CHECK(m.out.rfind("minus\t4->3\t-\t1\t(a,(b,c));\nminus\t6->3\t-\t1\t(c,(a,b));\n", 0) == 0);
}

TEST_CASE("distance") {
  auto same = call({"distance", file("t1.nwk", kT1), file("t1c.nwk", "(c,(b,a));\n"), "--cap", "2"});
  CHECK(same.code == 0);
  CHECK(same.out == "0\n");
  auto ab = call({"distance", file("t1.nwk", kT1), file("t2.nwk", kT2)});
  CHECK(ab.out == "2\n{\"kind\":\"pm\",\"e\":[3,1,0],\"f\":[5,4,0]}\n");
  auto rt = call({"distance", file("r.nwk", kR), file("t3.nwk", kT3), "--unidirectional"});
  CHECK(rt.out == "1\n{\"kind\":\"minus\",\"e\":[4,3,0]}\n");
  auto nontc = call({"distance", file("par.nwk", "((((a)#H1,#H1),b),c);\n"), file("t1.nwk", kT1)});
  CHECK(nontc.code == 1);
  auto tight = call({"distance", file("g1.nwk", "(((t2,(t1)#H1),#H1),((t4,(t3)#H2),#H2));\n"),
                     file("g2.nwk", "(((t3,(t2)#H1),#H1),((t4,(t1)#H2),#H2));\n"), "--budget", "5"});
  CHECK(tight.code == 2);
  CHECK(tight.out.empty());
}

TEST_CASE("mtc, bounds and maf") {
  auto m = call({"mtc", file("r.nwk", kR), file("t3.nwk", kT3)});
  CHECK(m.code == 0);
  CHECK(m.out.rfind("1\t1\t0\n--- network n\npnd 1\n", 0) == 0);
  CHECK(m.out.find("edge 4 3 cut\n") != std::string::npos);
  CHECK(m.out.find("--- digraph\npnd 1\ncomponent\n") != std::string::npos);
  CHECK(call({"bounds", file("t1.nwk", kT1), file("t2.nwk", kT2)}).out == "1\t2\t2\ttrue\n");
  CHECK(call({"bounds", file("r.nwk", kR), file("t3.nwk", kT3)}).out == "0.5\t1\t1\ttrue\n");
  CHECK(call({"bounds", file("t1.nwk", kT1), file("t1.nwk", kT1)}).out == "0\t0\t0\ttrue\n");
  CHECK(call({"maf", file("c1.nwk", "(((a,b),c),d);\n"), file("c2.nwk", "(((a,c),b),d);\n")}).out == "1\n");
  CHECK(call({"maf", file("r.nwk", kR), file("t3.nwk", kT3)}).code == 1);
}

TEST_CASE("gen and enumerate") {
  CHECK(call({"enumerate", "--leaves", "3", "--reticulations", "0"}).out ==
        "(t1,(t2,t3));\n(t3,(t1,t2));\n(t2,(t1,t3));\n");
  auto g = call({"gen", "--leaves", "4", "--reticulations", "1", "--count", "2", "--seed", "3"});
  CHECK(g.out == "(t4,((t2,((t1,t3))#H1),#H1));\n(t1,(t4,((t2,(t3)#H1),#H1)));\n");
  auto p = call({"gen", "--leaves", "3", "--reticulations", "1", "--format", "pnd"});
  CHECK(p.out.rfind("pnd 1\n", 0) == 0);
  CHECK(snprlab::parse_pnd(p.out).reticulation_count() == 1);
  auto e = call({"enumerate", "--leaves", "4", "--reticulations", "1"});
  CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 15 + 228);
}

TEST_CASE("normalize-seq") {
  const std::string t1 = file("t1.nwk", kT1);
  auto r = call({"normalize-seq", t1, file("m.jsonl", "{\"kind\":\"pm\",\"e\":[3,1,0],\"f\":[5,4,0]}\n")});
  CHECK(r.out == "2\t2\n{\"kind\":\"pm\",\"e\":[3,1,0],\"f\":[5,4,0]}\n");
  // PLUS then MINUS of the created edge cancels.
  snprlab::Network n = snprlab::parse_enewick(kT1);
  auto plus = snprlab::enumerate_moves(n).at(0);
  auto traced = snprlab::apply_move_traced(n, plus.move);
  snprlab::Edge added{};
  for (snprlab::EdgeIndex e = 0; e < traced.origins.size(); ++e)
    if (traced.origins[e].role == snprlab::EdgeOrigin::Role::kAdded) added = traced.network.edge(e);
  const std::string moves =
      snprlab::write_moves({plus.move, snprlab::Move{snprlab::Move::Kind::kMinus, added, {}}});
  CHECK(call({"normalize-seq", t1, file("pm.jsonl", moves)}).out == "2\t0\n");
  auto bad = call({"normalize-seq", t1, file("bad.jsonl", "{\"kind\":\"minus\"}\n")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("bad.jsonl:1:") != std::string::npos);
}

TEST_CASE("gap-search") {
  auto g = call({"gap-search", "--leaves", "4", "--reticulations", "2", "--budget", "100", "--seed", "1"});
  CHECK(g.code == 0);
  CHECK(g.out ==
        "3\t4\t6\ttrue\n(((t4,((t2,(t1)#H1),#H1)),(t3)#H2),#H2);\n(((t4,((t1,t3))#H1),((t2,#H1))#H2),#H2);\n");
  auto none = call({"gap-search", "--leaves", "3", "--reticulations", "1", "--budget", "5"});
  CHECK(none.code == 2);
  CHECK(none.out.empty());
  CHECK(call({"gap-search", "--leaves", "4", "--budget", "0"}).code == 2);
}

TEST_CASE("usage, output files and determinism") {
  CHECK(call({}).code == 1);
  CHECK(call({"bogus"}).code == 1);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"validate"}).code == 1);
  CHECK(call({"bounds", file("t1.nwk", kT1)}).code == 1);
  CHECK(call({"validate", "/nonexistent/x.nwk"}).code == 1);

  const std::string out = (fs::temp_directory_path() / "snprlab_cli_test" / "out.txt").string();
  auto r = call({"bounds", file("t1.nwk", kT1), file("t2.nwk", kT2), "--out", out});
  CHECK(r.out.empty());
  CHECK(snprlab::read_file(out) == "1\t2\t2\ttrue\n");

  const std::vector<std::string> args{"distance", file("g1.nwk", "(((t2,(t1)#H1),#H1),((t4,(t3)#H2),#H2));\n"),
                                      file("g2.nwk", "(((t3,(t2)#H1),#H1),((t4,(t1)#H2),#H2));\n")};
  auto a = call(args);
  auto b = args;
  b.insert(b.end(), {"--jobs", "3"});
  auto c = args;
  c.push_back("--unidirectional");
  CHECK(a.code == 0);
  CHECK(a.out.rfind("6\n", 0) == 0);
  CHECK(call(args).out == a.out);
  CHECK(call(b).out == a.out);
  CHECK(call(c).out == a.out);
}
