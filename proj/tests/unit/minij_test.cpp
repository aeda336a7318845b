#include <gtest/gtest.h>

#include <algorithm>

#include "crysl/minij/ir.hpp"
#include "crysl/minij/parser.hpp"
#include "fixtures.hpp"

namespace crysl::minij {
namespace {

using testing::fixturePath;
using testing::fixtureRules;

ErrorKind failure(const std::string& text) {
  try {
    parseProgram(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return ErrorKind::Io;
}

std::size_t countStmts(const std::vector<Stmt>& body, Stmt::Kind kind) {
  std::size_t n = 0;
  for (const auto& s : body) {
    n += s.kind == kind;
    n += countStmts(s.body, kind) + countStmts(s.elseBody, kind);
  }
  return n;
}

TEST(MiniJParser, FixturePrograms) {
  auto kc = readProgramFile(fixturePath("programs/keygen_cipher.mj"));
  EXPECT_EQ(kc.main().body.size(), 8u);
  EXPECT_EQ(kc.functions.size(), 2u);
  EXPECT_EQ(kc.imports.at("Cipher"), "javax.crypto.Cipher");
  auto md = readProgramFile(fixturePath("programs/message_digest.mj"));
  EXPECT_EQ(countStmts(md.main().body, Stmt::Kind::If), 2u);
}

TEST(MiniJParser, EmptyMain) {
  auto p = parseProgram("void main() {}");
  EXPECT_TRUE(p.main().body.empty());
}

TEST(MiniJParser, Diagnostics) {
  EXPECT_EQ(failure("void main() { int x = ; }"), ErrorKind::Syntax);
  EXPECT_EQ(failure("void main() { int x = y; }"), ErrorKind::UseBeforeDef);
  EXPECT_EQ(failure("void main() { boolean b = Util.f(); if (b) { int x = 1; } int y = x; }"),
            ErrorKind::UseBeforeDef);
  EXPECT_EQ(failure("void main() { helper(); }"), ErrorKind::UndefinedFunction);
  EXPECT_EQ(failure("void f() {}"), ErrorKind::MissingMain);
  EXPECT_EQ(failure("void main() {} void main() {}"), ErrorKind::DuplicateDeclaration);
  EXPECT_EQ(failure("void main() { int x = 1; int x = 2; }"), ErrorKind::DuplicateDeclaration);
}

TEST(MiniJParser, ErrorPositions) {
  try {
    parseProgram("void main() {\n  int x = 1;\n  int y = z;\n}", "p.mj");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.pos().line, 3);
    EXPECT_EQ(e.file(), "p.mj");
  }
  try {
    parseProgram("void f() {}\n", "p.mj");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.pos().line, 2);
  }
}

std::set<std::pair<Node::Kind, Node::Kind>> edgeKinds(const ProgramIr& ir, int fn) {
  std::set<std::pair<Node::Kind, Node::Kind>> out;
  for (NodeId n : ir.functions[fn].nodes) {
    for (NodeId s : ir.node(n).succ) out.insert({ir.node(n).kind, ir.node(s).kind});
  }
  return out;
}

TEST(Cfg, StraightLineIsAChain) {
  auto p = parseProgram("void main() { int a = 1; int b = a; String s = Util.f(b); }");
  auto ir = buildCfg(p);
  const auto& fn = ir.functions[ir.mainIndex()];
  ASSERT_EQ(fn.nodes.size(), 5u);
  NodeId n = fn.entry;
  std::vector<Node::Kind> kinds;
  while (true) {
    kinds.push_back(ir.node(n).kind);
    if (n == fn.exit) break;
    ASSERT_EQ(ir.node(n).succ.size(), 1u);
    n = ir.node(n).succ[0];
  }
  EXPECT_EQ(kinds, (std::vector<Node::Kind>{Node::Kind::Entry, Node::Kind::Const, Node::Kind::Copy,
                                            Node::Kind::Call, Node::Kind::Exit}));
}

TEST(Cfg, DigestProgramHasTwoDiamondsAndABypassedUpdate) {
  auto p = readProgramFile(fixturePath("programs/message_digest.mj"));
  auto ir = buildCfg(p);
  const auto& fn = ir.functions[ir.mainIndex()];
  int branches = 0;
  for (NodeId n : fn.nodes) {
    const auto& node = ir.node(n);
    if (node.kind != Node::Kind::Branch) continue;
    ++branches;
    EXPECT_EQ(node.succ.size(), 2u);
  }
  EXPECT_EQ(branches, 2);
  auto update = std::find_if(fn.nodes.begin(), fn.nodes.end(), [&](NodeId n) {
    return ir.node(n).kind == Node::Kind::Call && ir.node(n).call.method == "update";
  });
  ASSERT_NE(update, fn.nodes.end());
  NodeId branch = ir.node(*update).pred.at(0);
  NodeId join = ir.node(*update).succ.at(0);
  EXPECT_EQ(ir.node(branch).kind, Node::Kind::Branch);
  auto& bs = ir.node(branch).succ;
  EXPECT_NE(std::find(bs.begin(), bs.end(), join), bs.end());
}

TEST(Cfg, NestedIfInsideWhile) {
  auto p = parseProgram(R"(void main() {
  boolean c = Util.f();
  int x = 0;
  while (c) {
    if (c) {
      x = 1;
    } else {
      x = 2;
    }
  }
  int y = x;
})");
  auto ir = buildCfg(p);
  const auto& fn = ir.functions[ir.mainIndex()];
  // Hand-drawn: entry -> call(c) -> const(x=0) -> loop; loop -> if | copy(y);
  // if -> const(1) | const(2); both -> loop; copy(y) -> exit.
  using K = Node::Kind;
  std::map<std::string, NodeId> at;
  for (NodeId n : fn.nodes) {
    const auto& node = ir.node(n);
    if (node.kind == K::Branch) at[at.count("loop") ? "if" : "loop"] = n;
    if (node.kind == K::Const) at["x=" + node.value.spelling()] = n;
    if (node.kind == K::Copy) at["y"] = n;
    if (node.kind == K::Call) at["c"] = n;
  }
  ASSERT_EQ(at.size(), 7u);
  std::set<std::pair<NodeId, NodeId>> expected{
      {fn.entry, at["c"]},      {at["c"], at["x=0"]},   {at["x=0"], at["loop"]},
      {at["loop"], at["if"]},   {at["loop"], at["y"]},  {at["if"], at["x=1"]},
      {at["if"], at["x=2"]},    {at["x=1"], at["loop"]}, {at["x=2"], at["loop"]},
      {at["y"], fn.exit}};
  std::set<std::pair<NodeId, NodeId>> edges;
  for (NodeId n : fn.nodes) {
    for (NodeId s : ir.node(n).succ) edges.insert({n, s});
  }
  EXPECT_EQ(edges, expected);
}

TEST(Cfg, EveryNodeReachableAndReachesExit) {
  for (const auto& path : testing::concordancePrograms()) {
    auto p = readProgramFile(path);
    auto ir = buildCfg(p);
    for (const auto& fn : ir.functions) {
      std::set<NodeId> fwd{fn.entry}, bwd{fn.exit};
      std::vector<NodeId> work{fn.entry};
      while (!work.empty()) {
        NodeId n = work.back();
        work.pop_back();
        for (NodeId s : ir.node(n).succ) {
          if (fwd.insert(s).second) work.push_back(s);
        }
      }
      work = {fn.exit};
      while (!work.empty()) {
        NodeId n = work.back();
        work.pop_back();
        for (NodeId s : ir.node(n).pred) {
          if (bwd.insert(s).second) work.push_back(s);
        }
      }
      EXPECT_EQ(fwd.size(), fn.nodes.size()) << path << " " << fn.name;
      EXPECT_EQ(bwd.size(), fn.nodes.size()) << path << " " << fn.name;
    }
  }
}

TEST(Liveness, VariableDiesAfterLastUse) {
  auto p = parseProgram("void main() { int a = 1; int b = a; int c = 2; int d = b; }");
  auto ir = buildCfg(p);
  auto live = computeLiveness(ir);
  const auto& fn = ir.functions[ir.mainIndex()];
  NodeId defA = ir.node(fn.entry).succ[0];
  NodeId defB = ir.node(defA).succ[0];
  NodeId defC = ir.node(defB).succ[0];
  auto locals = [&](NodeId n) {
    auto out = live.liveOut[n];
    out.erase(kReturnVar);
    return out;
  };
  EXPECT_EQ(locals(defA), std::set<std::string>{"a"});
  EXPECT_EQ(locals(defB), std::set<std::string>{"b"});
  EXPECT_EQ(locals(defC), std::set<std::string>{"b"});
}

TEST(CallGraph, EdgesAndReachability) {
  auto p = parseProgram(R"(void b() {}
void a() { b(); }
void unused() { a(); }
void helper() {}
void main() { helper(); helper(); a(); })");
  auto ir = buildCfg(p);
  auto cg = buildCallGraph(ir);
  EXPECT_EQ(cg.callSitesOf(ir.functionIndex("helper")).size(), 2u);
  EXPECT_TRUE(cg.callSitesOf(ir.mainIndex()).empty());
  std::set<int> expected{ir.mainIndex(), ir.functionIndex("a"), ir.functionIndex("b"),
                         ir.functionIndex("helper")};
  EXPECT_EQ(cg.reachable, expected);
  EXPECT_EQ(cg.edges.size(), 5u);
}

std::vector<std::string> siteTypes(const std::string& file) {
  auto p = readProgramFile(fixturePath(file));
  auto ir = buildCfg(p);
  std::vector<std::string> out;
  for (const auto& s : findAllocationSites(ir, buildCallGraph(ir), fixtureRules())) {
    out.push_back(s.type);
  }
  return out;
}

TEST(AllocationSites, FixturePrograms) {
  EXPECT_EQ(siteTypes("programs/keygen_cipher.mj"),
            (std::vector<std::string>{"javax.crypto.KeyGenerator", "javax.crypto.Cipher"}));
  EXPECT_EQ(siteTypes("programs/message_digest.mj"),
            std::vector<std::string>{"java.security.MessageDigest"});
}

TEST(AllocationSites, UnruledAndUnreachableAreIgnored) {
  auto p = parseProgram(R"(import javax.crypto.KeyGenerator;
void dead() { KeyGenerator k = KeyGenerator.getInstance("DES"); }
void main() { String s = new String("x"); })");
  auto ir = buildCfg(p);
  EXPECT_TRUE(findAllocationSites(ir, buildCallGraph(ir), fixtureRules()).empty());
}

TEST(AllocationSites, Deterministic) {
  auto path = fixturePath("programs/keygen_cipher.mj");
  auto p1 = readProgramFile(path);
  auto p2 = readProgramFile(path);
  auto i1 = buildCfg(p1);
  auto i2 = buildCfg(p2);
  auto s1 = findAllocationSites(i1, buildCallGraph(i1), fixtureRules());
  auto s2 = findAllocationSites(i2, buildCallGraph(i2), fixtureRules());
  ASSERT_EQ(s1.size(), s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1[i].node, s2[i].node);
}

}  // namespace
}  // namespace crysl::minij
