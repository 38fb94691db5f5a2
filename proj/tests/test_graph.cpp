#include <gtest/gtest.h>

#include <algorithm>

#include "doa/graph/traversal.hpp"
#include "doa/graph/validate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace doa {
namespace {

using testing::GraphBuilder;
using Ids = std::set<std::string>;

std::size_t count_lines(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
  return n;
}

TEST(Validate, MinimalGraphIsValid) {
  GraphBuilder b;
  b.input("i").output("o").node("A", {"i"}, {"o"});
  EXPECT_TRUE(validate(b.graph).ok()) << validate(b.graph).summary();
}

TEST(Validate, UnwiredInPortIsReported) {
  GraphBuilder b;
  b.input("i").output("o").node("A", {"i"}, {"o"});
  NodeSpec spec = *b.graph.find_node("A");
  FlowGraph g;
  g.add_stream(*b.graph.find_stream("i"));
  g.add_stream(*b.graph.find_stream("o"));
  spec.in_ports[0].name = "in";
  g.add_node(spec);
  g.wire_out("A", "out0", "o");
  const auto report = validate(g);
  ASSERT_EQ(report.count(ViolationKind::UnwiredPort), 1u);
  const auto it = std::find_if(report.violations.begin(), report.violations.end(),
                               [](const Violation& v) { return v.kind == ViolationKind::UnwiredPort; });
  EXPECT_EQ(it->message, "unwired port A.in");
  EXPECT_EQ(it->subjects, std::vector<std::string>{"A"});
}

TEST(Validate, TwoNodeCycleNamesBothNodes) {
  GraphBuilder b;
  b.input("i").internal("s").internal("t").output("o");
  b.node("A", {"i", "t"}, {"s"}).node("B", {"s"}, {"t", "o"});
  const auto report = validate(b.graph);
  ASSERT_EQ(report.count(ViolationKind::Cycle), 1u);
  for (const auto& v : report.violations) {
    if (v.kind == ViolationKind::Cycle) {
      EXPECT_EQ(v.subjects, (std::vector<std::string>{"A", "B"}));
    }
  }
}

TEST(Validate, StreamCategoryRules) {
  GraphBuilder b;
  b.input("i").internal("dangling").output("o").output("o2");
  b.node("A", {"i"}, {"o", "dangling"}).node("B", {"o"}, {"o2"}).node("C", {"o2"}, {"i"});
  const auto report = validate(b.graph);
  EXPECT_EQ(report.count(ViolationKind::InputHasProducer), 1u);
  EXPECT_EQ(report.count(ViolationKind::OutputHasConsumer), 2u);
  EXPECT_EQ(report.count(ViolationKind::InternalWithoutConsumer), 1u);
}

TEST(Validate, InternalStreamNeedsExactlyOneProducer) {
  GraphBuilder b;
  b.input("i").internal("s").output("o");
  b.node("A", {"i"}, {"s"}).node("B", {"i"}, {"s"}).node("C", {"s"}, {"o"});
  EXPECT_EQ(validate(b.graph).count(ViolationKind::InternalProducerCount), 1u);
}

TEST(Validate, SchemaMismatchBetweenPortAndStream) {
  GraphBuilder b;
  b.input("i").output("o");
  b.graph.add_stream({"y", StreamCategory::Output, Schema("y", {{"y", FieldType::Text}})});
  b.node("A", {"i"}, {"o"});
  NodeSpec spec;
  spec.id = "B";
  spec.in_ports.push_back({"in", PortDirection::In, testing::kX});
  spec.out_ports.push_back({"out", PortDirection::Out, testing::kX});
  spec.transform = [](const NodeInput&) { return NodeOutput{}; };
  b.graph.add_node(spec, {{"in", "i"}}, {{"out", "y"}});
  EXPECT_EQ(validate(b.graph).count(ViolationKind::SchemaMismatch), 1u);
}

TEST(Validate, NodeWithoutInputPathIsAnOrphan) {
  GraphBuilder b;
  b.input("i").output("o").output("z");
  b.node("A", {"i"}, {"o"}).node("P", {}, {"z"});
  const auto report = validate(b.graph);
  ASSERT_EQ(report.count(ViolationKind::Orphan), 1u) << report.summary();
  EXPECT_EQ(report.violations[0].subjects, std::vector<std::string>{"P"});
}

TEST(Validate, SinkNodeIsALegalTerminal) {
  GraphBuilder b;
  b.input("i").output("o").node("A", {"i"}, {"o"}).node("sink", {"i"}, {});
  EXPECT_TRUE(validate(b.graph).ok()) << validate(b.graph).summary();
}

TEST(Validate, IsIdempotent) {
  const FlowGraph g = testing::diamond();
  EXPECT_EQ(validate(g).summary(), validate(g).summary());
  GraphBuilder b;
  b.input("i").internal("s").output("o").node("A", {"i"}, {"s"});
  EXPECT_EQ(validate(b.graph).summary(), validate(b.graph).summary());
  EXPECT_FALSE(validate(b.graph).ok());
}

TEST(FlowGraph, RejectsIdCollisionsAcrossStreamsAndNodes) {
  GraphBuilder b;
  b.input("i");
  EXPECT_THROW(b.input("i"), GraphError);
  EXPECT_THROW(b.node("i", {}, {}), GraphError);
}

TEST(TopologicalOrder, Chain) {
  EXPECT_EQ(topological_order(testing::chain()), (std::vector<std::string>{"A", "B"}));
}

TEST(TopologicalOrder, TieBreakById) {
  GraphBuilder b;
  b.input("i").internal("s1").internal("s2").output("o");
  b.node("C", {"s1", "s2"}, {"o"}).node("B", {"i"}, {"s2"}).node("A", {"i"}, {"s1"});
  EXPECT_EQ(topological_order(b.graph), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(TopologicalOrder, Diamond) {
  GraphBuilder b;
  b.input("i").internal("ab").internal("ac").internal("bd").internal("cd").output("o");
  b.node("A", {"i"}, {"ab", "ac"}).node("C", {"ac"}, {"cd"}).node("B", {"ab"}, {"bd"});
  b.node("D", {"bd", "cd"}, {"o"});
  EXPECT_EQ(topological_order(b.graph), (std::vector<std::string>{"A", "B", "C", "D"}));
}

TEST(TopologicalOrder, LaterIdCanPrecedeWhenRequired) {
  GraphBuilder b;
  b.input("i").internal("s").output("o");
  b.node("Z", {"i"}, {"s"}).node("A", {"s"}, {"o"});
  EXPECT_EQ(topological_order(b.graph), (std::vector<std::string>{"Z", "A"}));
}

TEST(TopologicalOrder, RejectsInvalidGraph) {
  GraphBuilder b;
  b.input("i").internal("s").internal("t").output("o");
  b.node("A", {"i", "t"}, {"s"}).node("B", {"s"}, {"t", "o"});
  EXPECT_THROW(topological_order(b.graph), GraphError);
}

TEST(Closure, ChainExamples) {
  const FlowGraph g = testing::chain();
  EXPECT_EQ(upstream_closure(g, "o"), (Ids{"o", "B", "s", "A", "i"}));
  EXPECT_EQ(upstream_closure(g, "i"), (Ids{"i"}));
  EXPECT_EQ(downstream_closure(g, "i"), (Ids{"i", "A", "s", "B", "o"}));
  EXPECT_EQ(downstream_closure(g, "o"), (Ids{"o"}));
}

TEST(Closure, DiamondExamples) {
  const FlowGraph g = testing::diamond();
  EXPECT_EQ(upstream_closure(g, "o1"), (Ids{"o1", "B", "s1", "A", "i"}));
  EXPECT_EQ(downstream_closure(g, "s2"), (Ids{"s2", "C", "o2"}));
  EXPECT_EQ(upstream_closure(g, "o1"), testing::brute_upstream(g, "o1"));
}

TEST(Closure, UnknownIdThrows) {
  EXPECT_THROW(upstream_closure(testing::chain(), "nope"), GraphError);
  EXPECT_THROW(downstream_closure(testing::chain(), "nope"), GraphError);
}

TEST(Closure, ConnectedGraphIsCoveredFromItsOutputs) {
  const FlowGraph g = testing::diamond();
  Ids covered;
  for (const char* o : {"o1", "o2"}) {
    const auto up = upstream_closure(g, o);
    covered.insert(up.begin(), up.end());
  }
  Ids all;
  for (const auto& [id, s] : g.streams()) all.insert(id);
  for (const auto& [id, n] : g.nodes()) all.insert(id);
  EXPECT_EQ(covered, all);
}

TEST(RandomDag, TraversalsMatchBruteForce) {
  Rng rng(99);
  for (int round = 0; round < 200; ++round) {
    const FlowGraph g = testing::random_dag(rng);
    ASSERT_TRUE(validate(g).ok()) << validate(g).summary();
    const auto order = topological_order(g);
    EXPECT_TRUE(testing::respects_edges(g, order));
    const auto reach = testing::reach(g);
    for (const auto& [id, down] : reach) {
      ASSERT_EQ(downstream_closure(g, id), down) << id;
      ASSERT_EQ(upstream_closure(g, id), testing::brute_upstream(g, id)) << id;
    }
  }
}

TEST(RandomDag, OrderIsTheLexicographicallySmallestValidOrder) {
  Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    const FlowGraph g = testing::random_dag(rng, 7);
    std::vector<std::string> ids;
    for (const auto& [id, n] : g.nodes()) ids.push_back(id);
    std::vector<std::string> smallest;
    do {
      if (testing::respects_edges(g, ids)) {
        smallest = ids;
        break;
      }
    } while (std::next_permutation(ids.begin(), ids.end()));
    EXPECT_EQ(topological_order(g), smallest);
  }
}

TEST(Dot, EmptyGraphHasNoStatements) {
  EXPECT_EQ(export_dot(FlowGraph{}), "digraph flow {\n}\n");
}

TEST(Dot, OneNodeTwoStreams) {
  GraphBuilder b;
  b.input("i").output("o").node("A", {"i"}, {"o"});
  const std::string dot = export_dot(b.graph);
  EXPECT_EQ(count_lines(dot, "shape="), 3u);
  EXPECT_EQ(count_lines(dot, " -> "), 2u);
  EXPECT_NE(dot.find("\"i\" [shape=box, style=filled, color=red];"), std::string::npos);
  EXPECT_NE(dot.find("\"o\" [shape=box, style=filled, color=green];"), std::string::npos);
  EXPECT_NE(dot.find("\"A\" [shape=ellipse];"), std::string::npos);
  EXPECT_EQ(dot, export_dot(b.graph));
}

TEST(Dot, InternalStreamsAreYellow) {
  EXPECT_NE(export_dot(testing::chain()).find("\"s\" [shape=box, style=filled, color=yellow];"),
            std::string::npos);
}

}  // namespace
}  // namespace doa
