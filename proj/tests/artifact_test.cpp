#include "ccbench/artifact.hpp"

#include <gtest/gtest.h>

#include "ccbench/error.hpp"
#include "fixtures.hpp"

namespace ccbench {
namespace {

NodeId N(const char* name) { return *NodeId::from_name(name); }
Label L(char c) { return *Label::from_letter(c); }

ConceptualSpace line_space() {
  // AAA -b- AAB -c- AAC -b- AAD
  return ConceptualSpace(4,
                         {{N("AAA"), N("AAB"), L('b')},
                          {N("AAB"), N("AAC"), L('c')},
                          {N("AAC"), N("AAD"), L('b')}},
                         LabelDistribution::uniform(), 0);
}

TEST(CreativeArtifactTest, StructuralInvariant) {
  EXPECT_THROW(CreativeArtifact({N("AAA")}, {}), ConfigError);
  EXPECT_THROW(CreativeArtifact({N("AAA"), N("AAB")}, {L('a'), L('b')}), ConfigError);
  const CreativeArtifact p({N("AAA"), N("AAB")}, {L('b')});
  EXPECT_EQ(p.hops(), 1u);
  EXPECT_EQ(p.label_set(), LabelSet{L('b')});
}

TEST(ValidateWalkTest, ValidWalk) {
  const auto s = line_space();
  const CreativeArtifact p({N("AAA"), N("AAB"), N("AAC"), N("AAD")}, {L('b'), L('c'), L('b')});
  EXPECT_TRUE(validate_walk(s, p).valid());
}

TEST(ValidateWalkTest, FabricatedStepReportsItsIndex) {
  const auto s = line_space();
  const CreativeArtifact p({N("AAA"), N("AAB"), N("AAD")}, {L('b'), L('c')});
  const auto v = validate_walk(s, p);
  ASSERT_FALSE(v.valid());
  EXPECT_EQ(*v.first_violation, (WalkViolation{2, WalkViolationKind::bad_edge}));

  const CreativeArtifact wrong_label({N("AAA"), N("AAB")}, {L('c')});
  EXPECT_EQ(validate_walk(s, wrong_label).first_violation->step, 1u);
}

TEST(ValidateWalkTest, OutOfRangeNode) {
  const auto s = line_space();
  const CreativeArtifact p({N("AAA"), N("ZZZ")}, {L('b')});
  EXPECT_EQ(*validate_walk(s, p).first_violation, (WalkViolation{1, WalkViolationKind::bad_node}));
  const CreativeArtifact q({N("ZZZ"), N("AAA")}, {L('b')});
  EXPECT_EQ(*validate_walk(s, q).first_violation, (WalkViolation{0, WalkViolationKind::bad_node}));
}

TEST(ValidateWalkTest, RandomWalksMatchMembershipOracle) {
  const auto s = testing::small_space(50, 4.0, 31);
  Rng rng(5);
  int valid = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t h = 1 + rng.below(5);
    std::vector<NodeId> nodes{NodeId(static_cast<std::uint32_t>(rng.below(50)))};
    std::vector<Label> labels;
    for (std::size_t t = 0; t < h; ++t) {
      // Mostly follow real edges so both verdicts are exercised.
      const auto adj = s.adjacency(nodes.back());
      if (!adj.empty() && rng.below(10) < 8) {
        const auto nb = adj[rng.below(adj.size())];
        nodes.push_back(nb.node);
        labels.push_back(nb.label);
      } else {
        nodes.emplace_back(static_cast<std::uint32_t>(rng.below(50)));
        labels.emplace_back(static_cast<std::uint8_t>(rng.below(26)));
      }
    }
    const CreativeArtifact p(nodes, labels);
    std::optional<std::size_t> expected_step;
    for (std::size_t t = 1; t <= h && !expected_step; ++t) {
      if (!testing::edge_in_list(s, nodes[t - 1], nodes[t], labels[t - 1])) expected_step = t;
    }
    const auto verdict = validate_walk(s, p);
    ASSERT_EQ(verdict.valid(), !expected_step.has_value());
    if (expected_step) {
      ASSERT_EQ(verdict.first_violation->step, *expected_step);
      ASSERT_EQ(verdict.first_violation->kind, WalkViolationKind::bad_edge);
    }
    valid += verdict.valid();
  }
  EXPECT_GT(valid, 100);
}

TEST(ValidateWalkTest, ReversedValidWalkIsValid) {
  const auto s = testing::small_space(50, 4.0, 32);
  testing::WalkEnumerator walks(s);
  for (std::uint32_t u = 0; u < 50; u += 7) {
    for (const auto& p : walks.all_walks(NodeId(u), 3)) {
      ASSERT_TRUE(validate_walk(s, p).valid());
      std::vector<NodeId> nodes(p.nodes().rbegin(), p.nodes().rend());
      std::vector<Label> labels(p.labels().rbegin(), p.labels().rend());
      ASSERT_TRUE(validate_walk(s, CreativeArtifact(nodes, labels)).valid());
    }
  }
}

TEST(PromptCodecTest, EmptyConstraintForm) {
  const CreativePrompt x{N("AAA"), N("ZZZ"), {}, {}};
  EXPECT_EQ(render_prompt(x), "Q [ AAA ZZZ I: X: ] :");
  EXPECT_EQ(parse_prompt("Q [ AAA ZZZ I: X: ] :"), x);
}

TEST(PromptCodecTest, SortedLabelSections) {
  const CreativePrompt x{N("ABC"), N("XYZ"), {L('q'), L('b')}, {L('c')}};
  EXPECT_EQ(render_prompt(x), "Q [ ABC XYZ I: b q X: c ] :");
}

TEST(PromptCodecTest, RandomRoundTrip) {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const auto x = testing::random_prompt(rng, kMaxNodes, 8, 8);
    ASSERT_EQ(parse_prompt(render_prompt(x)), x) << render_prompt(x);
  }
}

std::size_t prompt_error_offset(std::string_view text, std::optional<std::uint32_t> n = {}) {
  try {
    parse_prompt(text, n);
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string_view::npos;
}

TEST(PromptCodecTest, ErrorsCarryByteOffsets) {
  EXPECT_EQ(prompt_error_offset("Q [ AAA ZZZ I: b X: b ] :"), 20u);   // overlap
  EXPECT_EQ(prompt_error_offset("Q [ AAA ZZZ I: X: ] :", 100), 8u);  // unknown node
  EXPECT_EQ(prompt_error_offset("Q ( AAA ZZZ I: X: ] :"), 2u);       // bracket
  EXPECT_EQ(prompt_error_offset("Q [ AAA ZZZ I: X: :"), 18u);        // missing ]
  EXPECT_EQ(prompt_error_offset("Q [ AAA ZZZ I: X: ] : x"), 22u);    // trailing
  EXPECT_EQ(prompt_error_offset("Q [ AAA ZZZ I: c b X: ] :"), 17u);  // unsorted
  EXPECT_EQ(prompt_error_offset("Q [  AAA ZZZ I: X: ] :"), 4u);      // double space
  EXPECT_EQ(prompt_error_offset(""), 0u);
}

TEST(PathCodecTest, SingleHop) {
  const CreativeArtifact p({N("AAA"), N("CCC")}, {L('b')});
  EXPECT_EQ(render_path(p), "AAA b CCC <eos>");
  const auto parsed = parse_path("AAA b CCC <eos>", 10);
  ASSERT_TRUE(std::holds_alternative<CreativeArtifact>(parsed));
  EXPECT_EQ(std::get<CreativeArtifact>(parsed), p);
}

PathFailureKind failure(std::string_view text, std::size_t max_hops = 10) {
  const auto parsed = parse_path(text, max_hops);
  EXPECT_TRUE(std::holds_alternative<PathParseFailure>(parsed)) << text;
  return std::get<PathParseFailure>(parsed).kind;
}

TEST(PathCodecTest, StructuredFailures) {
  EXPECT_EQ(failure("AAA b"), PathFailureKind::malformed_truncated);
  EXPECT_EQ(failure("AAA b <eos>"), PathFailureKind::malformed_truncated);
  EXPECT_EQ(failure("AAA b CCC"), PathFailureKind::missing_eos);
  EXPECT_EQ(failure(""), PathFailureKind::empty);
  EXPECT_EQ(failure("   "), PathFailureKind::empty);
  EXPECT_EQ(failure("<eos>"), PathFailureKind::expected_node);
  EXPECT_EQ(failure("b AAA <eos>"), PathFailureKind::expected_node);
  EXPECT_EQ(failure("AAA BBB <eos>"), PathFailureKind::expected_label);
  EXPECT_EQ(failure("AAA b c <eos>"), PathFailureKind::expected_node);
  EXPECT_EQ(failure("AAA <eos>"), PathFailureKind::no_hops);
  EXPECT_EQ(failure("AAA b CCC <eos> AAA"), PathFailureKind::trailing_tokens);
  EXPECT_EQ(failure("AAA  b CCC <eos>"), PathFailureKind::bad_spacing);
  EXPECT_EQ(failure("AAA b CCC <eos>\n"), PathFailureKind::bad_spacing);
  EXPECT_EQ(failure("AAA b CCC c DDD <eos>", 1), PathFailureKind::too_long);
}

TEST(PathCodecTest, RandomRoundTrip) {
  Rng rng(78);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t h = 1 + rng.below(10);
    std::vector<NodeId> nodes;
    std::vector<Label> labels;
    for (std::size_t t = 0; t <= h; ++t) nodes.emplace_back(static_cast<std::uint32_t>(rng.below(kMaxNodes)));
    for (std::size_t t = 0; t < h; ++t) labels.emplace_back(static_cast<std::uint8_t>(rng.below(26)));
    const CreativeArtifact p(nodes, labels);
    const auto parsed = parse_path(render_path(p), 10);
    ASSERT_TRUE(std::holds_alternative<CreativeArtifact>(parsed));
    ASSERT_EQ(std::get<CreativeArtifact>(parsed), p);
  }
}

TEST(PathCodecTest, ParserIsTotalOnArbitraryBytes) {
  Rng rng(79);
  const std::string alphabet = "ABCZabz <>eos:[]\t\n\x01\xff";
  for (int i = 0; i < 20000; ++i) {
    std::string s(rng.below(40), ' ');
    for (char& c : s) c = alphabet[rng.below(alphabet.size())];
    (void)parse_path(s, 10);
  }
}

}  // namespace
}  // namespace ccbench
