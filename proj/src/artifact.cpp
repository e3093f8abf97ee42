#include "ccbench/artifact.hpp"

#include "ccbench/error.hpp"

namespace ccbench {

CreativeArtifact::CreativeArtifact(std::vector<NodeId> nodes, std::vector<Label> labels)
    : nodes_(std::move(nodes)), labels_(std::move(labels)) {
  if (labels_.empty()) throw ConfigError("a creative artifact needs at least one hop");
  if (nodes_.size() != labels_.size() + 1) {
    throw ConfigError("a walk with " + std::to_string(labels_.size()) + " labels needs " +
                      std::to_string(labels_.size() + 1) + " nodes, got " +
                      std::to_string(nodes_.size()));
  }
}

LabelSet CreativeArtifact::label_set() const {
  LabelSet s;
  for (Label l : labels_) s.insert(l);
  return s;
}

WalkVerdict validate_walk(const ConceptualSpace& space, const CreativeArtifact& path) {
  const auto& nodes = path.nodes();
  if (!space.contains(nodes[0])) return {WalkViolation{0, WalkViolationKind::bad_node}};
  for (std::size_t t = 1; t < nodes.size(); ++t) {
    if (!space.contains(nodes[t])) return {WalkViolation{t, WalkViolationKind::bad_node}};
    if (!space.has_edge(nodes[t - 1], nodes[t], path.labels()[t - 1])) {
      return {WalkViolation{t, WalkViolationKind::bad_edge}};
    }
  }
  return {};
}

bool satisfies(const ConceptualSpace& space, const CreativePrompt& x, const CreativeArtifact& path) {
  const LabelSet used = path.label_set();
  return path.start() == x.start && path.end() == x.end && used.includes(x.include) &&
         !used.intersects(x.exclude) && validate_walk(space, path).valid();
}

// ---------------------------------------------------------------------------
// Text forms

namespace {

struct Token {
  std::string_view text;
  std::size_t offset;
};

/// Splits on single spaces. An empty token marks a spacing defect.
std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(' ', start);
    const auto end = pos == std::string_view::npos ? text.size() : pos;
    out.push_back({text.substr(start, end - start), start});
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool has_foreign_whitespace(std::string_view tok) {
  for (char c : tok) {
    if (c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  }
  return false;
}

void append_labels(std::string& out, LabelSet s) {
  for (Label l : s.labels()) {
    out += ' ';
    out += l.letter();
  }
}

}  // namespace

std::string render_prompt(const CreativePrompt& x) {
  std::string out = "Q [ ";
  out += x.start.name();
  out += ' ';
  out += x.end.name();
  out += " I:";
  append_labels(out, x.include);
  out += " X:";
  append_labels(out, x.exclude);
  out += " ] :";
  return out;
}

CreativePrompt parse_prompt(std::string_view text, std::optional<std::uint32_t> node_count) {
  const auto tokens = tokenize(text);
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    const std::size_t offset = i < tokens.size() ? tokens[i].offset : text.size();
    return ParseError(offset, msg + " at byte " + std::to_string(offset));
  };
  auto expect = [&](std::string_view want) {
    if (i >= tokens.size() || tokens[i].text != want) {
      throw fail("expected '" + std::string(want) + "'");
    }
    ++i;
  };
  auto node = [&]() {
    if (i >= tokens.size()) throw fail("expected node");
    const auto id = NodeId::from_name(tokens[i].text);
    if (!id) throw fail("expected node name, got '" + std::string(tokens[i].text) + "'");
    if (node_count && id->value() >= *node_count) {
      throw fail("unknown node '" + std::string(tokens[i].text) + "'");
    }
    ++i;
    return *id;
  };
  auto labels = [&]() {
    LabelSet s;
    int last = -1;
    while (i < tokens.size() && tokens[i].text.size() == 1) {
      const auto l = Label::from_letter(tokens[i].text[0]);
      if (!l) break;
      if (l->value() <= last) throw fail("labels must be distinct and ascending");
      last = l->value();
      s.insert(*l);
      ++i;
    }
    return s;
  };

  CreativePrompt x;
  expect("Q");
  expect("[");
  x.start = node();
  x.end = node();
  expect("I:");
  x.include = labels();
  expect("X:");
  const std::size_t exclude_at = i;
  x.exclude = labels();
  expect("]");
  expect(":");
  if (i != tokens.size()) throw fail("trailing input");
  if (x.include.intersects(x.exclude)) {
    i = exclude_at;
    throw fail("inclusion and exclusion sets overlap");
  }
  return x;
}

std::string render_path(const CreativeArtifact& path) {
  std::string out = path.nodes()[0].name();
  for (std::size_t t = 0; t < path.hops(); ++t) {
    out += ' ';
    out += path.labels()[t].letter();
    out += ' ';
    out += path.nodes()[t + 1].name();
  }
  out += ' ';
  out += kEos;
  return out;
}

std::string_view to_string(PathFailureKind kind) {
  switch (kind) {
    case PathFailureKind::empty: return "empty";
    case PathFailureKind::bad_spacing: return "bad_spacing";
    case PathFailureKind::expected_node: return "expected_node";
    case PathFailureKind::expected_label: return "expected_label";
    case PathFailureKind::malformed_truncated: return "malformed_truncated";
    case PathFailureKind::missing_eos: return "missing_eos";
    case PathFailureKind::trailing_tokens: return "trailing_tokens";
    case PathFailureKind::no_hops: return "no_hops";
    case PathFailureKind::too_long: return "too_long";
  }
  return "unknown";
}

std::variant<CreativeArtifact, PathParseFailure> parse_path(std::string_view text,
                                                            std::size_t max_hops) {
  if (text.find_first_not_of(" \t\n\r\v\f") == std::string_view::npos) {
    return PathParseFailure{PathFailureKind::empty, 0};
  }
  const auto tokens = tokenize(text);
  std::vector<NodeId> nodes;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto tok = tokens[i].text;
    if (tok.empty() || has_foreign_whitespace(tok)) {
      return PathParseFailure{PathFailureKind::bad_spacing, i};
    }
    if (tok == kEos) {
      if (nodes.empty()) return PathParseFailure{PathFailureKind::expected_node, i};
      if (nodes.size() == labels.size()) {
        return PathParseFailure{PathFailureKind::malformed_truncated, i};
      }
      if (i + 1 != tokens.size()) return PathParseFailure{PathFailureKind::trailing_tokens, i + 1};
      if (labels.empty()) return PathParseFailure{PathFailureKind::no_hops, i};
      return CreativeArtifact(std::move(nodes), std::move(labels));
    }
    const bool want_node = nodes.size() == labels.size();
    if (want_node) {
      const auto id = NodeId::from_name(tok);
      if (!id) return PathParseFailure{PathFailureKind::expected_node, i};
      nodes.push_back(*id);
    } else {
      const auto l = tok.size() == 1 ? Label::from_letter(tok[0]) : std::nullopt;
      if (!l) return PathParseFailure{PathFailureKind::expected_label, i};
      if (labels.size() == max_hops) return PathParseFailure{PathFailureKind::too_long, i};
      labels.push_back(*l);
    }
  }
  if (nodes.size() == labels.size()) {
    return PathParseFailure{PathFailureKind::malformed_truncated, tokens.size()};
  }
  return PathParseFailure{PathFailureKind::missing_eos, tokens.size()};
}

}  // namespace ccbench
