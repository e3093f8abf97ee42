#include "ccbench/tokenizer.hpp"

#include "ccbench/error.hpp"
#include "ccbench/rng.hpp"
#include "json.hpp"

namespace ccbench {

std::string_view to_string(TokenClass c) {
  switch (c) {
    case TokenClass::special: return "special";
    case TokenClass::label: return "label";
    case TokenClass::node: return "node";
  }
  return "unknown";
}

std::optional<TokenId> Vocabulary::id(std::string_view token) {
  for (TokenId i = 0; i < kSpecials.size(); ++i) {
    if (kSpecials[i] == token) return i;
  }
  if (token.size() == 1) {
    if (const auto l = Label::from_letter(token[0])) return kFirstLabel + l->value();
    return std::nullopt;
  }
  if (const auto n = NodeId::from_name(token)) return kFirstNode + n->value();
  return std::nullopt;
}

std::string Vocabulary::token(TokenId id) {
  if (id < kFirstLabel) return std::string(kSpecials[id]);
  if (id < kFirstNode) return std::string(1, Label(static_cast<std::uint8_t>(id - kFirstLabel)).letter());
  if (id < kSize) return NodeId(id - kFirstNode).name();
  throw ConfigError("token id " + std::to_string(id) + " outside the vocabulary");
}

TokenClass Vocabulary::token_class(TokenId id) {
  if (id < kFirstLabel) return TokenClass::special;
  if (id < kFirstNode) return TokenClass::label;
  if (id < kSize) return TokenClass::node;
  throw ConfigError("token id " + std::to_string(id) + " outside the vocabulary");
}

std::string Vocabulary::checksum() {
  std::uint64_t h = fnv1a64("");
  for (TokenId i = 0; i < kSize; ++i) {
    h = fnv1a64(token(i), h);
    h = fnv1a64("\t" + std::to_string(i) + "\t", h);
    h = fnv1a64(to_string(token_class(i)), h);
    h = fnv1a64("\n", h);
  }
  return to_hex(h);
}

std::string Vocabulary::manifest() {
  nlohmann::ordered_json tokens = nlohmann::ordered_json::array();
  for (TokenId i = 0; i < kSize; ++i) {
    tokens.push_back({{"token", token(i)}, {"id", i}, {"class", to_string(token_class(i))}});
  }
  nlohmann::ordered_json doc;
  doc["format"] = "ccbench-vocab";
  doc["version"] = 1;
  doc["size"] = kSize;
  doc["checksum"] = checksum();
  doc["tokens"] = std::move(tokens);
  return doc.dump() + "\n";
}

std::vector<TokenId> encode_tokens(std::string_view text) {
  std::vector<TokenId> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    const auto tok = text.substr(start, end - start);
    const auto id = Vocabulary::id(tok);
    if (!id) throw ConfigError("token '" + std::string(tok) + "' is not in the vocabulary");
    ids.push_back(*id);
    start = end + 1;
  }
  return ids;
}

EncodedRecord encode_text(std::string_view prompt_text, std::string_view path_text) {
  EncodedRecord out;
  out.ids = encode_tokens(prompt_text);
  out.loss_mask.assign(out.ids.size(), 0);
  const auto path_ids = encode_tokens(path_text);
  out.ids.insert(out.ids.end(), path_ids.begin(), path_ids.end());
  out.loss_mask.resize(out.ids.size(), 1);
  return out;
}

EncodedRecord encode(const CorpusRecord& record) {
  return encode_text(render_prompt(record.prompt), render_path(record.path));
}

std::string decode(std::span<const TokenId> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += Vocabulary::token(ids[i]);
  }
  return out;
}

}  // namespace ccbench
