#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccbench/dataset.hpp"

namespace ccbench {

using TokenId = std::uint32_t;

enum class TokenClass { special, label, node };

std::string_view to_string(TokenClass c);

// Closed vocabulary with fixed ids: the eight specials first, then labels a..z,
// then nodes AAA..ZZZ.
//
//   0 <pad>   1 :   2 [   3 ]   4 <eos>   5 Q   6 I:   7 X:
//   8..33     a..z
//   34..17609 AAA..ZZZ
class Vocabulary {
 public:
  static constexpr std::array<std::string_view, 8> kSpecials = {"<pad>", ":",  "[",  "]",
                                                                "<eos>", "Q",  "I:", "X:"};
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kColon = 1;
  static constexpr TokenId kEosId = 4;
  static constexpr TokenId kFirstLabel = 8;
  static constexpr TokenId kFirstNode = kFirstLabel + kAlphabetSize;
  static constexpr std::size_t kSize = kFirstNode + kMaxNodes;

  static constexpr std::size_t size() { return kSize; }

  static std::optional<TokenId> id(std::string_view token);
  /// Throws ConfigError for ids outside the vocabulary.
  static std::string token(TokenId id);
  static TokenClass token_class(TokenId id);

  /// vocab.json: {"format", "version", "size", "checksum", "tokens": [{token, id, class}...]}.
  /// The checksum is FNV-1a 64 over "token\tid\tclass\n" lines in id order.
  static std::string manifest();
  static std::string checksum();
};

struct EncodedRecord {
  std::vector<TokenId> ids;
  /// True on path tokens and the closing <eos>; false on every prompt token.
  std::vector<std::uint8_t> loss_mask;
};

/// Encodes "<prompt> <path>". Throws ConfigError on tokens outside the vocabulary.
EncodedRecord encode(const CorpusRecord& record);
EncodedRecord encode_text(std::string_view prompt_text, std::string_view path_text);
/// Ids of a single-space-separated token string.
std::vector<TokenId> encode_tokens(std::string_view text);
/// Tokens joined by single spaces.
std::string decode(std::span<const TokenId> ids);

}  // namespace ccbench
