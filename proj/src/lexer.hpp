#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "agm/source.hpp"

namespace agm::detail {

enum class Tok {
  Ident,
  Keyword,
  Int,
  String,
  Punct,
  End,
  Error,  // unterminated string, stray character
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier/keyword/punctuation spelling, decoded string contents
  std::int64_t int_value = 0;
  SourceLocation loc;
  std::size_t offset = 0;

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool punct(std::string_view t) const { return is(Tok::Punct, t); }
  bool keyword(std::string_view t) const { return is(Tok::Keyword, t); }
};

/// Comments (`//` to end of line) and whitespace are dropped.
std::vector<Token> tokenize(std::string_view text, const std::string& file);

}  // namespace agm::detail
