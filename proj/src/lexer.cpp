#include "lexer.hpp"

#include <cctype>
#include <limits>

#include "agm/syntax.hpp"

namespace agm::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.loc = SourceLocation{file, line, col};
    tok.offset = i;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.text = std::string(text.substr(i, j - i));
      tok.kind = is_keyword(tok.text) ? Tok::Keyword : Tok::Ident;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t v = 0;
      bool overflow = false;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        int d = text[j] - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) overflow = true;
        if (!overflow) v = v * 10 + d;
        ++j;
      }
      tok.text = std::string(text.substr(i, j - i));
      if (overflow) {
        tok.kind = Tok::Error;
        tok.text = "integer literal out of range";
      } else {
        tok.kind = Tok::Int;
        tok.int_value = v;
      }
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string value;
      bool closed = false;
      while (j < text.size() && text[j] != '\n') {
        if (text[j] == '"') {
          closed = true;
          break;
        }
        if (text[j] == '\\' && j + 1 < text.size()) {
          char e = text[j + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: value += '\\'; value += e; break;
          }
          j += 2;
          continue;
        }
        value += text[j++];
      }
      if (closed) {
        tok.kind = Tok::String;
        tok.text = std::move(value);
        advance(j + 1 - i);
      } else {
        tok.kind = Tok::Error;
        tok.text = "unterminated string literal";
        advance(j - i);
      }
    } else {
      static constexpr std::string_view two[] = {"->", "--", "==", "!=", "<=", ">=",
                                                 "+=", "-=", ".."};
      bool matched = false;
      if (i + 1 < text.size()) {
        for (std::string_view t : two) {
          if (text.substr(i, 2) == t) {
            tok.kind = Tok::Punct;
            tok.text = std::string(t);
            advance(2);
            matched = true;
            break;
          }
        }
      }
      if (!matched) {
        static constexpr std::string_view one = "{}()[];:,.=<>+-*/|";
        if (one.find(c) != std::string_view::npos) {
          tok.kind = Tok::Punct;
          tok.text = std::string(1, c);
        } else {
          tok.kind = Tok::Error;
          tok.text = "unexpected character '" + std::string(1, c) + "'";
        }
        advance(1);
      }
    }
    out.push_back(std::move(tok));
  }

  Token end;
  end.kind = Tok::End;
  end.loc = SourceLocation{file, line, col};
  end.offset = text.size();
  out.push_back(end);
  return out;
}

}  // namespace agm::detail
