#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cdrbac::internal {

enum class Tok {
  Ident,
  Number,
  Equals,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semicolon,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct LexError {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

/// Tokenizes `text`, skipping whitespace and `#` comments. Line numbers start
/// at `first_line`. Stops at the first bad character and reports it in `err`
/// (the tokens before it are kept). The token list always ends with Tok::End.
std::vector<Token> lex(std::string_view text, std::size_t first_line, LexError* err);

const char* token_name(Tok t);

}  // namespace cdrbac::internal
