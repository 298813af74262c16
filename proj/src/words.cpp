#include "egsq/words.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace egsq {

namespace {

long long parse_int(std::string_view s, std::string_view token) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad integer in word token '" +
                                std::string(token) + "'");
  return v;
}

std::uint32_t parse_uint(std::string_view s, std::string_view token) {
  long long v = parse_int(s, token);
  if (v < 0) throw std::invalid_argument("negative index in word token '" +
                                         std::string(token) + "'");
  return static_cast<std::uint32_t>(v);
}

GenToken parse_token(std::string_view tok) {
  GenToken t;
  std::string_view body = tok;
  if (auto caret = tok.find('^'); caret != std::string_view::npos) {
    body = tok.substr(0, caret);
    t.exponent = parse_int(tok.substr(caret + 1), tok);
  }
  if (body == "a") {
    t.kind = GenToken::Kind::rooted;
  } else if (body.size() >= 2 && body[0] == 'c') {
    t.kind = GenToken::Kind::conjugated;
    t.shift = parse_uint(body.substr(1), tok);
  } else if (body.size() >= 4 && body[0] == 'd') {
    const auto dot = body.find('.');
    if (dot == std::string_view::npos || dot < 2 || dot + 1 >= body.size())
      throw std::invalid_argument("bad directed token '" + std::string(tok) +
                                  "'");
    t.kind = GenToken::Kind::directed;
    t.path = parse_uint(body.substr(1, dot - 1), tok);
    t.index = parse_uint(body.substr(dot + 1), tok);
    if (t.path == 0 || t.index == 0)
      throw std::invalid_argument("directed token indices are 1-based");
  } else {
    throw std::invalid_argument("unknown word token '" + std::string(tok) +
                                "'");
  }
  return t;
}

}  // namespace

Word Word::parse(std::string_view text) {
  std::vector<GenToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    tokens.push_back(parse_token(text.substr(i, j - i)));
    i = j;
  }
  return Word(std::move(tokens));
}

GenToken Word::rooted(long long exponent) {
  GenToken t;
  t.kind = GenToken::Kind::rooted;
  t.exponent = exponent;
  return t;
}

GenToken Word::directed(std::uint32_t path, std::uint32_t index,
                        long long exponent) {
  GenToken t;
  t.kind = GenToken::Kind::directed;
  t.path = path;
  t.index = index;
  t.exponent = exponent;
  return t;
}

GenToken Word::conjugated(std::uint32_t shift, long long exponent) {
  GenToken t;
  t.kind = GenToken::Kind::conjugated;
  t.shift = shift;
  t.exponent = exponent;
  return t;
}

void Word::append(const Word& w) {
  tokens_.insert(tokens_.end(), w.tokens_.begin(), w.tokens_.end());
}

std::string Word::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : tokens_) {
    if (!first) out << ' ';
    first = false;
    switch (t.kind) {
      case GenToken::Kind::rooted:
        out << 'a';
        break;
      case GenToken::Kind::directed:
        out << 'd' << t.path << '.' << t.index;
        break;
      case GenToken::Kind::conjugated:
        out << 'c' << t.shift;
        break;
    }
    if (t.exponent != 1) out << '^' << t.exponent;
  }
  return out.str();
}

}  // namespace egsq
