#pragma once

#include <cctype>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "trajlab/error.hpp"
#include "trajlab/nfa.hpp"

namespace trajlab {

/// Regular expression syntax: letters, postfix `*` and `+`, infix `|`,
/// parentheses, juxtaposition for concatenation, `()` for the empty word.
/// Blanks are ignored.
struct Regex {
  enum class Kind { Epsilon, Letter, Concat, Union, Star, Plus };
  Kind kind = Kind::Epsilon;
  Letter letter = 0;
  std::vector<Regex> args;

  static Regex epsilon() { return {}; }
  static Regex lit(Letter c) { return {Kind::Letter, c, {}}; }
};

namespace detail {

class RegexParser {
 public:
  RegexParser(std::string_view text, std::function<bool(Letter)> allowed, std::string letter_desc)
      : text_(text), allowed_(std::move(allowed)), letter_desc_(std::move(letter_desc)) {}

  Regex parse() {
    Regex r = parse_union();
    skip_blanks();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw SyntaxError("unbalanced ')'", pos_);
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return r;
  }

 private:
  void skip_blanks() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_blanks();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  Regex parse_union() {
    Regex first = parse_concat();
    if (!peek('|')) return first;
    Regex u{Regex::Kind::Union, 0, {std::move(first)}};
    while (peek('|')) {
      ++pos_;
      u.args.push_back(parse_concat());
    }
    return u;
  }

  Regex parse_concat() {
    Regex c{Regex::Kind::Concat, 0, {}};
    for (;;) {
      skip_blanks();
      if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') break;
      c.args.push_back(parse_postfix());
    }
    if (c.args.empty()) return Regex::epsilon();
    if (c.args.size() == 1) return std::move(c.args.front());
    return c;
  }

  Regex parse_postfix() {
    Regex r = parse_atom();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        r = Regex{Regex::Kind::Star, 0, {std::move(r)}};
      } else if (peek('+')) {
        ++pos_;
        r = Regex{Regex::Kind::Plus, 0, {std::move(r)}};
      } else {
        return r;
      }
    }
  }

  Regex parse_atom() {
    skip_blanks();
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Regex inner = parse_union();
      if (!peek(')')) throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (c == '*' || c == '+') throw SyntaxError(std::string("dangling '") + c + "'", pos_);
    if (!std::isalnum(static_cast<unsigned char>(c)))
      throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    if (!allowed_(c))
      throw SyntaxError(std::string("letter '") + c + "' outside " + letter_desc_, pos_);
    ++pos_;
    return Regex::lit(c);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::function<bool(Letter)> allowed_;
  std::string letter_desc_;
};

// Thompson construction; returns (entry, exit) of the fragment.
inline std::pair<int, int> thompson(Nfa& a, const Regex& r) {
  int in = a.add_state(), out = a.add_state();
  switch (r.kind) {
    case Regex::Kind::Epsilon:
      a.add_transition(in, std::nullopt, out);
      break;
    case Regex::Kind::Letter:
      a.add_transition(in, r.letter, out);
      break;
    case Regex::Kind::Concat: {
      int cur = in;
      for (const auto& sub : r.args) {
        auto [s, e] = thompson(a, sub);
        a.add_transition(cur, std::nullopt, s);
        cur = e;
      }
      a.add_transition(cur, std::nullopt, out);
      break;
    }
    case Regex::Kind::Union:
      for (const auto& sub : r.args) {
        auto [s, e] = thompson(a, sub);
        a.add_transition(in, std::nullopt, s);
        a.add_transition(e, std::nullopt, out);
      }
      break;
    case Regex::Kind::Star:
    case Regex::Kind::Plus: {
      auto [s, e] = thompson(a, r.args.front());
      a.add_transition(in, std::nullopt, s);
      a.add_transition(e, std::nullopt, out);
      a.add_transition(e, std::nullopt, s);
      if (r.kind == Regex::Kind::Star) a.add_transition(in, std::nullopt, out);
      break;
    }
  }
  return {in, out};
}

}  // namespace detail

inline Regex parse_regex(std::string_view text) {
  return detail::RegexParser(text, [](Letter) { return true; }, "the alphabet").parse();
}

/// Parses a regex whose letters must belong to `letters`.
inline Regex parse_regex(std::string_view text, const std::set<Letter>& letters) {
  std::string desc = "{";
  for (Letter c : letters) desc += std::string(desc.size() > 1 ? "," : "") + c;
  desc += "}";
  return detail::RegexParser(text, [&](Letter c) { return letters.contains(c); }, desc).parse();
}

inline Nfa regex_to_nfa(const Regex& r) {
  Nfa a;
  auto [in, out] = detail::thompson(a, r);
  a.initial = in;
  a.accepting[out] = true;
  return a;
}

inline Nfa regex_to_nfa(std::string_view text) { return regex_to_nfa(parse_regex(text)); }

}  // namespace trajlab
