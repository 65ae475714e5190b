#include "memsim/action.hpp"

#include <cctype>

#include "memsim/error.hpp"

namespace memsim {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedToken: return "MalformedToken";
    case ParseErrorKind::NonIntegerId: return "NonIntegerId";
  }
  return "?";
}

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == ' ' || c == '-';
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Recursive-descent cursor over the inside of one `<...>` token.
class TokenCursor {
 public:
  TokenCursor(std::string_view body, std::size_t base_column) : s_(body), base_(base_column) {}

  void skip_ws() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ == s_.size();
  }

  bool peek_keyword(std::string_view kw) {
    skip_ws();
    if (s_.substr(pos_, kw.size()) != kw) return false;
    const std::size_t after = pos_ + kw.size();
    return after == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[after]));
  }

  void expect_keyword(std::string_view kw) {
    if (!peek_keyword(kw)) fail("expected '" + std::string(kw) + "'");
    pos_ += kw.size();
  }

  void expect_char(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // `(` integer `)`
  int parenthesized_id() {
    expect_char('(');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ')' && !is_space(s_[pos_])) ++pos_;
    const std::string_view digits = s_.substr(start, pos_ - start);
    bool ok = !digits.empty() && digits.size() <= 9 && !(digits.size() > 1 && digits[0] == '0');
    for (char c : digits) ok = ok && std::isdigit(static_cast<unsigned char>(c));
    if (!ok) {
      throw ParseError(ParseErrorKind::NonIntegerId,
                       "'" + std::string(digits) + "' is not a canonical non-negative integer",
                       base_ + start + 1);
    }
    expect_char(')');
    return std::stoi(std::string(digits));
  }

  // `keyword(id)`, whitespace allowed before the parenthesis.
  int room_clause(std::string_view keyword) {
    expect_keyword(keyword);
    return parenthesized_id();
  }

  ObjectRef object_slot() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(') ++pos_;
    if (pos_ == s_.size()) fail("expected an object reference name(id)", start);

    std::string name;
    bool pending_space = false;
    for (std::size_t i = start; i < pos_; ++i) {
      const char c = s_[i];
      if (is_space(c)) {
        pending_space = !name.empty();
        continue;
      }
      if (!is_name_char(c)) fail(std::string("invalid character '") + c + "' in object name", i);
      if (pending_space) name += ' ';
      pending_space = false;
      name += c;
    }
    if (name.empty()) fail("empty object name", start);
    return {std::move(name), parenthesized_id()};
  }

  // `floor` is only the floor when followed directly by the `in room(...)` clause.
  bool floor_follows() {
    skip_ws();
    if (!peek_keyword("floor")) return false;
    TokenCursor probe = *this;
    probe.pos_ += 5;
    return probe.peek_keyword("in");
  }

  void consume_floor() {
    expect_keyword("floor");
  }

  [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }
  [[noreturn]] void fail(const std::string& message, std::size_t at) {
    throw ParseError(ParseErrorKind::MalformedToken, message, base_ + at + 1);
  }

 private:
  std::string_view s_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

Action parse_token(std::string_view line, std::size_t open, std::size_t close) {
  // Brackets and parentheses must balance, with no nesting of either.
  int paren = 0;
  for (std::size_t i = open + 1; i < close; ++i) {
    const char c = line[i];
    auto bad = [&](const char* why) {
      throw ParseError(ParseErrorKind::MalformedToken, why, i + 1);
    };
    if (c == '<' || c == '>') bad("stray angle bracket inside token");
    if (c == '[' || c == ']' || c == '{' || c == '}') bad("brackets are not allowed in tokens");
    if (c == '(') {
      if (++paren > 1) bad("nested parenthesis");
    } else if (c == ')') {
      if (--paren < 0) bad("unbalanced ')'");
    }
  }
  if (paren != 0) {
    throw ParseError(ParseErrorKind::MalformedToken, "unbalanced '('", close + 1);
  }

  TokenCursor cur(line.substr(open + 1, close - open - 1), open + 1);
  Action result;
  if (cur.peek_keyword("GO")) {
    cur.expect_keyword("GO");
    cur.expect_keyword("TO");
    if (cur.peek_keyword("NEW")) {
      cur.expect_keyword("NEW");
      cur.expect_keyword("ROOM");
      result = GoToNewRoom{};
    } else {
      result = GoToRoom{cur.room_clause("ROOM")};
    }
  } else if (cur.peek_keyword("PICK")) {
    cur.expect_keyword("PICK");
    cur.expect_keyword("UP");
    PickUp a;
    a.object = cur.object_slot();
    cur.expect_keyword("from");
    a.origin_room = cur.room_clause("room");
    cur.expect_keyword("in");
    a.current_room = cur.room_clause("room");
    result = a;
  } else if (cur.peek_keyword("PUT")) {
    cur.expect_keyword("PUT");
    cur.expect_keyword("DOWN");
    PutDown a;
    a.object = cur.object_slot();
    cur.expect_keyword("from");
    a.origin_room = cur.room_clause("room");
    cur.expect_keyword("on");
    if (cur.floor_follows()) {
      cur.consume_floor();
      a.target = Support::floor();
    } else {
      a.target = Support::on(cur.object_slot());
    }
    cur.expect_keyword("in");
    a.room = cur.room_clause("room");
    result = a;
  } else {
    cur.fail("unknown action keyword");
  }
  if (!cur.at_end()) cur.fail("trailing text in token");
  return result;
}

}  // namespace

Action parse_step(std::string_view line) {
  std::size_t first = 0;
  while (first < line.size() && is_space(line[first])) ++first;
  if (first == line.size() || line[first] != '<') return Thought{std::string(line)};

  std::size_t last = line.size();
  while (last > first && is_space(line[last - 1])) --last;
  if (line[last - 1] != '>' || last - 1 == first) {
    throw ParseError(ParseErrorKind::MalformedToken, "token is not closed by '>'", last);
  }
  return parse_token(line, first, last - 1);
}

namespace {

struct Serializer {
  std::string operator()(const GoToRoom& a) const {
    return "<GO TO ROOM(" + std::to_string(a.room) + ")>";
  }
  std::string operator()(const GoToNewRoom&) const { return "<GO TO NEW ROOM>"; }
  std::string operator()(const PickUp& a) const {
    return "<PICK UP " + a.object.str() + " from room(" + std::to_string(a.origin_room) +
           ") in room(" + std::to_string(a.current_room) + ")>";
  }
  std::string operator()(const PutDown& a) const {
    return "<PUT DOWN " + a.object.str() + " from room(" + std::to_string(a.origin_room) +
           ") on " + a.target.str() + " in room(" + std::to_string(a.room) + ")>";
  }
  std::string operator()(const Thought& a) const { return a.text; }
};

}  // namespace

std::string serialize_step(const Action& action) { return std::visit(Serializer{}, action); }

bool is_interaction(const Action& action) {
  return std::holds_alternative<PickUp>(action) || std::holds_alternative<PutDown>(action);
}

}  // namespace memsim
