#include "cy/dsl.hpp"

#include <cctype>
#include <optional>

namespace cy {

namespace {

// Affine expression sum_j a_j z_j + re + im * period.
struct Lin {
  std::vector<Rat> z;
  Rat re = 0, im = 0;
  std::optional<std::string> period;

  bool constant_real() const {
    if (im != 0)
      return false;
    for (const auto& c : z)
      if (c != 0)
        return false;
    return true;
  }
};

struct Token {
  enum Kind { Number, Ident, Op, End } kind = End;
  std::string text;
  std::size_t col = 0;
};

// Identifiers: z1 ... zn, tau with optional prime or index, and the UTF-8 letter τ.
class Lexer {
public:
  Lexer(const std::string& s, std::size_t base) : s_(s), base_(base) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
        ++i_;
      Token t;
      t.col = base_ + i_ + 1;
      if (i_ == s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Token::Number;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
          t.text += s_[i_++];
      } else if (std::isalpha(static_cast<unsigned char>(c)) || s_.compare(i_, 2, "τ") == 0) {
        t.kind = Token::Ident;
        t.text = identifier();
      } else if (std::string("+-*/(),").find(c) != std::string::npos) {
        t.kind = Token::Op;
        t.text = std::string(1, c);
        ++i_;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", t.col);
      }
      out.push_back(t);
    }
  }

private:
  const std::string& s_;
  std::size_t base_;
  std::size_t i_ = 0;

  std::string identifier() {
    std::string name;
    if (s_.compare(i_, 2, "τ") == 0) {
      name = "τ";
      i_ += 2;
    } else {
      while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_])))
        name += s_[i_++];
      if (name == "tau")
        name = "τ";
    }
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
      name += s_[i_++];
    if (i_ < s_.size() && s_[i_] == '\'') {
      name += "'";
      ++i_;
    } else if (s_.compare(i_, 3, "′") == 0) {
      name += "'";
      i_ += 3;
    }
    return name;
  }
};

class Parser {
public:
  Parser(std::vector<Token> toks, std::size_t n) : t_(std::move(toks)), n_(n) {}

  Lin expression() {
    Lin out = zero();
    bool first = true;
    while (true) {
      int sign = 1;
      if (peek("+") || peek("-")) {
        sign = peek("-") ? -1 : 1;
        ++p_;
      } else if (!first) {
        return out;
      }
      Lin t = term();
      out = add(out, t, sign);
      first = false;
    }
  }

  const Token& current() const { return t_[p_]; }
  bool peek(const std::string& op) const { return t_[p_].kind == Token::Op && t_[p_].text == op; }
  void expect(const std::string& op) {
    if (!peek(op))
      throw ParseError("expected '" + op + "'", t_[p_].col);
    ++p_;
  }
  bool at_end() const { return t_[p_].kind == Token::End; }

private:
  std::vector<Token> t_;
  std::size_t n_;
  std::size_t p_ = 0;

  Lin zero() const {
    Lin l;
    l.z.assign(n_, Rat(0));
    return l;
  }

  Lin add(const Lin& a, const Lin& b, int sign) const {
    Lin out = a;
    for (std::size_t j = 0; j < n_; ++j)
      out.z[j] += sign * b.z[j];
    out.re += sign * b.re;
    out.im += sign * b.im;
    out.period = merge(a.period, b.period);
    return out;
  }

  std::optional<std::string> merge(const std::optional<std::string>& a, const std::optional<std::string>& b) const {
    if (a && b && *a != *b)
      throw ParseError("periods " + *a + " and " + *b + " in one component", t_[p_].col);
    return a ? a : b;
  }

  Lin scale(const Lin& a, const Rat& c) const {
    Lin out = a;
    for (auto& x : out.z)
      x *= c;
    out.re *= c;
    out.im *= c;
    return out;
  }

  bool starts_factor() const {
    const Token& t = t_[p_];
    return t.kind == Token::Number || t.kind == Token::Ident || (t.kind == Token::Op && t.text == "(");
  }

  Lin term() {
    Lin out = factor();
    while (true) {
      std::size_t col = t_[p_].col;
      if (peek("*") || (starts_factor() && !peek("("))) {
        if (peek("*"))
          ++p_;
        Lin rhs = factor();
        if (out.constant_real())
          out = scale(rhs, out.re);
        else if (rhs.constant_real())
          out = scale(out, rhs.re);
        else
          throw ParseError("product of two non-constant terms", col);
      } else if (peek("(")) {
        Lin rhs = factor();
        if (!out.constant_real())
          throw ParseError("product of two non-constant terms", col);
        out = scale(rhs, out.re);
      } else if (peek("/")) {
        ++p_;
        Lin rhs = factor();
        if (!rhs.constant_real() || rhs.re == 0)
          throw ParseError("division by a non-constant or zero", col);
        out = scale(out, 1 / rhs.re);
      } else {
        return out;
      }
    }
  }

  Lin factor() {
    const Token& t = t_[p_];
    Lin out = zero();
    if (t.kind == Token::Number) {
      out.re = Rat(Int(t.text));
      ++p_;
      return out;
    }
    if (t.kind == Token::Ident) {
      ++p_;
      if (t.text.size() >= 2 && t.text[0] == 'z' && std::isdigit(static_cast<unsigned char>(t.text[1]))) {
        std::size_t j = std::stoul(t.text.substr(1));
        if (j == 0 || j > n_ || t.text.back() == '\'')
          throw ParseError("unknown variable " + t.text, t.col);
        out.z[j - 1] = 1;
        return out;
      }
      if (t.text.rfind("τ", 0) == 0) {
        out.im = 1;
        out.period = t.text;
        return out;
      }
      throw ParseError("unknown identifier " + t.text, t.col);
    }
    if (peek("(")) {
      ++p_;
      Lin inner = expression();
      expect(")");
      return inner;
    }
    throw ParseError(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.col);
  }
};

std::string trim_copy(const std::string& s, std::size_t& offset) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  offset += b;
  return s.substr(b, e - b);
}

AffineTorusMap parse_map_at(const TorusShape& shape, const std::string& text, std::size_t base) {
  std::size_t n = shape.complex_dim();
  Parser p(Lexer(text, base).run(), n);
  std::size_t open_col = p.current().col;
  p.expect("(");
  IntMat c(n, n);
  RatVec t(2 * n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0)
      p.expect(",");
    std::size_t col = p.current().col;
    Lin l = p.expression();
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_integral(l.z[j]))
        throw ParseError("non-integral coefficient of z" + std::to_string(j + 1), col);
      c(i, j) = l.z[j].get_num();
    }
    if (l.im != 0 && l.period && *l.period != shape.tags[i])
      throw ParseError("period " + *l.period + " does not belong to factor " + std::to_string(i + 1) + " (" +
                           shape.tags[i] + ")",
                       col);
    t[2 * i] = l.re;
    t[2 * i + 1] = l.im;
  }
  p.expect(")");
  if (!p.at_end())
    throw ParseError("trailing input", p.current().col);
  try {
    return AffineTorusMap(shape, c, t);
  } catch (const std::exception& e) {
    throw ParseError(e.what(), open_col);
  }
}

NamedMap parse_named_at(const TorusShape& shape, const std::string& text, std::size_t base) {
  NamedMap out;
  std::string body = text;
  std::size_t colon = text.find(':');
  if (colon != std::string::npos) {
    std::size_t off = base;
    out.name = trim_copy(text.substr(0, colon), off);
    if (out.name.empty())
      throw ParseError("empty map name", base + colon + 1);
    for (char ch : out.name)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '\'')
        throw ParseError("invalid map name " + out.name, off + 1);
    body = text.substr(colon + 1);
    base += colon + 1;
  }
  out.map = parse_map_at(shape, body, base);
  return out;
}

}  // namespace

AffineTorusMap parse_map(const TorusShape& shape, const std::string& text) {
  return parse_named_at(shape, text, 0).map;
}

NamedMap parse_named_map(const TorusShape& shape, const std::string& text) { return parse_named_at(shape, text, 0); }

std::vector<NamedMap> parse_map_list(const TorusShape& shape, const std::string& text) {
  std::vector<NamedMap> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos)
      end = text.size();
    std::string piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t") != std::string::npos)
      out.push_back(parse_named_at(shape, piece, start));
    start = end + 1;
  }
  return out;
}

FactorValue parse_factor_value(const std::string& text, const std::string& tag) {
  Parser p(Lexer(text, 0).run(), 0);
  std::size_t col = p.current().col;
  Lin l = p.expression();
  if (!p.at_end())
    throw ParseError("trailing input", p.current().col);
  if (l.im != 0 && l.period && *l.period != tag)
    throw ParseError("period " + *l.period + " does not match " + tag, col);
  return {l.re, l.im};
}

}  // namespace cy
