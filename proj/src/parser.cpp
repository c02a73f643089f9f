#include "wps/parser.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

#include "wps/ring.hpp"

namespace wps {

namespace {

class ExprParser {
public:
  ExprParser(RingPtr ring, const std::string& s)
      : ring_(std::move(ring)), s_(s) {}

  SuperPoly run() {
    SuperPoly p = expr();
    ws();
    if (p_ != s_.size()) fail("trailing input");
    return p;
  }

private:
  RingPtr ring_;
  const std::string& s_;
  size_t p_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse error at offset " + std::to_string(p_) +
                                ": " + what);
  }
  void ws() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_])))
      ++p_;
  }
  char peek() {
    ws();
    return p_ < s_.size() ? s_[p_] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++p_;
      return true;
    }
    return false;
  }

  SuperPoly expr() {
    bool neg = eat('-');
    if (!neg) eat('+');
    SuperPoly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        break;
    }
    return acc;
  }

  SuperPoly term() {
    SuperPoly acc = factor();
    for (;;) {
      if (eat('*')) {
        acc *= factor();
        continue;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
          c == '(' || std::isdigit(static_cast<unsigned char>(c))) {
        acc *= factor();
        continue;
      }
      break;
    }
    return acc;
  }

  SuperPoly factor() {
    SuperPoly b = base();
    if (eat('^')) return b.pow(signedInt());
    return b;
  }

  SuperPoly base() {
    char c = peek();
    if (c == '(') {
      ++p_;
      SuperPoly e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = ident();
      if (!ring_->hasGen(name)) fail("unknown generator '" + name + "'");
      return SuperPoly::gen(ring_, name);
    }
    fail("expected a factor");
  }

  SuperPoly number() {
    Int num = digits();
    Rat r(num);
    size_t save = p_;
    if (eat('/')) {
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        r = Rat(num, digits());
      } else {
        p_ = save; // '/' was not part of a rational literal
      }
    }
    return SuperPoly::constant(ring_, r);
  }

  Int digits() {
    ws();
    size_t start = p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_])))
      ++p_;
    if (p_ == start) fail("expected digits");
    return Int(s_.substr(start, p_ - start));
  }

  long signedInt() {
    bool neg = eat('-');
    Int d = digits();
    long v = d.convert_to<long>();
    return neg ? -v : v;
  }

  std::string ident() {
    ws();
    size_t start = p_;
    while (p_ < s_.size()) {
      unsigned char c = static_cast<unsigned char>(s_[p_]);
      if (std::isalnum(c) || c == '_')
        ++p_;
      else
        break;
    }
    return s_.substr(start, p_ - start);
  }
};

} // namespace

SuperPoly parseExpr(const RingPtr& ring, const std::string& expr) {
  return ExprParser(ring, expr).run();
}

SuperPoly parseFixture(const std::string& text) {
  std::string body = text;
  std::vector<std::string> oddNames;
  size_t firstNonWs = body.find_first_not_of(" \t\r\n");
  if (firstNonWs != std::string::npos &&
      body.compare(firstNonWs, 4, "odd:") == 0) {
    size_t eol = body.find('\n', firstNonWs);
    std::string header = body.substr(firstNonWs + 4,
                                     (eol == std::string::npos ? body.size()
                                                               : eol) -
                                         firstNonWs - 4);
    body = (eol == std::string::npos) ? std::string() : body.substr(eol + 1);
    std::string cur;
    for (char c : header + " ") {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) oddNames.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }

  // Remaining identifiers become Laurent even variables in order of first use.
  std::vector<std::string> evenNames;
  for (size_t i = 0; i < body.size();) {
    unsigned char c = static_cast<unsigned char>(body[i]);
    if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < body.size() &&
             (std::isalnum(static_cast<unsigned char>(body[j])) ||
              body[j] == '_'))
        ++j;
      std::string name = body.substr(i, j - i);
      bool known = false;
      for (auto& n : oddNames) known = known || n == name;
      for (auto& n : evenNames) known = known || n == name;
      if (!known) evenNames.push_back(name);
      i = j;
    } else {
      ++i;
    }
  }

  RingBuilder b;
  for (auto& n : evenNames) b.even(n, /*laurent=*/true);
  for (auto& n : oddNames) b.odd(n);
  b.endGeometric();
  return parseExpr(b.build(), body);
}

} // namespace wps
