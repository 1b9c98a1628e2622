#include "dmod/opdsl.hpp"

#include <cctype>

namespace dmod {

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.value != b.value || a.exponent != b.exponent ||
      a.negated != b.negated || a.items.size() != b.items.size())
    return false;
  for (size_t i = 0; i < a.items.size(); ++i)
    if (!(*a.items[i] == *b.items[i])) return false;
  return true;
}

namespace {

bool is_generator(const std::string& s) { return s == "X" || s == "D" || s == "A" || s == "ADAG" || s == "G"; }

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("syntax error at byte " + std::to_string(pos_) + ": " + what);
  }

  // Whitespace and '#' comments running to the end of the line.
  void skip() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    auto sum = std::make_shared<Expr>();
    sum->kind = Expr::Kind::Sum;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    sum->items.push_back(term());
    sum->negated.push_back(neg);
    for (;;) {
      if (accept('+'))
        neg = false;
      else if (accept('-'))
        neg = true;
      else
        break;
      sum->items.push_back(term());
      sum->negated.push_back(neg);
    }
    if (sum->items.size() == 1 && !sum->negated[0]) return sum->items[0];
    return sum;
  }

  ExprPtr term() {
    auto prod = std::make_shared<Expr>();
    prod->kind = Expr::Kind::Product;
    prod->items.push_back(factor());
    while (accept('*')) prod->items.push_back(factor());
    if (prod->items.size() == 1) return prod->items[0];
    return prod;
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (!accept('^')) return base;
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer exponent");
    auto p = std::make_shared<Expr>();
    p->kind = Expr::Kind::Power;
    p->exponent = static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
    p->items.push_back(base);
    return p;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    auto e = std::make_shared<Expr>();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        size_t den = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (den == pos_) fail("expected a denominator");
      }
      e->kind = Expr::Kind::Number;
      e->value = parse_rational(s_.substr(start, pos_ - start));
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      e->name = s_.substr(start, pos_ - start);
      e->kind = is_generator(e->name) ? Expr::Kind::Generator : Expr::Kind::Identifier;
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

bool composite(const Expr& e) { return e.kind == Expr::Kind::Sum || e.kind == Expr::Kind::Product; }

std::string wrap(const Expr& e) { return "(" + print_expr(e) + ")"; }

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return to_string(e.value);
    case Expr::Kind::Generator:
    case Expr::Kind::Identifier:
      return e.name;
    case Expr::Kind::Power: {
      const Expr& base = *e.items[0];
      std::string b = (composite(base) || base.kind == Expr::Kind::Power) ? wrap(base) : print_expr(base);
      return b + "^" + std::to_string(e.exponent);
    }
    case Expr::Kind::Product: {
      std::string out;
      for (size_t i = 0; i < e.items.size(); ++i) {
        if (i) out += "*";
        out += composite(*e.items[i]) ? wrap(*e.items[i]) : print_expr(*e.items[i]);
      }
      return out;
    }
    case Expr::Kind::Sum: {
      std::string out;
      for (size_t i = 0; i < e.items.size(); ++i) {
        const Expr& t = *e.items[i];
        std::string body = t.kind == Expr::Kind::Sum ? wrap(t) : print_expr(t);
        if (i == 0)
          out = (e.negated[i] ? "-" : "") + body;
        else
          out += (e.negated[i] ? " - " : " + ") + body;
      }
      return out;
    }
  }
  return "";
}

QWeyl lower_expr(const Expr& e, const Bindings& bindings) {
  const GeneratorPair pair = xd_pair();
  switch (e.kind) {
    case Expr::Kind::Number:
      return QWeyl::scalar(e.value, pair);
    case Expr::Kind::Identifier: {
      auto it = bindings.find(e.name);
      if (it == bindings.end()) throw Error("unbound identifier '" + e.name + "'");
      return QWeyl::scalar(it->second, pair);
    }
    case Expr::Kind::Generator: {
      const QWeyl X = QWeyl::raise(pair), D = QWeyl::lower(pair);
      if (e.name == "X") return X;
      if (e.name == "D") return D;
      if (e.name == "A") return D + X;
      if (e.name == "ADAG") return D - X;
      return QWeyl::term(1, 1, 1, pair);
    }
    case Expr::Kind::Power:
      return pow(lower_expr(*e.items[0], bindings), e.exponent);
    case Expr::Kind::Product: {
      QWeyl out = QWeyl::scalar(1, pair);
      for (const auto& f : e.items) out = weyl_mul(out, lower_expr(*f, bindings));
      return out;
    }
    case Expr::Kind::Sum: {
      QWeyl out(pair);
      for (size_t i = 0; i < e.items.size(); ++i) {
        QWeyl t = lower_expr(*e.items[i], bindings);
        if (e.negated[i])
          out -= t;
        else
          out += t;
      }
      return out;
    }
  }
  throw Error("unknown expression kind");
}

QWeyl parse_operator(const std::string& text, const Bindings& bindings) {
  return lower_expr(*parse_expr(text), bindings);
}

Bindings parse_bindings(const std::string& text) {
  Bindings out;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    start = end + 1;
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw Error("binding '" + item + "' must look like name=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    out[trim(item.substr(0, eq))] = parse_rational(trim(item.substr(eq + 1)));
  }
  return out;
}

}  // namespace dmod
