#include "dpass/parse.hpp"

#include <cctype>
#include <vector>

#include "dpass/error.hpp"
#include "dpass/jet.hpp"

namespace dpass {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& context) : text_(text), ctx_(context) {}

  Expr parse_all() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr e = term();
    while (true) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      if (accept('*')) {
        e *= unary();
      } else if (peek('/')) {
        std::size_t at = pos_++;
        Expr d = unary();
        if (d.is_zero_literal()) throw ParseError("division by zero", at);
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!peek('^')) return base;
    std::size_t at = pos_++;
    Expr exponent = unary();
    auto q = exponent.as_rational();
    if (!q || q->get_den() != 1 || !q->get_num().fits_sint_p()) {
      throw ParseError("exponent must be an integer constant", at);
    }
    int k = static_cast<int>(q->get_num().get_si());
    if (k < 0 && base.is_zero_literal()) throw ParseError("division by zero", at);
    return pow(base, k);
  }

  std::vector<unsigned> index_list() {
    expect('[');
    std::vector<unsigned> out;
    if (accept(']')) return out;
    do {
      out.push_back(static_cast<unsigned>(integer()));
    } while (accept(','));
    expect(']');
    return out;
  }

  unsigned long integer() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string frac(text_.substr(frac_start, pos_ - frac_start));
      if (digits.empty() && frac.empty()) fail("expected a number");
      std::string all = digits + frac;
      mpz_class num(all.empty() ? "0" : all, 10);
      mpz_class den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      Rational q(num, den);
      q.canonicalize();
      return Expr(q);
    }
    return Expr(Rational(mpz_class(digits, 10)));
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr jet_with_order(std::size_t unknown, std::size_t at) {
    std::vector<unsigned> orders = index_list();
    if (orders.size() != ctx_.independents) {
      throw ParseError("jet coordinate needs " + std::to_string(ctx_.independents) + " orders", at);
    }
    return Expr::jet(unknown, MultiIndex(std::move(orders)));
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("unexpected '" + std::string(1, c) + "'");
    std::size_t at = pos_;
    std::string name = identifier();

    for (std::size_t i = 0; i < ctx_.unknowns; ++i) {
      if (name != ctx_.naming.unknown(i)) continue;
      if (peek('[')) return jet_with_order(i, at);
      return Expr::jet(i, MultiIndex(ctx_.independents));
    }
    if (name == "u" && peek('{')) {
      expect('{');
      unsigned long k = integer();
      expect('}');
      if (k == 0 || k > ctx_.unknowns) throw ParseError("unknown index out of range", at);
      return jet_with_order(k - 1, at);
    }
    for (std::size_t k = 0; k < ctx_.independents; ++k) {
      if (name == ctx_.naming.independent(k)) return Expr::independent(k);
    }
    if (ctx_.constants.contains(name)) return Expr::constant(name);
    if (auto it = ctx_.definitions.find(name); it != ctx_.definitions.end()) return it->second;

    if (name == "sinh" || name == "cosh" || name == "tanh" || name == "exp" || name == "log") {
      expect('(');
      Expr arg = expression();
      expect(')');
      if (name == "sinh") return sinh(arg);
      if (name == "cosh") return cosh(arg);
      if (name == "tanh") return tanh(arg);
      if (name == "exp") return exp(arg);
      if (arg.is_zero_literal()) throw ParseError("log of zero", at);
      return log(arg);
    }
    if (name == "D" && peek('[')) {
      std::vector<unsigned> orders = index_list();
      if (orders.size() != ctx_.independents) throw ParseError("derivative multi-index has wrong length", at);
      expect('(');
      Expr arg = expression();
      expect(')');
      return apply_power(arg, MultiIndex(std::move(orders)));
    }
    if (name.size() > 1 && name[0] == 'D' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
      std::size_t axis = std::stoul(name.substr(1));
      if (axis == 0 || axis > ctx_.independents) throw ParseError("derivative axis out of range", at);
      expect('(');
      Expr arg = expression();
      expect(')');
      return total_derivative(arg, axis - 1);
    }
    throw ParseError("unknown identifier '" + name + "'", at);
  }

  std::string_view text_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseContext& context) {
  Parser p(text, context);
  return p.parse_all();
}

}  // namespace dpass
