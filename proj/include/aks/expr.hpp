#pragma once

// Arithmetic expressions over named parameters, used for parametrized
// structure constants: + - * / ^, parentheses, sqrt, abs, sign, log.

#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace aks {

class ExprError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using ParamMap = std::map<std::string, double>;

namespace detail {

class ExprParser {
public:
  ExprParser(const std::string& src, const ParamMap& vars) : s_(src), vars_(vars) {}

  double run() {
    const double v = sum();
    skip();
    if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExprError(what + " at position " + std::to_string(p_) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }

  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  // Right associative; the exponent may carry its own sign.
  double power() {
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }

  double atom() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end of expression");
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    const char c = s_[p_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = p_;
      while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
      const std::string name = s_.substr(start, p_ - start);
      if (eat('(')) {
        const double arg = sum();
        if (!eat(')')) fail("expected ')' after argument of " + name);
        return call(name, arg);
      }
      const auto it = vars_.find(name);
      if (it == vars_.end()) fail("unknown identifier '" + name + "'");
      return it->second;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  double number() {
    const char* begin = s_.c_str() + p_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    p_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  double call(const std::string& name, double arg) {
    if (name == "sqrt") {
      if (arg < 0.0) fail("sqrt of negative value");
      return std::sqrt(arg);
    }
    if (name == "log") {
      if (arg <= 0.0) fail("log of non-positive value");
      return std::log(arg);
    }
    if (name == "abs") return std::abs(arg);
    if (name == "sign") return arg > 0.0 ? 1.0 : (arg < 0.0 ? -1.0 : 0.0);
    fail("unknown function '" + name + "'");
  }

  const std::string& s_;
  const ParamMap& vars_;
  std::size_t p_ = 0;
};

} // namespace detail

inline double eval_expr(const std::string& src, const ParamMap& vars = {}) {
  return detail::ExprParser(src, vars).run();
}

} // namespace aks
