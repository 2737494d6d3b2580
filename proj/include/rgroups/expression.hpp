#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/rational.hpp"

// Sums of monomials c * ell^p * log(ell)^q * loglog(ell)^r with rational c, p,
// q, r. Logs are base 2m-1. The representation is canonical: terms with equal
// exponents are merged and zero coefficients dropped.

namespace rgroups {

struct Exponents {
  Rational ell = 0;
  Rational log = 0;
  Rational loglog = 0;

  /// Lexicographic order is asymptotic dominance as ell -> infinity.
  friend bool operator<(const Exponents& a, const Exponents& b) {
    return std::tie(a.ell, a.log, a.loglog) < std::tie(b.ell, b.log, b.loglog);
  }
  friend bool operator==(const Exponents& a, const Exponents& b) {
    return a.ell == b.ell && a.log == b.log && a.loglog == b.loglog;
  }
  bool is_constant() const { return ell == 0 && log == 0 && loglog == 0; }
};

struct Monomial {
  Rational coeff;
  Exponents exp;
};

class LogPowerExpr {
 public:
  LogPowerExpr() = default;
  LogPowerExpr(const Rational& c) { add(c, {}); }

  static LogPowerExpr monomial(const Rational& c, const Rational& p, const Rational& q = 0, const Rational& r = 0) {
    LogPowerExpr e;
    e.add(c, {p, q, r});
    return e;
  }
  static LogPowerExpr ell() { return monomial(1, 1); }
  static LogPowerExpr log() { return monomial(1, 0, 1); }
  static LogPowerExpr loglog() { return monomial(1, 0, 0, 1); }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Terms from dominant to negligible.
  std::vector<Monomial> terms() const {
    std::vector<Monomial> out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) out.push_back({it->second, it->first});
    return out;
  }
  Monomial leading() const {
    if (terms_.empty()) throw DomainError("the zero expression has no leading term");
    return {terms_.rbegin()->second, terms_.rbegin()->first};
  }

  friend LogPowerExpr operator+(LogPowerExpr a, const LogPowerExpr& b) {
    for (const auto& [e, c] : b.terms_) a.add(c, e);
    return a;
  }
  friend LogPowerExpr operator-(const LogPowerExpr& a) {
    LogPowerExpr out;
    for (const auto& [e, c] : a.terms_) out.add(-c, e);
    return out;
  }
  friend LogPowerExpr operator-(const LogPowerExpr& a, const LogPowerExpr& b) { return a + (-b); }
  friend LogPowerExpr operator*(const LogPowerExpr& a, const LogPowerExpr& b) {
    LogPowerExpr out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) out.add(ca * cb, {ea.ell + eb.ell, ea.log + eb.log, ea.loglog + eb.loglog});
    }
    return out;
  }
  /// Division is only defined by a single nonzero monomial.
  friend LogPowerExpr operator/(const LogPowerExpr& a, const LogPowerExpr& b) {
    if (b.size() != 1) throw ParseError("can only divide by a single monomial");
    const Monomial d = b.leading();
    return a * monomial(1 / d.coeff, -d.exp.ell, -d.exp.log, -d.exp.loglog);
  }
  /// Integer power of a monomial or any power of a single monomial.
  LogPowerExpr pow(const Rational& p) const {
    if (size() != 1) throw ParseError("exponents apply to single monomials only");
    const Monomial m = leading();
    if (boost::multiprecision::denominator(p) != 1 && m.coeff <= 0) {
      throw ParseError("fractional power of a nonpositive coefficient");
    }
    Rational c = 1;
    if (boost::multiprecision::denominator(p) == 1) {
      c = pow_rational(m.coeff, static_cast<int>(boost::multiprecision::numerator(p)));
    } else if (m.coeff != 1) {
      throw ParseError("fractional power needs coefficient 1");
    }
    return monomial(c, m.exp.ell * p, m.exp.log * p, m.exp.loglog * p);
  }

  friend bool operator==(const LogPowerExpr& a, const LogPowerExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    return std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                      [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
  }

  /// Numeric value at ell with logs base 2m-1.
  long double eval(long double ell_value, int m = 2) const {
    const long double base = std::log(static_cast<long double>(2 * m - 1));
    const long double lg = std::log(ell_value) / base;
    const long double llg = std::log(lg) / base;
    long double sum = 0;
    for (const auto& [e, c] : terms_) {
      long double t = to_long_double(c);
      if (e.ell != 0) t *= std::pow(ell_value, to_long_double(e.ell));
      if (e.log != 0) t *= std::pow(lg, to_long_double(e.log));
      if (e.loglog != 0) t *= std::pow(llg, to_long_double(e.loglog));
      sum += t;
    }
    return sum;
  }

  std::string str() const;

 private:
  void add(const Rational& c, const Exponents& e) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted && (it->second += c) == 0) terms_.erase(it);
  }
  std::map<Exponents, Rational> terms_;
};

namespace detail {

inline std::string power_suffix(const Rational& p) {
  if (p == 1) return "";
  const std::string s = to_string(p);
  return s.find('/') != std::string::npos || p < 0 ? "^(" + s + ")" : "^" + s;
}

}  // namespace detail

/// Dominant term first, e.g. "1/2*log - loglog" or "100000*ell^(-1/3)*log^(1/3)".
inline std::string LogPowerExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms()) {
    Rational c = t.coeff;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (c < 0) c = -c;
    std::vector<std::string> factors;
    if (c != 1 || t.exp.is_constant()) factors.push_back(to_string(c));
    if (t.exp.ell != 0) factors.push_back("ell" + detail::power_suffix(t.exp.ell));
    if (t.exp.log != 0) factors.push_back("log" + detail::power_suffix(t.exp.log));
    if (t.exp.loglog != 0) factors.push_back("loglog" + detail::power_suffix(t.exp.loglog));
    for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? "*" : "") + factors[i];
  }
  return out;
}

/// Named functions accepted wherever an expression is.
inline LogPowerExpr trivial_threshold() { return LogPowerExpr::monomial(Rational(1, 4), -1, 1) - LogPowerExpr::monomial(1, -1, 0, 1); }
inline LogPowerExpr hyperbolic_threshold() { return LogPowerExpr::monomial(100000, Rational(-1, 3), Rational(1, 3)); }
inline LogPowerExpr corollary_k() { return LogPowerExpr::monomial(Rational(1, 2), 0, 1) - LogPowerExpr::loglog(); }
inline LogPowerExpr hyperbolic_K(const Rational& c_prime = 1) { return LogPowerExpr::monomial(c_prime, Rational(1, 3), Rational(-1, 3)); }
inline LogPowerExpr delta_K() { return LogPowerExpr::monomial(1, Rational(1, 3), Rational(-2, 3)); }

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  LogPowerExpr parse() {
    LogPowerExpr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("expression '" + std::string(text_) + "': " + why + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  LogPowerExpr expr() {
    LogPowerExpr e;
    bool negate = false;
    skip();
    if (eat('-')) negate = true;
    else eat('+');
    e = negate ? -term() : term();
    while (true) {
      if (eat('+')) e = e + term();
      else if (eat('-')) e = e - term();
      else return e;
    }
  }

  LogPowerExpr term() {
    LogPowerExpr e = power();
    while (true) {
      if (eat('*')) e = e * power();
      else if (eat('/')) e = e / power();
      else return e;
    }
  }

  LogPowerExpr power() {
    LogPowerExpr base = atom();
    if (!eat('^')) return base;
    return base.pow(exponent());
  }

  Rational exponent() {
    skip();
    if (eat('(')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ')') ++pos_;
      if (pos_ == text_.size()) fail("missing ')'");
      const Rational r = parse_rational(trim(text_.substr(start, pos_ - start)));
      ++pos_;
      return r;
    }
    return number();
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  Rational number() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool exp_sign = (c == '-' || c == '+') && pos_ > start && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || exp_sign)) break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a number");
    return parse_rational(text_.substr(start, pos_ - start));
  }

  LogPowerExpr atom() {
    skip();
    if (eat('(')) {
      LogPowerExpr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      return LogPowerExpr(number());
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word == "ell" || word == "l") return LogPowerExpr::ell();
    if (word == "log") return LogPowerExpr::log();
    if (word == "loglog") return LogPowerExpr::loglog();
    pos_ = start;
    fail(word.empty() ? "expected a term" : "unknown name '" + std::string(word) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression such as "1/2*log - loglog", "1e5*ell^(-1/3)*log^(1/3)",
/// "log/(4*ell) - loglog/ell", or one of the keywords trivial-threshold,
/// hyperbolic-threshold, corollary-k, hyperbolic-K, delta-K, zero.
inline LogPowerExpr parse_expression(std::string_view text) {
  if (text == "trivial-threshold") return trivial_threshold();
  if (text == "hyperbolic-threshold") return hyperbolic_threshold();
  if (text == "corollary-k") return corollary_k();
  if (text == "hyperbolic-K") return hyperbolic_K();
  if (text == "delta-K") return delta_K();
  if (text == "zero") return {};
  return detail::ExprParser(text).parse();
}

/// Rate functions restricted to c0 * log^beta / ell^alpha or the two named
/// threshold keywords.
inline LogPowerExpr parse_rate_function(std::string_view text) {
  if (text == "trivial-threshold" || text == "hyperbolic-threshold") return parse_expression(text);
  LogPowerExpr e = parse_expression(text);
  if (e.size() > 1 || (!e.is_zero() && e.leading().exp.loglog != 0)) {
    throw ParseError("rate function must be c0*log^beta/ell^alpha or a named threshold, got '" + std::string(text) + "'");
  }
  return e;
}

}  // namespace rgroups
