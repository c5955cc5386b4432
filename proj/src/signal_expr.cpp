#include "idrem/signal_expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "idrem/types.hpp"

namespace idrem {

Signal Signal::constant(double c) {
  Signal s;
  s.kind_ = Kind::Constant;
  s.a_ = c;
  return s;
}

Signal Signal::sine(double amplitude, double rate, double phase) {
  Signal s;
  s.kind_ = Kind::Sine;
  s.a_ = amplitude;
  s.b_ = rate;
  s.c_ = phase;
  return s;
}

Signal Signal::cosine(double amplitude, double rate, double phase) {
  Signal s = sine(amplitude, rate, phase);
  s.kind_ = Kind::Cosine;
  return s;
}

Signal Signal::sum(std::vector<Signal> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return std::move(terms.front());
  Signal s;
  s.kind_ = Kind::Sum;
  s.children_ = std::move(terms);
  return s;
}

Signal Signal::piecewise(double t_switch, Signal before, Signal after) {
  Signal s;
  s.kind_ = Kind::Piecewise;
  s.a_ = t_switch;
  s.children_ = {std::move(before), std::move(after)};
  return s;
}

Signal Signal::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw ConfigError("table(): needs at least one point");
  if (!std::is_sorted(points.begin(), points.end(),
                      [](const auto& l, const auto& r) { return l.first < r.first; })) {
    throw ConfigError("table(): times must be increasing");
  }
  Signal s;
  s.kind_ = Kind::Table;
  s.points_ = std::move(points);
  return s;
}

Signal::Value Signal::eval(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return {a_, 0.0, 0.0};
    case Kind::Sine: {
      const double arg = b_ * t + c_;
      const double sn = std::sin(arg), cs = std::cos(arg);
      return {a_ * sn, a_ * b_ * cs, -a_ * b_ * b_ * sn};
    }
    case Kind::Cosine: {
      const double arg = b_ * t + c_;
      const double sn = std::sin(arg), cs = std::cos(arg);
      return {a_ * cs, -a_ * b_ * sn, -a_ * b_ * b_ * cs};
    }
    case Kind::Sum: {
      Value v;
      for (const auto& c : children_) {
        const Value cv = c.eval(t);
        v.f += cv.f;
        v.df += cv.df;
        v.ddf += cv.ddf;
      }
      return v;
    }
    case Kind::Piecewise:
      return t < a_ ? children_[0].eval(t) : children_[1].eval(t);
    case Kind::Table: {
      auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                 [](double x, const auto& p) { return x < p.first; });
      if (it == points_.begin()) return {points_.front().second, 0.0, 0.0};
      return {std::prev(it)->second, 0.0, 0.0};
    }
  }
  return {};
}

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  double number_only() {
    const double v = number();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

  Signal parse_all() {
    Signal s = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return s;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(fmt::format("bad signal '{}': {} at offset {}", text_, what, pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  Signal expr() {
    std::vector<Signal> terms;
    terms.push_back(term());
    while (accept('+')) terms.push_back(term());
    return Signal::sum(std::move(terms));
  }

  Signal term() {
    skip_ws();
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "pi") return Signal::constant(std::numbers::pi);
      return call(name);
    }
    return Signal::constant(number());
  }

  double number() {
    skip_ws();
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      v *= std::numbers::pi;
    }
    return v;
  }

  Signal call(std::string_view name) {
    expect('(');
    Signal out;
    if (name == "const") {
      out = Signal::constant(number());
    } else if (name == "sin" || name == "cos") {
      const double amp = number();
      expect(',');
      const double rate = number();
      double phase = 0.0;
      if (accept(',')) phase = number();
      out = name == "sin" ? Signal::sine(amp, rate, phase) : Signal::cosine(amp, rate, phase);
    } else if (name == "sum") {
      std::vector<Signal> terms;
      terms.push_back(expr());
      while (accept(',')) terms.push_back(expr());
      out = Signal::sum(std::move(terms));
    } else if (name == "piecewise") {
      const double ts = number();
      expect(',');
      Signal before = expr();
      expect(',');
      Signal after = expr();
      out = Signal::piecewise(ts, std::move(before), std::move(after));
    } else if (name == "table") {
      std::vector<std::pair<double, double>> pts;
      do {
        const double t = number();
        expect(':');
        pts.emplace_back(t, number());
      } while (accept(','));
      out = Signal::table(std::move(pts));
    } else {
      fail(fmt::format("unknown primitive '{}'", name));
    }
    expect(')');
    return out;
  }
};

}  // namespace

Signal Signal::parse(std::string_view text) { return Parser(text).parse_all(); }

double Signal::parse_number(std::string_view text) { return Parser(text).number_only(); }

std::string Signal::to_string() const {
  switch (kind_) {
    case Kind::Constant:
      return num(a_);
    case Kind::Sine:
      return fmt::format("sin({}, {}, {})", num(a_), num(b_), num(c_));
    case Kind::Cosine:
      return fmt::format("cos({}, {}, {})", num(a_), num(b_), num(c_));
    case Kind::Sum: {
      std::string out = "sum(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += ", ";
        out += children_[i].to_string();
      }
      return out + ")";
    }
    case Kind::Piecewise:
      return fmt::format("piecewise({}, {}, {})", num(a_), children_[0].to_string(),
                         children_[1].to_string());
    case Kind::Table: {
      std::string out = "table(";
      for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) out += ", ";
        out += num(points_[i].first) + ":" + num(points_[i].second);
      }
      return out + ")";
    }
  }
  return {};
}

}  // namespace idrem
