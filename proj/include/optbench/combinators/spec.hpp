// Copyright 2026 The optbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Algorithm specification trees and their canonical text form.
//
//   spec  := leaf | chain | bet | wrap
//   leaf  := id [ '[' key '=' value { ',' key '=' value } ']' ]
//   chain := 'chain(' spec { ',' spec } [ ';' number { ',' number } ] ')'
//   bet   := 'bet_and_run(' spec ',' spec { ',' spec } ';' number ')'
//   wrap  := ( 'metamodel' | 'progressive' | 'softmax' ) '(' spec ')'
//
// Identifiers use [A-Za-z0-9_.+-]. Chain fractions default to equal shares.
// Printing is canonical: parameters sorted by key, numbers in shortest
// round-trip form, no whitespace.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "optbench/core/errors.hpp"

namespace optbench {

enum class SpecKind { leaf, chain, bet_and_run, wrap };
enum class WrapKind { metamodel, progressive, softmax };

inline std::string_view wrap_name(WrapKind kind) {
  switch (kind) {
    case WrapKind::metamodel:
      return "metamodel";
    case WrapKind::progressive:
      return "progressive";
    case WrapKind::softmax:
      break;
  }
  return "softmax";
}

inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw ParseError("cannot format number");
  return std::string(buf, end);
}

struct AlgorithmSpec {
  SpecKind kind = SpecKind::leaf;
  std::string id;                             // leaf
  std::map<std::string, std::string> params;  // leaf
  std::vector<AlgorithmSpec> children;        // chain, bet_and_run, wrap
  std::vector<double> fractions;              // chain
  double phase_fraction = 0.0;                // bet_and_run
  WrapKind wrap = WrapKind::metamodel;        // wrap

  static AlgorithmSpec leaf(std::string id, std::map<std::string, std::string> params = {}) {
    AlgorithmSpec s;
    s.kind = SpecKind::leaf;
    s.id = std::move(id);
    s.params = std::move(params);
    return s;
  }

  static AlgorithmSpec chain(std::vector<AlgorithmSpec> children, std::vector<double> fractions) {
    AlgorithmSpec s;
    s.kind = SpecKind::chain;
    s.children = std::move(children);
    s.fractions = std::move(fractions);
    s.validate();
    return s;
  }

  static AlgorithmSpec bet_and_run(std::vector<AlgorithmSpec> children, double phase_fraction) {
    AlgorithmSpec s;
    s.kind = SpecKind::bet_and_run;
    s.children = std::move(children);
    s.phase_fraction = phase_fraction;
    s.validate();
    return s;
  }

  static AlgorithmSpec wrapped(WrapKind kind, AlgorithmSpec child) {
    AlgorithmSpec s;
    s.kind = SpecKind::wrap;
    s.wrap = kind;
    s.children.push_back(std::move(child));
    return s;
  }

  /// Integer leaf parameter; empty when absent.
  [[nodiscard]] std::optional<std::int64_t> int_param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    std::int64_t v = 0;
    const auto& t = it->second;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size()) {
      throw ParseError("parameter " + key + " of " + id + " is not an integer: " + t);
    }
    return v;
  }

  void validate() const {
    switch (kind) {
      case SpecKind::leaf:
        if (id.empty()) throw ParseError("empty solver id");
        return;
      case SpecKind::chain: {
        if (children.empty()) throw ParseError("chain needs at least one child");
        if (fractions.size() != children.size()) throw ParseError("chain needs one fraction per child");
        double sum = 0.0;
        for (double f : fractions) {
          if (!(f > 0.0)) throw ParseError("chain fractions must be positive");
          sum += f;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ParseError("chain fractions must sum to 1");
        break;
      }
      case SpecKind::bet_and_run:
        if (children.size() < 2) throw ParseError("bet_and_run needs at least two children");
        if (!(phase_fraction > 0.0 && phase_fraction < 1.0)) {
          throw ParseError("bet_and_run phase fraction must be in (0, 1)");
        }
        break;
      case SpecKind::wrap:
        if (children.size() != 1) throw ParseError("wrapper needs exactly one child");
        break;
    }
    for (const auto& c : children) c.validate();
  }

  [[nodiscard]] std::string to_string() const {
    std::string out;
    switch (kind) {
      case SpecKind::leaf:
        out = id;
        if (!params.empty()) {
          out += '[';
          bool first = true;
          for (const auto& [k, v] : params) {
            if (!first) out += ',';
            first = false;
            out += k + "=" + v;
          }
          out += ']';
        }
        return out;
      case SpecKind::chain:
        out = "chain(";
        for (std::size_t i = 0; i < children.size(); ++i) out += (i ? "," : "") + children[i].to_string();
        out += ';';
        for (std::size_t i = 0; i < fractions.size(); ++i) out += (i ? "," : "") + format_number(fractions[i]);
        return out + ")";
      case SpecKind::bet_and_run:
        out = "bet_and_run(";
        for (std::size_t i = 0; i < children.size(); ++i) out += (i ? "," : "") + children[i].to_string();
        return out + ";" + format_number(phase_fraction) + ")";
      case SpecKind::wrap:
        break;
    }
    return std::string(wrap_name(wrap)) + "(" + children.front().to_string() + ")";
  }

  bool operator==(const AlgorithmSpec&) const = default;
};

namespace spec_detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  AlgorithmSpec parse_all() {
    AlgorithmSpec s = parse_spec();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    s.validate();
    return s;
  }

  std::vector<AlgorithmSpec> parse_list() {
    std::vector<AlgorithmSpec> out;
    out.push_back(parse_spec());
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      out.push_back(parse_spec());
    }
    if (pos_ != text_.size()) fail("unexpected trailing input");
    for (const auto& s : out) s.validate();
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("algorithm spec '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " +
                     what);
  }

  static bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.' || c == '+';
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    auto [end, ec] = std::from_chars(first, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - first);
    return v;
  }

  AlgorithmSpec parse_spec() {
    const std::string name = ident();
    if (name == "chain" && accept('(')) {
      std::vector<AlgorithmSpec> children{parse_spec()};
      while (accept(',')) children.push_back(parse_spec());
      std::vector<double> fractions;
      if (accept(';')) {
        fractions.push_back(number());
        while (accept(',')) fractions.push_back(number());
      } else {
        fractions.assign(children.size(), 1.0 / static_cast<double>(children.size()));
      }
      expect(')');
      AlgorithmSpec s;
      s.kind = SpecKind::chain;
      s.children = std::move(children);
      s.fractions = std::move(fractions);
      return s;
    }
    if (name == "bet_and_run" && accept('(')) {
      std::vector<AlgorithmSpec> children{parse_spec()};
      while (accept(',')) children.push_back(parse_spec());
      expect(';');
      const double phase = number();
      expect(')');
      AlgorithmSpec s;
      s.kind = SpecKind::bet_and_run;
      s.children = std::move(children);
      s.phase_fraction = phase;
      return s;
    }
    for (WrapKind w : {WrapKind::metamodel, WrapKind::progressive, WrapKind::softmax}) {
      if (name == wrap_name(w) && accept('(')) {
        AlgorithmSpec child = parse_spec();
        expect(')');
        return AlgorithmSpec::wrapped(w, std::move(child));
      }
    }
    std::map<std::string, std::string> params;
    if (accept('[')) {
      do {
        std::string key = ident();
        expect('=');
        std::string value = ident();
        if (!params.emplace(std::move(key), std::move(value)).second) fail("duplicate parameter");
      } while (accept(','));
      expect(']');
    }
    return AlgorithmSpec::leaf(name, std::move(params));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace spec_detail

inline AlgorithmSpec parse_spec(std::string_view text) { return spec_detail::Parser(text).parse_all(); }

/// Comma-separated list of specs, as taken by the CLI.
inline std::vector<AlgorithmSpec> parse_spec_list(std::string_view text) {
  return spec_detail::Parser(text).parse_list();
}

}  // namespace optbench
