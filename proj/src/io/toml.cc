// Copyright 2026 The PaRCE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A small recursive-descent reader for the TOML subset accepted in config
// files. Inline tables, arrays of tables and date-times are not supported.

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "parce/error.h"
#include "parce/io/config.h"

namespace parce::io {
namespace {

using nlohmann::json;

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : text_(text) {}

  json Parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      SkipBlankLines();
      if (AtEnd()) break;
      if (Peek() == '[') {
        Advance();
        SkipSpaces();
        const std::vector<std::string> path = ParseKeyPath();
        SkipSpaces();
        Expect(']');
        table = &Descend(root, path, /*allow_existing=*/true);
        Require(table->is_object(), ErrorKind::kParse,
                Where() + "table header names a non-table key");
      } else {
        const std::vector<std::string> path = ParseKeyPath();
        SkipSpaces();
        Expect('=');
        SkipSpaces();
        json value = ParseValue();
        json* parent = table;
        if (path.size() > 1) {
          parent = &Descend(*table, {path.begin(), path.end() - 1}, true);
        }
        Require(!parent->contains(path.back()), ErrorKind::kParse,
                Where() + "duplicate key '" + path.back() + "'");
        (*parent)[path.back()] = std::move(value);
      }
      EndOfLine();
    }
    return root;
  }

 private:
  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  void Advance() {
    if (Peek() == '\n') ++line_;
    ++pos_;
  }

  std::string Where() const { return "line " + std::to_string(line_) + ": "; }

  [[noreturn]] void Bad(const std::string& msg) const {
    Fail(ErrorKind::kParse, Where() + msg);
  }

  void Expect(char c) {
    if (Peek() != c) Bad(std::string("expected '") + c + "'");
    Advance();
  }

  void SkipSpaces() {
    while (Peek() == ' ' || Peek() == '\t') Advance();
  }

  void SkipComment() {
    if (Peek() == '#') {
      while (!AtEnd() && Peek() != '\n') Advance();
    }
  }

  // Whitespace, comments and newlines.
  void SkipBlankLines() {
    while (!AtEnd()) {
      SkipSpaces();
      SkipComment();
      if (Peek() == '\r') Advance();
      if (Peek() == '\n') {
        Advance();
      } else {
        return;
      }
    }
  }

  void EndOfLine() {
    SkipSpaces();
    SkipComment();
    if (Peek() == '\r') Advance();
    if (AtEnd()) return;
    if (Peek() != '\n') Bad("unexpected trailing characters");
    Advance();
  }

  json& Descend(json& root, const std::vector<std::string>& path,
                bool allow_existing) {
    json* node = &root;
    for (const auto& key : path) {
      if (!node->contains(key)) {
        (*node)[key] = json::object();
      } else if (!allow_existing || !(*node)[key].is_object()) {
        Bad("key '" + key + "' is already defined");
      }
      node = &(*node)[key];
    }
    return *node;
  }

  std::vector<std::string> ParseKeyPath() {
    std::vector<std::string> path;
    while (true) {
      SkipSpaces();
      path.push_back(ParseKey());
      SkipSpaces();
      if (Peek() != '.') break;
      Advance();
    }
    return path;
  }

  std::string ParseKey() {
    if (Peek() == '"') return ParseBasicString();
    if (Peek() == '\'') return ParseLiteralString();
    std::string key;
    while (std::isalnum(static_cast<unsigned char>(Peek())) || Peek() == '_' ||
           Peek() == '-') {
      key.push_back(Peek());
      Advance();
    }
    if (key.empty()) Bad("expected a key");
    return key;
  }

  std::string ParseBasicString() {
    Expect('"');
    std::string out;
    while (true) {
      if (AtEnd() || Peek() == '\n') Bad("unterminated string");
      const char c = Peek();
      Advance();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      const char e = Peek();
      Advance();
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        default: Bad(std::string("unsupported escape '\\") + e + "'");
      }
    }
    return out;
  }

  std::string ParseLiteralString() {
    Expect('\'');
    std::string out;
    while (Peek() != '\'') {
      if (AtEnd() || Peek() == '\n') Bad("unterminated string");
      out.push_back(Peek());
      Advance();
    }
    Advance();
    return out;
  }

  json ParseArray() {
    Expect('[');
    json arr = json::array();
    while (true) {
      SkipBlankLines();
      if (Peek() == ']') break;
      arr.push_back(ParseValue());
      SkipBlankLines();
      if (Peek() == ',') {
        Advance();
        continue;
      }
      if (Peek() != ']') Bad("expected ',' or ']' in array");
    }
    Advance();
    return arr;
  }

  json ParseValue() {
    const char c = Peek();
    if (c == '"') return ParseBasicString();
    if (c == '\'') return ParseLiteralString();
    if (c == '[') return ParseArray();
    if (c == '{') Bad("inline tables are not supported");
    std::string token;
    while (!AtEnd()) {
      const char d = Peek();
      if (d == ',' || d == ']' || d == ' ' || d == '\t' || d == '\n' ||
          d == '\r' || d == '#') {
        break;
      }
      token.push_back(d);
      Advance();
    }
    if (token.empty()) Bad("expected a value");
    if (token == "true") return true;
    if (token == "false") return false;
    return ParseNumber(token);
  }

  json ParseNumber(std::string token) {
    std::erase(token, '_');
    std::string body = token;
    bool negative = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      negative = body[0] == '-';
      body.erase(0, 1);
    }
    if (body == "inf") {
      return negative ? -HUGE_VAL : HUGE_VAL;
    }
    if (body == "nan") return std::nan("");
    const bool is_float =
        token.find_first_of(".eE") != std::string::npos;
    char* end = nullptr;
    if (is_float) {
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) Bad("invalid number '" + token + "'");
      return v;
    }
    errno = 0;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || body.empty() ||
        !std::isdigit(static_cast<unsigned char>(body[0])) || errno == ERANGE) {
      Bad("invalid value '" + token + "'");
    }
    return static_cast<int64_t>(v);
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

json ParseToml(std::string_view text) { return TomlReader(text).Parse(); }

}  // namespace parce::io
