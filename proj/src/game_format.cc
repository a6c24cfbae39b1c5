// Copyright 2026 The fplab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fplab/game_format.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fplab {

std::string_view DiagnosticCodeName(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::kSyntax: return "E_SYNTAX";
    case DiagnosticCode::kDuplicateId: return "E_DUPLICATE_ID";
    case DiagnosticCode::kBadNumber: return "E_BAD_NUMBER";
    case DiagnosticCode::kUnknownSection: return "E_UNKNOWN_SECTION";
  }
  return "E_UNKNOWN";
}

namespace {

struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> Tokenize(std::string_view line) {
  std::vector<Token> tokens;
  size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == '#') break;
    if (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r') {
      ++pos;
      continue;
    }
    size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r' && line[end] != '#') {
      ++end;
    }
    tokens.push_back({line.substr(pos, end - pos), static_cast<int>(pos) + 1});
    pos = end;
  }
  return tokens;
}

bool IsIdentifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_';
  });
}

class LineParser {
 public:
  explicit LineParser(ParseResult& result) : result_(result) {}

  void Line(int line_no, std::string_view line) {
    line_ = line_no;
    tokens_ = Tokenize(line);
    if (tokens_.empty()) return;
    const std::string_view keyword = tokens_[0].text;
    if (keyword == "players") {
      Players();
    } else if (keyword == "infoset") {
      InfosetLine();
    } else if (keyword == "node") {
      NodeLine();
    } else if (keyword == "edge") {
      EdgeLine();
    } else if (keyword == "terminal") {
      TerminalLine();
    } else {
      Report(tokens_[0].column, DiagnosticCode::kUnknownSection,
             "unknown declaration '" + std::string(keyword) + "'");
    }
  }

  void Finish() {
    if (!seen_players_) {
      Report(1, DiagnosticCode::kSyntax, "missing players declaration", 1);
    }
  }

 private:
  void Report(int column, DiagnosticCode code, std::string message,
              int line = 0) {
    result_.diagnostics.push_back(
        {line > 0 ? line : line_, column, code, std::move(message)});
  }

  // Column just past the last token, for "expected more" diagnostics.
  int EndColumn() const {
    const Token& last = tokens_.back();
    return last.column + static_cast<int>(last.text.size());
  }

  bool ExpectCount(size_t exact, const char* usage) {
    if (tokens_.size() == exact) return true;
    const int column = tokens_.size() > exact ? tokens_[exact].column
                                              : EndColumn();
    Report(column, DiagnosticCode::kSyntax,
           std::string("expected '") + usage + "'");
    return false;
  }

  bool ExpectKeyword(size_t k, std::string_view word, const char* usage) {
    if (k < tokens_.size() && tokens_[k].text == word) return true;
    Report(k < tokens_.size() ? tokens_[k].column : EndColumn(),
           DiagnosticCode::kSyntax, std::string("expected '") + usage + "'");
    return false;
  }

  bool ExpectId(size_t k) {
    if (IsIdentifier(tokens_[k].text)) return true;
    Report(tokens_[k].column, DiagnosticCode::kSyntax,
           "invalid identifier '" + std::string(tokens_[k].text) + "'");
    return false;
  }

  bool ParseInt(size_t k, int& out) {
    std::string_view s = tokens_[k].text;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return true;
    Report(tokens_[k].column, DiagnosticCode::kBadNumber,
           "not an integer: '" + std::string(s) + "'");
    return false;
  }

  bool ParseReal(size_t k, double& out) {
    std::string_view s = tokens_[k].text;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out)) {
      return true;
    }
    Report(tokens_[k].column, DiagnosticCode::kBadNumber,
           "not a finite real: '" + std::string(s) + "'");
    return false;
  }

  bool ClaimNodeId(size_t k) {
    if (node_ids_.insert(std::string(tokens_[k].text)).second) return true;
    Report(tokens_[k].column, DiagnosticCode::kDuplicateId,
           "duplicate node id '" + std::string(tokens_[k].text) + "'");
    return false;
  }

  void Players() {
    if (!ExpectCount(2, "players <int>")) return;
    int players = 0;
    if (!ParseInt(1, players)) return;
    if (seen_players_) {
      Report(tokens_[0].column, DiagnosticCode::kSyntax,
             "duplicate players declaration");
      return;
    }
    seen_players_ = true;
    result_.spec.players = players;
  }

  void InfosetLine() {
    const char* usage = "infoset <id> player <int> moves <id>+";
    if (tokens_.size() < 2) {
      ExpectCount(2, usage);
      return;
    }
    bool ok = ExpectId(1);
    ok = ExpectKeyword(2, "player", usage) && ok;
    if (!ok) return;
    InfosetDecl decl;
    decl.id = tokens_[1].text;
    if (tokens_.size() < 4) {
      Report(EndColumn(), DiagnosticCode::kSyntax,
             std::string("expected '") + usage + "'");
      return;
    }
    ok = ParseInt(3, decl.player);
    ok = ExpectKeyword(4, "moves", usage) && ok;
    if (!ok) return;
    if (tokens_.size() < 6) {
      Report(EndColumn(), DiagnosticCode::kSyntax, "expected at least one move");
      return;
    }
    std::set<std::string_view> seen;
    for (size_t k = 5; k < tokens_.size(); ++k) {
      if (!ExpectId(k)) {
        ok = false;
        continue;
      }
      if (!seen.insert(tokens_[k].text).second) {
        Report(tokens_[k].column, DiagnosticCode::kDuplicateId,
               "duplicate move '" + std::string(tokens_[k].text) + "'");
        ok = false;
        continue;
      }
      decl.moves.emplace_back(tokens_[k].text);
    }
    if (!infoset_ids_.insert(decl.id).second) {
      Report(tokens_[1].column, DiagnosticCode::kDuplicateId,
             "duplicate infoset id '" + decl.id + "'");
      return;
    }
    if (ok) result_.spec.infosets.push_back(std::move(decl));
  }

  void NodeLine() {
    if (!ExpectCount(4, "node <id> infoset <id>")) return;
    bool ok = ExpectId(1);
    ok = ExpectKeyword(2, "infoset", "node <id> infoset <id>") && ok;
    ok = ExpectId(3) && ok;
    if (!ok || !ClaimNodeId(1)) return;
    result_.spec.nodes.push_back(
        {std::string(tokens_[1].text), std::string(tokens_[3].text)});
  }

  void EdgeLine() {
    if (!ExpectCount(4, "edge <parent> <move> <child>")) return;
    bool ok = ExpectId(1);
    ok = ExpectId(2) && ok;
    ok = ExpectId(3) && ok;
    if (!ok) return;
    result_.spec.edges.push_back({std::string(tokens_[1].text),
                                  std::string(tokens_[2].text),
                                  std::string(tokens_[3].text)});
  }

  void TerminalLine() {
    const char* usage = "terminal <id> payoffs <real>+";
    if (tokens_.size() < 4) {
      Report(EndColumn(), DiagnosticCode::kSyntax,
             std::string("expected '") + usage + "'");
      return;
    }
    bool ok = ExpectId(1);
    ok = ExpectKeyword(2, "payoffs", usage) && ok;
    TerminalDecl decl;
    decl.id = tokens_[1].text;
    for (size_t k = 3; k < tokens_.size(); ++k) {
      double u = 0.0;
      if (ParseReal(k, u)) {
        decl.payoffs.push_back(u);
      } else {
        ok = false;
      }
    }
    if (!ok || !ClaimNodeId(1)) return;
    result_.spec.terminals.push_back(std::move(decl));
  }

  ParseResult& result_;
  int line_ = 0;
  std::vector<Token> tokens_;
  bool seen_players_ = false;
  std::set<std::string> node_ids_;
  std::set<std::string> infoset_ids_;
};

}  // namespace

ParseResult Parse(std::string_view text) {
  ParseResult result;
  LineParser parser(result);
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    parser.Line(++line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
  parser.Finish();
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.line != b.line ? a.line < b.line
                                             : a.column < b.column;
                   });
  return result;
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string Serialize(const GameTree& game) {
  const GameSpec spec = game.ToSpec();
  std::ostringstream out;
  out << "players " << spec.players << "\n";
  for (const InfosetDecl& h : spec.infosets) {
    out << "infoset " << h.id << " player " << h.player << " moves";
    for (const std::string& a : h.moves) out << " " << a;
    out << "\n";
  }
  for (const NodeDecl& n : spec.nodes) {
    out << "node " << n.id << " infoset " << n.infoset << "\n";
  }
  for (const EdgeDecl& e : spec.edges) {
    out << "edge " << e.parent << " " << e.move << " " << e.child << "\n";
  }
  for (const TerminalDecl& z : spec.terminals) {
    out << "terminal " << z.id << " payoffs";
    for (double u : z.payoffs) out << " " << FormatDouble(u);
    out << "\n";
  }
  return out.str();
}

GameTree LoadGame(std::string_view text) {
  ParseResult parsed = Parse(text);
  if (!parsed.ok()) {
    std::ostringstream out;
    out << "parse failed:";
    for (const Diagnostic& d : parsed.diagnostics) {
      out << " " << d.line << ":" << d.column << " "
          << DiagnosticCodeName(d.code) << " " << d.message << ";";
    }
    throw GameError(ErrorCode::kInvalidGame, out.str());
  }
  return GameTree::FromSpec(parsed.spec);
}

GameTree LoadGameFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadGame(buffer.str());
}

}  // namespace fplab
