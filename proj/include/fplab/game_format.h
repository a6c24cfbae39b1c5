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

// Line-oriented text format for extensive-form games:
//
//   players <int>
//   infoset <id> player <int 1-based> moves <id>+
//   node <id> infoset <id>
//   edge <parent-node-id> <move-id> <child-id>
//   terminal <id> payoffs <real>+        # one real = shared by all players
//
// '#' starts a comment. Identifiers match [A-Za-z0-9_]+. The root is the
// unique node that never appears as a child.

#ifndef FPLAB_GAME_FORMAT_H_
#define FPLAB_GAME_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

#include "fplab/game.h"

namespace fplab {

enum class DiagnosticCode {
  kSyntax,
  kDuplicateId,
  kBadNumber,
  kUnknownSection,
};

std::string_view DiagnosticCodeName(DiagnosticCode code);

struct Diagnostic {
  int line = 1;    // 1-based
  int column = 1;  // 1-based byte column
  DiagnosticCode code = DiagnosticCode::kSyntax;
  std::string message;
};

struct ParseResult {
  GameSpec spec;
  // Sorted by (line, column). Empty iff the text is well-formed.
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// Total: never stops at the first error; collects every diagnostic.
ParseResult Parse(std::string_view text);

// Canonical text: fixed section order, entries sorted by id, single spaces,
// shortest round-trippable decimals. Parse(Serialize(g)) rebuilds g exactly.
std::string Serialize(const GameTree& game);

// Renders a double as the shortest decimal that parses back to the same value.
std::string FormatDouble(double value);

// Parse + Validate + build. Throws GameError(kInvalidGame) on any problem,
// with the diagnostics or violations in the message.
GameTree LoadGame(std::string_view text);
GameTree LoadGameFile(const std::string& path);

}  // namespace fplab

#endif  // FPLAB_GAME_FORMAT_H_
