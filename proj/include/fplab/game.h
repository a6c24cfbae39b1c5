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

#ifndef FPLAB_GAME_H_
#define FPLAB_GAME_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fplab {

enum class ErrorCode {
  kUnknownNode,
  kUnknownInfoset,
  kUnknownMove,
  kUnknownPlayer,
  kUnknownTerminal,
  kNotIdenticalInterest,
  kDegeneratePayoffs,
  kBadParameter,
  kBadProfile,
  kInvalidGame,
  kTooLarge,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every library-level failure is reported through this exception. The code
// is stable and machine-readable; the message is for humans.
class GameError : public std::runtime_error {
 public:
  GameError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Pre-validation form of a game, exactly as declared in a game file. Players
// are 1-based here, matching the file format.
struct InfosetDecl {
  std::string id;
  int player = 0;
  std::vector<std::string> moves;
};

struct NodeDecl {
  std::string id;
  std::string infoset;
};

struct EdgeDecl {
  std::string parent;
  std::string move;
  std::string child;
};

struct TerminalDecl {
  std::string id;
  // Either one value (shared by all players) or one value per player.
  std::vector<double> payoffs;
};

struct GameSpec {
  int players = 0;
  std::vector<InfosetDecl> infosets;
  std::vector<NodeDecl> nodes;
  std::vector<EdgeDecl> edges;
  std::vector<TerminalDecl> terminals;
};

enum class ViolationCode {
  kNoPlayers,
  kChanceNode,
  kBadPlayer,
  kEmptyInfoset,
  kNoMoves,
  kDuplicateMove,
  kUnknownInfoset,
  kDuplicateId,
  kUnknownParent,
  kTerminalHasChildren,
  kUnknownMove,
  kDuplicateEdge,
  kMissingChild,
  kMultipleParents,
  kMissingPayoff,
  kPayoffArity,
  kNonFinitePayoff,
  kNoRoot,
  kMultipleRoots,
  kRootNotSingleton,
  kUnreachableNode,
  kRevisitedInfoset,
  kImperfectRecall,
};

std::string_view ViolationCodeName(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::vector<std::string> ids;  // offending node / infoset ids
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool Contains(ViolationCode code) const;
};

// Checks every structural requirement of a finite extensive-form game with
// perfect recall and no chance moves. Accepts arbitrary declarations.
ValidationReport Validate(const GameSpec& spec);

enum class NodeKind { kDecision, kTerminal };

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kDecision;
  int parent = -1;          // -1 for the root
  int incoming_move = -1;   // move index at the parent's infoset
  int infoset = -1;         // -1 for terminals
  int depth = 0;            // number of moves from the root
  std::vector<int> children;  // indexed by move index; empty for terminals
  bool operator==(const Node&) const = default;
};

struct Infoset {
  std::string id;
  int player = 0;  // 0-based
  std::vector<std::string> moves;
  std::vector<int> nodes;  // member nodes, ascending index
  bool operator==(const Infoset&) const = default;
};

// A (infoset, move) pair on a play path, both as indices.
struct PathStep {
  int infoset = -1;
  int move = -1;
  bool operator==(const PathStep&) const = default;
};

// Immutable validated game. Nodes and infosets are stored in lexicographic
// order of their ids, so iteration order is reproducible.
class GameTree {
 public:
  // Throws GameError(kInvalidGame) listing every violation.
  static GameTree FromSpec(const GameSpec& spec);

  int num_players() const { return num_players_; }
  int root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int n) const { return nodes_[n]; }
  const std::vector<Infoset>& infosets() const { return infosets_; }
  const Infoset& infoset(int h) const { return infosets_[h]; }
  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  int num_moves(int h) const {
    return static_cast<int>(infosets_[h].moves.size());
  }
  // Terminal node indices, ascending.
  const std::vector<int>& terminals() const { return terminals_; }
  // Nodes ordered so that every parent precedes its children.
  const std::vector<int>& preorder() const { return preorder_; }

  bool is_terminal(int n) const {
    return nodes_[n].kind == NodeKind::kTerminal;
  }
  std::span<const double> payoffs(int terminal) const;
  double payoff(int terminal, int player) const {
    return payoffs(terminal)[player];
  }
  bool identical_interest() const { return identical_interest_; }

  // Root-to-node (infoset, move) pairs in path order.
  const std::vector<PathStep>& path(int n) const { return paths_[n]; }

  int NodeIndex(std::string_view id) const;
  int TerminalIndex(std::string_view id) const;
  int InfosetIndex(std::string_view id) const;
  int MoveIndex(int infoset, std::string_view move) const;

  GameSpec ToSpec() const;

  bool operator==(const GameTree& other) const {
    return num_players_ == other.num_players_ && nodes_ == other.nodes_ &&
           infosets_ == other.infosets_ && payoffs_ == other.payoffs_;
  }

 private:
  GameTree() = default;

  int num_players_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;
  std::vector<Infoset> infosets_;
  std::vector<int> terminals_;
  std::vector<int> preorder_;
  std::vector<std::vector<double>> payoffs_;  // per node; empty if decision
  std::vector<std::vector<PathStep>> paths_;
  bool identical_interest_ = true;
  std::unordered_map<std::string, int> node_index_;
  std::unordered_map<std::string, int> infoset_index_;
};

// True iff, for every information set with two or more nodes, the immediate
// successors of all its nodes are either all terminal or all members of one
// single information set.
bool CheckLemma1Class(const GameTree& game);

struct GameMetrics {
  double rho = 0.0;
  int l_max = 0;
  double u_max = 0.0;
  double delta_min = 0.0;
  int num_terminals = 0;
  bool distinct_payoffs = false;
  std::optional<int> k_max;  // absent when payoffs collide

  // Right-hand side of the repetition bound: (1 - delta_min/(8 u_max))^(1/l_max).
  double RepetitionThreshold() const;
};

// Requires an identical-interest game and rho in (0,1).
GameMetrics ComputeMetrics(const GameTree& game, double rho);

}  // namespace fplab

#endif  // FPLAB_GAME_H_
