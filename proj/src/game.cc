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

#include "fplab/game.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace fplab {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownNode: return "UNKNOWN_NODE";
    case ErrorCode::kUnknownInfoset: return "UNKNOWN_INFOSET";
    case ErrorCode::kUnknownMove: return "UNKNOWN_MOVE";
    case ErrorCode::kUnknownPlayer: return "UNKNOWN_PLAYER";
    case ErrorCode::kUnknownTerminal: return "UNKNOWN_TERMINAL";
    case ErrorCode::kNotIdenticalInterest: return "NOT_IDENTICAL_INTEREST";
    case ErrorCode::kDegeneratePayoffs: return "DEGENERATE_PAYOFFS";
    case ErrorCode::kBadParameter: return "BAD_PARAMETER";
    case ErrorCode::kBadProfile: return "BAD_PROFILE";
    case ErrorCode::kInvalidGame: return "INVALID_GAME";
    case ErrorCode::kTooLarge: return "TOO_LARGE";
  }
  return "UNKNOWN";
}

std::string_view ViolationCodeName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kNoPlayers: return "NO_PLAYERS";
    case ViolationCode::kChanceNode: return "CHANCE_NODE";
    case ViolationCode::kBadPlayer: return "BAD_PLAYER";
    case ViolationCode::kEmptyInfoset: return "EMPTY_INFOSET";
    case ViolationCode::kNoMoves: return "NO_MOVES";
    case ViolationCode::kDuplicateMove: return "DUPLICATE_MOVE";
    case ViolationCode::kUnknownInfoset: return "UNKNOWN_INFOSET";
    case ViolationCode::kDuplicateId: return "DUPLICATE_ID";
    case ViolationCode::kUnknownParent: return "UNKNOWN_PARENT";
    case ViolationCode::kTerminalHasChildren: return "TERMINAL_HAS_CHILDREN";
    case ViolationCode::kUnknownMove: return "UNKNOWN_MOVE";
    case ViolationCode::kDuplicateEdge: return "DUPLICATE_EDGE";
    case ViolationCode::kMissingChild: return "MISSING_CHILD";
    case ViolationCode::kMultipleParents: return "MULTIPLE_PARENTS";
    case ViolationCode::kMissingPayoff: return "MISSING_PAYOFF";
    case ViolationCode::kPayoffArity: return "PAYOFF_ARITY";
    case ViolationCode::kNonFinitePayoff: return "NON_FINITE_PAYOFF";
    case ViolationCode::kNoRoot: return "NO_ROOT";
    case ViolationCode::kMultipleRoots: return "MULTIPLE_ROOTS";
    case ViolationCode::kRootNotSingleton: return "ROOT_NOT_SINGLETON";
    case ViolationCode::kUnreachableNode: return "UNREACHABLE_NODE";
    case ViolationCode::kRevisitedInfoset: return "REVISITED_INFOSET";
    case ViolationCode::kImperfectRecall: return "IMPERFECT_RECALL";
  }
  return "UNKNOWN";
}

bool ValidationReport::Contains(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

namespace {

struct SpecIndex {
  std::map<std::string, const InfosetDecl*> infosets;
  std::map<std::string, const NodeDecl*> decisions;
  std::map<std::string, const TerminalDecl*> terminals;
  // parent id -> move -> child id
  std::map<std::string, std::map<std::string, std::string>> children;
  std::map<std::string, std::string> parent_of;
  std::map<std::string, std::string> move_into;
};

bool IsDeclaredNode(const SpecIndex& index, const std::string& id) {
  return index.decisions.count(id) > 0 || index.terminals.count(id) > 0;
}

}  // namespace

ValidationReport Validate(const GameSpec& spec) {
  ValidationReport report;
  auto add = [&report](ViolationCode code, std::vector<std::string> ids,
                       std::string message) {
    report.violations.push_back({code, std::move(ids), std::move(message)});
  };

  if (spec.players < 1) {
    add(ViolationCode::kNoPlayers, {}, "game must declare at least 1 player");
  }

  SpecIndex index;
  for (const InfosetDecl& h : spec.infosets) {
    if (!index.infosets.emplace(h.id, &h).second) {
      add(ViolationCode::kDuplicateId, {h.id}, "duplicate infoset id");
      continue;
    }
    if (h.player == 0) {
      add(ViolationCode::kChanceNode, {h.id},
          "moves by nature are not supported");
    } else if (h.player < 0 || h.player > spec.players) {
      add(ViolationCode::kBadPlayer, {h.id}, "player index out of range");
    }
    if (h.moves.empty()) {
      add(ViolationCode::kNoMoves, {h.id}, "infoset has no moves");
    }
    std::set<std::string> seen;
    for (const std::string& a : h.moves) {
      if (!seen.insert(a).second) {
        add(ViolationCode::kDuplicateMove, {h.id, a}, "duplicate move " + a);
      }
    }
  }

  for (const NodeDecl& n : spec.nodes) {
    if (!index.decisions.emplace(n.id, &n).second) {
      add(ViolationCode::kDuplicateId, {n.id}, "duplicate node id");
      continue;
    }
    if (index.infosets.count(n.infoset) == 0) {
      add(ViolationCode::kUnknownInfoset, {n.id, n.infoset},
          "node refers to undeclared infoset " + n.infoset);
    }
  }
  for (const TerminalDecl& z : spec.terminals) {
    if (index.decisions.count(z.id) > 0 ||
        !index.terminals.emplace(z.id, &z).second) {
      add(ViolationCode::kDuplicateId, {z.id}, "duplicate node id");
      continue;
    }
    if (spec.players >= 1 && z.payoffs.size() != 1 &&
        static_cast<int>(z.payoffs.size()) != spec.players) {
      add(ViolationCode::kPayoffArity, {z.id},
          "payoff vector must have 1 or " + std::to_string(spec.players) +
              " entries");
    }
    for (double u : z.payoffs) {
      if (!std::isfinite(u)) {
        add(ViolationCode::kNonFinitePayoff, {z.id}, "payoff is not finite");
        break;
      }
    }
  }

  for (const auto& [id, h] : index.infosets) {
    bool used = std::any_of(spec.nodes.begin(), spec.nodes.end(),
                            [&](const NodeDecl& n) { return n.infoset == id; });
    if (!used) add(ViolationCode::kEmptyInfoset, {id}, "infoset has no nodes");
  }

  std::set<std::string> missing_reported;
  for (const EdgeDecl& e : spec.edges) {
    auto parent = index.decisions.find(e.parent);
    if (parent == index.decisions.end()) {
      if (index.terminals.count(e.parent) > 0) {
        add(ViolationCode::kTerminalHasChildren, {e.parent},
            "terminal node has an outgoing edge");
      } else {
        add(ViolationCode::kUnknownParent, {e.parent},
            "edge from undeclared node");
      }
      continue;
    }
    auto h = index.infosets.find(parent->second->infoset);
    if (h != index.infosets.end()) {
      const auto& moves = h->second->moves;
      if (std::find(moves.begin(), moves.end(), e.move) == moves.end()) {
        add(ViolationCode::kUnknownMove, {e.parent, e.move},
            "move " + e.move + " is not available at infoset " + h->first);
        continue;
      }
    }
    if (!index.children[e.parent].emplace(e.move, e.child).second) {
      add(ViolationCode::kDuplicateEdge, {e.parent, e.move},
          "two edges for the same move");
      continue;
    }
    if (!IsDeclaredNode(index, e.child)) {
      if (missing_reported.insert(e.child).second) {
        add(ViolationCode::kMissingPayoff, {e.child},
            "leaf node has no terminal payoff declaration");
      }
    }
    if (!index.parent_of.emplace(e.child, e.parent).second) {
      add(ViolationCode::kMultipleParents, {e.child},
          "node has more than one parent");
    } else {
      index.move_into[e.child] = e.move;
    }
  }

  for (const auto& [id, n] : index.decisions) {
    auto h = index.infosets.find(n->infoset);
    if (h == index.infosets.end()) continue;
    const auto& out = index.children[id];
    for (const std::string& a : h->second->moves) {
      if (out.count(a) == 0) {
        add(ViolationCode::kMissingChild, {id, a},
            "decision node has no child for move " + a);
      }
    }
  }

  std::vector<std::string> roots;
  for (const auto& [id, n] : index.decisions) {
    if (index.parent_of.count(id) == 0) roots.push_back(id);
  }
  for (const auto& [id, z] : index.terminals) {
    if (index.parent_of.count(id) == 0) roots.push_back(id);
  }
  if (roots.empty()) {
    add(ViolationCode::kNoRoot, {}, "no node qualifies as the root");
    return report;
  }
  if (roots.size() > 1) {
    add(ViolationCode::kMultipleRoots, roots,
        "more than one node never appears as a child");
    return report;
  }
  const std::string root = roots.front();
  if (index.terminals.count(root) > 0) {
    add(ViolationCode::kNoRoot, {root}, "the root must be a decision node");
    return report;
  }
  const std::string& root_infoset = index.decisions.at(root)->infoset;
  for (const NodeDecl& n : spec.nodes) {
    if (n.id != root && n.infoset == root_infoset) {
      add(ViolationCode::kRootNotSingleton, {root_infoset, n.id},
          "the root's information set must be a singleton");
    }
  }

  // Reachability from the root; nodes on cycles never get reached.
  std::set<std::string> reached;
  std::vector<std::string> stack = {root};
  while (!stack.empty()) {
    std::string id = stack.back();
    stack.pop_back();
    if (!reached.insert(id).second) continue;
    auto out = index.children.find(id);
    if (out == index.children.end()) continue;
    for (const auto& [move, child] : out->second) {
      if (IsDeclaredNode(index, child)) stack.push_back(child);
    }
  }
  for (const auto& [id, n] : index.decisions) {
    if (reached.count(id) == 0) {
      add(ViolationCode::kUnreachableNode, {id}, "node unreachable from root");
    }
  }
  for (const auto& [id, z] : index.terminals) {
    if (reached.count(id) == 0) {
      add(ViolationCode::kUnreachableNode, {id}, "node unreachable from root");
    }
  }

  if (!report.ok()) return report;

  // Path-based checks need a well-formed tree.
  auto owner = [&](const std::string& node) {
    return index.infosets.at(index.decisions.at(node)->infoset)->player;
  };
  using Experience = std::vector<std::pair<std::string, std::string>>;
  std::map<std::string, std::vector<std::pair<std::string, Experience>>>
      experiences;  // infoset -> (node, owner experience)
  for (const auto& [id, n] : index.decisions) {
    std::vector<std::string> path;  // ancestors, root first
    for (std::string cur = id; index.parent_of.count(cur) > 0;) {
      cur = index.parent_of.at(cur);
      path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    std::set<std::string> visited = {n->infoset};
    Experience exp;
    const int player = owner(id);
    for (size_t k = 0; k < path.size(); ++k) {
      const std::string& anc = path[k];
      const std::string& h = index.decisions.at(anc)->infoset;
      if (!visited.insert(h).second) {
        add(ViolationCode::kRevisitedInfoset, {h, id},
            "a root path crosses information set " + h + " twice");
      }
      if (owner(anc) == player) {
        const std::string& next = k + 1 < path.size() ? path[k + 1] : id;
        exp.emplace_back(h, index.move_into.at(next));
      }
    }
    experiences[n->infoset].emplace_back(id, std::move(exp));
  }
  for (const auto& [h, members] : experiences) {
    for (size_t k = 1; k < members.size(); ++k) {
      if (members[k].second != members.front().second) {
        add(ViolationCode::kImperfectRecall,
            {h, members.front().first, members[k].first},
            "owner's past information and moves differ across nodes of " + h);
      }
    }
  }
  return report;
}

GameTree GameTree::FromSpec(const GameSpec& spec) {
  ValidationReport report = Validate(spec);
  if (!report.ok()) {
    std::ostringstream out;
    out << "invalid game:";
    for (const Violation& v : report.violations) {
      out << " " << ViolationCodeName(v.code);
      for (const std::string& id : v.ids) out << " " << id;
      out << ";";
    }
    throw GameError(ErrorCode::kInvalidGame, out.str());
  }

  GameTree game;
  game.num_players_ = spec.players;

  std::vector<std::string> infoset_ids;
  for (const InfosetDecl& h : spec.infosets) infoset_ids.push_back(h.id);
  std::sort(infoset_ids.begin(), infoset_ids.end());
  for (size_t k = 0; k < infoset_ids.size(); ++k) {
    game.infoset_index_[infoset_ids[k]] = static_cast<int>(k);
  }
  game.infosets_.resize(infoset_ids.size());
  for (const InfosetDecl& decl : spec.infosets) {
    Infoset& h = game.infosets_[game.infoset_index_.at(decl.id)];
    h.id = decl.id;
    h.player = decl.player - 1;
    h.moves = decl.moves;
  }

  std::vector<std::string> node_ids;
  for (const NodeDecl& n : spec.nodes) node_ids.push_back(n.id);
  for (const TerminalDecl& z : spec.terminals) node_ids.push_back(z.id);
  std::sort(node_ids.begin(), node_ids.end());
  for (size_t k = 0; k < node_ids.size(); ++k) {
    game.node_index_[node_ids[k]] = static_cast<int>(k);
  }
  game.nodes_.resize(node_ids.size());
  game.payoffs_.resize(node_ids.size());
  for (const NodeDecl& decl : spec.nodes) {
    const int n = game.node_index_.at(decl.id);
    Node& node = game.nodes_[n];
    node.id = decl.id;
    node.kind = NodeKind::kDecision;
    node.infoset = game.infoset_index_.at(decl.infoset);
    node.children.assign(game.infosets_[node.infoset].moves.size(), -1);
    game.infosets_[node.infoset].nodes.push_back(n);
  }
  for (Infoset& h : game.infosets_) std::sort(h.nodes.begin(), h.nodes.end());
  for (const TerminalDecl& decl : spec.terminals) {
    const int n = game.node_index_.at(decl.id);
    game.nodes_[n].id = decl.id;
    game.nodes_[n].kind = NodeKind::kTerminal;
    std::vector<double> u = decl.payoffs;
    if (u.size() == 1) u.assign(spec.players, u.front());
    if (std::adjacent_find(u.begin(), u.end(), std::not_equal_to<>()) !=
        u.end()) {
      game.identical_interest_ = false;
    }
    game.payoffs_[n] = std::move(u);
    game.terminals_.push_back(n);
  }
  std::sort(game.terminals_.begin(), game.terminals_.end());

  std::vector<bool> has_parent(game.nodes_.size(), false);
  for (const EdgeDecl& e : spec.edges) {
    const int parent = game.node_index_.at(e.parent);
    const int child = game.node_index_.at(e.child);
    const int move = game.MoveIndex(game.nodes_[parent].infoset, e.move);
    game.nodes_[parent].children[move] = child;
    game.nodes_[child].parent = parent;
    game.nodes_[child].incoming_move = move;
    has_parent[child] = true;
  }
  for (size_t n = 0; n < game.nodes_.size(); ++n) {
    if (!has_parent[n]) game.root_ = static_cast<int>(n);
  }

  game.paths_.resize(game.nodes_.size());
  std::vector<int> stack = {game.root_};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    game.preorder_.push_back(n);
    const Node& node = game.nodes_[n];
    for (int move = static_cast<int>(node.children.size()) - 1; move >= 0;
         --move) {
      const int child = node.children[move];
      game.nodes_[child].depth = node.depth + 1;
      game.paths_[child] = game.paths_[n];
      game.paths_[child].push_back({node.infoset, move});
      stack.push_back(child);
    }
  }
  return game;
}

std::span<const double> GameTree::payoffs(int terminal) const {
  if (terminal < 0 || terminal >= static_cast<int>(nodes_.size()) ||
      !is_terminal(terminal)) {
    throw GameError(ErrorCode::kUnknownTerminal,
                    "node index " + std::to_string(terminal) +
                        " is not a terminal");
  }
  return payoffs_[terminal];
}

int GameTree::NodeIndex(std::string_view id) const {
  auto it = node_index_.find(std::string(id));
  if (it == node_index_.end()) {
    throw GameError(ErrorCode::kUnknownNode,
                    "unknown node " + std::string(id));
  }
  return it->second;
}

int GameTree::TerminalIndex(std::string_view id) const {
  auto it = node_index_.find(std::string(id));
  if (it == node_index_.end() || !is_terminal(it->second)) {
    throw GameError(ErrorCode::kUnknownTerminal,
                    "unknown terminal " + std::string(id));
  }
  return it->second;
}

int GameTree::InfosetIndex(std::string_view id) const {
  auto it = infoset_index_.find(std::string(id));
  if (it == infoset_index_.end()) {
    throw GameError(ErrorCode::kUnknownInfoset,
                    "unknown infoset " + std::string(id));
  }
  return it->second;
}

int GameTree::MoveIndex(int infoset, std::string_view move) const {
  if (infoset < 0 || infoset >= num_infosets()) {
    throw GameError(ErrorCode::kUnknownInfoset,
                    "infoset index " + std::to_string(infoset));
  }
  const auto& moves = infosets_[infoset].moves;
  auto it = std::find(moves.begin(), moves.end(), move);
  if (it == moves.end()) {
    throw GameError(ErrorCode::kUnknownMove,
                    "move " + std::string(move) + " not available at " +
                        infosets_[infoset].id);
  }
  return static_cast<int>(it - moves.begin());
}

GameSpec GameTree::ToSpec() const {
  GameSpec spec;
  spec.players = num_players_;
  for (const Infoset& h : infosets_) {
    spec.infosets.push_back({h.id, h.player + 1, h.moves});
  }
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::kDecision) {
      spec.nodes.push_back({n.id, infosets_[n.infoset].id});
    }
  }
  for (const Node& n : nodes_) {
    if (n.kind != NodeKind::kDecision) continue;
    const auto& moves = infosets_[n.infoset].moves;
    std::vector<size_t> order(moves.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return moves[a] < moves[b]; });
    for (size_t k : order) {
      spec.edges.push_back({n.id, moves[k], nodes_[n.children[k]].id});
    }
  }
  for (int z : terminals_) {
    const auto& u = payoffs_[z];
    bool shared = std::adjacent_find(u.begin(), u.end(),
                                     std::not_equal_to<>()) == u.end();
    spec.terminals.push_back(
        {nodes_[z].id, shared ? std::vector<double>{u.front()} : u});
  }
  return spec;
}

bool CheckLemma1Class(const GameTree& game) {
  for (const Infoset& h : game.infosets()) {
    if (h.nodes.size() < 2) continue;
    bool all_terminal = true;
    std::set<int> successor_infosets;
    for (int n : h.nodes) {
      for (int child : game.node(n).children) {
        if (game.is_terminal(child)) {
          successor_infosets.insert(-1);
        } else {
          all_terminal = false;
          successor_infosets.insert(game.node(child).infoset);
        }
      }
    }
    if (!all_terminal && successor_infosets.size() != 1) return false;
  }
  return true;
}

double GameMetrics::RepetitionThreshold() const {
  return std::pow(1.0 - delta_min / (8.0 * u_max), 1.0 / l_max);
}

GameMetrics ComputeMetrics(const GameTree& game, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw GameError(ErrorCode::kBadParameter, "rho must lie in (0,1)");
  }
  if (!game.identical_interest()) {
    throw GameError(ErrorCode::kNotIdenticalInterest,
                    "metrics need a common payoff function");
  }
  GameMetrics metrics;
  metrics.rho = rho;
  metrics.num_terminals = static_cast<int>(game.terminals().size());
  std::vector<double> values;
  for (int z : game.terminals()) {
    const double u = game.payoff(z, 0);
    metrics.l_max = std::max(metrics.l_max, game.node(z).depth);
    metrics.u_max = std::max(metrics.u_max, std::abs(u));
    values.push_back(u);
  }
  std::sort(values.begin(), values.end());
  if (values.size() >= 2) {
    metrics.delta_min = values[1] - values[0];
    for (size_t k = 2; k < values.size(); ++k) {
      metrics.delta_min = std::min(metrics.delta_min, values[k] - values[k - 1]);
    }
  }
  metrics.distinct_payoffs = metrics.delta_min > 0.0;
  if (metrics.distinct_payoffs) {
    const double threshold = metrics.RepetitionThreshold();
    int k = 0;
    while (1.0 - std::pow(1.0 - rho, k + 1) < threshold) ++k;
    metrics.k_max = k;
  }
  return metrics;
}

}  // namespace fplab
