#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdrt/relations.hpp"

namespace sdrt {

using NodeId = std::string;

// Distinguished attachment root; carries no theme and no text.
inline const NodeId kRootId = "ROOT";

enum class Prosody { Rise, Fall, Continuation, Pause };
enum class SpeakerRole { Patient, Interviewer, Unspecified };
enum class Mode { Strict, Charity, Repair };
enum class BoxStatus { Open, Closed };
enum class ViolationKind { RightFrontierRupture, AscentWithoutClosure };
enum class ConstituentRank { Intervention, Act };

std::string_view to_string(Prosody p);
std::string_view to_string(SpeakerRole r);
std::string_view to_string(Mode m);
std::string_view to_string(ViolationKind k);
std::string_view to_string(ConstituentRank r);

SpeakerRole parse_role(std::string_view s);
Mode parse_mode(std::string_view s);

// Elementary discourse unit: a turn fragment. Ids take the flat form
// "turnLabel.subIndex" (e.g. "B132.3"); sub-indices are contiguous from 1
// within a turn.
struct Act {
  NodeId id;
  std::string turn_id;
  std::string speaker;
  SpeakerRole role = SpeakerRole::Unspecified;
  std::string text;
  std::string theme;
  std::vector<Prosody> prosody;

  bool operator==(const Act&) const = default;
};

struct Edge {
  NodeId site;   // parent in the realized tree
  NodeId node;   // newly attached act
  Relation relation;

  bool operator==(const Edge&) const = default;
};

// Dashed thematic grouping; every non-root node belongs to exactly one box
// and all members share the box theme.
struct ThemeBox {
  int box_id = 0;
  std::string theme;
  std::vector<NodeId> members;
  BoxStatus status = BoxStatus::Open;

  bool operator==(const ThemeBox&) const = default;
};

struct AttachmentEvent {
  NodeId new_node;
  NodeId requested_site;
  Relation relation;
  std::vector<NodeId> frontier_snapshot;  // frontier before the attachment
  bool on_frontier = false;               // requested_site in snapshot
  Mode mode = Mode::Strict;

  bool operator==(const AttachmentEvent&) const = default;
};

struct ViolationRecord {
  ViolationKind kind;
  NodeId trigger_node;
  NodeId site_node;
  std::vector<NodeId> open_nodes;  // non-empty iff AscentWithoutClosure
  ConstituentRank constituent_rank = ConstituentRank::Intervention;
  bool decisive = false;
  int turn_span = 0;  // turns in the enclosing transaction

  bool operator==(const ViolationRecord&) const = default;
};

// Repair-view divergence: the realized site differs from the annotated one,
// surfacing a semantic inconsistency when themes disagree.
struct RepairNote {
  NodeId act;
  NodeId requested_site;
  NodeId realized_site;
  bool theme_mismatch = false;

  bool operator==(const RepairNote&) const = default;
};

struct ExpectationEntry {
  Relation opened_by;  // subordinating opener (Question, ...)
  bool open = true;
  std::optional<NodeId> closed_by;

  bool operator==(const ExpectationEntry&) const = default;
};

// Rooted attachment tree with typed edges, theme boxes, the attachment
// history and the open-expectation ledger. Built act by act by the engine;
// treat completed graphs as immutable snapshots.
struct DiscourseGraph {
  std::vector<Act> acts;                       // document order
  std::unordered_map<NodeId, Edge> parent;     // child id -> incoming edge
  std::vector<AttachmentEvent> history;
  std::vector<ThemeBox> boxes;
  std::map<NodeId, ExpectationEntry> expectations;
  std::vector<NodeId> frontier;                // maintained incrementally

  bool contains(const NodeId& id) const;
  const Act& act(const NodeId& id) const;      // throws on unknown id
  const Edge* parent_edge(const NodeId& id) const;  // null for root
  // True when `above` is a proper ancestor of `below` in the realized tree.
  bool is_ancestor(const NodeId& above, const NodeId& below) const;
  int box_of(const NodeId& id) const;          // -1 for root / unknown
  std::size_t node_count() const { return acts.size() + 1; }  // incl. root

  bool operator==(const DiscourseGraph& o) const {
    return acts == o.acts && parent == o.parent && history == o.history &&
           boxes == o.boxes && expectations == o.expectations;
  }
};

// Case-folded, whitespace-normalized theme label; theme comparison is exact
// equality on this form.
std::string normalize_theme(std::string_view theme);

}  // namespace sdrt
