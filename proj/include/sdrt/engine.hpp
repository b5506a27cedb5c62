#pragma once

#include <optional>
#include <vector>

#include "sdrt/model.hpp"

namespace sdrt {

// Ordered bottom-up: most recently attached node first, root last.
using Frontier = std::vector<NodeId>;

// Recomputes the right frontier from the realized tree: the last attached
// node plus every ancestor whose edge down toward it is subordinating, plus
// the root. A coordinating link closes its site and everything left of it.
Frontier right_frontier(const DiscourseGraph& g);

// Default site for an unannotated act: lowest frontier node whose theme box
// matches the act's theme; failing that, for a closing relation the lowest
// frontier node awaiting it; failing that the lowest non-root frontier node
// when the theme is entirely new, or the root when the theme lives only off
// the frontier. The resolver never proposes an off-frontier site.
NodeId resolve_site(const DiscourseGraph& g, const Act& act, Relation relation);

struct AttachOutcome {
  NodeId realized_site;
  bool on_frontier = false;  // requested site was on the frontier
  std::optional<ViolationRecord> violation;
  std::optional<RepairNote> repair;
};

// Builds one view of a dialogue, act by act in document order. Strict mode
// rejects off-frontier sites; charity keeps the annotated site and records
// the rupture; repair re-targets to the frontier and records the divergence.
class GraphBuilder {
 public:
  explicit GraphBuilder(Mode mode) : mode_(mode) {}

  AttachOutcome attach(const Act& act, const NodeId& requested_site,
                       Relation relation);

  // Attachment at a frontier site strictly above the previous attachment
  // point; emits AscentWithoutClosure when open expectations are left behind
  // and the ascent is not a licit interviewer re-opening. attach() detects
  // ascents on its own; this entry point additionally checks the
  // precondition.
  AttachOutcome ascend(const Act& act, const NodeId& target, Relation relation);

  const DiscourseGraph& graph() const { return graph_; }
  DiscourseGraph take() { return std::move(graph_); }
  Mode mode() const { return mode_; }

 private:
  NodeId repair_target(const Act& act) const;
  void update_boxes(const Act& act, const NodeId& site);
  void update_frontier(const NodeId& node, const NodeId& site, Relation rel,
                       bool site_was_on_frontier);
  std::vector<NodeId> open_at_or_below(const NodeId& point) const;

  Mode mode_;
  DiscourseGraph graph_{.frontier = {kRootId}};
  std::optional<NodeId> prev_site_;  // realized site of the previous act
  int current_box_ = -1;
  int next_box_id_ = 1;
};

}  // namespace sdrt
