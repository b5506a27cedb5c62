#include "sdrt/engine.hpp"

#include <algorithm>

#include "sdrt/errors.hpp"

namespace sdrt {

Frontier right_frontier(const DiscourseGraph& g) {
  if (g.acts.empty()) return {kRootId};
  const NodeId& last = g.acts.back().id;
  Frontier out;
  out.push_back(last);
  NodeId child = last;
  while (child != kRootId) {
    const Edge* e = g.parent_edge(child);
    if (e == nullptr) throw DomainError("detached node: '" + child + "'");
    const NodeId& node = e->site;
    // The site of a coordinating edge is closed by its coordinate; the root
    // stays available regardless.
    if (node == kRootId || is_subordinating(e->relation)) out.push_back(node);
    child = node;
  }
  if (out.back() != kRootId) out.push_back(kRootId);
  return out;
}

NodeId resolve_site(const DiscourseGraph& g, const Act& act,
                    Relation relation) {
  const std::string theme = normalize_theme(act.theme);
  const Frontier& frontier = g.frontier;

  for (const NodeId& n : frontier) {
    if (n == kRootId) continue;
    int b = g.box_of(n);
    if (b >= 0 && normalize_theme(g.boxes[static_cast<std::size_t>(b) - 1].theme) == theme)
      return n;
  }

  // Theme known somewhere in the graph but not on the frontier: the resolver
  // falls back to the root rather than proposing an interior site.
  bool theme_exists = false;
  for (const auto& box : g.boxes) {
    if (normalize_theme(box.theme) == theme) {
      theme_exists = true;
      break;
    }
  }
  if (theme_exists) return kRootId;

  // Fresh theme. A closing relation targets the lowest frontier node still
  // awaiting it; otherwise stay local.
  if (is_coordinating(relation)) {
    for (const NodeId& n : frontier) {
      if (n == kRootId) continue;
      auto it = g.expectations.find(n);
      if (it != g.expectations.end() && it->second.open &&
          expected_closer(it->second.opened_by) == relation)
        return n;
    }
  }
  for (const NodeId& n : frontier) {
    if (n != kRootId) return n;
  }
  return kRootId;
}

NodeId GraphBuilder::repair_target(const Act& act) const {
  const std::string theme = normalize_theme(act.theme);
  for (const NodeId& n : graph_.frontier) {
    if (n == kRootId) continue;
    int b = graph_.box_of(n);
    if (b >= 0 &&
        normalize_theme(graph_.boxes[static_cast<std::size_t>(b) - 1].theme) ==
            theme)
      return n;
  }
  for (const NodeId& n : graph_.frontier) {
    if (n != kRootId) return n;
  }
  return kRootId;
}

std::vector<NodeId> GraphBuilder::open_at_or_below(const NodeId& point) const {
  std::vector<NodeId> out;
  for (const auto& [node, entry] : graph_.expectations) {
    if (!entry.open) continue;
    if (node == point || graph_.is_ancestor(point, node)) out.push_back(node);
  }
  // Ledger is an ordered map; restate in document order for determinism.
  std::vector<NodeId> ordered;
  for (const auto& a : graph_.acts) {
    if (std::find(out.begin(), out.end(), a.id) != out.end())
      ordered.push_back(a.id);
  }
  return ordered;
}

void GraphBuilder::update_boxes(const Act& act, const NodeId& site) {
  const std::string theme = normalize_theme(act.theme);
  int target = -1;
  if (site != kRootId) {
    int b = graph_.box_of(site);
    if (b >= 0 &&
        normalize_theme(graph_.boxes[static_cast<std::size_t>(b) - 1].theme) ==
            theme)
      target = b;
  }
  if (target < 0) {
    ThemeBox box;
    box.box_id = next_box_id_++;
    box.theme = act.theme;
    graph_.boxes.push_back(std::move(box));
    target = graph_.boxes.back().box_id;
  }
  ThemeBox& box = graph_.boxes[static_cast<std::size_t>(target) - 1];
  box.members.push_back(act.id);
  box.status = BoxStatus::Open;
  if (current_box_ >= 0 && current_box_ != target)
    graph_.boxes[static_cast<std::size_t>(current_box_) - 1].status =
        BoxStatus::Closed;
  current_box_ = target;
}

void GraphBuilder::update_frontier(const NodeId& node, const NodeId& site,
                                   Relation rel, bool site_was_on_frontier) {
  if (!site_was_on_frontier) {
    graph_.frontier = right_frontier(graph_);
    return;
  }
  Frontier next;
  next.push_back(node);
  auto it = std::find(graph_.frontier.begin(), graph_.frontier.end(), site);
  // Subordination keeps the site and its ancestors; coordination closes the
  // site (but never the root).
  if (is_coordinating(rel) && site != kRootId) ++it;
  next.insert(next.end(), it, graph_.frontier.end());
  if (next.back() != kRootId) next.push_back(kRootId);
  graph_.frontier = std::move(next);
}

AttachOutcome GraphBuilder::attach(const Act& act, const NodeId& requested_site,
                                   Relation relation) {
  if (graph_.contains(act.id))
    throw AttachError("act '" + act.id + "' is already attached");
  if (!graph_.contains(requested_site))
    throw AttachError("unknown attachment site: '" + requested_site + "'");

  const Frontier snapshot = graph_.frontier;
  const bool on_frontier =
      std::find(snapshot.begin(), snapshot.end(), requested_site) !=
      snapshot.end();

  if (mode_ == Mode::Strict && !on_frontier)
    throw StrictRejection(act.id, requested_site, snapshot);

  AttachOutcome outcome;
  outcome.on_frontier = on_frontier;
  NodeId realized = requested_site;

  if (!on_frontier) {
    if (mode_ == Mode::Charity) {
      outcome.violation = ViolationRecord{
          .kind = ViolationKind::RightFrontierRupture,
          .trigger_node = act.id,
          .site_node = requested_site,
          .open_nodes = {},
      };
    } else {  // repair
      realized = repair_target(act);
      bool mismatch = true;
      if (realized != kRootId) {
        int b = graph_.box_of(realized);
        mismatch =
            b < 0 ||
            normalize_theme(
                graph_.boxes[static_cast<std::size_t>(b) - 1].theme) !=
                normalize_theme(act.theme);
      }
      outcome.repair = RepairNote{
          .act = act.id,
          .requested_site = requested_site,
          .realized_site = realized,
          .theme_mismatch = mismatch,
      };
    }
  } else if (mode_ != Mode::Repair && prev_site_ &&
             (realized == kRootId ? *prev_site_ != kRootId
                                  : graph_.is_ancestor(realized, *prev_site_))) {
    // Ascent: frontier site strictly above the previous attachment point.
    // Licit when nothing below is left open, or when the interviewer opens a
    // new part of the exchange (a fresh expectation-opening relation).
    std::vector<NodeId> open = open_at_or_below(*prev_site_);
    const bool interviewer_reopening =
        act.role == SpeakerRole::Interviewer && opens_expectation(relation);
    if (!open.empty() && !interviewer_reopening) {
      outcome.violation = ViolationRecord{
          .kind = ViolationKind::AscentWithoutClosure,
          .trigger_node = act.id,
          .site_node = realized,
          .open_nodes = std::move(open),
      };
    }
  }

  graph_.acts.push_back(act);
  graph_.parent.emplace(act.id,
                        Edge{.site = realized, .node = act.id, .relation = relation});

  if (opens_expectation(relation))
    graph_.expectations.emplace(
        act.id, ExpectationEntry{.opened_by = relation, .open = true});
  if (realized != kRootId) {
    auto it = graph_.expectations.find(realized);
    if (it != graph_.expectations.end() && it->second.open &&
        is_coordinating(relation) &&
        expected_closer(it->second.opened_by) == relation) {
      it->second.open = false;
      it->second.closed_by = act.id;
    }
  }

  update_boxes(act, realized);

  const bool realized_on_frontier =
      std::find(snapshot.begin(), snapshot.end(), realized) != snapshot.end();
  update_frontier(act.id, realized, relation, realized_on_frontier);

  graph_.history.push_back(AttachmentEvent{
      .new_node = act.id,
      .requested_site = requested_site,
      .relation = relation,
      .frontier_snapshot = snapshot,
      .on_frontier = on_frontier,
      .mode = mode_,
  });

  outcome.realized_site = realized;
  prev_site_ = realized;
  return outcome;
}

AttachOutcome GraphBuilder::ascend(const Act& act, const NodeId& target,
                                   Relation relation) {
  const Frontier& f = graph_.frontier;
  if (std::find(f.begin(), f.end(), target) == f.end())
    throw AttachError("ascend: target '" + target + "' is not on the frontier");
  if (prev_site_ &&
      !(target == kRootId ? *prev_site_ != kRootId
                          : graph_.is_ancestor(target, *prev_site_)))
    throw AttachError(
        "ascend: target '" + target +
        "' is not strictly above the previous attachment point");
  return attach(act, target, relation);
}

}  // namespace sdrt
