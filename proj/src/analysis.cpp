#include "sdrt/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nlohmann/json.hpp"
#include "sdrt/engine.hpp"
#include "sdrt/errors.hpp"

namespace sdrt {
namespace {

using ordered_json = nlohmann::ordered_json;

// Fallback relation for unannotated acts: stay inside the current theme box
// by elaborating, start a new segment by narration.
Relation default_relation(const DiscourseGraph& g, const Act& act,
                          const NodeId& site) {
  if (site == kRootId) return Relation::Narration;
  int b = g.box_of(site);
  if (b >= 0 && normalize_theme(g.boxes[static_cast<std::size_t>(b) - 1].theme) ==
                    normalize_theme(act.theme))
    return Relation::Elaboration;
  return Relation::Narration;
}

void attach_into(GraphBuilder& builder, const Act& act,
                 const std::optional<Annotation>& annotation,
                 std::vector<ViolationRecord>* violations,
                 std::vector<RepairNote>* notes) {
  NodeId site;
  Relation relation;
  if (annotation) {
    site = annotation->site;
    relation = annotation->relation;
  } else {
    // Resolver needs the relation to break ties; derive both from a first
    // pass against the current frontier.
    site = resolve_site(builder.graph(), act, Relation::Elaboration);
    relation = default_relation(builder.graph(), act, site);
    site = resolve_site(builder.graph(), act, relation);
  }
  AttachOutcome outcome = builder.attach(act, site, relation);
  if (violations && outcome.violation) violations->push_back(*outcome.violation);
  if (notes && outcome.repair) notes->push_back(*outcome.repair);
}

}  // namespace

AnalysisReport analyze(const TranscriptDocument& doc) {
  AnalysisReport report;
  report.dialogue_id = doc.dialogue_id;

  GraphBuilder charity(Mode::Charity);
  GraphBuilder repair(Mode::Repair);
  for (const Act& act : doc.all_acts()) {
    const Turn* turn = nullptr;
    for (const auto& t : doc.turns)
      if (t.turn_id == act.turn_id) turn = &t;
    const std::size_t sub =
        static_cast<std::size_t>(std::stoul(act.id.substr(act.id.rfind('.') + 1)));
    const std::optional<Annotation>& annotation = turn->acts[sub - 1].annotation;

    attach_into(charity, act, annotation, &report.violations, nullptr);
    attach_into(repair, act, annotation, nullptr, &report.repair_notes);
  }

  report.charity_view = charity.take();
  report.repair_view = repair.take();

  for (auto& v : report.violations) {
    v = classify_decisive(v, report.charity_view);
    if (v.kind == ViolationKind::RightFrontierRupture)
      ++report.summary.frontier_ruptures;
    else
      ++report.summary.ascents_without_closure;
    if (v.decisive)
      ++report.summary.decisive;
    else
      ++report.summary.non_decisive;
  }
  return report;
}

ViolationRecord classify_decisive(const ViolationRecord& v,
                                  const DiscourseGraph& graph) {
  ViolationRecord out = v;

  // Transaction: the members of the trigger's theme box plus the acts
  // immediately bordering that span in document order.
  int box = graph.box_of(v.trigger_node);
  std::set<std::string> turns;
  if (box >= 0) {
    const ThemeBox& b = graph.boxes[static_cast<std::size_t>(box) - 1];
    std::size_t first = graph.acts.size(), last = 0;
    for (std::size_t i = 0; i < graph.acts.size(); ++i) {
      const auto& a = graph.acts[i];
      if (std::find(b.members.begin(), b.members.end(), a.id) !=
          b.members.end()) {
        first = std::min(first, i);
        last = std::max(last, i);
        turns.insert(a.turn_id);
      }
    }
    if (first > 0) turns.insert(graph.acts[first - 1].turn_id);
    if (last + 1 < graph.acts.size()) turns.insert(graph.acts[last + 1].turn_id);
  } else {
    turns.insert(graph.act(v.trigger_node).turn_id);
  }
  out.turn_span = static_cast<int>(turns.size());

  const std::string& trigger_turn = graph.act(v.trigger_node).turn_id;
  int acts_in_turn = 0;
  for (const auto& a : graph.acts)
    if (a.turn_id == trigger_turn) ++acts_in_turn;

  out.constituent_rank =
      acts_in_turn >= 2 ? ConstituentRank::Act : ConstituentRank::Intervention;
  const int constituents = out.constituent_rank == ConstituentRank::Act
                               ? acts_in_turn
                               : out.turn_span;
  out.decisive = out.turn_span >= 3 && constituents >= 3;
  return out;
}

CorpusSummary corpus_summary(const std::vector<AnalysisReport>& reports,
                             const std::map<std::string, DialogueMeta>& meta) {
  CorpusSummary sum;
  for (const auto& r : reports) {
    sum.frontier_ruptures += r.summary.frontier_ruptures;
    sum.ascents_without_closure += r.summary.ascents_without_closure;
    sum.decisive += r.summary.decisive;
    sum.non_decisive += r.summary.non_decisive;

    SequenceRecord rec;
    rec.sequence_id = r.dialogue_id;
    auto it = meta.find(r.dialogue_id);
    if (it != meta.end()) {
      rec.population = it->second.population;
      rec.medication = it->second.medication;
    }
    if (r.summary.decisive > 0)
      rec.discontinuity = Discontinuity::Decisive;
    else if (!r.violations.empty())
      rec.discontinuity = Discontinuity::NonDecisive;
    else
      rec.discontinuity = Discontinuity::None;
    sum.rows.push_back(std::move(rec));
  }
  return sum;
}

std::string report_to_json(const AnalysisReport& report) {
  ordered_json j;
  j["dialogue"] = report.dialogue_id;
  j["summary"]["frontier_ruptures"] = report.summary.frontier_ruptures;
  j["summary"]["ascents_without_closure"] = report.summary.ascents_without_closure;
  j["summary"]["decisive"] = report.summary.decisive;
  j["summary"]["non_decisive"] = report.summary.non_decisive;
  j["violations"] = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json n;
    n["kind"] = std::string(to_string(v.kind));
    n["trigger"] = v.trigger_node;
    n["site"] = v.site_node;
    n["open_nodes"] = v.open_nodes;
    n["rank"] = std::string(to_string(v.constituent_rank));
    n["decisive"] = v.decisive;
    n["turn_span"] = v.turn_span;
    j["violations"].push_back(std::move(n));
  }
  j["repair_notes"] = ordered_json::array();
  for (const auto& n : report.repair_notes) {
    ordered_json o;
    o["act"] = n.act;
    o["requested_site"] = n.requested_site;
    o["realized_site"] = n.realized_site;
    o["theme_mismatch"] = n.theme_mismatch;
    j["repair_notes"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const AnalysisReport& report) {
  std::ostringstream out;
  out << "dialogue " << report.dialogue_id << ": "
      << report.summary.frontier_ruptures << " frontier rupture(s), "
      << report.summary.ascents_without_closure
      << " ascent(s) without closure\n";
  for (const auto& v : report.violations)
    out << "  " << to_string(v.kind) << " trigger=" << v.trigger_node
        << " site=" << v.site_node
        << " decisive=" << (v.decisive ? "yes" : "no")
        << " rank=" << to_string(v.constituent_rank) << "\n";
  for (const auto& n : report.repair_notes)
    out << "  RepairNote act=" << n.act << " requested=" << n.requested_site
        << " realized=" << n.realized_site
        << " theme_mismatch=" << (n.theme_mismatch ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace sdrt
