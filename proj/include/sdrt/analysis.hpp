#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdrt/model.hpp"
#include "sdrt/transcript.hpp"

namespace sdrt {

struct ReportSummary {
  int frontier_ruptures = 0;
  int ascents_without_closure = 0;
  int decisive = 0;
  int non_decisive = 0;

  bool operator==(const ReportSummary&) const = default;
};

// Both views of one dialogue. Violations come only from the charity view,
// repair notes only from the repair view.
struct AnalysisReport {
  std::string dialogue_id;
  DiscourseGraph charity_view;
  DiscourseGraph repair_view;
  std::vector<ViolationRecord> violations;
  std::vector<RepairNote> repair_notes;
  ReportSummary summary;
};

// Runs charity and repair act-by-act in document order and classifies every
// violation. Unannotated acts go through the resolver.
AnalysisReport analyze(const TranscriptDocument& doc);

// Decisiveness: the enclosing transaction (the trigger's theme box plus its
// boundary acts) spans >= 3 turns and the violation implicates 3
// constituents; rank is act for sub-acts of one complex intervention,
// intervention otherwise.
ViolationRecord classify_decisive(const ViolationRecord& v,
                                  const DiscourseGraph& graph);

struct CorpusSummary {
  int frontier_ruptures = 0;
  int ascents_without_closure = 0;
  int decisive = 0;
  int non_decisive = 0;
  // One row per dialogue, ready for the stats module. Population and
  // medication default to SCH-P/none unless supplied via metadata.
  std::vector<SequenceRecord> rows;
};

struct DialogueMeta {
  Population population = Population::SchP;
  Medication medication = Medication::None;
};

CorpusSummary corpus_summary(
    const std::vector<AnalysisReport>& reports,
    const std::map<std::string, DialogueMeta>& meta = {});

std::string report_to_json(const AnalysisReport& report);
std::string report_to_text(const AnalysisReport& report);

}  // namespace sdrt
