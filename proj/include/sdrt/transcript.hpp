#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdrt/model.hpp"

namespace sdrt {

struct Annotation {
  NodeId site;        // earlier act id, or "ROOT"
  Relation relation;

  bool operator==(const Annotation&) const = default;
};

struct ActEntry {
  std::string text;
  std::string theme;
  std::vector<Prosody> prosody;
  std::optional<Annotation> annotation;

  bool operator==(const ActEntry&) const = default;
};

struct Turn {
  std::string turn_id;
  std::string speaker;
  std::vector<ActEntry> acts;

  bool operator==(const Turn&) const = default;
};

// Parsed annotated transcript. Turn ids strictly increase in document order
// under natural comparison of their numeric suffix (B124 < A125 < B126).
struct TranscriptDocument {
  std::string dialogue_id;
  std::map<std::string, SpeakerRole> speakers;
  std::vector<Turn> turns;

  // Flattened acts in document order with "turn.subIndex" ids.
  std::vector<Act> all_acts() const;
  std::size_t act_count() const;

  bool operator==(const TranscriptDocument&) const = default;
};

enum class Population { SchP, SchD, Hc };
enum class Medication { A, S, None };
enum class Discontinuity { None, NonDecisive, Decisive };

std::string_view to_string(Population p);
std::string_view to_string(Medication m);
std::string_view to_string(Discontinuity d);

// One conversational transaction of the corpus, classified.
struct SequenceRecord {
  std::string sequence_id;
  Population population;
  Medication medication;
  Discontinuity discontinuity;

  bool operator==(const SequenceRecord&) const = default;
};

// Maps a parenthesized prosodic glyph to its token: (↑) rise, (↓) fall,
// (→) continuation, (...) pause. Throws DomainError on anything else.
Prosody prosody_from_glyph(std::string_view glyph);
std::string_view glyph_for(Prosody p);

TranscriptDocument parse_transcript(std::istream& in);
TranscriptDocument parse_transcript(const std::string& text);
std::string serialize_transcript(const TranscriptDocument& doc);

// CSV with header sequence_id,population,medication,discontinuity.
std::vector<SequenceRecord> load_sequence_records(std::istream& in);
std::vector<SequenceRecord> load_sequence_records(const std::string& text);
std::string serialize_sequence_records(const std::vector<SequenceRecord>& rs);

enum class ExportFormat { Dot, Json, Text };
ExportFormat parse_export_format(std::string_view s);

// DOT: subordinating edges vertical, coordinating edges at equal rank,
// theme boxes as dashed clusters. JSON round-trips via import_tree_json.
// Text is an indented outline.
std::string export_tree(const DiscourseGraph& g, ExportFormat format,
                        const std::vector<ViolationRecord>& violations = {});
DiscourseGraph import_tree_json(const std::string& json_text);

}  // namespace sdrt
