#include "sdrt/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "nlohmann/json.hpp"
#include "sdrt/engine.hpp"
#include "sdrt/errors.hpp"

namespace sdrt {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kRise = "↑";
constexpr std::string_view kFall = "↓";
constexpr std::string_view kCont = "→";

std::vector<Prosody> scan_prosody(const std::string& text) {
  std::vector<Prosody> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '(') continue;
    auto starts = [&](std::string_view token) {
      return text.compare(i + 1, token.size(), token) == 0 &&
             i + 1 + token.size() < text.size() &&
             text[i + 1 + token.size()] == ')';
    };
    if (starts(kRise)) out.push_back(Prosody::Rise);
    else if (starts(kFall)) out.push_back(Prosody::Fall);
    else if (starts(kCont)) out.push_back(Prosody::Continuation);
    else if (text.compare(i, 5, "(...)") == 0) out.push_back(Prosody::Pause);
  }
  return out;
}

// Trailing digits of a turn label, e.g. B132 -> 132. -1 when absent.
long numeric_suffix(const std::string& turn_id) {
  std::size_t pos = turn_id.size();
  while (pos > 0 && std::isdigit(static_cast<unsigned char>(turn_id[pos - 1])))
    --pos;
  if (pos == turn_id.size()) return -1;
  return std::stol(turn_id.substr(pos));
}

const std::regex kActLine(
    R"(^(\S+)\.(\d+)\s+(\S+)\s+theme=(\S+)(?:\s+attach=([^:\s]+):(\S+))?\s*\|\s?(.*)$)");

}  // namespace

std::vector<Act> TranscriptDocument::all_acts() const {
  std::vector<Act> out;
  for (const auto& turn : turns) {
    int sub = 1;
    for (const auto& entry : turn.acts) {
      Act act;
      act.id = turn.turn_id + "." + std::to_string(sub++);
      act.turn_id = turn.turn_id;
      act.speaker = turn.speaker;
      auto it = speakers.find(turn.speaker);
      act.role = it != speakers.end() ? it->second : SpeakerRole::Unspecified;
      act.text = entry.text;
      act.theme = entry.theme;
      act.prosody = entry.prosody;
      out.push_back(std::move(act));
    }
  }
  return out;
}

std::size_t TranscriptDocument::act_count() const {
  std::size_t n = 0;
  for (const auto& t : turns) n += t.acts.size();
  return n;
}

std::string_view to_string(Population p) {
  switch (p) {
    case Population::SchP: return "SCH-P";
    case Population::SchD: return "SCH-D";
    case Population::Hc: return "HC";
  }
  return "?";
}

std::string_view to_string(Medication m) {
  switch (m) {
    case Medication::A: return "A";
    case Medication::S: return "S";
    case Medication::None: return "none";
  }
  return "?";
}

std::string_view to_string(Discontinuity d) {
  switch (d) {
    case Discontinuity::None: return "none";
    case Discontinuity::NonDecisive: return "non-decisive";
    case Discontinuity::Decisive: return "decisive";
  }
  return "?";
}

Prosody prosody_from_glyph(std::string_view glyph) {
  std::string_view g = glyph;
  if (g.size() >= 2 && g.front() == '(' && g.back() == ')' && g != "(...)")
    g = g.substr(1, g.size() - 2);
  if (g == kRise) return Prosody::Rise;
  if (g == kFall) return Prosody::Fall;
  if (g == kCont) return Prosody::Continuation;
  if (g == "(...)" || g == "...") return Prosody::Pause;
  throw DomainError("unknown prosodic glyph: '" + std::string(glyph) + "'");
}

std::string_view glyph_for(Prosody p) {
  switch (p) {
    case Prosody::Rise: return "(↑)";
    case Prosody::Fall: return "(↓)";
    case Prosody::Continuation: return "(→)";
    case Prosody::Pause: return "(...)";
  }
  return "?";
}

TranscriptDocument parse_transcript(std::istream& in) {
  TranscriptDocument doc;
  std::string line;
  int lineno = 0;
  bool saw_dialogue = false;
  long prev_suffix = -1;
  std::unordered_set<std::string> seen_turns;
  std::unordered_set<std::string> seen_acts;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.find_first_not_of(" \t") == std::string::npos)
      continue;

    if (line.rfind("#dialogue", 0) == 0) {
      if (saw_dialogue) throw ParseError("duplicate #dialogue header", lineno);
      std::istringstream ss(line);
      std::string tag;
      ss >> tag >> doc.dialogue_id;
      if (doc.dialogue_id.empty())
        throw ParseError("#dialogue requires an id", lineno);
      saw_dialogue = true;
      continue;
    }
    if (line.rfind("#speaker", 0) == 0) {
      std::istringstream ss(line);
      std::string tag, speaker, role;
      ss >> tag >> speaker >> role;
      if (speaker.empty() || role.empty())
        throw ParseError("#speaker requires '<tag> <role>'", lineno);
      try {
        doc.speakers[speaker] = parse_role(role);
      } catch (const DomainError& e) {
        throw ParseError(e.what(), lineno);
      }
      continue;
    }
    if (!saw_dialogue)
      throw ParseError("expected #dialogue header before act lines", lineno);

    std::smatch m;
    if (!std::regex_match(line, m, kActLine))
      throw ParseError("malformed act line", lineno, 1);

    const std::string turn_id = m[1];
    const int sub_index = std::stoi(m[2]);
    const std::string speaker = m[3];
    const std::string act_id = turn_id + "." + m[2].str();

    if (!seen_acts.insert(act_id).second)
      throw ParseError("duplicate act id '" + act_id + "'", lineno);

    if (doc.turns.empty() || doc.turns.back().turn_id != turn_id) {
      if (seen_turns.count(turn_id))
        throw ParseError("turn '" + turn_id + "' is not contiguous", lineno);
      seen_turns.insert(turn_id);
      long suffix = numeric_suffix(turn_id);
      if (suffix < 0)
        throw ParseError("turn id '" + turn_id + "' lacks a numeric suffix",
                         lineno);
      if (suffix <= prev_suffix)
        throw ParseError("turn ids must strictly increase ('" + turn_id + "')",
                         lineno);
      prev_suffix = suffix;
      if (sub_index != 1)
        throw ParseError("first act of turn '" + turn_id + "' must be .1",
                         lineno);
      doc.turns.push_back(Turn{.turn_id = turn_id, .speaker = speaker});
    } else {
      Turn& turn = doc.turns.back();
      if (turn.speaker != speaker)
        throw ParseError("turn '" + turn_id + "' switches speaker", lineno);
      if (sub_index != static_cast<int>(turn.acts.size()) + 1)
        throw ParseError("act sub-indices of turn '" + turn_id +
                             "' must be contiguous from 1",
                         lineno);
    }

    ActEntry entry;
    entry.theme = m[4];
    entry.text = m[7];
    entry.prosody = scan_prosody(entry.text);
    if (m[5].matched) {
      const std::string site = m[5];
      if (site != kRootId && !seen_acts.count(site))
        throw ParseError("attachment site '" + site +
                             "' does not name an earlier act",
                         lineno);
      try {
        entry.annotation = Annotation{site, parse_relation(m[6].str())};
      } catch (const UnknownRelationError& e) {
        throw ParseError(e.what(), lineno);
      }
    }
    doc.turns.back().acts.push_back(std::move(entry));
  }
  if (!saw_dialogue) throw ParseError("missing #dialogue header", lineno + 1);
  return doc;
}

TranscriptDocument parse_transcript(const std::string& text) {
  std::istringstream ss(text);
  return parse_transcript(ss);
}

std::string serialize_transcript(const TranscriptDocument& doc) {
  std::ostringstream out;
  out << "#dialogue " << doc.dialogue_id << "\n";
  for (const auto& [tag, role] : doc.speakers)
    out << "#speaker " << tag << " " << to_string(role) << "\n";
  for (const auto& turn : doc.turns) {
    int sub = 1;
    for (const auto& act : turn.acts) {
      out << turn.turn_id << "." << sub++ << " " << turn.speaker
          << " theme=" << act.theme;
      if (act.annotation)
        out << " attach=" << act.annotation->site << ":"
            << to_string(act.annotation->relation);
      out << " | " << act.text << "\n";
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Population parse_population(const std::string& s, int row) {
  if (s == "SCH-P") return Population::SchP;
  if (s == "SCH-D") return Population::SchD;
  if (s == "HC") return Population::Hc;
  throw ParseError("unknown population '" + s + "'", row);
}

Medication parse_medication(const std::string& s, int row) {
  if (s == "A") return Medication::A;
  if (s == "S") return Medication::S;
  if (s == "none") return Medication::None;
  throw ParseError("unknown medication '" + s + "'", row);
}

Discontinuity parse_discontinuity(const std::string& s, int row) {
  if (s == "none") return Discontinuity::None;
  if (s == "non-decisive") return Discontinuity::NonDecisive;
  if (s == "decisive") return Discontinuity::Decisive;
  throw ParseError("unknown discontinuity '" + s + "'", row);
}

}  // namespace

std::vector<SequenceRecord> load_sequence_records(std::istream& in) {
  std::vector<SequenceRecord> out;
  std::string line;
  int row = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "sequence_id,population,medication,discontinuity")
        throw ParseError("bad header: '" + line + "'", row);
      saw_header = true;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw ParseError("expected 4 fields, got " +
                           std::to_string(fields.size()),
                       row);
    SequenceRecord rec;
    rec.sequence_id = fields[0];
    rec.population = parse_population(fields[1], row);
    rec.medication = parse_medication(fields[2], row);
    rec.discontinuity = parse_discontinuity(fields[3], row);
    if (rec.population == Population::Hc && rec.medication != Medication::None)
      throw ParseError("HC records must have medication=none", row);
    out.push_back(std::move(rec));
  }
  if (!saw_header) throw ParseError("missing header", 1);
  return out;
}

std::vector<SequenceRecord> load_sequence_records(const std::string& text) {
  std::istringstream ss(text);
  return load_sequence_records(ss);
}

std::string serialize_sequence_records(const std::vector<SequenceRecord>& rs) {
  std::ostringstream out;
  out << "sequence_id,population,medication,discontinuity\n";
  for (const auto& r : rs)
    out << r.sequence_id << "," << to_string(r.population) << ","
        << to_string(r.medication) << "," << to_string(r.discontinuity)
        << "\n";
  return out.str();
}

ExportFormat parse_export_format(std::string_view s) {
  if (s == "dot") return ExportFormat::Dot;
  if (s == "json") return ExportFormat::Json;
  if (s == "text") return ExportFormat::Text;
  throw DomainError("unknown export format: '" + std::string(s) + "'");
}

namespace {

ordered_json violation_to_json(const ViolationRecord& v) {
  ordered_json j;
  j["kind"] = std::string(to_string(v.kind));
  j["trigger"] = v.trigger_node;
  j["site"] = v.site_node;
  j["open_nodes"] = v.open_nodes;
  j["rank"] = std::string(to_string(v.constituent_rank));
  j["decisive"] = v.decisive;
  j["turn_span"] = v.turn_span;
  return j;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string export_dot(const DiscourseGraph& g,
                       const std::vector<ViolationRecord>& violations) {
  std::unordered_set<std::string> triggers;
  for (const auto& v : violations) triggers.insert(v.trigger_node);

  std::ostringstream out;
  out << "digraph discourse {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box, fontsize=10];\n";
  out << "  \"ROOT\" [shape=point, label=\"\"];\n";
  for (const auto& box : g.boxes) {
    out << "  subgraph cluster_" << box.box_id << " {\n";
    out << "    style=dashed;\n";
    out << "    label=\"" << dot_escape(box.theme) << "\";\n";
    for (const auto& m : box.members) {
      out << "    \"" << dot_escape(m) << "\"";
      if (triggers.count(m)) out << " [color=red]";
      out << ";\n";
    }
    out << "  }\n";
  }
  for (const auto& act : g.acts) {
    const Edge* e = g.parent_edge(act.id);
    if (e == nullptr) continue;
    out << "  \"" << dot_escape(e->site) << "\" -> \"" << dot_escape(e->node)
        << "\" [label=\"" << to_string(e->relation) << "\"";
    if (is_coordinating(e->relation)) out << ", style=dashed, constraint=false";
    out << "];\n";
    if (is_coordinating(e->relation) && e->site != kRootId)
      out << "  {rank=same; \"" << dot_escape(e->site) << "\"; \""
          << dot_escape(e->node) << "\";}\n";
  }
  out << "}\n";
  return out.str();
}

void outline_node(const DiscourseGraph& g, const NodeId& node, int depth,
                  std::ostringstream& out) {
  if (node != kRootId) {
    const Act& a = g.act(node);
    const Edge* e = g.parent_edge(node);
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << node
        << " [" << to_string(e->relation) << "] theme=" << a.theme << " | "
        << a.text << "\n";
  } else {
    out << "ROOT\n";
  }
  for (const auto& act : g.acts) {
    const Edge* e = g.parent_edge(act.id);
    if (e != nullptr && e->site == node)
      outline_node(g, act.id, depth + 1, out);
  }
}

std::string export_text(const DiscourseGraph& g,
                        const std::vector<ViolationRecord>& violations) {
  std::ostringstream out;
  outline_node(g, kRootId, 0, out);
  for (const auto& v : violations)
    out << "! " << to_string(v.kind) << " trigger=" << v.trigger_node
        << " site=" << v.site_node
        << " decisive=" << (v.decisive ? "yes" : "no")
        << " rank=" << to_string(v.constituent_rank) << "\n";
  return out.str();
}

std::string export_json(const DiscourseGraph& g,
                        const std::vector<ViolationRecord>& violations) {
  ordered_json j;
  j["nodes"] = ordered_json::array();
  for (const auto& a : g.acts) {
    ordered_json n;
    n["id"] = a.id;
    n["turn"] = a.turn_id;
    n["speaker"] = a.speaker;
    n["role"] = std::string(to_string(a.role));
    n["theme"] = a.theme;
    n["text"] = a.text;
    auto& pros = n["prosody"] = ordered_json::array();
    for (auto p : a.prosody) pros.push_back(std::string(to_string(p)));
    j["nodes"].push_back(std::move(n));
  }
  j["edges"] = ordered_json::array();
  for (const auto& a : g.acts) {
    const Edge* e = g.parent_edge(a.id);
    ordered_json n;
    n["site"] = e->site;
    n["node"] = e->node;
    n["relation"] = std::string(to_string(e->relation));
    j["edges"].push_back(std::move(n));
  }
  j["boxes"] = ordered_json::array();
  for (const auto& b : g.boxes) {
    ordered_json n;
    n["id"] = b.box_id;
    n["theme"] = b.theme;
    n["status"] = b.status == BoxStatus::Open ? "open" : "closed";
    n["members"] = b.members;
    j["boxes"].push_back(std::move(n));
  }
  j["history"] = ordered_json::array();
  for (const auto& ev : g.history) {
    ordered_json n;
    n["node"] = ev.new_node;
    n["requested_site"] = ev.requested_site;
    n["relation"] = std::string(to_string(ev.relation));
    n["frontier"] = ev.frontier_snapshot;
    n["on_frontier"] = ev.on_frontier;
    n["mode"] = std::string(to_string(ev.mode));
    j["history"].push_back(std::move(n));
  }
  j["expectations"] = ordered_json::array();
  for (const auto& [node, entry] : g.expectations) {
    ordered_json n;
    n["node"] = node;
    n["opened_by"] = std::string(to_string(entry.opened_by));
    n["open"] = entry.open;
    if (entry.closed_by) n["closed_by"] = *entry.closed_by;
    j["expectations"].push_back(std::move(n));
  }
  j["violations"] = ordered_json::array();
  for (const auto& v : violations) j["violations"].push_back(violation_to_json(v));
  return j.dump(2) + "\n";
}

}  // namespace

std::string export_tree(const DiscourseGraph& g, ExportFormat format,
                        const std::vector<ViolationRecord>& violations) {
  switch (format) {
    case ExportFormat::Dot: return export_dot(g, violations);
    case ExportFormat::Json: return export_json(g, violations);
    case ExportFormat::Text: return export_text(g, violations);
  }
  throw DomainError("bad export format");
}

DiscourseGraph import_tree_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  DiscourseGraph g;
  for (const auto& n : j.at("nodes")) {
    Act a;
    a.id = n.at("id").get<std::string>();
    a.turn_id = n.at("turn").get<std::string>();
    a.speaker = n.at("speaker").get<std::string>();
    a.role = parse_role(n.at("role").get<std::string>());
    a.theme = n.at("theme").get<std::string>();
    a.text = n.at("text").get<std::string>();
    for (const auto& p : n.at("prosody")) {
      const std::string s = p.get<std::string>();
      if (s == "rise") a.prosody.push_back(Prosody::Rise);
      else if (s == "fall") a.prosody.push_back(Prosody::Fall);
      else if (s == "continuation") a.prosody.push_back(Prosody::Continuation);
      else if (s == "pause") a.prosody.push_back(Prosody::Pause);
      else throw DomainError("unknown prosody token: '" + s + "'");
    }
    g.acts.push_back(std::move(a));
  }
  for (const auto& n : j.at("edges")) {
    Edge e;
    e.site = n.at("site").get<std::string>();
    e.node = n.at("node").get<std::string>();
    e.relation = parse_relation(n.at("relation").get<std::string>());
    g.parent.emplace(e.node, e);
  }
  for (const auto& n : j.at("boxes")) {
    ThemeBox b;
    b.box_id = n.at("id").get<int>();
    b.theme = n.at("theme").get<std::string>();
    b.status = n.at("status").get<std::string>() == "open" ? BoxStatus::Open
                                                           : BoxStatus::Closed;
    for (const auto& m : n.at("members"))
      b.members.push_back(m.get<std::string>());
    g.boxes.push_back(std::move(b));
  }
  for (const auto& n : j.at("history")) {
    AttachmentEvent ev;
    ev.new_node = n.at("node").get<std::string>();
    ev.requested_site = n.at("requested_site").get<std::string>();
    ev.relation = parse_relation(n.at("relation").get<std::string>());
    for (const auto& f : n.at("frontier"))
      ev.frontier_snapshot.push_back(f.get<std::string>());
    ev.on_frontier = n.at("on_frontier").get<bool>();
    ev.mode = parse_mode(n.at("mode").get<std::string>());
    g.history.push_back(std::move(ev));
  }
  for (const auto& n : j.at("expectations")) {
    ExpectationEntry e;
    e.opened_by = parse_relation(n.at("opened_by").get<std::string>());
    e.open = n.at("open").get<bool>();
    if (n.contains("closed_by"))
      e.closed_by = n.at("closed_by").get<std::string>();
    g.expectations.emplace(n.at("node").get<std::string>(), std::move(e));
  }
  g.frontier = right_frontier(g);
  return g;
}

}  // namespace sdrt
