#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdrt/analysis.hpp"
#include "sdrt/engine.hpp"
#include "sdrt/errors.hpp"
#include "sdrt/stats.hpp"
#include "sdrt/transcript.hpp"

namespace fs = std::filesystem;
using namespace sdrt;

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitParseError = 2;
constexpr int kExitStrictRejection = 3;

// Transcript files from the inputs, sorted by path for deterministic output.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& paths) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    fs::path path(p);
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".drt")
          files.push_back(entry.path());
    } else {
      files.push_back(path);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

TranscriptDocument parse_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_transcript(in);
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  const fs::path parent = fs::path(out_path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + out_path + "'");
  out << content;
}

struct BuildResult {
  DiscourseGraph graph;
  std::vector<ViolationRecord> violations;
};

BuildResult build_view(const TranscriptDocument& doc, Mode mode) {
  BuildResult result;
  GraphBuilder builder(mode);
  for (const Act& act : doc.all_acts()) {
    const Turn* turn = nullptr;
    for (const auto& t : doc.turns)
      if (t.turn_id == act.turn_id) turn = &t;
    std::size_t sub = std::stoul(act.id.substr(act.id.rfind('.') + 1));
    const auto& annotation = turn->acts[sub - 1].annotation;
    NodeId site;
    Relation relation;
    if (annotation) {
      site = annotation->site;
      relation = annotation->relation;
    } else {
      site = resolve_site(builder.graph(), act, Relation::Elaboration);
      relation = site == kRootId ? Relation::Narration : Relation::Elaboration;
      site = resolve_site(builder.graph(), act, relation);
    }
    auto outcome = builder.attach(act, site, relation);
    if (outcome.violation) {
      auto v = classify_decisive(*outcome.violation, builder.graph());
      result.violations.push_back(v);
    }
  }
  result.graph = builder.take();
  return result;
}

int cmd_build(const std::vector<std::string>& paths, const std::string& mode_str,
              const std::string& out, ExportFormat format, bool strict_exit) {
  for (const auto& path : collect_inputs(paths)) {
    TranscriptDocument doc;
    try {
      doc = parse_file(path);
    } catch (const ParseError& e) {
      std::cerr << path.string() << ": " << e.what() << "\n";
      return kExitParseError;
    }
    std::vector<std::pair<std::string, Mode>> views;
    if (mode_str == "dual") {
      views = {{".charity", Mode::Charity}, {".repair", Mode::Repair}};
    } else {
      views = {{"", parse_mode(mode_str)}};
    }
    for (const auto& [suffix, mode] : views) {
      BuildResult result;
      try {
        result = build_view(doc, mode);
      } catch (const StrictRejection& e) {
        std::cerr << path.string() << ": " << e.what() << "\n";
        return kExitStrictRejection;
      }
      std::string rendered = export_tree(result.graph, format, result.violations);
      std::string target = out;
      if (!out.empty() && (views.size() > 1 || collect_inputs(paths).size() > 1)) {
        const char* ext = format == ExportFormat::Dot
                              ? ".dot"
                              : (format == ExportFormat::Json ? ".json" : ".txt");
        target = (fs::path(out) / (doc.dialogue_id + suffix + ext)).string();
      }
      write_output(target, rendered);
      if (strict_exit && !result.violations.empty()) return kExitStrictRejection;
    }
  }
  return 0;
}

int cmd_check(const std::vector<std::string>& paths, const std::string& out,
              bool json) {
  std::ostringstream combined;
  bool any_violation = false;
  for (const auto& path : collect_inputs(paths)) {
    AnalysisReport report;
    try {
      report = analyze(parse_file(path));
    } catch (const ParseError& e) {
      std::cerr << path.string() << ": " << e.what() << "\n";
      return kExitParseError;
    }
    any_violation = any_violation || !report.violations.empty();
    combined << (json ? report_to_json(report) : report_to_text(report));
  }
  write_output(out, combined.str());
  return any_violation ? kExitViolations : 0;
}

int cmd_stats(const std::string& csv, const std::string& out, bool json) {
  std::vector<SequenceRecord> records;
  try {
    std::ifstream in(csv);
    if (!in) throw Error("cannot open '" + csv + "'");
    records = load_sequence_records(in);
  } catch (const ParseError& e) {
    std::cerr << csv << ": " << e.what() << "\n";
    return kExitParseError;
  }
  try {
    Table2Result t2 = table2(records);
    Table3Result t3 = table3(records);
    std::ostringstream o;
    if (json) {
      o << t2.to_json() << t3.to_json();
    } else {
      o << t2.render_text() << "\n" << t3.render_text();
    }
    write_output(out, o.str());
  } catch (const DomainError& e) {
    std::cerr << csv << ": " << e.what() << "\n";
    return kExitParseError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialogue attachment-structure auditing toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> paths;
  std::string mode = "strict";
  std::string out;
  std::string format = "json";
  bool strict_exit = false;

  auto* build = app.add_subcommand(
      "build", "Build discourse trees from annotated transcripts");
  build->add_option("paths", paths, "transcript files or directories")
      ->required();
  build->add_option("--mode", mode, "strict|charity|repair|dual");
  build->add_option("--out", out, "output file or directory");
  build->add_option("--format", format, "dot|json|text");
  build->add_flag("--strict-exit", strict_exit,
                  "exit 3 when any violation is recorded");

  auto* render = app.add_subcommand(
      "render", "Render discourse trees (build with dot output by default)");
  std::string render_format = "dot";
  std::string render_mode = "charity";
  render->add_option("paths", paths, "transcript files or directories")
      ->required();
  render->add_option("--mode", render_mode, "strict|charity|repair|dual");
  render->add_option("--out", out, "output file or directory");
  render->add_option("--format", render_format, "dot|json|text");

  auto* check = app.add_subcommand(
      "check", "Run the dual-view analysis and report violations");
  std::string check_format = "json";
  check->add_option("paths", paths, "transcript files or directories")
      ->required();
  check->add_option("--out", out, "output file");
  check->add_option("--format", check_format, "json|text");

  auto* stats = app.add_subcommand(
      "stats", "Reproduce the contingency tables and tests from a CSV");
  std::string csv;
  std::string stats_format = "text";
  stats->add_option("csv", csv, "sequence-record CSV")->required();
  stats->add_option("--out", out, "output file");
  stats->add_option("--format", stats_format, "text|json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed())
      return cmd_build(paths, mode, out, parse_export_format(format),
                       strict_exit);
    if (render->parsed())
      return cmd_build(paths, render_mode, out,
                       parse_export_format(render_format), false);
    if (check->parsed()) return cmd_check(paths, out, check_format == "json");
    if (stats->parsed()) return cmd_stats(csv, out, stats_format == "json");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }
  return 0;
}
