#include "sdrt/model.hpp"

#include <algorithm>
#include <cctype>

#include "sdrt/errors.hpp"

namespace sdrt {

std::string_view to_string(Prosody p) {
  switch (p) {
    case Prosody::Rise: return "rise";
    case Prosody::Fall: return "fall";
    case Prosody::Continuation: return "continuation";
    case Prosody::Pause: return "pause";
  }
  return "?";
}

std::string_view to_string(SpeakerRole r) {
  switch (r) {
    case SpeakerRole::Patient: return "patient";
    case SpeakerRole::Interviewer: return "interviewer";
    case SpeakerRole::Unspecified: return "unspecified";
  }
  return "?";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Strict: return "strict";
    case Mode::Charity: return "charity";
    case Mode::Repair: return "repair";
  }
  return "?";
}

std::string_view to_string(ViolationKind k) {
  return k == ViolationKind::RightFrontierRupture ? "RightFrontierRupture"
                                                  : "AscentWithoutClosure";
}

std::string_view to_string(ConstituentRank r) {
  return r == ConstituentRank::Intervention ? "intervention" : "act";
}

SpeakerRole parse_role(std::string_view s) {
  if (s == "patient") return SpeakerRole::Patient;
  if (s == "interviewer") return SpeakerRole::Interviewer;
  if (s == "unspecified") return SpeakerRole::Unspecified;
  throw DomainError("unknown speaker role: '" + std::string(s) + "'");
}

Mode parse_mode(std::string_view s) {
  if (s == "strict") return Mode::Strict;
  if (s == "charity") return Mode::Charity;
  if (s == "repair") return Mode::Repair;
  throw DomainError("unknown mode: '" + std::string(s) + "'");
}

bool DiscourseGraph::contains(const NodeId& id) const {
  if (id == kRootId) return true;
  return parent.find(id) != parent.end();
}

const Act& DiscourseGraph::act(const NodeId& id) const {
  for (const auto& a : acts) {
    if (a.id == id) return a;
  }
  throw DomainError("unknown act id: '" + id + "'");
}

const Edge* DiscourseGraph::parent_edge(const NodeId& id) const {
  auto it = parent.find(id);
  return it == parent.end() ? nullptr : &it->second;
}

bool DiscourseGraph::is_ancestor(const NodeId& above, const NodeId& below) const {
  if (above == below) return false;
  NodeId cur = below;
  while (cur != kRootId) {
    const Edge* e = parent_edge(cur);
    if (e == nullptr) return false;
    cur = e->site;
    if (cur == above) return true;
  }
  return above == kRootId ? false : false;
}

int DiscourseGraph::box_of(const NodeId& id) const {
  for (const auto& b : boxes) {
    if (std::find(b.members.begin(), b.members.end(), id) != b.members.end())
      return b.box_id;
  }
  return -1;
}

std::string normalize_theme(std::string_view theme) {
  std::string out;
  bool pending_space = false;
  for (char ch : theme) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace sdrt
