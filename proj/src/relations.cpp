#include "sdrt/relations.hpp"

#include <array>
#include <utility>

#include "sdrt/errors.hpp"

namespace sdrt {
namespace {

constexpr std::array<RelationProfile, 10> kProfiles = {{
    {Relation::Question, Orientation::Subordinating, Layer::Conversational},
    {Relation::Elaboration, Orientation::Subordinating, Layer::Conversational},
    {Relation::CounterElaboration, Orientation::Subordinating,
     Layer::Conversational},
    {Relation::ClarificationRequest, Orientation::Subordinating,
     Layer::MetaConversational},
    {Relation::Conduct, Orientation::Subordinating, Layer::MetaConversational},
    {Relation::Phatic, Orientation::Subordinating, Layer::MetaConversational},
    {Relation::Response, Orientation::Coordinating, Layer::Conversational},
    {Relation::Narration, Orientation::Coordinating, Layer::Conversational},
    {Relation::Clarification, Orientation::Coordinating,
     Layer::MetaConversational},
    {Relation::CResponse, Orientation::Coordinating,
     Layer::MetaConversational},
}};

// Lower-cases ASCII, strips separators, and folds the common French
// accented vowels so "Contre-élaboration" and "contreelaboration" meet.
std::string fold(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (std::size_t i = 0; i < name.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(name[i]);
    if (c == 0xC3 && i + 1 < name.size()) {
      unsigned char d = static_cast<unsigned char>(name[i + 1]);
      // U+00C0..U+00FF block: map accented vowels to their base letter.
      char base = 0;
      if ((d >= 0x80 && d <= 0x86) || (d >= 0xA0 && d <= 0xA6)) base = 'a';
      else if ((d >= 0x88 && d <= 0x8B) || (d >= 0xA8 && d <= 0xAB)) base = 'e';
      else if ((d >= 0x8C && d <= 0x8F) || (d >= 0xAC && d <= 0xAF)) base = 'i';
      else if ((d >= 0x92 && d <= 0x96) || (d >= 0xB2 && d <= 0xB6)) base = 'o';
      else if ((d >= 0x99 && d <= 0x9C) || (d >= 0xB9 && d <= 0xBC)) base = 'u';
      else if (d == 0x87 || d == 0xA7) base = 'c';
      if (base != 0) {
        out.push_back(base);
        ++i;
        continue;
      }
    }
    if (c == ' ' || c == '-' || c == '_') continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    out.push_back(static_cast<char>(c));
  }
  return out;
}

constexpr std::pair<std::string_view, Relation> kAliases[] = {
    {"question", Relation::Question},
    {"elaboration", Relation::Elaboration},
    {"counterelaboration", Relation::CounterElaboration},
    {"contreelaboration", Relation::CounterElaboration},
    {"clarificationrequest", Relation::ClarificationRequest},
    {"requetedeclarification", Relation::ClarificationRequest},
    {"requeteclarification", Relation::ClarificationRequest},
    {"conduct", Relation::Conduct},
    {"conduite", Relation::Conduct},
    {"phatic", Relation::Phatic},
    {"phatique", Relation::Phatic},
    {"response", Relation::Response},
    {"reponse", Relation::Response},
    {"narration", Relation::Narration},
    {"clarification", Relation::Clarification},
    {"cresponse", Relation::CResponse},
    {"creponse", Relation::CResponse},
};

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Question: return "Question";
    case Relation::Elaboration: return "Elaboration";
    case Relation::CounterElaboration: return "CounterElaboration";
    case Relation::ClarificationRequest: return "ClarificationRequest";
    case Relation::Conduct: return "Conduct";
    case Relation::Phatic: return "Phatic";
    case Relation::Response: return "Response";
    case Relation::Narration: return "Narration";
    case Relation::Clarification: return "Clarification";
    case Relation::CResponse: return "CResponse";
  }
  return "?";
}

std::string_view to_string(Orientation o) {
  return o == Orientation::Subordinating ? "subordinating" : "coordinating";
}

std::string_view to_string(Layer l) {
  return l == Layer::Conversational ? "conversational" : "meta-conversational";
}

Relation parse_relation(std::string_view name) {
  const std::string key = fold(name);
  for (const auto& [alias, rel] : kAliases) {
    if (key == alias) return rel;
  }
  throw UnknownRelationError(std::string(name));
}

RelationProfile relation_profile(Relation r) {
  for (const auto& p : kProfiles) {
    if (p.name == r) return p;
  }
  throw DomainError("relation out of range");
}

RelationProfile relation_profile(std::string_view name) {
  return relation_profile(parse_relation(name));
}

bool is_subordinating(Relation r) {
  return relation_profile(r).orientation == Orientation::Subordinating;
}

bool is_coordinating(Relation r) { return !is_subordinating(r); }

std::optional<Relation> expected_closer(Relation r) {
  if (is_coordinating(r)) {
    throw DomainError(std::string("expected_closer: '") +
                      std::string(to_string(r)) +
                      "' is coordinating, it opens nothing");
  }
  switch (r) {
    case Relation::Question: return Relation::Response;
    case Relation::ClarificationRequest: return Relation::Clarification;
    case Relation::Conduct: return Relation::CResponse;
    default: return std::nullopt;
  }
}

bool opens_expectation(Relation r) {
  return is_subordinating(r) && expected_closer(r).has_value();
}

}  // namespace sdrt
