#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sdrt {

// The nine rhetorical relations of the taxonomy. Orientation and layer are
// fixed per name; see relation_profile().
enum class Relation {
  Question,
  Elaboration,
  CounterElaboration,
  ClarificationRequest,
  Conduct,
  Phatic,
  Response,
  Narration,
  Clarification,
  CResponse,
};

enum class Orientation { Subordinating, Coordinating };
enum class Layer { Conversational, MetaConversational };

struct RelationProfile {
  Relation name;
  Orientation orientation;
  Layer layer;
};

std::string_view to_string(Relation r);
std::string_view to_string(Orientation o);
std::string_view to_string(Layer l);

// Accepts the canonical English names plus the French corpus spellings,
// case- and accent-insensitively ("Réponse", "requete-de-clarification", ...).
// Throws UnknownRelationError otherwise.
Relation parse_relation(std::string_view name);

RelationProfile relation_profile(Relation r);
RelationProfile relation_profile(std::string_view name);

bool is_subordinating(Relation r);
bool is_coordinating(Relation r);

// The coordinating relation a subordinating opener waits for:
// Question -> Response, ClarificationRequest -> Clarification,
// Conduct -> CResponse. Elaboration, CounterElaboration and Phatic open
// nothing. Throws DomainError when called with a coordinating relation.
std::optional<Relation> expected_closer(Relation r);

// True when attaching via r leaves an open expectation behind.
bool opens_expectation(Relation r);

}  // namespace sdrt
