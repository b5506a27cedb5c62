#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sdrt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownRelationError : Error {
  explicit UnknownRelationError(const std::string& name)
      : Error("unknown relation name: '" + name + "'"), name(name) {}
  std::string name;
};

struct DomainError : Error {
  using Error::Error;
};

// Parse failure with 1-based line/column position.
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int column = 0)
      : Error("line " + std::to_string(line) +
              (column > 0 ? ":" + std::to_string(column) : "") + ": " + msg),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct AttachError : Error {
  using Error::Error;
};

// Strict mode refuses off-frontier sites; carries the frontier that was
// in force so callers can report it.
struct StrictRejection : AttachError {
  StrictRejection(const std::string& act, const std::string& site,
                  std::vector<std::string> frontier_nodes)
      : AttachError("strict mode: site '" + site + "' for act '" + act +
                    "' is not on the right frontier"),
        act(act),
        site(site),
        frontier(std::move(frontier_nodes)) {}
  std::string act;
  std::string site;
  std::vector<std::string> frontier;
};

}  // namespace sdrt
