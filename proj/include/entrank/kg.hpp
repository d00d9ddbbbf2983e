#pragma once
// In-memory knowledge graph over string ids: triples, type assertions,
// mediator flags and an adjacency index, plus neighborhood expansion and
// pattern extraction from composite names.
//
// File format (UTF-8 TSV, '#' starts a comment line):
//   TRIPLE <tab> subj <tab> rel <tab> obj
//   TYPE <tab> entity <tab> type
//   MEDIATOR <tab> entity
//   RELTYPE <tab> rel <tab> objectType

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "entrank/text.hpp"

namespace entrank {

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  auto operator<=>(const Triple&) const = default;
};

// An edge as seen from one endpoint.
struct Edge {
  std::string relation;
  std::string neighbor;
  auto operator<=>(const Edge&) const = default;
};

// A path of length 1 (r) or 2 (r, mediator, r') together with its endpoint.
struct PathEndpoint {
  std::vector<std::string> path;
  std::string entity;
  auto operator<=>(const PathEndpoint&) const = default;
};

class KnowledgeGraph {
 public:
  static KnowledgeGraph load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;  // canonical ordering

  void add_triple(const Triple& t);
  void add_type(const std::string& entity, const std::string& type);
  void add_mediator(const std::string& entity);
  void add_relation_object_type(const std::string& relation, const std::string& objectType);

  const std::set<std::string>& entities() const { return entities_; }
  const std::set<Triple>& triples() const { return triples_; }
  const std::set<std::string>& mediators() const { return mediators_; }
  const std::map<std::string, std::set<std::string>>& type_assertions() const {
    return type_assertions_;
  }
  const std::map<std::string, std::string>& relation_object_types() const {
    return relation_object_types_;
  }

  bool has_entity(const std::string& e) const { return entities_.count(e) > 0; }
  bool is_mediator(const std::string& e) const { return mediators_.count(e) > 0; }

  // Exactly the asserted type set; empty when the entity has none.
  std::set<std::string> types_of(const std::string& entity) const;

  const std::set<Edge>& outgoing(const std::string& entity) const;
  const std::set<Edge>& incoming(const std::string& entity) const;
  std::size_t degree(const std::string& entity) const;

 private:
  std::set<std::string> entities_;
  std::set<Triple> triples_;
  std::map<std::string, std::set<std::string>> type_assertions_;
  std::set<std::string> mediators_;
  std::map<std::string, std::string> relation_object_types_;
  std::map<std::string, std::set<Edge>> outgoing_;
  std::map<std::string, std::set<Edge>> incoming_;
};

// Every distinct path of length <= maxHops (1 or 2) from e1, traversing edges
// in both directions.  Two-hop paths must pass through a mediator node; the
// endpoint is never a mediator and never e1 itself.  Unknown e1 -> empty set.
std::set<PathEndpoint> neighborhood(const KnowledgeGraph& kg, const std::string& e1,
                                    int maxHops);

struct RelationsBetween {
  std::set<std::string> direct;                             // (e1,r,e2) or (e2,r,e1)
  std::set<std::pair<std::string, std::string>> mediated;   // (r, r') via some mediator
};
RelationsBetween relations_between(const KnowledgeGraph& kg, const std::string& e1,
                                   const std::string& e2);

// Token-sequence patterns per type id.  Pattern sets may be empty for a type.
struct TypePatternTable {
  std::map<std::string, std::set<Tokens>> patterns;
};

// Builds type patterns from (a) the final segment of each composite relation
// name /x/y/z whose expected object type is declared in the KG, and (b) every
// suffix of each type name's token sequence.  Relation names not shaped like
// /x/y/z are skipped and counted in *skipped when given.
TypePatternTable extract_type_patterns(const KnowledgeGraph& kg,
                                       const std::map<std::string, std::string>& relationNames,
                                       const std::map<std::string, std::string>& typeNames,
                                       std::size_t* skipped = nullptr);

}  // namespace entrank
