#include "entrank/kg.hpp"

#include <fstream>

#include "entrank/errors.hpp"

namespace entrank {

namespace {

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

KnowledgeGraph KnowledgeGraph::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open KG file: " + path.string());
  KnowledgeGraph kg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tsv(line);
    const auto fail = [&](const char* why) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + why);
    };
    const std::string& kind = fields[0];
    if (kind == "TRIPLE") {
      if (fields.size() != 4 || fields[1].empty() || fields[2].empty() || fields[3].empty())
        fail("TRIPLE row needs subj, rel, obj");
      kg.add_triple({fields[1], fields[2], fields[3]});
    } else if (kind == "TYPE") {
      if (fields.size() != 3 || fields[1].empty() || fields[2].empty())
        fail("TYPE row needs entity, type");
      kg.add_type(fields[1], fields[2]);
    } else if (kind == "MEDIATOR") {
      if (fields.size() != 2 || fields[1].empty()) fail("MEDIATOR row needs entity");
      kg.add_mediator(fields[1]);
    } else if (kind == "RELTYPE") {
      if (fields.size() != 3 || fields[1].empty() || fields[2].empty())
        fail("RELTYPE row needs rel, objectType");
      kg.add_relation_object_type(fields[1], fields[2]);
    } else {
      fail("unknown row kind");
    }
  }
  return kg;
}

void KnowledgeGraph::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write KG file: " + path.string());
  for (const auto& t : triples_)
    out << "TRIPLE\t" << t.subject << '\t' << t.relation << '\t' << t.object << '\n';
  for (const auto& [entity, types] : type_assertions_)
    for (const auto& type : types) out << "TYPE\t" << entity << '\t' << type << '\n';
  for (const auto& m : mediators_) out << "MEDIATOR\t" << m << '\n';
  for (const auto& [rel, objType] : relation_object_types_)
    out << "RELTYPE\t" << rel << '\t' << objType << '\n';
}

void KnowledgeGraph::add_triple(const Triple& t) {
  if (!triples_.insert(t).second) return;  // duplicates are dropped silently
  entities_.insert(t.subject);
  entities_.insert(t.object);
  outgoing_[t.subject].insert({t.relation, t.object});
  incoming_[t.object].insert({t.relation, t.subject});
}

void KnowledgeGraph::add_type(const std::string& entity, const std::string& type) {
  entities_.insert(entity);
  type_assertions_[entity].insert(type);
}

void KnowledgeGraph::add_mediator(const std::string& entity) {
  entities_.insert(entity);
  mediators_.insert(entity);
}

void KnowledgeGraph::add_relation_object_type(const std::string& relation,
                                              const std::string& objectType) {
  relation_object_types_[relation] = objectType;
}

std::set<std::string> KnowledgeGraph::types_of(const std::string& entity) const {
  const auto it = type_assertions_.find(entity);
  return it == type_assertions_.end() ? std::set<std::string>{} : it->second;
}

const std::set<Edge>& KnowledgeGraph::outgoing(const std::string& entity) const {
  static const std::set<Edge> empty;
  const auto it = outgoing_.find(entity);
  return it == outgoing_.end() ? empty : it->second;
}

const std::set<Edge>& KnowledgeGraph::incoming(const std::string& entity) const {
  static const std::set<Edge> empty;
  const auto it = incoming_.find(entity);
  return it == incoming_.end() ? empty : it->second;
}

std::size_t KnowledgeGraph::degree(const std::string& entity) const {
  return outgoing(entity).size() + incoming(entity).size();
}

std::set<PathEndpoint> neighborhood(const KnowledgeGraph& kg, const std::string& e1,
                                    int maxHops) {
  if (maxHops != 1 && maxHops != 2)
    throw std::invalid_argument("neighborhood: maxHops must be 1 or 2");
  std::set<PathEndpoint> out;
  if (!kg.has_entity(e1)) return out;  // linker/KG mismatch, not a failure

  const auto first_hops = [&](const std::string& from) {
    std::set<Edge> hops = kg.outgoing(from);
    for (const auto& e : kg.incoming(from)) hops.insert(e);
    return hops;
  };

  for (const auto& [r, n1] : first_hops(e1)) {
    if (n1 != e1 && !kg.is_mediator(n1)) out.insert({{r}, n1});
    if (maxHops == 2 && kg.is_mediator(n1)) {
      // Second hop continues only through mediators.
      for (const auto& [r2, n2] : first_hops(n1)) {
        if (n2 == e1 || kg.is_mediator(n2)) continue;
        out.insert({{r, n1, r2}, n2});
      }
    }
  }
  return out;
}

RelationsBetween relations_between(const KnowledgeGraph& kg, const std::string& e1,
                                   const std::string& e2) {
  RelationsBetween out;
  for (const auto& pe : neighborhood(kg, e1, 2)) {
    if (pe.entity != e2) continue;
    if (pe.path.size() == 1) {
      out.direct.insert(pe.path[0]);
    } else {
      out.mediated.insert({pe.path[0], pe.path[2]});
    }
  }
  return out;
}

TypePatternTable extract_type_patterns(const KnowledgeGraph& kg,
                                       const std::map<std::string, std::string>& relationNames,
                                       const std::map<std::string, std::string>& typeNames,
                                       std::size_t* skipped) {
  TypePatternTable table;
  std::size_t skipCount = 0;

  // Relation rule: /x/y/z with a declared object type contributes its final
  // segment as a pattern of that type.
  for (const auto& [rel, name] : relationNames) {
    const auto typeIt = kg.relation_object_types().find(rel);
    if (typeIt == kg.relation_object_types().end()) continue;
    bool shaped = !name.empty() && name[0] == '/';
    std::vector<std::string> segments;
    if (shaped) {
      std::string cur;
      for (std::size_t i = 1; i <= name.size(); ++i) {
        if (i == name.size() || name[i] == '/') {
          if (cur.empty()) shaped = false;
          segments.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(name[i]);
        }
      }
      if (segments.size() != 3) shaped = false;
    }
    if (!shaped) {
      ++skipCount;
      continue;
    }
    const Tokens pattern = name_tokens(segments[2]);
    if (!pattern.empty()) table.patterns[typeIt->second].insert(pattern);
  }

  // Type-name rule: every suffix of the tokenized name.
  for (const auto& [type, name] : typeNames) {
    auto& slot = table.patterns[type];  // present even if no pattern survives
    const Tokens toks = name_tokens(name);
    for (std::size_t start = 0; start < toks.size(); ++start)
      slot.insert(Tokens(toks.begin() + static_cast<std::ptrdiff_t>(start), toks.end()));
  }

  if (skipped) *skipped = skipCount;
  return table;
}

}  // namespace entrank
