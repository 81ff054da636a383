#include <fstream>
#include <map>
#include <sstream>

#include "cactus/errors.hpp"
#include "cactus/graph.hpp"

namespace cactus {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

Rational rational_at(const std::string& tok, int line) {
  try {
    return parse_rational(tok);
  } catch (const RationalParseError& e) {
    throw ParseError(line, e.what());
  }
}

struct PendingAttach {
  std::string parent;
  Rational offset;
  int line;
};

}  // namespace

GraphPtr parse_graph(std::string_view text) {
  GraphSpec spec;
  std::map<std::string, int> loop_line;
  std::map<std::string, PendingAttach> attach;
  std::optional<std::pair<std::string, Rational>> base;
  int base_line = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (tok[0] == "loop") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'loop <id> <circumference>'");
      const Rational c = rational_at(tok[2], line_no);
      if (sgn(c) <= 0) throw ParseError(line_no, "circumference must be positive");
      if (!loop_line.emplace(tok[1], line_no).second) throw ParseError(line_no, "duplicate loop id '" + tok[1] + "'");
      spec.loops.push_back(LoopSpec{tok[1], c, std::nullopt, Rational(0)});
    } else if (tok[0] == "attach") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'attach <child> <parent> <offset>'");
      const Rational off = rational_at(tok[3], line_no);
      if (!attach.emplace(tok[1], PendingAttach{tok[2], off, line_no}).second) {
        throw ParseError(line_no, "loop '" + tok[1] + "' attached twice");
      }
    } else if (tok[0] == "basepoint") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'basepoint <loop> <offset>'");
      if (base) throw ParseError(line_no, "basepoint given twice");
      base.emplace(tok[1], rational_at(tok[2], line_no));
      base_line = line_no;
    } else {
      throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
    }
  }
  if (spec.loops.empty()) throw ParseError(0, "graph has no loops");

  std::map<std::string, Rational> circ;
  for (const auto& l : spec.loops) circ.emplace(l.name, l.circumference);
  for (const auto& [child, a] : attach) {
    if (!circ.count(child)) throw ParseError(a.line, "unknown loop id '" + child + "'");
    if (!circ.count(a.parent)) throw ParseError(a.line, "unknown loop id '" + a.parent + "'");
    if (child == a.parent) throw ParseError(a.line, "attachment cycle: '" + child + "' attached to itself");
    if (sgn(a.offset) < 0 || a.offset >= circ.at(a.parent)) {
      throw ParseError(a.line, "offset " + to_string(a.offset) + " out of range [0, " + to_string(circ.at(a.parent)) + ")");
    }
  }
  for (const auto& [child, a] : attach) {
    std::map<std::string, int> seen;
    std::string cur = child;
    while (attach.count(cur)) {
      if (seen.count(cur)) throw ParseError(attach.at(cur).line, "attachment cycle through '" + cur + "'");
      seen[cur] = 1;
      cur = attach.at(cur).parent;
    }
  }
  for (auto& loop : spec.loops) {
    if (auto it = attach.find(loop.name); it != attach.end()) {
      loop.parent = it->second.parent;
      loop.parent_offset = it->second.offset;
    }
  }
  if (base) {
    if (!circ.count(base->first)) throw ParseError(base_line, "unknown loop id '" + base->first + "'");
    if (sgn(base->second) < 0 || base->second >= circ.at(base->first)) {
      throw ParseError(base_line, "basepoint offset out of range");
    }
    spec.base_loop = base->first;
    spec.base_offset = base->second;
  }
  return CactusGraph::build(spec);
}

GraphPtr load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

std::string format_graph(const CactusGraph& graph) {
  std::ostringstream out;
  for (LoopIndex i = 0; i < graph.genus(); ++i) {
    out << "loop " << graph.name(i) << ' ' << to_string(graph.circumference(i)) << '\n';
  }
  for (LoopIndex i = 0; i < graph.genus(); ++i) {
    if (graph.parent(i) == -1) continue;
    out << "attach " << graph.name(i) << ' ' << graph.name(graph.parent(i)) << ' ' << to_string(graph.attach_offset(i))
        << '\n';
  }
  const PointRef& b = graph.base_point();
  out << "basepoint " << graph.name(b.loop) << ' ' << to_string(b.offset) << '\n';
  return out.str();
}

PointRef parse_point(const CactusGraph& graph, std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw InputError("point must look like <loop>:<offset>, got '" + std::string(text) + "'");
  const LoopIndex loop = graph.loop_index(text.substr(0, colon));
  Rational off;
  try {
    off = parse_rational(text.substr(colon + 1));
  } catch (const RationalParseError& e) {
    throw InputError(e.what());
  }
  return graph.canonical_point(loop, off);
}

std::string format_point(const CactusGraph& graph, const PointRef& p) {
  return graph.name(p.loop) + ":" + to_string(p.offset);
}

}  // namespace cactus
