#include <charconv>
#include <fstream>
#include <sstream>

#include "cactus/divisor.hpp"
#include "cactus/errors.hpp"

namespace cactus {

Divisor parse_divisor(const GraphPtr& graph, std::string_view text) {
  Divisor d(graph);
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] != "chip" || tok.size() != 4) throw ParseError(line_no, "expected 'chip <loop-id> <offset> <multiplicity>'");
    const auto loop = graph->find_loop(tok[1]);
    if (!loop) throw ParseError(line_no, "unknown loop id '" + tok[1] + "'");
    Rational off;
    try {
      off = parse_rational(tok[2]);
    } catch (const RationalParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (sgn(off) < 0 || off >= graph->circumference(*loop)) throw ParseError(line_no, "offset out of range");
    Multiplicity m = 0;
    const std::string& ms = tok[3];
    const char* first = ms.data() + (ms.size() > 1 && ms[0] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(first, ms.data() + ms.size(), m);
    if (ec != std::errc{} || ptr != ms.data() + ms.size()) throw ParseError(line_no, "malformed multiplicity '" + ms + "'");
    if (m == 0) throw ParseError(line_no, "multiplicity must be nonzero");
    d.add(*loop, off, m);
  }
  return d;
}

Divisor load_divisor(const GraphPtr& graph, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read divisor file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_divisor(graph, buf.str());
}

std::string format_divisor(const Divisor& d) {
  std::ostringstream out;
  for (const auto& [p, m] : d.chips()) {
    out << "chip " << d.graph()->name(p.loop) << ' ' << to_string(p.offset) << ' ' << m << '\n';
  }
  return out.str();
}

}  // namespace cactus
