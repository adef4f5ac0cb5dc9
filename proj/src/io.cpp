#include "gsi/io.hpp"

#include "gsi/errors.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace gsi {

namespace {

struct Record {
  std::size_t line;
  std::vector<std::string> tok;
};

std::vector<Record> records(std::string_view text) {
  std::vector<Record> out;
  std::size_t line = 0, pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++line;
    pos = end + 1;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Record r{line, {}};
    for (std::string t; in >> t;) r.tok.push_back(t);
    if (!r.tok.empty()) out.push_back(std::move(r));
    if (end == text.size()) break;
  }
  return out;
}

Rational number(const Record& r, std::size_t i) {
  try {
    return parse_rational(r.tok.at(i));
  } catch (const InvariantError& e) {
    throw ParseError(r.line, e.what());
  }
}

std::int64_t integer(const Record& r, std::size_t i) {
  const Rational q = number(r, i);
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw ParseError(r.line, "expected an integer, got '" + r.tok[i] + "'");
  return q.get_num().get_si();
}

std::vector<Record> body(std::string_view text, const char* kind) {
  auto recs = records(text);
  if (recs.empty()) throw ParseError(0, "empty file");
  if (recs.front().tok.size() != 1 || recs.front().tok[0] != kind)
    throw ParseError(recs.front().line, std::string("expected header '") + kind + "'");
  recs.erase(recs.begin());
  if (recs.empty()) throw ParseError(0, "no states");
  return recs;
}

class Names {
public:
  void declare(const Record& r, const std::string& name) {
    if (!index_.emplace(name, order_.size()).second) throw ParseError(r.line, "duplicate state '" + name + "'");
    order_.push_back(name);
  }
  std::size_t at(const Record& r, const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ParseError(r.line, "unknown state '" + name + "'");
    return it->second;
  }
  const std::vector<std::string>& order() const { return order_; }

private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> order_;
};

void need(const Record& r, bool ok, const std::string& what) {
  if (!ok) throw ParseError(r.line, what);
}

}  // namespace

FileKind detect_kind(std::string_view text) {
  auto recs = records(text);
  if (recs.empty()) throw ParseError(0, "empty file");
  const auto& h = recs.front().tok[0];
  if (h == "ssg") return FileKind::Ssg;
  if (h == "energy") return FileKind::Energy;
  if (h == "pa") return FileKind::Pa;
  throw ParseError(recs.front().line, "unknown file kind '" + h + "'");
}

Ssg parse_ssg(std::string_view text) {
  const auto recs = body(text, "ssg");
  Names names;
  for (const auto& r : recs) {
    const auto& k = r.tok[0];
    need(r, k == "sink" || k == "av" || k == "max" || k == "min", "unknown record '" + k + "'");
    need(r, r.tok.size() >= 3, "record '" + k + "' needs a name and arguments");
    names.declare(r, r.tok[1]);
  }
  std::vector<SsgState> states;
  for (const auto& r : recs) {
    const auto& k = r.tok[0];
    SsgState s{r.tok[1], SsgKind::Sink, {}, {}, 0};
    if (k == "sink") {
      need(r, r.tok.size() == 3, "sink takes exactly one payoff");
      s.payoff = number(r, 2);
      need(r, s.payoff >= 0 && s.payoff <= 1, "payoff outside [0,1]");
    } else if (k == "av") {
      s.kind = SsgKind::Average;
      need(r, r.tok.size() % 2 == 0, "av takes successor/probability pairs");
      Rational total = 0;
      for (std::size_t i = 2; i < r.tok.size(); i += 2) {
        const Rational p = number(r, i + 1);
        need(r, p > 0, "probabilities must be positive");
        s.dist.emplace_back(names.at(r, r.tok[i]), p);
        total += p;
      }
      need(r, total == 1, "probabilities sum to " + to_string(total) + ", not 1");
    } else {
      s.kind = k == "max" ? SsgKind::Max : SsgKind::Min;
      for (std::size_t i = 2; i < r.tok.size(); ++i) s.succ.push_back(names.at(r, r.tok[i]));
    }
    states.push_back(std::move(s));
  }
  return Ssg(std::move(states));
}

EnergyGame parse_energy(std::string_view text) {
  const auto recs = body(text, "energy");
  Names names;
  std::vector<int> owner;
  for (const auto& r : recs) {
    if (r.tok[0] == "state") {
      need(r, r.tok.size() == 3, "state takes a name and an owner");
      need(r, r.tok[2] == "0" || r.tok[2] == "1", "owner must be 0 or 1");
      names.declare(r, r.tok[1]);
      owner.push_back(r.tok[2] == "0" ? 0 : 1);
    } else {
      need(r, r.tok[0] == "edge", "unknown record '" + r.tok[0] + "'");
    }
  }
  if (names.order().empty()) throw ParseError(0, "no states");
  std::vector<EnergyEdge> edges;
  for (const auto& r : recs) {
    if (r.tok[0] != "edge") continue;
    need(r, r.tok.size() == 4, "edge takes source, target and weight");
    edges.push_back({names.at(r, r.tok[1]), names.at(r, r.tok[2]), integer(r, 3)});
  }
  return EnergyGame(names.order(), std::move(owner), std::move(edges));
}

Pa parse_pa(std::string_view text) {
  const auto recs = body(text, "pa");
  Names names;
  std::vector<PaState> states;
  for (const auto& r : recs) {
    if (r.tok[0] == "state") {
      need(r, r.tok.size() == 3, "state takes a name and a label");
      names.declare(r, r.tok[1]);
      states.push_back({r.tok[1], r.tok[2], {}});
    } else {
      need(r, r.tok[0] == "dist", "unknown record '" + r.tok[0] + "'");
    }
  }
  if (states.empty()) throw ParseError(0, "no states");
  for (const auto& r : recs) {
    if (r.tok[0] != "dist") continue;
    need(r, r.tok.size() >= 4 && r.tok.size() % 2 == 0, "dist takes a state and target/probability pairs");
    Distribution d;
    Rational total = 0;
    for (std::size_t i = 2; i < r.tok.size(); i += 2) {
      const Rational p = number(r, i + 1);
      need(r, p > 0, "probabilities must be positive");
      d.emplace_back(names.at(r, r.tok[i]), p);
      total += p;
    }
    need(r, total == 1, "probabilities sum to " + to_string(total) + ", not 1");
    states[names.at(r, r.tok[1])].dists.push_back(std::move(d));
  }
  return Pa(std::move(states));
}

std::string emit_ssg(const Ssg& g) {
  std::string out = "ssg\n";
  for (const auto& s : g.states()) {
    switch (s.kind) {
      case SsgKind::Sink: out += "sink " + s.name + " " + to_string(s.payoff); break;
      case SsgKind::Average:
        out += "av " + s.name;
        for (const auto& [v, p] : s.dist) out += " " + g.state(v).name + " " + to_string(p);
        break;
      case SsgKind::Max:
      case SsgKind::Min:
        out += (s.kind == SsgKind::Max ? "max " : "min ") + s.name;
        for (auto v : s.succ) out += " " + g.state(v).name;
        break;
    }
    out += "\n";
  }
  return out;
}

std::string emit_energy(const EnergyGame& g) {
  std::string out = "energy\n";
  for (std::size_t v = 0; v < g.size(); ++v) out += "state " + g.name(v) + " " + std::to_string(g.owner(v)) + "\n";
  for (const auto& e : g.edges())
    out += "edge " + g.name(e.from) + " " + g.name(e.to) + " " + std::to_string(e.w) + "\n";
  return out;
}

std::string emit_pa(const Pa& pa) {
  std::string out = "pa\n";
  for (const auto& s : pa.states()) out += "state " + s.name + " " + s.label + "\n";
  for (const auto& s : pa.states())
    for (const auto& d : s.dists) {
      out += "dist " + s.name;
      for (const auto& [v, p] : d) out += " " + pa.state(v).name + " " + to_string(p);
      out += "\n";
    }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gsi
