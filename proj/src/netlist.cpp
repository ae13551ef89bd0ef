#include "cmol/netlist.hpp"

#include "cmol/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cmol {

namespace {

struct Definition {
  std::string name;
  std::string op;
  std::vector<std::string> args;
  std::size_t line = 0;
};

struct Description {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Definition> defs;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& ch : out)
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

/// Splits `OP(a, b, c)` into op and arguments.
std::pair<std::string, std::vector<std::string>> split_call(std::string_view text, std::size_t line) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw InputError(where(line) + "expected OP(args) but got '" + std::string(text) + "'");
  if (!trim(text.substr(close + 1)).empty())
    throw InputError(where(line) + "trailing characters after ')'");
  std::vector<std::string> args;
  auto inner = text.substr(open + 1, close - open - 1);
  while (true) {
    const auto comma = inner.find(',');
    auto arg = trim(inner.substr(0, comma));
    if (arg.empty()) {
      if (comma == std::string_view::npos && args.empty())
        break;
      throw InputError(where(line) + "empty argument");
    }
    args.emplace_back(arg);
    if (comma == std::string_view::npos)
      break;
    inner.remove_prefix(comma + 1);
  }
  return {upper(trim(text.substr(0, open))), std::move(args)};
}

class Builder {
public:
  Builder(const Description& desc, bool keep_nor) : desc_(desc), keep_nor_(keep_nor) {}

  Circuit build() {
    std::unordered_set<std::string> seen;
    for (const auto& name : desc_.inputs) {
      if (!seen.insert(name).second)
        throw InputError("duplicate definition of signal '" + name + "'");
      value_[name] = circuit_.add_gate(GateKind::Input, {}, name);
    }
    for (std::size_t i = 0; i < desc_.defs.size(); ++i) {
      const auto& d = desc_.defs[i];
      if (!seen.insert(d.name).second)
        throw InputError(where(d.line) + "duplicate definition of signal '" + d.name + "'");
      def_of_[d.name] = i;
    }
    // Flip-flops first so feedback loops through them resolve.
    std::vector<std::pair<GateId, std::size_t>> flops;
    for (std::size_t i = 0; i < desc_.defs.size(); ++i) {
      const auto& d = desc_.defs[i];
      if (d.op != "DFF")
        continue;
      expect_arity(d, 1, 1);
      const auto id = circuit_.add_gate(GateKind::Dff, {}, d.name);
      value_[d.name] = id;
      flops.emplace_back(id, i);
    }
    for (const auto& d : desc_.defs)
      resolve(d.name, d.line);
    for (const auto& name : desc_.outputs)
      circuit_.add_gate(GateKind::Output, {resolve(name, 0)}, name);
    for (auto [id, index] : flops) {
      const auto& d = desc_.defs[index];
      circuit_.set_fanin(id, {resolve(d.args[0], d.line)});
    }
    circuit_.check();
    return std::move(circuit_);
  }

private:
  static void expect_arity(const Definition& d, std::size_t lo, std::size_t hi) {
    if (d.args.size() < lo || d.args.size() > hi)
      throw InputError(where(d.line) + d.op + " gate '" + d.name + "' has " +
                       std::to_string(d.args.size()) + " inputs");
  }

  GateId add(GateKind kind, std::vector<GateId> fanin, const std::string& name) {
    return circuit_.add_gate(kind, std::move(fanin), name);
  }

  GateId temp(GateKind kind, std::vector<GateId> fanin, const std::string& base) {
    return circuit_.add_gate(kind, std::move(fanin), circuit_.unique_name(base));
  }

  GateId resolve(const std::string& name, std::size_t line) {
    if (auto it = value_.find(name); it != value_.end())
      return it->second;
    auto def = def_of_.find(name);
    if (def == def_of_.end())
      throw InputError((line ? where(line) : std::string()) + "undefined signal '" + name + "'");
    const auto& d = desc_.defs[def->second];
    if (!visiting_.insert(name).second)
      throw InputError(where(d.line) + "cyclic combinational path through '" + name + "'");

    std::vector<GateId> fanin;
    for (const auto& arg : d.args)
      fanin.push_back(resolve(arg, d.line));

    GateId id = 0;
    if (d.op == "AND" || d.op == "OR") {
      expect_arity(d, 1, SIZE_MAX);
      id = add(d.op == "AND" ? GateKind::And : GateKind::Or, std::move(fanin), d.name);
    } else if (d.op == "NOT") {
      expect_arity(d, 1, 1);
      id = add(GateKind::Not, std::move(fanin), d.name);
    } else if (d.op == "NAND") {
      expect_arity(d, 1, SIZE_MAX);
      const auto conj = temp(GateKind::And, std::move(fanin), d.name + "$and");
      id = add(GateKind::Not, {conj}, d.name);
    } else if (d.op == "NOR") {
      expect_arity(d, 1, SIZE_MAX);
      if (keep_nor_) {
        id = add(GateKind::Nor, std::move(fanin), d.name);
      } else {
        const auto disj = temp(GateKind::Or, std::move(fanin), d.name + "$or");
        id = add(GateKind::Not, {disj}, d.name);
      }
    } else if (d.op == "XOR") {
      expect_arity(d, 2, SIZE_MAX);
      GateId acc = fanin[0];
      for (std::size_t i = 1; i < fanin.size(); ++i) {
        const bool last = i + 1 == fanin.size();
        const std::string base = last ? d.name : d.name + "$x" + std::to_string(i);
        acc = xor2(acc, fanin[i], base, last);
      }
      id = acc;
    } else if (d.op == "BUFF" || d.op == "BUF") {
      expect_arity(d, 1, 1);
      id = fanin[0];
    } else if (d.op == "DFF") {
      throw InternalError("flip-flop '" + name + "' was not pre-created");
    } else {
      throw InputError(where(d.line) + "unsupported opcode '" + d.op + "'");
    }
    visiting_.erase(name);
    value_[name] = id;
    return id;
  }

  GateId xor2(GateId a, GateId b, const std::string& out, bool named) {
    const auto na = temp(GateKind::Not, {a}, out + "$na");
    const auto nb = temp(GateKind::Not, {b}, out + "$nb");
    const auto t0 = temp(GateKind::And, {a, nb}, out + "$t0");
    const auto t1 = temp(GateKind::And, {na, b}, out + "$t1");
    return named ? add(GateKind::Or, {t0, t1}, out) : temp(GateKind::Or, {t0, t1}, out);
  }

  const Description& desc_;
  bool keep_nor_;
  Circuit circuit_;
  std::unordered_map<std::string, GateId> value_;
  std::unordered_map<std::string, std::size_t> def_of_;
  std::unordered_set<std::string> visiting_;
};

/// Name used in `.bench`/JSON for the signal produced by gate `id`.
const std::string& signal_name(const Circuit& c, GateId id) { return c.gate(id).name; }

/// Output markers whose name differs from their driver need an alias line.
bool needs_alias(const Circuit& c, const Gate& out) {
  return out.name != signal_name(c, out.fanin[0]);
}

} // namespace

Circuit parse_bench(std::string_view text) {
  Description desc;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      auto [keyword, args] = split_call(line, line_no);
      if (args.size() != 1)
        throw InputError(where(line_no) + keyword + " expects exactly one signal");
      if (keyword == "INPUT")
        desc.inputs.push_back(args[0]);
      else if (keyword == "OUTPUT")
        desc.outputs.push_back(args[0]);
      else
        throw InputError(where(line_no) + "unknown declaration '" + keyword + "'");
      continue;
    }
    const auto lhs = trim(line.substr(0, eq));
    if (lhs.empty())
      throw InputError(where(line_no) + "missing signal name before '='");
    auto [op, args] = split_call(trim(line.substr(eq + 1)), line_no);
    desc.defs.push_back(Definition{std::string(lhs), std::move(op), std::move(args), line_no});
  }
  return Builder(desc, /*keep_nor=*/false).build();
}

std::string emit_bench(const Circuit& circuit) {
  std::ostringstream out;
  for (GateId id : circuit.inputs())
    out << "INPUT(" << circuit.gate(id).name << ")\n";
  for (GateId id : circuit.outputs())
    out << "OUTPUT(" << circuit.gate(id).name << ")\n";
  out << '\n';
  for (GateId id : circuit.outputs()) {
    const auto& g = circuit.gate(id);
    if (needs_alias(circuit, g))
      out << g.name << " = BUFF(" << signal_name(circuit, g.fanin[0]) << ")\n";
  }
  for (GateId id : circuit.topological_order()) {
    const auto& g = circuit.gate(id);
    if (g.kind == GateKind::Input || g.kind == GateKind::Output)
      continue;
    out << g.name << " = " << to_string(g.kind) << '(';
    for (std::size_t i = 0; i < g.fanin.size(); ++i)
      out << (i ? ", " : "") << signal_name(circuit, g.fanin[i]);
    out << ")\n";
  }
  return out.str();
}

Circuit circuit_from_json(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw InputError("circuit JSON must be an object");
  Description desc;
  try {
    for (const auto& name : doc.value("inputs", nlohmann::json::array()))
      desc.inputs.push_back(name.get<std::string>());
    for (const auto& name : doc.value("outputs", nlohmann::json::array()))
      desc.outputs.push_back(name.get<std::string>());
    std::size_t index = 0;
    for (const auto& g : doc.value("gates", nlohmann::json::array())) {
      ++index;
      Definition d;
      d.name = g.at("name").get<std::string>();
      d.op = upper(g.at("kind").get<std::string>());
      d.line = index;
      for (const auto& f : g.value("fanin", nlohmann::json::array()))
        d.args.push_back(f.get<std::string>());
      if (d.op == "INPUT") {
        if (std::find(desc.inputs.begin(), desc.inputs.end(), d.name) == desc.inputs.end())
          desc.inputs.push_back(d.name);
        continue;
      }
      desc.defs.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed circuit JSON: ") + e.what());
  }
  return Builder(desc, /*keep_nor=*/true).build();
}

nlohmann::json circuit_to_json(const Circuit& circuit) {
  nlohmann::json doc;
  doc["inputs"] = nlohmann::json::array();
  doc["outputs"] = nlohmann::json::array();
  doc["gates"] = nlohmann::json::array();
  for (GateId id : circuit.inputs())
    doc["inputs"].push_back(circuit.gate(id).name);
  for (GateId id : circuit.outputs())
    doc["outputs"].push_back(circuit.gate(id).name);
  for (GateId id : circuit.topological_order()) {
    const auto& g = circuit.gate(id);
    if (g.kind == GateKind::Input || g.kind == GateKind::Output)
      continue;
    nlohmann::json fanin = nlohmann::json::array();
    for (GateId f : g.fanin)
      fanin.push_back(signal_name(circuit, f));
    doc["gates"].push_back({{"name", g.name}, {"kind", to_string(g.kind)}, {"fanin", fanin}});
  }
  for (GateId id : circuit.outputs()) {
    const auto& g = circuit.gate(id);
    if (needs_alias(circuit, g))
      doc["gates"].push_back(
          {{"name", g.name}, {"kind", "BUFF"}, {"fanin", {signal_name(circuit, g.fanin[0])}}});
  }
  return doc;
}

Circuit read_circuit_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (path.extension() == ".json") {
    try {
      return circuit_from_json(nlohmann::json::parse(buffer.str()));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }
  return parse_bench(buffer.str());
}

Circuit carve_sequential(const Circuit& circuit) {
  Circuit out;
  std::vector<GateId> map(circuit.size(), 0);
  for (GateId id : circuit.inputs())
    map[id] = out.add_gate(GateKind::Input, {}, circuit.gate(id).name);
  std::vector<GateId> flops;
  for (const auto& g : circuit.gates()) {
    if (g.kind != GateKind::Dff)
      continue;
    map[g.id] = out.add_gate(GateKind::Input, {}, g.name);
    flops.push_back(g.id);
  }
  for (GateId id : circuit.topological_order()) {
    const auto& g = circuit.gate(id);
    if (g.kind == GateKind::Input || g.kind == GateKind::Dff || g.kind == GateKind::Output)
      continue;
    std::vector<GateId> fanin;
    for (GateId f : g.fanin)
      fanin.push_back(map[f]);
    map[id] = out.add_gate(g.kind, std::move(fanin), g.name);
  }
  for (GateId id : circuit.outputs()) {
    const auto& g = circuit.gate(id);
    out.add_gate(GateKind::Output, {map[g.fanin[0]]}, g.name);
  }
  for (GateId id : flops) {
    const GateId driver = map[circuit.gate(id).fanin[0]];
    out.add_gate(GateKind::Output, {driver}, out.gate(driver).name);
  }
  return out;
}

Circuit sweep(const Circuit& circuit) {
  if (circuit.count(GateKind::Dff) != 0)
    throw InputError("sweep expects a combinational circuit; carve flip-flops first");

  const auto order = circuit.topological_order();
  // Representative of each gate after alias collapse, and deduplicated fanins.
  std::vector<GateId> rep(circuit.size());
  std::vector<std::vector<GateId>> fanin(circuit.size());
  for (GateId id : order) {
    const auto& g = circuit.gate(id);
    rep[id] = id;
    for (GateId f : g.fanin)
      fanin[id].push_back(rep[f]);
    if (g.kind == GateKind::And || g.kind == GateKind::Or || g.kind == GateKind::Nor) {
      auto& fi = fanin[id];
      std::vector<GateId> unique;
      for (GateId f : fi)
        if (std::find(unique.begin(), unique.end(), f) == unique.end())
          unique.push_back(f);
      fi = std::move(unique);
      if (fi.size() == 1 && g.kind != GateKind::Nor)
        rep[id] = fi[0];
    }
  }

  std::vector<bool> live(circuit.size(), false);
  std::vector<GateId> stack;
  for (GateId id : circuit.outputs()) {
    live[id] = true;
    stack.push_back(rep[circuit.gate(id).fanin[0]]);
  }
  while (!stack.empty()) {
    const GateId id = stack.back();
    stack.pop_back();
    if (live[id])
      continue;
    live[id] = true;
    for (GateId f : fanin[id])
      stack.push_back(f);
  }

  Circuit out;
  std::vector<GateId> map(circuit.size(), 0);
  for (GateId id : circuit.inputs())
    if (live[id])
      map[id] = out.add_gate(GateKind::Input, {}, circuit.gate(id).name);
  for (GateId id : order) {
    const auto& g = circuit.gate(id);
    if (!live[id] || rep[id] != id || g.kind == GateKind::Input || g.kind == GateKind::Output)
      continue;
    std::vector<GateId> fi;
    for (GateId f : fanin[id])
      fi.push_back(map[f]);
    // NOR(a, a) is an inverter.
    const auto kind = g.kind == GateKind::Nor && fi.size() == 1 ? GateKind::Not : g.kind;
    map[id] = out.add_gate(kind, std::move(fi), g.name);
  }
  for (GateId id : circuit.outputs()) {
    const auto& g = circuit.gate(id);
    out.add_gate(GateKind::Output, {map[rep[g.fanin[0]]]}, g.name);
  }
  return out;
}

} // namespace cmol
