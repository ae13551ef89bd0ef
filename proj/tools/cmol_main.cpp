// cmol: command-line front end for CMOL cell assignment.
//
// Exit codes: 0 success, 1 unsatisfiable / violations / repair failed,
// 2 invalid input, 3 budget exhausted, 4 internal error.  `solve` follows the
// SAT-competition convention instead (10 SAT, 20 UNSAT, 0 unknown).

#include "cmol/defects.hpp"
#include "cmol/error.hpp"
#include "cmol/netlist.hpp"
#include "cmol/nor_transform.hpp"
#include "cmol/placer.hpp"
#include "cmol/reconfig.hpp"
#include "cmol/render.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kBudget = 3, kInternal = 4 };

struct Globals {
  std::uint64_t seed = 1;
  double budget_seconds = 0;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw cmol::InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw cmol::InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw cmol::InputError("cannot write '" + path.string() + "'");
  out << text;
}

void write_circuit(const fs::path& path, const cmol::Circuit& c) {
  if (path.extension() == ".json")
    write_file(path, circuit_to_json(c).dump(2) + "\n");
  else
    write_file(path, emit_bench(c));
}

cmol::SolverOptions solver_options(const Globals& g) {
  cmol::SolverOptions o;
  o.seed = g.seed;
  o.time_limit_seconds = g.budget_seconds;
  return o;
}

bool nor_only(const cmol::Circuit& c) {
  for (const auto& g : c.gates())
    if (g.kind != cmol::GateKind::Input && g.kind != cmol::GateKind::Output && g.kind != cmol::GateKind::Nor &&
        g.kind != cmol::GateKind::Not)
      return false;
  return true;
}

json summary(const cmol::Circuit& c) {
  return {{"inputs", c.inputs().size()},
          {"outputs", c.outputs().size()},
          {"cells", c.placeable_gates().size()},
          {"nor", c.count(cmol::GateKind::Nor)},
          {"not", c.count(cmol::GateKind::Not)}};
}

json counts_json(const cmol::ClauseCounts& c) {
  return {{"cell_mutex", c.cell_mutex}, {"placed", c.placed},         {"gate_mutex", c.gate_mutex},
          {"domain", c.domain},         {"stuck_closed", c.stuck_closed}, {"required", c.required},
          {"total", c.total()}};
}

int exit_for(cmol::SolveStatus s) {
  switch (s) {
  case cmol::SolveStatus::Sat: return kOk;
  case cmol::SolveStatus::Unsat: return kFailed;
  case cmol::SolveStatus::TimedOut: return kBudget;
  }
  return kInternal;
}

// ---- nor
struct NorArgs {
  std::string input, output;
};

int run_nor(const NorArgs& a) {
  const auto raw = cmol::read_circuit_file(a.input);
  const auto swept = cmol::sweep(cmol::carve_sequential(raw));
  const auto nor = cmol::to_nor(swept);
  json out = summary(nor);
  const auto report = cmol::check_gate_conservation(swept, nor);
  out["gate_conservation"] = {{"status", report.holds()                                                  ? "holds"
                                : report.status == cmol::ConservationStatus::CountMismatch ? "count_mismatch"
                                                                                       : "not_applicable"},
                     {"source_gates", report.source_gates},
                     {"nor_gates", report.nor_gates}};
  if (!report.reason.empty())
    out["gate_conservation"]["reason"] = report.reason;
  if (!a.output.empty())
    write_circuit(a.output, nor);
  else
    std::cerr << emit_bench(nor);
  std::cout << out.dump() << "\n";
  return kOk;
}

// ---- place
struct PlaceArgs {
  std::string circuit, fabric, pins, output, cnf, external;
  int x = 0, y = 0, r = 9;
};

int run_place(const PlaceArgs& a, const Globals& g) {
  // .bench spells NOR as OR+NOT, so anything that is not NOR/NOT yet goes
  // through the pipeline
  auto circuit = cmol::read_circuit_file(a.circuit);
  if (!nor_only(circuit))
    circuit = cmol::prepare_circuit(circuit);

  std::optional<cmol::Fabric> fabric;
  if (!a.fabric.empty()) {
    fabric = cmol::fabric_from_json(read_json(a.fabric));
  } else {
    auto [w, h] = cmol::default_region(circuit.placeable_gates().size(),
                                       circuit.inputs().size() + circuit.outputs().size());
    fabric.emplace(a.x > 0 ? a.x : w, a.y > 0 ? a.y : h, a.r);
  }
  const cmol::PinSet pins = !a.pins.empty() ? cmol::pins_from_json(read_json(a.pins))
                            : a.fabric.empty() ? cmol::perimeter_pins(circuit, fabric->width(), fabric->height())
                                               : cmol::PinSet{};

  if (!a.cnf.empty())
    write_file(a.cnf, cmol::emit_dimacs(cmol::encode(circuit, *fabric, pins).cnf));

  cmol::PlaceOptions opts;
  opts.solver = solver_options(g);
  opts.external_solver = a.external;
  const auto r = cmol::place(circuit, *fabric, pins, opts);
  json out = summary(circuit);
  out["X"] = fabric->width();
  out["Y"] = fabric->height();
  out["status"] = cmol::to_string(r.status);
  out["vars"] = r.num_vars;
  out["clauses"] = r.num_clauses;
  out["clauses_before_propagation"] = counts_json(r.before_propagation);
  out["encode_seconds"] = r.encode_seconds;
  out["solve_seconds"] = r.solver.seconds;
  out["conflicts"] = r.solver.conflicts;
  out["decisions"] = r.solver.decisions;
  if (!r.diagnostics.empty()) {
    out["diagnostics"] = json::array();
    for (const auto& d : r.diagnostics)
      out["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
  }
  if (r.placement && !a.output.empty())
    write_file(a.output, cmol::design_to_json({circuit, *fabric, pins, *r.placement}).dump(1) + "\n");
  std::cout << out.dump() << "\n";
  return exit_for(r.status);
}

// ---- verify
struct VerifyArgs {
  std::string placement, reference;
};

int run_verify(const VerifyArgs& a, const Globals& g) {
  const auto design = cmol::design_from_json(read_json(a.placement));
  const auto violations = cmol::validate(design.circuit, design.fabric, design.pins, design.placement);
  for (const auto& v : violations)
    std::cout << cmol::violation_to_json(v).dump() << "\n";
  json out{{"violations", violations.size()}};
  bool ok = violations.empty();
  bool unplaced = false;
  for (const auto& v : violations)
    unplaced = unplaced || v.rule == "unplaced" || v.rule == "out_of_bounds";
  if (!unplaced) {
    const auto reference = a.reference.empty() ? design.circuit : cmol::carve_sequential(cmol::read_circuit_file(a.reference));
    try {
      const auto eq = cmol::check_fabric(design.circuit, design.fabric, design.placement, reference, 16, 10000, g.seed);
      out["equivalent"] = eq.equivalent;
      out["vectors"] = eq.vectors;
      out["exhaustive"] = eq.exhaustive;
      if (eq.mismatch)
        out["mismatch"] = *eq.mismatch;
      ok = ok && eq.equivalent;
    } catch (const cmol::InputError& e) {
      out["equivalent"] = false;
      out["simulation_error"] = e.what();
      ok = false;
    }
  }
  std::cout << out.dump() << "\n";
  return ok ? kOk : kFailed;
}

// ---- inject
struct InjectArgs {
  std::string fabric, output, center;
  double sigma = 3.0;
  std::vector<std::string> kinds;
};

int run_inject(const InjectArgs& a, const Globals& g) {
  const auto fabric = cmol::fabric_from_json(read_json(a.fabric));
  cmol::InjectionConfig cfg;
  cfg.sigma = a.sigma;
  cfg.seed = g.seed;
  if (!a.center.empty()) {
    int x = 0, y = 0;
    char comma = 0;
    std::istringstream in(a.center);
    if (!(in >> x >> comma >> y) || comma != ',')
      throw cmol::InputError("--center expects x,y");
    cfg.center = cmol::Coord{x, y};
  }
  if (!a.kinds.empty()) {
    cfg.kinds.clear();
    for (const auto& k : a.kinds) {
      const auto kind = cmol::defect_kind_from_string(k);
      if (!kind)
        throw cmol::InputError("unknown defect kind '" + k + "'");
      cfg.kinds.insert(*kind);
    }
  }
  const auto inj = cmol::inject(fabric, cfg);
  json list = json::array();
  for (const auto& d : inj.defects)
    list.push_back(cmol::defect_to_json(d));
  if (!a.output.empty())
    write_file(a.output, cmol::fabric_to_json(inj.fabric).dump(1) + "\n");
  std::cout << json{{"center", cmol::coord_to_json(inj.center)}, {"defects", list}}.dump() << "\n";
  return kOk;
}

// ---- reconfigure
struct ReconfigArgs {
  std::string placement, fabric, output, log;
};

int run_reconfigure(const ReconfigArgs& a, const Globals& g) {
  const auto design = cmol::design_from_json(read_json(a.placement));
  const auto fabric = cmol::fabric_from_json(read_json(a.fabric));
  if (fabric.width() != design.fabric.width() || fabric.height() != design.fabric.height())
    throw cmol::InputError("defective fabric size differs from the placement's fabric");
  cmol::ReconfigOptions opts;
  opts.place.solver = solver_options(g);
  opts.place.solver.time_limit_seconds = 0;
  opts.budget_seconds = g.budget_seconds;
  const auto r = cmol::reconfigure(design.circuit, fabric, design.pins, design.placement, opts);

  std::ostringstream log;
  for (const auto& at : r.attempts)
    log << cmol::attempt_to_json(at).dump() << "\n";
  if (!a.log.empty())
    write_file(a.log, log.str());
  else
    std::cout << log.str();
  if (!a.output.empty())
    write_file(a.output, cmol::design_to_json({design.circuit, fabric, design.pins, r.placement}).dump(1) + "\n");
  json out{{"success", r.success},
            {"repairs", r.iterations},
            {"attempts", r.attempts.size()},
            {"solver_seconds", r.solver_seconds},
            {"remaining_conflicts", r.success ? 0 : r.remaining.size()}};
  if (!r.success)
    out["failure"] = r.failure;
  std::cout << out.dump() << "\n";
  if (r.success)
    return kOk;
  return r.failure.find("budget") != std::string::npos ? kBudget : kFailed;
}

// ---- render
struct RenderArgs {
  std::string placement, output;
};

int run_render(const RenderArgs& a) {
  const auto design = cmol::design_from_json(read_json(a.placement));
  const bool svg = fs::path(a.output).extension() == ".svg";
  const auto text = svg ? cmol::render_svg(design) : cmol::render_ascii(design);
  if (a.output.empty())
    std::cout << text;
  else
    write_file(a.output, text);
  return kOk;
}

// ---- bench
struct BenchArgs {
  std::string suite, output;
};

std::string csv_field(const std::string& s) {
  return s.find_first_of(",\"\n") == std::string::npos ? s : "\"" + s + "\"";
}

int run_bench(const BenchArgs& a, const Globals& g) {
  const auto suite = read_json(a.suite);
  const fs::path base = fs::path(a.suite).parent_path();
  const auto kind = suite.value("kind", std::string("placement"));
  std::ostringstream csv;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  if (kind == "placement") {
    csv << "circuit,inputs,outputs,cells,X,Y,vars,clauses,status,time\n";
    for (const auto& run : suite.at("runs")) {
      const auto name = run.at("name").get<std::string>();
      const auto circuit = cmol::prepare_circuit(cmol::read_circuit_file(resolve(run.at("circuit"))));
      auto [w, h] = cmol::default_region(circuit.placeable_gates().size(),
                                         circuit.inputs().size() + circuit.outputs().size());
      w = run.value("x", w);
      h = run.value("y", h);
      const cmol::Fabric fabric(w, h, run.value("r", 9));
      const auto pins = run.contains("pins") ? cmol::pins_from_json(read_json(resolve(run.at("pins"))))
                                             : cmol::perimeter_pins(circuit, w, h);
      cmol::PlaceOptions opts;
      opts.solver = solver_options(g);
      if (run.contains("budget_seconds"))
        opts.solver.time_limit_seconds = run.at("budget_seconds").get<double>();
      const auto r = cmol::place(circuit, fabric, pins, opts);
      csv << csv_field(name) << ',' << circuit.inputs().size() << ',' << circuit.outputs().size() << ','
          << circuit.placeable_gates().size() << ',' << w << ',' << h << ',' << r.num_vars << ',' << r.num_clauses
          << ',' << cmol::to_string(r.status) << ',' << r.solver.seconds << "\n";
    }
  } else if (kind == "reconfiguration") {
    csv << "circuit,sigma,seed,defects,conflicts,status,repairs,attempts,solver_time\n";
    for (const auto& run : suite.at("runs")) {
      const auto name = run.at("name").get<std::string>();
      const auto circuit = cmol::prepare_circuit(cmol::read_circuit_file(resolve(run.at("circuit"))));
      auto [w, h] = cmol::default_region(circuit.placeable_gates().size(),
                                         circuit.inputs().size() + circuit.outputs().size());
      const cmol::Fabric fabric(run.value("x", w), run.value("y", h), run.value("r", 9));
      const auto pins = cmol::perimeter_pins(circuit, fabric.width(), fabric.height());
      cmol::PlaceOptions opts;
      opts.solver = solver_options(g);
      const auto placed = cmol::place(circuit, fabric, pins, opts);
      if (!placed.placement)
        throw cmol::InputError("'" + name + "' cannot be placed on its defect-free fabric");
      std::set<cmol::DefectKind> kinds;
      for (const auto& k : run.value("kinds", std::vector<std::string>{"DeadCell", "WireBreak", "StuckOpen"})) {
        const auto dk = cmol::defect_kind_from_string(k);
        if (!dk)
          throw cmol::InputError("unknown defect kind '" + k + "'");
        kinds.insert(*dk);
      }
      for (double sigma : run.at("sigmas").get<std::vector<double>>())
        for (std::uint64_t seed : run.at("seeds").get<std::vector<std::uint64_t>>()) {
          cmol::InjectionConfig cfg;
          cfg.sigma = sigma;
          cfg.seed = seed;
          cfg.kinds = kinds;
          const auto inj = cmol::inject(fabric, cfg);
          const auto conflicts = cmol::find_conflicts(circuit, inj.fabric, *placed.placement);
          cmol::ReconfigOptions ro;
          ro.place = opts;
          ro.place.solver.time_limit_seconds = 0;
          ro.budget_seconds = run.value("budget_seconds", g.budget_seconds);
          const auto r = cmol::reconfigure(circuit, inj.fabric, pins, *placed.placement, ro);
          csv << csv_field(name) << ',' << sigma << ',' << seed << ',' << inj.defects.size() << ','
              << conflicts.size() << ',' << (r.success ? "repaired" : "failed") << ',' << r.iterations << ','
              << r.attempts.size() << ',' << r.solver_seconds << "\n";
        }
    }
  } else {
    throw cmol::InputError("suite kind must be 'placement' or 'reconfiguration'");
  }
  if (a.output.empty())
    std::cout << csv.str();
  else
    write_file(a.output, csv.str());
  return kOk;
}

// ---- solve
struct SolveArgs {
  std::string cnf;
};

int run_solve(const SolveArgs& a, const Globals& g) {
  const auto cnf = cmol::parse_dimacs(slurp(a.cnf));
  const auto r = cmol::solve(cnf, solver_options(g));
  if (r.status == cmol::SolveStatus::Sat) {
    std::cout << "s SATISFIABLE\nv";
    for (std::size_t v = 0; v < r.model.size(); ++v)
      std::cout << ' ' << (r.model[v] ? "" : "-") << v + 1;
    std::cout << " 0\n";
    return 10;
  }
  if (r.status == cmol::SolveStatus::Unsat) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s UNKNOWN\n";
  return 0;
}

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMOL cell assignment: NOR mapping, SAT placement, defects and repair"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed for solver and defect injection");
  app.add_option("--budget-seconds", g.budget_seconds, "wall-clock budget, 0 = unlimited");

  NorArgs nor;
  auto* c_nor = app.add_subcommand("nor", "parse, carve flip-flops, sweep and convert to NOR/NOT");
  c_nor->add_option("input", nor.input, ".bench or .json circuit")->required();
  c_nor->add_option("-o,--output", nor.output, "write the NOR circuit (.bench or .json)");

  PlaceArgs place;
  auto* c_place = app.add_subcommand("place", "place a circuit with SAT (converted to NOR/NOT if needed)");
  c_place->add_option("circuit", place.circuit)->required();
  c_place->add_option("--fabric", place.fabric, "fabric JSON; default: near-square region with perimeter pins");
  c_place->add_option("--pins", place.pins, "pin JSON");
  c_place->add_option("-x,--width", place.x, "width of the default region");
  c_place->add_option("-y,--height", place.y, "height of the default region");
  c_place->add_option("-r,--radius", place.r, "connectivity radius of the default region");
  c_place->add_option("-o,--output", place.output, "placement JSON");
  c_place->add_option("--emit-cnf", place.cnf, "write the DIMACS formula");
  c_place->add_option("--external-solver", place.external, "shell command; {} is replaced by the DIMACS path");

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "validate a placement and simulate the programmed fabric");
  c_verify->add_option("placement", verify.placement)->required();
  c_verify->add_option("--reference", verify.reference, "compare against this circuit instead of the placed one");

  InjectArgs inject;
  auto* c_inject = app.add_subcommand("inject", "inject Gaussian-clustered defects into a fabric");
  c_inject->add_option("fabric", inject.fabric)->required();
  c_inject->add_option("--sigma", inject.sigma)->check(CLI::PositiveNumber);
  c_inject->add_option("--center", inject.center, "x,y (default: random)");
  c_inject->add_option("--kinds", inject.kinds, "WireBreak StuckOpen StuckClosed DeadCell")->delimiter(',');
  c_inject->add_option("-o,--output", inject.output, "defective fabric JSON");

  ReconfigArgs reconf;
  auto* c_reconf = app.add_subcommand("reconfigure", "repair a placement against a defective fabric");
  c_reconf->add_option("--placement", reconf.placement)->required();
  c_reconf->add_option("--fabric", reconf.fabric)->required();
  c_reconf->add_option("--out", reconf.output, "repaired placement JSON");
  c_reconf->add_option("--log", reconf.log, "attempt log as JSON lines (default: stdout)");

  RenderArgs render;
  auto* c_render = app.add_subcommand("render", "draw a placement as SVG or text");
  c_render->add_option("placement", render.placement)->required();
  c_render->add_option("-o,--output", render.output, "out.svg for SVG, anything else for text");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "run a benchmark suite and emit CSV");
  c_bench->add_option("suite", bench.suite)->required();
  c_bench->add_option("-o,--output", bench.output);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "solve a DIMACS file (SAT-competition output and exit codes)");
  c_solve->add_option("cnf", solve.cnf)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kInvalid, "usage", e.what());
  }

  try {
    if (*c_nor)
      return run_nor(nor);
    if (*c_place)
      return run_place(place, g);
    if (*c_verify)
      return run_verify(verify, g);
    if (*c_inject)
      return run_inject(inject, g);
    if (*c_reconf)
      return run_reconfigure(reconf, g);
    if (*c_render)
      return run_render(render);
    if (*c_bench)
      return run_bench(bench, g);
    if (*c_solve)
      return run_solve(solve, g);
  } catch (const cmol::InputError& e) {
    return fail(kInvalid, "invalid_input", e.what());
  } catch (const cmol::InternalError& e) {
    return fail(kInternal, "internal", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kInvalid, "invalid_input", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
  return kInvalid;
}
