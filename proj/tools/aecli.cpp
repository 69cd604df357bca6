// Command-line surface for the equivariant transportation-norm toolkit.
//
// Every command reads a single JSON instance document, runs its checks, and
// prints one RunReport JSON object to stdout. Reports are byte-deterministic
// for identical inputs, flags, and seed; wall-clock timing goes to stderr.
// Exit status: 0 when every executed check passes, 1 when a check fails,
// 2 on structural errors (unreadable input, unknown names, refusals).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ae/instance.hpp"
#include "ae/inverse_system.hpp"
#include "ae/molecule.hpp"
#include "ae/norm.hpp"
#include "ae/quotient.hpp"
#include "ae/sampling.hpp"

namespace {

using ae::Json;

// A check failure flips the report outcome; a structural error aborts the
// command with exit status 2.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string command;
  Json arguments = Json::object();
  Json checks = Json::array();
  std::optional<Json> result;

  bool all_ok = true;

  void check(const std::string& name, bool ok, Json detail) {
    Json entry = Json::object();
    entry["name"] = name;
    entry["ok"] = ok;
    entry["detail"] = std::move(detail);
    checks.push_back(std::move(entry));
    all_ok = all_ok && ok;
  }
  void check(const std::string& name, const ae::ValidationReport& report) {
    check(name, report.ok(), Json(report.summary()));
  }

  Json render() const {
    Json out = Json::object();
    out["command"] = command;
    out["arguments"] = arguments;
    out["outcome"] = all_ok ? "pass" : "fail";
    out["checks"] = checks;
    if (result) out["result"] = *result;
    return out;
  }
};

struct CommonFlags {
  std::string path;
  std::string mode;       // "", "adjoined", or "internal"
  std::string basepoint;  // point id, "" when unset
  std::string radii_csv;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t samples = 16;
};

std::vector<ae::Rat> parse_radii(const std::string& csv) {
  std::vector<ae::Rat> radii;
  if (csv.empty()) return radii;
  std::stringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      radii.push_back(ae::rat_parse(token));
    } catch (const std::invalid_argument& e) {
      throw CommandError("--radii: " + std::string(e.what()));
    }
  }
  return radii;
}

// Precedence: --mode, then --basepoint, then the document basepoint, then
// adjoined. Internal mode needs a basepoint from one of the two sources.
ae::BasedSpace resolve_based_space(const ae::InstanceDocument& doc,
                                   const CommonFlags& flags,
                                   bool allow_unfixed, RunReport& report) {
  std::string mode = flags.mode;
  if (mode.empty()) {
    mode = (!flags.basepoint.empty() || doc.basepoint) ? "internal"
                                                       : "adjoined";
  }
  report.arguments["mode"] = mode;
  if (mode == "adjoined") {
    report.arguments["basepoint"] = ae::kStarId;
    return ae::BasedSpace::adjoined(doc.gspace);
  }
  std::string id = flags.basepoint;
  if (id.empty() && doc.basepoint) id = *doc.basepoint;
  if (id.empty()) {
    throw CommandError(
        "internal mode needs --basepoint or a \"basepoint\" field");
  }
  const auto idx = doc.gspace.space.index_of(id);
  if (!idx) throw CommandError("unknown basepoint \"" + id + "\"");
  report.arguments["basepoint"] = id;
  try {
    return ae::BasedSpace::internal(doc.gspace, *idx, allow_unfixed);
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }
}

ae::InstanceDocument load_document(const std::string& path) {
  try {
    return ae::InstanceDocument::load(path);
  } catch (const ae::ParseError& e) {
    throw CommandError(e.what());
  }
}

// Commands downstream of validation refuse documents that fail the axioms;
// only `validate` reports them as an ordinary failed check.
void require_valid(const ae::InstanceDocument& doc) {
  const auto report = ae::validate_document(doc);
  if (!report.ok()) {
    throw CommandError("document fails validation: " + report.summary());
  }
}

void write_artifact(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) return;
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw CommandError("cannot write " + out_path);
  out << text;
}

ae::InverseSystem build_document_system(const ae::InstanceDocument& doc,
                                        const std::vector<ae::Rat>& radii) {
  if (doc.family.size() == 0) {
    throw CommandError("the document declares no pseudometrics");
  }
  try {
    return ae::build_system(doc.gspace, doc.family, radii);
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }
}

int finish(const RunReport& report) {
  std::printf("%s\n", report.render().dump(2).c_str());
  return report.all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- commands

int cmd_validate(const CommonFlags& flags, RunReport& report) {
  const auto doc = load_document(flags.path);
  const auto validation = ae::validate_document(doc);
  report.check("document", validation);
  Json counts = Json::object();
  counts["points"] = doc.gspace.space.size();
  counts["group_order"] = doc.gspace.group.size();
  counts["pseudometrics"] = doc.family.size();
  counts["maps"] = doc.maps.size();
  counts["molecules"] = doc.molecules.size();
  report.result = counts;
  return finish(report);
}

int cmd_norm(const CommonFlags& flags, const std::string& molecule_name,
             bool oracle, RunReport& report) {
  report.arguments["molecule"] = molecule_name;
  report.arguments["oracle"] = oracle;
  const auto doc = load_document(flags.path);
  require_valid(doc);
  const auto* coeffs = doc.find_molecule(molecule_name);
  if (!coeffs) {
    throw CommandError("no molecule named \"" + molecule_name + "\"");
  }
  const auto b = resolve_based_space(doc, flags, false, report);
  ae::Molecule m;
  try {
    m = ae::resolve_molecule(*coeffs, b);
  } catch (const ae::ParseError& e) {
    throw CommandError(e.what());
  }

  const auto r = ae::norm(m, b);
  report.check("certificate", ae::verify_certificate(m, r, b));
  if (oracle) {
    ae::Rat reference;
    try {
      reference = ae::brute_force_norm(m, b);
    } catch (const std::invalid_argument& e) {
      throw CommandError(std::string("oracle refused: ") + e.what());
    }
    Json detail = Json::object();
    detail["oracle"] = ae::rat_to_json(reference);
    detail["simplex"] = ae::rat_to_json(r.value);
    report.check("oracle_agreement", reference == r.value, std::move(detail));
  }

  auto artifact = ae::norm_result_to_json(r, b);
  report.result = artifact;
  write_artifact(flags.out_path, artifact.dump(2) + "\n");
  return finish(report);
}

int cmd_quotient(const CommonFlags& flags, const std::string& mu_name,
                 RunReport& report) {
  report.arguments["mu"] = mu_name;
  const auto doc = load_document(flags.path);
  require_valid(doc);
  const auto idx = doc.family.index_of(mu_name);
  if (!idx) throw CommandError("no pseudometric named \"" + mu_name + "\"");

  const auto q = ae::make_quotient(doc.gspace, doc.family.members[*idx]);
  report.check("class_metric",
               ae::validate_metric(q.space.gspace.space, ae::MetricMode::Metric));
  report.check("induced_action",
               ae::validate_action(q.space.gspace.group,
                                   q.space.gspace.space.size(),
                                   q.space.gspace.action));
  report.check("class_invariance",
               ae::check_invariance(q.space.gspace.space, q.space.gspace.group,
                                    q.space.gspace.action));

  auto artifact = ae::quotient_to_json(q, doc.gspace);
  report.result = artifact;
  write_artifact(flags.out_path, artifact.dump(2) + "\n");
  return finish(report);
}

int cmd_factorize(const CommonFlags& flags, const std::string& map_name,
                  RunReport& report) {
  report.arguments["map"] = map_name;
  const auto doc = load_document(flags.path);
  require_valid(doc);
  const auto* f = doc.find_map(map_name);
  if (!f) throw CommandError("no map named \"" + map_name + "\"");

  ae::Factorization fact;
  try {
    fact = ae::factorize(*f, f->target.space);
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }

  // factorize would have thrown on an internal contradiction; re-derive the
  // two laws here so the report carries explicit witnesses.
  bool composes = true;
  for (std::size_t x = 0; x < f->image.size(); ++x) {
    composes = composes &&
               fact.phi[fact.quotient.map.assignment[x]] == f->image[x];
  }
  report.check("phi_composes", composes,
               Json("phi([x]) = f(x) over every source point"));
  bool isometric = true;
  const auto& qm = fact.quotient.space.gspace.space;
  for (std::size_t i = 0; i < qm.size(); ++i) {
    for (std::size_t j = 0; j < qm.size(); ++j) {
      isometric = isometric &&
                  qm.at(i, j) == f->target.space.at(fact.phi[i], fact.phi[j]);
    }
  }
  report.check("phi_isometric", isometric,
               Json("class distances match target distances"));

  auto artifact = ae::factorization_to_json(fact, *f);
  report.result = artifact;
  write_artifact(flags.out_path, artifact.dump(2) + "\n");
  return finish(report);
}

int cmd_system(const CommonFlags& flags, RunReport& report) {
  const auto radii = parse_radii(flags.radii_csv);
  Json radii_echo = Json::array();
  for (const auto& r : radii) radii_echo.push_back(ae::rat_to_json(r));
  report.arguments["radii"] = std::move(radii_echo);
  report.arguments["seed"] = flags.seed;
  report.arguments["samples"] = flags.samples;

  const auto doc = load_document(flags.path);
  require_valid(doc);
  auto s = build_document_system(doc, radii);
  report.check("system_laws", ae::verify_system(s));
  report.check("tube_monotonicity",
               ae::tube_monotonicity_report(s, flags.seed, flags.samples));

  if (report.all_ok) {
    const auto artifact = ae::export_system(s, ae::ExportFormat::Json);
    report.result = Json::parse(artifact);
    write_artifact(flags.out_path, artifact);
  }
  return finish(report);
}

int cmd_export(const CommonFlags& flags, const std::string& format,
               RunReport& report) {
  const auto radii = parse_radii(flags.radii_csv);
  Json radii_echo = Json::array();
  for (const auto& r : radii) radii_echo.push_back(ae::rat_to_json(r));
  report.arguments["radii"] = std::move(radii_echo);
  report.arguments["format"] = format;

  const auto doc = load_document(flags.path);
  require_valid(doc);
  auto s = build_document_system(doc, radii);
  report.check("system_laws", ae::verify_system(s));
  if (!report.all_ok) return finish(report);

  if (format == "dot") {
    const auto text = ae::export_system(s, ae::ExportFormat::Dot);
    report.result = Json(text);
    write_artifact(flags.out_path, text);
  } else {
    const auto text = ae::export_system(s, ae::ExportFormat::Json);
    report.result = Json::parse(text);
    write_artifact(flags.out_path, text);
  }
  return finish(report);
}

int cmd_check(const CommonFlags& flags, bool eq3_literal, RunReport& report) {
  report.arguments["seed"] = flags.seed;
  report.arguments["samples"] = flags.samples;
  report.arguments["action_mode"] = eq3_literal ? "eq3_literal" : "pushforward";

  const auto doc = load_document(flags.path);
  report.check("document", ae::validate_document(doc));
  if (!report.all_ok) return finish(report);

  const auto b = resolve_based_space(doc, flags, eq3_literal, report);
  const auto mode =
      eq3_literal ? ae::ActionMode::Eq3Literal : ae::ActionMode::Pushforward;

  // Molecule pool: seeded samples plus every resolvable document molecule.
  auto pool = ae::sample_molecules(b, flags.samples, flags.seed);
  std::size_t skipped_star = 0;
  for (const auto& [name, coeffs] : doc.molecules) {
    try {
      pool.push_back(ae::resolve_molecule(coeffs, b));
    } catch (const ae::ParseError&) {
      // Molecules over the adjoined basepoint have no internal reading;
      // genuinely malformed ones were caught by validate_document above.
      ++skipped_star;
    }
  }
  Json pool_detail = Json::object();
  pool_detail["sampled"] = flags.samples;
  pool_detail["document"] = doc.molecules.size() - skipped_star;
  pool_detail["skipped"] = skipped_star;
  report.check("molecule_pool", true, std::move(pool_detail));

  const auto axioms = ae::action_axiom_report(b, mode, pool);
  report.check("action_axioms", axioms);

  // Embedding isometry over every point pair.
  {
    bool isometric = true;
    std::string witness = "norm(embed(x) - embed(y)) = d(x, y) on all pairs";
    for (std::size_t x = 0; x < b.n_underlying && isometric; ++x) {
      for (std::size_t y = 0; y < b.n_underlying; ++y) {
        const auto diff = ae::combine(ae::Rat(1), ae::embed(x, b),
                                      ae::Rat(-1), ae::embed(y, b));
        if (ae::norm(diff, b).value != b.metric.at(x, y)) {
          isometric = false;
          witness = "mismatch at (" + b.metric.points[x] + ", " +
                    b.metric.points[y] + ")";
          break;
        }
      }
    }
    report.check("embedding_isometry", isometric, Json(witness));
  }

  // Certified norms over the pool.
  {
    ae::ValidationReport certs;
    for (const auto& m : pool) {
      certs.merge(ae::verify_certificate(m, ae::norm(m, b), b));
    }
    report.check("norm_certificates", certs);
  }

  // Action compatibility: norm invariance and act∘embed = embed∘g. Skipped
  // when the axioms already failed (the probe configuration), where the
  // "action" is not an action and the laws have no content.
  if (axioms.ok()) {
    bool invariant = true;
    for (const auto& m : pool) {
      const auto value = ae::norm(m, b).value;
      for (std::size_t g = 0; g < b.group.size() && invariant; ++g) {
        invariant = ae::norm(ae::act(g, m, b, mode), b).value == value;
      }
      if (!invariant) break;
    }
    report.check("act_norm_invariance", invariant,
                 Json("the action preserves the norm on the pool"));

    bool equivariant = true;
    for (std::size_t g = 0; g < b.group.size() && equivariant; ++g) {
      for (std::size_t x = 0; x < b.n_underlying; ++x) {
        if (ae::act(g, ae::embed(x, b), b, mode) !=
            ae::embed(b.action.apply(g, x), b)) {
          equivariant = false;
          break;
        }
      }
    }
    report.check("embedding_equivariance", equivariant,
                 Json("act(g, embed(x)) = embed(gx) for all g, x"));
  }

  // Quotient laws over the declared family.
  if (doc.family.size() > 0) {
    ae::ValidationReport quotient_laws;
    std::vector<ae::Quotient> quotients;
    for (std::size_t i = 0; i < doc.family.size(); ++i) {
      try {
        quotients.push_back(
            ae::make_quotient(doc.gspace, doc.family.members[i]));
      } catch (const std::invalid_argument& e) {
        quotient_laws.add("quotient", doc.family.names[i] + ": " + e.what());
      }
    }
    if (quotient_laws.ok()) {
      for (std::size_t c = 0; c < quotients.size(); ++c) {
        for (std::size_t f = 0; f < quotients.size(); ++f) {
          if (!ae::pseudometric_leq(doc.family.members[c],
                                    doc.family.members[f])) {
            continue;
          }
          try {
            ae::make_bond(quotients[c], quotients[f]);
          } catch (const std::exception& e) {
            quotient_laws.add("bond", doc.family.names[c] + " <- " +
                                          doc.family.names[f] + ": " +
                                          e.what());
          }
        }
      }
    }
    report.check("quotient_laws", quotient_laws);

    auto s = build_document_system(doc, parse_radii(flags.radii_csv));
    report.check("system_laws", ae::verify_system(s));
    report.check("tube_monotonicity",
                 ae::tube_monotonicity_report(s, flags.seed, flags.samples));
  }

  // Factorization laws for every declared map.
  if (!doc.maps.empty()) {
    ae::ValidationReport fact_laws;
    for (const auto& [name, f] : doc.maps) {
      try {
        ae::factorize(f, f.target.space);
      } catch (const std::exception& e) {
        fact_laws.add("factorize", name + ": " + e.what());
      }
    }
    report.check("factorizations", fact_laws);
  }

  return finish(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact transportation norms, quotients, and inverse systems of finite "
      "G-spaces"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string molecule_name, mu_name, map_name;
  std::string format = "dot";
  bool oracle = false;
  bool eq3_literal = false;

  const auto add_common = [&](CLI::App* cmd, bool with_based_mode) {
    cmd->add_option("path", flags.path, "instance document (JSON)")
        ->required();
    cmd->add_option("--out", flags.out_path, "write the artifact here too");
    if (with_based_mode) {
      cmd->add_option("--mode", flags.mode, "basepoint mode")
          ->check(CLI::IsMember({"adjoined", "internal"}));
      cmd->add_option("--basepoint", flags.basepoint,
                      "internal basepoint id");
    }
  };

  auto* validate = app.add_subcommand("validate", "run every axiom check");
  add_common(validate, false);

  auto* norm = app.add_subcommand("norm", "certified norm of a molecule");
  add_common(norm, true);
  norm->add_option("molecule", molecule_name, "molecule name")->required();
  norm->add_flag("--oracle", oracle, "cross-check against the brute-force oracle");

  auto* quotient = app.add_subcommand("quotient", "quotient by a pseudometric");
  add_common(quotient, false);
  quotient->add_option("--mu", mu_name, "pseudometric name")->required();

  auto* factorize = app.add_subcommand("factorize",
                                       "factor a map through its quotient");
  add_common(factorize, false);
  factorize->add_option("--map", map_name, "map name")->required();

  auto* system = app.add_subcommand("system",
                                    "build and verify the inverse system");
  add_common(system, false);
  system->add_option("--radii", flags.radii_csv, "tube radii, comma-separated");
  system->add_option("--seed", flags.seed, "sampling seed");
  system->add_option("--samples", flags.samples, "samples per bond");

  auto* exporter = app.add_subcommand("export", "export the system diagram");
  add_common(exporter, false);
  exporter->add_option("--radii", flags.radii_csv,
                       "tube radii, comma-separated");
  exporter->add_option("--format", format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}));

  auto* check = app.add_subcommand("check", "run the full property suite");
  add_common(check, true);
  check->add_option("--radii", flags.radii_csv, "tube radii, comma-separated");
  check->add_option("--seed", flags.seed, "sampling seed");
  check->add_option("--samples", flags.samples, "sampled molecules");
  check->add_flag("--eq3-literal", eq3_literal,
                  "use literal basis transport instead of the pushforward");

  CLI11_PARSE(app, argc, argv);

  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.arguments["path"] = flags.path;

  int status = 2;
  try {
    if (validate->parsed()) {
      report.command = "validate";
      status = cmd_validate(flags, report);
    } else if (norm->parsed()) {
      report.command = "norm";
      status = cmd_norm(flags, molecule_name, oracle, report);
    } else if (quotient->parsed()) {
      report.command = "quotient";
      status = cmd_quotient(flags, mu_name, report);
    } else if (factorize->parsed()) {
      report.command = "factorize";
      status = cmd_factorize(flags, map_name, report);
    } else if (system->parsed()) {
      report.command = "system";
      status = cmd_system(flags, report);
    } else if (exporter->parsed()) {
      report.command = "export";
      status = cmd_export(flags, format, report);
    } else if (check->parsed()) {
      report.command = "check";
      status = cmd_check(flags, eq3_literal, report);
    }
  } catch (const CommandError& e) {
    Json out = Json::object();
    out["command"] = report.command;
    out["arguments"] = report.arguments;
    out["outcome"] = "error";
    out["error"] = e.what();
    std::printf("%s\n", out.dump(2).c_str());
    status = 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "aecli: internal error: %s\n", e.what());
    status = 2;
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::fprintf(stderr, "aecli: %s finished in %lld ms\n",
               report.command.c_str(),
               static_cast<long long>(elapsed.count()));
  return status;
}
