#pragma once

// Command dispatch for the insfin tool. run() is the whole program; main() only forwards argv.

#include "insfin/adjunct.hpp"
#include "insfin/generate.hpp"
#include "insfin/spec_io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace insfin::cli {

using io::Json;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"validate", "derive-pi",    "derive-inst", "adjoint-check", "groth",
                                          "encode-rooms", "skolemize", "ma2fol",      "fp-check",      "hull"};
  return c;
}

struct Options {
  std::string command;
  std::vector<std::string> paths;
  bool json = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::optional<int> bound;
  std::optional<ma::Mode> mode;
  std::optional<std::string> flavor;
  std::string pair = "GF";
  std::uint64_t limit = 50'000'000;
};

struct Outcome {
  Report report;
  std::optional<Json> result;
};

inline int exit_code(Status s) {
  switch (s) {
    case Status::valid: return 0;
    case Status::violations: return 1;
    case Status::structural_error: return 2;
    case Status::refused: return 3;
  }
  return 2;
}

inline const char* to_string(ItemKind k) {
  switch (k) {
    case ItemKind::violation: return "violation";
    case ItemKind::structural: return "structural";
    case ItemKind::refusal: return "refused";
  }
  return "?";
}

inline Json report_json(const Report& r) {
  Json j;
  j["status"] = to_string(r.status());
  j["items"] = Json::array();
  for (const auto& it : r.items)
    j["items"].push_back({{"kind", to_string(it.kind)}, {"location", it.location}, {"law", it.law}, {"witnesses", it.witnesses}});
  return j;
}

/// Human form: one status line, then one line per item, then the result (if any) as JSON.
inline void emit(const Outcome& o, bool json, std::ostream& out) {
  if (json) {
    Json j = report_json(o.report);
    if (o.result) j["result"] = *o.result;
    out << j.dump() << "\n";
    return;
  }
  const auto n = o.report.items.size();
  if (o.report.ok()) {
    out << "OK (0 violations)\n";
  } else {
    std::string status = to_string(o.report.status());
    for (auto& c : status) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    out << status << " (" << n << (n == 1 ? " item)" : " items)") << "\n";
    for (const auto& it : o.report.items) {
      out << to_string(it.kind) << " at " << (it.location.empty() ? "-" : it.location) << ": " << it.law;
      if (!it.witnesses.empty()) {
        out << " [";
        for (std::size_t i = 0; i < it.witnesses.size(); ++i) out << (i ? "; " : "") << it.witnesses[i];
        out << "]";
      }
      out << "\n";
    }
  }
  if (o.result) out << o.result->dump(2) << "\n";
}

namespace detail {

inline io::SpecFile load_kind(const Options& opt, std::initializer_list<const char*> allowed) {
  if (opt.paths.empty()) throw io::SchemaError(opt.command + ": missing spec file");
  io::SpecFile f = io::load(opt.paths.front());
  for (const char* k : allowed)
    if (f.kind == k) return f;
  std::string want;
  for (const char* k : allowed) want += std::string(want.empty() ? "" : " or ") + k;
  throw io::SchemaError(opt.paths.front() + ": " + opt.command + " expects kind " + want + ", got " + f.kind);
}

inline std::vector<fol::Formula> job_universe(const io::SkolemJob& job, Guard& guard) {
  if (!job.sentences.empty()) return job.sentences;
  return fol::quantifier_depth_universe(job.sig, *job.depth, guard);
}

inline Json skolem_data_json(const sk::SkolemData& sd) {
  Json j;
  j["signature"] = {{"functions", io::detail::symbols_json(sd.skolem_sig.functions)},
                    {"relations", io::detail::symbols_json(sd.skolem_sig.relations)}};
  j["skolem_functions"] = Json::array();
  for (std::size_t k = 0; k < sd.fns.size(); ++k)
    j["skolem_functions"].push_back({{"name", sd.fns[k].name},
                                     {"arity", sd.fns[k].free_vars.size()},
                                     {"existential", fol::show(sd.base_sig, sd.fns[k].existential)}});
  j["theory"] = Json::array();
  for (const auto& ax : sd.theory) j["theory"].push_back(fol::show(sd.skolem_sig, ax));
  j["universe_size"] = sd.universe.size();
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline Outcome cmd_validate(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"category", "functor", "institution", "pi_institution", "map", "room_diagram",
                                           "indexed_cat", "logic", "filter_pair", "multialgebra", "fol_model", "skolem_job"});
  Outcome o;
  const std::string& k = f.kind;
  if (k == "category") {
    o.report = validate_category(*io::read_category(f.doc, f.ctx, "category"));
  } else if (k == "functor") {
    o.report = validate_functor(io::read_functor(f.doc, f.ctx));
  } else if (k == "institution") {
    o.report = validate_institution(io::read_institution(f.doc, f.ctx));
  } else if (k == "pi_institution") {
    o.report = validate_pi(io::read_pi(f.doc, f.ctx));
  } else if (k == "map") {
    io::MapSpec m = io::read_map(f.doc, f.ctx);
    if (m.pi_src) {
      o.report.merge(validate_pi(*m.pi_src), "source");
      o.report.merge(validate_pi(*m.pi_dst), "target");
      if (o.report.ok()) o.report = validate_map(m.map, *m.pi_src, *m.pi_dst);
    } else {
      o.report.merge(validate_institution(*m.ins_src), "source");
      o.report.merge(validate_institution(*m.ins_dst), "target");
      if (o.report.ok()) o.report = validate_map(m.map, *m.ins_src, *m.ins_dst);
    }
  } else if (k == "room_diagram") {
    io::RoomDiagramSpec d = io::read_room_diagram(f.doc, f.ctx);
    o.report = d.rooms ? validate_room_diagram(*d.rooms) : validate_piroom_diagram(*d.pi_rooms);
  } else if (k == "indexed_cat") {
    o.report = validate_indexed(io::read_indexed(f.doc, f.ctx));
  } else if (k == "logic") {
    o.report = prop::validate_logic(io::read_logic(f.doc, f.ctx));
  } else if (k == "filter_pair") {
    o.report = fp::validate_fp(io::read_filter_pair(f.doc, f.ctx));
  } else if (k == "multialgebra") {
    io::MultialgebraSpec m = io::read_multialgebra(f.doc, f.ctx);
    if (opt.mode) m.algebra.mode = *opt.mode;
    o.report = ma::validate_multialgebra(m.sig, m.algebra);
  } else if (k == "fol_model") {
    io::FolModelSpec m = io::read_fol_model(f.doc, f.ctx);
    o.report = fol::validate_signature(m.sig);
    if (o.report.ok()) o.report = fol::validate_model(m.sig, m.model);
  } else {
    io::SkolemJob job = io::read_skolem_job(f.doc, f.ctx);
    if (job.model) o.report = fol::validate_model(job.sig, *job.model);
  }
  return o;
}

inline Outcome cmd_derive_pi(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"institution"});
  const Institution I = io::read_institution(f.doc, f.ctx);
  Outcome o{validate_institution(I), std::nullopt};
  if (o.report.ok()) o.result = io::pi_spec(derive_pi(I));
  return o;
}

inline Outcome cmd_derive_inst(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"pi_institution"});
  const PiInstitution J = io::read_pi(f.doc, f.ctx);
  Outcome o{validate_pi(J), std::nullopt};
  if (o.report.ok()) o.result = io::institution_spec(derive_institution(J));
  return o;
}

inline Outcome cmd_encode_rooms(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"institution", "pi_institution"});
  Outcome o;
  if (f.kind == "institution") {
    const Institution I = io::read_institution(f.doc, f.ctx);
    o.report = validate_institution(I);
    if (!o.report.ok()) return o;
    const RoomDiagram d = encode(I);
    if (!(decode(d) == I)) o.report.violation("diagram", "decode . encode = id");
    o.result = io::room_diagram_spec(d);
  } else {
    const PiInstitution J = io::read_pi(f.doc, f.ctx);
    o.report = validate_pi(J);
    if (!o.report.ok()) return o;
    const PiRoomDiagram d = encode(J);
    if (!(decode(d) == J)) o.report.violation("diagram", "decode . encode = id");
    o.result = io::room_diagram_spec(d);
  }
  return o;
}

inline Outcome cmd_groth(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"indexed_cat"});
  const IndexedCat ix = io::read_indexed(f.doc, f.ctx);
  Outcome o{validate_indexed(ix), std::nullopt};
  if (!o.report.ok()) return o;
  const GrothCat g = groth(ix);
  o.report.merge(validate_category(*g.total), "total");
  o.report.merge(validate_functor(g.projection), "projection");
  o.result = io::with_header("functor", io::functor_body(g.projection));
  return o;
}

/// Institution-level hom-set bijections over every (π-institution, institution) pair found in the given
/// files or directories, closed under derive_pi / derive_institution. --pair room-GF / room-FG runs the
/// room-level grid with |S| ≤ bound instead.
inline Outcome cmd_adjoint_check(const Options& opt) {
  Outcome o;
  const int bound = opt.bound.value_or(2);
  Guard guard(opt.limit);
  if (opt.pair == "room-GF" || opt.pair == "room-FG") {
    GridResult g = room_adjunction_grid(opt.pair == "room-GF", static_cast<std::size_t>(bound), PiRoomLaw::lax, guard);
    o.report = g.report;
    o.result = Json{{"pair", opt.pair}, {"pairs", g.pairs}, {"failures", g.failures}};
    return o;
  }
  if (opt.pair != "GF" && opt.pair != "FG") throw io::SchemaError("--pair: GF, FG, room-GF or room-FG");
  const bool left_is_G = opt.pair == "GF";
  const std::string flavor = opt.flavor.value_or(left_is_G ? "co" : "mor");
  if (flavor != "co" && flavor != "mor") throw io::SchemaError("--flavor: mor or co");
  const bool co = flavor == "co";

  std::vector<std::pair<std::string, Institution>> inss;
  std::vector<std::pair<std::string, PiInstitution>> pis;
  auto small = [&](const CatRef& sig, const SetFunctor& sen) {
    if (sig->n_obj() > bound) return false;
    for (const auto& c : sen.carriers)
      if (static_cast<int>(c.size()) > bound) return false;
    return true;
  };
  auto take = [&](const std::filesystem::path& p) {
    io::SpecFile f = io::load(p);
    const std::string name = p.filename().string();
    if (f.kind == "institution") {
      Institution I = io::read_institution(f.doc, f.ctx);
      o.report.merge(validate_institution(I), name);
      if (small(I.sig, I.sen)) inss.emplace_back(name, std::move(I));
    } else if (f.kind == "pi_institution") {
      PiInstitution J = io::read_pi(f.doc, f.ctx);
      o.report.merge(validate_pi(J), name);
      if (small(J.sig, J.sen)) pis.emplace_back(name, std::move(J));
    }
  };
  if (opt.paths.empty()) throw io::SchemaError("adjoint-check: missing fixture directory or files");
  for (const auto& path : opt.paths) {
    if (std::filesystem::is_directory(path)) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(path))
        if (e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& p : files) take(p);
    } else {
      take(path);
    }
  }
  if (!o.report.ok()) return o;
  if (opt.seed_given) {
    gen::Rng rng(opt.seed);
    for (int k = 0; k < 3; ++k)
      pis.emplace_back("random-" + std::to_string(opt.seed) + "-" + std::to_string(k),
                       gen::random_pi(rng, bound, 2, bound));
  }
  const std::size_t n_ins = inss.size(), n_pi = pis.size();
  for (std::size_t i = 0; i < n_ins; ++i) pis.emplace_back("F(" + inss[i].first + ")", derive_pi(inss[i].second));
  for (std::size_t i = 0; i < n_pi; ++i) inss.emplace_back("G(" + pis[i].first + ")", derive_institution(pis[i].second));

  Json pairs = Json::array();
  for (const auto& [jn, J] : pis)
    for (const auto& [in, I] : inss) {
      HomBijection h = institution_adjunction(J, I, left_is_G, co, guard);
      const std::string loc = "(" + jn + ", " + in + ")";
      o.report.merge(h.report, loc);
      pairs.push_back({{"pi_institution", jn}, {"institution", in}, {"left", h.left}, {"right", h.right}});
    }
  o.result = Json{{"pair", opt.pair}, {"flavor", flavor}, {"hom_sets", pairs}};
  return o;
}

inline Outcome cmd_skolemize(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"skolem_job"});
  const io::SkolemJob job = io::read_skolem_job(f.doc, f.ctx);
  Guard guard(opt.limit);
  const sk::SkolemData sd = sk::skolemize(job.sig, detail::job_universe(job, guard), guard);
  Outcome o;
  Json result = detail::skolem_data_json(sd);
  if (opt.bound) {
    sk::AxiomCounts counts;
    o.report = sk::check_skolem_axioms(sd, static_cast<std::size_t>(*opt.bound), guard, &counts);
    result["checked"] = {{"max_size", *opt.bound}, {"models", counts.models}, {"inclusion_pairs", counts.inclusion_pairs},
                         {"hulls", counts.hulls}};
  }
  o.result = result;
  return o;
}

inline Outcome cmd_hull(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"skolem_job"});
  const io::SkolemJob job = io::read_skolem_job(f.doc, f.ctx);
  if (!job.model) throw io::SchemaError("hull: the skolem_job needs a \"model\"");
  Outcome o{fol::validate_model(job.sig, *job.model), std::nullopt};
  if (!o.report.ok()) return o;
  Guard guard(opt.limit);
  const sk::SkolemData sd = sk::skolemize(job.sig, detail::job_universe(job, guard), guard);
  const fol::FolModel ms = sk::skolemize_model(*job.model, sd);
  Subset seed(ms.size());
  for (const auto& e : job.seed) seed.set(io::detail::lookup(ms.carrier, e, "seed"));
  const fol::Substructure hull = sk::skolem_hull(sd, ms, seed);
  const fol::FolModel base = fol::reduct(hull.model, sd.tau);
  const auto want = fol::bounded_theory(*job.model, sd.universe);
  const auto got = fol::bounded_theory(base, sd.universe);
  if (got != want)
    o.report.violation("hull of " + show_subset(seed, ms.carrier), "skolem hull preserves the bounded theory",
                       sk::theory_difference(job.sig, sd.universe, got, want));
  o.result = Json{{"hull", base.carrier}, {"model", io::fol_model_spec(job.sig, base)}};
  return o;
}

inline Outcome cmd_ma2fol(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"multialgebra"});
  io::MultialgebraSpec m = io::read_multialgebra(f.doc, f.ctx);
  if (opt.mode) m.algebra.mode = *opt.mode;
  Outcome o{ma::validate_multialgebra(m.sig, m.algebra), std::nullopt};
  if (!o.report.ok()) return o;
  const fol::FolSignature fs = ma::fol_signature(m.sig);
  const fol::FolModel b = ma::ma_to_fol_structure(m.sig, m.algebra);
  if (m.algebra.mode == ma::Mode::narrow)
    for (const auto& t : ma::totality_sentences(m.sig))
      if (!fol::satisfies(b, t)) o.report.violation("structure", "totality", {fol::show(fs, t)});
  if (!(sk::ma_beta_inverse(m.sig, b, m.algebra.mode) == m.algebra)) o.report.violation("structure", "beta^-1 . beta = id");
  o.result = io::fol_model_spec(fs, b);
  return o;
}

inline Outcome cmd_fp_check(const Options& opt) {
  io::SpecFile f = detail::load_kind(opt, {"filter_pair"});
  const fp::FilterPairFin p = io::read_filter_pair(f.doc, f.ctx);
  Outcome o{fp::validate_fp(p), std::nullopt};
  if (!o.report.ok()) return o;
  Guard guard(opt.limit);
  const Institution I = fp::fp_institution(p);
  o.report.merge(validate_institution(I), "fp_institution");
  const PiInstitution J = fp::fp_pi(p, guard);
  o.report.merge(validate_pi(J), "fp_pi");
  if (!(J == derive_pi(I))) o.report.violation("fp_pi", "fp_pi = derive_pi . fp_institution");
  o.result = io::pi_spec(J);
  return o;
}

inline Outcome dispatch(const Options& opt) {
  const std::string& c = opt.command;
  if (c == "validate") return cmd_validate(opt);
  if (c == "derive-pi") return cmd_derive_pi(opt);
  if (c == "derive-inst") return cmd_derive_inst(opt);
  if (c == "adjoint-check") return cmd_adjoint_check(opt);
  if (c == "groth") return cmd_groth(opt);
  if (c == "encode-rooms") return cmd_encode_rooms(opt);
  if (c == "skolemize") return cmd_skolemize(opt);
  if (c == "ma2fol") return cmd_ma2fol(opt);
  if (c == "fp-check") return cmd_fp_check(opt);
  if (c == "hull") return cmd_hull(opt);
  throw io::SchemaError("unknown command: " + c);
}

/// Runs a command, turning schema errors and guard trips into reports.
inline int execute(const Options& opt, std::ostream& out) {
  Outcome o;
  try {
    o = dispatch(opt);
  } catch (const Refusal& r) {
    o = {};
    o.report.refuse(r.guard());
  } catch (const StructuralError& e) {
    o = {};
    o.report.structural("", e.what());
  }
  emit(o, opt.json, out);
  return exit_code(o.report.status());
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks and derivations over finite institutions, pi-institutions and their relatives."};
  app.name("insfin");
  Options opt;
  std::string mode, flavor;
  std::optional<std::uint64_t> seed;
  app.add_flag("--json", opt.json, "Machine-readable report");
  app.add_option("--seed", seed, "Seed for generated inputs");
  app.add_option("--bound", opt.bound, "Size bound for enumerations");
  app.add_option("--mode", mode, "Multialgebra mode")->check(CLI::IsMember({"narrow", "wide"}));
  app.add_option("--flavor", flavor, "mor or co")->check(CLI::IsMember({"mor", "co"}));
  app.add_option("--pair", opt.pair, "GF, FG, room-GF or room-FG (adjoint-check)");
  app.add_option("--limit", opt.limit, "Search-space budget");
  app.add_option("command", opt.command, "One of: validate derive-pi derive-inst adjoint-check groth encode-rooms "
                                          "skolemize ma2fol fp-check hull")
      ->required();
  app.add_option("paths", opt.paths, "Spec files (or a fixture directory)");
  app.allow_extras(false);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }
  if (std::find(commands().begin(), commands().end(), opt.command) == commands().end()) {
    err << "unknown command: " << opt.command << "\n" << app.help();
    return 2;
  }
  if (seed) opt.seed = *seed, opt.seed_given = true;
  if (!mode.empty()) opt.mode = io::read_mode(mode);
  if (!flavor.empty()) opt.flavor = flavor;
  return execute(opt, out);
}

}  // namespace insfin::cli
