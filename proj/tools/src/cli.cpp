#include "qmono_cli/cli.hpp"

#include "qmono_cli/statefile.hpp"

#include "qmono/charstates.hpp"
#include "qmono/linalg.hpp"
#include "qmono/measures.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/parallel.hpp"
#include "qmono/reshape.hpp"
#include "qmono/roof.hpp"
#include "qmono/sampling.hpp"
#include "qmono/tail.hpp"
#include "qmono/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qmono::cli {

namespace {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw BadSpec(what + ": cannot parse \"" + tok + "\" as an integer");
    }
  }
  if (out.empty()) throw BadSpec(what + ": empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw BadSpec(what + ": cannot parse \"" + tok + "\" as a number");
    }
  }
  if (out.empty()) throw BadSpec(what + ": empty list");
  return out;
}

// "i,j|k,l" groups subsystems; "i,j" alone puts the rest on the right.
Cut parse_cut(const std::string& text, int n_subsystems) {
  Cut cut;
  const auto bar = text.find('|');
  cut.left = parse_int_list(text.substr(0, bar), "cut");
  if (bar != std::string::npos) {
    cut.right = parse_int_list(text.substr(bar + 1), "cut");
  } else {
    std::vector<bool> used(n_subsystems, false);
    for (int i : cut.left)
      if (i >= 0 && i < n_subsystems) used[i] = true;
    for (int i = 0; i < n_subsystems; ++i)
      if (!used[i]) cut.right.push_back(i);
  }
  return cut;
}

// Measure name, or negativity (which is not a Schmidt functional and is
// evaluated directly).
struct MeasureChoice {
  bool is_negativity = false;
  MeasureId id;
};

MeasureChoice parse_measure(const std::string& text) {
  if (text == "negativity") return {true, {}};
  return {false, MeasureId::parse(text)};
}

// ---------------------------------------------------------------- output

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const ojson& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return csv_escape(v.dump());
}

// One flat record: JSON object, or a CSV header + row in field order.
void emit_record(std::ostream& out, const std::string& format, const ojson& rec) {
  if (format == "csv") {
    std::string header, row;
    for (auto it = rec.begin(); it != rec.end(); ++it) {
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += csv_escape(it.key());
      row += csv_cell(it.value());
    }
    out << header << '\n' << row << '\n';
  } else {
    out << rec.dump(2) << '\n';
  }
}

// Homogeneous list of flat records: JSON array, or CSV with one shared header.
void emit_table(std::ostream& out, const std::string& format, const std::vector<ojson>& rows) {
  if (format == "csv") {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::string line;
      if (r == 0) {
        for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
          if (!line.empty()) line += ',';
          line += csv_escape(it.key());
        }
        out << line << '\n';
        line.clear();
      }
      for (auto it = rows[r].begin(); it != rows[r].end(); ++it) {
        if (!line.empty()) line += ',';
        line += csv_cell(it.value());
      }
      out << line << '\n';
    }
  } else {
    out << ojson(rows).dump(2) << '\n';
  }
}

ojson amplitudes_json(const ComplexVector& v) {
  ojson data = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    data.push_back(ojson::array({v[i].real(), v[i].imag()}));
  return data;
}

// ---------------------------------------------------------------- helpers

DensityMatrix as_density(const StateObject& obj) {
  if (std::holds_alternative<DensityMatrix>(obj)) return std::get<DensityMatrix>(obj);
  const PureState& psi = std::get<PureState>(obj);
  DensityMatrix rho;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  rho.dims = psi.dims;
  return rho;
}

Dims state_dims(const StateObject& obj) {
  return std::visit([](const auto& s) { return s.dims; }, obj);
}

MeasureTriple pick_evaluators(const MeasureChoice& mc, const RunConfig& rc) {
  return mc.is_negativity ? make_negativity_evaluators() : make_evaluators(mc.id, rc.roof());
}

// ---------------------------------------------------------------- config file

void apply_config_file(const std::string& path, RunConfig& rc) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": config must be a JSON object");
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("seed", rc.seed);
  get("tolerance", rc.tolerance);
  get("samples", rc.samples);
  get("restarts", rc.restarts);
  get("ensemble_size", rc.ensemble_size);
  get("max_iterations", rc.max_iterations);
  get("step_tolerance", rc.step_tolerance);
  get("value_tolerance", rc.value_tolerance);
  get("output", rc.output);
  get("threads", rc.threads);
}

void validate_run_config(const RunConfig& rc) {
  if (rc.tolerance <= 0.0) throw BadSpec("tolerance must be positive");
  if (rc.samples < 1) throw BadSpec("samples must be >= 1");
  if (rc.restarts < 1) throw BadSpec("restarts must be >= 1");
  if (rc.max_iterations < 1) throw BadSpec("max-iterations must be >= 1");
  if (rc.threads < 1) throw BadSpec("threads must be >= 1");
  if (rc.output != "json" && rc.output != "csv")
    throw BadSpec("output must be json or csv, got \"" + rc.output + "\"");
}

// ---------------------------------------------------------------- commands

int cmd_measure(const RunConfig& rc, const std::string& state_path, const std::string& cut_text,
                const std::string& measure_text, std::ostream& out) {
  const StateObject obj = load_state(state_path);
  const MeasureChoice mc = parse_measure(measure_text);
  const Dims dims = state_dims(obj);
  const Cut cut = parse_cut(cut_text, static_cast<int>(dims.size()));

  ojson rec;
  rec["command"] = "measure";
  rec["measure"] = mc.is_negativity ? "negativity" : mc.id.name();
  rec["cut"] = cut_text;

  if (std::holds_alternative<PureState>(obj) && !mc.is_negativity) {
    rec["value"] = pure_measure(mc.id, std::get<PureState>(obj), cut);
    rec["method"] = "pure";
    emit_record(out, rc.output, rec);
    return 0;
  }

  const DensityMatrix rho = as_density(obj);
  if (mc.is_negativity) {
    const DensityMatrix grouped = group_cut(rho, cut);
    rec["value"] = negativity(grouped, head_cut(2));
    rec["method"] = "negativity";
    emit_record(out, rc.output, rec);
    return 0;
  }

  const DensityMatrix grouped = group_cut(rho, cut);
  if (grouped.dims == Dims{2, 2} && mc.id.kind == MeasureId::Kind::concurrence) {
    const WoottersRecord rec2 = wootters_analysis(grouped);
    rec["value"] = rec2.c_formation;
    rec["method"] = "wootters";
    rec["c_formation"] = rec2.c_formation;
    rec["c_assistance"] = rec2.c_assistance;
    rec["r_rank"] = rec2.r_rank;
    emit_record(out, rc.output, rec);
    return 0;
  }

  const RoofResult res = roof_optimize(grouped, mc.id, head_cut(2), RoofMode::min, rc.roof());
  rec["value"] = res.value;
  rec["method"] = "roof-min";
  rec["converged"] = res.converged;
  emit_record(out, rc.output, rec);
  return 0;
}

int cmd_roof(const RunConfig& rc, const std::string& state_path, const std::string& cut_text,
             const std::string& measure_text, const std::string& mode_text,
             bool with_members, std::ostream& out) {
  const MeasureChoice mc = parse_measure(measure_text);
  if (mc.is_negativity) throw BadSpec("negativity has no convex-roof extension here");
  if (mode_text != "min" && mode_text != "max")
    throw BadSpec("mode must be min or max, got \"" + mode_text + "\"");
  const DensityMatrix rho = as_density(load_state(state_path));
  const Cut cut = parse_cut(cut_text, static_cast<int>(rho.dims.size()));

  const RoofResult res = roof_optimize(rho, mc.id, cut, mode_text == "min" ? RoofMode::min
                                                                           : RoofMode::max,
                                       rc.roof());
  ojson rec;
  rec["command"] = "roof";
  rec["measure"] = mc.id.name();
  rec["cut"] = cut_text;
  rec["mode"] = mode_text;
  rec["value"] = res.value;
  rec["converged"] = res.converged;
  rec["restarts_used"] = res.restarts_used;
  rec["members"] = static_cast<int>(res.decomposition.size());
  if (with_members && rc.output == "json") {
    ojson members = ojson::array();
    for (const auto& v : res.decomposition.vectors) {
      ojson m;
      m["weight"] = v.norm2();
      m["amplitudes"] = amplitudes_json(v.amplitudes);
      members.push_back(std::move(m));
    }
    rec["decomposition"] = std::move(members);
  }
  emit_record(out, rc.output, rec);
  return 0;
}

int cmd_monogamy(const RunConfig& rc, const std::string& state_path,
                 const std::string& measure_text, double alpha, bool has_alpha,
                 std::ostream& out) {
  const MeasureChoice mc = parse_measure(measure_text);
  const DensityMatrix rho = as_density(load_state(state_path));
  if (rho.dims.size() != 3)
    throw BadShape("monogamy needs a tripartite state, got " +
                   std::to_string(rho.dims.size()) + " factors");
  const MeasureTriple ev = pick_evaluators(mc, rc);
  const MonogamyReport rep = disentangling_check(rho, ev, rc.tolerance);

  ojson rec;
  rec["command"] = "monogamy";
  rec["measure"] = ev.label;
  rec["e_abc"] = rep.e_abc;
  rec["e_ab"] = rep.e_ab;
  rec["e_ac"] = rep.e_ac;
  rec["x1"] = rep.x1;
  rec["x2"] = rep.x2;
  rec["gamma"] = rep.gamma;
  rec["gamma_defined"] = rep.gamma_defined;
  rec["disentangling_satisfied"] = rep.disentangling_satisfied;
  rec["monogamy_verdict"] = rep.monogamy_verdict;
  rec["tolerance"] = rep.tolerance;
  if (has_alpha) {
    rec["alpha"] = alpha;
    rec["deficit"] = monogamy_deficit(rho, ev, alpha);
  }
  emit_record(out, rc.output, rec);
  return 0;
}

int cmd_exponent(const RunConfig& rc, const std::string& dims_text,
                 const std::string& measure_text, const std::string& out_path,
                 std::ostream& out) {
  const Dims dims = parse_int_list(dims_text, "dims");
  for (int d : dims)
    if (d < 2) throw BadSpec("dims: factor dimension " + std::to_string(d) + " < 2");
  if (dims.size() != 3) throw BadSpec("exponent scans run on tripartite dims");
  const MeasureChoice mc = parse_measure(measure_text);
  const MeasureTriple ev = pick_evaluators(mc, rc);

  const ExponentScan scan = exponent_scan(dims, ev, rc.samples, rc.seed, true, rc.threads);
  if (!out_path.empty() && scan.maximizer.dim() > 0)
    save_state(scan.maximizer, out_path,
               {{"generator", "exponent-maximizer"}, {"label", scan.maximizer_label}});

  ojson rec;
  rec["command"] = "exponent";
  rec["measure"] = ev.label;
  rec["samples"] = rc.samples;
  rec["seed"] = rc.seed;
  rec["alpha_hat"] = scan.alpha_hat;
  rec["maximizer_label"] = scan.maximizer_label;
  rec["evaluated"] = scan.evaluated;
  rec["skipped"] = scan.skipped;
  rec["witnesses"] = scan.witnesses;
  rec["bin_width"] = scan.bin_width;
  if (rc.output == "json") rec["histogram"] = scan.histogram;
  if (!out_path.empty()) rec["maximizer_file"] = out_path;
  emit_record(out, rc.output, rec);
  return 0;
}

// Random MarkovSpec with qubit factors, mirroring the verification battery.
DensityMatrix random_markov(int blocks, std::uint64_t seed) {
  if (blocks < 1) throw BadSpec("markov: blocks must be >= 1");
  Rng rng(derive_seed(seed, 300));
  std::vector<double> q(blocks);
  double total = 0.0;
  for (double& v : q) {
    v = 0.2 + rng.uniform();
    total += v;
  }
  MarkovSpec ms;
  for (int j = 0; j < blocks; ++j) {
    MarkovBlock b;
    b.q = q[j] / total;
    const int rank_ab = 1 + static_cast<int>(rng.uniform() * 2.0);
    const int rank_bc = 1 + static_cast<int>(rng.uniform() * 2.0);
    b.ab = sample_hs_density({2, 2}, std::min(rank_ab, 2), derive_seed(seed, 1000 + 2 * j));
    b.bc = sample_hs_density({2, 2}, std::min(rank_bc, 2), derive_seed(seed, 1000 + 2 * j + 1));
    ms.blocks.push_back(std::move(b));
  }
  return markov_build(ms);
}

// Random GMonoSpec instance, mirroring the verification battery.
GMonoState random_gmono(int d, int r, std::uint64_t seed) {
  if (d < 2) throw BadSpec("gmono: d must be >= 2");
  if (r < 1) throw BadSpec("gmono: r must be >= 1");
  Rng rng(derive_seed(seed, 400));
  GMonoSpec spec;
  std::uint64_t xs = derive_seed(seed, 500);
  do {
    spec.x = sample_ginibre(d, d, xs++);
  } while (std::abs((spec.x / spec.x.norm()).determinant()) < 1e-2);
  spec.c = std::polar(0.5 + rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
  const NilpotentSubspace ns = nilpotent_subspace(d, r - 1, derive_seed(seed, 600));
  spec.z1 = ComplexMatrix::Zero(d, d);
  for (const auto& b : ns.basis) spec.z1 += 0.5 * rng.cgaussian() * b;
  spec.tail = ns.basis;
  std::vector<double> weights(r);
  weights[0] = 0.4 + 0.6 * rng.uniform();
  for (int j = 1; j < r; ++j) weights[j] = 0.2 + 0.8 * rng.uniform();
  return gmono_state(spec, weights);
}

struct GenOptions {
  std::string out_path;
  std::string lambdas = "1,1,1,0";  // wclass, normalized internally
  int blocks = 2;                   // markov
  int d = 2, r = 2;                 // gmono
  std::string dims = "2,2";         // random
  int rank = 0;                     // random density; 0 = full
  std::string kind = "density";     // random: pure | density
};

int cmd_gen(const RunConfig& rc, const std::string& which, const GenOptions& g,
            std::ostream& out) {
  ojson rec;
  rec["command"] = "gen";
  rec["kind"] = which;
  rec["path"] = g.out_path;

  if (which == "wclass") {
    const std::vector<double> l = parse_real_list(g.lambdas, "lambdas");
    if (l.size() != 4) throw BadSpec("wclass takes 4 lambda values, got " +
                                     std::to_string(l.size()));
    double n2 = 0.0;
    for (double v : l) n2 += v * v;
    if (n2 <= 0.0) throw BadSpec("wclass lambdas are all zero");
    const double s = std::sqrt(n2);
    const PureState psi =
        w_class_state(l[0] / s, l[1] / s, l[2] / s, l[3] / s);
    save_state(psi, g.out_path, {{"generator", "wclass"}});
    rec["dims"] = psi.dims;
  } else if (which == "ghz") {
    PureState psi;
    psi.dims = {2, 2, 2};
    psi.amplitudes = ComplexVector::Zero(8);
    psi.amplitudes[0] = psi.amplitudes[7] = 1.0 / std::sqrt(2.0);
    save_state(psi, g.out_path, {{"generator", "ghz"}});
    rec["dims"] = psi.dims;
  } else if (which == "markov") {
    const DensityMatrix rho = random_markov(g.blocks, rc.seed);
    save_state(rho, g.out_path,
               {{"generator", "markov"}, {"blocks", std::to_string(g.blocks)}});
    rec["dims"] = rho.dims;
    rec["blocks"] = g.blocks;
  } else if (which == "gmono") {
    const GMonoState gs = random_gmono(g.d, g.r, rc.seed);
    save_state(gs.rho, g.out_path,
               {{"generator", "gmono"}, {"head_share", std::to_string(gs.head_share)}});
    rec["dims"] = gs.rho.dims;
    rec["head_share"] = gs.head_share;
  } else if (which == "random") {
    const Dims dims = parse_int_list(g.dims, "dims");
    for (int d : dims)
      if (d < 2) throw BadSpec("dims: factor dimension " + std::to_string(d) + " < 2");
    if (g.kind == "pure") {
      const PureState psi = sample_haar_pure(dims, rc.seed);
      save_state(psi, g.out_path, {{"generator", "random-pure"}});
    } else if (g.kind == "density") {
      const int rank = g.rank > 0 ? g.rank : dims_product(dims);
      const DensityMatrix rho = sample_hs_density(dims, rank, rc.seed);
      save_state(rho, g.out_path, {{"generator", "random-density"}});
      rec["rank"] = rank;
    } else {
      throw BadSpec("random kind must be pure or density, got \"" + g.kind + "\"");
    }
    rec["dims"] = dims;
  } else {
    throw BadSpec("unknown generator \"" + which + "\"");
  }

  rec["seed"] = rc.seed;
  emit_record(out, rc.output, rec);
  return 0;
}

int cmd_verify(const RunConfig& rc, const std::string& suite, std::ostream& out) {
  const std::vector<verify::CheckResult> checks =
      suite == "all" ? verify::run_all(rc.seed, rc.threads)
                     : verify::run_suite(suite, rc.seed, rc.threads);
  std::vector<ojson> rows;
  bool all = true;
  for (const auto& c : checks) {
    ojson row;
    row["suite"] = suite;
    row["check"] = c.name;
    row["passed"] = c.passed;
    row["seconds"] = c.seconds;
    row["detail"] = c.detail;
    rows.push_back(std::move(row));
    all = all && c.passed;
  }
  emit_table(out, rc.output, rows);
  return all ? 0 : 1;
}

}  // namespace

RoofConfig RunConfig::roof() const {
  RoofConfig cfg;
  cfg.restarts = restarts;
  cfg.ensemble_size = ensemble_size;
  cfg.max_iterations = max_iterations;
  cfg.step_tolerance = step_tolerance;
  cfg.value_tolerance = value_tolerance;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;

  CLI::App app{"bipartite entanglement measures, convex roofs, and monogamy checks"};
  app.name("qmono");
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run-config file (flags override it)");
  app.add_option("--seed", rc.seed, "RNG seed");
  app.add_option("--tolerance", rc.tolerance, "disentangling / verdict tolerance");
  app.add_option("--samples", rc.samples, "sample count for scans");
  app.add_option("--restarts", rc.restarts, "roof optimizer restarts");
  app.add_option("--ensemble", rc.ensemble_size, "roof ensemble size (0 = rank^2)");
  app.add_option("--max-iterations", rc.max_iterations, "roof gradient budget per restart");
  app.add_option("--output", rc.output, "report format: json | csv");
  app.add_option("--threads", rc.threads, "worker threads (QMONO_THREADS overrides)");

  std::string state_path, cut_text = "0", measure_text = "concurrence";
  std::string mode_text = "min", dims_text = "2,2,2", out_path, suite;
  double alpha = 0.0;
  bool with_members = false;

  CLI::App* measure = app.add_subcommand("measure", "entanglement of a state across a cut");
  measure->add_option("--state", state_path, "StateFile path")->required();
  measure->add_option("--cut", cut_text, "cut spec, e.g. 0|1,2 (single side implies the rest)");
  measure->add_option("--measure", measure_text,
                      "concurrence | g_concurrence | entropy | renyi:A | tsallis:Q | negativity");

  CLI::App* roof = app.add_subcommand("roof", "convex-roof optimization (formation/assistance)");
  roof->add_option("--state", state_path, "StateFile path")->required();
  roof->add_option("--cut", cut_text, "cut spec");
  roof->add_option("--measure", measure_text, "measure name");
  roof->add_option("--mode", mode_text, "min | max");
  roof->add_flag("--members", with_members, "include the optimal decomposition (json only)");

  CLI::App* monogamy = app.add_subcommand("monogamy", "disentangling condition on A|BC vs AB, AC");
  monogamy->add_option("--state", state_path, "tripartite StateFile path")->required();
  monogamy->add_option("--measure", measure_text, "measure name or negativity");
  CLI::Option* alpha_opt =
      monogamy->add_option("--alpha", alpha, "also report the alpha-power deficit");

  CLI::App* exponent = app.add_subcommand("exponent", "monogamy exponent scan over pure states");
  exponent->add_option("--dims", dims_text, "tripartite dims, e.g. 2,2,2");
  exponent->add_option("--measure", measure_text, "measure name or negativity");
  exponent->add_option("--out", out_path, "write the maximizer StateFile here");

  GenOptions g;
  CLI::App* gen = app.add_subcommand("gen", "state generators");
  gen->require_subcommand(1);
  CLI::App* gen_wclass = gen->add_subcommand("wclass", "W-class pure state");
  gen_wclass->add_option("--lambdas", g.lambdas, "l1,l2,l3,l4 (normalized internally)");
  CLI::App* gen_ghz = gen->add_subcommand("ghz", "three-qubit GHZ state");
  CLI::App* gen_markov = gen->add_subcommand("markov", "random SSA-saturating state");
  gen_markov->add_option("--blocks", g.blocks, "number of direct-sum blocks");
  CLI::App* gen_gmono = gen->add_subcommand("gmono", "random equal-G state (nilpotent tail)");
  gen_gmono->add_option("--d", g.d, "local dimension");
  gen_gmono->add_option("--r", g.r, "decomposition length (1 + tail size)");
  CLI::App* gen_random = gen->add_subcommand("random", "Haar pure / HS density");
  gen_random->add_option("--dims", g.dims, "dims, e.g. 2,2");
  gen_random->add_option("--rank", g.rank, "density rank (0 = full)");
  gen_random->add_option("--kind", g.kind, "pure | density");
  for (CLI::App* sub : {gen_wclass, gen_ghz, gen_markov, gen_gmono, gen_random})
    sub->add_option("--out", g.out_path, "output StateFile path")->required();

  CLI::App* verify = app.add_subcommand("verify", "named verification suites");
  verify->add_option("suite", suite,
                     "wootters-oracle | markov | ckw | wclass | gmono-invariance | "
                     "zero-g-tail | cor8 | all")
      ->required();

  for (CLI::App* sub : {measure, roof, monogamy, exponent, gen, verify}) sub->fallthrough();
  for (CLI::App* sub : {gen_wclass, gen_ghz, gen_markov, gen_gmono, gen_random})
    sub->fallthrough();

  // --config is applied before the flag values so flags win; a config parse
  // failure is a usage error like any other malformed input
  std::vector<const char*> argv;
  argv.push_back("qmono");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) apply_config_file(args[i + 1], rc);
      else if (args[i].rfind("--config=", 0) == 0) apply_config_file(args[i].substr(9), rc);
    }
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    validate_run_config(rc);
    if (measure->parsed()) return cmd_measure(rc, state_path, cut_text, measure_text, out);
    if (roof->parsed())
      return cmd_roof(rc, state_path, cut_text, measure_text, mode_text, with_members, out);
    if (monogamy->parsed())
      return cmd_monogamy(rc, state_path, measure_text, alpha, alpha_opt->count() > 0, out);
    if (exponent->parsed()) return cmd_exponent(rc, dims_text, measure_text, out_path, out);
    if (gen->parsed()) {
      for (CLI::App* sub : {gen_wclass, gen_ghz, gen_markov, gen_gmono, gen_random})
        if (sub->parsed()) return cmd_gen(rc, sub->get_name(), g, out);
      throw BadSpec("gen needs a generator subcommand");
    }
    if (verify->parsed()) return cmd_verify(rc, suite, out);
    throw BadSpec("no subcommand");
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    err << "error: invariant violated: " << e.what() << '\n';
    return 2;
  } catch (const BadSpec& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BadCut& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BadShape& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const OutOfRange& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IndexOutOfRange& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    // numeric domain failures: singular pivots, invalid spectra, witnesses
    err << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace qmono::cli
