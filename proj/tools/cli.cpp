#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsq/io.hpp"

namespace dsq::cli {

namespace {

using io::json;

struct Options {
  std::string command;
  std::string input;
  std::string output;
  bool exact = false;
  bool flt = false;
  double tol = 1e-8;
  std::size_t max_decompositions = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t attempts = 50;
  std::size_t depth = 0;
  std::string dot;
  std::string dot_file;
  std::string rep;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Failure(path + ": invalid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Failure("cannot write " + path);
  f << text;
}

json header(const Options& o) { return {{"schema_version", io::kSchemaVersion}, {"command", o.command}}; }

template <class S>
std::vector<std::string> zeta_text(const std::vector<S>& zeta) {
  std::vector<std::string> out;
  for (const auto& z : zeta) out.push_back(io::scalar_text(z));
  return out;
}

template <class S>
void maybe_dot(const Options& o, const Quiver& q, const DimVector& v, const std::vector<S>& zeta, json& report) {
  if (o.dot.empty()) return;
  if (o.dot != "basic" && o.dot != "full") throw Failure("--dot takes basic or full");
  std::string path = o.dot_file;
  if (path.empty()) path = o.output.empty() ? "quiver.dot" : std::filesystem::path(o.output).replace_extension(".dot").string();
  const auto z = zeta_text(zeta);
  write_text(path, io::to_dot(q, v, o.dot == "full" ? &z : nullptr));
  report["dot"] = path;
}

template <class S>
json markings_json(const ProblemInstance<S>& inst) {
  json m = json::object();
  const auto& t = inst.irregular;
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    json mk = json::array();
    for (const auto& x : inst.block_orbit(p).marking) mk.push_back(io::scalar_json(x));
    m[t.vertex_name(p)] = mk;
  }
  for (std::size_t j = 0; j < inst.poles.size(); ++j) {
    json mk = json::array();
    for (const auto& x : inst.poles[j].orbit.marking) mk.push_back(io::scalar_json(x));
    m["t" + std::to_string(j + 1)] = mk;
  }
  return m;
}

int verdict_code(Verdict v) { return v == Verdict::Nonempty ? 0 : v == Verdict::Empty ? 1 : 2; }

int cmd_check(const Options& o, json& report) {
  if (o.flt) throw Failure("check needs exact scalars; drop --float");
  const json in = read_json(o.input);
  CriterionOptions copt;
  copt.max_states = o.max_decompositions;
  CriterionResult r;
  if (in.contains("quiver")) {
    auto f = io::parse_quiver(in);
    r = cb_solvable(*f.quiver, f.v, f.zeta, copt);
    report["quiver"] = io::quiver_json(*f.quiver, f.v, f.zeta);
    maybe_dot(o, *f.quiver, f.v, f.zeta, report);
  } else {
    auto inst = io::parse_problem<Rational>(in);
    auto d = decide_ds(inst, copt);
    r = d.criterion;
    report["quiver"] = io::quiver_json(*d.quiver.quiver, d.quiver.v, d.quiver.zeta);
    report["markings"] = markings_json(inst);
    if (!inst.irregular.warnings().empty()) report["warnings"] = inst.irregular.warnings();
    maybe_dot(o, *d.quiver.quiver, d.quiver.v, d.quiver.zeta, report);
  }
  report.update(io::criterion_json(r));
  if (r.verdict == Verdict::Nonempty) report["dim"] = 2 * r.delta_v;
  return verdict_code(r.verdict);
}

template <class S>
int build_quiver(const Options& o, const json& in, json& report) {
  auto inst = io::parse_problem<S>(in);
  auto g = build_global_quiver(inst);
  report["quiver"] = io::quiver_json(*g.quiver, g.v, g.zeta);
  report["markings"] = markings_json(inst);
  report["problem"] = io::problem_json(inst);
  json core = json::array();
  for (std::size_t a = 0; a < g.core.labels.size(); ++a) {
    const auto& l = g.core.labels[a];
    core.push_back({{"arrow", g.quiver->arrow(a).id}, {"level", l.i}});
  }
  report["core_arrows"] = core;
  if (!inst.irregular.warnings().empty()) report["warnings"] = inst.irregular.warnings();
  maybe_dot(o, *g.quiver, g.v, g.zeta, report);
  return 0;
}

int cmd_build_quiver(const Options& o, json& report) {
  const json in = read_json(o.input);
  return o.flt ? build_quiver<Complex>(o, in, report) : build_quiver<Rational>(o, in, report);
}

int cmd_realize(const Options& o, json& report) {
  if (o.exact) throw Failure("realize works in floating point; drop --exact");
  const json in = read_json(o.input);
  auto inst = io::parse_problem<Complex>(in);
  auto g = build_global_quiver(inst);
  RealizerOptions ropt;
  ropt.seed = o.seed;
  ropt.attempts = o.attempts;
  ropt.tol = o.tol;
  auto r = realize_numeric(g, ropt);
  report["problem"] = io::problem_json(inst);
  report["quiver"] = io::quiver_json(*g.quiver, g.v, g.zeta);
  report["markings"] = markings_json(inst);
  report["seed"] = o.seed;
  report["attempts"] = o.attempts;
  report["message"] = r.message;
  maybe_dot(o, *g.quiver, g.v, g.zeta, report);
  if (!r.success) {
    report["status"] = "failed";
    return 1;
  }
  report["status"] = "realized";
  report["attempt"] = r.attempt;
  report["residual"] = r.residual;
  report["iterations"] = r.iterations;
  report["representation"] = io::rep_json(r.rep);
  ConversionOptions copt;
  try {
    report["connection"] = io::connection_json(rep_to_connection(r.rep, g, inst, copt));
  } catch (const std::exception& e) {
    report["connection_error"] = e.what();
  }
  return 0;
}

template <class S>
int verify(const Options& o, json& report) {
  const json in = read_json(o.input);
  json rep_doc = o.rep.empty() ? in : read_json(o.rep);
  const json& pj = in.contains("problem") ? in["problem"] : in;
  auto inst = io::parse_problem<S>(pj);
  auto g = build_global_quiver(inst);
  io::check_version(rep_doc);
  auto x = io::parse_rep<S>(io::member(rep_doc, "representation", ""), g.quiver, g.v, "/representation");
  ConversionOptions copt;
  copt.tol = o.tol;
  auto vr = verify_instance(x, inst, copt);
  report.update(io::verify_json(vr));
  return vr.ok() ? 0 : 1;
}

int cmd_verify(const Options& o, json& report) { return o.exact ? verify<Rational>(o, report) : verify<Complex>(o, report); }

template <class S>
json gauge_json(const std::vector<GaugeStep<S>>& steps) {
  json out = json::array();
  for (const auto& s : steps) out.push_back({{"stage", s.stage}, {"degree", s.degree}, {"x", io::matrix_json(s.x)}});
  return out;
}

template <class S>
int reduce(const Options& o, json& report) {
  const json in = read_json(o.input);
  io::check_version(in);
  auto a = io::parse_jet<S>(in, "");
  std::size_t depth = o.depth ? o.depth : 2 * a.k;
  if (a.depth() < depth) {
    ConnectionJet<S> padded(a.n, a.k, depth);
    for (std::size_t i = 0; i <= a.depth(); ++i) padded.coeffs[i] = a.coeffs[i];
    a = padded;
  }
  report["depth"] = depth;
  if (in.contains("irregular_type")) {
    auto t = io::parse_irregular<S>(in["irregular_type"], "/irregular_type");
    auto nf = normalize(a, t, depth, {}, o.tol);
    report["mode"] = "normal_form";
    report["exponent"] = io::matrix_json(nf.exponent);
    report["reduced"] = io::jet_json(nf.reduced);
    json g = json::array();
    for (const auto& c : nf.gauge.coeffs) g.push_back(io::matrix_json(c));
    report["gauge"] = g;
  } else {
    auto r = bv_split(a, depth);
    report["mode"] = "split";
    report["reduced"] = io::jet_json(r.reduced);
    report["gauge_steps"] = gauge_json(r.gauge);
    double worst = 0.0;
    for (const auto& c : r.reduced.coeffs) {
      const Matrix<S> comm = c * a.coeffs[0] - a.coeffs[0] * c;
      worst = std::max(worst, comm.norm());
    }
    report["commutator_residual"] = worst;
  }
  return 0;
}

int cmd_reduce(const Options& o, json& report) { return o.flt ? reduce<Complex>(o, report) : reduce<Rational>(o, report); }

template <class S>
int leg(const Options& o, json& report) {
  const json in = read_json(o.input);
  io::check_version(in);
  auto l = io::parse_matrix<S>(io::member(in, "matrix", ""), "/matrix");
  if (l.rows() != l.cols()) throw io::SchemaError("/matrix", "matrix must be square");
  std::vector<S> marking;
  if (in.contains("marking")) {
    const auto& mk = in["marking"];
    if (!mk.is_array()) throw io::SchemaError("/marking", "expected an array");
    for (std::size_t i = 0; i < mk.size(); ++i) marking.push_back(io::parse_scalar<S>(mk[i], "/marking/" + std::to_string(i)));
  } else {
    marking = minimal_marking(l).marking;
  }
  auto lg = realize_leg(l, marking, o.tol);
  auto c = check_leg(lg, l);
  json mk = json::array(), incl = json::array(), low = json::array();
  for (const auto& m : marking) mk.push_back(io::scalar_json(m));
  for (const auto& m : lg.inclusion) incl.push_back(io::matrix_json(m));
  for (const auto& m : lg.lowering) low.push_back(io::matrix_json(m));
  report["marking"] = mk;
  report["dims"] = lg.dims;
  report["inclusion"] = incl;
  report["lowering"] = low;
  report["check"] = {{"reconstruction", c.reconstruction},
                     {"moment", c.moment},
                     {"injective", c.injective},
                     {"surjective", c.surjective}};
  const bool ok = c.ok(ScalarTraits<S>::exact ? 0.0 : o.tol);
  report["ok"] = ok;
  return ok ? 0 : 1;
}

int cmd_leg(const Options& o, json& report) { return o.flt ? leg<Complex>(o, report) : leg<Rational>(o, report); }

void add_common(CLI::App* sc, Options& o) {
  sc->add_option("input", o.input, "input JSON file")->required();
  sc->add_option("-o,--output", o.output, "report path (default: standard output)");
  auto* ex = sc->add_flag("--exact", o.exact, "exact Gaussian-rational arithmetic");
  auto* fl = sc->add_flag("--float", o.flt, "double-precision complex arithmetic");
  ex->excludes(fl);
  sc->add_option("--tolerance", o.tol, "numeric tolerance")->capture_default_str();
}

void add_dot(CLI::App* sc, Options& o) {
  sc->add_flag("--dot{basic}", o.dot, "write a DOT file of (Q, v); --dot=full also labels zeta");
  sc->add_option("--dot-file", o.dot_file, "DOT path (default: output path with .dot, else quiver.dot)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dsq: additive irregular Deligne-Simpson problems via quiver varieties"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "decide nonemptiness (exact)");
  add_common(check, o);
  add_dot(check, o);
  check->add_option("--max-decompositions", o.max_decompositions, "search cap for the decomposition condition");

  auto* build = app.add_subcommand("build-quiver", "synthesize (Q, v, zeta) from a problem file");
  add_common(build, o);
  add_dot(build, o);

  auto* realize = app.add_subcommand("realize", "search numerically for a stable point (float)");
  add_common(realize, o);
  add_dot(realize, o);
  realize->add_option("--seed", o.seed, "base seed of the restarts");
  realize->add_option("--attempts", o.attempts, "number of restarts")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check every invariant of a realized point");
  add_common(verify, o);
  verify->add_option("--rep", o.rep, "representation file (default: the input itself)");

  auto* reduce = app.add_subcommand("reduce", "formal reduction of a connection jet");
  add_common(reduce, o);
  reduce->add_option("--depth", o.depth, "reduction depth (default 2k)");

  auto* legc = app.add_subcommand("leg", "leg data of a residue matrix");
  add_common(legc, o);

  json report = {{"schema_version", io::kSchemaVersion}};
  auto emit = [&](int code) {
    report["exit_code"] = code;
    const std::string text = report.dump(2) + "\n";
    if (o.output.empty()) {
      out << text;
    } else {
      try {
        write_text(o.output, text);
      } catch (const std::exception& e) {
        err << e.what() << "\n";
        out << text;
      }
    }
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    report["status"] = "error";
    report["error"] = {{"message", e.what()}};
    return emit(2);
  }

  const auto subs = app.get_subcommands();
  o.command = subs.front()->get_name();
  report = header(o);
  try {
    int code = 2;
    if (o.command == "check") code = cmd_check(o, report);
    else if (o.command == "build-quiver") code = cmd_build_quiver(o, report);
    else if (o.command == "realize") code = cmd_realize(o, report);
    else if (o.command == "verify") code = cmd_verify(o, report);
    else if (o.command == "reduce") code = cmd_reduce(o, report);
    else if (o.command == "leg") code = cmd_leg(o, report);
    return emit(code);
  } catch (const io::SchemaError& e) {
    report["status"] = "error";
    report["error"] = {{"message", e.what()}, {"pointer", e.pointer()}};
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = {{"message", e.what()}};
  }
  err << report["error"]["message"].get<std::string>() << "\n";
  return emit(2);
}

}  // namespace dsq::cli
