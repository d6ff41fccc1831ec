#include "dsq/io.hpp"

#include <cmath>
#include <sstream>

namespace dsq::io {

namespace {

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& array_at(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  return j;
}

std::size_t size_at(const json& j, const std::string& ptr, bool positive = true) {
  if (!j.is_number_integer() || j.get<long long>() < (positive ? 1 : 0))
    throw SchemaError(ptr, positive ? "expected a positive integer" : "expected a non-negative integer");
  return j.get<std::size_t>();
}

Rational exact_real(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) {
    double d = j.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return Rational(static_cast<long>(d));
    throw SchemaError(ptr, "non-integral JSON number where an exact scalar is required; write it as a string such as \"1/3\"");
  }
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw SchemaError(ptr, e.what());
    }
  }
  throw SchemaError(ptr, "expected a scalar");
}

}  // namespace

void check_version(const json& j) {
  if (!j.is_object()) throw SchemaError("", "expected a JSON object");
  if (!j.contains("schema_version")) throw SchemaError("/schema_version", "missing");
  const auto& v = j["schema_version"];
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw SchemaError("/schema_version", "unsupported schema version (this build reads " + std::to_string(kSchemaVersion) + ")");
}

const json& member(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  if (!j.contains(key)) throw SchemaError(at(ptr, key), "missing");
  return j[key];
}

template <>
Rational parse_scalar<Rational>(const json& j, const std::string& ptr) {
  if (j.is_array()) {
    if (j.size() != 2) throw SchemaError(ptr, "complex pair must have two entries");
    Rational re = exact_real(j[0], at(ptr, 0)), im = exact_real(j[1], at(ptr, 1));
    if (!re.is_real() || !im.is_real()) throw SchemaError(ptr, "pair entries must be real");
    return Rational(re.re(), im.re());
  }
  return exact_real(j, ptr);
}

template <>
Complex parse_scalar<Complex>(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number() || !j[1].is_number()) throw SchemaError(ptr, "complex pair must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>()).to_complex();
    } catch (const std::exception& e) {
      throw SchemaError(ptr, e.what());
    }
  }
  throw SchemaError(ptr, "expected a scalar");
}

template <>
json scalar_json<Rational>(const Rational& s) {
  if (s.is_real() && s.re().get_den() == 1 && s.re().get_num().fits_slong_p()) return s.re().get_num().get_si();
  return s.str();
}

template <>
json scalar_json<Complex>(const Complex& s) {
  if (s.imag() == 0.0) return s.real();
  return json::array({s.real(), s.imag()});
}

template <>
std::string scalar_text<Rational>(const Rational& s) {
  return s.str();
}

template <>
std::string scalar_text<Complex>(const Complex& s) {
  std::ostringstream os;
  os.precision(6);
  os << s.real();
  if (s.imag() != 0.0) os << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "i";
  return os.str();
}

template <class S>
Matrix<S> parse_matrix(const json& j, const std::string& ptr) {
  array_at(j, ptr);
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    array_at(j[r], at(ptr, r));
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) throw SchemaError(at(ptr, r), "ragged matrix rows");
  }
  Matrix<S> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_scalar<S>(j[r][c], at(at(ptr, r), c));
  return m;
}

template <class S>
json matrix_json(const Matrix<S>& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

template <class S>
OrbitSpec<S> parse_orbit(const json& j, const std::string& ptr) {
  const auto& ev = array_at(member(j, "eigenvalues", ptr), at(ptr, "eigenvalues"));
  std::vector<EigenBlocks<S>> eigen;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const std::string p = at(at(ptr, "eigenvalues"), i);
    EigenBlocks<S> e{parse_scalar<S>(member(ev[i], "value", p), at(p, "value")), {}};
    const auto& bl = array_at(member(ev[i], "jordan_blocks", p), at(p, "jordan_blocks"));
    for (std::size_t b = 0; b < bl.size(); ++b) e.blocks.push_back(size_at(bl[b], at(at(p, "jordan_blocks"), b)));
    eigen.push_back(std::move(e));
  }
  std::optional<std::vector<S>> marking;
  if (j.contains("marking")) {
    const auto& mk = array_at(j["marking"], at(ptr, "marking"));
    marking.emplace();
    for (std::size_t i = 0; i < mk.size(); ++i) marking->push_back(parse_scalar<S>(mk[i], at(at(ptr, "marking"), i)));
  }
  try {
    return orbit_from_jordan(std::move(eigen), marking);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(ptr, e.what());
  }
}

template <class S>
json orbit_json(const OrbitSpec<S>& o) {
  json ev = json::array();
  for (const auto& e : o.eigen) ev.push_back({{"value", scalar_json(e.value)}, {"jordan_blocks", e.blocks}});
  json mk = json::array();
  for (const auto& m : o.marking) mk.push_back(scalar_json(m));
  return {{"eigenvalues", ev}, {"marking", mk}};
}

template <class S>
IrregularType<S> parse_irregular(const json& j, const std::string& ptr) {
  const std::size_t k = size_at(member(j, "pole_order", ptr), at(ptr, "pole_order"));
  const auto& bl = array_at(member(j, "blocks", ptr), at(ptr, "blocks"));
  std::vector<IrregularBlock<S>> blocks;
  for (std::size_t b = 0; b < bl.size(); ++b) {
    const std::string p = at(at(ptr, "blocks"), b);
    IrregularBlock<S> blk;
    const auto& cs = array_at(member(bl[b], "coeffs", p), at(p, "coeffs"));
    if (cs.size() + 1 != k) throw SchemaError(at(p, "coeffs"), "expected pole_order - 1 = " + std::to_string(k - 1) + " coefficients");
    for (std::size_t i = 0; i < cs.size(); ++i) blk.coeffs.push_back(parse_scalar<S>(cs[i], at(at(p, "coeffs"), i)));
    blk.mult = bl[b].contains("multiplicity") ? size_at(bl[b]["multiplicity"], at(p, "multiplicity")) : 1;
    blocks.push_back(std::move(blk));
  }
  const double tol = j.contains("tolerance") && j["tolerance"].is_number() ? j["tolerance"].get<double>() : 1e-9;
  try {
    return IrregularType<S>(k, std::move(blocks), tol);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(ptr, e.what());
  }
}

template <class S>
json irregular_json(const IrregularType<S>& t) {
  std::vector<json> blocks(t.num_blocks());
  for (std::size_t p = 0; p < t.num_blocks(); ++p) {
    json cs = json::array();
    for (const auto& c : t.block(p).coeffs) cs.push_back(scalar_json(c));
    blocks[t.input_index(p)] = {{"coeffs", cs}, {"multiplicity", t.block(p).mult}};
  }
  return {{"pole_order", t.k()}, {"blocks", blocks}};
}

template <class S>
ProblemInstance<S> parse_problem(const json& j) {
  check_version(j);
  ProblemInstance<S> inst;
  inst.n = size_at(member(j, "rank", ""), "/rank");
  const auto& inf = member(j, "infinity", "");
  inst.irregular = parse_irregular<S>(member(inf, "irregular_type", "/infinity"), "/infinity/irregular_type");
  const auto& rb = array_at(member(inf, "residue_blocks", "/infinity"), "/infinity/residue_blocks");
  for (std::size_t b = 0; b < rb.size(); ++b) inst.residue_blocks.push_back(parse_orbit<S>(rb[b], at("/infinity/residue_blocks", b)));
  if (j.contains("finite_poles")) {
    const auto& fp = array_at(j["finite_poles"], "/finite_poles");
    for (std::size_t t = 0; t < fp.size(); ++t) {
      const std::string p = at("/finite_poles", t);
      inst.poles.push_back({parse_scalar<S>(member(fp[t], "position", p), at(p, "position")),
                            parse_orbit<S>(member(fp[t], "orbit", p), at(p, "orbit"))});
    }
  }
  if (inst.n != inst.irregular.n())
    throw SchemaError("/rank", "rank " + std::to_string(inst.n) + " differs from the irregular type size " +
                                   std::to_string(inst.irregular.n()));
  if (inst.residue_blocks.size() != inst.irregular.num_blocks())
    throw SchemaError("/infinity/residue_blocks", "one orbit per irregular block is required");
  for (std::size_t b = 0; b < inst.residue_blocks.size(); ++b) {
    std::size_t mult = 0;
    for (std::size_t p = 0; p < inst.irregular.num_blocks(); ++p)
      if (inst.irregular.input_index(p) == b) mult = inst.irregular.block(p).mult;
    if (inst.residue_blocks[b].n != mult)
      throw SchemaError(at("/infinity/residue_blocks", b), "orbit size differs from the block multiplicity " + std::to_string(mult));
  }
  for (std::size_t t = 0; t < inst.poles.size(); ++t)
    if (inst.poles[t].orbit.n != inst.n) throw SchemaError(at(at("/finite_poles", t), "orbit"), "orbit size differs from the rank");
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/finite_poles", e.what());
  }
  return inst;
}

template <class S>
json problem_json(const ProblemInstance<S>& inst) {
  json rb = json::array();
  for (const auto& o : inst.residue_blocks) rb.push_back(orbit_json(o));
  json fp = json::array();
  for (const auto& p : inst.poles) fp.push_back({{"position", scalar_json(p.position)}, {"orbit", orbit_json(p.orbit)}});
  return {{"schema_version", kSchemaVersion},
          {"rank", inst.n},
          {"infinity", {{"irregular_type", irregular_json(inst.irregular)}, {"residue_blocks", rb}}},
          {"finite_poles", fp}};
}

QuiverFile parse_quiver(const json& j) {
  check_version(j);
  const json& qj = member(j, "quiver", "");
  QuiverFile f;
  f.quiver = std::make_shared<Quiver>();
  const auto& vs = array_at(member(qj, "vertices", "/quiver"), "/quiver/vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string p = at("/quiver/vertices", i);
    const auto& name = member(vs[i], "name", p);
    if (!name.is_string()) throw SchemaError(at(p, "name"), "expected a string");
    try {
      f.quiver->add_vertex(name.get<std::string>());
    } catch (const std::exception& e) {
      throw SchemaError(at(p, "name"), e.what());
    }
    f.v.push_back(static_cast<long>(size_at(member(vs[i], "dim", p), at(p, "dim"), false)));
    f.zeta.push_back(parse_scalar<Rational>(member(vs[i], "zeta", p), at(p, "zeta")));
  }
  const auto& as = array_at(member(qj, "arrows", "/quiver"), "/quiver/arrows");
  for (std::size_t a = 0; a < as.size(); ++a) {
    const std::string p = at("/quiver/arrows", a);
    auto str = [&](const char* key) {
      const auto& s = member(as[a], key, p);
      if (!s.is_string()) throw SchemaError(at(p, key), "expected a string");
      return s.get<std::string>();
    };
    try {
      f.quiver->add_arrow(str("name"), str("source"), str("target"));
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError(p, e.what());
    }
  }
  return f;
}

template <class S>
json quiver_json(const Quiver& q, const DimVector& v, const std::vector<S>& zeta) {
  json vs = json::array(), as = json::array();
  for (std::size_t i = 0; i < q.num_vertices(); ++i)
    vs.push_back({{"name", q.vertex(i)}, {"dim", v[i]}, {"zeta", scalar_json(zeta[i])}});
  for (const auto& a : q.arrows()) as.push_back({{"name", a.id}, {"source", q.vertex(a.source)}, {"target", q.vertex(a.target)}});
  return {{"vertices", vs}, {"arrows", as}};
}

template <class S>
json rep_json(const DoubledRep<S>& x) {
  json maps = json::array();
  const auto& arr = x.quiver->arrows();
  for (std::size_t a = 0; a < arr.size(); ++a)
    maps.push_back({{"arrow", arr[a].id}, {"fwd", matrix_json(x.fwd[a])}, {"rev", matrix_json(x.rev[a])}});
  return {{"dims", x.dims}, {"maps", maps}};
}

template <class S>
DoubledRep<S> parse_rep(const json& j, std::shared_ptr<const Quiver> q, const DimVector& v, const std::string& ptr) {
  DoubledRep<S> x(q, v);
  const auto& maps = array_at(member(j, "maps", ptr), at(ptr, "maps"));
  std::vector<bool> seen(q->num_arrows(), false);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string p = at(at(ptr, "maps"), i);
    const auto& name = member(maps[i], "arrow", p);
    std::size_t a = q->num_arrows();
    for (std::size_t b = 0; b < q->num_arrows(); ++b)
      if (name.is_string() && q->arrow(b).id == name.get<std::string>()) a = b;
    if (a == q->num_arrows()) throw SchemaError(at(p, "arrow"), "no such arrow in the quiver");
    seen[a] = true;
    x.fwd[a] = parse_matrix<S>(member(maps[i], "fwd", p), at(p, "fwd"));
    x.rev[a] = parse_matrix<S>(member(maps[i], "rev", p), at(p, "rev"));
    const auto& ar = q->arrow(a);
    if (x.fwd[a].rows() != x.dim(ar.target) || x.fwd[a].cols() != x.dim(ar.source)) {
      if (!(x.dim(ar.target) == 0 || x.dim(ar.source) == 0)) throw SchemaError(at(p, "fwd"), "wrong shape");
      x.fwd[a] = Matrix<S>(x.dim(ar.target), x.dim(ar.source));
    }
    if (x.rev[a].rows() != x.dim(ar.source) || x.rev[a].cols() != x.dim(ar.target)) {
      if (!(x.dim(ar.target) == 0 || x.dim(ar.source) == 0)) throw SchemaError(at(p, "rev"), "wrong shape");
      x.rev[a] = Matrix<S>(x.dim(ar.source), x.dim(ar.target));
    }
  }
  for (std::size_t a = 0; a < seen.size(); ++a)
    if (!seen[a]) throw SchemaError(at(ptr, "maps"), "missing arrow " + q->arrow(a).id);
  return x;
}

template <class S>
json connection_json(const ConnectionData<S>& c) {
  json poly = json::array(), poles = json::array();
  for (const auto& m : c.poly) poly.push_back(matrix_json(m));
  for (std::size_t t = 0; t < c.residues.size(); ++t)
    poles.push_back({{"position", scalar_json(c.positions[t])}, {"residue", matrix_json(c.residues[t])}});
  return {{"poly", poly}, {"poles", poles}, {"residue_at_infinity", matrix_json(c.residue_at_infinity())}};
}

template <class S>
ConnectionJet<S> parse_jet(const json& j, const std::string& ptr) {
  const std::size_t k = size_at(member(j, "pole_order", ptr), at(ptr, "pole_order"));
  const auto& cs = array_at(member(j, "coeffs", ptr), at(ptr, "coeffs"));
  if (cs.size() < k) throw SchemaError(at(ptr, "coeffs"), "need at least pole_order coefficients (A_0 .. A_{k-1})");
  std::vector<Matrix<S>> ms;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ms.push_back(parse_matrix<S>(cs[i], at(at(ptr, "coeffs"), i)));
    if (ms.back().rows() != ms.back().cols() || ms.back().rows() != ms.front().rows())
      throw SchemaError(at(at(ptr, "coeffs"), i), "coefficients must be square of one size");
  }
  ConnectionJet<S> a(ms.front().rows(), k, ms.size() - 1);
  a.coeffs = std::move(ms);
  return a;
}

template <class S>
json jet_json(const ConnectionJet<S>& a) {
  json cs = json::array();
  for (const auto& m : a.coeffs) cs.push_back(matrix_json(m));
  return {{"pole_order", a.k}, {"coeffs", cs}};
}

json criterion_json(const CriterionResult& r) {
  json out = {{"verdict", to_string(r.verdict)}, {"delta", r.delta_v}, {"states_explored", r.states_explored}};
  if (r.failed_condition != 0) out["failed_condition"] = r.failed_condition;
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (!r.witness.empty()) {
    out["witness"] = r.witness;
    out["witness_delta_sum"] = r.witness_delta_sum;
  }
  return out;
}

json verify_json(const VerifyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name}, {"ok", c.ok}, {"value", c.value}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  return {{"ok", r.ok()}, {"checks", checks}};
}

std::string to_dot(const Quiver& q, const DimVector& v, const std::vector<std::string>* zeta) {
  auto quote = [](const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') o.push_back('\\');
      o.push_back(c);
    }
    return o + "\"";
  };
  std::ostringstream os;
  os << "digraph Q {\n";
  for (std::size_t i = 0; i < q.num_vertices(); ++i) {
    std::string label = q.vertex(i) + "\\nv=" + std::to_string(v[i]);
    if (zeta) label += "\\nzeta=" + (*zeta)[i];
    os << "  " << quote(q.vertex(i)) << " [label=\"" << label << "\"];\n";
  }
  for (const auto& a : q.arrows())
    os << "  " << quote(q.vertex(a.source)) << " -> " << quote(q.vertex(a.target)) << " [label=" << quote(a.id) << "];\n";
  os << "}\n";
  return os.str();
}

#define DSQ_IO_INSTANTIATE(S)                                                                                 \
  template Matrix<S> parse_matrix<S>(const json&, const std::string&);                                      \
  template json matrix_json<S>(const Matrix<S>&);                                                           \
  template OrbitSpec<S> parse_orbit<S>(const json&, const std::string&);                                    \
  template json orbit_json<S>(const OrbitSpec<S>&);                                                         \
  template IrregularType<S> parse_irregular<S>(const json&, const std::string&);                            \
  template json irregular_json<S>(const IrregularType<S>&);                                                 \
  template ProblemInstance<S> parse_problem<S>(const json&);                                                \
  template json problem_json<S>(const ProblemInstance<S>&);                                                 \
  template json quiver_json<S>(const Quiver&, const DimVector&, const std::vector<S>&);                      \
  template json rep_json<S>(const DoubledRep<S>&);                                                          \
  template DoubledRep<S> parse_rep<S>(const json&, std::shared_ptr<const Quiver>, const DimVector&,         \
                                      const std::string&);                                                  \
  template json connection_json<S>(const ConnectionData<S>&);                                               \
  template ConnectionJet<S> parse_jet<S>(const json&, const std::string&);                                  \
  template json jet_json<S>(const ConnectionJet<S>&);

DSQ_IO_INSTANTIATE(Rational)
DSQ_IO_INSTANTIATE(Complex)

}  // namespace dsq::io
