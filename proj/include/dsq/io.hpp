#pragma once

// JSON schemas (version 1) for problem files, quivers, representations,
// connections and jets, plus DOT output of (Q, v, zeta).
//
// Scalars: integers, or strings "p/q", "a+bi", "1/2-3/4i", "0.25" (parsed
// exactly), or [re, im] pairs. Non-integral JSON numbers are refused where
// exact scalars are required. Matrices: arrays of rows.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsq/assembly.hpp"
#include "json.hpp"

namespace dsq::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input; pointer() is the JSON pointer of the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& msg)
      : std::runtime_error(pointer + ": " + msg), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Throws unless j["schema_version"] is present and supported.
void check_version(const json& j);
/// Required member of an object, with a pointer-carrying error.
const json& member(const json& j, const std::string& key, const std::string& ptr);

template <class S>
S parse_scalar(const json& j, const std::string& ptr);
template <class S>
json scalar_json(const S& s);

template <class S>
Matrix<S> parse_matrix(const json& j, const std::string& ptr);
template <class S>
json matrix_json(const Matrix<S>& m);

template <class S>
OrbitSpec<S> parse_orbit(const json& j, const std::string& ptr);
template <class S>
json orbit_json(const OrbitSpec<S>& o);

template <class S>
IrregularType<S> parse_irregular(const json& j, const std::string& ptr);
template <class S>
json irregular_json(const IrregularType<S>& t);

template <class S>
ProblemInstance<S> parse_problem(const json& j);
template <class S>
json problem_json(const ProblemInstance<S>& inst);

/// A quiver with dimension vector and parameter, as written by build-quiver.
struct QuiverFile {
  std::shared_ptr<Quiver> quiver;
  DimVector v;
  std::vector<Rational> zeta;
};
QuiverFile parse_quiver(const json& j);
template <class S>
json quiver_json(const Quiver& q, const DimVector& v, const std::vector<S>& zeta);

template <class S>
json rep_json(const DoubledRep<S>& x);
template <class S>
DoubledRep<S> parse_rep(const json& j, std::shared_ptr<const Quiver> q, const DimVector& v, const std::string& ptr);

template <class S>
json connection_json(const ConnectionData<S>& c);

/// A Laurent jet sum_i A_i z^{i-k} dz.
template <class S>
ConnectionJet<S> parse_jet(const json& j, const std::string& ptr);
template <class S>
json jet_json(const ConnectionJet<S>& a);

json criterion_json(const CriterionResult& r);
json verify_json(const VerifyReport& r);

/// DOT multigraph; vertex labels carry v_i, and zeta_i when zeta is given.
std::string to_dot(const Quiver& q, const DimVector& v, const std::vector<std::string>* zeta = nullptr);

template <class S>
std::string scalar_text(const S& s);

}  // namespace dsq::io
