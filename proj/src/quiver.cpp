#include "dsq/quiver.hpp"

#include <stdexcept>

namespace dsq {

std::size_t Quiver::add_vertex(const std::string& name) {
  if (vertex_index_.count(name)) throw std::invalid_argument("duplicate vertex id: " + name);
  vertex_index_[name] = vertices_.size();
  vertices_.push_back(name);
  return vertices_.size() - 1;
}

std::size_t Quiver::add_arrow(const std::string& id, std::size_t source, std::size_t target) {
  if (source >= vertices_.size() || target >= vertices_.size())
    throw std::invalid_argument("arrow " + id + " references an unknown vertex");
  if (arrow_index_.count(id)) throw std::invalid_argument("duplicate arrow id: " + id);
  arrow_index_[id] = arrows_.size();
  arrows_.push_back({id, source, target});
  return arrows_.size() - 1;
}

std::size_t Quiver::add_arrow(const std::string& id, const std::string& source, const std::string& target) {
  auto s = find_vertex(source);
  auto t = find_vertex(target);
  if (!s || !t) throw std::invalid_argument("arrow " + id + " references an unknown vertex");
  return add_arrow(id, *s, *t);
}

std::optional<std::size_t> Quiver::find_vertex(const std::string& name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Quiver::find_arrow(const std::string& id) const {
  auto it = arrow_index_.find(id);
  if (it == arrow_index_.end()) return std::nullopt;
  return it->second;
}

bool Quiver::has_loops() const {
  for (const auto& a : arrows_)
    if (a.source == a.target) return true;
  return false;
}

std::size_t Quiver::edge_count(std::size_t i, std::size_t j) const {
  std::size_t c = 0;
  for (const auto& a : arrows_)
    if ((a.source == i && a.target == j) || (a.source == j && a.target == i)) ++c;
  return c;
}

std::size_t Quiver::arrow_count(std::size_t i, std::size_t j) const {
  std::size_t c = 0;
  for (const auto& a : arrows_)
    if (a.source == i && a.target == j) ++c;
  return c;
}

bool operator==(const Quiver& a, const Quiver& b) {
  if (a.vertices_ != b.vertices_ || a.arrows_.size() != b.arrows_.size()) return false;
  for (std::size_t i = 0; i < a.arrows_.size(); ++i) {
    const auto& x = a.arrows_[i];
    const auto& y = b.arrows_[i];
    if (x.id != y.id || x.source != y.source || x.target != y.target) return false;
  }
  return true;
}

long delta(const Quiver& q, const DimVector& v) {
  if (v.size() != q.num_vertices()) throw std::invalid_argument("delta: dimension vector size");
  long d = 1;
  for (const auto& a : q.arrows()) d += v[a.source] * v[a.target];
  for (long x : v) d -= x * x;
  return d;
}

}  // namespace dsq
