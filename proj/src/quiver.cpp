#include "chase/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace chase {

std::string Quiver::to_string() const {
  std::ostringstream out;
  out << "q(" << vertex_count_;
  if (!arrows_.empty()) {
    out << ";";
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
      out << (i == 0 ? " " : ", ") << arrows_[i].source << ">" << arrows_[i].target;
    }
  }
  out << ")";
  return out.str();
}

std::size_t QuiverHash::operator()(const Quiver& q) const {
  std::size_t h = static_cast<std::size_t>(q.vertex_count());
  for (const Arrow& a : q.arrows()) {
    h = h * 1000003u + static_cast<std::size_t>(a.source) * 31u +
        static_cast<std::size_t>(a.target);
  }
  return h;
}

CanonicalQuiver make_quiver(int vertex_count, const std::vector<Arrow>& arrows) {
  if (vertex_count < 0) throw Error("make_quiver: negative vertex count");
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    const Arrow& a = arrows[i];
    if (a.source < 0 || a.source >= vertex_count || a.target < 0 || a.target >= vertex_count) {
      throw Error("make_quiver: arrow " + std::to_string(i) + " (" + std::to_string(a.source) +
                  " -> " + std::to_string(a.target) + ") references a vertex outside 0.." +
                  std::to_string(vertex_count - 1));
    }
  }
  std::vector<int> order(arrows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return arrows[static_cast<std::size_t>(x)] <
                                              arrows[static_cast<std::size_t>(y)]; });
  std::vector<Arrow> sorted(arrows.size());
  std::vector<int> perm(arrows.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    sorted[pos] = arrows[static_cast<std::size_t>(order[pos])];
    perm[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
  }
  return CanonicalQuiver{Quiver(vertex_count, std::move(sorted)), std::move(perm)};
}

Quiver path_quiver(int k) {
  if (k < 0) throw Error("path_quiver: negative length");
  std::vector<Arrow> arrows;
  arrows.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) arrows.push_back({i, i + 1});
  return make_quiver(k + 1, arrows).quiver;
}

bool is_acyclic(const Quiver& q) {
  const int n = q.vertex_count();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const Arrow& a : q.arrows()) {
    if (a.source == a.target) return false;
    ++indeg[static_cast<std::size_t>(a.target)];
  }
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int a = 0; a < q.arrow_count(); ++a) {
      if (q.source(a) != v) continue;
      if (--indeg[static_cast<std::size_t>(q.target(a))] == 0) stack.push_back(q.target(a));
    }
  }
  return seen == n;
}

QuiverMorphism QuiverMorphism::make(Quiver domain, Quiver codomain, std::vector<int> vertex_map,
                                    std::vector<int> arrow_map) {
  if (static_cast<int>(vertex_map.size()) != domain.vertex_count())
    throw Error("morphism: vertex map has " + std::to_string(vertex_map.size()) +
                " entries, domain has " + std::to_string(domain.vertex_count()) + " vertices");
  if (static_cast<int>(arrow_map.size()) != domain.arrow_count())
    throw Error("morphism: arrow map has " + std::to_string(arrow_map.size()) +
                " entries, domain has " + std::to_string(domain.arrow_count()) + " arrows");
  for (int v : vertex_map)
    if (v < 0 || v >= codomain.vertex_count())
      throw Error("morphism: vertex image " + std::to_string(v) + " out of range");
  for (int a = 0; a < domain.arrow_count(); ++a) {
    int img = arrow_map[static_cast<std::size_t>(a)];
    if (img < 0 || img >= codomain.arrow_count())
      throw Error("morphism: arrow image " + std::to_string(img) + " out of range");
    // source/target equivariance
    if (codomain.source(img) != vertex_map[static_cast<std::size_t>(domain.source(a))] ||
        codomain.target(img) != vertex_map[static_cast<std::size_t>(domain.target(a))])
      throw Error("morphism: arrow " + std::to_string(a) +
                  " is not mapped compatibly with source/target");
  }
  return QuiverMorphism(std::move(domain), std::move(codomain), std::move(vertex_map),
                        std::move(arrow_map));
}

bool QuiverMorphism::is_embedding() const {
  auto injective = [](const std::vector<int>& m) {
    std::vector<int> sorted = m;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  };
  return injective(vertex_map_) && injective(arrow_map_);
}

bool QuiverMorphism::is_identity() const {
  if (domain_ != codomain_) return false;
  for (std::size_t i = 0; i < vertex_map_.size(); ++i)
    if (vertex_map_[i] != static_cast<int>(i)) return false;
  for (std::size_t i = 0; i < arrow_map_.size(); ++i)
    if (arrow_map_[i] != static_cast<int>(i)) return false;
  return true;
}

std::string QuiverMorphism::to_string() const {
  std::ostringstream out;
  out << domain_.to_string() << " -> " << codomain_.to_string() << "; v=";
  for (std::size_t i = 0; i < vertex_map_.size(); ++i) out << (i ? "," : "") << vertex_map_[i];
  out << "; a=";
  for (std::size_t i = 0; i < arrow_map_.size(); ++i) out << (i ? "," : "") << arrow_map_[i];
  return out.str();
}

std::size_t QuiverMorphismHash::operator()(const QuiverMorphism& m) const {
  QuiverHash qh;
  std::size_t h = qh(m.domain()) * 3u + qh(m.codomain());
  for (int v : m.vertex_map()) h = h * 1000003u + static_cast<std::size_t>(v) + 17u;
  for (int a : m.arrow_map()) h = h * 1000003u + static_cast<std::size_t>(a) + 71u;
  return h;
}

QuiverMorphism identity_morphism(const Quiver& q) {
  std::vector<int> vm(static_cast<std::size_t>(q.vertex_count()));
  std::iota(vm.begin(), vm.end(), 0);
  std::vector<int> am(static_cast<std::size_t>(q.arrow_count()));
  std::iota(am.begin(), am.end(), 0);
  return QuiverMorphism::make(q, q, std::move(vm), std::move(am));
}

QuiverMorphism compose_morphisms(const QuiverMorphism& m2, const QuiverMorphism& m1) {
  if (m1.codomain() != m2.domain())
    throw Error("compose_morphisms: codomain of the first map differs from domain of the second");
  std::vector<int> vm(m1.vertex_map().size());
  for (std::size_t v = 0; v < vm.size(); ++v)
    vm[v] = m2.map_vertex(m1.vertex_map()[v]);
  std::vector<int> am(m1.arrow_map().size());
  for (std::size_t a = 0; a < am.size(); ++a)
    am[a] = m2.map_arrow(m1.arrow_map()[a]);
  return QuiverMorphism::make(m1.domain(), m2.codomain(), std::move(vm), std::move(am));
}

DualQuiver dual(const Quiver& q) {
  std::vector<Arrow> swapped;
  swapped.reserve(q.arrows().size());
  for (const Arrow& a : q.arrows()) swapped.push_back({a.target, a.source});
  CanonicalQuiver c = make_quiver(q.vertex_count(), swapped);
  return DualQuiver{std::move(c.quiver), std::move(c.input_to_canonical)};
}

QuiverMorphism dual_morphism(const QuiverMorphism& m) {
  DualQuiver dd = dual(m.domain());
  DualQuiver dc = dual(m.codomain());
  // arrow a' in the dual domain came from original arrow with dd.arrow_perm[orig] == a'
  std::vector<int> inv(dd.arrow_perm.size());
  for (std::size_t orig = 0; orig < dd.arrow_perm.size(); ++orig)
    inv[static_cast<std::size_t>(dd.arrow_perm[orig])] = static_cast<int>(orig);
  std::vector<int> am(dd.arrow_perm.size());
  for (std::size_t a = 0; a < am.size(); ++a)
    am[a] = dc.arrow_perm[static_cast<std::size_t>(m.map_arrow(inv[a]))];
  return QuiverMorphism::make(dd.quiver, dc.quiver, m.vertex_map(), std::move(am));
}

Restriction restrict_quiver(const Quiver& q, const std::vector<int>& arrow_subset) {
  std::vector<Arrow> kept;
  kept.reserve(arrow_subset.size());
  for (int a : arrow_subset) {
    if (a < 0 || a >= q.arrow_count())
      throw Error("restrict_quiver: unknown arrow id " + std::to_string(a));
    kept.push_back(q.arrow(a));
  }
  CanonicalQuiver c = make_quiver(q.vertex_count(), kept);
  std::vector<int> am(arrow_subset.size());
  for (std::size_t i = 0; i < arrow_subset.size(); ++i)
    am[static_cast<std::size_t>(c.input_to_canonical[i])] = arrow_subset[i];
  std::vector<int> vm(static_cast<std::size_t>(q.vertex_count()));
  std::iota(vm.begin(), vm.end(), 0);
  QuiverMorphism emb = QuiverMorphism::make(c.quiver, q, std::move(vm), std::move(am));
  return Restriction{std::move(c.quiver), std::move(emb)};
}

QuiverMorphism sp_embedding(int k, int l) {
  if (k < 0 || k > l) throw Error("sp_embedding: need 0 <= k <= l");
  std::vector<int> vm(static_cast<std::size_t>(k + 1));
  std::iota(vm.begin(), vm.end(), 0);
  std::vector<int> am(static_cast<std::size_t>(k));
  std::iota(am.begin(), am.end(), 0);
  return QuiverMorphism::make(path_quiver(k), path_quiver(l), std::move(vm), std::move(am));
}

QuiverMorphism tp_embedding(int k, int l) {
  if (k < 0 || k > l) throw Error("tp_embedding: need 0 <= k <= l");
  std::vector<int> vm(static_cast<std::size_t>(k + 1));
  std::iota(vm.begin(), vm.end(), l - k);
  std::vector<int> am(static_cast<std::size_t>(k));
  std::iota(am.begin(), am.end(), l - k);
  return QuiverMorphism::make(path_quiver(k), path_quiver(l), std::move(vm), std::move(am));
}

QuiverMorphism st_embedding(int k) {
  if (k < 1) throw Error("st_embedding: the path-quiver must be nontrivial");
  Quiver two_dots = make_quiver(2, {}).quiver;
  return QuiverMorphism::make(two_dots, path_quiver(k), {0, k}, {});
}

QuiverMorphism vertex_morphism(const Quiver& q, int v) {
  if (v < 0 || v >= q.vertex_count())
    throw Error("vertex_morphism: unknown vertex " + std::to_string(v));
  return QuiverMorphism::make(path_quiver(0), q, {v}, {});
}

QuiverMorphism arrow_morphism(const Quiver& q, int a) {
  if (a < 0 || a >= q.arrow_count())
    throw Error("arrow_morphism: unknown arrow " + std::to_string(a));
  return QuiverMorphism::make(path_quiver(1), q, {q.source(a), q.target(a)}, {a});
}

namespace {

// Union-find over (side, id) pairs flattened to one index range.
class Classes {
 public:
  explicit Classes(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(
          parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // keep the least index as representative for determinism
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

PushoutResult pushout(const QuiverMorphism& m1, const QuiverMorphism& m2) {
  if (m1.domain() != m2.domain())
    throw Error("pushout: the two morphisms must share their domain");
  const Quiver& q = m1.domain();
  const Quiver& q1 = m1.codomain();
  const Quiver& q2 = m2.codomain();

  const int nv1 = q1.vertex_count();
  const int nv2 = q2.vertex_count();
  Classes vcls(nv1 + nv2);
  for (int v = 0; v < q.vertex_count(); ++v)
    vcls.unite(m1.map_vertex(v), nv1 + m2.map_vertex(v));

  const int na1 = q1.arrow_count();
  const int na2 = q2.arrow_count();
  Classes acls(na1 + na2);
  for (int a = 0; a < q.arrow_count(); ++a)
    acls.unite(m1.map_arrow(a), na1 + m2.map_arrow(a));

  // Number vertex classes by least member.
  std::vector<int> vclass_id(static_cast<std::size_t>(nv1 + nv2), -1);
  int n_out = 0;
  for (int x = 0; x < nv1 + nv2; ++x)
    if (vcls.find(x) == x) vclass_id[static_cast<std::size_t>(x)] = n_out++;
  auto out_vertex = [&](int side, int v) {
    return vclass_id[static_cast<std::size_t>(vcls.find(side == 0 ? v : nv1 + v))];
  };

  std::vector<Arrow> arrows;
  std::vector<int> rep;  // flattened (side, id) of each class representative
  for (int x = 0; x < na1 + na2; ++x) {
    if (acls.find(x) != x) continue;
    rep.push_back(x);
    if (x < na1)
      arrows.push_back({out_vertex(0, q1.source(x)), out_vertex(0, q1.target(x))});
    else
      arrows.push_back({out_vertex(1, q2.source(x - na1)), out_vertex(1, q2.target(x - na1))});
  }
  CanonicalQuiver c = make_quiver(n_out, arrows);
  std::vector<int> aclass_out(static_cast<std::size_t>(na1 + na2), -1);
  for (std::size_t i = 0; i < rep.size(); ++i)
    aclass_out[static_cast<std::size_t>(rep[i])] = c.input_to_canonical[i];

  std::vector<int> vm1(static_cast<std::size_t>(nv1)), am1(static_cast<std::size_t>(na1));
  for (int v = 0; v < nv1; ++v) vm1[static_cast<std::size_t>(v)] = out_vertex(0, v);
  for (int a = 0; a < na1; ++a)
    am1[static_cast<std::size_t>(a)] = aclass_out[static_cast<std::size_t>(acls.find(a))];
  std::vector<int> vm2(static_cast<std::size_t>(nv2)), am2(static_cast<std::size_t>(na2));
  for (int v = 0; v < nv2; ++v) vm2[static_cast<std::size_t>(v)] = out_vertex(1, v);
  for (int a = 0; a < na2; ++a)
    am2[static_cast<std::size_t>(a)] = aclass_out[static_cast<std::size_t>(acls.find(na1 + a))];

  QuiverMorphism inj1 = QuiverMorphism::make(q1, c.quiver, std::move(vm1), std::move(am1));
  QuiverMorphism inj2 = QuiverMorphism::make(q2, c.quiver, std::move(vm2), std::move(am2));
  return PushoutResult{std::move(c.quiver), std::move(inj1), std::move(inj2)};
}

bool is_pushout_configuration(const QuiverMorphism& m1, const QuiverMorphism& m2,
                              const QuiverMorphism& inj1, const QuiverMorphism& inj2) {
  if (m1.domain() != m2.domain()) return false;
  if (inj1.domain() != m1.codomain() || inj2.domain() != m2.codomain()) return false;
  if (inj1.codomain() != inj2.codomain()) return false;
  if (compose_morphisms(inj1, m1) != compose_morphisms(inj2, m2)) return false;

  const Quiver& out = inj1.codomain();
  auto mark = [](const std::vector<int>& image, int n) {
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int x : image) hit[static_cast<std::size_t>(x)] = true;
    return hit;
  };
  std::vector<bool> v1 = mark(inj1.vertex_map(), out.vertex_count());
  std::vector<bool> v2 = mark(inj2.vertex_map(), out.vertex_count());
  std::vector<bool> a1 = mark(inj1.arrow_map(), out.arrow_count());
  std::vector<bool> a2 = mark(inj2.arrow_map(), out.arrow_count());
  QuiverMorphism through = compose_morphisms(inj1, m1);
  std::vector<bool> vq = mark(through.vertex_map(), out.vertex_count());
  std::vector<bool> aq = mark(through.arrow_map(), out.arrow_count());
  for (int v = 0; v < out.vertex_count(); ++v) {
    std::size_t i = static_cast<std::size_t>(v);
    if (!(v1[i] || v2[i])) return false;                 // covering
    if ((v1[i] && v2[i]) != vq[i]) return false;         // intersection = image of the square
  }
  for (int a = 0; a < out.arrow_count(); ++a) {
    std::size_t i = static_cast<std::size_t>(a);
    if (!(a1[i] || a2[i])) return false;
    if ((a1[i] && a2[i]) != aq[i]) return false;
  }
  return true;
}

ConeResult cone(const Quiver& q) {
  const int n = q.vertex_count();
  std::vector<Arrow> arrows = q.arrows();
  for (int v = 0; v < n; ++v) arrows.push_back({n, v});
  CanonicalQuiver c = make_quiver(n + 1, arrows);
  std::vector<int> apex_arrows(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    apex_arrows[static_cast<std::size_t>(v)] =
        c.input_to_canonical[static_cast<std::size_t>(q.arrow_count() + v)];
  std::vector<int> vm(static_cast<std::size_t>(n));
  std::iota(vm.begin(), vm.end(), 0);
  std::vector<int> am(static_cast<std::size_t>(q.arrow_count()));
  for (int a = 0; a < q.arrow_count(); ++a)
    am[static_cast<std::size_t>(a)] = c.input_to_canonical[static_cast<std::size_t>(a)];
  QuiverMorphism emb = QuiverMorphism::make(q, c.quiver, std::move(vm), std::move(am));
  return ConeResult{std::move(c.quiver), std::move(emb), n, std::move(apex_arrows)};
}

QuiverMorphism cone_morphism(const QuiverMorphism& m) {
  ConeResult cd = cone(m.domain());
  ConeResult cc = cone(m.codomain());
  std::vector<int> vm(static_cast<std::size_t>(cd.quiver.vertex_count()));
  for (int v = 0; v < m.domain().vertex_count(); ++v)
    vm[static_cast<std::size_t>(v)] = m.map_vertex(v);
  vm[static_cast<std::size_t>(cd.apex)] = cc.apex;
  std::vector<int> am(static_cast<std::size_t>(cd.quiver.arrow_count()));
  for (int a = 0; a < m.domain().arrow_count(); ++a)
    am[static_cast<std::size_t>(cd.embedding.map_arrow(a))] = cc.embedding.map_arrow(m.map_arrow(a));
  for (int v = 0; v < m.domain().vertex_count(); ++v)
    am[static_cast<std::size_t>(cd.apex_arrows[static_cast<std::size_t>(v)])] =
        cc.apex_arrows[static_cast<std::size_t>(m.map_vertex(v))];
  return QuiverMorphism::make(cd.quiver, cc.quiver, std::move(vm), std::move(am));
}

}  // namespace chase
