#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "chase/error.hpp"

namespace chase {

struct Arrow {
  int source = 0;
  int target = 0;
  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

// A finite quiver in canonical form: vertices are 0..n-1, arrows are kept
// sorted by (source, target), parallel arrows distinguished by position.
// Values are immutable once built.
class Quiver {
 public:
  Quiver() = default;  // the empty quiver

  int vertex_count() const { return vertex_count_; }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const Arrow& arrow(int a) const { return arrows_[static_cast<std::size_t>(a)]; }
  int source(int a) const { return arrow(a).source; }
  int target(int a) const { return arrow(a).target; }

  friend bool operator==(const Quiver&, const Quiver&) = default;

  // Stable display form, e.g. "q(3; 0>1, 1>2)".
  std::string to_string() const;

 private:
  friend struct CanonicalQuiver;
  friend CanonicalQuiver make_quiver(int, const std::vector<Arrow>&);
  Quiver(int vertex_count, std::vector<Arrow> sorted_arrows)
      : vertex_count_(vertex_count), arrows_(std::move(sorted_arrows)) {}

  int vertex_count_ = 0;
  std::vector<Arrow> arrows_;
};

struct QuiverHash {
  std::size_t operator()(const Quiver& q) const;
};

// Result of canonicalizing user arrow input: the quiver plus the
// permutation translating input arrow ids to canonical ids.
struct CanonicalQuiver {
  Quiver quiver;
  std::vector<int> input_to_canonical;
};

// Builds the canonical quiver; throws Error on an out-of-range endpoint.
CanonicalQuiver make_quiver(int vertex_count, const std::vector<Arrow>& arrows);

// PQ_k: k+1 chained vertices, arrows i -> i+1. Already canonical.
Quiver path_quiver(int k);

// True iff the quiver has no directed cycle (self-loops included).
bool is_acyclic(const Quiver& q);

// A structure-preserving map of quivers. Validated on construction.
class QuiverMorphism {
 public:
  static QuiverMorphism make(Quiver domain, Quiver codomain, std::vector<int> vertex_map,
                             std::vector<int> arrow_map);

  const Quiver& domain() const { return domain_; }
  const Quiver& codomain() const { return codomain_; }
  const std::vector<int>& vertex_map() const { return vertex_map_; }
  const std::vector<int>& arrow_map() const { return arrow_map_; }
  int map_vertex(int v) const { return vertex_map_[static_cast<std::size_t>(v)]; }
  int map_arrow(int a) const { return arrow_map_[static_cast<std::size_t>(a)]; }

  bool is_embedding() const;
  bool is_identity() const;

  friend bool operator==(const QuiverMorphism&, const QuiverMorphism&) = default;

  std::string to_string() const;

 private:
  QuiverMorphism(Quiver d, Quiver c, std::vector<int> vm, std::vector<int> am)
      : domain_(std::move(d)), codomain_(std::move(c)), vertex_map_(std::move(vm)),
        arrow_map_(std::move(am)) {}

  Quiver domain_;
  Quiver codomain_;
  std::vector<int> vertex_map_;
  std::vector<int> arrow_map_;
};

struct QuiverMorphismHash {
  std::size_t operator()(const QuiverMorphism& m) const;
};

QuiverMorphism identity_morphism(const Quiver& q);

// m2 after m1; domains must match up.
QuiverMorphism compose_morphisms(const QuiverMorphism& m2, const QuiverMorphism& m1);

// The dual quiver plus the arrow renumbering induced by re-sorting:
// arrow_perm[old id] = id in the dual. Vertex ids are unchanged.
struct DualQuiver {
  Quiver quiver;
  std::vector<int> arrow_perm;
};

DualQuiver dual(const Quiver& q);

// m dagger: the same maps read between the dual quivers.
QuiverMorphism dual_morphism(const QuiverMorphism& m);

// Spanning restriction Q|_A plus its canonical embedding into q.
struct Restriction {
  Quiver quiver;
  QuiverMorphism embedding;
};

Restriction restrict_quiver(const Quiver& q, const std::vector<int>& arrow_subset);

// Leftmost / rightmost embeddings PQ_k into PQ_l, and the two-endpoint
// embedding of the arrowless two-dot quiver into PQ_k (k >= 1).
QuiverMorphism sp_embedding(int k, int l);
QuiverMorphism tp_embedding(int k, int l);
QuiverMorphism st_embedding(int k);

// Embedding of PQ_0 at a vertex, and of PQ_1 at an arrow (the latter is a
// plain morphism when the arrow is a loop).
QuiverMorphism vertex_morphism(const Quiver& q, int v);
QuiverMorphism arrow_morphism(const Quiver& q, int a);

struct PushoutResult {
  Quiver pushout;
  QuiverMorphism inj1;  // Q1 -> pushout
  QuiverMorphism inj2;  // Q2 -> pushout
};

// Glues codomain(m1) and codomain(m2) along their common domain.
// Deterministic: classes are represented by the least (side, id) pair.
PushoutResult pushout(const QuiverMorphism& m1, const QuiverMorphism& m2);

// Checks the three pushout-configuration conditions.
bool is_pushout_configuration(const QuiverMorphism& m1, const QuiverMorphism& m2,
                              const QuiverMorphism& inj1, const QuiverMorphism& inj2);

// cone(Q): one apex vertex (numbered last) plus one arrow apex -> v per
// original vertex. apex_arrows[v] is the id of that arrow.
struct ConeResult {
  Quiver quiver;
  QuiverMorphism embedding;  // i_Q : Q -> cone(Q)
  int apex = 0;
  std::vector<int> apex_arrows;
};

ConeResult cone(const Quiver& q);

// The induced morphism cone(Q) -> cone(Q').
QuiverMorphism cone_morphism(const QuiverMorphism& m);

}  // namespace chase
