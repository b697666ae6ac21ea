#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chase/quiver.hpp"

namespace chase {

// A path stored as its arrow-id list. The empty path at v has
// source == target == v. The morphism PQ_k -> Q view is derivable via
// path_to_morphism.
struct Path {
  int source = 0;
  int target = 0;
  std::vector<int> arrows;

  int length() const { return static_cast<int>(arrows.size()); }
  friend bool operator==(const Path&, const Path&) = default;
};

Path empty_path(int v);

// Ordering used everywhere: (source, target, length, lexicographic arrows).
bool path_less(const Path& a, const Path& b);

bool is_valid_path(const Quiver& q, const Path& p);

// Concatenation; throws when target(p1) != source(p2).
Path concat(const Path& p1, const Path& p2);

// m o p, the image path in the codomain of m.
Path pushforward(const QuiverMorphism& m, const Path& p);

// The morphism PQ_len -> q determined by a path, and back.
QuiverMorphism path_to_morphism(const Quiver& q, const Path& p);
Path morphism_to_path(const QuiverMorphism& m);

// All paths of an acyclic quiver, in path_less order. Throws on a cyclic
// input (the path set would be infinite).
std::vector<Path> enumerate_paths(const Quiver& q);

// All paths of length <= max_len, any quiver, same ordering.
std::vector<Path> bounded_paths(const Quiver& q, int max_len);

// BP_Q restricted to a concrete path list: per ordered extremity pair, the
// paths between them, plus the unordered pairs with matching extremities.
struct SameExtremityPairs {
  // groups[i] = indices (into the path list) of the i-th nonempty (u,v) bucket
  std::vector<std::vector<int>> groups;
  std::vector<std::pair<int, int>> pairs;  // index pairs, first < second
};

SameExtremityPairs same_extremity_pairs(const std::vector<Path>& paths);

// An equivalence on the full path set of an acyclic quiver, classes confined
// to same-extremity groups. `closed` marks closure under the concatenation
// congruence.
class PathRelation {
 public:
  const Quiver& quiver() const { return quiver_; }
  const std::vector<Path>& paths() const { return paths_; }
  bool closed() const { return closed_; }

  int path_index(const Path& p) const;  // -1 when absent
  bool related(int i, int j) const;
  bool related(const Path& p, const Path& q) const;

  // Partition as sorted index classes, ordered by least member.
  std::vector<std::vector<int>> classes() const;

 private:
  friend PathRelation total_relation(const Quiver&);
  friend PathRelation close(const Quiver&, const std::vector<std::pair<Path, Path>>&);
  friend PathRelation discrete_relation(const Quiver&);

  explicit PathRelation(const Quiver& q);
  int find(int x) const;
  bool unite(int a, int b);

  Quiver quiver_;
  std::vector<Path> paths_;
  mutable std::vector<int> parent_;
  bool closed_ = false;
};

// Only reflexive pairs. Trivially closed.
PathRelation discrete_relation(const Quiver& q);

// tot_Q: every same-extremity pair related.
PathRelation total_relation(const Quiver& q);

// Smallest path relation containing the generators: congruence closure over
// the finite path set. Generators must pair same-extremity paths.
PathRelation close(const Quiver& q, const std::vector<std::pair<Path, Path>>& generators);

// True iff every same-extremity pair is related (the quotient of the free
// category is thin).
bool is_complete(const PathRelation& r);

// The least unrelated same-extremity pair, or nothing when complete.
std::optional<std::pair<Path, Path>> witness_incompleteness(const PathRelation& r);

// Reference implementation of close(): iterates symmetrize / transitive
// close / congruence-extend on an explicit pair set until fixpoint. Slow by
// design; used to cross-check the worklist closure. Returns the partition
// over enumerate_paths(q) indices, classes ordered by least member.
std::vector<std::vector<int>> naive_close_classes(const Quiver& q,
                                                  const std::vector<std::pair<Path, Path>>& generators);

}  // namespace chase
