#pragma once

#include <vector>

#include "chase/quiver.hpp"

namespace chase {

// All canonical quivers with at most max_vertices vertices and max_arrows
// arrows, in a fixed deterministic order (vertex count, arrow count, then
// lexicographic arrow list). Loops and parallel arrows included unless
// acyclic_only is set.
std::vector<Quiver> enumerate_quivers(int max_vertices, int max_arrows, bool acyclic_only);

// All morphisms dom -> cod, ordered lexicographically by (vertex_map,
// arrow_map). With embeddings_only, both maps are injective.
std::vector<QuiverMorphism> enumerate_morphisms(const Quiver& dom, const Quiver& cod,
                                                bool embeddings_only);

}  // namespace chase
