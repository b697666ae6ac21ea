#include "chase/enumerate.hpp"

#include <functional>

namespace chase {

namespace {

void grow_arrow_lists(int n, int max_arrows, const Arrow& at_least, std::vector<Arrow>& cur,
                      bool acyclic_only, std::vector<Quiver>& sink) {
  if (acyclic_only) {
    CanonicalQuiver c = make_quiver(n, cur);
    if (is_acyclic(c.quiver)) sink.push_back(std::move(c.quiver));
  } else {
    sink.push_back(make_quiver(n, cur).quiver);
  }
  if (static_cast<int>(cur.size()) == max_arrows) return;
  // non-decreasing arrow sequences are exactly the canonical forms
  for (int s = at_least.source; s < n; ++s) {
    for (int t = (s == at_least.source ? at_least.target : 0); t < n; ++t) {
      cur.push_back({s, t});
      grow_arrow_lists(n, max_arrows, {s, t}, cur, acyclic_only, sink);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<Quiver> enumerate_quivers(int max_vertices, int max_arrows, bool acyclic_only) {
  std::vector<Quiver> out;
  for (int n = 0; n <= max_vertices; ++n) {
    std::vector<Arrow> cur;
    grow_arrow_lists(n, max_arrows, {0, 0}, cur, acyclic_only, out);
  }
  // grow_arrow_lists emits in DFS order; re-sort to the documented order
  std::stable_sort(out.begin(), out.end(), [](const Quiver& a, const Quiver& b) {
    if (a.vertex_count() != b.vertex_count()) return a.vertex_count() < b.vertex_count();
    if (a.arrow_count() != b.arrow_count()) return a.arrow_count() < b.arrow_count();
    return a.arrows() < b.arrows();
  });
  return out;
}

std::vector<QuiverMorphism> enumerate_morphisms(const Quiver& dom, const Quiver& cod,
                                                bool embeddings_only) {
  std::vector<QuiverMorphism> out;
  const int nd = dom.vertex_count();
  const int nc = cod.vertex_count();
  const int ad = dom.arrow_count();

  std::vector<int> vm(static_cast<std::size_t>(nd), 0);
  std::vector<int> am(static_cast<std::size_t>(ad), 0);

  std::function<void()> pick_arrows;
  std::function<void(int)> pick_arrow = [&](int a) {
    if (a == ad) {
      out.push_back(QuiverMorphism::make(dom, cod, vm, am));
      return;
    }
    int want_s = vm[static_cast<std::size_t>(dom.source(a))];
    int want_t = vm[static_cast<std::size_t>(dom.target(a))];
    for (int img = 0; img < cod.arrow_count(); ++img) {
      if (cod.source(img) != want_s || cod.target(img) != want_t) continue;
      if (embeddings_only) {
        bool used = false;
        for (int b = 0; b < a; ++b)
          if (am[static_cast<std::size_t>(b)] == img) used = true;
        if (used) continue;
      }
      am[static_cast<std::size_t>(a)] = img;
      pick_arrow(a + 1);
    }
  };

  std::function<void(int)> pick_vertex = [&](int v) {
    if (v == nd) {
      pick_arrow(0);
      return;
    }
    for (int img = 0; img < nc; ++img) {
      if (embeddings_only) {
        bool used = false;
        for (int u = 0; u < v; ++u)
          if (vm[static_cast<std::size_t>(u)] == img) used = true;
        if (used) continue;
      }
      vm[static_cast<std::size_t>(v)] = img;
      pick_vertex(v + 1);
    }
  };

  pick_vertex(0);
  return out;
}

}  // namespace chase
