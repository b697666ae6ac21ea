#include "chase/paths.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace chase {

Path empty_path(int v) { return Path{v, v, {}}; }

bool path_less(const Path& a, const Path& b) {
  if (a.source != b.source) return a.source < b.source;
  if (a.target != b.target) return a.target < b.target;
  if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
  return a.arrows < b.arrows;
}

bool is_valid_path(const Quiver& q, const Path& p) {
  if (p.source < 0 || p.source >= q.vertex_count()) return false;
  int at = p.source;
  for (int a : p.arrows) {
    if (a < 0 || a >= q.arrow_count()) return false;
    if (q.source(a) != at) return false;
    at = q.target(a);
  }
  return at == p.target;
}

Path concat(const Path& p1, const Path& p2) {
  if (p1.target != p2.source)
    throw Error("concat: paths do not share an extremity (" + std::to_string(p1.target) +
                " vs " + std::to_string(p2.source) + ")");
  Path out{p1.source, p2.target, p1.arrows};
  out.arrows.insert(out.arrows.end(), p2.arrows.begin(), p2.arrows.end());
  return out;
}

Path pushforward(const QuiverMorphism& m, const Path& p) {
  Path out{m.map_vertex(p.source), m.map_vertex(p.target), {}};
  out.arrows.reserve(p.arrows.size());
  for (int a : p.arrows) out.arrows.push_back(m.map_arrow(a));
  return out;
}

QuiverMorphism path_to_morphism(const Quiver& q, const Path& p) {
  if (!is_valid_path(q, p)) throw Error("path_to_morphism: not a path of the quiver");
  std::vector<int> vm;
  vm.reserve(p.arrows.size() + 1);
  vm.push_back(p.source);
  int at = p.source;
  for (int a : p.arrows) {
    at = q.target(a);
    vm.push_back(at);
  }
  return QuiverMorphism::make(path_quiver(p.length()), q, std::move(vm), p.arrows);
}

Path morphism_to_path(const QuiverMorphism& m) {
  int k = m.domain().arrow_count();
  if (m.domain() != path_quiver(k))
    throw Error("morphism_to_path: domain is not a path-quiver");
  return Path{m.map_vertex(0), m.map_vertex(k), m.arrow_map()};
}

namespace {

void extend_paths(const Quiver& q, const std::vector<std::vector<int>>& out_arrows, Path& cur,
                  int remaining, std::vector<Path>& sink) {
  sink.push_back(cur);
  if (remaining == 0) return;
  for (int a : out_arrows[static_cast<std::size_t>(cur.target)]) {
    cur.arrows.push_back(a);
    int saved = cur.target;
    cur.target = q.target(a);
    extend_paths(q, out_arrows, cur, remaining - 1, sink);
    cur.target = saved;
    cur.arrows.pop_back();
  }
}

std::vector<Path> all_paths_up_to(const Quiver& q, int max_len) {
  std::vector<std::vector<int>> out_arrows(static_cast<std::size_t>(q.vertex_count()));
  for (int a = 0; a < q.arrow_count(); ++a)
    out_arrows[static_cast<std::size_t>(q.source(a))].push_back(a);
  std::vector<Path> sink;
  for (int v = 0; v < q.vertex_count(); ++v) {
    Path p = empty_path(v);
    extend_paths(q, out_arrows, p, max_len, sink);
  }
  std::sort(sink.begin(), sink.end(), path_less);
  return sink;
}

}  // namespace

std::vector<Path> enumerate_paths(const Quiver& q) {
  if (!is_acyclic(q))
    throw Error("enumerate_paths: cyclic quiver has an infinite path set; use bounded_paths");
  // in an acyclic quiver a path visits distinct vertices
  return all_paths_up_to(q, std::max(0, q.vertex_count() - 1));
}

std::vector<Path> bounded_paths(const Quiver& q, int max_len) {
  if (max_len < 0) throw Error("bounded_paths: negative bound");
  return all_paths_up_to(q, max_len);
}

SameExtremityPairs same_extremity_pairs(const std::vector<Path>& paths) {
  std::map<std::pair<int, int>, std::vector<int>> buckets;
  for (std::size_t i = 0; i < paths.size(); ++i)
    buckets[{paths[i].source, paths[i].target}].push_back(static_cast<int>(i));
  SameExtremityPairs out;
  for (auto& [key, group] : buckets) {
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j)
        out.pairs.emplace_back(group[i], group[j]);
    out.groups.push_back(std::move(group));
  }
  return out;
}

PathRelation::PathRelation(const Quiver& q) : quiver_(q), paths_(enumerate_paths(q)) {
  parent_.resize(paths_.size());
  std::iota(parent_.begin(), parent_.end(), 0);
}

int PathRelation::find(int x) const {
  while (parent_[static_cast<std::size_t>(x)] != x) {
    parent_[static_cast<std::size_t>(x)] =
        parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
    x = parent_[static_cast<std::size_t>(x)];
  }
  return x;
}

bool PathRelation::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (a > b) std::swap(a, b);  // least index represents the class
  parent_[static_cast<std::size_t>(b)] = a;
  return true;
}

int PathRelation::path_index(const Path& p) const {
  auto it = std::lower_bound(paths_.begin(), paths_.end(), p, path_less);
  if (it == paths_.end() || !(*it == p)) return -1;
  return static_cast<int>(it - paths_.begin());
}

bool PathRelation::related(int i, int j) const { return find(i) == find(j); }

bool PathRelation::related(const Path& p, const Path& q) const {
  int i = path_index(p);
  int j = path_index(q);
  if (i < 0 || j < 0) throw Error("PathRelation::related: not a path of this quiver");
  return related(i, j);
}

std::vector<std::vector<int>> PathRelation::classes() const {
  std::vector<std::vector<int>> by_root(paths_.size());
  for (int i = 0; i < static_cast<int>(paths_.size()); ++i)
    by_root[static_cast<std::size_t>(find(i))].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& cls : by_root)
    if (!cls.empty()) out.push_back(std::move(cls));
  return out;
}

PathRelation discrete_relation(const Quiver& q) {
  PathRelation r(q);
  r.closed_ = true;
  return r;
}

PathRelation total_relation(const Quiver& q) {
  PathRelation r(q);
  SameExtremityPairs bp = same_extremity_pairs(r.paths_);
  for (const auto& [i, j] : bp.pairs) r.unite(i, j);
  r.closed_ = true;
  return r;
}

PathRelation close(const Quiver& q, const std::vector<std::pair<Path, Path>>& generators) {
  PathRelation r(q);
  const std::vector<Path>& paths = r.paths_;

  std::vector<std::vector<int>> ending_at(static_cast<std::size_t>(q.vertex_count()));
  std::vector<std::vector<int>> starting_at(static_cast<std::size_t>(q.vertex_count()));
  for (int i = 0; i < static_cast<int>(paths.size()); ++i) {
    ending_at[static_cast<std::size_t>(paths[static_cast<std::size_t>(i)].target)].push_back(i);
    starting_at[static_cast<std::size_t>(paths[static_cast<std::size_t>(i)].source)].push_back(i);
  }

  std::deque<std::pair<int, int>> worklist;
  for (const auto& [p, qq] : generators) {
    int i = r.path_index(p);
    int j = r.path_index(qq);
    if (i < 0 || j < 0) throw Error("close: generator is not a path of the quiver");
    if (p.source != qq.source || p.target != qq.target)
      throw Error("close: generator pair does not share extremities");
    worklist.emplace_back(i, j);
  }

  while (!worklist.empty()) {
    auto [i, j] = worklist.front();
    worklist.pop_front();
    if (!r.unite(i, j)) continue;
    // flank the merged pair by every composable prefix and suffix
    const Path& p = paths[static_cast<std::size_t>(i)];
    const Path& qq = paths[static_cast<std::size_t>(j)];
    for (int u : ending_at[static_cast<std::size_t>(p.source)]) {
      const Path& left = paths[static_cast<std::size_t>(u)];
      Path lp = concat(left, p);
      Path lq = concat(left, qq);
      for (int w : starting_at[static_cast<std::size_t>(p.target)]) {
        const Path& right = paths[static_cast<std::size_t>(w)];
        int a = r.path_index(concat(lp, right));
        int b = r.path_index(concat(lq, right));
        if (r.find(a) != r.find(b)) worklist.emplace_back(a, b);
      }
    }
  }
  r.closed_ = true;
  return r;
}

std::vector<std::vector<int>> naive_close_classes(
    const Quiver& q, const std::vector<std::pair<Path, Path>>& generators) {
  std::vector<Path> paths = enumerate_paths(q);
  const int n = static_cast<int>(paths.size());
  auto index_of = [&](const Path& p) {
    auto it = std::lower_bound(paths.begin(), paths.end(), p, path_less);
    if (it == paths.end() || !(*it == p)) throw Error("naive_close: not a path of the quiver");
    return static_cast<int>(it - paths.begin());
  };

  std::vector<std::vector<char>> rel(static_cast<std::size_t>(n),
                                     std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  for (const auto& [p, qq] : generators) {
    if (p.source != qq.source || p.target != qq.target)
      throw Error("naive_close: generator pair does not share extremities");
    rel[static_cast<std::size_t>(index_of(p))][static_cast<std::size_t>(index_of(qq))] = 1;
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // symmetrize
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
            !rel[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
          rel[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
          changed = true;
        }
    // transitively close
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        if (!rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) continue;
        for (int j = 0; j < n; ++j)
          if (rel[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] &&
              !rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
            rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
            changed = true;
          }
      }
    // congruence-extend
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] || i == j) continue;
        const Path& p = paths[static_cast<std::size_t>(i)];
        const Path& qq = paths[static_cast<std::size_t>(j)];
        for (int u = 0; u < n; ++u) {
          if (paths[static_cast<std::size_t>(u)].target != p.source) continue;
          for (int w = 0; w < n; ++w) {
            if (paths[static_cast<std::size_t>(w)].source != p.target) continue;
            int a = index_of(concat(concat(paths[static_cast<std::size_t>(u)], p),
                                    paths[static_cast<std::size_t>(w)]));
            int b = index_of(concat(concat(paths[static_cast<std::size_t>(u)], qq),
                                    paths[static_cast<std::size_t>(w)]));
            if (!rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) {
              rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
              changed = true;
            }
          }
        }
      }
    }
  }

  std::vector<std::vector<int>> classes;
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (placed[static_cast<std::size_t>(i)]) continue;
    std::vector<int> cls;
    for (int j = 0; j < n; ++j)
      if (rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        cls.push_back(j);
        placed[static_cast<std::size_t>(j)] = 1;
      }
    classes.push_back(std::move(cls));
  }
  return classes;
}

bool is_complete(const PathRelation& r) { return !witness_incompleteness(r).has_value(); }

std::optional<std::pair<Path, Path>> witness_incompleteness(const PathRelation& r) {
  if (!r.closed()) throw Error("witness_incompleteness: relation is not closed");
  SameExtremityPairs bp = same_extremity_pairs(r.paths());
  // paths are stored in path_less order, so the first unrelated pair in
  // this scan is the least one
  for (const auto& [i, j] : bp.pairs) {
    if (!r.related(i, j))
      return std::make_pair(r.paths()[static_cast<std::size_t>(i)],
                            r.paths()[static_cast<std::size_t>(j)]);
  }
  return std::nullopt;
}

}  // namespace chase
