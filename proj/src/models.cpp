#include "chase/models.hpp"

#include <algorithm>
#include <bit>

namespace chase {

// ---- finite categories ----------------------------------------------------

FiniteCategory FiniteCategory::make(
    std::string name, int object_count,
    std::vector<std::vector<std::vector<std::string>>> hom_names, std::vector<int> identities,
    std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> compose_table) {
  FiniteCategory c;
  c.name_ = std::move(name);
  c.objects_ = object_count;
  c.hom_ = std::move(hom_names);
  c.ids_ = std::move(identities);
  c.comp_ = std::move(compose_table);
  c.validate();
  return c;
}

MorRef FiniteCategory::compose(const MorRef& g, const MorRef& f) const {
  if (f.dst != g.src) throw Error("compose: morphisms are not composable");
  int idx = comp_[static_cast<std::size_t>(f.src)][static_cast<std::size_t>(f.dst)]
                 [static_cast<std::size_t>(g.dst)][static_cast<std::size_t>(f.idx)]
                 [static_cast<std::size_t>(g.idx)];
  return {f.src, g.dst, idx};
}

void FiniteCategory::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error("category " + name_ + ": " + why);
  };
  if (objects_ < 0) fail("negative object count");
  std::size_t n = static_cast<std::size_t>(objects_);
  if (hom_.size() != n || ids_.size() != n || comp_.size() != n) fail("table sizes disagree");
  for (std::size_t a = 0; a < n; ++a) {
    if (hom_[a].size() != n || comp_[a].size() != n) fail("table sizes disagree");
    if (ids_[a] < 0 || ids_[a] >= static_cast<int>(hom_[a][a].size()))
      fail("identity of object " + std::to_string(a) + " is out of range");
    for (std::size_t b = 0; b < n; ++b) {
      if (comp_[a][b].size() != n) fail("table sizes disagree");
      for (std::size_t c = 0; c < n; ++c) {
        const auto& t = comp_[a][b][c];
        if (t.size() != hom_[a][b].size()) fail("composition table is not total");
        for (const auto& row : t) {
          if (row.size() != hom_[b][c].size()) fail("composition table is not total");
          for (int r : row)
            if (r < 0 || r >= static_cast<int>(hom_[a][c].size()))
              fail("composition result out of range");
        }
      }
    }
  }
  for (int a = 0; a < objects_; ++a) {
    for (int b = 0; b < objects_; ++b) {
      for (int f = 0; f < hom_size(a, b); ++f) {
        MorRef fm{a, b, f};
        if (!(compose(fm, identity(a)) == fm)) fail("right identity law fails");
        if (!(compose(identity(b), fm) == fm)) fail("left identity law fails");
      }
    }
  }
  for (int a = 0; a < objects_; ++a)
    for (int b = 0; b < objects_; ++b)
      for (int c = 0; c < objects_; ++c)
        for (int d = 0; d < objects_; ++d)
          for (int f = 0; f < hom_size(a, b); ++f)
            for (int g = 0; g < hom_size(b, c); ++g)
              for (int h = 0; h < hom_size(c, d); ++h) {
                MorRef fm{a, b, f}, gm{b, c, g}, hm{c, d, h};
                if (!(compose(hm, compose(gm, fm)) == compose(compose(hm, gm), fm)))
                  fail("associativity fails");
              }
}

bool FiniteCategory::is_thin() const {
  for (int a = 0; a < objects_; ++a)
    for (int b = 0; b < objects_; ++b)
      if (hom_size(a, b) > 1) return false;
  return true;
}

int FiniteCategory::total_morphisms() const {
  int total = 0;
  for (int a = 0; a < objects_; ++a)
    for (int b = 0; b < objects_; ++b) total += hom_size(a, b);
  return total;
}

FiniteCategory FiniteCategory::opposite() const {
  FiniteCategory op;
  op.name_ = name_ + "_op";
  op.objects_ = objects_;
  std::size_t n = static_cast<std::size_t>(objects_);
  op.hom_.assign(n, std::vector<std::vector<std::string>>(n));
  op.comp_.assign(n, std::vector<std::vector<std::vector<std::vector<int>>>>(
                         n, std::vector<std::vector<std::vector<int>>>(n)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) op.hom_[a][b] = hom_[b][a];
  op.ids_ = ids_;
  // (g o f)^op = f^op o g^op
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        auto& t = op.comp_[a][b][c];
        t.assign(op.hom_[a][b].size(), std::vector<int>(op.hom_[b][c].size()));
        for (std::size_t f = 0; f < t.size(); ++f)
          for (std::size_t g = 0; g < t[f].size(); ++g)
            t[f][g] = comp_[c][b][a][g][f];
      }
  op.validate();
  return op;
}

namespace {

FiniteCategory make_thin_from_leq(std::string name, int objects,
                                  const std::function<bool(int, int)>& leq) {
  std::size_t n = static_cast<std::size_t>(objects);
  std::vector<std::vector<std::vector<std::string>>> hom(
      n, std::vector<std::vector<std::string>>(n));
  for (int a = 0; a < objects; ++a)
    for (int b = 0; b < objects; ++b)
      if (leq(a, b)) hom[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = {
          "m" + std::to_string(a) + std::to_string(b)};
  std::vector<int> ids(n, 0);
  std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> comp(
      n, std::vector<std::vector<std::vector<std::vector<int>>>>(
             n, std::vector<std::vector<std::vector<int>>>(n)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        comp[a][b][c].assign(hom[a][b].size(), std::vector<int>(hom[b][c].size(), 0));
  return FiniteCategory::make(std::move(name), objects, std::move(hom), std::move(ids),
                              std::move(comp));
}

}  // namespace

FiniteCategory terminal_category() {
  return make_thin_from_leq("terminal", 1, [](int, int) { return true; });
}

FiniteCategory arrow_category() {
  return make_thin_from_leq("arrow", 2, [](int a, int b) { return a <= b; });
}

FiniteCategory poset4_category() {
  return make_thin_from_leq("poset4", 4, [](int a, int b) { return a <= b; });
}

FiniteCategory cyclic3_category() {
  std::vector<std::vector<std::vector<std::string>>> hom{{{"e", "g", "gg"}}};
  std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> comp(
      1, std::vector<std::vector<std::vector<std::vector<int>>>>(
             1, std::vector<std::vector<std::vector<int>>>(1)));
  comp[0][0][0].assign(3, std::vector<int>(3));
  for (int f = 0; f < 3; ++f)
    for (int g = 0; g < 3; ++g) comp[0][0][0][static_cast<std::size_t>(f)][static_cast<std::size_t>(g)] = (f + g) % 3;
  return FiniteCategory::make("cyclic3", 1, std::move(hom), {0}, std::move(comp));
}

namespace {

// b x a matrices over F2, encoded with bit (row * a + col).
int f2_multiply(int g, int f, int a, int b, int c) {
  // f: b x a, g: c x b, result: c x a
  int out = 0;
  for (int r = 0; r < c; ++r) {
    for (int col = 0; col < a; ++col) {
      int bit = 0;
      for (int k = 0; k < b; ++k)
        bit ^= ((g >> (r * b + k)) & 1) & ((f >> (k * a + col)) & 1);
      out |= bit << (r * a + col);
    }
  }
  return out;
}

}  // namespace

FiniteCategory f2_linear_category() {
  const int objects = 3;  // objects are dimensions 0, 1, 2
  std::size_t n = 3;
  std::vector<std::vector<std::vector<std::string>>> hom(
      n, std::vector<std::vector<std::string>>(n));
  for (int a = 0; a < objects; ++a)
    for (int b = 0; b < objects; ++b) {
      int count = 1 << (a * b);
      for (int i = 0; i < count; ++i)
        hom[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].push_back(
            "f" + std::to_string(a) + std::to_string(b) + "_" + std::to_string(i));
    }
  std::vector<int> ids(n);
  for (int a = 0; a < objects; ++a) {
    int id = 0;
    for (int r = 0; r < a; ++r) id |= 1 << (r * a + r);
    ids[static_cast<std::size_t>(a)] = id;
  }
  std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> comp(
      n, std::vector<std::vector<std::vector<std::vector<int>>>>(
             n, std::vector<std::vector<std::vector<int>>>(n)));
  for (int a = 0; a < objects; ++a)
    for (int b = 0; b < objects; ++b)
      for (int c = 0; c < objects; ++c) {
        auto& t = comp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                      [static_cast<std::size_t>(c)];
        t.assign(static_cast<std::size_t>(1 << (a * b)),
                 std::vector<int>(static_cast<std::size_t>(1 << (b * c))));
        for (int f = 0; f < (1 << (a * b)); ++f)
          for (int g = 0; g < (1 << (b * c)); ++g)
            t[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)] =
                f2_multiply(g, f, a, b, c);
      }
  return FiniteCategory::make("linear2", objects, std::move(hom), std::move(ids),
                              std::move(comp));
}

const std::vector<FiniteCategory>& sample_categories() {
  static const std::vector<FiniteCategory> samples = [] {
    std::vector<FiniteCategory> v;
    v.push_back(terminal_category());
    v.push_back(arrow_category());
    v.push_back(cyclic3_category());
    v.push_back(poset4_category());
    v.push_back(f2_linear_category());
    return v;
  }();
  return samples;
}

// ---- diagrams --------------------------------------------------------------

MorRef diagram_arrow(const Quiver& shape, const Diagram& d, int arrow) {
  int s = shape.source(arrow);
  int t = shape.target(arrow);
  return {d.vertices[static_cast<std::size_t>(s)], d.vertices[static_cast<std::size_t>(t)],
          d.arrows[static_cast<std::size_t>(arrow)]};
}

Diagram pullback(const QuiverMorphism& m, const Diagram& d) {
  Diagram out;
  out.vertices.reserve(m.vertex_map().size());
  for (int img : m.vertex_map()) out.vertices.push_back(d.vertices[static_cast<std::size_t>(img)]);
  out.arrows.reserve(m.arrow_map().size());
  for (int img : m.arrow_map()) out.arrows.push_back(d.arrows[static_cast<std::size_t>(img)]);
  return out;
}

MorRef comp(const FiniteCategory& c, const Quiver& shape, const Diagram& d) {
  int k = shape.arrow_count();
  if (shape != path_quiver(k)) throw Error("comp: shape is not a path-quiver");
  MorRef acc = c.identity(d.vertices[0]);
  for (int a = 0; a < k; ++a) acc = c.compose(diagram_arrow(shape, d, a), acc);
  return acc;
}

namespace {

bool is_commutative_masks(const FiniteCategory& c, const Quiver& shape, const Diagram& d) {
  const int n = shape.vertex_count();
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(n * n), 0);
  auto at = [&](int u, int v) -> std::uint64_t& {
    return mask[static_cast<std::size_t>(u * n + v)];
  };
  for (int v = 0; v < n; ++v)
    at(v, v) |= std::uint64_t{1} << c.identity(d.vertices[static_cast<std::size_t>(v)]).idx;
  for (int a = 0; a < shape.arrow_count(); ++a)
    at(shape.source(a), shape.target(a)) |= std::uint64_t{1}
                                            << d.arrows[static_cast<std::size_t>(a)];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < n; ++u) {
      for (int w = 0; w < n; ++w) {
        std::uint64_t first = at(u, w);
        if (!first) continue;
        for (int v = 0; v < n; ++v) {
          std::uint64_t second = at(w, v);
          if (!second) continue;
          std::uint64_t& sink = at(u, v);
          for (std::uint64_t m1 = first; m1; m1 &= m1 - 1) {
            int f = std::countr_zero(m1);
            for (std::uint64_t m2 = second; m2; m2 &= m2 - 1) {
              int g = std::countr_zero(m2);
              MorRef r = c.compose({d.vertices[static_cast<std::size_t>(w)],
                                    d.vertices[static_cast<std::size_t>(v)], g},
                                   {d.vertices[static_cast<std::size_t>(u)],
                                    d.vertices[static_cast<std::size_t>(w)], f});
              std::uint64_t bit = std::uint64_t{1} << r.idx;
              if (!(sink & bit)) {
                sink |= bit;
                changed = true;
              }
            }
          }
        }
      }
    }
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (std::popcount(at(u, v)) > 1) return false;
  return true;
}

bool is_commutative_generic(const FiniteCategory& c, const Quiver& shape, const Diagram& d) {
  const int n = shape.vertex_count();
  std::vector<std::vector<std::vector<char>>> in(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    in[static_cast<std::size_t>(u)].resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
      in[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)].assign(
          static_cast<std::size_t>(c.hom_size(d.vertices[static_cast<std::size_t>(u)],
                                              d.vertices[static_cast<std::size_t>(v)])),
          0);
  }
  auto add = [&](int u, int v, int idx) {
    char& cell = in[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]
                   [static_cast<std::size_t>(idx)];
    if (cell) return false;
    cell = 1;
    return true;
  };
  for (int v = 0; v < n; ++v) add(v, v, c.identity(d.vertices[static_cast<std::size_t>(v)]).idx);
  for (int a = 0; a < shape.arrow_count(); ++a)
    add(shape.source(a), shape.target(a), d.arrows[static_cast<std::size_t>(a)]);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < n; ++u)
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v) {
          auto& fs = in[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)];
          auto& gs = in[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
          for (std::size_t f = 0; f < fs.size(); ++f) {
            if (!fs[f]) continue;
            for (std::size_t g = 0; g < gs.size(); ++g) {
              if (!gs[g]) continue;
              MorRef r = c.compose({d.vertices[static_cast<std::size_t>(w)],
                                    d.vertices[static_cast<std::size_t>(v)], static_cast<int>(g)},
                                   {d.vertices[static_cast<std::size_t>(u)],
                                    d.vertices[static_cast<std::size_t>(w)], static_cast<int>(f)});
              if (add(u, v, r.idx)) changed = true;
            }
          }
        }
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      int count = 0;
      for (char x : in[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) count += x;
      if (count > 1) return false;
    }
  return true;
}

}  // namespace

bool is_commutative(const FiniteCategory& c, const Quiver& shape, const Diagram& d) {
  bool small = true;
  for (int v : d.vertices)
    for (int w : d.vertices)
      if (c.hom_size(v, w) > 64) small = false;
  return small ? is_commutative_masks(c, shape, d) : is_commutative_generic(c, shape, d);
}

// ---- categorical interpretation ---------------------------------------------

namespace {

Value to_value(const Diagram& d) {
  Value v = d.vertices;
  v.insert(v.end(), d.arrows.begin(), d.arrows.end());
  return v;
}

Diagram to_diagram(const Quiver& shape, const Value& v) {
  Diagram d;
  d.vertices.assign(v.begin(), v.begin() + shape.vertex_count());
  d.arrows.assign(v.begin() + shape.vertex_count(), v.end());
  return d;
}

}  // namespace

std::uint64_t CategoricalInterpretation::domain_size(const Quiver& sort) const {
  const int n = sort.vertex_count();
  const int k = category_.object_count();
  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  std::uint64_t total = 0;
  // product over arrows, summed over all vertex assignments
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      std::uint64_t prod = 1;
      for (int a = 0; a < sort.arrow_count() && prod; ++a)
        prod *= static_cast<std::uint64_t>(
            category_.hom_size(assign[static_cast<std::size_t>(sort.source(a))],
                               assign[static_cast<std::size_t>(sort.target(a))]));
      total += prod;
      return;
    }
    for (int o = 0; o < k; ++o) {
      assign[static_cast<std::size_t>(v)] = o;
      rec(v + 1);
    }
  };
  rec(0);
  return total;
}

Value CategoricalInterpretation::restr_value(const QuiverMorphism& m, const Value& v) const {
  Diagram d = to_diagram(m.codomain(), v);
  return to_value(pullback(m, d));
}

bool CategoricalInterpretation::commute_value(const Quiver& sort, const Value& v) const {
  return is_commutative(category_, sort, to_diagram(sort, v));
}

void CategoricalInterpretation::for_each_value(const Quiver& sort,
                                               const std::function<bool(const Value&)>& fn) const {
  const int n = sort.vertex_count();
  const int m = sort.arrow_count();
  Value v(static_cast<std::size_t>(n + m), 0);
  std::function<bool(int)> arrows = [&](int a) -> bool {
    if (a == m) return fn(v);
    int h = category_.hom_size(v[static_cast<std::size_t>(sort.source(a))],
                               v[static_cast<std::size_t>(sort.target(a))]);
    for (int i = 0; i < h; ++i) {
      v[static_cast<std::size_t>(n + a)] = i;
      if (!arrows(a + 1)) return false;
    }
    return true;
  };
  std::function<bool(int)> verts = [&](int vx) -> bool {
    if (vx == n) return arrows(0);
    for (int o = 0; o < category_.object_count(); ++o) {
      v[static_cast<std::size_t>(vx)] = o;
      if (!verts(vx + 1)) return false;
    }
    return true;
  };
  verts(0);
}

std::optional<Interpretation::DiagramView> CategoricalInterpretation::diagram_view(
    const Quiver& sort) const {
  DiagramView view;
  view.category = &category_;
  view.shape = sort;
  view.translate = [](const QuiverMorphism& m) { return m; };
  return view;
}

InterpretationPtr categorical_interpretation(FiniteCategory c) {
  return std::make_shared<CategoricalInterpretation>(std::move(c));
}

// ---- dual interpretation ----------------------------------------------------

namespace {

class DualInterpretation : public Interpretation {
 public:
  explicit DualInterpretation(InterpretationPtr base) : base_(std::move(base)) {}

  std::uint64_t domain_size(const Quiver& sort) const override {
    return base_->domain_size(dual(sort).quiver);
  }
  Value restr_value(const QuiverMorphism& m, const Value& v) const override {
    return base_->restr_value(dual_morphism(m), v);
  }
  bool commute_value(const Quiver& sort, const Value& v) const override {
    return base_->commute_value(dual(sort).quiver, v);
  }
  void for_each_value(const Quiver& sort,
                      const std::function<bool(const Value&)>& fn) const override {
    base_->for_each_value(dual(sort).quiver, fn);
  }
  std::optional<DiagramView> diagram_view(const Quiver& sort) const override {
    auto base_view = base_->diagram_view(dual(sort).quiver);
    if (!base_view) return std::nullopt;
    DiagramView view;
    view.category = base_view->category;
    view.shape = base_view->shape;
    auto inner = base_view->translate;
    view.translate = [inner](const QuiverMorphism& m) { return inner(dual_morphism(m)); };
    return view;
  }

 private:
  InterpretationPtr base_;
};

}  // namespace

InterpretationPtr dual_interpretation(InterpretationPtr base) {
  return std::make_shared<DualInterpretation>(std::move(base));
}

// ---- explicit interpretation --------------------------------------------------

void ExplicitInterpretation::set_domain(const Quiver& sort, int size) {
  domains_[sort] = size;
}

void ExplicitInterpretation::set_restr(const QuiverMorphism& m, std::vector<int> table) {
  restr_[m] = std::move(table);
}

void ExplicitInterpretation::set_commute(const Quiver& sort, std::vector<bool> member) {
  commute_[sort] = std::move(member);
}

std::uint64_t ExplicitInterpretation::domain_size(const Quiver& sort) const {
  auto it = domains_.find(sort);
  if (it == domains_.end()) throw Error("missing domain for sort " + sort.to_string());
  return static_cast<std::uint64_t>(it->second);
}

Value ExplicitInterpretation::restr_value(const QuiverMorphism& m, const Value& v) const {
  auto it = restr_.find(m);
  if (it == restr_.end()) throw Error("missing restr interpretation for " + m.to_string());
  return {it->second[static_cast<std::size_t>(v[0])]};
}

bool ExplicitInterpretation::commute_value(const Quiver& sort, const Value& v) const {
  auto it = commute_.find(sort);
  if (it == commute_.end()) throw Error("missing commute interpretation for " + sort.to_string());
  return it->second[static_cast<std::size_t>(v[0])];
}

void ExplicitInterpretation::for_each_value(const Quiver& sort,
                                            const std::function<bool(const Value&)>& fn) const {
  std::uint64_t n = domain_size(sort);
  Value v{0};
  for (std::uint64_t i = 0; i < n; ++i) {
    v[0] = static_cast<int>(i);
    if (!fn(v)) return;
  }
}

// ---- evaluator -----------------------------------------------------------------

const Value* Valuation::lookup(const std::string& name, const Quiver& sort) const {
  for (const auto& [key, value] : bindings)
    if (key.first == name && key.second == sort) return &value;
  return nullptr;
}

namespace {

void flatten_and(const Formula& f, std::vector<const Formula*>& out) {
  if (f.kind() == Formula::Kind::And) {
    for (const Formula& c : f.children()) flatten_and(c, out);
  } else {
    out.push_back(&f);
  }
}

bool term_mentions(const Term& t, int index) {
  switch (t.kind()) {
    case Term::Kind::FreeVar:
      return false;
    case Term::Kind::BoundVar:
      return t.index() == index;
    case Term::Kind::Restr:
      return term_mentions(t.argument(), index);
  }
  return false;
}

bool formula_mentions(const Formula& f, int index) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return term_mentions(f.lhs(), index) || term_mentions(f.rhs(), index);
    case Formula::Kind::Commute:
      return term_mentions(f.term(), index);
    default: {
      int inner = f.is_quantifier() ? index + 1 : index;
      for (const Formula& c : f.children())
        if (formula_mentions(c, inner)) return true;
      return false;
    }
  }
}

// When t is a pure restriction chain around BoundVar(index), the morphism r
// with value(t) = r*(x); otherwise nothing.
std::optional<QuiverMorphism> chain_of(const Term& t, int index) {
  if (t.kind() == Term::Kind::BoundVar && t.index() == index)
    return identity_morphism(t.sort());
  if (t.kind() == Term::Kind::Restr) {
    auto inner = chain_of(t.argument(), index);
    if (!inner) return std::nullopt;
    return compose_morphisms(*inner, t.morphism());
  }
  return std::nullopt;
}

// Accumulates the positions of the bound variable that a formula can read,
// as stage indices of the guided enumerator (vertices then arrows).
void term_supports(const Term& t, int index, const QuiverMorphism* outer_chain,
                   const std::function<QuiverMorphism(const QuiverMorphism&)>& translate,
                   int shape_vertices, std::vector<int>& stages) {
  if (t.kind() == Term::Kind::BoundVar) {
    if (t.index() != index) return;
    QuiverMorphism chain =
        outer_chain ? *outer_chain : identity_morphism(t.sort());
    QuiverMorphism translated = translate(chain);
    for (int v : translated.vertex_map()) stages.push_back(v);
    for (int a : translated.arrow_map()) stages.push_back(shape_vertices + a);
    return;
  }
  if (t.kind() == Term::Kind::Restr) {
    // value(parent) = acc*(value(t)); extend the accumulator by this step
    QuiverMorphism next = outer_chain ? compose_morphisms(t.morphism(), *outer_chain)
                                      : t.morphism();
    term_supports(t.argument(), index, &next, translate, shape_vertices, stages);
  }
}

void formula_supports(const Formula& f, int index,
                      const std::function<QuiverMorphism(const QuiverMorphism&)>& translate,
                      int shape_vertices, std::vector<int>& stages) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      term_supports(f.lhs(), index, nullptr, translate, shape_vertices, stages);
      term_supports(f.rhs(), index, nullptr, translate, shape_vertices, stages);
      return;
    case Formula::Kind::Commute:
      term_supports(f.term(), index, nullptr, translate, shape_vertices, stages);
      return;
    default: {
      int inner = f.is_quantifier() ? index + 1 : index;
      for (const Formula& c : f.children())
        formula_supports(c, inner, translate, shape_vertices, stages);
      return;
    }
  }
}

class Evaluator {
 public:
  Evaluator(const Interpretation& m, const EvalOptions& opts, const Valuation* val)
      : interp_(m), opts_(opts), valuation_(val) {}

  struct EnvGuard {
    std::vector<const Value*>& env;
    EnvGuard(std::vector<const Value*>& e, const Value* v) : env(e) { env.push_back(v); }
    ~EnvGuard() { env.pop_back(); }
  };

  bool eval(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Eq:
        return eval_term(f.lhs()) == eval_term(f.rhs());
      case Formula::Kind::Commute: {
        Value v = eval_term(f.term());
        return interp_.commute_value(f.term().sort(), v);
      }
      case Formula::Kind::And:
        for (const Formula& c : f.children())
          if (!eval(c)) return false;
        return true;
      case Formula::Kind::Or:
        for (const Formula& c : f.children())
          if (eval(c)) return true;
        return false;
      case Formula::Kind::Implies:
        return !eval(f.child(0)) || eval(f.child(1));
      case Formula::Kind::Iff:
        return eval(f.child(0)) == eval(f.child(1));
      case Formula::Kind::Not:
        return !eval(f.child(0));
      case Formula::Kind::Forall:
      case Formula::Kind::Exists:
      case Formula::Kind::ExistsUnique:
        return eval_quantifier(f);
    }
    throw Error("unreachable");
  }

 private:
  Value eval_term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::FreeVar: {
        if (valuation_) {
          if (const Value* v = valuation_->lookup(t.name(), t.sort())) return *v;
        }
        throw Error("evaluate: unbound variable " + t.name());
      }
      case Term::Kind::BoundVar:
        return *env_[env_.size() - 1 - static_cast<std::size_t>(t.index())];
      case Term::Kind::Restr:
        return interp_.restr_value(t.morphism(), eval_term(t.argument()));
    }
    throw Error("unreachable");
  }

  bool eval_quantifier(const Formula& f) {
    const Formula& body = f.child(0);
    const Quiver& sort = f.binder_sort();
    const bool is_forall = f.kind() == Formula::Kind::Forall;

    std::vector<const Formula*> conjuncts;
    const Formula* tail = nullptr;
    if (is_forall) {
      if (body.kind() == Formula::Kind::Implies) {
        flatten_and(body.child(0), conjuncts);
        tail = &body.child(1);
      } else {
        tail = &body;
      }
    } else {
      flatten_and(body, conjuncts);
    }

    auto view = interp_.diagram_view(sort);
    if (view) return guided(f, sort, *view, conjuncts, tail);
    return flat(f, sort, conjuncts, tail);
  }

  // Candidate-by-candidate result handling shared by both paths. Returns
  // nullopt to continue enumerating.
  struct Counter {
    Formula::Kind kind;
    std::uint64_t hits = 0;
  };

  // leaf outcome: candidate satisfied all conjuncts; for Forall evaluate the
  // conclusion. Returns false to stop enumeration.
  bool leaf(Counter& counter, const Formula* tail) {
    if (counter.kind == Formula::Kind::Forall) {
      bool ok = tail ? eval(*tail) : true;
      if (!ok) {
        counter.hits = 1;  // found a countercandidate
        return false;
      }
      return true;
    }
    ++counter.hits;
    if (counter.kind == Formula::Kind::Exists) return false;       // one witness is enough
    return counter.hits < 2;                                        // unique: stop at two
  }

  bool finish(const Counter& counter) {
    switch (counter.kind) {
      case Formula::Kind::Forall:
        return counter.hits == 0;
      case Formula::Kind::Exists:
        return counter.hits > 0;
      default:
        return counter.hits == 1;
    }
  }

  bool flat(const Formula& f, const Quiver& sort, const std::vector<const Formula*>& conjuncts,
            const Formula* tail) {
    std::uint64_t size = interp_.domain_size(sort);
    if (size > opts_.cap) throw ResourceError("sort " + sort.to_string(), size, opts_.cap);
    Counter counter{f.kind()};
    interp_.for_each_value(sort, [&](const Value& v) {
      EnvGuard guard(env_, &v);
      bool pass = true;
      for (const Formula* c : conjuncts)
        if (!eval(*c)) {
          pass = false;
          break;
        }
      return pass ? leaf(counter, tail) : true;
    });
    return finish(counter);
  }

  bool guided(const Formula& f, const Quiver& sort, const Interpretation::DiagramView& view,
              const std::vector<const Formula*>& conjuncts, const Formula* tail) {
    const FiniteCategory& cat = *view.category;
    const Quiver& shape = view.shape;
    const int n = shape.vertex_count();
    const int m = shape.arrow_count();

    Value partial(static_cast<std::size_t>(n + m), -1);
    EnvGuard guard(env_, &partial);

    bool infeasible = false;
    auto pin_position = [&](int pos, int val) {
      int& slot = partial[static_cast<std::size_t>(pos)];
      if (slot == -1)
        slot = val;
      else if (slot != val)
        infeasible = true;
    };

    // classify conjuncts into pins and staged checks
    struct Check {
      const Formula* formula;
      int stage;
    };
    std::vector<Check> checks;
    for (const Formula* c : conjuncts) {
      if (c->kind() == Formula::Kind::Eq) {
        auto lc = chain_of(c->lhs(), 0);
        auto rc = chain_of(c->rhs(), 0);
        bool lm = term_mentions(c->lhs(), 0);
        bool rm = term_mentions(c->rhs(), 0);
        if (lc && !rm) {
          Value pinned = eval_term(c->rhs());
          QuiverMorphism t = view.translate(*lc);
          for (int v = 0; v < t.domain().vertex_count(); ++v)
            pin_position(t.map_vertex(v), pinned[static_cast<std::size_t>(v)]);
          for (int a = 0; a < t.domain().arrow_count(); ++a)
            pin_position(n + t.map_arrow(a),
                         pinned[static_cast<std::size_t>(t.domain().vertex_count() + a)]);
          continue;
        }
        if (rc && !lm) {
          Value pinned = eval_term(c->lhs());
          QuiverMorphism t = view.translate(*rc);
          for (int v = 0; v < t.domain().vertex_count(); ++v)
            pin_position(t.map_vertex(v), pinned[static_cast<std::size_t>(v)]);
          for (int a = 0; a < t.domain().arrow_count(); ++a)
            pin_position(n + t.map_arrow(a),
                         pinned[static_cast<std::size_t>(t.domain().vertex_count() + a)]);
          continue;
        }
      }
      std::vector<int> stages;
      formula_supports(*c, 0, view.translate, n, stages);
      int stage = -1;
      for (int s : stages) stage = std::max(stage, s);
      checks.push_back({c, stage});
    }

    Counter counter{f.kind()};
    bool aborted = false;

    if (!infeasible) {
      // cap: number of candidates compatible with the pins
      std::uint64_t candidates = count_candidates(cat, shape, partial);
      if (candidates > opts_.cap)
        throw ResourceError("sort " + sort.to_string(), candidates, opts_.cap);

      std::vector<std::vector<const Formula*>> fires(static_cast<std::size_t>(n + m));
      bool pre_fail = false;
      for (const Check& c : checks) {
        if (c.stage < 0) {
          // does not read the variable; decide once
          if (!eval(*c.formula)) pre_fail = true;
        } else {
          fires[static_cast<std::size_t>(c.stage)].push_back(c.formula);
        }
      }

      if (!pre_fail) {
        // stages 0..n-1 assign vertices, n..n+m-1 assign arrows, in lex order
        std::function<bool(int)> dfs = [&](int stage) -> bool {
          if (stage == n + m) return leaf(counter, tail);
          int lo = 0, hi = 0;  // candidate range
          bool pinned = partial[static_cast<std::size_t>(stage)] != -1;
          if (stage < n) {
            hi = cat.object_count();
          } else {
            int a = stage - n;
            hi = cat.hom_size(partial[static_cast<std::size_t>(shape.source(a))],
                              partial[static_cast<std::size_t>(shape.target(a))]);
          }
          if (pinned) {
            lo = partial[static_cast<std::size_t>(stage)];
            hi = lo + 1;
          }
          for (int cand = lo; cand < hi; ++cand) {
            partial[static_cast<std::size_t>(stage)] = cand;
            bool ok = true;
            for (const Formula* chk : fires[static_cast<std::size_t>(stage)])
              if (!eval(*chk)) {
                ok = false;
                break;
              }
            if (ok && !dfs(stage + 1)) {
              if (!pinned) partial[static_cast<std::size_t>(stage)] = -1;
              return false;
            }
          }
          if (!pinned) partial[static_cast<std::size_t>(stage)] = -1;
          return true;
        };
        aborted = !dfs(0);
      }
    }
    (void)aborted;
    return finish(counter);
  }

  static std::uint64_t count_candidates(const FiniteCategory& cat, const Quiver& shape,
                                        const Value& partial) {
    const int n = shape.vertex_count();
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    std::uint64_t total = 0;
    std::function<void(int)> rec = [&](int v) {
      if (v == n) {
        std::uint64_t prod = 1;
        for (int a = 0; a < shape.arrow_count() && prod; ++a) {
          int h = cat.hom_size(assign[static_cast<std::size_t>(shape.source(a))],
                               assign[static_cast<std::size_t>(shape.target(a))]);
          int pinned_arrow = partial[static_cast<std::size_t>(n + a)];
          if (pinned_arrow != -1)
            prod *= (pinned_arrow < h) ? 1 : 0;
          else
            prod *= static_cast<std::uint64_t>(h);
        }
        total += prod;
        return;
      }
      int pinned = partial[static_cast<std::size_t>(v)];
      int lo = pinned == -1 ? 0 : pinned;
      int hi = pinned == -1 ? cat.object_count() : pinned + 1;
      for (int o = lo; o < hi; ++o) {
        assign[static_cast<std::size_t>(v)] = o;
        rec(v + 1);
      }
    };
    rec(0);
    return total;
  }

  const Interpretation& interp_;
  EvalOptions opts_;
  const Valuation* valuation_;
  std::vector<const Value*> env_;
};

}  // namespace

bool evaluate(const Formula& f, const Interpretation& m, const EvalOptions& opts) {
  Evaluator e(m, opts, nullptr);
  return e.eval(f);
}

bool evaluate(const Formula& f, const Interpretation& m, const Valuation& valuation,
              const EvalOptions& opts) {
  Evaluator e(m, opts, &valuation);
  return e.eval(f);
}

}  // namespace chase
