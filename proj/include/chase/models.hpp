#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chase/formulas.hpp"
#include "chase/quiver.hpp"

namespace chase {

// A morphism of a finite category: hom-set index relative to (src, dst).
struct MorRef {
  int src = 0;
  int dst = 0;
  int idx = 0;
  friend bool operator==(const MorRef&, const MorRef&) = default;
};

// A finite category given by explicit hom-sets and a total composition
// table. Laws are checked exhaustively on construction.
class FiniteCategory {
 public:
  // hom_names[a][b] lists the morphisms a -> b; identities[a] indexes into
  // hom_names[a][a]; compose_table[a][b][c][f][g] gives (g o f) in hom(a,c)
  // for f: a->b, g: b->c.
  static FiniteCategory make(std::string name, int object_count,
                             std::vector<std::vector<std::vector<std::string>>> hom_names,
                             std::vector<int> identities,
                             std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>>
                                 compose_table);

  const std::string& name() const { return name_; }
  int object_count() const { return objects_; }
  int hom_size(int a, int b) const {
    return static_cast<int>(hom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].size());
  }
  const std::string& morphism_name(const MorRef& m) const {
    return hom_[static_cast<std::size_t>(m.src)][static_cast<std::size_t>(m.dst)]
               [static_cast<std::size_t>(m.idx)];
  }
  MorRef identity(int a) const { return {a, a, ids_[static_cast<std::size_t>(a)]}; }
  // g o f for f: a->b, g: b->c.
  MorRef compose(const MorRef& g, const MorRef& f) const;

  bool is_thin() const;
  int total_morphisms() const;

  FiniteCategory opposite() const;

 private:
  FiniteCategory() = default;
  void validate() const;

  std::string name_;
  int objects_ = 0;
  std::vector<std::vector<std::vector<std::string>>> hom_;
  std::vector<int> ids_;
  std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> comp_;
};

// Shipped fixtures: terminal, arrow, a 3-element monoid, a 4-chain poset,
// and the skeleton of F2 vector spaces of dimension at most 2.
const std::vector<FiniteCategory>& sample_categories();
FiniteCategory terminal_category();
FiniteCategory arrow_category();
FiniteCategory cyclic3_category();
FiniteCategory poset4_category();
FiniteCategory f2_linear_category();

// A diagram over a shape quiver: objects per vertex, hom indices per arrow
// (endpoints implied by the vertex assignment).
struct Diagram {
  std::vector<int> vertices;
  std::vector<int> arrows;
  friend bool operator==(const Diagram&, const Diagram&) = default;
  friend bool operator<(const Diagram& a, const Diagram& b) {
    if (a.vertices != b.vertices) return a.vertices < b.vertices;
    return a.arrows < b.arrows;
  }
};

MorRef diagram_arrow(const Quiver& shape, const Diagram& d, int arrow);

// Pullback m*(d): precomposition with the induced functor.
Diagram pullback(const QuiverMorphism& m, const Diagram& d);

// The composite along a path-quiver shape; identity when the path is trivial.
MorRef comp(const FiniteCategory& c, const Quiver& shape, const Diagram& d);

// Commutativity via a Kleene fixpoint on composite-value sets; equivalent to
// the path-pair criterion and total on cyclic shapes.
bool is_commutative(const FiniteCategory& c, const Quiver& shape, const Diagram& d);

// ---- interpretations ---------------------------------------------------

// Interpretation values. Categorical interpretations use the concatenated
// (vertices, arrows) assignment of a diagram; table-driven interpretations
// use a single element index.
using Value = std::vector<int>;

class Interpretation {
 public:
  virtual ~Interpretation() = default;

  virtual std::uint64_t domain_size(const Quiver& sort) const = 0;
  virtual Value restr_value(const QuiverMorphism& m, const Value& v) const = 0;
  virtual bool commute_value(const Quiver& sort, const Value& v) const = 0;

  // Canonical enumeration order of the sort's domain. Stops early when the
  // callback returns false.
  virtual void for_each_value(const Quiver& sort,
                              const std::function<bool(const Value&)>& fn) const = 0;

  // Structured view for constraint-guided quantifier enumeration, if the
  // domain is a diagram set. `translate` maps morphisms into this sort to
  // morphisms into the base shape.
  struct DiagramView {
    const FiniteCategory* category = nullptr;
    Quiver shape;
    std::function<QuiverMorphism(const QuiverMorphism&)> translate;
  };
  virtual std::optional<DiagramView> diagram_view(const Quiver& sort) const {
    return std::nullopt;
  }
};

using InterpretationPtr = std::shared_ptr<const Interpretation>;

class CategoricalInterpretation : public Interpretation {
 public:
  explicit CategoricalInterpretation(FiniteCategory c) : category_(std::move(c)) {}

  const FiniteCategory& category() const { return category_; }

  std::uint64_t domain_size(const Quiver& sort) const override;
  Value restr_value(const QuiverMorphism& m, const Value& v) const override;
  bool commute_value(const Quiver& sort, const Value& v) const override;
  void for_each_value(const Quiver& sort,
                      const std::function<bool(const Value&)>& fn) const override;
  std::optional<DiagramView> diagram_view(const Quiver& sort) const override;

 private:
  FiniteCategory category_;
};

InterpretationPtr categorical_interpretation(FiniteCategory c);

// The dual model: domains, restrictions and commute sets read through the
// duality involution.
InterpretationPtr dual_interpretation(InterpretationPtr base);

// A finite interpretation given by explicit tables; element i of a sort is
// the value {i}.
class ExplicitInterpretation : public Interpretation {
 public:
  void set_domain(const Quiver& sort, int size);
  void set_restr(const QuiverMorphism& m, std::vector<int> table);
  void set_commute(const Quiver& sort, std::vector<bool> member);

  std::uint64_t domain_size(const Quiver& sort) const override;
  Value restr_value(const QuiverMorphism& m, const Value& v) const override;
  bool commute_value(const Quiver& sort, const Value& v) const override;
  void for_each_value(const Quiver& sort,
                      const std::function<bool(const Value&)>& fn) const override;

 private:
  std::unordered_map<Quiver, int, QuiverHash> domains_;
  std::unordered_map<QuiverMorphism, std::vector<int>, QuiverMorphismHash> restr_;
  std::unordered_map<Quiver, std::vector<bool>, QuiverHash> commute_;
};

// ---- evaluation ----------------------------------------------------------

struct EvalOptions {
  // Cap on candidates enumerated per quantifier, after equality pinning.
  std::uint64_t cap = 200000;
};

struct Valuation {
  std::vector<std::pair<std::pair<std::string, Quiver>, Value>> bindings;
  const Value* lookup(const std::string& name, const Quiver& sort) const;
};

// Tarskian evaluation over finite domains; deterministic enumeration order;
// throws ResourceError when a quantifier would exceed the cap and Error on a
// missing domain or an open formula without a valuation entry.
bool evaluate(const Formula& f, const Interpretation& m, const EvalOptions& opts = {});
bool evaluate(const Formula& f, const Interpretation& m, const Valuation& valuation,
              const EvalOptions& opts = {});

}  // namespace chase
