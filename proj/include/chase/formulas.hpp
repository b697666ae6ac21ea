#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chase/paths.hpp"
#include "chase/presentation.hpp"
#include "chase/quiver.hpp"

namespace chase {

// Sigma restricts sorts to acyclic quivers and function symbols to
// embeddings; SigmaRing allows any finite quiver and any morphism.
enum class SignatureKind { Sigma, SigmaRing };

using Sort = Quiver;

// Terms are variables or restriction chains. Bound variables use de Bruijn
// indices; free variables are identified by (name, sort).
class Term {
 public:
  enum class Kind { FreeVar, BoundVar, Restr };

  Kind kind() const;
  const Sort& sort() const;
  const std::string& name() const;        // FreeVar
  int index() const;                      // BoundVar
  const QuiverMorphism& morphism() const; // Restr
  const Term& argument() const;           // Restr

  friend bool operator==(const Term& a, const Term& b);

 private:
  friend Term var(std::string, Sort);
  friend Term bound_var(int, Sort);
  friend Term restr(QuiverMorphism, Term);
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Term var(std::string name, Sort sort);
Term bound_var(int index, Sort sort);
// restr_m(t); the argument sort must equal codomain(m), the result sort is
// domain(m).
Term restr(QuiverMorphism m, Term argument);

class Formula {
 public:
  enum class Kind { Eq, Commute, And, Or, Implies, Iff, Not, Forall, Exists, ExistsUnique };

  Kind kind() const;
  const Term& lhs() const;   // Eq
  const Term& rhs() const;   // Eq
  const Term& term() const;  // Commute
  const std::vector<Formula>& children() const;  // And / Or
  const Formula& child(int i) const;             // Implies / Iff (0,1), Not (0), quantifier body (0)
  const Sort& binder_sort() const;               // quantifiers
  const std::string& binder_hint() const;        // quantifiers, display only

  bool is_quantifier() const;

  // Structural equality; binder display hints are ignored.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  friend class FormulaBuilderAccess;
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Formula eq(Term l, Term r);
Formula commute(Term t);
Formula land(std::vector<Formula> children);  // empty list means "true"
Formula lor(std::vector<Formula> children);   // empty list means "false"
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula lnot(Formula a);

// Quantifiers close over the free variable (name, sort) in the body.
Formula forall(const std::string& name, Sort sort, Formula body);
Formula exists(const std::string& name, Sort sort, Formula body);
Formula exists_unique(const std::string& name, Sort sort, Formula body);

Formula truth();
Formula falsity();

// Free variables, in first-occurrence order.
std::vector<std::pair<std::string, Sort>> free_variables(const Formula& f);
bool is_closed(const Formula& f);

// Replaces every occurrence of the free variable by a term of equal sort.
Formula substitute(const Formula& f, const std::string& name, const Sort& sort, const Term& t);

// The duality involution on terms and formulas.
Term dualize(const Term& t);
Formula dualize(const Formula& f);

struct WellFormedness {
  bool ok = true;
  std::string diagnostic;
};

WellFormedness well_formed(const Formula& f, SignatureKind sig);

// Stable ASCII rendering; binders display as x0, x1, ... by depth. Parsable
// back by the DSL formula parser.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);

// ---- schema builders -------------------------------------------------

// Cospan_{m1,m2}(x1, x2, xp)
Formula cospan_formula(const QuiverMorphism& inj1, const QuiverMorphism& inj2, const Term& x1,
                       const Term& x2, const Term& xp);
// Comp(x, y, z): z is the composite of x then y.
Formula comp_formula(const Term& x, const Term& y, const Term& z);
// Id(x, y): y is an identity arrow over the point x.
Formula id_formula(const Term& x, const Term& y);
// EqPath over any pair of path-quiver sorts.
Formula eqpath_formula(const Term& x1, const Term& x2);

Formula empty_eu();
Formula comp_e();
Formula id_e();
Formula com_eq();
Formula restr_comp(const QuiverMorphism& m, const QuiverMorphism& m_prime);
Formula pushout_eu(const QuiverMorphism& m1, const QuiverMorphism& m2, const QuiverMorphism& inj1,
                   const QuiverMorphism& inj2);
Formula eqpath_refl(int k);
Formula eqpath_sym(int k1, int k2);
Formula eqpath_trans(int k1, int k2, int k3);
Formula eqpath_concat(int k1, int k2, int k1p, int k2p);
// PathCom_Q; cyclic quivers need a finite path bound, acyclic ones may pass
// a negative bound to use the full path set.
Formula pathcom_formula(const Quiver& q, int max_path_len = -1);

Formula mono_formula(const Term& x);
Formula epi_formula(const Term& x);
Formula cone_builder(const Quiver& q, const Term& x, const Term& y);
Formula limit_formula(const Quiver& q, const Term& x, const Term& y);
Formula colimit_formula(const Quiver& q, const Term& x, const Term& y);
Formula zero_formula(const Term& x);
Formula ker_formula(const Term& x, const Term& y);
Formula coker_formula(const Term& x, const Term& y);
// Sort of the second argument of Colimit_Q, i.e. the dual cone shape.
Quiver cocone_quiver(const Quiver& q);

Formula zero_e();
Formula product_e();
Formula coproduct_e();
Formula ker_e();
Formula coker_e();
Formula mono_normal();
Formula epi_normal();

// Commerge_{m_0..m_{k-1}} over the shared codomain of the premises.
Formula commerge_formula(const Quiver& q, const std::vector<QuiverMorphism>& premises);

// CommergeWithId_M over the acyclic layered quiver of the presentation.
Formula commerge_with_id(const MonoidPresentation& p);

// ---- theory generation -----------------------------------------------

struct Budget {
  int max_vertices = 3;
  int max_arrows = 3;
  int max_path_len = 3;
};

struct SchemaInstance {
  std::string schema;
  std::string params;
  Formula formula;
};

struct Theory {
  std::string name;
  std::vector<SchemaInstance> formulas;
};

// Streams every T_cat instance within budget, in a fixed deterministic
// order. Schemas indexed by quivers use the (vertices, arrows) enumeration;
// schemas indexed by path-quivers use PQ_0..PQ_max_path_len.
void for_each_tcat_axiom(const Budget& budget, SignatureKind sig,
                         const std::function<void(const SchemaInstance&)>& fn);
Theory tcat_axioms(const Budget& budget, SignatureKind sig = SignatureKind::Sigma);

// T_cat plus the seven flat axioms of the abelian extension.
void for_each_tab_axiom(const Budget& budget, SignatureKind sig,
                        const std::function<void(const SchemaInstance&)>& fn);
Theory tab_axioms(const Budget& budget, SignatureKind sig = SignatureKind::Sigma);
std::vector<SchemaInstance> tab_extension_axioms();

}  // namespace chase
