#include "chase/formulas.hpp"

#include <atomic>
#include <sstream>

#include "chase/enumerate.hpp"
#include "chase/reductions.hpp"

namespace chase {

// ---- term nodes --------------------------------------------------------

struct Term::Node {
  Kind kind;
  Sort sort;                              // FreeVar / BoundVar
  std::string name;                       // FreeVar
  int index = 0;                          // BoundVar
  std::optional<QuiverMorphism> morphism; // Restr
  std::optional<Term> argument;           // Restr
};

Term::Kind Term::kind() const { return node_->kind; }

const Sort& Term::sort() const {
  if (node_->kind == Kind::Restr) return node_->morphism->domain();
  return node_->sort;
}

const std::string& Term::name() const { return node_->name; }
int Term::index() const { return node_->index; }
const QuiverMorphism& Term::morphism() const { return *node_->morphism; }
const Term& Term::argument() const { return *node_->argument; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::FreeVar:
      return a.name() == b.name() && a.sort() == b.sort();
    case Term::Kind::BoundVar:
      return a.index() == b.index() && a.sort() == b.sort();
    case Term::Kind::Restr:
      return a.morphism() == b.morphism() && a.argument() == b.argument();
  }
  return false;
}

Term var(std::string name, Sort sort) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::FreeVar;
  n->name = std::move(name);
  n->sort = std::move(sort);
  return Term(std::move(n));
}

Term bound_var(int index, Sort sort) {
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::BoundVar;
  n->index = index;
  n->sort = std::move(sort);
  return Term(std::move(n));
}

Term restr(QuiverMorphism m, Term argument) {
  if (argument.sort() != m.codomain())
    throw Error("restr: argument sort " + argument.sort().to_string() +
                " is not the codomain of the morphism " + m.to_string());
  auto n = std::make_shared<Term::Node>();
  n->kind = Term::Kind::Restr;
  n->morphism = std::move(m);
  n->argument = std::move(argument);
  return Term(std::move(n));
}

// ---- formula nodes -----------------------------------------------------

struct Formula::Node {
  Kind kind;
  std::optional<Term> lhs, rhs;       // Eq; lhs doubles as Commute's term
  std::vector<Formula> children;      // And/Or; Implies/Iff use 2, Not and quantifiers 1
  Sort binder_sort;
  std::string binder_hint;
};

class FormulaBuilderAccess {
 public:
  static Formula make(std::shared_ptr<const Formula::Node> n) { return Formula(std::move(n)); }
  static const Formula::Node& node(const Formula& f) { return *f.node_; }
};

namespace {
Formula mk(Formula::Node n) {
  return FormulaBuilderAccess::make(std::make_shared<Formula::Node>(std::move(n)));
}
const Formula::Node& nd(const Formula& f) { return FormulaBuilderAccess::node(f); }
}  // namespace

Formula::Kind Formula::kind() const { return node_->kind; }
const Term& Formula::lhs() const { return *node_->lhs; }
const Term& Formula::rhs() const { return *node_->rhs; }
const Term& Formula::term() const { return *node_->lhs; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
const Formula& Formula::child(int i) const { return node_->children[static_cast<std::size_t>(i)]; }
const Sort& Formula::binder_sort() const { return node_->binder_sort; }
const std::string& Formula::binder_hint() const { return node_->binder_hint; }

bool Formula::is_quantifier() const {
  return kind() == Kind::Forall || kind() == Kind::Exists || kind() == Kind::ExistsUnique;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Eq:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Formula::Kind::Commute:
      return a.term() == b.term();
    default:
      break;
  }
  if (a.is_quantifier() && a.binder_sort() != b.binder_sort()) return false;
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!(a.children()[i] == b.children()[i])) return false;
  return true;
}

Formula eq(Term l, Term r) {
  if (l.sort() != r.sort())
    throw Error("eq: operands have different sorts " + l.sort().to_string() + " vs " +
                r.sort().to_string());
  Formula::Node n;
  n.kind = Formula::Kind::Eq;
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return mk(std::move(n));
}

Formula commute(Term t) {
  Formula::Node n;
  n.kind = Formula::Kind::Commute;
  n.lhs = std::move(t);
  return mk(std::move(n));
}

Formula land(std::vector<Formula> children) {
  if (children.size() == 1) return children[0];
  Formula::Node n;
  n.kind = Formula::Kind::And;
  n.children = std::move(children);
  return mk(std::move(n));
}

Formula lor(std::vector<Formula> children) {
  if (children.size() == 1) return children[0];
  Formula::Node n;
  n.kind = Formula::Kind::Or;
  n.children = std::move(children);
  return mk(std::move(n));
}

Formula implies(Formula a, Formula b) {
  Formula::Node n;
  n.kind = Formula::Kind::Implies;
  n.children = {std::move(a), std::move(b)};
  return mk(std::move(n));
}

Formula iff(Formula a, Formula b) {
  Formula::Node n;
  n.kind = Formula::Kind::Iff;
  n.children = {std::move(a), std::move(b)};
  return mk(std::move(n));
}

Formula lnot(Formula a) {
  Formula::Node n;
  n.kind = Formula::Kind::Not;
  n.children = {std::move(a)};
  return mk(std::move(n));
}

Formula truth() { return land({}); }
Formula falsity() { return lor({}); }

namespace {

// Replaces the free variable (name, sort) by BoundVar(depth).
Term abstract_term(const Term& t, const std::string& name, const Sort& sort, int depth) {
  switch (t.kind()) {
    case Term::Kind::FreeVar:
      if (t.name() == name && t.sort() == sort) return bound_var(depth, sort);
      return t;
    case Term::Kind::BoundVar:
      return t;
    case Term::Kind::Restr:
      return restr(t.morphism(), abstract_term(t.argument(), name, sort, depth));
  }
  throw Error("unreachable");
}

Formula abstract_formula(const Formula& f, const std::string& name, const Sort& sort, int depth) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return eq(abstract_term(f.lhs(), name, sort, depth),
                abstract_term(f.rhs(), name, sort, depth));
    case Formula::Kind::Commute:
      return commute(abstract_term(f.term(), name, sort, depth));
    default: {
      Formula::Node n;
      n.kind = f.kind();
      n.binder_sort = f.binder_sort();
      n.binder_hint = f.binder_hint();
      int inner = f.is_quantifier() ? depth + 1 : depth;
      for (const Formula& c : f.children())
        n.children.push_back(abstract_formula(c, name, sort, inner));
      return mk(std::move(n));
    }
  }
}

Formula quantifier(Formula::Kind kind, const std::string& name, Sort sort, const Formula& body) {
  Formula::Node n;
  n.kind = kind;
  n.binder_sort = std::move(sort);
  n.binder_hint = name;
  n.children = {abstract_formula(body, name, n.binder_sort, 0)};
  return mk(std::move(n));
}

std::string gensym() {
  static std::atomic<unsigned> counter{0};
  return "_g" + std::to_string(counter.fetch_add(1));
}

}  // namespace

Formula forall(const std::string& name, Sort sort, Formula body) {
  return quantifier(Formula::Kind::Forall, name, std::move(sort), body);
}
Formula exists(const std::string& name, Sort sort, Formula body) {
  return quantifier(Formula::Kind::Exists, name, std::move(sort), body);
}
Formula exists_unique(const std::string& name, Sort sort, Formula body) {
  return quantifier(Formula::Kind::ExistsUnique, name, std::move(sort), body);
}

namespace {

void collect_free_term(const Term& t, std::vector<std::pair<std::string, Sort>>& out) {
  switch (t.kind()) {
    case Term::Kind::FreeVar: {
      for (const auto& [n, s] : out)
        if (n == t.name() && s == t.sort()) return;
      out.emplace_back(t.name(), t.sort());
      return;
    }
    case Term::Kind::BoundVar:
      return;
    case Term::Kind::Restr:
      collect_free_term(t.argument(), out);
      return;
  }
}

void collect_free(const Formula& f, std::vector<std::pair<std::string, Sort>>& out) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      collect_free_term(f.lhs(), out);
      collect_free_term(f.rhs(), out);
      return;
    case Formula::Kind::Commute:
      collect_free_term(f.term(), out);
      return;
    default:
      for (const Formula& c : f.children()) collect_free(c, out);
      return;
  }
}

}  // namespace

std::vector<std::pair<std::string, Sort>> free_variables(const Formula& f) {
  std::vector<std::pair<std::string, Sort>> out;
  collect_free(f, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

namespace {

Term subst_term(const Term& t, const std::string& name, const Sort& sort, const Term& repl) {
  switch (t.kind()) {
    case Term::Kind::FreeVar:
      if (t.name() == name && t.sort() == sort) return repl;
      return t;
    case Term::Kind::BoundVar:
      return t;
    case Term::Kind::Restr:
      return restr(t.morphism(), subst_term(t.argument(), name, sort, repl));
  }
  throw Error("unreachable");
}

}  // namespace

Formula substitute(const Formula& f, const std::string& name, const Sort& sort, const Term& t) {
  if (t.sort() != sort)
    throw Error("substitute: term sort " + t.sort().to_string() +
                " differs from the variable sort " + sort.to_string());
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return eq(subst_term(f.lhs(), name, sort, t), subst_term(f.rhs(), name, sort, t));
    case Formula::Kind::Commute:
      return commute(subst_term(f.term(), name, sort, t));
    default: {
      Formula::Node n;
      n.kind = f.kind();
      n.binder_sort = f.binder_sort();
      n.binder_hint = f.binder_hint();
      for (const Formula& c : f.children()) n.children.push_back(substitute(c, name, sort, t));
      return mk(std::move(n));
    }
  }
}

// ---- duality -----------------------------------------------------------

Term dualize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::FreeVar:
      return var(t.name(), dual(t.sort()).quiver);
    case Term::Kind::BoundVar:
      return bound_var(t.index(), dual(t.sort()).quiver);
    case Term::Kind::Restr:
      return restr(dual_morphism(t.morphism()), dualize(t.argument()));
  }
  throw Error("unreachable");
}

Formula dualize(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return eq(dualize(f.lhs()), dualize(f.rhs()));
    case Formula::Kind::Commute:
      return commute(dualize(f.term()));
    default: {
      Formula::Node n;
      n.kind = f.kind();
      if (f.is_quantifier()) {
        n.binder_sort = dual(f.binder_sort()).quiver;
        n.binder_hint = f.binder_hint();
      }
      for (const Formula& c : f.children()) n.children.push_back(dualize(c));
      return mk(std::move(n));
    }
  }
}

// ---- well-formedness ---------------------------------------------------

namespace {

bool sort_ok(const Sort& s, SignatureKind sig) {
  return sig == SignatureKind::SigmaRing || is_acyclic(s);
}

bool check_term(const Term& t, SignatureKind sig, const std::vector<Sort>& binders,
                std::string& why) {
  switch (t.kind()) {
    case Term::Kind::FreeVar:
      if (!sort_ok(t.sort(), sig)) {
        why = "variable " + t.name() + " has cyclic sort " + t.sort().to_string();
        return false;
      }
      return true;
    case Term::Kind::BoundVar: {
      int i = t.index();
      if (i < 0 || i >= static_cast<int>(binders.size())) {
        why = "dangling bound variable index " + std::to_string(i);
        return false;
      }
      if (binders[binders.size() - 1 - static_cast<std::size_t>(i)] != t.sort()) {
        why = "bound variable sort differs from its binder";
        return false;
      }
      if (!sort_ok(t.sort(), sig)) {
        why = "bound variable has cyclic sort " + t.sort().to_string();
        return false;
      }
      return true;
    }
    case Term::Kind::Restr: {
      const QuiverMorphism& m = t.morphism();
      if (sig == SignatureKind::Sigma) {
        if (!is_acyclic(m.domain()) || !is_acyclic(m.codomain())) {
          why = "restr over a cyclic quiver: " + m.to_string();
          return false;
        }
        if (!m.is_embedding()) {
          why = "restr over a non-embedding: " + m.to_string();
          return false;
        }
      }
      return check_term(t.argument(), sig, binders, why);
    }
  }
  why = "unreachable";
  return false;
}

bool check_formula(const Formula& f, SignatureKind sig, std::vector<Sort>& binders,
                   std::string& why) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return check_term(f.lhs(), sig, binders, why) && check_term(f.rhs(), sig, binders, why);
    case Formula::Kind::Commute:
      if (!sort_ok(f.term().sort(), sig)) {
        why = "commute over cyclic sort " + f.term().sort().to_string();
        return false;
      }
      return check_term(f.term(), sig, binders, why);
    default: {
      if (f.is_quantifier()) {
        if (!sort_ok(f.binder_sort(), sig)) {
          why = "quantifier over cyclic sort " + f.binder_sort().to_string();
          return false;
        }
        binders.push_back(f.binder_sort());
        bool ok = check_formula(f.child(0), sig, binders, why);
        binders.pop_back();
        return ok;
      }
      for (const Formula& c : f.children())
        if (!check_formula(c, sig, binders, why)) return false;
      return true;
    }
  }
}

}  // namespace

WellFormedness well_formed(const Formula& f, SignatureKind sig) {
  std::vector<Sort> binders;
  std::string why;
  if (check_formula(f, sig, binders, why)) return {true, ""};
  return {false, why};
}

// ---- printing ----------------------------------------------------------

namespace {

std::string print_morphism(const QuiverMorphism& m) { return m.to_string(); }

std::string print_term(const Term& t, int depth) {
  switch (t.kind()) {
    case Term::Kind::FreeVar:
      return t.name();
    case Term::Kind::BoundVar:
      return "x" + std::to_string(depth - 1 - t.index());
    case Term::Kind::Restr:
      return "restr[" + print_morphism(t.morphism()) + "](" + print_term(t.argument(), depth) + ")";
  }
  throw Error("unreachable");
}

bool is_atom(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
    case Formula::Kind::Commute:
      return true;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return f.children().empty();
    default:
      return false;
  }
}

std::string print_formula(const Formula& f, int depth) {
  auto wrap = [&](const Formula& c) {
    std::string s = print_formula(c, depth);
    return is_atom(c) ? s : "(" + s + ")";
  };
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return print_term(f.lhs(), depth) + " ~ " + print_term(f.rhs(), depth);
    case Formula::Kind::Commute:
      return "commute(" + print_term(f.term(), depth) + ")";
    case Formula::Kind::And: {
      if (f.children().empty()) return "true";
      std::string out;
      for (std::size_t i = 0; i < f.children().size(); ++i)
        out += (i ? " /\\ " : "") + wrap(f.children()[i]);
      return out;
    }
    case Formula::Kind::Or: {
      if (f.children().empty()) return "false";
      std::string out;
      for (std::size_t i = 0; i < f.children().size(); ++i)
        out += (i ? " \\/ " : "") + wrap(f.children()[i]);
      return out;
    }
    case Formula::Kind::Implies:
      return wrap(f.child(0)) + " -> " + wrap(f.child(1));
    case Formula::Kind::Iff:
      return wrap(f.child(0)) + " <-> " + wrap(f.child(1));
    case Formula::Kind::Not:
      return "!" + wrap(f.child(0));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::ExistsUnique: {
      const char* kw = f.kind() == Formula::Kind::Forall   ? "forall"
                       : f.kind() == Formula::Kind::Exists ? "exists"
                                                           : "existsu";
      return std::string(kw) + " x" + std::to_string(depth) + " : " + f.binder_sort().to_string() +
             " , (" + print_formula(f.child(0), depth + 1) + ")";
    }
  }
  throw Error("unreachable");
}

}  // namespace

std::string to_string(const Term& t) { return print_term(t, 0); }
std::string to_string(const Formula& f) { return print_formula(f, 0); }

// ---- fixed quivers of the axioms ----------------------------------------

namespace {

Quiver dot_q() { return path_quiver(0); }
Quiver map_q() { return path_quiver(1); }
Quiver two_dots_q() { return make_quiver(2, {}).quiver; }
Quiver parallel_pair_q() { return make_quiver(2, {{0, 1}, {0, 1}}).quiver; }
// composition triangle: arrows 0=(0,1) first leg, 1=(0,2) composite, 2=(1,2) second leg
Quiver triangle_q() { return make_quiver(3, {{0, 1}, {0, 2}, {1, 2}}).quiver; }

QuiverMorphism parallel_arrow(int which) {
  return QuiverMorphism::make(map_q(), parallel_pair_q(), {0, 1}, {which});
}

}  // namespace

// ---- schema builders ----------------------------------------------------

Formula cospan_formula(const QuiverMorphism& inj1, const QuiverMorphism& inj2, const Term& x1,
                       const Term& x2, const Term& xp) {
  return land({eq(restr(inj1, xp), x1), eq(restr(inj2, xp), x2)});
}

Formula comp_formula(const Term& x, const Term& y, const Term& z) {
  Quiver tri = triangle_q();
  std::string w = gensym();
  Term wv = var(w, tri);
  Formula body = land({eq(restr(arrow_morphism(tri, 0), wv), x),
                       eq(restr(arrow_morphism(tri, 2), wv), y),
                       eq(restr(arrow_morphism(tri, 1), wv), z), commute(wv)});
  return exists(w, tri, body);
}

Formula id_formula(const Term& x, const Term& y) {
  Quiver pq1 = map_q();
  std::string z = gensym(), w = gensym();
  Term zv = var(z, pq1), wv = var(w, pq1);
  Formula body = land({implies(comp_formula(y, zv, wv), eqpath_formula(zv, wv)),
                       implies(comp_formula(zv, y, wv), eqpath_formula(zv, wv))});
  return land({eq(restr(vertex_morphism(pq1, 0), y), x), forall(z, pq1, forall(w, pq1, body))});
}

Formula eqpath_formula(const Term& x1, const Term& x2) {
  const Sort& s1 = x1.sort();
  const Sort& s2 = x2.sort();
  int k1 = s1.arrow_count();
  int k2 = s2.arrow_count();
  if (s1 != path_quiver(k1) || s2 != path_quiver(k2))
    throw Error("eqpath_formula: arguments must have path-quiver sorts");
  if (k1 == 0 && k2 == 0) return eq(x1, x2);
  if (k1 == 0) {
    std::string z = gensym();
    Term zv = var(z, map_q());
    return exists(z, map_q(), land({id_formula(x1, zv), eqpath_formula(zv, x2)}));
  }
  if (k2 == 0) return eqpath_formula(x2, x1);
  PushoutResult po = pushout(st_embedding(k1), st_embedding(k2));
  std::string x = gensym();
  Term xv = var(x, po.pushout);
  return land({eq(restr(st_embedding(k1), x1), restr(st_embedding(k2), x2)),
               forall(x, po.pushout,
                      implies(cospan_formula(po.inj1, po.inj2, x1, x2, xv), commute(xv)))});
}

Formula empty_eu() {
  Quiver empty;
  Term x = var("x", empty);
  return exists_unique("x", empty, eq(x, x));
}

Formula comp_e() {
  Quiver pq1 = map_q();
  Term x = var("x", pq1), y = var("y", pq1), z = var("z", pq1);
  return forall("x", pq1, forall("y", pq1, exists("z", pq1, comp_formula(x, y, z))));
}

Formula id_e() {
  Term x = var("x", dot_q()), y = var("y", map_q());
  return forall("x", dot_q(), exists("y", map_q(), id_formula(x, y)));
}

Formula com_eq() {
  Quiver pp = parallel_pair_q();
  Term x = var("x", pp);
  return forall("x", pp,
                implies(commute(x), eq(restr(parallel_arrow(0), x), restr(parallel_arrow(1), x))));
}

Formula restr_comp(const QuiverMorphism& m, const QuiverMorphism& m_prime) {
  if (m.codomain() != m_prime.domain())
    throw Error("restr_comp: maps do not compose");
  const Quiver& qpp = m_prime.codomain();
  Term x = var("x''", qpp);
  return forall("x''", qpp,
                eq(restr(m, restr(m_prime, x)), restr(compose_morphisms(m_prime, m), x)));
}

Formula pushout_eu(const QuiverMorphism& m1, const QuiverMorphism& m2, const QuiverMorphism& inj1,
                   const QuiverMorphism& inj2) {
  if (!is_pushout_configuration(m1, m2, inj1, inj2))
    throw Error("pushout_eu: not a pushout configuration");
  const Quiver& q1 = m1.codomain();
  const Quiver& q2 = m2.codomain();
  const Quiver& qp = inj1.codomain();
  Term x1 = var("x1", q1), x2 = var("x2", q2), xp = var("x'", qp);
  Formula inner = exists_unique("x'", qp, cospan_formula(inj1, inj2, x1, x2, xp));
  return forall("x1", q1,
                forall("x2", q2, implies(eq(restr(m1, x1), restr(m2, x2)), inner)));
}

Formula eqpath_refl(int k) {
  Term x = var("x", path_quiver(k));
  return forall("x", path_quiver(k), eqpath_formula(x, x));
}

Formula eqpath_sym(int k1, int k2) {
  Term x1 = var("x1", path_quiver(k1)), x2 = var("x2", path_quiver(k2));
  return forall("x1", path_quiver(k1),
                forall("x2", path_quiver(k2),
                       implies(eqpath_formula(x1, x2), eqpath_formula(x2, x1))));
}

Formula eqpath_trans(int k1, int k2, int k3) {
  Term x1 = var("x1", path_quiver(k1)), x2 = var("x2", path_quiver(k2)),
       x3 = var("x3", path_quiver(k3));
  Formula body = implies(land({eqpath_formula(x1, x2), eqpath_formula(x2, x3)}),
                         eqpath_formula(x1, x3));
  return forall("x1", path_quiver(k1),
                forall("x2", path_quiver(k2), forall("x3", path_quiver(k3), body)));
}

Formula eqpath_concat(int k1, int k2, int k1p, int k2p) {
  Quiver p1 = path_quiver(k1), p2 = path_quiver(k2);
  Quiver p1p = path_quiver(k1p), p2p = path_quiver(k2p);
  Term x1 = var("x1", p1), x2 = var("x2", p2), x1p = var("x1'", p1p), x2p = var("x2'", p2p);
  Term x1pp = var("x1''", path_quiver(k1 + k1p)), x2pp = var("x2''", path_quiver(k2 + k2p));
  Formula prem = land({eqpath_formula(x1, x2), eqpath_formula(x1p, x2p),
                       eq(restr(tp_embedding(0, k1), x1), restr(sp_embedding(0, k1p), x1p))});
  Formula gluing =
      land({cospan_formula(sp_embedding(k1, k1 + k1p), tp_embedding(k1p, k1 + k1p), x1, x1p, x1pp),
            cospan_formula(sp_embedding(k2, k2 + k2p), tp_embedding(k2p, k2 + k2p), x2, x2p, x2pp)});
  Formula inner = forall("x1''", path_quiver(k1 + k1p),
                         forall("x2''", path_quiver(k2 + k2p),
                                implies(gluing, eqpath_formula(x1pp, x2pp))));
  Formula body = implies(prem, inner);
  return forall("x1", p1,
                forall("x2", p2, forall("x1'", p1p, forall("x2'", p2p, body))));
}

Formula pathcom_formula(const Quiver& q, int max_path_len) {
  std::vector<Path> paths;
  if (max_path_len < 0) {
    paths = enumerate_paths(q);  // throws on cyclic input
  } else {
    paths = bounded_paths(q, max_path_len);
  }
  Term x = var("x", q);
  SameExtremityPairs bp = same_extremity_pairs(paths);
  std::vector<Formula> conj;
  for (const auto& [i, j] : bp.pairs) {
    const Path& pa = paths[static_cast<std::size_t>(i)];
    const Path& pb = paths[static_cast<std::size_t>(j)];
    conj.push_back(eqpath_formula(restr(path_to_morphism(q, pa), x),
                                  restr(path_to_morphism(q, pb), x)));
  }
  return forall("x", q, iff(land(std::move(conj)), commute(x)));
}

// ---- abelian-side builders ----------------------------------------------

Formula mono_formula(const Term& x) {
  // two parallel test arrows, their composites with x, and the direct arrow:
  // arrows 0,1 = (0,1) tests, 2 = (0,2) composite, 3 = (1,2) the map itself
  Quiver qm = make_quiver(3, {{0, 1}, {0, 1}, {0, 2}, {1, 2}}).quiver;
  std::string y = gensym();
  Term yv = var(y, qm);
  QuiverMorphism tests = QuiverMorphism::make(parallel_pair_q(), qm, {0, 1}, {0, 1});
  Formula prem = land({eq(restr(arrow_morphism(qm, 3), yv), x),
                       commute(restr(restrict_quiver(qm, {0, 2, 3}).embedding, yv)),
                       commute(restr(restrict_quiver(qm, {1, 2, 3}).embedding, yv))});
  return forall(y, qm, implies(prem, commute(restr(tests, yv))));
}

Formula epi_formula(const Term& x) {
  std::string u = gensym();
  Formula primal = mono_formula(var(u, map_q()));
  Formula dualized = dualize(primal);
  return substitute(dualized, u, dual(map_q()).quiver, x);
}

Formula cone_builder(const Quiver& q, const Term& x, const Term& y) {
  ConeResult c = cone(q);
  if (x.sort() != q || y.sort() != c.quiver)
    throw Error("cone_builder: argument sorts must be Q and cone(Q)");
  std::vector<Formula> conj{eq(restr(c.embedding, y), x)};
  for (int a = 0; a < q.arrow_count(); ++a)
    conj.push_back(commute(restr(cone_morphism(arrow_morphism(q, a)), y)));
  return land(std::move(conj));
}

Formula limit_formula(const Quiver& q, const Term& x, const Term& y) {
  ConeResult c = cone(q);
  ConeResult cc = cone(c.quiver);
  std::string z = gensym(), w = gensym();
  Term zv = var(z, c.quiver), wv = var(w, cc.quiver);
  Formula factor = land({cone_builder(c.quiver, y, wv),
                         eq(restr(cone_morphism(c.embedding), wv), zv)});
  Formula univ = forall(z, c.quiver,
                        implies(cone_builder(q, x, zv), exists_unique(w, cc.quiver, factor)));
  return land({cone_builder(q, x, y), univ});
}

Quiver cocone_quiver(const Quiver& q) { return dual(cone(dual(q).quiver).quiver).quiver; }

Formula colimit_formula(const Quiver& q, const Term& x, const Term& y) {
  Quiver qd = dual(q).quiver;
  std::string u = gensym(), v = gensym();
  Formula primal = limit_formula(qd, var(u, qd), var(v, cone(qd).quiver));
  Formula dualized = dualize(primal);
  dualized = substitute(dualized, u, dual(qd).quiver, x);
  return substitute(dualized, v, dual(cone(qd).quiver).quiver, y);
}

Formula zero_formula(const Term& x) {
  Quiver empty;
  std::string y = gensym();
  Term yv = var(y, empty);
  return forall(y, empty, land({limit_formula(empty, yv, x), colimit_formula(empty, yv, x)}));
}

Formula ker_formula(const Term& x, const Term& y) {
  // cospan: 0 = domain of the map, 1 = zero corner, 2 = shared codomain
  Quiver cospan = make_quiver(3, {{0, 2}, {1, 2}}).quiver;
  ConeResult c = cone(cospan);
  // cone arrows: 0=(0,2) the map, 1=(1,2), 2=(3,0) kernel leg, 3=(3,1), 4=(3,2)
  std::string z = gensym();
  Term zv = var(z, c.quiver);
  Formula body = land({eq(restr(arrow_morphism(c.quiver, 0), zv), x),
                       eq(restr(arrow_morphism(c.quiver, 2), zv), y),
                       zero_formula(restr(vertex_morphism(c.quiver, 1), zv)),
                       limit_formula(cospan, restr(c.embedding, zv), zv)});
  return exists(z, c.quiver, body);
}

Formula coker_formula(const Term& x, const Term& y) {
  std::string u = gensym(), v = gensym();
  Formula primal = ker_formula(var(u, map_q()), var(v, map_q()));
  Formula dualized = dualize(primal);
  dualized = substitute(dualized, u, dual(map_q()).quiver, x);
  return substitute(dualized, v, dual(map_q()).quiver, y);
}

Formula zero_e() {
  Term x = var("x", dot_q());
  return exists("x", dot_q(), zero_formula(x));
}

Formula product_e() {
  Quiver td = two_dots_q();
  Quiver ct = cone(td).quiver;
  Term x = var("x", td), y = var("y", ct);
  return forall("x", td, exists("y", ct, limit_formula(td, x, y)));
}

Formula coproduct_e() { return dualize(product_e()); }

Formula ker_e() {
  Term x = var("x", map_q()), y = var("y", map_q());
  return forall("x", map_q(), exists("y", map_q(), ker_formula(x, y)));
}

Formula coker_e() { return dualize(ker_e()); }

Formula mono_normal() {
  Term x = var("x", map_q()), y = var("y", map_q());
  return forall("x", map_q(),
                implies(mono_formula(x), exists("y", map_q(), ker_formula(y, x))));
}

Formula epi_normal() { return dualize(mono_normal()); }

// ---- commerge ------------------------------------------------------------

Formula commerge_formula(const Quiver& q, const std::vector<QuiverMorphism>& premises) {
  std::vector<Formula> conj;
  Term x = var("x", q);
  for (const QuiverMorphism& m : premises) {
    if (m.codomain() != q)
      throw Error("commerge_formula: premise codomain differs from the quiver");
    conj.push_back(commute(restr(m, x)));
  }
  return forall("x", q, implies(land(std::move(conj)), commute(x)));
}

Formula commerge_with_id(const MonoidPresentation& p) {
  AcyclicLayered enc = acyclic_layered_quiver(p);
  const Quiver& qk = enc.quiver;
  Term x = var("x", qk);
  std::vector<Formula> conj;
  for (int i = 0; i < enc.k; ++i) {
    for (int j = i + 1; j < enc.k; ++j) {
      int e = enc.e_arrows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      conj.push_back(id_formula(restr(vertex_morphism(qk, i), x),
                                restr(arrow_morphism(qk, e), x)));
    }
  }
  for (const QuiverMorphism& m : enc.premises) conj.push_back(commute(restr(m, x)));
  return forall("x", qk, implies(land(std::move(conj)), commute(x)));
}

// ---- theory generation -----------------------------------------------

namespace {

std::string morphism_param(const QuiverMorphism& m) { return "[" + m.to_string() + "]"; }

}  // namespace

void for_each_tcat_axiom(const Budget& budget, SignatureKind sig,
                         const std::function<void(const SchemaInstance&)>& fn) {
  const bool sigma = sig == SignatureKind::Sigma;
  fn({"EmptyEU", "", empty_eu()});
  fn({"CompE", "", comp_e()});
  fn({"IdE", "", id_e()});
  fn({"ComEq", "", com_eq()});

  std::vector<Quiver> quivers = enumerate_quivers(budget.max_vertices, budget.max_arrows, sigma);

  // RestrComp over composable pairs within budget
  for (const Quiver& qmid : quivers) {
    std::vector<QuiverMorphism> in, out;
    for (const Quiver& qsrc : quivers)
      for (QuiverMorphism& m : enumerate_morphisms(qsrc, qmid, sigma)) in.push_back(std::move(m));
    for (const Quiver& qdst : quivers)
      for (QuiverMorphism& m : enumerate_morphisms(qmid, qdst, sigma)) out.push_back(std::move(m));
    for (const QuiverMorphism& m : in)
      for (const QuiverMorphism& mp : out)
        fn({"RestrComp", morphism_param(m) + morphism_param(mp), restr_comp(m, mp)});
  }

  // PushoutEU over canonical pushouts of embedding pairs that stay in budget
  for (const Quiver& q : quivers) {
    std::vector<QuiverMorphism> from_q;
    for (const Quiver& q1 : quivers)
      for (QuiverMorphism& m : enumerate_morphisms(q, q1, true)) from_q.push_back(std::move(m));
    for (const QuiverMorphism& m1 : from_q) {
      for (const QuiverMorphism& m2 : from_q) {
        PushoutResult po = pushout(m1, m2);
        if (po.pushout.vertex_count() > budget.max_vertices ||
            po.pushout.arrow_count() > budget.max_arrows)
          continue;
        fn({"PushoutEU", morphism_param(m1) + morphism_param(m2),
            pushout_eu(m1, m2, po.inj1, po.inj2)});
      }
    }
  }

  const int L = budget.max_path_len;
  for (int k = 0; k <= L; ++k) fn({"EqPathRefl", std::to_string(k), eqpath_refl(k)});
  for (int k1 = 0; k1 <= L; ++k1)
    for (int k2 = 0; k2 <= L; ++k2)
      fn({"EqPathSym", std::to_string(k1) + "," + std::to_string(k2), eqpath_sym(k1, k2)});
  for (int k1 = 0; k1 <= L; ++k1)
    for (int k2 = 0; k2 <= L; ++k2)
      for (int k3 = 0; k3 <= L; ++k3)
        fn({"EqPathTrans",
            std::to_string(k1) + "," + std::to_string(k2) + "," + std::to_string(k3),
            eqpath_trans(k1, k2, k3)});
  for (int k1 = 0; k1 <= L; ++k1)
    for (int k2 = 0; k2 <= L; ++k2)
      for (int k1p = 0; k1p + k1 <= L; ++k1p)
        for (int k2p = 0; k2p + k2 <= L; ++k2p)
          fn({"EqPathConcat",
              std::to_string(k1) + "," + std::to_string(k2) + "," + std::to_string(k1p) + "," +
                  std::to_string(k2p),
              eqpath_concat(k1, k2, k1p, k2p)});

  for (const Quiver& q : quivers)
    fn({"PathCom", q.to_string(), pathcom_formula(q, sigma ? -1 : budget.max_path_len)});
}

Theory tcat_axioms(const Budget& budget, SignatureKind sig) {
  Theory t;
  t.name = sig == SignatureKind::Sigma ? "tcat" : "tcat_ring";
  for_each_tcat_axiom(budget, sig, [&](const SchemaInstance& i) { t.formulas.push_back(i); });
  return t;
}

std::vector<SchemaInstance> tab_extension_axioms() {
  return {{"ZeroE", "", zero_e()},         {"ProductE", "", product_e()},
          {"CoproductE", "", coproduct_e()}, {"KerE", "", ker_e()},
          {"CokerE", "", coker_e()},       {"MonoNormal", "", mono_normal()},
          {"EpiNormal", "", epi_normal()}};
}

void for_each_tab_axiom(const Budget& budget, SignatureKind sig,
                        const std::function<void(const SchemaInstance&)>& fn) {
  for_each_tcat_axiom(budget, sig, fn);
  for (const SchemaInstance& i : tab_extension_axioms()) fn(i);
}

Theory tab_axioms(const Budget& budget, SignatureKind sig) {
  Theory t;
  t.name = sig == SignatureKind::Sigma ? "tab" : "tab_ring";
  for_each_tab_axiom(budget, sig, [&](const SchemaInstance& i) { t.formulas.push_back(i); });
  return t;
}

}  // namespace chase
