#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chase/models.hpp"
#include "chase/paths.hpp"
#include "chase/quiver.hpp"

namespace chase {

enum class InstanceSignature { Sigma, SigmaRing };

// A commerge question: do the premise sub-diagram commutativities force the
// whole diagram to commute? Sigma instances need an acyclic quiver and
// embedding premises.
struct CommergeInstance {
  Quiver quiver;
  std::vector<QuiverMorphism> premises;
  InstanceSignature signature = InstanceSignature::Sigma;
};

// Throws on codomain mismatch, and for Sigma on a cyclic quiver or a
// non-embedding premise.
void validate_instance(const CommergeInstance& inst);

struct Verdict {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<std::pair<Path, Path>> witness;  // Invalid only
  int bound = 0;                                 // Unknown only

  // VALID | INVALID p=[..] q=[..] | UNKNOWN bound=n
  std::string to_line() const;
};

// The complete decision procedure for Sigma instances: closes the pushed
// forward total relations of the premises and checks thinness.
Verdict decide_commerge(const CommergeInstance& inst);

// Closure restricted to paths of length <= max_len. VALID only when the
// bound provably covers the full path set; INVALID only when backed by an
// explicit countermodel; otherwise UNKNOWN carrying the bound.
Verdict bounded_commerge(const CommergeInstance& inst, int max_len,
                         std::uint64_t cap = 200000);

struct Countermodel {
  int category_index = 0;  // into the list passed to the search
  Diagram diagram;
};

// Searches the given finite categories for a diagram satisfying every
// premise but not commuting. Throws ResourceError past the cap.
std::optional<Countermodel> semantic_crosscheck(const CommergeInstance& inst,
                                                const std::vector<FiniteCategory>& categories,
                                                std::uint64_t cap);

}  // namespace chase
