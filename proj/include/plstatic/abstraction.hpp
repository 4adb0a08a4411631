#pragma once

#include "plstatic/spec.hpp"

namespace plstatic {

/// Abstracts a term literal into the type domain: variables become var,
/// `[]` becomes the empty list, atoms become exact types, ground list
/// literals become tuples, other compounds abstract structurally.
Spec abstractTerm(const Term& term);
Spec abstractTerm(const TermPtr& term);

/// Membership of a term in the concretization of a spec. `spec` must be free
/// of union/compatible markers. Recursive user types unfold on demand.
bool inhabits(const Term& term, const Spec& spec, const TypeDefs& defs);
bool inhabits(const TermPtr& term, const Spec& spec, const TypeDefs& defs);

}  // namespace plstatic
