#pragma once

#include "plstatic/spec.hpp"

namespace plstatic {

/// Maximum number of alternatives in a normalized one_of; beyond this the
/// union is widened to its least common ancestor in the built-in type lattice.
inline constexpr int kWidenCap = 8;

/// Unfold budget when intersecting recursive user types.
inline constexpr int kUserUnfoldBudget = 4;

/// How Prolog variables behave during an intersection:
///  - Strict:  a variable intersects only var/any (the pure lattice; used to
///             check callee preconditions, which must hold at call time).
///  - Unify:   var on either side yields the other (abstract unification;
///             head/precondition initialization, =/2, structural edges).
///  - Bind:    left side is the current domain, right side a postcondition
///             conclusion: an unbound left may be bound to the conclusion,
///             while a bound left cannot become unbound again.
///  - Narrow:  like Strict but keeps `var` as an alternative wherever the
///             left side admits it (callee preconditions never render a
///             variable non-variable).
enum class MeetPolicy { Strict, Unify, Bind, Narrow };

/// True iff every term inhabiting `a` inhabits `b` (sound, not complete).
/// Inputs must be free of union/compatible markers.
bool subtype(const Spec& a, const Spec& b, const TypeDefs& defs);

/// Policy-aware intersection. Returns an Error spec when no common
/// inhabitant exists. Result is normalized.
Spec meet(const Spec& a, const Spec& b, const TypeDefs& defs, MeetPolicy policy);

/// Greatest lower bound (meet with the Strict policy).
Spec glb(const Spec& a, const Spec& b, const TypeDefs& defs);

/// Least upper bound; widens to a lattice ancestor when the union would
/// exceed kWidenCap alternatives.
Spec lub(const Spec& a, const Spec& b, const TypeDefs& defs);

/// Canonical form: flattens one_of/and, prunes subsumed alternatives,
/// evaluates and-conjunctions, reassembles '.'-chains into tuples, orders
/// alternatives structurally. Idempotent. Throws UndefinedSpecError for
/// unknown user types.
Spec normalize(const Spec& s, const TypeDefs& defs);

/// True when `s` admits an unbound variable (var, any, a one_of with such an
/// alternative, ...).
bool admitsVar(const Spec& s);

/// Least node of the built-in lattice above `s` (used for widening).
Spec widenToLatticeNode(const Spec& s, const TypeDefs& defs);

/// Relaxation applied to head-literal abstractions when generating initial
/// pre/postconditions: variables become any, exact atoms widen to atom.
Spec relaxLiteral(const Spec& s);

/// Widening applied when clause-final domains become postcondition
/// conclusions: exact atoms widen to atom and list-shaped domains
/// (empty list, tuples, '.'-chains) widen to list types.
Spec conclusionSpec(const Spec& s, const TypeDefs& defs);

/// Exact atoms widen to atom; used when union type-variable contributions
/// are collected.
Spec widenExacts(const Spec& s);

/// Replaces union/compatible markers with `any`, yielding the plain type
/// constraint part of a conclusion.
Spec stripMarkers(const Spec& s);

}  // namespace plstatic
