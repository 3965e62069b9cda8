#pragma once

#include "desync/closed_loop.hpp"
#include "desync/equivalence.hpp"
#include "desync/lts.hpp"
#include "desync/spec.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace desync {

struct IoCheck {
    bool io = true;
    std::string reason;
};

/// No label both sent and received, no communicated action, no tau.
IoCheck is_io_process(const Lts& lts);
IoCheck is_io_process(const SystemSpec& spec, const Term& root, std::size_t budget = kDefaultMaxStates);

/// Deterministic, tau-free, communicated actions only.
bool is_requirement(const Lts& lts);
bool is_requirement(const SystemSpec& spec, const Term& root, std::size_t budget = kDefaultMaxStates);

/// Branching bisimilarity of the synchronous loop and the requirement.
/// Throws MissingRequirement.
EquivalenceResult check_requirement_equation(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);

struct HiddenPartition {
    ActionSet hpi;  // ~a with ?a received by the plant
    ActionSet hpo;  // ~a with !a sent by the plant
};

/// Throws NonEmptinessViolation when a side is empty and the loop has transitions.
HiddenPartition partition_hidden(const SyncLoop& sync);
HiddenPartition partition_hidden(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);

struct WellPosedViolation {
    StateId plant = 0;
    StateId supervisor = 0;
    /// The send with no matching receive on the other side.
    Action action;
    /// Communications leading from the initial pair to the violating pair.
    std::vector<Action> path;
};

struct WellPosedResult {
    bool pass = false;
    /// (plant state, supervisor state), sorted.
    std::vector<std::pair<StateId, StateId>> witness;
    std::optional<WellPosedViolation> violation;
};

WellPosedResult check_well_posed(const Lts& plant, const Lts& supervisor);
WellPosedResult check_well_posed(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);

struct ReorderingViolation {
    StateId state = 0;
    Action action;
    /// Same-direction communications before the action.
    std::vector<Action> path;
};

struct ReorderingResult {
    bool pass = true;
    std::optional<ReorderingViolation> violation;
};

ReorderingResult check_reordering(const SyncLoop& sync, const HiddenPartition& partition);
ReorderingResult check_reordering(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);

/// Same property by explicit enumeration of every same-direction prefix up to `max_length`
/// (defaults to the number of loop states).
ReorderingResult check_reordering_brute_force(const SyncLoop& sync, const HiddenPartition& partition,
                                              std::optional<std::size_t> max_length = std::nullopt);

struct DiamondViolation {
    StateId state = 0;
    Action first;
    Action second;
};

struct DiamondResult {
    bool pass = true;
    std::optional<DiamondViolation> violation;
};

DiamondResult check_diamond(const Lts& loop);

struct GeneralizedDiamondViolation {
    StateId state = 0;
    std::vector<Action> input_trace;
    std::vector<Action> output_trace;
};

struct GeneralizedDiamondResult {
    bool pass = true;
    std::optional<GeneralizedDiamondViolation> violation;
};

/// Traces over hpi and over hpo of length at most k, from every reachable state, commute to a
/// common state.
GeneralizedDiamondResult test_generalized_diamond(const Lts& loop, const HiddenPartition& partition,
                                                  std::size_t k);

struct PrefixSwapViolation {
    StateId state = 0;
    Action action;
    std::vector<Action> prefix;
};

struct PrefixSwapResult {
    bool pass = true;
    std::optional<PrefixSwapViolation> violation;
};

/// From every reachable q: if q --mu.~a--> q2 with mu over hpi, ~a in hpi and the plant at q
/// receives a into p1, then q --~a--> q1 with plant component p1 and q1 --mu--> q2.
/// Prefixes up to length k.
PrefixSwapResult test_input_prefix_swap(const SyncLoop& sync, const HiddenPartition& partition,
                                        std::size_t k);
/// The mirror image over hpo and the supervisor.
PrefixSwapResult test_output_prefix_swap(const SyncLoop& sync, const HiddenPartition& partition,
                                         std::size_t k);

struct Determinism {
    bool plant = false;
    bool supervisor = false;
    bool loop = false;
};

struct PartitionStatus {
    bool pass = true;
    HiddenPartition partition;
    std::string message;
};

struct ConditionReport {
    IoCheck io_plant;
    IoCheck io_supervisor;
    Determinism deterministic;
    PartitionStatus partition;
    WellPosedResult well_posed;
    ReorderingResult reordering;
    DiamondResult diamond;

    bool all_pass() const;
};

struct DirectCheck {
    std::size_t m = 1;
    std::size_t n = 1;
    bool equivalent = false;
};

struct Verdict {
    ConditionReport conditions;
    bool theorem_applies = false;
    std::vector<DirectCheck> direct;
    /// Set only when the theorem applies.
    std::optional<bool> tau_inert;
};

/// Evaluates every condition on the synchronous loop of `sync`.
ConditionReport check_conditions(const SyncLoop& sync);

/// Conditions plus one branching check of the synchronous loop against the asynchronous loop per
/// size. Throws InvariantViolation if the theorem applies but an instance disagrees.
Verdict desync_verdict(const SystemSpec& spec, const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                       std::size_t budget = kDefaultMaxStates);

} // namespace desync
