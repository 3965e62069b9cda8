#pragma once

#include "desync/buffers.hpp"
#include "desync/lts.hpp"
#include "desync/semantics.hpp"
#include "desync/spec.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace desync {

/// Alphabets of plant and supervisor plus the derived hiding and blocking sets.
struct LoopContext {
    ActionSet plant_in;
    ActionSet plant_out;
    ActionSet sup_in;
    ActionSet sup_out;
    ActionSet hidden;          // ~a
    ActionSet hatted_hidden;   // ~a^
    ActionSet blocked;         // !a, ?a
    ActionSet hatted_blocked;  // !a^, ?a^

    /// Builds the context over every label used by either side. Throws AmbiguousDirection if a
    /// label is sent (or received) by both plant and supervisor.
    static LoopContext from(const Alphabet& plant, const Alphabet& supervisor);

    LabelSet plant_input_labels() const;
    LabelSet plant_output_labels() const;
};

/// gamma(!a, ?a) = gamma(?a, !a) = ~a.
std::optional<Action> gamma(const Action& x, const Action& y);

/// The M1 communication function: plant/bag handshakes yield hatted (hidden) communications,
/// supervisor/bag handshakes yield plain (visible) ones.
std::optional<Action> gamma_prime(const Action& x, const Action& y, const LoopContext& ctx);

std::shared_ptr<const CommunicationFunction> make_gamma_prime(LoopContext ctx);

/// The synchronous loop with the component LTSs it was built from.
struct SyncLoop {
    Lts plant;
    Lts supervisor;
    Lts loop;
    /// (plant state, supervisor state) of every loop state.
    std::vector<std::pair<StateId, StateId>> components;
    LoopContext context;

    StateId plant_state(StateId q) const { return components.at(q).first; }
    StateId supervisor_state(StateId q) const { return components.at(q).second; }
};

/// encap_B(P || S). Throws NotIoProcess if plant or supervisor is not an input-output process.
SyncLoop build_sync_loop(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);
Lts compose_sync(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);

/// hide_{H^}(encap_{B u B^}((P ||' Bag^{m,n}) ||' S)) with m the capacity of the bag feeding the
/// plant's inputs and n the capacity of the bag collecting its outputs.
Lts compose_async(const SystemSpec& spec, std::size_t m, std::size_t n,
                  std::size_t budget = kDefaultMaxStates);
Lts compose_async(const SyncLoop& sync, std::size_t m, std::size_t n,
                  std::size_t budget = kDefaultMaxStates);

/// The same asynchronous loop written as a process term over generated bag definitions, so it
/// can be explored by generate_lts.
std::pair<SystemSpec, Term> async_loop_term(const SystemSpec& spec, std::size_t m, std::size_t n,
                                            std::size_t budget = kDefaultMaxStates);

/// Supervisor LTS with every send and receive renamed to the communicated action.
Lts rename_supervisor(const SystemSpec& spec, std::size_t budget = kDefaultMaxStates);

} // namespace desync
