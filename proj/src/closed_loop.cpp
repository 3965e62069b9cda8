#include "desync/closed_loop.hpp"

#include "desync/conditions.hpp"
#include "desync/errors.hpp"

#include <deque>
#include <functional>
#include <map>

namespace desync {

namespace {

LabelSet labels_of(const ActionSet& set) {
    LabelSet out;
    for (const Action& a : set) {
        out.insert(a.label);
    }
    return out;
}

class GammaPrime final : public CommunicationFunction {
public:
    explicit GammaPrime(LoopContext ctx) : ctx_(std::move(ctx)) {}

    std::optional<Action> communicate(const Action& x, const Action& y) const override {
        return gamma_prime(x, y, ctx_);
    }
    std::string name() const override { return "par_m1"; }

private:
    LoopContext ctx_;
};

void require_io(const Lts& lts, const std::string& role) {
    IoCheck io = is_io_process(lts);
    if (!io.io) {
        throw NotIoProcess(role + " is not an input-output process: " + io.reason);
    }
}

} // namespace

LoopContext LoopContext::from(const Alphabet& plant, const Alphabet& supervisor) {
    LoopContext ctx;
    ctx.plant_in = plant.inputs();
    ctx.plant_out = plant.outputs();
    ctx.sup_in = supervisor.inputs();
    ctx.sup_out = supervisor.outputs();
    ActionSet shared_out = ctx.plant_out.intersected(ctx.sup_out);
    if (!shared_out.empty()) {
        throw AmbiguousDirection("plant and supervisor both send " + shared_out.str());
    }
    ActionSet shared_in = ctx.plant_in.intersected(ctx.sup_in);
    if (!shared_in.empty()) {
        throw AmbiguousDirection("plant and supervisor both receive " + shared_in.str());
    }
    LabelSet labels;
    for (const ActionSet* set : {&ctx.plant_in, &ctx.plant_out, &ctx.sup_in, &ctx.sup_out}) {
        for (const Action& a : *set) {
            labels.insert(a.label);
        }
    }
    for (const Label& l : labels) {
        ctx.hidden.insert(Action::comm(l.name()));
        ctx.hatted_hidden.insert(Action::comm(l.name(), true));
        ctx.blocked.insert(Action::send(l.name()));
        ctx.blocked.insert(Action::receive(l.name()));
        ctx.hatted_blocked.insert(Action::send(l.name(), true));
        ctx.hatted_blocked.insert(Action::receive(l.name(), true));
    }
    return ctx;
}

LabelSet LoopContext::plant_input_labels() const { return labels_of(plant_in); }
LabelSet LoopContext::plant_output_labels() const { return labels_of(plant_out); }

std::optional<Action> gamma(const Action& x, const Action& y) {
    return standard_gamma()->communicate(x, y);
}

std::optional<Action> gamma_prime(const Action& x, const Action& y, const LoopContext& ctx) {
    if (x.label != y.label || x.is_tau() || y.is_tau() || x.hatted == y.hatted) {
        return std::nullopt;
    }
    const Action& snd = x.is_send() ? x : y;
    const Action& rcv = x.is_send() ? y : x;
    if (!snd.is_send() || !rcv.is_receive()) {
        return std::nullopt;
    }
    const std::string& a = snd.label.name();
    bool plant_side;
    bool sup_side;
    if (!snd.hatted) {
        // !a with ?a^: the sender is a party, the bag receives.
        plant_side = ctx.plant_out.contains(snd);
        sup_side = ctx.sup_out.contains(snd);
    } else {
        // !a^ with ?a: the bag delivers to a party.
        plant_side = ctx.plant_in.contains(rcv);
        sup_side = ctx.sup_in.contains(rcv);
    }
    if (plant_side && sup_side) {
        throw AmbiguousDirection("both plant and supervisor match " + x.str() + " / " + y.str());
    }
    if (plant_side) {
        return Action::comm(a, true);
    }
    if (sup_side) {
        return Action::comm(a);
    }
    return std::nullopt;
}

std::shared_ptr<const CommunicationFunction> make_gamma_prime(LoopContext ctx) {
    return std::make_shared<const GammaPrime>(std::move(ctx));
}

SyncLoop build_sync_loop(const SystemSpec& spec, std::size_t budget) {
    SyncLoop out;
    out.plant = generate_lts(spec, spec.plant_term(), budget);
    out.supervisor = generate_lts(spec, spec.supervisor_term(), budget);
    require_io(out.plant, "plant");
    require_io(out.supervisor, "supervisor");
    out.context = LoopContext::from(alphabet(out.plant), alphabet(out.supervisor));

    const Lts& p = out.plant;
    const Lts& s = out.supervisor;
    std::map<std::pair<StateId, StateId>, StateId> index;
    std::deque<StateId> frontier;
    std::vector<std::string> labels;
    auto intern = [&](std::pair<StateId, StateId> pair) {
        auto [it, fresh] = index.emplace(pair, static_cast<StateId>(out.components.size()));
        if (fresh) {
            if (out.components.size() >= budget) {
                throw BudgetExceeded(budget, out.components.size() + 1);
            }
            out.components.push_back(pair);
            labels.push_back("(" + p.label(pair.first) + " || " + s.label(pair.second) + ")");
            frontier.push_back(it->second);
        }
        return it->second;
    };
    intern({p.initial(), s.initial()});
    std::vector<Transition> ts;
    while (!frontier.empty()) {
        StateId q = frontier.front();
        frontier.pop_front();
        auto [ps, ss] = out.components[q];
        // Both sides only have sends and receives, all of which are blocked unless they
        // communicate.
        for (const Transition& x : p.outgoing(ps)) {
            for (const Transition& y : s.outgoing(ss)) {
                if (auto c = gamma(x.action, y.action)) {
                    ts.push_back({q, *c, intern({x.dst, y.dst})});
                }
            }
        }
    }
    out.loop = Lts(std::move(labels), 0, std::move(ts));
    return out;
}

Lts compose_sync(const SystemSpec& spec, std::size_t budget) {
    return build_sync_loop(spec, budget).loop;
}

Lts compose_async(const SyncLoop& sync, std::size_t m, std::size_t n, std::size_t budget) {
    const LoopContext& ctx = sync.context;
    Lts bags = hat_ports(build_double_bag(ctx.plant_input_labels(), ctx.plant_output_labels(), m, n),
                         PortSide::Bag);
    auto comm = make_gamma_prime(ctx);
    Lts plant_side = parallel(hat_ports(sync.plant, PortSide::Plant), bags, *comm, budget);
    Lts all = parallel(plant_side, hat_ports(sync.supervisor, PortSide::Supervisor), *comm, budget);
    Lts encapsulated = encapsulate(all, [](const Action& a) { return a.is_send() || a.is_receive(); });
    return abstract(encapsulated, ctx.hatted_hidden);
}

Lts compose_async(const SystemSpec& spec, std::size_t m, std::size_t n, std::size_t budget) {
    return compose_async(build_sync_loop(spec, budget), m, n, budget);
}

std::pair<SystemSpec, Term> async_loop_term(const SystemSpec& spec, std::size_t m, std::size_t n,
                                            std::size_t budget) {
    SyncLoop sync = build_sync_loop(spec, budget);
    const LoopContext& ctx = sync.context;
    SystemSpec extended = spec;

    // One definition per bag content, named by its count vector over the sorted labels.
    auto define_bag = [&](const std::string& prefix, const LabelSet& labelset, std::size_t capacity) {
        std::vector<Label> labels(labelset.begin(), labelset.end());
        auto name_of = [&](const std::vector<std::size_t>& counts) {
            std::string name = prefix;
            for (std::size_t c : counts) {
                name += "_" + std::to_string(c);
            }
            return name;
        };
        std::function<void(std::vector<std::size_t>&, std::size_t, std::size_t)> enumerate =
            [&](std::vector<std::size_t>& counts, std::size_t pos, std::size_t used) {
                if (pos == labels.size()) {
                    std::vector<Term> branches;
                    for (std::size_t i = 0; i < labels.size(); ++i) {
                        if (counts[i] > 0) {
                            auto next = counts;
                            --next[i];
                            branches.push_back(term::prefix(Action::send(labels[i].name(), true),
                                                            term::var(name_of(next))));
                        }
                    }
                    if (used < capacity) {
                        for (std::size_t i = 0; i < labels.size(); ++i) {
                            auto next = counts;
                            ++next[i];
                            branches.push_back(term::prefix(Action::receive(labels[i].name(), true),
                                                            term::var(name_of(next))));
                        }
                    }
                    extended.defs[name_of(counts)] = term::sum(branches);
                    return;
                }
                for (std::size_t c = 0; used + c <= capacity; ++c) {
                    counts[pos] = c;
                    enumerate(counts, pos + 1, used + c);
                }
                counts[pos] = 0;
            };
        std::vector<std::size_t> counts(labels.size(), 0);
        enumerate(counts, 0, 0);
        return term::var(name_of(std::vector<std::size_t>(labels.size(), 0)));
    };
    Term in_bag = define_bag("BagIn", ctx.plant_input_labels(), m);
    Term out_bag = define_bag("BagOut", ctx.plant_output_labels(), n);
    auto comm = make_gamma_prime(ctx);
    Term bags = term::parallel(in_bag, out_bag, free_merge());
    Term loop = term::parallel(term::parallel(spec.plant_term(), bags, comm), spec.supervisor_term(), comm);
    Term root = term::abstract(ctx.hatted_hidden,
                               term::encapsulate(ctx.blocked.united(ctx.hatted_blocked), loop));
    return {std::move(extended), std::move(root)};
}

Lts rename_supervisor(const SystemSpec& spec, std::size_t budget) {
    Lts s = generate_lts(spec, spec.supervisor_term(), budget);
    return relabel(s, [](const Action& a) {
        return a.is_send() || a.is_receive() ? a.with_kind(ActionKind::Comm) : a;
    });
}

} // namespace desync
